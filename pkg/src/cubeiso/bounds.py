"""Closed-form thresholds and upper bounds on induced edges of Q_n^r.

All logarithms are base two.  Transcendental quantities are evaluated in
double precision; before any floor or ceiling the value is snapped to the
nearest integer when it lies within ``SNAP`` of it, so exact powers of two
do not fall to the wrong side through representation error.

Every theorem is stated under explicit hypotheses on (m, n, t).  Inputs
outside them raise :class:`~cubeiso.errors.OutOfHypothesis`; malformed
inputs (wrong sign, r > n, ...) raise :class:`~cubeiso.errors.InvalidInput`.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from math import comb
from typing import NamedTuple

import numpy as np

from cubeiso.core import VertexFamily, degree
from cubeiso.errors import InvalidInput, OutOfHypothesis

SNAP = 1e-9
# relative slack for comparisons between floating-point sides of an inequality
REL_TOL = 1e-12

E = math.e

CSV_COLUMNS = ("theorem", "n", "m", "t_or_r", "ell", "ell_prime", "beta", "beta_prime", "bound")


def _snap(x: float) -> float:
    nearest = round(x)
    return float(nearest) if abs(x - nearest) < SNAP else x


def _ceil(x: float) -> int:
    return math.ceil(_snap(x))


def _floor(x: float) -> int:
    return math.floor(_snap(x))


def _leq(lhs: float, rhs: float) -> bool:
    return lhs <= rhs + REL_TOL * max(1.0, abs(rhs))


def floor_log2(m: int) -> int:
    if m < 1:
        raise InvalidInput(f"log of a non-positive size: {m}")
    return m.bit_length() - 1


def _check_m_range(m: int, n: int) -> None:
    if n < 2:
        raise InvalidInput(f"n must be at least 2, got {n}")
    if not 2 <= m <= 1 << n:
        raise InvalidInput(f"m must satisfy 2 <= m <= 2^n, got m={m}, n={n}")


def _check_log_hypothesis(m: int, n: int) -> None:
    # 1 <= log m < n, i.e. 2 <= m < 2^n for integer m
    if n < 1 or m < 2 or m >= 1 << n:
        raise OutOfHypothesis(f"needs 1 <= log2(m) < n, got m={m}, n={n}")


def _min_with_floor(numerator_scale: float, m: int, n: int) -> int:
    lm = math.log2(m)
    floor_term = floor_log2(m)
    denom = _snap(math.log2(n) - math.log2(lm))
    if denom <= 0:
        return floor_term
    return min(_ceil(numerator_scale * lm / denom), floor_term)


def ell(m: int, n: int) -> int:
    """min{ceil(2 log m / (log n - log log m)), floor(log m)}.

    A non-positive denominator makes the first term infinite.
    """
    _check_m_range(m, n)
    return _min_with_floor(2.0, m, n)


def ell_prime(m: int, n: int) -> int:
    """min{ceil(log m / (log n - log log m)), floor(log m)}, defined for 1 <= log m < n."""
    _check_log_hypothesis(m, n)
    return _min_with_floor(1.0, m, n)


def beta(m: int, n: int) -> int:
    """Threshold above which coordinates count as large: floor(sqrt(n / log m) * ell)."""
    _check_m_range(m, n)
    return _floor(math.sqrt(n / math.log2(m)) * ell(m, n))


def beta_prime(m: int, n: int) -> int:
    _check_log_hypothesis(m, n)
    return _floor(n * ell_prime(m, n) / math.log2(m))


@dataclass(frozen=True)
class BoundReport:
    theorem: str
    n: int
    m: int
    t_or_r: int | None
    bound: float
    ell: int | None = None
    ell_prime: int | None = None
    beta: int | None = None
    beta_prime: int | None = None
    notes: str = ""

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def csv_row(self) -> list:
        return [getattr(self, c) if getattr(self, c) is not None else "" for c in CSV_COLUMNS]


def _check_power_hypothesis(m: int, n: int, t: int) -> None:
    if t < 1:
        raise OutOfHypothesis(f"t must be a positive integer, got {t}")
    if n < 1 or not (1 << t) <= m <= 1 << n:
        raise OutOfHypothesis(f"needs 2^t <= m <= 2^n, got m={m}, n={n}, t={t}")


def bound_thm21(m: int, n: int) -> BoundReport:
    """Distance-two bound n * ell' * m."""
    lp = ell_prime(m, n)
    return BoundReport("thm21", n, m, 2, n * lp * m, ell_prime=lp, beta_prime=beta_prime(m, n))


def bound_thm12(m: int, n: int, t: int) -> BoundReport:
    """Even distance r = 2t: (8e/t)^(2t) (n ell)^t m."""
    _check_power_hypothesis(m, n, t)
    el = ell(m, n)
    log_value = 2 * t * math.log(8 * E / t) + t * math.log(n * el) + math.log(m)
    if log_value < 700.0:
        value = (8 * E / t) ** (2 * t) * float(n * el) ** t * m
    else:
        value = math.exp(log_value) if log_value < 709.0 else math.inf
    return BoundReport("thm12", n, m, t, value, ell=el, beta=beta(m, n), notes=f"r={2 * t}")


def bound_thm13(m: int, n: int, t: int) -> BoundReport:
    """Odd distance r = 2t+1: (16e/(2t+1))^(2t+1) (n ell)^t m log m."""
    _check_power_hypothesis(m, n, t)
    el = ell(m, n)
    log_value = (
        (2 * t + 1) * math.log(16 * E / (2 * t + 1))
        + t * math.log(n * el)
        + math.log(m)
        + math.log(math.log2(m))
    )
    if log_value < 700.0:
        value = (16 * E / (2 * t + 1)) ** (2 * t + 1) * float(n * el) ** t * m * math.log2(m)
    else:
        value = math.exp(log_value) if log_value < 709.0 else math.inf
    return BoundReport("thm13", n, m, t, value, ell=el, beta=beta(m, n), notes=f"r={2 * t + 1}")


def bound_kw(m: int, n: int) -> BoundReport:
    """Kleitman-West graph: a nonempty family of k-sets induces at most n * ell' * m edges."""
    if m < 1:
        raise OutOfHypothesis(f"the family must be nonempty, got m={m}")
    if m == 1:
        return BoundReport("kw", n, m, 2, 0, notes="single vertex")
    lp = ell_prime(m, n)
    return BoundReport("kw", n, m, 2, n * lp * m, ell_prime=lp, beta_prime=beta_prime(m, n))


def bound_trivial(m: int, n: int, r: int) -> float:
    """Half the degree sum: m * degree(n, r) / 2."""
    if not 0 <= m <= 1 << n:
        raise InvalidInput(f"m must satisfy 0 <= m <= 2^n, got {m}")
    return m * degree(n, r) / 2


def kkl_exact(n: int, r: int) -> int:
    """Exact optimum for half-sized families: 2^(n-2) * sum_{j=1..r} C(n-1, j)."""
    if n < 2:
        raise InvalidInput(f"n must be at least 2, got {n}")
    if not 1 <= r <= n:
        raise InvalidInput(f"r must satisfy 1 <= r <= n, got {r}")
    return (1 << (n - 2)) * sum(comb(n - 1, j) for j in range(1, r + 1))


def kleitman_threshold(n: int, r: int) -> int:
    """Size of a radius-r/2 Hamming ball, the largest m with D(m, n, r) = C(m, 2) for even r < n."""
    if r < 2 or r % 2:
        raise InvalidInput(f"r must be even and positive, got {r}")
    if r > n:
        raise InvalidInput(f"r must not exceed n, got r={r}, n={n}")
    return sum(comb(n, j) for j in range(r // 2 + 1))


def remark_e1_bound(m: int) -> int:
    """floor(log m) * m, an upper bound on Q_n edges induced by m vertices."""
    if m < 1:
        raise InvalidInput(f"m must be positive, got {m}")
    return floor_log2(m) * m


def norm_bound_check(A: VertexFamily) -> bool:
    """Whether every member's rank is at most n * ell'(|A|, n)."""
    from cubeiso.compression import is_down_set, is_left_compressed, rank_bits

    m, n = len(A), A.dim
    if m < 2:
        raise OutOfHypothesis(f"needs |A| >= 2, got {m}")
    _check_log_hypothesis(m, n)
    if not (is_down_set(A) and is_left_compressed(A)):
        raise OutOfHypothesis("family is not a left-compressed down-set")
    cap = n * ell_prime(m, n)
    return max(rank_bits(x) for x in A.members) <= cap


CASES = ("ell_y_le", "ell_y_gt")


def lemma_ba_bound(b: int, a: int, m: int, n: int, case: str) -> float:
    """Upper bound on the pairs of class (b, a) in one half of the large-element split.

    ``case`` selects pairs with ell_y <= ell_x ("ell_y_le") or ell_y > ell_x
    ("ell_y_gt"), the pair oriented so that |x \\ y| = b >= a = |y \\ x|.
    """
    if case not in CASES:
        raise InvalidInput(f"case must be one of {CASES}, got {case!r}")
    if not b >= a >= 0:
        raise InvalidInput(f"needs b >= a >= 0, got b={b}, a={a}")
    _check_log_hypothesis(m, n)
    k = b + a
    lm = math.log2(m)
    if not 1 <= k <= 2 * lm + SNAP:
        raise OutOfHypothesis(f"needs 1 <= b + a <= 2 log m, got b + a = {k}, log m = {lm:.6g}")
    el = ell(m, n)
    nl = float(n * el)
    lead = (4 * math.sqrt(2) * E / k) ** k
    if case == "ell_y_le":
        if k % 2 == 0:
            return lead * nl ** (k // 2) * m
        return lead * nl ** ((k - 1) // 2) * lm * m
    if a == 0:
        # y is a subset of x, so it cannot have more large elements
        return 0.0
    if k % 2 == 0:
        return lead * nl ** ((k - 2) // 2) * el * beta(m, n) * m
    return lead * nl ** ((k - 1) // 2) * el * m


class Prop31Check(NamedTuple):
    weight_times_beta: bool
    beta_squared: bool
    log_squared: bool
    weight_squared: bool
    floor_log_times_log: bool


def prop31_check(m: int, n: int) -> Prop31Check:
    """The five arithmetic facts relating ell, beta, n and log m.

    The member weight |x| is replaced by its largest possible value in a
    down-set of size m, floor(log m).
    """
    _check_m_range(m, n)
    el = ell(m, n)
    bt = beta(m, n)
    w = floor_log2(m)
    lm = math.log2(m)
    nl = n * el
    return Prop31Check(
        w * bt <= nl,
        bt * bt <= nl,
        _leq(lm * lm, n / (n - 1) * nl),
        w * w <= nl,
        _leq(w * lm, nl),
    )


def finishing_monotonicity_check(m: int, n: int, t: int) -> bool:
    """Whether (8e/k)^k (n ell)^(k/2) grows with k over the even and odd chains.

    Checks, for 2 <= k <= 2t, the step k-1 -> k of the even-distance chain
    and, for 2 <= k <= 2t+1, the same step of the odd-distance chain (which
    carries one fewer half power of n*ell on both sides).  Evaluated in log
    space so large t and n stay finite.
    """
    if t < 1 or not (1 << t) <= m:
        raise OutOfHypothesis(f"needs t >= 1 and 2^t <= m, got m={m}, t={t}")
    _check_m_range(m, n)
    log_nl = math.log(n * ell(m, n))
    ln8e = math.log(8 * E)

    def chain_ok(k: np.ndarray, power_shift: float) -> bool:
        lhs = (k - 1) * (ln8e - np.log(k - 1)) + ((k - 1) / 2 - power_shift) * log_nl
        rhs = k * (ln8e - np.log(k)) + (k / 2 - power_shift) * log_nl
        return bool(np.all(lhs <= rhs + REL_TOL * np.maximum(1.0, np.abs(rhs))))

    even_k = np.arange(2, 2 * t + 1, dtype=float)
    odd_k = np.arange(2, 2 * t + 2, dtype=float)
    return chain_ok(even_k, 0.0) and chain_ok(odd_k, 0.5)


def theorem_bounds(m: int, n: int, r: int) -> dict[str, float]:
    """Every bound from this module that applies to D(m, n, r), keyed by name."""
    out: dict[str, float] = {"trivial": bound_trivial(m, n, r), "pairs": float(comb(m, 2))}
    if m < 1:
        return out
    if r == 1:
        out["e1"] = float(remark_e1_bound(m))
    if r == 2 and 2 <= m < 1 << n:
        out["thm21"] = float(bound_thm21(m, n).bound)
    t = r // 2
    if t >= 1 and n >= 2 and (1 << t) <= m <= 1 << n:
        if r % 2 == 0:
            out["thm12"] = bound_thm12(m, n, t).bound
        else:
            out["thm13"] = bound_thm13(m, n, t).bound
    return out

"""Verification suites behind ``cubeiso verify``.

Each suite sweeps a corpus of families or parameters, checks one claim on
every item and returns a :class:`SuiteResult`.  Randomized corpora draw from
``random.Random(seed)`` so a run is reproducible from its seed.
"""
from __future__ import annotations

import math
import random
from collections.abc import Callable, Iterable, Iterator
from dataclasses import dataclass, field
from itertools import accumulate
from math import comb

import numpy as np

from cubeiso import analysis, bounds, compression, constructions, solver
from cubeiso.core import VertexFamily, check_regularity_identity, distance_profile, edges_within
from cubeiso.errors import InvalidInput

MAX_REPORTED = 20


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: int = 0
    violations: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def check(self, ok: bool, message: str | Callable[[], str]) -> bool:
        self.checked += 1
        if not ok:
            self.failures += 1
            if len(self.violations) < MAX_REPORTED:
                self.violations.append(message() if callable(message) else message)
        return ok

    def to_dict(self) -> dict:
        return {
            "suite": self.name,
            "pass": self.passed,
            "checked": self.checked,
            "failures": self.failures,
            "violations": self.violations,
            "notes": self.notes,
        }


def edges_by_radius(A: VertexFamily) -> list[int]:
    """``out[r]`` is the number of pairs at distance 1..r, for r = 0..n."""
    return list(accumulate(distance_profile(A)))


def subset_edge_table(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Sizes and per-radius edge counts of every subset of {0,1}^n.

    Row ``mask`` describes the family whose members are the set bits of
    ``mask``; column r - 1 holds its Q_n^r edge count.  Counted pair by pair
    over bit masks, independently of the core counters.
    """
    if not 1 <= n <= 4:
        raise InvalidInput(f"all-subset tables are limited to n <= 4, got {n}")
    total = 1 << n
    masks = np.arange(1 << total, dtype=np.uint32)
    sizes = np.bitwise_count(masks).astype(np.int64)
    by_distance = np.zeros((n + 1, masks.size), dtype=np.int64)
    for x in range(total):
        has_x = (masks >> x) & 1
        for y in range(x + 1, total):
            by_distance[(x ^ y).bit_count()] += has_x & (masks >> y) & 1
    return sizes, np.cumsum(by_distance, axis=0)[1:].T


def _family(n: int, mask: int) -> VertexFamily:
    return VertexFamily._trusted(n, [x for x in range(1 << n) if mask >> x & 1])


def _random_family(rng: random.Random, n: int, m: int) -> VertexFamily:
    return VertexFamily._trusted(n, rng.sample(range(1 << n), m))


def random_corpus(seed: int, count: int, n_max: int = 16, m_cap: int = 300) -> Iterator[VertexFamily]:
    """Random families with 2 <= |A| < 2^n, sizes spread log-uniformly."""
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(2, n_max)
        top = min((1 << n) - 1, m_cap)
        m = min(top, max(2, int(2 ** rng.uniform(1, math.log2(top + 1)))))
        yield _random_family(rng, n, m)


def constructed_corpus(n_max: int = 12) -> Iterator[VertexFamily]:
    for n in range(2, n_max + 1):
        for k in range(n + 1):
            if comb(n, 0) + (comb(n, 1) if k else 0) <= 4096:
                if sum(comb(n, j) for j in range(k + 1)) <= 2048:
                    yield constructions.hamming_ball(n, k)
                    yield constructions.odd_tight(n, k)
        for d in range(min(n, 11) + 1):
            yield constructions.subcube(n, d)
        for m in (3, 5, 6, 7, 11, 100, 1000):
            if m < 1 << n:
                yield constructions.initial_segment(n, m)


def _theorem_checks(result: SuiteResult, n: int, m: int, radius_edges: Callable[[int], int], label: str) -> None:
    """Compare measured edges with every theorem bound whose hypotheses hold."""
    if m < 2:
        return
    if n >= 2 and m < 1 << n:
        bound = bounds.bound_thm21(m, n).bound
        got = radius_edges(2)
        result.check(got <= bound, lambda: f"distance-two bound: {label} has {got} > {bound}")
    for t in range(1, n // 2 + 1):
        if (1 << t) > m:
            break
        bound = bounds.bound_thm12(m, n, t).bound
        got = radius_edges(2 * t)
        result.check(got <= bound, lambda: f"even bound t={t}: {label} has {got} > {bound}")
        if 2 * t + 1 <= n:
            bound = bounds.bound_thm13(m, n, t).bound
            got = radius_edges(2 * t + 1)
            result.check(got <= bound, lambda: f"odd bound t={t}: {label} has {got} > {bound}")


def suite_regularity(seed: int = 0, n_all: int = 3, random_count: int = 300, **_) -> SuiteResult:
    """2 e(A) + |boundary(A)| = degree * |A| on all small subsets and random families."""
    result = SuiteResult("regularity-identity")
    for n in range(1, n_all + 1):
        for mask in range(1 << (1 << n)):
            A = _family(n, mask)
            for r in range(1, n + 1):
                result.check(check_regularity_identity(A, r), lambda: f"identity fails: n={n} r={r} {A.to_json()}")
    rng = random.Random(seed)
    for _ in range(random_count):
        n = rng.randint(2, 10)
        A = _random_family(rng, n, rng.randint(0, min(1 << n, 200)))
        r = rng.randint(1, n)
        result.check(check_regularity_identity(A, r), lambda: f"identity fails: r={r} {A.to_json()}")
    return result


def suite_compression(seed: int = 0, n_all: int = 3, random_count: int = 200, **_) -> SuiteResult:
    """normalize ends in a left-compressed down-set of the same size without losing edges.

    Every recorded step must lower the rank sum (which bounds the number of
    steps) and, checked per step, must not lower the edge count.
    """
    result = SuiteResult("compression")

    def one(A: VertexFamily, r: int) -> None:
        out, trace = compression.normalize(A, r)
        tag = lambda: f"r={r} {A.to_json()}"  # noqa: E731
        result.check(len(out) == len(A), lambda: f"size changed: {tag()}")
        result.check(compression.is_down_set(out) and compression.is_left_compressed(out), lambda: f"not a fixpoint: {tag()}")
        result.check(edges_within(out, r) >= edges_within(A, r), lambda: f"edges decreased: {tag()}")
        result.check(len(trace) <= compression.rank_sum(A), lambda: f"too many steps: {tag()}")
        for step in trace.steps:
            result.check(step.rank_sum_after < step.rank_sum_before, lambda: f"rank sum did not drop at {step.operator}: {tag()}")
            result.check(step.edges_after >= step.edges_before, lambda: f"step {step.operator} lost edges: {tag()}")

    for n in range(1, n_all + 1):
        for mask in range(1 << (1 << n)):
            A = _family(n, mask)
            for r in range(1, n + 1):
                one(A, r)
    rng = random.Random(seed)
    for _ in range(random_count):
        n = rng.randint(n_all + 1, 7)
        A = _random_family(rng, n, rng.randint(1, min(1 << n, 40)))
        one(A, rng.randint(1, n))
    return result


def suite_lemma22(n_max: int = 5, **_) -> SuiteResult:
    """Distance-two edges of a left-compressed down-set equal its rank sum."""
    result = SuiteResult("lemma22")
    for n in range(1, n_max + 1):
        for A in solver.enumerate_all_lcds(n):
            got, want = edges_within(A, min(2, n)), compression.rank_sum(A)
            result.check(got == want, lambda: f"rank identity: edges {got} != rank sum {want} for {A.to_json()}")
    return result


def suite_prop15(n_max: int = 5, **_) -> SuiteResult:
    """Members of a down-set A have weight at most floor(log |A|)."""
    result = SuiteResult("prop15")
    for n in range(1, n_max + 1):
        for A in solver.enumerate_down_sets(n):
            if not len(A):
                continue
            heaviest = max(x.bit_count() for x in A.members)
            cap = bounds.floor_log2(len(A))
            result.check(heaviest <= cap, lambda: f"weight {heaviest} > {cap} in {A.to_json()}")
    return result


def suite_lemma32(n_max: int = 6, **_) -> SuiteResult:
    """Members of a left-compressed down-set have at most ell coordinates above beta."""
    result = SuiteResult("lemma32")
    for n in range(2, n_max + 1):
        for A in solver.enumerate_all_lcds(n):
            m = len(A)
            if m < 2:
                continue
            b, cap = bounds.beta(m, n), bounds.ell(m, n)
            most = max((x >> b).bit_count() for x in A.members)
            result.check(most <= cap, lambda: f"{most} large coordinates > ell={cap} (beta={b}) in {A.to_json()}")
    return result


def prop31_grid(n_max: int = 4096, per_n: int = 50) -> Iterator[tuple[int, int]]:
    """(m, n) pairs: n at powers of two and their neighbours, m log-spaced in [2, 2^n]."""
    ns = sorted({v for k in range(1, n_max.bit_length()) for v in (2**k - 1, 2**k, 2**k + 1) if 2 <= v <= n_max})
    for n in ns:
        ms = {2, 3, (1 << n) - 1, 1 << n}
        for j in np.linspace(1.0, float(n), per_n):
            whole = int(j)
            frac = round(2 ** (j - whole) * (1 << 20))
            ms.add((frac << whole) >> 20)
        for m in sorted(ms):
            if 2 <= m <= 1 << n:
                yield m, n


def suite_prop31(n_max: int = 4096, per_n: int = 50, **_) -> SuiteResult:
    """The five arithmetic facts and the monotonicity of the finishing chains."""
    result = SuiteResult("prop31")
    for m, n in prop31_grid(n_max, per_n):
        facts = bounds.prop31_check(m, n)
        for name, ok in facts._asdict().items():
            result.check(ok, lambda: f"{name} fails at n={n}, log2 m={math.log2(m):.4f}")
        # the chains for smaller t are prefixes of the chain for the largest t
        t_max = bounds.floor_log2(m)
        result.check(
            bounds.finishing_monotonicity_check(m, n, t_max),
            lambda: f"finishing chain not increasing at n={n}, log2 m={math.log2(m):.4f}",
        )
    return result


def _all_subset_maxima(n: int) -> dict[tuple[int, int], int]:
    sizes, table = subset_edge_table(n)
    out = {}
    for r in range(1, n + 1):
        best = np.zeros((1 << n) + 1, dtype=np.int64)
        np.maximum.at(best, sizes, table[:, r - 1])
        for m in range((1 << n) + 1):
            out[(m, r)] = int(best[m])
    return out


def suite_bounds_validity(
    seed: int = 0,
    n_all: int = 4,
    n_lcds: int = 6,
    random_count: int = 10_000,
    n_random: int = 16,
    n_classes: int = 5,
    **_,
) -> SuiteResult:
    """Every theorem bound dominates measured edge counts on all corpora."""
    result = SuiteResult("bounds-validity")

    # (a) all subsets; bounds depend only on (m, n), so the per-size maximum suffices
    for n in range(2, n_all + 1):
        best = _all_subset_maxima(n)
        for m in range(2, (1 << n) + 1):
            _theorem_checks(result, n, m, lambda r: best[(m, r)], f"a size-{m} subset of Q_{n}")

    # (b) left-compressed down-sets, with the per-class split for the small ones
    for n in range(2, n_lcds + 1):
        for A in solver.enumerate_all_lcds(n):
            cum = edges_by_radius(A)
            _theorem_checks(result, n, len(A), cum.__getitem__, A.to_json())
            if n <= n_classes:
                _class_checks(result, A)

    # (c) random and constructed families
    families: Iterable[VertexFamily] = random_corpus(seed, random_count, n_random)
    for A in families:
        cum = edges_by_radius(A)
        _theorem_checks(result, A.dim, len(A), cum.__getitem__, A.to_json())
    for A in constructed_corpus():
        cum = edges_by_radius(A)
        _theorem_checks(result, A.dim, len(A), cum.__getitem__, A.to_json())

    # Kleitman-West graph: families inside one layer
    rng = random.Random(seed + 1)
    layer_families = []
    for n in range(2, 11):
        for k in range(1, n):
            layer_families.append(constructions.kw_layer(n, k))
            for s in range(1, k + 1):
                layer_families.append(constructions.kw_star(n, k, s))
            layer = constructions.kw_layer(n, k).members
            for _ in range(3):
                size = rng.randint(1, len(layer))
                layer_families.append(VertexFamily._trusted(n, rng.sample(layer, size)))
    for A in layer_families:
        m, n = len(A), A.dim
        if m >= 1 << n:
            continue
        bound = bounds.bound_kw(m, n).bound
        got = edges_within(A, 2)
        result.check(got <= bound, lambda: f"layer bound: {got} > {bound} for {A.to_json()}")
    return result


def _class_checks(result: SuiteResult, A: VertexFamily) -> None:
    m, n = len(A), A.dim
    if m < 2 or m >= 1 << n:
        return
    b_thr = bounds.beta(m, n)
    split = compression.split_edge_decomposition(A, n, b_thr)
    limit = 2 * math.log2(m)
    for (b, a), (le, gt) in split.items():
        if b + a > limit + bounds.SNAP:
            continue
        for case, got in (("ell_y_le", le), ("ell_y_gt", gt)):
            bound = bounds.lemma_ba_bound(b, a, m, n, case)
            result.check(got <= bound, lambda: f"class ({b},{a}) {case}: {got} > {bound} for {A.to_json()}")


def suite_kkl(n_max: int = 12, solver_n: tuple[int, ...] = (3, 4, 5), workers: int = 1, **_) -> SuiteResult:
    """The half-space value against a half cube, and against the solver at small n."""
    result = SuiteResult("kkl")
    for n in range(2, n_max + 1):
        half = constructions.subcube(n, n - 1)
        for r in range(1, n + 1):
            want, got = bounds.kkl_exact(n, r), edges_within(half, r)
            result.check(want == got, lambda: f"half cube n={n} r={r}: {got} != {want}")
    for n in solver_n:
        for r in range(1, n + 1):
            want = bounds.kkl_exact(n, r)
            got = solver.solve_compressed(n, 1 << (n - 1), r, workers=workers).value
            result.check(want == got, lambda: f"solver n={n} r={r}: {got} != {want}")
    return result


def kleitman_cases(n_max: int = 6, r_max: int = 4, include_full_diameter: bool = False) -> Iterator[tuple[int, int]]:
    for r in range(2, r_max + 1, 2):
        for n in range(r, n_max + 1):
            if n > r or include_full_diameter:
                yield n, r


def suite_kleitman(
    n_max: int = 6, r_max: int = 4, include_full_diameter: bool = False, workers: int = 1, **_
) -> SuiteResult:
    """D(m, n, r) = C(m, 2) exactly up to the threshold, for even r.

    The diametric theorem behind the threshold needs r < n: at r = n every
    pair of the cube is joined, so the equality persists to m = 2^n.  Those
    cases are skipped unless ``include_full_diameter`` is set.
    """
    result = SuiteResult("kleitman-threshold")
    if not include_full_diameter:
        result.notes.append("cases with r = n skipped: the whole cube has diameter n")
    for n, r in kleitman_cases(n_max, r_max, include_full_diameter):
        threshold = bounds.kleitman_threshold(n, r)
        ball = constructions.hamming_ball(n, r // 2).members
        for m in range(threshold + 2):
            if m > 1 << n:
                break
            value = solver.solve(n, m, r, workers=workers).value
            if m <= threshold:
                result.check(value == comb(m, 2), lambda: f"D({m},{n},{r}) = {value} != C({m},2)")
                sub = VertexFamily._trusted(n, ball[:m])
                result.check(edges_within(sub, r) == comb(m, 2), lambda: f"ball subset of size {m} is not a clique (n={n}, r={r})")
            else:
                result.check(value < comb(m, 2), lambda: f"D({m},{n},{r}) = {value} reaches C({m},2) above the threshold {threshold}")
    return result


def suite_harper(n_max: int = 4, **_) -> SuiteResult:
    result = SuiteResult("harper-small")
    for n in range(2, n_max + 1):
        result.check(solver.verify_harper_small(n), f"initial segments are not boundary-optimal at n={n}")
    return result


def suite_appendix(seed: int = 0, samples: int = 2000, **_) -> SuiteResult:
    """Both grid checks, plus the interpolation step on values taken from real families."""
    result = SuiteResult("appendix")
    for report in (analysis.verify_bb1(), analysis.verify_bb2()):
        result.check(report.passed, lambda: f"{report.proposition}: worst margin {report.worst_margin} at {report.worst_point}")
        result.notes.append(f"{report.proposition}: {report.points_checked} points, worst margin {report.worst_margin:.3e}")
    checked = 0
    for n in range(3, 7):
        for A in solver.enumerate_all_lcds(n):
            m = len(A)
            if m < 2 or m >= 1 << n:
                continue
            lm = math.log2(m)
            lp, bp = bounds.ell_prime(m, n), bounds.beta_prime(m, n)
            for x in A.members:
                small = (x & ((1 << bp) - 1)).bit_count() if bp < n else x.bit_count()
                big = x.bit_count() - small
                share = small / lm
                K = bp + big - small
                exponent = (1 - share) * lp
                if K <= 0 or exponent <= 0:
                    continue
                checked += 1
                result.check(
                    analysis.binomial_step_holds(K, exponent),
                    lambda: f"interpolation step fails at K={K}, exponent={exponent} from {A.to_json()}",
                )
                if checked >= samples:
                    return result
    return result


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "regularity-identity": suite_regularity,
    "compression": suite_compression,
    "lemma22": suite_lemma22,
    "prop15": suite_prop15,
    "lemma32": suite_lemma32,
    "prop31": suite_prop31,
    "bounds-validity": suite_bounds_validity,
    "kkl": suite_kkl,
    "kleitman-threshold": suite_kleitman,
    "harper-small": suite_harper,
    "appendix": suite_appendix,
}


def run_suite(name: str, seed: int = 0, workers: int = 1) -> SuiteResult:
    if name not in SUITES:
        raise InvalidInput(f"unknown suite {name!r}; expected one of {', '.join(SUITES)} or all")
    return SUITES[name](seed=seed, workers=workers)

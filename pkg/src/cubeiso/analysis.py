"""Grid verification of two analytic inequalities used to bound binomial sums.

The first concerns the piecewise function

    f(x) = 1 + x - exp(x/e)                              on [0, e)
    f(x) = (x/m)^m + (x/(m+1))^(m+1) - exp(x/e)          on [m e, (m+1) e), m >= 1

and asserts three lower bounds (``verify_bb1``).  The second says that for
m >= 1, lambda in [0, 1) and K > 0

    (K/m)^m + (K/(m+1))^(m+1) >= (K/(m+lambda))^(m+lambda)

and for m = 0, 1 + K >= (K/lambda)^lambda (``verify_bb2``).

Margins are relative: (lhs - rhs) / max(1, |rhs|), so the slack means the
same thing for values near 1 and near 10^7.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from cubeiso.errors import InvalidInput

E = math.e
# right-open intervals are probed this close to their excluded endpoint
_EDGE = 1e-12


def f_eval(x: float) -> float:
    if x < 0 or math.isnan(x):
        raise InvalidInput(f"f is defined for x >= 0, got {x}")
    if x < E:
        return 1 + x - math.exp(x / E)
    m = int(x // E)
    return (x / m) ** m + (x / (m + 1)) ** (m + 1) - math.exp(x / E)


def _f_piece(x: np.ndarray, m: int) -> np.ndarray:
    if m == 0:
        return 1 + x - np.exp(x / E)
    return (x / m) ** m + (x / (m + 1)) ** (m + 1) - np.exp(x / E)


@dataclass(frozen=True)
class GridSpec:
    K_max: float
    K_step: float
    m_max: int
    lambda_step: float
    slack: float = 1e-9

    def __post_init__(self) -> None:
        if not self.K_max > 0 or not self.K_step > 0:
            raise InvalidInput("K_max and K_step must be positive")
        if self.K_max / self.K_step < 2:
            raise InvalidInput("K_step must split (0, K_max] into at least two points")
        if not 0 < self.lambda_step < 1 or 1 / self.lambda_step < 2:
            raise InvalidInput("lambda_step must lie in (0, 1/2]")
        if self.m_max < 0:
            raise InvalidInput("m_max must be nonnegative")
        if not 0 <= self.slack <= 1e-6:
            raise InvalidInput("slack must lie in [0, 1e-6]")

    @classmethod
    def default_bb1(cls) -> GridSpec:
        # K_step is the x resolution; K_max is unused, the pieces fix the domain
        return cls(K_max=(8 + 1) * E, K_step=1e-3, m_max=8, lambda_step=1 / 64)

    @classmethod
    def default_bb2(cls) -> GridSpec:
        return cls(K_max=50.0, K_step=1 / 16, m_max=8, lambda_step=1 / 64)


@dataclass
class GridReport:
    proposition: str
    points_checked: int = 0
    worst_margin: float = math.inf
    worst_point: dict = field(default_factory=dict)
    passed: bool = True
    parts: dict[str, dict] = field(default_factory=dict)

    def absorb(self, part: str, margins: np.ndarray, points: dict[str, np.ndarray], slack: float) -> None:
        """Fold one part's margins in; ``points`` holds the coordinates of each margin."""
        if margins.size == 0:
            return
        k = np.unravel_index(int(np.argmin(margins)), margins.shape)
        worst = float(margins[k])
        where = {name: float(np.broadcast_to(v, margins.shape)[k]) for name, v in points.items()}
        ok = worst >= -slack
        self.parts[part] = {"points_checked": int(margins.size), "worst_margin": worst, "worst_point": where, "pass": ok}
        self.points_checked += int(margins.size)
        self.passed = self.passed and ok
        if worst < self.worst_margin:
            self.worst_margin = worst
            self.worst_point = {"part": part, **where}

    def to_dict(self) -> dict:
        out = asdict(self)
        out["pass"] = out.pop("passed")
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _relative_margin(lhs: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    return (lhs - rhs) / np.maximum(1.0, np.abs(rhs))


def _interval(lo: float, hi: float, step: float) -> np.ndarray:
    """Grid on [lo, hi) plus a probe just below hi."""
    count = int(math.ceil((hi - lo) / step))
    xs = lo + step * np.arange(count)
    xs = xs[xs < hi]
    return np.append(xs, hi * (1 - _EDGE))


def verify_bb1(grid: GridSpec | None = None) -> GridReport:
    """Check the three lower bounds on f at grid resolution ``K_step``."""
    grid = grid or GridSpec.default_bb1()
    report = GridReport("f-lower-bounds")

    x = _interval(0.0, E, grid.K_step)
    report.absorb("part1", _relative_margin(_f_piece(x, 0), x / E), {"x": x}, grid.slack)

    x = _interval(E, 2 * E, grid.K_step)
    line = E * E / 4 + (2 - E / 4) * (x - E)
    report.absorb("part2", _relative_margin(_f_piece(x, 1), line), {"x": x}, grid.slack)

    for m in range(2, grid.m_max + 1):
        x = _interval(m * E, (m + 1) * E, grid.K_step)
        low = np.minimum((x / m) ** m, (x / (m + 1)) ** (m + 1))
        # exp(x/e) - low <= low / m
        lhs = low + low / m
        report.absorb(f"part3_m{m}", _relative_margin(lhs, np.exp(x / E)), {"x": x, "m": np.float64(m)}, grid.slack)
    return report


def _power_over_self(K: np.ndarray, s: np.ndarray) -> np.ndarray:
    """(K/s)^s with the value 1 at s = 0."""
    safe = np.where(s > 0, s, 1.0)
    return np.where(s > 0, (K / safe) ** safe, 1.0)


def verify_bb2(grid: GridSpec | None = None) -> GridReport:
    """Check the interpolation inequality on the (m, lambda, K) grid."""
    grid = grid or GridSpec.default_bb2()
    report = GridReport("binomial-interpolation")
    K = grid.K_step * np.arange(1, int(math.floor(grid.K_max / grid.K_step + 1e-9)) + 1)
    lam = grid.lambda_step * np.arange(int(math.ceil(1 / grid.lambda_step - 1e-9)))
    lam = np.append(lam[lam < 1], 1 - _EDGE)
    KK, LL = np.meshgrid(K, lam, indexing="ij")

    report.absorb("m0", _relative_margin(1 + KK, _power_over_self(KK, LL)), {"K": KK, "lambda": LL, "m": np.float64(0)}, grid.slack)
    for m in range(1, grid.m_max + 1):
        lhs = (KK / m) ** m + (KK / (m + 1)) ** (m + 1)
        rhs = _power_over_self(KK, m + LL)
        report.absorb(f"m{m}", _relative_margin(lhs, rhs), {"K": KK, "lambda": LL, "m": np.float64(m)}, grid.slack)
    return report


def binomial_step_holds(K: float, exponent: float, slack: float = 1e-9) -> bool:
    """Whether (K/c)^c + (K/(c-1))^(c-1) >= (K/s)^s for s = ``exponent``, c = ceil(s).

    This is the interpolation inequality at m = c - 1, lambda = s - m, in
    the shape it takes when bounding a partial binomial sum from below.
    """
    if K <= 0 or exponent <= 0:
        raise InvalidInput("K and the exponent must be positive")
    c = math.ceil(exponent - 1e-12)
    lhs = (K / c) ** c + ((K / (c - 1)) ** (c - 1) if c > 1 else 1.0)
    rhs = (K / exponent) ** exponent
    return (lhs - rhs) / max(1.0, abs(rhs)) >= -slack

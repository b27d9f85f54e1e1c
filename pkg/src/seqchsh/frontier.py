"""Shared-randomness optimization: equal points, violation intervals, the
four-segment optimal frontier, and double-violation region maps.

All sweeps run on the closed-form deterministic values; the fully numeric
channel path is kept as an independent check (see tests and the verify
suite).  Optimization is deterministic: a coarse grid locates the basin,
golden-section refines each coordinate, ties break towards smaller angles.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np

from .chsh import MixedStrategy
from .strategies import StrategyCase, optimal_chi

COARSE_STEP = math.radians(0.1)
GOLDEN_TOL = 1e-10
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def deterministic_pair(lam: int, phi_state: float, setting):
    """(s_ab, s_ac) of one deterministic case at an arbitrary setting.

    Unlike chsh.closed_form, the identity case here keeps its receiver
    angle free; the two agree when the angle is optimal_chi(phi_state).
    Accepts scalar or array settings.
    """
    s2 = math.sin(2.0 * phi_state)
    if lam == 1:
        return (
            2.0 * np.cos(setting) * s2 + 2.0 * np.sin(setting),
            2.0 * np.sin(setting) + 0.0 * np.asarray(setting),
        )
    if lam == 2:
        return (
            2.0 * math.cos(2.0 * phi_state) + 0.0 * np.asarray(setting),
            2.0 * np.sin(setting) + 2.0 * np.cos(setting) * s2,
        )
    if lam == 3:
        return (
            2.0 * np.sin(np.asarray(setting) + 2.0 * phi_state),
            np.sin(setting) + 2.0 * np.cos(setting) * s2,
        )
    raise ValueError(f"lam must be 1, 2 or 3, got {lam}")


def make_case(lam: int, setting: float) -> StrategyCase:
    """StrategyCase with the setting stored in the field the case reads."""
    if lam == 1:
        return StrategyCase(1, phi_meas=setting)
    if lam == 2:
        return StrategyCase(2, chi=setting)
    return StrategyCase(3, theta=setting)


def _best_mix(xi: float, yi: float, xj: float, yj: float) -> tuple[float, float, bool]:
    """max over p in [0,1] of min(S_AB(p), S_AC(p)) for a two-point chord.

    S_AB and S_AC are linear in p, so the maximum of their lower envelope
    sits either at an endpoint or at the p where they cross.  Returns
    (value, p, crossed) with p the weight of the (xi, yi) point; crossed
    is True when the optimum equalizes both coordinates.
    """
    candidates = []
    d0 = xj - yj
    d1 = xi - yi
    if d0 != d1:
        p = d0 / (d0 - d1)
        if -1e-12 <= p <= 1.0 + 1e-12:
            p = min(max(p, 0.0), 1.0)
            candidates.append((p * xi + (1.0 - p) * xj, p, True))
    candidates.append((min(xj, yj), 0.0, abs(d0) <= 1e-12))
    candidates.append((min(xi, yi), 1.0, abs(d1) <= 1e-12))
    # prefer an equalizing crossing on ties, then the smaller p
    return max(candidates, key=lambda c: (c[0], c[2], -c[1]))


@dataclass(frozen=True)
class EqualPointResult:
    """Optimal equal-violation mix of two deterministic cases."""

    pair: tuple[int, int]
    phi_meas: float | None
    chi: float | None
    theta: float | None
    p_star: float        # probability of the first case of the pair
    s_star: float        # max over settings and p of min(S_AB, S_AC)
    equalized: bool      # True when S_AB(p_star) = S_AC(p_star) = s_star

    def setting_of(self, lam: int) -> float:
        val = {1: self.phi_meas, 2: self.chi, 3: self.theta}[lam]
        if val is None:
            raise ValueError(f"case {lam} is not part of pair {self.pair}")
        return val

    def strategy(self) -> MixedStrategy:
        i, j = self.pair
        return MixedStrategy(
            (
                (make_case(i, self.setting_of(i)), self.p_star),
                (make_case(j, self.setting_of(j)), 1.0 - self.p_star),
            )
        )


def _golden_max(f, lo: float, hi: float, tol: float = GOLDEN_TOL) -> float:
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:  # ties shrink towards the smaller angle
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    # an optimum at the bracket edge should land exactly on it
    candidates = [(f(x), -x) for x in (lo, 0.5 * (a + b), hi)]
    return -max(candidates)[1]


def equal_point(
    phi_state: float,
    pair: tuple[int, int],
    coarse_step: float = COARSE_STEP,
) -> EqualPointResult:
    """Maximize the smaller of the two sequential CHSH values over the free
    settings of both cases and the shared-randomness probability."""
    lam_i, lam_j = pair
    if lam_i == lam_j:
        raise ValueError("pair must combine two distinct cases")

    grid = np.arange(0.0, math.pi / 2 + coarse_step / 2, coarse_step)
    xi, yi = deterministic_pair(lam_i, phi_state, grid)
    xj, yj = deterministic_pair(lam_j, phi_state, grid)

    # vectorized candidate values over the (setting_i, setting_j) grid
    d1 = (xi - yi)[:, None]
    d0 = (xj - yj)[None, :]
    den = d0 - d1
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(np.abs(den) > 1e-15, d0 / den, np.nan)
    crossing = p * xi[:, None] + (1.0 - p) * xj[None, :]
    crossing = np.where((p >= -1e-12) & (p <= 1.0 + 1e-12), crossing, -np.inf)
    value = np.maximum(crossing, np.maximum(np.minimum(xj, yj)[None, :], np.minimum(xi, yi)[:, None]))
    ii, jj = np.unravel_index(int(np.nanargmax(value)), value.shape)
    a_i, a_j = float(grid[ii]), float(grid[jj])

    def objective(ai: float, aj: float) -> float:
        pxi, pyi = deterministic_pair(lam_i, phi_state, ai)
        pxj, pyj = deterministic_pair(lam_j, phi_state, aj)
        return _best_mix(float(pxi), float(pyi), float(pxj), float(pyj))[0]

    best = objective(a_i, a_j)
    for _ in range(8):
        lo_i = max(0.0, a_i - coarse_step)
        hi_i = min(math.pi / 2, a_i + coarse_step)
        a_i = _golden_max(lambda a: objective(a, a_j), lo_i, hi_i)
        lo_j = max(0.0, a_j - coarse_step)
        hi_j = min(math.pi / 2, a_j + coarse_step)
        a_j = _golden_max(lambda a: objective(a_i, a), lo_j, hi_j)
        new = objective(a_i, a_j)
        if new - best < 1e-13:
            best = max(best, new)
            break
        best = new

    pxi, pyi = deterministic_pair(lam_i, phi_state, a_i)
    pxj, pyj = deterministic_pair(lam_j, phi_state, a_j)
    s_star, p_star, equalized = _best_mix(float(pxi), float(pyi), float(pxj), float(pyj))

    settings: dict[int, float | None] = {1: None, 2: None, 3: None}
    settings[lam_i] = a_i
    settings[lam_j] = a_j
    return EqualPointResult(
        pair=(lam_i, lam_j),
        phi_meas=settings[1],
        chi=settings[2],
        theta=settings[3],
        p_star=p_star,
        s_star=s_star,
        equalized=equalized,
    )


def _above_two_interval(v0: float, v1: float) -> tuple[float, float] | None:
    """p-interval of [0,1] where the line from v0 (p=0) to v1 (p=1) is >= 2."""
    slope = v1 - v0
    if slope == 0.0:
        return (0.0, 1.0) if v0 >= 2.0 else None
    r = (2.0 - v0) / slope
    lo, hi = (max(0.0, r), 1.0) if slope > 0 else (0.0, min(1.0, r))
    return (lo, hi) if lo <= hi else None


def violation_interval(
    phi_state: float,
    pair: tuple[int, int],
    settings: tuple[float, float],
) -> tuple[float, float] | None:
    """Closed p-interval with both mixed CHSH values above the classical
    bound, or None when no double violation exists at these settings."""
    lam_i, lam_j = pair
    xi, yi = deterministic_pair(lam_i, phi_state, settings[0])
    xj, yj = deterministic_pair(lam_j, phi_state, settings[1])
    ab = _above_two_interval(float(xj), float(xi))
    ac = _above_two_interval(float(yj), float(yi))
    if ab is None or ac is None:
        return None
    lo, hi = max(ab[0], ac[0]), min(ab[1], ac[1])
    if lo > hi:
        return None
    # a touching point (both values exactly 2) is not a violation
    mid = 0.5 * (lo + hi)
    ab_mid = float(xj) + mid * (float(xi) - float(xj))
    ac_mid = float(yj) + mid * (float(yi) - float(yj))
    if min(ab_mid, ac_mid) <= 2.0:
        return None
    return lo, hi


@dataclass(frozen=True)
class FrontierPoint:
    """One frontier sample with the exact strategy mix that realizes it."""

    s_ab: float
    s_ac: float
    segment: str
    case_a: StrategyCase
    case_b: StrategyCase
    weight_a: float

    def strategy(self) -> MixedStrategy:
        if self.weight_a >= 1.0 or self.case_a.lam == self.case_b.lam:
            return MixedStrategy(((self.case_a, 1.0),))
        if self.weight_a <= 0.0:
            return MixedStrategy(((self.case_b, 1.0),))
        return MixedStrategy(((self.case_a, self.weight_a), (self.case_b, 1.0 - self.weight_a)))


@dataclass(frozen=True)
class FrontierCurve:
    """Upper boundary of achievable (s_ab, s_ac) pairs."""

    phi_state: float
    points: tuple[FrontierPoint, ...]
    vertex_x: np.ndarray = field(repr=False)
    vertex_y: np.ndarray = field(repr=False)

    @property
    def domain(self) -> tuple[float, float]:
        return float(self.vertex_x[0]), float(self.vertex_x[-1])

    def value_at(self, s_ab: float) -> float:
        lo, hi = self.domain
        if not (lo - 1e-9 <= s_ab <= hi + 1e-9):
            raise ValueError(f"s_ab={s_ab} outside frontier domain [{lo}, {hi}]")
        x = min(max(s_ab, lo), hi)
        return float(np.interp(x, self.vertex_x, self.vertex_y))

    def segment_order(self) -> list[str]:
        order: list[str] = []
        for pt in self.points:
            if not order or order[-1] != pt.segment:
                order.append(pt.segment)
        return order


def _upper_hull(order: np.ndarray, x: np.ndarray, y: np.ndarray) -> list[int]:
    """Indices of the upper convex hull, left to right (monotone chain)."""
    hull: list[int] = []
    last_x = None
    for k in order:
        if last_x is not None and x[k] == last_x:
            continue  # duplicate column: the first (highest y) one wins
        last_x = x[k]
        while len(hull) >= 2:
            o, a = hull[-2], hull[-1]
            cross = (x[a] - x[o]) * (y[k] - y[o]) - (y[a] - y[o]) * (x[k] - x[o])
            if cross >= 0.0:  # left turn or collinear: middle point is not on the upper hull
                hull.pop()
            else:
                break
        hull.append(int(k))
    return hull


def _bisect_setting(lam: int, phi_state: float, s_lo: float, s_hi: float, target: float) -> float:
    g_lo = float(deterministic_pair(lam, phi_state, s_lo)[0]) - target
    for _ in range(100):
        mid = 0.5 * (s_lo + s_hi)
        g_mid = float(deterministic_pair(lam, phi_state, mid)[0]) - target
        if g_lo * g_mid <= 0.0:
            s_hi = mid
        else:
            s_lo, g_lo = mid, g_mid
        if s_hi - s_lo < 1e-14:
            break
    return 0.5 * (s_lo + s_hi)


def full_frontier(phi_state: float, n_points: int = 200, n_dense: int = 20001) -> FrontierCurve:
    """Upper concave envelope over dense sweeps of all three cases.

    Shared randomness convexifies the achievable set, so the envelope is the
    upper convex hull of the three deterministic curves; chords between
    different cases are the stochastic-mixing segments.
    """
    if n_points < 16:
        raise ValueError(f"n_points must be at least 16, got {n_points}")
    if n_dense < 10000:
        raise ValueError(f"n_dense must be at least 10000, got {n_dense}")

    sweep = np.linspace(0.0, math.pi / 2, n_dense)
    chi_opt = optimal_chi(phi_state).value
    xs, ys, lams, settings = [], [], [], []
    for lam in (1, 3):
        x, y = deterministic_pair(lam, phi_state, sweep)
        xs.append(x)
        ys.append(y)
        lams.append(np.full(n_dense, lam))
        settings.append(sweep)
    x2, y2 = deterministic_pair(2, phi_state, chi_opt)
    xs.append(np.array([float(x2)]))
    ys.append(np.array([float(y2)]))
    lams.append(np.array([2]))
    settings.append(np.array([chi_opt]))
    x = np.concatenate(xs)
    y = np.concatenate(ys)
    lam_arr = np.concatenate(lams)
    setting_arr = np.concatenate(settings)

    order = np.lexsort((-y, x))
    hull = _upper_hull(order, x, y)
    hx = x[hull]
    hy = y[hull]
    hlam = lam_arr[hull]
    hset = setting_arr[hull]

    # an edge between neighbouring samples of one sweep is part of that
    # case's own arc; anything else is a shared-randomness chord
    step = math.pi / 2 / (n_dense - 1)
    edge_labels = []
    for k in range(len(hull) - 1):
        if hlam[k] == hlam[k + 1] and abs(hset[k] - hset[k + 1]) <= 1.5 * step:
            edge_labels.append(f"det{hlam[k]}")
        else:
            a, b = sorted((int(hlam[k]), int(hlam[k + 1])))
            edge_labels.append(f"mix{a}{b}")

    # contiguous runs of one label form the frontier segments; every segment
    # gets output points so narrow arcs stay visible at coarse n_points
    runs: list[tuple[str, int, int]] = []  # (label, first edge, last edge)
    for k, label in enumerate(edge_labels):
        if runs and runs[-1][0] == label:
            runs[-1] = (label, runs[-1][1], k)
        else:
            runs.append((label, k, k))

    widths = [float(hx[e_hi + 1] - hx[e_lo]) for _, e_lo, e_hi in runs]
    total = sum(widths)
    counts = [max(1, int(round(n_points * w / total))) for w in widths]
    while sum(counts) > n_points and max(counts) > 1:
        counts[counts.index(max(counts))] -= 1
    while sum(counts) < n_points:
        counts[widths.index(max(widths))] += 1

    points = []
    for (label, e_lo, e_hi), count, width in zip(runs, counts, widths):
        last = (label, e_lo, e_hi) == runs[-1]
        x_lo = float(hx[e_lo])
        targets = np.linspace(x_lo, x_lo + width, count, endpoint=last)
        for t in targets:
            k = min(max(bisect_right(hx, t) - 1, e_lo), e_hi)
            if label.startswith("det"):
                lam = int(hlam[k])
                s_solved = _bisect_setting(
                    lam, phi_state, float(hset[k]), float(hset[k + 1]), float(t)
                )
                _, y_curve = deterministic_pair(lam, phi_state, s_solved)
                case = make_case(lam, s_solved)
                points.append(FrontierPoint(float(t), float(y_curve), label, case, case, 1.0))
            else:
                w = (float(t) - float(hx[k + 1])) / (float(hx[k]) - float(hx[k + 1]))
                w = min(max(w, 0.0), 1.0)
                y_mix = w * float(hy[k]) + (1.0 - w) * float(hy[k + 1])
                points.append(
                    FrontierPoint(
                        float(t),
                        y_mix,
                        label,
                        make_case(int(hlam[k]), float(hset[k])),
                        make_case(int(hlam[k + 1]), float(hset[k + 1])),
                        w,
                    )
                )
    return FrontierCurve(phi_state, tuple(points), hx.copy(), hy.copy())


@dataclass(frozen=True)
class RegionGridSpec:
    """Grid over (swept setting angle, probability of the first case)."""

    angle_points: int = 901
    p_points: int = 1001
    angle_range: tuple[float, float] = (0.0, math.pi / 2)

    def __post_init__(self):
        if self.angle_points < 50 or self.p_points < 50:
            raise ValueError("region grids need at least 50 points per axis")


@dataclass(frozen=True)
class RegionMap:
    """Boolean double-violation map over (setting, p) cells."""

    phi_state: float
    pair: tuple[int, int]
    settings_axis: np.ndarray
    p_axis: np.ndarray
    mask: np.ndarray
    fixed_other: float

    @property
    def area_fraction(self) -> float:
        return float(self.mask.mean())


def region_map(
    phi_state: float,
    pair: tuple[int, int],
    grid: RegionGridSpec = RegionGridSpec(),
    fixed_other: float | None = None,
) -> RegionMap:
    """Double-violation map sweeping the first case's angle against p.

    The second case's angle stays fixed: the optimal receiver angle when the
    second case is the identity strategy, otherwise the equal-point optimum.
    """
    lam_i, lam_j = pair
    if lam_i == lam_j:
        raise ValueError("pair must combine two distinct cases")
    if fixed_other is None:
        if lam_j == 2:
            fixed_other = optimal_chi(phi_state).value
        else:
            fixed_other = equal_point(phi_state, pair).setting_of(lam_j)

    angles = np.linspace(grid.angle_range[0], grid.angle_range[1], grid.angle_points)
    p = np.linspace(0.0, 1.0, grid.p_points)
    xi, yi = deterministic_pair(lam_i, phi_state, angles)
    xj, yj = deterministic_pair(lam_j, phi_state, fixed_other)
    s_ab = xi[:, None] * p[None, :] + float(xj) * (1.0 - p)[None, :]
    s_ac = yi[:, None] * p[None, :] + float(yj) * (1.0 - p)[None, :]
    mask = (s_ab > 2.0) & (s_ac > 2.0)
    return RegionMap(phi_state, (lam_i, lam_j), angles, p, mask, float(fixed_other))


def optimal_state_angle(
    pair: tuple[int, int],
    lo: float = math.radians(20.0),
    hi: float = math.pi / 4,
) -> tuple[float, float]:
    """State angle maximizing the equal-point value for a case pair.

    Coarse scan with a cheap inner grid locates the basin; golden-section
    with the full-precision inner optimizer refines it.  Returns
    (phi_state, s_star).
    """
    scan = np.arange(lo, hi + 1e-12, math.radians(0.1))
    coarse = [equal_point(float(a), pair, coarse_step=math.radians(0.5)).s_star for a in scan]
    k = int(np.argmax(coarse))

    def objective(a: float) -> float:
        return equal_point(a, pair).s_star

    lo_b = float(scan[max(k - 1, 0)])
    hi_b = float(scan[min(k + 1, len(scan) - 1)])
    best = _golden_max(objective, lo_b, hi_b, tol=1e-7)
    return best, objective(best)


__all__ = [
    "EqualPointResult",
    "FrontierCurve",
    "FrontierPoint",
    "RegionGridSpec",
    "RegionMap",
    "deterministic_pair",
    "equal_point",
    "full_frontier",
    "make_case",
    "optimal_state_angle",
    "region_map",
    "violation_interval",
    "TSIRELSON",
]

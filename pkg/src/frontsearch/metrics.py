"""Front-quality metrics and solver performance profiles.

Purity, the two spread metrics, and the hypervolume indicator are computed
against reference data built from the union of every solver's front on a
problem. Arithmetic on gaps deliberately uses plain Python loops so results
are reproducible independent of vectorized reduction order.
"""

import logging
from dataclasses import dataclass

import numpy as np

from .core import dominates

logger = logging.getLogger(__name__)


class MetricsUnavailable(RuntimeError):
    """No front data to build reference information from."""


@dataclass(frozen=True)
class FrontSet:
    """One solver's Pareto-front approximation for one problem."""

    points: np.ndarray  # (m, q), finite
    solver: str = ""
    problem: str = ""

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2:
            raise ValueError("front points must form a 2-D array")
        if pts.size and not np.isfinite(pts).all():
            raise ValueError("front points must be finite")
        for i in range(len(pts)):
            for j in range(len(pts)):
                if i != j and dominates(pts[i], pts[j]):
                    raise ValueError(
                        f"front is not mutually nondominated: row {i} dominates row {j}"
                    )
        object.__setattr__(self, "points", pts)


@dataclass(frozen=True)
class ReferenceData:
    """Combined reference front with per-component extremes and corners.

    ``comp_min``/``comp_max`` are the extreme values over the union of all
    solvers' fronts; ``upper`` is the hypervolume corner (componentwise max
    plus a 1% range margin) and the ideal corner for scaling is ``comp_min``.
    """

    front: np.ndarray
    comp_min: np.ndarray
    comp_max: np.ndarray
    upper: np.ndarray

    @property
    def ideal(self) -> np.ndarray:
        return self.comp_min


def nondominated_rows(points: np.ndarray) -> np.ndarray:
    """Brute-force nondominated filter preserving row order."""
    pts = np.asarray(points, float)
    keep = [
        i
        for i in range(len(pts))
        if not any(j != i and dominates(pts[j], pts[i]) for j in range(len(pts)))
    ]
    return pts[keep].copy()


def build_reference(fronts) -> ReferenceData:
    stacks = [f.points for f in fronts if f.points.size]
    if not stacks:
        raise MetricsUnavailable("every front is empty")
    union = np.vstack(stacks)
    comp_min = union.min(axis=0)
    comp_max = union.max(axis=0)
    rng = comp_max - comp_min
    margin = np.where(rng > 0, 0.01 * rng, 1.0)
    return ReferenceData(
        front=nondominated_rows(union),
        comp_min=comp_min,
        comp_max=comp_max,
        upper=comp_max + margin,
    )


def purity(front: FrontSet, ref: ReferenceData) -> float:
    """Fraction of the front retained in the reference front (exact matching)."""
    if not len(front.points):
        logger.warning("purity of an empty front reported as 0")
        return 0.0
    hits = sum(
        1 for p in front.points if bool(np.all(ref.front == p, axis=1).any())
    )
    return hits / len(front.points)


def gamma_metric(front: FrontSet, ref: ReferenceData) -> float:
    """Largest per-component gap between consecutive values, extremes included."""
    if not len(front.points):
        raise ValueError("front is empty")
    q = front.points.shape[1]
    worst = -np.inf
    for i in range(q):
        vals = sorted(float(v) for v in front.points[:, i])
        seq = [float(ref.comp_min[i])] + vals + [float(ref.comp_max[i])]
        for j in range(len(seq) - 1):
            worst = max(worst, seq[j + 1] - seq[j])
    return float(worst)


def delta_metric(front: FrontSet, ref: ReferenceData) -> float:
    """Nonuniformity of the gap distribution, boundary gaps included.

    With a single front point there are no interior gaps and the value is 1
    by convention (numerator equals denominator).
    """
    if not len(front.points):
        raise ValueError("front is empty")
    q = front.points.shape[1]
    worst = 0.0
    for i in range(q):
        vals = sorted(float(v) for v in front.points[:, i])
        d0 = vals[0] - float(ref.comp_min[i])
        dn = float(ref.comp_max[i]) - vals[-1]
        interior = [vals[j + 1] - vals[j] for j in range(len(vals) - 1)]
        if not interior:
            comp = 1.0
        else:
            mean_gap = sum(interior) / len(interior)
            num = d0 + dn + sum(abs(d - mean_gap) for d in interior)
            den = d0 + dn + len(interior) * mean_gap
            comp = num / den if den > 0 else 0.0  # fully degenerate range
        worst = max(worst, comp)
    return float(worst)


def _prune_weakly_dominated(points: list[tuple]) -> list[tuple]:
    uniq = list(dict.fromkeys(points))
    return [
        p
        for p in uniq
        if not any(r != p and all(ri <= pi for ri, pi in zip(r, p)) for r in uniq)
    ]


def _hv_recursive(points: list[tuple], upper: tuple) -> float:
    points = _prune_weakly_dominated(points)
    if not points:
        return 0.0
    if len(upper) == 1:
        return upper[0] - min(p[0] for p in points)
    pts = sorted(points, key=lambda p: p[-1])
    vol = 0.0
    for k, p in enumerate(pts):
        z_next = pts[k + 1][-1] if k + 1 < len(pts) else upper[-1]
        depth = z_next - p[-1]
        if depth <= 0:
            continue
        active = [r[:-1] for r in pts[: k + 1]]
        vol += depth * _hv_recursive(active, upper[:-1])
    return vol


def hypervolume(front: FrontSet, ref: ReferenceData) -> float:
    """Normalized measure of the region dominated by the front below ``upper``.

    Exact recursive dimension sweep over the union of boxes [point, upper],
    scaled by the volume of [ideal, upper] so the result lies in [0, 1].
    """
    pts = front.points
    if not len(pts):
        raise ValueError("front is empty")
    if np.any(pts > ref.upper):
        raise ValueError("front contains points not dominated by the upper corner")
    denom = float(np.prod(ref.upper - ref.ideal))
    raw = _hv_recursive([tuple(map(float, p)) for p in pts], tuple(map(float, ref.upper)))
    return raw / denom


def performance_profile(
    values: np.ndarray, solvers: list[str], *, invert: bool = False
) -> dict[str, tuple[np.ndarray, np.ndarray]]:
    """Cumulative ratio-to-best curves per solver.

    ``values`` is a problems-by-solvers matrix; NaN marks a failed run. With
    ``invert`` the reciprocal is profiled (used for larger-is-better metrics);
    nonpositive entries then count as failures. Problems where every solver
    failed are dropped. Curves are sampled at every distinct finite ratio.
    """
    t = np.array(values, dtype=float)
    if t.ndim != 2 or t.shape[1] != len(solvers):
        raise ValueError("values must be a problems-by-solvers matrix")
    if invert:
        bad = ~np.isnan(t) & (t <= 0)
        if bad.any():
            logger.info("profile: %d nonpositive entries treated as failures", bad.sum())
            t[bad] = np.nan
        with np.errstate(divide="ignore"):
            t = 1.0 / t
    solvable = ~np.all(np.isnan(t), axis=1)
    dropped = int((~solvable).sum())
    if dropped:
        logger.info("profile: dropping %d problems where every solver failed", dropped)
    t = t[solvable]
    if not len(t):
        return {s: (np.empty(0), np.empty(0)) for s in solvers}
    best = np.nanmin(t, axis=1)
    ratios = t / best[:, None]
    ratios = np.where(np.isnan(ratios), np.inf, ratios)
    taus = np.unique(ratios[np.isfinite(ratios)])
    curves = {}
    for s, name in enumerate(solvers):
        rho = np.array([np.mean(ratios[:, s] <= tau) for tau in taus])
        curves[name] = (taus.copy(), rho)
    return curves

"""Subproblem solvers for the model-based search step.

Single models are minimized exactly over a Euclidean ball (eigendecomposition
plus secular-equation root finding, hard case included) and then projected
onto the box. Joint minimization of several models uses a Chebyshev (minimax)
formulation over the box intersected with a max-norm ball, solved by a
deterministic multistart projected-descent method with an explicit
improvement contract rather than a global-optimality claim.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq
from scipy.stats import qmc

from .core import Array
from .models import QuadraticModel

_DESCENT_ITERS_PER_DIM = 50
_STEP_TOL = 1e-10
_ARMIJO = 1e-4


@dataclass(frozen=True)
class SubproblemSpec:
    """Joint minimization task: models to combine, ball, and box."""

    models: tuple[QuadraticModel, ...]
    center: Array
    radius: float
    lb: Array
    ub: Array


def _canonical_sign(v: Array) -> Array:
    k = int(np.argmax(np.abs(v)))
    return -v if v[k] < 0 else v


def _trs_step(g: Array, H: Array, delta: float) -> Array:
    """Exact minimizer of g.s + 0.5 s.H.s over the Euclidean ball of radius delta."""
    w, V = np.linalg.eigh(H)
    gt = V.T @ g
    scale = max(1.0, float(np.max(np.abs(w))), float(np.max(np.abs(gt))) / delta)

    def step_norm(lam: float) -> float:
        denom = w + lam
        out = 0.0
        for gi, di in zip(gt, denom):
            if abs(di) <= 1e-300:
                if abs(gi) > 0.0:
                    return np.inf
                continue
            out += (gi / di) ** 2
        return float(np.sqrt(out))

    if w[0] > 0:
        p = -gt / w
        if np.linalg.norm(p) <= delta:
            return V @ p

    lam0 = max(0.0, -float(w[0]))
    gt_tol = 1e-13 * scale * delta
    bottom = w <= w[0] + 1e-12 * scale
    hard_candidate = w[0] <= 0 and np.all(np.abs(gt[bottom]) <= gt_tol)
    if hard_candidate:
        denom = w + lam0
        safe = ~bottom & (denom > 0)
        p_reg = np.zeros_like(gt)
        p_reg[safe] = -gt[safe] / denom[safe]
        norm_reg = float(np.linalg.norm(p_reg))
        if norm_reg <= delta:
            tau = float(np.sqrt(max(0.0, delta**2 - norm_reg**2)))
            v0 = _canonical_sign(V[:, 0])
            return V @ p_reg + tau * v0

    # Regular boundary case: the secular equation has a root above lam0.
    def f(lam: float) -> float:
        nrm = step_norm(lam)
        if nrm == 0.0:
            return 1.0 / delta
        if not np.isfinite(nrm):
            return -1.0 / delta
        return 1.0 / nrm - 1.0 / delta

    lo = lam0 + 1e-14 * scale
    for _ in range(200):
        if f(lo) < 0:
            break
        lo = lam0 + (lo - lam0) * 0.25
        if lo <= lam0:
            lo = np.nextafter(lam0, np.inf)
            break
    hi = lam0 + scale + float(np.linalg.norm(gt)) / delta + 1.0
    for _ in range(200):
        if f(hi) > 0:
            break
        hi = lam0 + 2.0 * (hi - lam0)
    if f(lo) >= 0 or f(hi) <= 0:
        # Numerically cornered; fall back to the regularized step at lam0.
        lam_star = lam0 + 1e-10 * scale
    else:
        lam_star = brentq(f, lo, hi, xtol=1e-14 * max(1.0, hi), maxiter=200)
    denom = w + lam_star
    p = np.zeros_like(gt)
    nz = np.abs(denom) > 1e-300
    p[nz] = -gt[nz] / denom[nz]
    nrm = float(np.linalg.norm(p))
    if nrm > delta:
        p *= delta / nrm
    return V @ p


def min_single_model(model: QuadraticModel, radius: float, lb: Array, ub: Array) -> Array:
    """Exact ball minimizer of one model, projected componentwise onto the box.

    Projection can only shrink each step component, so the result stays inside
    the ball as well. If projection destroys the model decrease, the step is
    backtracked deterministically; the center is always a valid fallback.
    """
    step = _trs_step(model.g, model.H, float(radius))
    cand = np.clip(model.center + step, lb, ub)
    if model.value(cand) <= model.f_center + 1e-12:
        return cand
    best, best_val = np.clip(model.center, lb, ub), model.f_center
    t = 0.5
    for _ in range(40):
        x = np.clip(model.center + t * step, lb, ub)
        v = model.value(x)
        if v < best_val:
            best, best_val = x, v
        t *= 0.5
    return best


def _phi(models, x: Array) -> float:
    return max(m.value(x) for m in models)


def _minimax_descent(models, x0: Array, lo: Array, hi: Array, max_iters: int):
    """Projected descent on max_i m_i using the gradient of the active model.

    The trial step length warm-starts from the previous accepted step (doubled)
    so backtracking stays short along the descent path.
    """
    x = x0.copy()
    fx = _phi(models, x)
    span = float(np.max(hi - lo))
    if span <= 0:
        return x, fx
    t_scaled = span  # step length times gradient norm
    for _ in range(max_iters):
        vals = [m.value(x) for m in models]
        grad = models[int(np.argmax(vals))].gradient(x)
        gnorm = float(np.linalg.norm(grad))
        if gnorm < 1e-14:
            break
        t = min(2.0 * t_scaled, span) / gnorm
        moved = False
        step_norm = 0.0
        for _ in range(60):
            xt = np.clip(x - t * grad, lo, hi)
            step_norm = float(np.max(np.abs(xt - x)))
            if step_norm < _STEP_TOL:
                break
            ft = _phi(models, xt)
            if ft <= fx - _ARMIJO * step_norm**2 / t:
                x, fx = xt, ft
                t_scaled = t * gnorm
                moved = True
                break
            t *= 0.5
        if not moved or step_norm < _STEP_TOL:
            break
    return x, fx


@lru_cache(maxsize=64)
def _halton_pair(n: int, seed: int) -> tuple[tuple[float, ...], ...]:
    sampler = qmc.Halton(d=n, scramble=True, seed=seed)
    return tuple(tuple(row) for row in sampler.random(2))


def min_chebyshev(
    spec: SubproblemSpec,
    *,
    seed: int = 0,
    single_minimizers: tuple[Array, ...] | None = None,
) -> Array:
    """Minimize max_i m_i(x) over box(lb,ub) intersected with the max-norm ball.

    Multistart projected descent from the center, each single-model minimizer,
    and two quasi-random points. The returned point is feasible and satisfies
    phi(x*) <= phi(center); global optimality is not claimed. Callers that
    already minimized the individual models can pass those points through
    ``single_minimizers`` (aligned with ``spec.models``) to skip re-solving.
    """
    if not spec.models:
        raise ValueError("need at least one model")
    center = np.asarray(spec.center, float)
    lo = np.maximum(spec.lb, center - spec.radius)
    hi = np.minimum(spec.ub, center + spec.radius)
    if np.any(lo > hi):
        raise ValueError("empty feasible set: center outside the box")
    n = center.size
    starts = [np.clip(center, lo, hi)]
    if single_minimizers is None:
        single_minimizers = tuple(
            min_single_model(m, spec.radius, spec.lb, spec.ub) for m in spec.models
        )
    if len(single_minimizers) != len(spec.models):
        raise ValueError("one warm start per model required")
    starts.extend(np.clip(p, lo, hi) for p in single_minimizers)
    for u in _halton_pair(n, seed):
        starts.append(lo + np.asarray(u) * (hi - lo))
    max_iters = _DESCENT_ITERS_PER_DIM * n
    best_x, best_f = None, np.inf
    for s in starts:
        x, fx = _minimax_descent(spec.models, s, lo, hi, max_iters)
        if fx < best_f:
            best_x, best_f = x, fx
    return best_x

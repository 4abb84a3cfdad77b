"""Interpolation-set selection and per-component quadratic model fitting.

Depending on how many cached points fall inside the sampling ball, the fit is
a minimum-Frobenius-norm interpolant (underdetermined), a determined
interpolant, or a least-squares regression on the full quadratic basis. The
constant term is always pinned to the center value, so every model reproduces
its center exactly.
"""

import warnings
from dataclasses import dataclass
from itertools import combinations

import numpy as np
import scipy.linalg

from .core import Array, EvalCache

_PIVOT_RATIO_MIN = 1e-12
_RESIDUAL_REL = 1e-6


@dataclass(frozen=True)
class QuadraticModel:
    """Quadratic model m(x) = f_center + g.(x-c) + 0.5 (x-c).H.(x-c)."""

    center: Array
    f_center: float
    g: Array
    H: Array

    def value(self, x: Array) -> float:
        s = np.asarray(x, float) - self.center
        return float(self.f_center + self.g @ s + 0.5 * s @ self.H @ s)

    def gradient(self, x: Array) -> Array:
        s = np.asarray(x, float) - self.center
        return self.g + self.H @ s


@dataclass(frozen=True)
class InterpolationSet:
    """Sample points (center first) with their objective rows and ball radius."""

    points: Array  # (p, n), row 0 is the center
    values: Array  # (p, q)
    radius: float

    @property
    def size(self) -> int:
        return self.points.shape[0]


def select_points(
    cache: EvalCache, center: Array, radius: float, cap: int
) -> InterpolationSet:
    """Collect cached finite-valued points within max-norm ``radius`` of ``center``.

    The center (which must itself be cached) comes first; the remaining points
    are ordered by increasing distance, ties broken by cache insertion order,
    and the set is truncated to ``cap`` points.
    """
    center = np.asarray(center, float)
    X, F = cache.points_within(center, radius)
    if X.size == 0:
        raise ValueError("center is not cached")
    exact = np.all(X == center, axis=1)
    if not exact.any():
        raise ValueError("center is not cached")
    ci = int(np.argmax(exact))
    d = np.max(np.abs(X - center), axis=1)
    rest = [i for i in range(len(X)) if i != ci]
    rest.sort(key=lambda i: (d[i], i))
    order = [ci] + rest
    order = order[:cap]
    return InterpolationSet(X[order].copy(), F[order].copy(), float(radius))


def _quadratic_basis(S: Array) -> Array:
    """Full quadratic basis without the constant: [s, 0.5 s_i^2, s_i s_j (i<j)]."""
    m, n = S.shape
    cols = [S, 0.5 * S**2]
    cols += [(S[:, i] * S[:, j])[:, None] for i, j in combinations(range(n), 2)]
    return np.hstack(cols)


def _unpack_coefficients(theta: Array, n: int) -> tuple[Array, Array]:
    g = theta[:n].copy()
    H = np.zeros((n, n))
    H[np.diag_indices(n)] = theta[n : 2 * n]
    for k, (i, j) in enumerate(combinations(range(n), 2)):
        H[i, j] = H[j, i] = theta[2 * n + k]
    return g, H


def _solve_with_pivot_check(K: Array, rhs: Array) -> Array | None:
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
            lu, piv = scipy.linalg.lu_factor(K)
    except scipy.linalg.LinAlgError:
        return None
    u = np.abs(np.diag(lu))
    if u.max() == 0 or u.min() <= _PIVOT_RATIO_MIN * u.max():
        return None
    return scipy.linalg.lu_solve((lu, piv), rhs)


def _min_frobenius_fit(S: Array, r: Array) -> tuple[Array, Array] | None:
    """Smallest-Hessian interpolant through (S, r) with the constant term fixed.

    Stationarity gives H = sum_j mu_j s_j s_j^T with S^T mu = 0, leading to the
    saddle system [[M, S], [S^T, 0]] with M_jk = 0.5 (s_j.s_k)^2.
    """
    m, n = S.shape
    M = 0.5 * (S @ S.T) ** 2
    K = np.zeros((m + n, m + n))
    K[:m, :m] = M
    K[:m, m:] = S
    K[m:, :m] = S.T
    rhs = np.concatenate([r, np.zeros(n)])
    sol = _solve_with_pivot_check(K, rhs)
    if sol is None:
        return None
    mu, g = sol[:m], sol[m:]
    H = S.T @ (mu[:, None] * S)
    return g, H


def _determined_fit(S: Array, r: Array, fscale: float) -> tuple[Array, Array] | None:
    n = S.shape[1]
    phi = _quadratic_basis(S)
    theta = _solve_with_pivot_check(phi, r)
    if theta is None:
        return None
    if np.max(np.abs(phi @ theta - r)) > _RESIDUAL_REL * (1.0 + fscale):
        return None
    return _unpack_coefficients(theta, n)


def _regression_fit(S: Array, r: Array) -> tuple[Array, Array] | None:
    n = S.shape[1]
    phi = _quadratic_basis(S)
    theta, _, rank, _ = np.linalg.lstsq(phi, r, rcond=None)
    if rank < phi.shape[1]:
        return None
    return _unpack_coefficients(theta, n)


def build_model(iset: InterpolationSet, component_values) -> QuadraticModel | None:
    """Fit one objective component on the interpolation set.

    Returns None when the underlying linear system is numerically singular
    (the caller then skips the search step for this component). Points are
    scaled by the ball radius before fitting to keep the systems well
    conditioned at small stepsizes.
    """
    pts = iset.points
    vals = np.asarray(component_values, float).reshape(-1)
    p, n = pts.shape
    if p < n + 2:
        raise ValueError("need at least n+2 points to build a model")
    if vals.shape != (p,):
        raise ValueError("one value per interpolation point required")
    center = pts[0]
    f_center = float(vals[0])
    S = (pts[1:] - center) / iset.radius
    r = vals[1:] - f_center
    n_quad = (n + 1) * (n + 2) // 2
    if p < n_quad:
        fit = _min_frobenius_fit(S, r)
    elif p == n_quad:
        fit = _determined_fit(S, r, fscale=float(np.max(np.abs(vals))))
    else:
        fit = _regression_fit(S, r)
    if fit is None:
        return None
    g_s, H_s = fit
    g = g_s / iset.radius
    H = H_s / iset.radius**2
    H = 0.5 * (H + H.T)
    return QuadraticModel(center.copy(), f_center, g, H)


def eval_model(model: QuadraticModel, x: Array) -> float:
    return model.value(x)

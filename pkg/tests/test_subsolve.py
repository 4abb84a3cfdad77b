import numpy as np
import pytest

from frontsearch.models import QuadraticModel
from frontsearch.subsolve import SubproblemSpec, _trs_step, min_chebyshev, min_single_model


def quad(center, f_center, g, H):
    center = np.atleast_1d(np.asarray(center, float))
    g = np.atleast_1d(np.asarray(g, float))
    H = np.atleast_2d(np.asarray(H, float))
    return QuadraticModel(center, float(f_center), g, H)


def box(lo, hi, n):
    return np.full(n, float(lo)), np.full(n, float(hi))


def sample_ball(rng, n, radius, count):
    directions = rng.normal(size=(count, n))
    directions /= np.linalg.norm(directions, axis=1)[:, None]
    radii = radius * rng.uniform(0, 1, size=count) ** (1.0 / n)
    return directions * radii[:, None]


class TestSingleModel:
    def test_center_is_minimizer(self):
        m = quad([0.0], 0.0, [0.0], [[2.0]])
        lb, ub = box(-2, 2, 1)
        x = min_single_model(m, 1.0, lb, ub)
        assert x[0] == pytest.approx(0.0, abs=1e-10)

    def test_linear_model_boundary(self):
        m = quad([0.0], 0.0, [-1.0], [[0.0]])
        lb, ub = box(-2, 2, 1)
        x = min_single_model(m, 1.0, lb, ub)
        assert x[0] == pytest.approx(1.0, abs=1e-10)

    def test_projection_clips_to_box(self):
        m = quad([0.0], 0.0, [-1.0], [[0.0]])
        lb, ub = box(-0.3, 0.3, 1)
        x = min_single_model(m, 1.0, lb, ub)
        assert x[0] == pytest.approx(0.3, abs=1e-12)

    def test_interior_strictly_convex_exact(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            n = int(rng.integers(1, 6))
            A = rng.normal(size=(n, n))
            H = A @ A.T + n * np.eye(n)
            x_star = rng.uniform(-0.05, 0.05, size=n)
            g = -H @ x_star  # unconstrained minimizer at x_star, near the center
            m = quad(np.zeros(n), 0.0, g, H)
            lb, ub = box(-2, 2, n)
            x = min_single_model(m, 1.0, lb, ub)
            assert np.max(np.abs(x - x_star)) <= 1e-8

    def test_boundary_solution_beats_ball_samples(self):
        rng = np.random.default_rng(1)
        for _ in range(25):
            n = int(rng.integers(1, 5))
            A = rng.normal(size=(n, n))
            H = 0.5 * (A + A.T)  # indefinite in general
            g = rng.normal(size=n)
            radius = 0.8
            m = quad(np.zeros(n), 0.0, g, H)
            lb, ub = box(-5, 5, n)
            x = min_single_model(m, radius, lb, ub)
            assert np.linalg.norm(x) <= radius + 1e-9
            samples = sample_ball(rng, n, radius, 4000)
            best = min(m.value(s) for s in samples)
            assert m.value(x) <= best + 1e-6

    def test_hard_case(self):
        # negative curvature direction orthogonal to the gradient
        H = np.diag([-2.0, 1.0])
        g = np.array([0.0, 0.5])
        step = _trs_step(g, H, 1.0)
        assert np.linalg.norm(step) == pytest.approx(1.0, abs=1e-8)
        value = g @ step + 0.5 * step @ H @ step
        rng = np.random.default_rng(2)
        best = min(g @ s + 0.5 * s @ H @ s for s in sample_ball(rng, 2, 1.0, 4000))
        assert value <= best + 1e-6

    def test_zero_gradient_negative_curvature(self):
        H = np.diag([-1.0, 3.0])
        step = _trs_step(np.zeros(2), H, 0.5)
        assert np.linalg.norm(step) == pytest.approx(0.5, abs=1e-10)
        assert step @ H @ step < 0

    def test_monotone_never_worse_than_center(self):
        rng = np.random.default_rng(3)
        for _ in range(30):
            n = int(rng.integers(1, 6))
            A = rng.normal(size=(n, n))
            m = quad(rng.uniform(-0.5, 0.5, size=n), rng.normal(), rng.normal(size=n),
                     0.5 * (A + A.T))
            lb, ub = box(-0.6, 0.6, n)
            x = min_single_model(m, 0.5, lb, ub)
            assert np.all(x >= lb) and np.all(x <= ub)
            assert m.value(x) <= m.f_center + 1e-10

    def test_deterministic(self):
        m = quad([0.1, -0.2], 1.0, [0.3, -0.4], [[1.0, 0.3], [0.3, -2.0]])
        lb, ub = box(-1, 1, 2)
        x1 = min_single_model(m, 0.7, lb, ub)
        x2 = min_single_model(m, 0.7, lb, ub)
        assert np.array_equal(x1, x2)


class TestChebyshev:
    def test_opposed_linear_models(self):
        # phi(x) = max(x, -x) = |x|, minimized at 0
        m1 = quad([0.0], 0.0, [1.0], [[0.0]])
        m2 = quad([0.0], 0.0, [-1.0], [[0.0]])
        lb, ub = box(-1, 1, 1)
        spec = SubproblemSpec((m1, m2), np.zeros(1), 1.0, lb, ub)
        x = min_chebyshev(spec)
        assert abs(x[0]) <= 1e-8

    def test_identical_models_match_single_minimization(self):
        H = np.array([[2.0, 0.0], [0.0, 4.0]])
        g = np.array([0.4, -0.8])
        m = quad(np.zeros(2), 0.0, g, H)
        lb, ub = box(-1, 1, 2)
        x_single = min_single_model(m, 1.0, lb, ub)
        spec = SubproblemSpec((m, m), np.zeros(2), 1.0, lb, ub)
        x_joint = min_chebyshev(spec)
        assert m.value(x_joint) <= m.value(x_single) + 1e-10
        assert np.max(np.abs(x_joint - x_single)) <= 1e-3

    def test_feasible_and_monotone(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            n = int(rng.integers(1, 5))
            models = []
            for _ in range(int(rng.integers(2, 4))):
                A = rng.normal(size=(n, n))
                models.append(
                    quad(rng.uniform(-0.3, 0.3, n), rng.normal(), rng.normal(size=n),
                         0.5 * (A + A.T))
                )
            center = rng.uniform(-0.2, 0.2, size=n)
            radius = 0.5
            lb, ub = box(-1, 1, n)
            spec = SubproblemSpec(tuple(models), center, radius, lb, ub)
            x = min_chebyshev(spec)
            assert np.all(x >= lb - 1e-15) and np.all(x <= ub + 1e-15)
            assert np.max(np.abs(x - center)) <= radius + 1e-12
            phi = lambda p: max(m.value(p) for m in models)
            assert phi(x) <= phi(center) + 1e-10

    def test_deterministic_given_seed(self):
        m1 = quad([0.0, 0.0], 0.0, [1.0, 0.2], [[1.0, 0.0], [0.0, 1.0]])
        m2 = quad([0.0, 0.0], 0.0, [-0.5, 1.0], [[2.0, 0.1], [0.1, 0.5]])
        lb, ub = box(-1, 1, 2)
        spec = SubproblemSpec((m1, m2), np.zeros(2), 0.8, lb, ub)
        a = min_chebyshev(spec, seed=0)
        b = min_chebyshev(spec, seed=0)
        assert np.array_equal(a, b)

    def test_empty_model_list_rejected(self):
        lb, ub = box(-1, 1, 1)
        with pytest.raises(ValueError):
            min_chebyshev(SubproblemSpec((), np.zeros(1), 1.0, lb, ub))

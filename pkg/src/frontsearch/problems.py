"""Analytic multiobjective test problems.

A representative registry spanning n from 1 to 30 and 2 to 4 objective
components, chosen to cover the classic front shapes: convex (zdt1, schaffer,
the quadratic families), concave (zdt2, fonseca, dtlz2), disconnected (zdt3,
kursawe), multimodal landscapes (zdt4, dtlz1, dtlz3), biased densities (zdt6,
dtlz4), and mixed nonconvex cases (poloni, viennet). Each entry is a factory
returning a fresh Problem.
"""

import numpy as np

from .core import Problem


def _box(lo, hi, n):
    return np.full(n, float(lo)), np.full(n, float(hi))


def schaffer() -> Problem:
    f = lambda x: np.array([x[0] ** 2, (x[0] - 2.0) ** 2])
    lb, ub = _box(-10.0, 10.0, 1)
    return Problem(1, 2, lb, ub, f, name="schaffer")


def fonseca() -> Problem:
    inv_sqrt = 1.0 / np.sqrt(2.0)

    def f(x):
        return np.array(
            [
                1.0 - np.exp(-np.sum((x - inv_sqrt) ** 2)),
                1.0 - np.exp(-np.sum((x + inv_sqrt) ** 2)),
            ]
        )

    lb, ub = _box(-4.0, 4.0, 2)
    return Problem(2, 2, lb, ub, f, name="fonseca")


def kursawe() -> Problem:
    def f(x):
        f1 = np.sum(-10.0 * np.exp(-0.2 * np.sqrt(x[:-1] ** 2 + x[1:] ** 2)))
        f2 = np.sum(np.abs(x) ** 0.8 + 5.0 * np.sin(x**3))
        return np.array([f1, f2])

    lb, ub = _box(-5.0, 5.0, 3)
    return Problem(3, 2, lb, ub, f, name="kursawe")


def poloni() -> Problem:
    a1 = 0.5 * np.sin(1.0) - 2.0 * np.cos(1.0) + np.sin(2.0) - 1.5 * np.cos(2.0)
    a2 = 1.5 * np.sin(1.0) - np.cos(1.0) + 2.0 * np.sin(2.0) - 0.5 * np.cos(2.0)

    def f(x):
        b1 = 0.5 * np.sin(x[0]) - 2.0 * np.cos(x[0]) + np.sin(x[1]) - 1.5 * np.cos(x[1])
        b2 = 1.5 * np.sin(x[0]) - np.cos(x[0]) + 2.0 * np.sin(x[1]) - 0.5 * np.cos(x[1])
        f1 = 1.0 + (a1 - b1) ** 2 + (a2 - b2) ** 2
        f2 = (x[0] + 3.0) ** 2 + (x[1] + 1.0) ** 2
        return np.array([f1, f2])

    lb, ub = _box(-np.pi, np.pi, 2)
    return Problem(2, 2, lb, ub, f, name="poloni")


def binh() -> Problem:
    def f(x):
        return np.array(
            [4.0 * x[0] ** 2 + 4.0 * x[1] ** 2, (x[0] - 5.0) ** 2 + (x[1] - 5.0) ** 2]
        )

    lb = np.array([0.0, 0.0])
    ub = np.array([5.0, 3.0])
    return Problem(2, 2, lb, ub, f, name="binh")


def viennet() -> Problem:
    def f(x):
        ss = x[0] ** 2 + x[1] ** 2
        f1 = 0.5 * ss + np.sin(ss)
        f2 = (3.0 * x[0] - 2.0 * x[1] + 4.0) ** 2 / 8.0 + (x[0] - x[1] + 1.0) ** 2 / 27.0 + 15.0
        f3 = 1.0 / (ss + 1.0) - 1.1 * np.exp(-ss)
        return np.array([f1, f2, f3])

    lb, ub = _box(-3.0, 3.0, 2)
    return Problem(2, 3, lb, ub, f, name="viennet")


def shifted_quadratics(n: int, name: str) -> Problem:
    """Two convex bowls with minimizers at 0 and at 1; the efficient set is
    the segment joining them."""
    a = np.zeros(n)
    b = np.ones(n)

    def f(x):
        return np.array([np.sum((x - a) ** 2), np.sum((x - b) ** 2)])

    lb, ub = _box(-1.0, 2.0, n)
    return Problem(n, 2, lb, ub, f, name=name)


def quad2() -> Problem:
    return shifted_quadratics(2, "quad2")


def quad5() -> Problem:
    return shifted_quadratics(5, "quad5")


def quad10() -> Problem:
    return shifted_quadratics(10, "quad10")


def jos1() -> Problem:
    def f(x):
        return np.array([np.mean(x**2), np.mean((x - 2.0) ** 2)])

    lb, ub = _box(-5.0, 5.0, 5)
    return Problem(5, 2, lb, ub, f, name="jos1")


def _zdt(name: str, n: int, f2_of, lb=None, ub=None) -> Problem:
    if lb is None:
        lb, ub = _box(0.0, 1.0, n)
    return Problem(n, 2, lb, ub, f2_of, name=name)


def zdt1() -> Problem:
    def f(x):
        g = 1.0 + 9.0 * np.sum(x[1:]) / (len(x) - 1)
        return np.array([x[0], g * (1.0 - np.sqrt(x[0] / g))])

    return _zdt("zdt1", 30, f)


def zdt2() -> Problem:
    def f(x):
        g = 1.0 + 9.0 * np.sum(x[1:]) / (len(x) - 1)
        return np.array([x[0], g * (1.0 - (x[0] / g) ** 2)])

    return _zdt("zdt2", 30, f)


def zdt3() -> Problem:
    def f(x):
        g = 1.0 + 9.0 * np.sum(x[1:]) / (len(x) - 1)
        h = 1.0 - np.sqrt(x[0] / g) - (x[0] / g) * np.sin(10.0 * np.pi * x[0])
        return np.array([x[0], g * h])

    return _zdt("zdt3", 30, f)


def zdt4() -> Problem:
    n = 10

    def f(x):
        g = 1.0 + 10.0 * (n - 1) + np.sum(x[1:] ** 2 - 10.0 * np.cos(4.0 * np.pi * x[1:]))
        return np.array([x[0], g * (1.0 - np.sqrt(x[0] / g))])

    lb = np.concatenate([[0.0], np.full(n - 1, -5.0)])
    ub = np.concatenate([[1.0], np.full(n - 1, 5.0)])
    return Problem(n, 2, lb, ub, f, name="zdt4")


def zdt6() -> Problem:
    n = 10

    def f(x):
        f1 = 1.0 - np.exp(-4.0 * x[0]) * np.sin(6.0 * np.pi * x[0]) ** 6
        g = 1.0 + 9.0 * (np.sum(x[1:]) / (n - 1)) ** 0.25
        return np.array([f1, g * (1.0 - (f1 / g) ** 2)])

    return _zdt("zdt6", n, f)


def _dtlz_g_rastrigin(xm):
    return 100.0 * (len(xm) + np.sum((xm - 0.5) ** 2 - np.cos(20.0 * np.pi * (xm - 0.5))))


def _dtlz1_factory(m: int, k: int, name: str) -> Problem:
    n = m + k - 1

    def f(x):
        g = _dtlz_g_rastrigin(x[m - 1 :])
        out = np.empty(m)
        for i in range(m):
            v = 0.5 * (1.0 + g) * np.prod(x[: m - 1 - i])
            if i > 0:
                v *= 1.0 - x[m - 1 - i]
            out[i] = v
        return out

    lb, ub = _box(0.0, 1.0, n)
    return Problem(n, m, lb, ub, f, name=name)


def _dtlz2_factory(m: int, k: int, name: str, alpha: float = 1.0, rastrigin_g=False) -> Problem:
    n = m + k - 1

    def f(x):
        xm = x[m - 1 :]
        g = _dtlz_g_rastrigin(xm) if rastrigin_g else np.sum((xm - 0.5) ** 2)
        theta = (x[: m - 1] ** alpha) * (np.pi / 2.0)
        out = np.empty(m)
        for i in range(m):
            v = 1.0 + g
            v *= np.prod(np.cos(theta[: m - 1 - i]))
            if i > 0:
                v *= np.sin(theta[m - 1 - i])
            out[i] = v
        return out

    lb, ub = _box(0.0, 1.0, n)
    return Problem(n, m, lb, ub, f, name=name)


def dtlz1() -> Problem:
    return _dtlz1_factory(3, 5, "dtlz1")


def dtlz2() -> Problem:
    return _dtlz2_factory(3, 10, "dtlz2")


def dtlz3() -> Problem:
    return _dtlz2_factory(3, 10, "dtlz3", rastrigin_g=True)


def dtlz4() -> Problem:
    return _dtlz2_factory(3, 10, "dtlz4", alpha=100.0)


def dtlz2q4() -> Problem:
    return _dtlz2_factory(4, 10, "dtlz2q4")


REGISTRY = {
    p().name: p
    for p in (
        schaffer,
        fonseca,
        kursawe,
        poloni,
        binh,
        viennet,
        quad2,
        quad5,
        quad10,
        jos1,
        zdt1,
        zdt2,
        zdt3,
        zdt4,
        zdt6,
        dtlz1,
        dtlz2,
        dtlz3,
        dtlz4,
        dtlz2q4,
    )
}

SUITES = {
    "smoke": ["schaffer", "quad2", "fonseca", "binh"],
    "full": sorted(REGISTRY),
    "n5plus": ["quad5", "quad10", "jos1", "zdt1", "zdt2", "zdt3", "zdt4", "zdt6",
               "dtlz1", "dtlz2", "dtlz3", "dtlz4", "dtlz2q4"],
}


def get_problem(name: str) -> Problem:
    try:
        return REGISTRY[name]()
    except KeyError:
        raise KeyError(f"unknown problem {name!r}; known: {', '.join(sorted(REGISTRY))}")

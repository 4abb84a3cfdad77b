import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frontsearch.metrics import (
    FrontSet,
    MetricsUnavailable,
    ReferenceData,
    build_reference,
    delta_metric,
    gamma_metric,
    hypervolume,
    nondominated_rows,
    performance_profile,
    purity,
)


def front(rows, solver="s", problem="p"):
    return FrontSet(np.asarray(rows, dtype=float), solver=solver, problem=problem)


def ref_from(comp_min, comp_max, front_rows=None, upper=None):
    comp_min = np.asarray(comp_min, float)
    comp_max = np.asarray(comp_max, float)
    if upper is None:
        rng = comp_max - comp_min
        upper = comp_max + np.where(rng > 0, 0.01 * rng, 1.0)
    return ReferenceData(
        front=np.asarray(front_rows if front_rows is not None else [], float),
        comp_min=comp_min,
        comp_max=comp_max,
        upper=np.asarray(upper, float),
    )


# plain-loop re-implementations used as oracles

def oracle_gamma(rows, lo, hi):
    q = len(rows[0])
    out = []
    for i in range(q):
        seq = [lo[i]] + sorted(r[i] for r in rows) + [hi[i]]
        out.append(max(seq[j + 1] - seq[j] for j in range(len(seq) - 1)))
    return max(out)


def oracle_delta(rows, lo, hi):
    q = len(rows[0])
    vals_out = []
    for i in range(q):
        v = sorted(r[i] for r in rows)
        d0 = v[0] - lo[i]
        dn = hi[i] - v[-1]
        gaps = [v[j + 1] - v[j] for j in range(len(v) - 1)]
        if not gaps:
            vals_out.append(1.0)
            continue
        mean = sum(gaps) / len(gaps)
        vals_out.append(
            (d0 + dn + sum(abs(g - mean) for g in gaps)) / (d0 + dn + len(gaps) * mean)
        )
    return max(vals_out)


class TestFrontSet:
    def test_rejects_dominated_rows(self):
        with pytest.raises(ValueError):
            front([(0.0, 0.0), (1.0, 1.0)])

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            front([(np.inf, 0.0)])


class TestBuildReference:
    def test_union_filter(self):
        fronts = [front([(0.0, 2.0)]), front([(1.0, 1.0), (2.0, 0.0)])]
        ref = build_reference(fronts)
        assert {tuple(r) for r in ref.front} == {(0.0, 2.0), (1.0, 1.0), (2.0, 0.0)}

    def test_dominated_union_rows_removed(self):
        fronts = [front([(0.0, 2.0), (2.0, 0.0)]), front([(1.0, 3.0)])]
        ref = build_reference(fronts)
        assert (1.0, 3.0) not in {tuple(r) for r in ref.front}

    def test_upper_margin(self):
        fronts = [front([(0.0, 2.0)]), front([(2.0, 0.0)])]
        ref = build_reference(fronts)
        assert ref.upper == pytest.approx([2.02, 2.02])

    def test_zero_range_margin_is_one(self):
        fronts = [front([(1.0, 0.0), (1.0, 1.0)][:1])]
        ref = build_reference(fronts)
        assert ref.upper == pytest.approx([2.0, 1.0])

    def test_all_empty_raises(self):
        with pytest.raises(MetricsUnavailable):
            build_reference([front(np.empty((0, 2)))])

    def test_extremes_come_from_raw_union(self):
        # the dominated row still defines the component maxima
        fronts = [front([(0.0, 0.0)]), front([(3.0, 4.0)])]
        ref = build_reference(fronts)
        assert tuple(ref.comp_max) == (3.0, 4.0)
        assert tuple(ref.comp_min) == (0.0, 0.0)


class TestPurity:
    def test_fraction(self):
        ref = ref_from([0, 0], [3, 3], front_rows=[(0, 3), (1, 2), (2, 1)])
        f = front([(0.0, 3.0), (1.0, 2.0), (2.0, 1.0), (2.5, 0.9)])
        assert purity(f, ref) == 0.75

    def test_sole_solver_scores_one(self):
        f = front([(0.0, 1.0), (1.0, 0.0)])
        ref = build_reference([f])
        assert purity(f, ref) == 1.0

    def test_fully_dominated_scores_zero(self):
        good = front([(0.0, 0.0)])
        bad = front([(1.0, 1.0)], solver="other")
        ref = build_reference([good, bad])
        assert purity(bad, ref) == 0.0

    def test_count_is_integer(self):
        ref = ref_from([0, 0], [3, 3], front_rows=[(0, 3), (1, 2)])
        f = front([(0.0, 3.0), (1.0, 2.0), (2.0, 1.0)])
        assert purity(f, ref) * 3 == pytest.approx(round(purity(f, ref) * 3))


class TestGamma:
    def test_unit_gaps(self):
        ref = ref_from([-1, -1], [2, 2])
        assert gamma_metric(front([(0.0, 1.0), (1.0, 0.0)]), ref) == 1.0

    def test_single_point_one_sided_gap(self):
        ref = ref_from([0.0, 0.0], [4.0, 4.0])
        assert gamma_metric(front([(1.0, 1.0)]), ref) == 3.0

    def test_degenerate_front_spans_range(self):
        ref = ref_from([0.0, 0.0], [5.0, 5.0])
        assert gamma_metric(front([(0.0, 5.0)]), ref) == 5.0

    def test_matches_bruteforce_on_random_instances(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            q = int(rng.integers(2, 5))
            rows = [tuple(rng.integers(0, 50, size=q) / 7.0) for _ in range(int(rng.integers(1, 10)))]
            rows = [r for r in nondominated_rows(np.array(rows))]
            f = front(rows)
            lo = np.array(rows).min(axis=0) - rng.uniform(0, 1, size=q)
            hi = np.array(rows).max(axis=0) + rng.uniform(0, 1, size=q)
            ref = ref_from(lo, hi)
            assert gamma_metric(f, ref) == oracle_gamma([list(r) for r in rows], lo, hi)


class TestDelta:
    def test_uniform_spacing_half(self):
        # three points, all four gaps equal: 2d / 4d = 0.5
        ref = ref_from([0.0, 0.0], [4.0, 4.0])
        f = front([(1.0, 3.0), (2.0, 2.0), (3.0, 1.0)])
        assert delta_metric(f, ref) == 0.5

    def test_single_point_is_one(self):
        ref = ref_from([0.0, 0.0], [4.0, 4.0])
        assert delta_metric(front([(1.0, 1.0)]), ref) == 1.0

    def test_huge_interior_gap_exceeds_uniform(self):
        ref = ref_from([0.0, 0.0], [10.0, 10.0])
        uniform = front([(2.0, 8.0), (5.0, 5.0), (8.0, 2.0)])
        lopsided = front([(0.5, 9.0), (1.0, 8.5), (9.0, 1.0)])
        assert delta_metric(lopsided, ref) > delta_metric(uniform, ref)

    def test_matches_bruteforce_on_random_instances(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            q = int(rng.integers(2, 5))
            rows = [tuple(rng.integers(0, 50, size=q) / 3.0) for _ in range(int(rng.integers(1, 10)))]
            rows = [r for r in nondominated_rows(np.array(rows))]
            f = front(rows)
            lo = np.array(rows).min(axis=0) - rng.uniform(0.1, 1, size=q)
            hi = np.array(rows).max(axis=0) + rng.uniform(0.1, 1, size=q)
            ref = ref_from(lo, hi)
            assert delta_metric(f, ref) == oracle_delta([list(r) for r in rows], lo, hi)


class TestDominanceFilter:
    def test_matches_bruteforce_on_random_instances(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            q = int(rng.integers(2, 4))
            rows = rng.integers(0, 5, size=(int(rng.integers(1, 10)), q)).astype(float)
            mine = {tuple(r) for r in nondominated_rows(rows)}
            def dom(a, b):
                return all(x <= y for x, y in zip(a, b)) and any(x < y for x, y in zip(a, b))
            expected = {
                tuple(r)
                for i, r in enumerate(rows)
                if not any(j != i and dom(rows[j], r) for j in range(len(rows)))
            }
            assert mine == expected


class TestHypervolume:
    def test_single_point_full_box(self):
        ref = ref_from([0.0, 0.0], [1.0, 1.0], upper=[1.0, 1.0])
        assert hypervolume(front([(0.0, 0.0)]), ref) == 1.0

    def test_two_point_inclusion_exclusion(self):
        ref = ref_from([0.0, 0.0], [1.0, 1.0], upper=[1.0, 1.0])
        f = front([(0.0, 0.5), (0.5, 0.0)])
        assert hypervolume(f, ref) == 0.75

    def test_front_at_upper_corner_is_zero(self):
        ref = ref_from([0.0, 0.0], [1.0, 1.0], upper=[1.0, 1.0])
        assert hypervolume(front([(1.0, 1.0)]), ref) == 0.0

    def test_point_beyond_upper_rejected(self):
        ref = ref_from([0.0, 0.0], [1.0, 1.0], upper=[1.0, 1.0])
        with pytest.raises(ValueError):
            hypervolume(front([(2.0, 0.0)]), ref)

    def test_three_objectives_analytic(self):
        # single point at the ideal corner dominates the whole unit cube
        ref = ref_from([0.0] * 3, [1.0] * 3, upper=[1.0] * 3)
        assert hypervolume(front([(0.0, 0.0, 0.0)]), ref) == 1.0

    def test_monotone_in_added_nondominated_point(self):
        rng = np.random.default_rng(3)
        for _ in range(25):
            q = int(rng.integers(2, 5))
            ref = ref_from([0.0] * q, [1.0] * q, upper=[1.0] * q)
            base_rows = nondominated_rows(rng.uniform(0.1, 0.9, size=(4, q)))
            f1 = front(base_rows)
            candidate = rng.uniform(0.0, 0.9, size=q)
            merged = nondominated_rows(np.vstack([base_rows, candidate]))
            f2 = front(merged)
            assert hypervolume(f2, ref) >= hypervolume(f1, ref) - 1e-12

    def test_duplicate_coordinates_handled(self):
        ref = ref_from([0.0, 0.0], [1.0, 1.0], upper=[1.0, 1.0])
        f = front([(0.2, 0.4), (0.6, 0.4 - 1e-9)])
        assert 0.0 < hypervolume(f, ref) < 1.0


class TestGammaOfReference:
    def test_adding_points_refines_gaps(self):
        # gamma of the full reference front never exceeds gamma of any of
        # its nonempty subsets (extra points only split gaps)
        rng = np.random.default_rng(4)
        for _ in range(20):
            a = nondominated_rows(rng.uniform(0, 1, size=(5, 2)))
            b = nondominated_rows(rng.uniform(0, 1, size=(5, 2)))
            ref = build_reference([front(a, solver="a"), front(b, solver="b")])
            ref_front = FrontSet(ref.front, solver="ref")
            size = len(ref.front)
            keep = rng.choice(size, size=int(rng.integers(1, size + 1)), replace=False)
            subset = FrontSet(ref.front[np.sort(keep)], solver="subset")
            assert gamma_metric(ref_front, ref) <= gamma_metric(subset, ref) + 1e-12


class TestPerformanceProfile:
    def test_two_solver_example(self):
        curves = performance_profile(np.array([[1.0, 2.0]]), ["a", "b"])
        taus_a, rhos_a = curves["a"]
        taus_b, rhos_b = curves["b"]
        assert list(taus_a) == [1.0, 2.0]
        assert list(rhos_a) == [1.0, 1.0]
        assert list(rhos_b) == [0.0, 1.0]

    def test_identical_times_all_win(self):
        curves = performance_profile(np.array([[3.0, 3.0], [5.0, 5.0]]), ["a", "b"])
        for taus, rhos in curves.values():
            assert rhos[0] == 1.0

    def test_invert_for_larger_is_better(self):
        curves = performance_profile(
            np.array([[1.0, 0.5]]), ["a", "b"], invert=True
        )
        taus_b, rhos_b = curves["b"]
        assert list(taus_b) == [1.0, 2.0]
        assert rhos_b[0] == 0.0 and rhos_b[1] == 1.0

    def test_failures_never_counted(self):
        curves = performance_profile(
            np.array([[1.0, np.nan], [2.0, 4.0]]), ["a", "b"]
        )
        taus_b, rhos_b = curves["b"]
        assert rhos_b[-1] == 0.5  # failed on one of two problems

    def test_all_failed_problem_dropped(self):
        curves = performance_profile(
            np.array([[np.nan, np.nan], [1.0, 2.0]]), ["a", "b"]
        )
        taus_a, rhos_a = curves["a"]
        assert rhos_a[0] == 1.0  # |P| reduced to the solvable problem

    @settings(max_examples=60, deadline=None)
    @given(
        st.lists(
            st.lists(st.one_of(st.none(), st.floats(0.1, 100.0)), min_size=3, max_size=3),
            min_size=1,
            max_size=6,
        )
    )
    def test_profile_properties(self, table):
        t = np.array(
            [[np.nan if v is None else v for v in row] for row in table], dtype=float
        )
        curves = performance_profile(t, ["a", "b", "c"])
        solvable = ~np.all(np.isnan(t), axis=1)
        total = int(solvable.sum())
        for s, (taus, rhos) in enumerate(curves.values()):
            assert np.all(np.diff(rhos) >= 0)
            assert np.all((0.0 <= rhos) & (rhos <= 1.0))
            if total:
                solved = int((~np.isnan(t[solvable, s])).sum())
                assert rhos[-1] == pytest.approx(solved / total)

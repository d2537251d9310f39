import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rmtlab import experiments as ex
from rmtlab.transport import circle_tail
from rmtlab.ensembles import EnsembleSpec
from rmtlab.errors import BudgetExceeded, DegenerateFit, InsufficientReps, InvalidSpec

GUE = EnsembleSpec("GUE", 8)


class TestRateFit:
    def test_inverse_n(self):
        slope, intercept, se = ex.fit_loglog_rate([(n, 1 / n) for n in (8, 16, 32, 64)])
        assert slope == pytest.approx(-1, abs=1e-12) and intercept == pytest.approx(0, abs=1e-12)
        assert se == pytest.approx(0, abs=1e-12)

    def test_constant(self):
        assert ex.fit_loglog_rate([(n, 3.0) for n in (2, 5, 11)])[0] == pytest.approx(0, abs=1e-14)

    def test_two_points(self):
        slope, _, se = ex.fit_loglog_rate([(10, 1.0), (100, 0.01)])
        assert slope == pytest.approx(-2) and se == 0

    def test_log_correction_frozen(self):
        sizes = [64, 128, 256, 512, 1024]
        pairs = [(n, math.sqrt(math.log(n)) / n) for n in sizes]
        oracle = np.polyfit(np.log(sizes), np.log([d for _, d in pairs]), 1)[0]
        slope = ex.fit_loglog_rate(pairs)[0]
        assert slope == pytest.approx(oracle, abs=1e-13)
        assert slope == pytest.approx(-0.908174936614144, abs=1e-12)

    @given(st.lists(st.integers(2, 10_000), min_size=3, max_size=8, unique=True),
           st.floats(-3, 1), st.floats(-5, 5))
    def test_recovers_power_law(self, sizes, b, a):
        slope, intercept, se = ex.fit_loglog_rate([(n, math.exp(a) * n ** b) for n in sizes])
        assert slope == pytest.approx(b, abs=1e-9) and intercept == pytest.approx(a, abs=1e-7)

    @pytest.mark.parametrize("pairs", [[(8, 1.0)], [(8, 1.0), (8, 2.0)], [(8, 1.0), (16, 0.0)],
                                       [(8, 1.0), (16, -1.0)], [(0, 1.0), (16, 1.0)]])
    def test_degenerate(self, pairs):
        with pytest.raises(DegenerateFit):
            ex.fit_loglog_rate(pairs)


class TestDistanceScan:
    def test_config_validation(self):
        with pytest.raises(InvalidSpec):
            ex.ExperimentConfig(GUE, (16, 8))
        with pytest.raises(InvalidSpec):
            ex.ExperimentConfig(GUE, (8,), reps=0)
        with pytest.raises(InvalidSpec):
            ex.ExperimentConfig(GUE, (8,), target="mean")
        with pytest.raises(InvalidSpec):
            ex.ExperimentConfig(EnsembleSpec("Compression", 8, k=4), (8,))
        with pytest.raises(InvalidSpec):
            ex.ExperimentConfig(EnsembleSpec("Compression", 8, k=4), (8,), target="pooled", pool_reps=51)

    def test_single_size_has_no_slope(self):
        report = ex.run_distance_scan(ex.ExperimentConfig(GUE, (8,), reps=3))
        assert len(report.rows) == 3 and report.slope is None and report.complete

    def test_rows_and_fit(self):
        report = ex.run_distance_scan(ex.ExperimentConfig(GUE, (8, 16, 32), reps=4, master_seed=2))
        assert [(r.n, r.rep) for r in report.rows] == [(n, r) for n in (8, 16, 32) for r in range(4)]
        assert all(r.distance > 0 and r.tail_bound == 0 for r in report.rows)
        means = report.mean_by_n()
        assert report.slope == pytest.approx(ex.fit_loglog_rate(sorted(means.items()))[0])

    def test_deterministic_across_threads(self):
        cfgs = [ex.ExperimentConfig(EnsembleSpec("Haar", 8), (8, 16), reps=6, master_seed=5, threads=t)
                for t in (1, 4)]
        a, b = (ex.run_distance_scan(c) for c in cfgs)
        assert [(r.n, r.rep, r.distance, r.tail_bound) for r in a.rows] == \
               [(r.n, r.rep, r.distance, r.tail_bound) for r in b.rows]
        assert a.slope == b.slope

    def test_planar_rows_carry_tail(self):
        report = ex.run_distance_scan(ex.ExperimentConfig(EnsembleSpec("Haar", 8), (8,), reps=2))
        assert all(r.tail_bound == pytest.approx(circle_tail(8)) for r in report.rows)

    def test_budget(self):
        cfg = ex.ExperimentConfig(GUE, (8, 16, 32), reps=2, budget_seconds=0.0)
        with pytest.raises(BudgetExceeded) as info:
            ex.run_distance_scan(cfg)
        report = info.value.report
        assert not report.complete and {r.n for r in report.rows} == {8}

    def test_discretization_target(self):
        cfg = ex.ExperimentConfig(EnsembleSpec("HaarPower", 8, m=2), (8,), reps=2, target="discretization")
        assert all(r.tail_bound == 0 for r in ex.run_distance_scan(cfg).rows)

    def test_pooled_target(self):
        spec = EnsembleSpec("RandomizedSum", 8, b_tag="equispaced")
        report = ex.run_distance_scan(ex.ExperimentConfig(spec, (8, 16), reps=3, target="pooled", pool_reps=50))
        assert len(report.rows) == 6 and report.slope is not None

    def test_mean_distances(self):
        out = ex.mean_distances(GUE, [8, 16], [5, 3], master_seed=1)
        assert [(m.n, m.reps) for m in out] == [(8, 5), (16, 3)]
        assert all(m.mean > 0 and m.se > 0 for m in out)
        with pytest.raises(InvalidSpec):
            ex.mean_distances(GUE, [8, 16], [5])


class TestMeanMeasure:
    def test_deterministic_source(self):
        z = np.array([-1.0, 0.5, 2.0])
        est = ex.mean_measure_estimate(lambda r: z, 50)
        assert np.array_equal(est.pooled.real_sorted(), np.sort(np.repeat(z, 50)))
        assert est.split_half == 0

    def test_sum_with_zero_b_is_symmetric(self):
        est = ex.mean_measure_estimate(EnsembleSpec("RandomizedSum", 8), 50, master_seed=3)
        atoms = est.pooled.real_sorted()
        assert np.allclose(atoms, -atoms[::-1], atol=1e-12)
        assert abs(atoms.mean()) <= 1e-12

    def test_rep_count(self):
        for reps in (48, 51):
            with pytest.raises(InvalidSpec):
                ex.mean_measure_estimate(GUE, reps)
        with pytest.raises(InvalidSpec):
            ex.mean_measure_estimate("GUE", 50)

    def test_split_half_shrinks(self):
        spec = EnsembleSpec("RandomizedSum", 8, b_tag="equispaced")
        avg = [np.mean([ex.mean_measure_estimate(spec, reps, master_seed=s).split_half for s in range(6)])
               for reps in (50, 100, 200, 400)]
        assert all(b < a for a, b in zip(avg, avg[1:]))

    def test_independent_stream(self):
        a = ex.mean_measure_estimate(GUE, 50, master_seed=1).pooled.real_sorted()
        b = np.sort(np.concatenate(ex.spectra(GUE, 1, 50)))
        assert not np.array_equal(a, b)


class TestRigidity:
    def test_shape(self):
        prof = ex.rigidity_profile("GUE", 2, 1)
        assert prof.msd.shape == (2,) and np.all(np.isfinite(prof.msd)) and np.all(prof.msd >= 0)

    def test_bulk_indices(self):
        assert list(ex.bulk_indices(8) + 1) == [2, 3, 4, 5, 6]
        assert list(ex.bulk_indices(4) + 1) == [1, 2, 3]

    def test_predicted_locations(self):
        assert np.allclose(ex.predicted_locations("HaarU", 4), [math.pi / 2, math.pi, 3 * math.pi / 2, 2 * math.pi])
        g = ex.predicted_locations("GUE", 2)
        assert g == pytest.approx([0, 2], abs=1e-12)
        with pytest.raises(InvalidSpec):
            ex.predicted_locations("GOE", 4)

    def test_angles_in_half_open_interval(self):
        a = ex._angles_0_2pi_closed(np.array([1.0 + 0j, -1.0, 1j]))
        assert list(a) == [math.pi / 2, math.pi, 2 * math.pi]

    def test_limits(self):
        with pytest.raises(InvalidSpec):
            ex.rigidity_profile("GUE", 2048, 30)

    @pytest.mark.parametrize("ensemble", ["GUE", "HaarU"])
    def test_bulk_rate(self, ensemble):
        pairs = [(n, ex.rigidity_profile(ensemble, n, 30, 3, threads=None).bulk) for n in (64, 128, 256, 512)]
        assert ex.fit_loglog_rate(pairs)[0] <= -1.6


class TestCounting:
    def test_full_circle(self):
        rep = ex.counting_tail_experiment("HaarU", 12, 2 * math.pi, 50)
        assert rep.empirical_mean == 12 and rep.empirical_variance == 0
        assert rep.kernel_mean == pytest.approx(12) and rep.kernel_variance == pytest.approx(0, abs=1e-12)

    def test_small_run(self):
        rep = ex.counting_tail_experiment("GUE", 10, 0.0, 2000, master_seed=4)
        assert rep.kernel_mean == pytest.approx(5, abs=1e-9)
        assert rep.mean_z < 4 and rep.variance_z < 4 and not rep.violations
        assert np.all(np.diff(rep.tail.exceedance) <= 0)

    def test_rejects_other_ensembles(self):
        with pytest.raises(InvalidSpec):
            ex.counting_kernel_spec("GOE", 4)


class TestRains:
    def test_block_sizes(self):
        assert sorted(ex.rains_block_sizes(7, 3)) == [2, 2, 3]
        for n in range(1, 20):
            for m in range(1, n + 1):
                s = ex.rains_block_sizes(n, m)
                assert sum(s) == n and set(s) <= {n // m, -(-n // m)}
        with pytest.raises(InvalidSpec):
            ex.rains_block_sizes(3, 4)

    def test_m_one_is_identical(self):
        rep = ex.rains_test(6, 1, 200)
        assert rep.passed and all(a.statistic == 0 for a in rep.arcs)

    def test_small_case(self):
        rep = ex.rains_test(6, 2, 800, master_seed=2)
        assert rep.passed and len(rep.arcs) == 3 and rep.sizes == [3, 3]


class TestConcentration:
    def test_insufficient_reps(self):
        with pytest.raises(InsufficientReps):
            ex.concentration_tail_experiment(GUE, "trace", 999)

    def test_unknown_functional(self):
        with pytest.raises(InvalidSpec):
            ex.concentration_tail_experiment(GUE, "det", 1000)

    def test_trace_is_standard_normal(self):
        t = np.linspace(0, 3, 13)
        est, values = ex.concentration_tail_experiment(GUE, "trace", 1000, master_seed=6, center=0.0, t_grid=t)
        assert est.exceedance[0] == pytest.approx(1.0)
        # DKW bounds the CDF; the two-sided tail is a difference of two CDF values
        assert np.max(np.abs(est.exceedance - ex.normal_two_sided_tail(t))) <= 2 * ex.dkw_epsilon(1000)
        assert est.c is not None and est.c > 0

    def test_log_concavity_detects_sign(self):
        t = np.linspace(0, 3, 20)
        concave = np.exp(-t ** 2 - 0.3 * t ** 4)
        convex = np.exp(-t ** 2 + 0.05 * t ** 4)
        assert ex.log_concavity_test(t, concave, 10 ** 7)[0] < 0
        assert ex.log_concavity_test(t, convex, 10 ** 7)[0] > 0

    def test_envelopes(self):
        assert ex.gue_w2_envelope(4, 0.0) == 1
        assert ex.normal_two_sided_tail(0.0) == pytest.approx(1)
        assert ex.dkw_epsilon(2000) == pytest.approx(math.sqrt(math.log(200) / 4000))


class TestLipschitz:
    def test_suite(self):
        cases = ex.lipschitz_suite(1, 100)
        assert [c.name for c in cases] == ["hoffman-wielandt", "wishart", "randomized-sum", "qsg-equality"]
        assert all(c.passed and c.violations == 0 for c in cases)
        assert all(c.max_ratio <= 1 + 1e-9 for c in cases)
        assert abs(cases[-1].max_ratio - 1) <= 1e-12

    def test_minimum_cases(self):
        with pytest.raises(InvalidSpec):
            ex.lipschitz_suite(0, 99)

    def test_zero_a_case(self):
        assert ex._ratio(0.0, 0.0) == 0.0
        assert ex._ratio(1.0, 0.0) == math.inf

import numpy as np
import pytest

from aoa_auth import OcsvmModel, OcsvmParams, train
from aoa_auth.ocsvm import (
    MEDIAN_HEURISTIC,
    OcsvmConvergenceError,
    dual_objective,
    kernel,
    median_heuristic_gamma,
)

from oracles import projected_gradient_ocsvm


class TestKernel:
    def test_self_similarity_is_one(self):
        assert kernel(3.7, 3.7, 2.0) == pytest.approx(1.0)

    def test_known_value(self):
        # exp(-0.5 * 2^2) = exp(-2)
        assert kernel(1.0, 3.0, 0.5) == pytest.approx(np.exp(-2.0))

    def test_symmetry_and_broadcast(self):
        x = np.array([0.0, 1.0, -2.0])
        k = kernel(x[:, None], x[None, :], 0.3)
        assert np.allclose(k, k.T)
        assert np.allclose(np.diag(k), 1.0)

    def test_rejects_nonpositive_gamma(self):
        with pytest.raises(ValueError):
            kernel(0.0, 1.0, 0.0)


class TestMedianHeuristic:
    def test_two_points(self):
        # single pairwise distance 2 -> median d^2 = 4 -> gamma = 1/8
        assert median_heuristic_gamma(np.array([0.0, 2.0]), 0.0025) == pytest.approx(
            0.125
        )

    def test_floor_engages_for_collapsed_cluster(self):
        x = np.full(50, 0.3)
        assert median_heuristic_gamma(x, 0.0025) == pytest.approx(200.0)

    def test_scale_dependence(self):
        rng = np.random.default_rng(0)
        x = rng.standard_normal(100)
        g1 = median_heuristic_gamma(x, 0.0)
        g2 = median_heuristic_gamma(3.0 * x, 0.0)
        assert g2 == pytest.approx(g1 / 9.0)


class TestTrain:
    def test_two_identical_samples(self):
        # a zero-width cluster puts the boundary exactly on the point: the
        # decision value is 0 there (rejected by convention) and negative
        # everywhere else
        m = train(np.array([1.0, 1.0]), OcsvmParams(nu=1.0))
        assert m.rho == pytest.approx(1.0)
        ok, val = m.decide(1.0)
        assert not ok and val == pytest.approx(0.0, abs=1e-12)
        ok2, val2 = m.decide(2.0)
        assert not ok2 and val2 < -0.5
        assert m.degenerate_rho

    def test_matches_projected_gradient_oracle(self):
        # spot check; the acceptance suite runs the full 20-instance sweep
        rng = np.random.default_rng(1)
        for trial in range(6):
            l = int(rng.integers(5, 21))
            x = rng.normal(0.0, 1.0, l)
            nu = float(rng.uniform(0.2, 0.9))
            gamma = float(rng.uniform(0.1, 2.0))
            params = OcsvmParams(nu=nu, gamma=gamma, solver_tol=1e-10)
            m = train(x, params)
            k_matrix = kernel(x[:, None], x[None, :], gamma)
            ref = projected_gradient_ocsvm(k_matrix, 1.0 / (nu * l))
            alpha = np.zeros(l)
            idx = {v: i for i, v in enumerate(x)}
            for p, a in zip(m.support_points, m.alphas):
                alpha[idx[p]] = a
            assert dual_objective(alpha, k_matrix) == pytest.approx(
                dual_objective(ref, k_matrix), abs=1e-6
            )

    def test_kkt_conditions_hold(self):
        rng = np.random.default_rng(2)
        x = rng.normal(0.0, 0.01, 200)
        params = OcsvmParams(nu=0.1, solver_tol=1e-8)
        m = train(x, params)
        # constraints
        c = 1.0 / (params.nu * len(x))
        assert np.all(m.alphas >= -1e-12)
        assert np.all(m.alphas <= c + 1e-12)
        assert np.sum(m.alphas) == pytest.approx(1.0, abs=1e-9)

    def test_nu_bounds_training_rejection_rate(self):
        rng = np.random.default_rng(3)
        x = rng.normal(0.0, 1.0, 1000)
        for nu in (0.015, 0.1, 0.3):
            m = train(x, OcsvmParams(nu=nu, solver_tol=1e-8, max_iters=2_000_000))
            rejected = np.mean(m.decision(x) < 0.0)
            assert abs(rejected - nu) < 0.01

    def test_support_vector_count_at_least_nu_l(self):
        rng = np.random.default_rng(4)
        x = rng.normal(0.0, 0.005, 500)
        m = train(x, OcsvmParams(nu=0.1))
        assert len(m.support_points) >= 0.1 * 500 - 1

    def test_far_outlier_rejected(self):
        rng = np.random.default_rng(5)
        x = rng.normal(0.0, 0.005, 1000)
        m = train(x, OcsvmParams())
        ok, val = m.decide(45.0)
        assert not ok and val < 0.0
        ok0, _ = m.decide(0.0)
        assert ok0

    def test_decision_decreases_away_from_cluster(self):
        rng = np.random.default_rng(6)
        x = rng.normal(0.0, 0.005, 500)
        m = train(x, OcsvmParams())
        # stay close enough that the kernel term has not underflowed below
        # float resolution against rho
        scan = m.decision(np.linspace(0.05, 0.3, 30))
        assert np.all(np.diff(scan) < 0.0)

    def test_explicit_gamma_respected(self):
        x = np.random.default_rng(7).normal(0.0, 1.0, 50)
        m = train(x, OcsvmParams(gamma=0.77))
        assert m.gamma == 0.77

    def test_convergence_error_carries_violation(self):
        rng = np.random.default_rng(8)
        x = rng.normal(0.0, 1.0, 400)
        with pytest.raises(OcsvmConvergenceError) as exc:
            train(x, OcsvmParams(nu=0.5, solver_tol=1e-14, max_iters=3))
        assert exc.value.kkt_violation > 0.0

    def test_rejects_tiny_training_set(self):
        with pytest.raises(ValueError):
            train(np.array([1.0]))

    def test_rejects_bad_nu(self):
        with pytest.raises(ValueError):
            OcsvmParams(nu=0.0)

    def test_gamma_string_must_be_known(self):
        with pytest.raises(ValueError):
            OcsvmParams(gamma="mean-heuristic")
        assert OcsvmParams(gamma=MEDIAN_HEURISTIC).gamma == MEDIAN_HEURISTIC


class TestSerialization:
    def test_round_trip_is_exact(self, tmp_path):
        rng = np.random.default_rng(9)
        x = rng.normal(0.0, 0.01, 300)
        m = train(x, OcsvmParams())
        path = tmp_path / "model.txt"
        m.save(path)
        m2 = OcsvmModel.load(path)
        assert np.array_equal(m.support_points, m2.support_points)
        assert np.array_equal(m.alphas, m2.alphas)
        assert m2.rho == m.rho and m2.gamma == m.gamma
        assert m2.nu == m.nu and m2.train_size == m.train_size
        probe = np.linspace(-1.0, 1.0, 11)
        assert np.array_equal(m.decision(probe), m2.decision(probe))

import numpy as np
import pytest

import conewalks as cw

NSEW = [(0, 1), (0, -1), (1, 0), (-1, 0)]
NSEW_SW = [(1, 0), (-1, 0), (0, 1), (0, -1), (-1, -1)]
HALFSPACE_MODEL = [(1, -1), (-1, 1), (-1, -1)]


def plastic_root():
    """Real root of s^3 - s - 1 = 0 by bisection (independent of the solver)."""
    lo, hi = 1.0, 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid ** 3 - mid - 1.0 < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class TestMinimizeOnDual:
    def test_drift_in_cone_minimum_at_apex(self):
        cert = cw.minimize_on_dual(cw.FiniteLaplace(cw.from_step_set(NSEW)), cw.orthant(2))
        assert np.allclose(cert.x_star, [0.0, 0.0])
        assert abs(cert.rho - 1.0) <= 1e-14
        assert cert.active_set == (0, 1)

    def test_1d_closed_form(self):
        m = cw.probability_measure([(1,), (-1,)], [0.25, 0.75])
        cert = cw.minimize_on_dual(cw.FiniteLaplace(m), cw.orthant(1))
        assert abs(cert.x_star[0] - 0.5 * np.log(3.0)) <= 1e-7
        assert abs(cert.rho - np.sqrt(3) / 2) <= 1e-12

    def test_five_step_plastic_model(self):
        s = plastic_root()
        expected_rho = (2 * s + 2 / s + 1 / s ** 2) / 5.0
        cert = cw.minimize_on_dual(cw.FiniteLaplace(cw.from_step_set(NSEW_SW)), cw.orthant(2))
        assert abs(cert.x_star[0] - cert.x_star[1]) <= 1e-8  # symmetry diagonal
        assert abs(np.exp(cert.x_star[0]) - s) <= 1e-7
        assert abs(cert.rho - expected_rho) <= 1e-12

    def test_gaussian_drift_matches_projection_formula(self):
        cert = cw.minimize_on_dual(cw.GaussianLaplace([-1.0, -1.0]), cw.orthant(2))
        assert abs(cert.rho - np.exp(-1.0)) <= 1e-9

    def test_improper_model_raises_with_witness(self):
        with pytest.raises(cw.ImproperModelError) as err:
            cw.minimize_on_dual(cw.FiniteLaplace(cw.from_step_set(HALFSPACE_MODEL)), cw.orthant(2))
        assert np.allclose(err.value.witness, [0.5, 0.5], atol=1e-9)

    def test_h1_violation_rejected(self):
        flat = cw.FiniteLaplace(cw.from_step_set([(1, 1), (-1, -1)]))
        with pytest.raises(ValueError):
            cw.minimize_on_dual(flat, cw.orthant(2))

    def test_halfspace_cone_reduces_to_scalar_problem(self):
        # K = upper half-plane, dual = vertical ray; closed form from
        # (1/6) e^t + (1/2) e^{-t} + 1/3 minimized at t = ln(3)/2
        m = cw.probability_measure(NSEW, [1 / 6, 3 / 6, 1 / 6, 1 / 6])
        cert = cw.minimize_on_dual(cw.FiniteLaplace(m), cw.halfspace([0.0, 1.0]))
        expected = np.sqrt(3) / 3 + 1 / 3
        assert abs(cert.rho - expected) <= 1e-12
        assert abs(cert.x_star[1] - 0.5 * np.log(3.0)) <= 1e-7
        assert abs(cert.x_star[0]) == 0.0

    def test_inequality_cone_agrees_with_orthant(self):
        # the orthant written as an inequality cone goes down the multi-ray
        # projected-gradient path and must land on the same minimum
        ineq = cw.inequalities([[1.0, 0.0], [0.0, 1.0]])
        model = cw.FiniteLaplace(cw.from_step_set(NSEW_SW))
        cert_orth = cw.minimize_on_dual(model, cw.orthant(2))
        cert_ineq = cw.minimize_on_dual(model, ineq, tol=1e-10)
        assert abs(cert_ineq.rho - cert_orth.rho) <= 1e-9
        assert np.allclose(cert_ineq.x_star, cert_orth.x_star, atol=1e-5)

    def test_generated_walk_cone_unsupported(self):
        model = cw.FiniteLaplace(cw.from_step_set(NSEW))
        with pytest.raises(cw.UnsupportedConeError):
            cw.minimize_on_dual(model, cw.generated([[1.0, 0.0], [1.0, 1.0]]))

    def test_certificate_internal_consistency(self):
        model = cw.FiniteLaplace(cw.from_step_set(NSEW_SW))
        cert = cw.minimize_on_dual(model, cw.orthant(2))
        assert abs(cert.rho - cw.value(model, cert.x_star)) <= 1e-14 * cert.rho
        assert np.allclose(cert.grad, cw.gradient(model, cert.x_star))
        assert cw.contains(cw.dual(cw.orthant(2)), cert.x_star, tol=1e-10)


class TestKKTInvariants:
    def _check(self, steps, cone):
        m = cw.from_step_set(steps)
        model = cw.FiniteLaplace(m)
        cert = cw.minimize_on_dual(model, cone)
        scale = 1e-8 * (1.0 + np.linalg.norm(cert.grad) * np.linalg.norm(cert.x_star))
        assert cert.kkt_membership_residual <= 1e-8
        assert abs(cert.kkt_orthogonality) <= scale
        # tilted drift lands in the cone, orthogonal to the minimizer
        drift = cw.mean(cw.tilt(m, cert.x_star))
        assert np.allclose(drift, cert.grad / cert.rho, atol=1e-12)
        assert cw.contains(cone, drift, tol=1e-8)
        assert abs(drift @ cert.x_star) <= 1e-8 * (1.0 + np.linalg.norm(drift) * np.linalg.norm(cert.x_star))

    def test_corpus_2d(self, proper_2d_corpus):
        for steps in proper_2d_corpus:
            self._check(steps, cw.orthant(2))

    def test_corpus_3d(self, proper_3d_corpus):
        for steps in proper_3d_corpus:
            self._check(steps, cw.orthant(3))


class TestSolverRobustness:
    def test_solver_independence_of_start(self, proper_2d_corpus):
        rng = np.random.default_rng(21)
        for steps in proper_2d_corpus[:5]:
            model = cw.FiniteLaplace(cw.from_step_set(steps))
            base = cw.minimize_on_dual(model, cw.orthant(2))
            for _ in range(10):
                x0 = np.abs(rng.normal(size=2)) * 2.0
                cert = cw.minimize_on_dual(model, cw.orthant(2), x0=x0)
                assert abs(cert.rho - base.rho) <= 1e-9

    def test_upper_bound_dominance(self, proper_2d_corpus):
        rng = np.random.default_rng(22)
        for steps in proper_2d_corpus[:5]:
            model = cw.FiniteLaplace(cw.from_step_set(steps))
            cert = cw.minimize_on_dual(model, cw.orthant(2))
            for _ in range(100):
                z = np.abs(rng.normal(size=2))
                assert cert.rho <= cw.upper_bound_at(model, cw.orthant(2), z) + 1e-12


class TestGrowthConstant:
    def test_nsew_is_four(self):
        res = cw.growth_constant(NSEW)
        assert abs(res.k_s - 4.0) <= 1e-12

    def test_pm1_is_two(self):
        res = cw.growth_constant([(1,), (-1,)])
        assert abs(res.k_s - 2.0) <= 1e-12

    def test_five_step_value(self):
        s = plastic_root()
        expected = 2 * s + 2 / s + 1 / s ** 2
        res = cw.growth_constant(NSEW_SW)
        assert abs(res.k_s - expected) <= 1e-11

    def test_improper_raises(self):
        with pytest.raises(cw.ImproperModelError):
            cw.growth_constant(HALFSPACE_MODEL)


class TestHyperplaneScan:
    def test_nsew_flat(self):
        res = cw.hyperplane_scan(NSEW, 51)
        assert abs(res.k_min - 4.0) <= 1e-12

    def test_five_step_matches_growth_constant(self):
        growth = cw.growth_constant(NSEW_SW)
        scan = cw.hyperplane_scan(NSEW_SW, 721)
        assert abs(scan.k_min - growth.k_s) <= 1e-3
        assert scan.k_min >= growth.k_s - 1e-9  # scanning a subset cannot undershoot
        # symmetric model: the binding hyperplane is the diagonal
        assert abs(scan.direction[0] - scan.direction[1]) <= 0.01

    def test_refining_grid_tightens(self):
        growth = cw.growth_constant(NSEW_SW)
        gaps = []
        for grid in (11, 101, 1001):
            gaps.append(cw.hyperplane_scan(NSEW_SW, grid).k_min - growth.k_s)
        assert gaps[0] >= gaps[1] >= gaps[2] >= 0.0
        assert gaps[2] <= 1e-5

    def test_1d_degenerate_single_direction(self):
        growth = cw.growth_constant([(1,), (-1,)])
        scan = cw.hyperplane_scan([(1,), (-1,)], 5)
        assert abs(scan.k_min - growth.k_s) <= 1e-12

    def test_3d_scan_close_to_growth(self):
        steps = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1), (-1, -1, -1)]
        growth = cw.growth_constant(steps)
        scan = cw.hyperplane_scan(steps, 3600)
        assert scan.k_min >= growth.k_s - 1e-9
        assert scan.k_min - growth.k_s <= 5e-3


class TestBrownianRate:
    def test_drift_inside_gives_one(self):
        assert cw.brownian_rate([1.0, 1.0], cw.orthant(2)) == 1.0

    def test_negative_diagonal(self):
        assert abs(cw.brownian_rate([-1.0, -1.0], cw.orthant(2)) - np.exp(-1.0)) <= 1e-15

    def test_halfspace_drop(self):
        assert abs(cw.brownian_rate([3.0, -4.0], cw.halfspace([0.0, 1.0])) - np.exp(-8.0)) <= 1e-18

    def test_matches_gaussian_solver(self):
        rng = np.random.default_rng(23)
        for _ in range(20):
            a = rng.normal(size=2) * 1.5
            closed = cw.brownian_rate(a, cw.orthant(2))
            cert = cw.minimize_on_dual(cw.GaussianLaplace(a), cw.orthant(2))
            assert abs(closed - cert.rho) <= 1e-9


class TestUpperBound:
    def test_at_minimizer_and_origin(self):
        m = cw.probability_measure([(1,), (-1,)], [0.25, 0.75])
        model = cw.FiniteLaplace(m)
        cert = cw.minimize_on_dual(model, cw.orthant(1))
        assert abs(cw.upper_bound_at(model, cw.orthant(1), cert.x_star) - cert.rho) <= 1e-15
        assert abs(cw.upper_bound_at(model, cw.orthant(1), [0.0]) - 1.0) <= 1e-15
        expected = np.e / 4 + 3 / (4 * np.e)
        assert abs(cw.upper_bound_at(model, cw.orthant(1), [1.0]) - expected) <= 1e-15

    def test_rejects_points_outside_dual(self):
        model = cw.FiniteLaplace(cw.from_step_set(NSEW))
        with pytest.raises(ValueError):
            cw.upper_bound_at(model, cw.orthant(2), [-1.0, 0.5])

import numpy as np
import pytest

import conewalks as cw


def _random_cone_point(rng, cone):
    """A point of the cone, for projection-optimality sampling."""
    if cone.kind == "orthant":
        return np.abs(rng.normal(size=cone.dim))
    if cone.kind == "halfspace":
        return cw.project(cone, rng.normal(size=cone.dim))
    if cone.kind == "generated":
        t = np.abs(rng.normal(size=cone.vectors.shape[0]))
        return t @ cone.vectors
    raise AssertionError


class TestContains:
    def test_apex_belongs_with_zero_tolerance(self):
        assert cw.contains(cw.orthant(2), [0.0, 0.0], tol=0.0)

    def test_halfspace_negative_side(self):
        assert not cw.contains(cw.halfspace([1.0, 1.0]), [1.0, -2.0])

    def test_generated_membership_solves_ray_system(self):
        cone = cw.generated([[1.0, 0.0], [1.0, 1.0]])
        # oracle: the 2x2 system gives coefficients (1, 1) >= 0
        coeffs = np.linalg.solve(np.array([[1.0, 1.0], [0.0, 1.0]]), [2.0, 1.0])
        assert np.all(coeffs >= 0)
        assert cw.contains(cone, [2.0, 1.0])
        assert not cw.contains(cone, [0.0, 1.0])

    def test_dimension_mismatch(self):
        with pytest.raises(cw.ConeError):
            cw.contains(cw.orthant(2), [1.0, 2.0, 3.0])


class TestDual:
    def test_orthant_self_dual_structurally(self):
        d = cw.dual(cw.orthant(3))
        assert d.kind == "orthant" and d.dim == 3

    def test_halfspace_dualizes_to_its_normal_ray(self):
        d = cw.dual(cw.halfspace([2.0, 1.0]))
        assert d.kind == "generated"
        assert np.allclose(d.vectors, [[2.0, 1.0]])
        # the ray {t u}: membership of u and 3u, not of -u
        assert cw.contains(d, [2.0, 1.0]) and cw.contains(d, [6.0, 3.0])
        assert not cw.contains(d, [-2.0, -1.0])

    def test_generated_axes_dualizes_to_orthant_membership(self):
        d = cw.dual(cw.generated([[1.0, 0.0], [0.0, 1.0]]))
        assert d.kind == "inequalities"
        rng = np.random.default_rng(7)
        orth = cw.orthant(2)
        for _ in range(1000):
            x = rng.normal(size=2) * 3.0
            assert cw.contains(d, x, tol=1e-9) == cw.contains(orth, x, tol=1e-9)

    @pytest.mark.parametrize("cone", [
        cw.orthant(2),
        cw.orthant(3),
        cw.halfspace([1.0, 2.0]),
        cw.generated([[1.0, 0.0], [1.0, 1.0]]),
        cw.inequalities([[1.0, 0.0], [1.0, 2.0]]),
    ])
    def test_double_dual_round_trip_membership(self, cone):
        double = cw.dual(cw.dual(cone))
        rng = np.random.default_rng(11)
        for _ in range(2000):  # 10^4 points across the five parametrized cones
            x = rng.normal(size=cone.dim) * 2.0
            assert cw.contains(cone, x, tol=1e-9) == cw.contains(double, x, tol=1e-9)


class TestProject:
    def test_orthant_clamps(self):
        assert np.allclose(cw.project(cw.orthant(2), [-1.0, -1.0]), [0.0, 0.0])
        assert np.allclose(cw.project(cw.orthant(2), [3.0, -2.0]), [3.0, 0.0])

    def test_single_ray(self):
        ray = cw.generated([[1.0, 1.0]])
        assert np.allclose(cw.project(ray, [2.0, 0.0]), [1.0, 1.0])

    def test_halfspace(self):
        h = cw.halfspace([0.0, 1.0])
        assert np.allclose(cw.project(h, [5.0, -3.0]), [5.0, 0.0])
        assert np.allclose(cw.project(h, [5.0, 3.0]), [5.0, 3.0])

    def test_unsupported_kind(self):
        with pytest.raises(cw.UnsupportedConeError):
            cw.project(cw.generated([[1.0, 0.0], [1.0, 1.0]]), [1.0, 1.0])

    @pytest.mark.parametrize("cone", [
        cw.orthant(3),
        cw.halfspace([1.0, -1.0, 0.5]),
        cw.generated([[1.0, 2.0, 0.0]]),
    ])
    def test_projection_is_nearest_point(self, cone):
        rng = np.random.default_rng(3)
        for _ in range(5):
            a = rng.normal(size=cone.dim) * 2.0
            p = cw.project(cone, a)
            dist = np.linalg.norm(a - p)
            for _ in range(200):
                y = _random_cone_point(rng, cone)
                assert dist <= np.linalg.norm(a - y) + 1e-12


class TestDistance:
    def test_examples(self):
        assert abs(cw.distance(cw.orthant(2), [-1.0, -1.0]) - np.sqrt(2)) <= 1e-14
        assert cw.distance(cw.orthant(2), [1.0, 1.0]) == 0.0
        assert abs(cw.distance(cw.halfspace([0.0, 1.0]), [5.0, -3.0]) - 3.0) <= 1e-14


class TestMoreau:
    def test_coordinatewise_split(self):
        pk, pp = cw.moreau_decompose(cw.orthant(2), [-1.0, 2.0])
        assert np.allclose(pk, [0.0, 2.0]) and np.allclose(pp, [-1.0, 0.0])

    def test_point_in_cone(self):
        pk, pp = cw.moreau_decompose(cw.orthant(2), [3.0, 4.0])
        assert np.allclose(pk, [3.0, 4.0]) and np.allclose(pp, [0.0, 0.0])

    def test_point_in_polar(self):
        pk, pp = cw.moreau_decompose(cw.orthant(2), [-1.0, -1.0])
        assert np.allclose(pk, [0.0, 0.0]) and np.allclose(pp, [-1.0, -1.0])

    @pytest.mark.parametrize("cone", [cw.orthant(2), cw.orthant(4), cw.halfspace([1.0, 2.0, -1.0])])
    def test_random_orthogonal_splits(self, cone):
        rng = np.random.default_rng(5)
        for _ in range(200):
            a = rng.normal(size=cone.dim) * 3.0
            pk, pp = cw.moreau_decompose(cone, a)
            assert np.linalg.norm(a - pk - pp) <= 1e-12 * (1 + np.linalg.norm(a))
            assert abs(pk @ pp) <= 1e-10


class TestShiftedCone:
    def test_examples(self):
        Q = cw.orthant(2)
        assert cw.contains_shifted(Q, [1.0, 1.0], 1.0, [1.0, 1.0])
        assert not cw.contains_shifted(Q, [1.0, 1.0], 1.0, [0.5, 2.0])
        assert cw.contains_shifted(Q, [1.0, 1.0], -1.0, [-0.5, 0.0])

    def test_rejects_non_interior_shift_vector(self):
        with pytest.raises(cw.ConeError):
            cw.contains_shifted(cw.orthant(2), [1.0, 0.0], 1.0, [1.0, 1.0])


class TestInterior:
    def test_has_interior_examples(self):
        assert cw.has_interior(cw.orthant(3))
        assert not cw.has_interior(cw.inequalities([[1.0, 0.0], [-1.0, 0.0]]))
        assert not cw.has_interior(cw.generated([[1.0, 0.0]]))
        assert cw.has_interior(cw.generated([[1.0, 0.0], [1.0, 1.0]]))
        assert cw.has_interior(cw.halfspace([1.0, 1.0]))

    def test_interior_vector_lies_strictly_inside(self):
        for cone in (cw.orthant(2), cw.halfspace([1.0, -2.0]),
                     cw.inequalities([[1.0, 0.0], [1.0, 2.0]]),
                     cw.generated([[1.0, 0.0], [1.0, 1.0]])):
            v = cw.interior_vector(cone)
            assert cw.strictly_contains(cone, v)

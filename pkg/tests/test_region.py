import numpy as np
import pytest
import scipy.optimize

import sscfw
from sscfw.region import nnls

from oracles import (
    cone_projection_bruteforce,
    enumerate_vertices,
    sample_feasible,
    slope_sup_with_escalation,
)


class TestAtomSet:
    def test_diameter_simplex(self, simplex3):
        np.testing.assert_allclose(simplex3.diameter, np.sqrt(2.0))

    def test_diameter_cube(self, cube4):
        np.testing.assert_allclose(cube4.diameter, 2.0)

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            sscfw.AtomSet(np.zeros((0, 3)))


class TestLMO:
    def test_simplex_coordinate_argmax(self, simplex3):
        assert simplex3.lmo(np.array([0.5, -1.0, 2.0])) == 2

    def test_tie_breaks_lowest_index(self, simplex3):
        assert simplex3.lmo(np.zeros(3)) == 0

    def test_cube_matches_vertex_enumeration(self, cube2):
        g = np.array([1.0, -2.0])
        best = max(range(4), key=lambda i: (cube2.atoms[i] @ g, -i))
        idx = cube2.lmo(g)
        assert idx == best
        np.testing.assert_allclose(cube2.atoms[idx], [1.0, 0.0])

    def test_dimension_mismatch(self, simplex3):
        with pytest.raises(ValueError):
            simplex3.lmo(np.zeros(4))


class TestMinimalFace:
    def test_interior_of_simplex(self, simplex3):
        face = simplex3.minimal_face(np.full(3, 1.0 / 3.0))
        assert face.dim == 2
        assert face.face_atoms == (0, 1, 2)

    def test_edge_of_simplex(self, simplex3):
        face = simplex3.minimal_face(np.array([0.5, 0.5, 0.0]))
        assert face.dim == 1
        assert face.face_atoms == (0, 1)

    def test_cube_facet(self, cube2):
        face = cube2.minimal_face(np.array([1.0, 0.3]))
        assert face.dim == 1
        got = {tuple(cube2.atoms[i]) for i in face.face_atoms}
        assert got == {(1.0, 0.0), (1.0, 1.0)}

    def test_infeasible_rejected(self, simplex3):
        with pytest.raises(ValueError):
            simplex3.minimal_face(np.array([0.5, 0.6, 0.0]))


class TestMaxFeasibleStep:
    def test_to_vertex(self, simplex3):
        x = np.full(3, 1.0 / 3.0)
        d = np.eye(3)[0] - x
        np.testing.assert_allclose(simplex3.max_feasible_step(x, d), 1.0)

    def test_box_wall(self, cube2):
        np.testing.assert_allclose(
            cube2.max_feasible_step(np.array([0.5, 0.5]), np.array([1.0, 0.0])), 0.5
        )

    def test_component_ratio(self, simplex3):
        x = np.array([0.5, 0.5, 0.0])
        d = np.array([1.0, -1.0, 0.0])
        np.testing.assert_allclose(simplex3.max_feasible_step(x, d), 0.5)

    def test_zero_direction_rejected(self, simplex3):
        with pytest.raises(ValueError):
            simplex3.max_feasible_step(np.eye(3)[0], np.zeros(3))

    def test_endpoint_feasible_and_maximal(self):
        """x + a_max d is feasible; any further step violates a constraint."""
        for region in (sscfw.simplex(4), sscfw.hypercube(3), sscfw.l1_ball(3)):
            rng = np.random.default_rng(17)
            xs = sample_feasible(region, rng, 50)
            for x in xs:
                target = sample_feasible(region, rng, 1)[0]
                d = target - x
                if np.linalg.norm(d) < 1e-9:
                    continue
                amax = region.max_feasible_step(x, d)
                assert np.isfinite(amax)
                end = x + amax * d
                assert (region.A_ub @ end - region.b_ub).max() <= 1e-9
                beyond = x + (amax + 1e-6) * d
                assert (region.A_ub @ beyond - region.b_ub).max() > 1e-10


class TestNormalCone:
    def test_interior_empty(self, cube2):
        assert cube2.normal_cone_generators(np.array([0.5, 0.5])).shape[0] == 0

    def test_simplex_edge_generators(self, simplex3):
        gens = simplex3.normal_cone_generators(np.array([0.5, 0.5, 0.0]))
        rows = {tuple(r) for r in gens}
        assert rows == {(-0.0, -0.0, -1.0), (1.0, 1.0, 1.0), (-1.0, -1.0, -1.0)}

    def test_cube_corner(self, cube2):
        gens = cube2.normal_cone_generators(np.array([1.0, 1.0]))
        rows = {tuple(r) for r in gens}
        assert rows == {(1.0, 0.0), (0.0, 1.0)}


class TestTangentProjectionNorm:
    def test_interior_is_gradient_norm(self, cube2):
        g = np.array([0.3, -0.7])
        np.testing.assert_allclose(
            cube2.tangent_projection_norm(np.array([0.4, 0.6]), g), np.linalg.norm(g)
        )

    def test_normal_direction_projects_to_zero(self, simplex3):
        assert simplex3.tangent_projection_norm(np.eye(3)[0], np.array([1.0, 0.0, 0.0])) <= 1e-12

    def test_vertex_closed_form(self, simplex3):
        """Projection of e2 onto cone{e2-e1, e3-e1} has norm 1/sqrt(2)."""
        val = simplex3.tangent_projection_norm(np.eye(3)[0], np.array([0.0, 1.0, 0.0]))
        np.testing.assert_allclose(val, 1.0 / np.sqrt(2.0), atol=1e-10)


class TestFWGap:
    def test_vertex_enumeration(self, simplex3):
        gap = simplex3.fw_gap(np.eye(3)[0], np.array([-2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]))
        np.testing.assert_allclose(gap, 1.0)

    def test_zero_gradient(self, simplex3):
        assert simplex3.fw_gap(np.eye(3)[0], np.zeros(3)) == 0.0

    def test_stationary_point_nonpositive(self, simplex3):
        # neg_grad in the normal cone at e1: raw gap <= 0
        val = simplex3.fw_gap(np.eye(3)[0], np.array([2.0, 1.0, 1.0]))
        assert val <= 1e-12


class TestMoreauConsistency:
    """Moreau identity: the NNLS normal-cone distance equals the sup of
    normalized slopes toward feasible points.

    The full 10^3-cases-per-region check runs in the acceptance suite;
    this is the same machinery at reduced count.
    """

    @pytest.mark.parametrize("make", [
        lambda: sscfw.simplex(3),
        lambda: sscfw.simplex(5),
        lambda: sscfw.hypercube(4),
        lambda: sscfw.l1_ball(3),
    ])
    def test_sampled_sup_matches(self, make):
        region = make()
        rng = np.random.default_rng(101)
        xs = sample_feasible(region, rng, 150)
        for i, x in enumerate(xs):
            if i < region.atom_set.m:
                x = region.atoms[i]  # include vertices
            g = rng.standard_normal(region.n)
            pi = region.tangent_projection_norm(x, g)
            sup, _ = slope_sup_with_escalation(region, x, g, rng, samples=2000)
            assert pi >= sup - 1e-10
            assert abs(pi - max(0.0, sup)) <= 1e-3


class TestNNLS:
    def test_against_scipy_and_kkt(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            m, k = rng.integers(2, 6), rng.integers(1, 7)
            A = rng.standard_normal((m, k))
            b = rng.standard_normal(m)
            lam, r = nnls(A, b)
            assert lam.min() >= 0
            np.testing.assert_allclose(r, np.linalg.norm(A @ lam - b), atol=1e-12)
            # KKT certificate of optimality: dual feasibility + complementarity
            duals = A.T @ (b - A @ lam)
            assert duals.max() <= 1e-9
            assert abs(duals @ lam) <= 1e-9
            # never worse than scipy's solution (recomputed; its reported
            # rnorm is unreliable in some scipy releases)
            lam_ref, _ = scipy.optimize.nnls(A, b)
            assert r <= np.linalg.norm(A @ lam_ref - b) + 1e-9

    def test_against_bruteforce_cone_projection(self):
        rng = np.random.default_rng(4)
        for _ in range(100):
            m, n = rng.integers(1, 7), rng.integers(2, 5)
            G = rng.standard_normal((m, n))
            y = rng.standard_normal(n)
            _, r = nnls(G.T, y)
            _, dist = cone_projection_bruteforce(G, y)
            np.testing.assert_allclose(r, dist, atol=1e-9)

    def test_dual_cone_distance_identity(self):
        """dist(polar cone, y) = sup over the cone of <c/||c||, y> (sampled)."""
        rng = np.random.default_rng(5)
        for _ in range(60):
            m, n = rng.integers(2, 7), rng.integers(2, 5)
            G = rng.standard_normal((m, n))
            y = rng.standard_normal(n)
            lam, _ = nnls(G.T, y)
            proj_norm = np.linalg.norm(G.T @ lam)  # dist(C*, y) by Moreau
            # sampled sup over c in cone(G)
            w = rng.exponential(1.0, size=(4000, m))
            c = w @ G
            norms = np.linalg.norm(c, axis=1)
            ok = norms > 1e-12
            sup = max(0.0, float(((c[ok] @ y) / norms[ok]).max()) if ok.any() else 0.0)
            # polish with the exact projection direction as a cone member
            p, _ = cone_projection_bruteforce(G, y)
            if np.linalg.norm(p) > 1e-12:
                sup = max(sup, float(p @ y) / np.linalg.norm(p))
            assert proj_norm >= sup - 1e-10
            assert abs(proj_norm - sup) <= 1e-3

    def test_shape_validation(self):
        with pytest.raises(ValueError):
            nnls(np.eye(3), np.zeros(2))


class TestHalfspaceAtomConsistency:
    @pytest.mark.parametrize("make", [
        lambda: sscfw.simplex(3), lambda: sscfw.simplex(5),
        lambda: sscfw.hypercube(2), lambda: sscfw.hypercube(4),
        lambda: sscfw.l1_ball(2), lambda: sscfw.l1_ball(3, 2.5),
    ])
    def test_atoms_satisfy_halfspaces(self, make):
        region = make()
        slack = region.b_ub[:, None] - region.A_ub @ region.atoms.T
        assert slack.min() >= -1e-10

    @pytest.mark.parametrize("make", [
        lambda: sscfw.simplex(3), lambda: sscfw.simplex(5),
        lambda: sscfw.hypercube(2), lambda: sscfw.hypercube(4),
        lambda: sscfw.l1_ball(3),
    ])
    def test_vertices_are_exactly_the_atoms(self, make):
        region = make()
        verts = enumerate_vertices(region.A_ub, region.b_ub)
        assert len(verts) == region.atom_set.m
        for v in verts:
            dists = np.linalg.norm(region.atoms - v, axis=1)
            assert dists.min() <= 1e-8


class TestGenericVRep:
    def test_lmo_and_diameter_only(self):
        seg = sscfw.from_atoms(np.eye(2))
        assert seg.lmo(np.array([0.0, 1.0])) == 1
        np.testing.assert_allclose(seg.diameter, np.sqrt(2.0))
        with pytest.raises(NotImplementedError):
            seg.minimal_face(np.array([0.5, 0.5]))
        with pytest.raises(NotImplementedError):
            seg.tangent_projection_norm(np.array([0.5, 0.5]), np.ones(2))

    def test_with_halfspaces_supports_cones(self):
        A = np.array([[-1.0, 0.0], [0.0, -1.0], [1.0, 1.0], [-1.0, -1.0]])
        b = np.array([0.0, 0.0, 1.0, -1.0])
        seg = sscfw.from_atoms(np.eye(2), (A, b))
        x = np.array([0.5, 0.5])
        g = np.array([1.0, -1.0])
        np.testing.assert_allclose(
            seg.tangent_projection_norm(x, g), np.sqrt(2.0), atol=1e-12
        )

import numpy as np
import pytest

import sscfw
from sscfw import pdirw, pwidth_estimate, pwidth_simplex, rate_constants
from sscfw.directions import pfw_direction
from sscfw.geometry import estimated_bounds, simplex_bounds, tau_for_method
from sscfw.rng import SplitMix64

from test_directions import random_iterate


class TestPdirw:
    def test_segment_midpoint(self):
        atoms = np.eye(2)
        g = np.array([1.0, -1.0]) / np.sqrt(2.0)
        np.testing.assert_allclose(pdirw(atoms, g, np.array([0.5, 0.5])), np.sqrt(2.0))

    def test_vertex_singleton_support(self):
        atoms = np.eye(2)
        g = np.array([-1.0, 1.0])
        # at the vertex e1 the only valid support is {e1}
        val = pdirw(atoms, g, np.array([1.0, 0.0]))
        ghat = g / np.linalg.norm(g)
        np.testing.assert_allclose(val, (atoms @ ghat).max() - atoms[0] @ ghat)

    def test_simplex_barycenter_width_direction(self, simplex3):
        # unique full support; the value is the directional width of the atoms
        u = np.array([1.0, 1.0, -2.0])
        val = pdirw(simplex3.atom_set, u, np.full(3, 1.0 / 3.0))
        np.testing.assert_allclose(val, 3.0 / np.sqrt(6.0), atol=1e-12)

    def test_square_center_uses_min_support(self):
        """The antidiagonal support minimizes the value at the square center."""
        atoms = np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]])
        val = pdirw(atoms, np.array([1.0, 1.0]), np.array([0.5, 0.5]))
        np.testing.assert_allclose(val, 1.0 / np.sqrt(2.0), atol=1e-12)

    def test_monotone_when_atom_added(self, simplex3):
        """Adding the e1-e2 midpoint as an atom cannot increase the value."""
        rng = SplitMix64(21)
        extended = np.vstack([np.eye(3), [0.5, 0.5, 0.0]])
        for _ in range(50):
            w = rng.dirichlet(3)
            x = w @ np.eye(3)
            g = rng.normal(3)
            base = pdirw(np.eye(3), g, x)
            bigger = pdirw(extended, g, x)
            assert bigger <= base + 1e-12

    def test_not_representable_rejected(self):
        with pytest.raises(ValueError):
            pdirw(np.eye(2), np.ones(2), np.array([2.0, -1.0]))

    def test_atom_cap(self):
        with pytest.raises(ValueError):
            pdirw(np.random.default_rng(0).random((13, 2)), np.ones(2), np.zeros(2))

    def test_zero_direction_rejected(self):
        with pytest.raises(ValueError):
            pdirw(np.eye(2), np.zeros(2), np.array([0.5, 0.5]))


class TestPWidthSimplex:
    def test_known_values(self):
        np.testing.assert_allclose(pwidth_simplex(2), np.sqrt(2.0))
        np.testing.assert_allclose(pwidth_simplex(3), np.sqrt(1.5))
        np.testing.assert_allclose(pwidth_simplex(4), 1.0)

    def test_even_odd_formulas(self):
        np.testing.assert_allclose(pwidth_simplex(5), 2.0 * np.sqrt(1.0 / (5 - 0.2)))
        np.testing.assert_allclose(pwidth_simplex(6), 2.0 * np.sqrt(1.0 / 6.0))

    def test_small_n_rejected(self):
        with pytest.raises(ValueError):
            pwidth_simplex(1)


class TestPWidthEstimate:
    def test_segment_exact_any_samples(self):
        for samples in (10, 1000):
            np.testing.assert_allclose(
                pwidth_estimate(np.eye(2), samples=samples, seed=3), np.sqrt(2.0)
            )

    @pytest.mark.parametrize("n", [3, 4])
    def test_simplex_upper_bound_and_tightness(self, n):
        est = pwidth_estimate(np.eye(n), samples=10_000, seed=0)
        closed = pwidth_simplex(n)
        assert est >= closed - 1e-9
        assert est <= 1.05 * closed

    def test_unit_square_upper_bound(self):
        atoms = np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]])
        est = pwidth_estimate(atoms, samples=10_000, seed=0)
        assert est <= 1.0 + 1e-9

    def test_seed_determinism(self):
        atoms = sscfw.hypercube(3).atoms
        a = pwidth_estimate(atoms, samples=500, seed=9)
        b = pwidth_estimate(atoms, samples=500, seed=9)
        assert a == b


class TestSlopeBound:
    def test_pfw_slope_dominates_pdirw_bound(self, simplex3):
        """<g, d_pfw> >= PdirW(A, g, x) <g, e-hat> for feasible descent e,
        on 10^3 valid seeded triples."""
        rng = SplitMix64(31)
        checked = 0
        while checked < 1000:
            it = random_iterate(simplex3, rng)
            g = rng.normal(3)
            if simplex3.tangent_projection_norm(it.point, g) <= 1e-8:
                continue
            # feasible descent direction e: toward a random feasible point
            w = rng.dirichlet(3)
            e = w @ np.eye(3) - it.point
            slope_e = g @ e
            norm_e = np.linalg.norm(e)
            if slope_e <= 1e-10 or norm_e <= 1e-10:
                continue
            p = pfw_direction(simplex3, it, g)
            bound = pdirw(np.eye(3), g, it.point)
            assert p.slope >= bound * (slope_e / norm_e) - 1e-9
            checked += 1


class TestRateConstants:
    def test_reference_point(self):
        consts = rate_constants(1.0, 1.0, 1.0)
        np.testing.assert_allclose(consts["q"], 0.8)
        np.testing.assert_allclose(consts["q_gs_short"], 0.0)
        np.testing.assert_allclose(consts["q_gs_fw"], 0.5)
        np.testing.assert_allclose(consts["K"], 0.5)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            rate_constants(0.0, 1.0, 0.5)
        with pytest.raises(ValueError):
            rate_constants(0.5, 1.0, 1.5)
        with pytest.raises(ValueError):
            rate_constants(2.0, 1.0, 0.5)

    def test_ranges(self):
        rng = SplitMix64(8)
        for _ in range(500):
            lipschitz = 0.1 + 3 * rng.uniform()
            mu = lipschitz * (0.01 + 0.99 * rng.uniform())
            tau = 0.01 + 0.99 * rng.uniform()
            consts = rate_constants(mu, lipschitz, tau)
            assert 0.0 < consts["q"] < 1.0
            assert 0.0 < consts["K"] * lipschitz <= 0.5


class TestBounds:
    def test_simplex_bounds_closed_form(self):
        b = simplex_bounds(3)
        assert b.source == "closed_form"
        np.testing.assert_allclose(b.tau_pfw, pwidth_simplex(3) / np.sqrt(2.0))
        np.testing.assert_allclose(b.tau_afw, b.tau_pfw / 2.0)
        np.testing.assert_allclose(b.tau_fd, b.tau_pfw / 2.0)
        assert 0 < b.tau_pfw <= 1

    def test_estimated_bounds_flagged(self, cube4):
        b = estimated_bounds(cube4.atoms, samples=500, seed=0)
        assert b.source == "sampled_upper_bound"
        assert b.diameter == 2.0
        assert 0 < b.tau_pfw <= 1

    def test_tau_for_method(self):
        b = simplex_bounds(4)
        assert tau_for_method("pfw", b) == b.tau_pfw
        assert tau_for_method("afw", b) == b.tau_afw
        assert tau_for_method("fdfw", b) == b.tau_fd
        with pytest.raises(ValueError):
            tau_for_method("cg", b)

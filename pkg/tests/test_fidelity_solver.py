import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import bloch_vectors, slsqp_optimum, uhlmann_fidelity, uniform_ball
from fidapprox.bloch import fidelity, validate
from fidapprox.errors import PureStateUnsupported
from fidapprox.fidelity_solver import (
    check_distance, classify, edge_solution, in_s2, in_s2_strict, kkt_residual,
    octant_normalize, s1_weights, s2_distance, s2_weights, solve,
)
from fidapprox.results import Provenance
from fidapprox.sets import b3, mixture_bloch

# frozen from closed-form expressions evaluated in 30-digit arithmetic and
# confirmed by multistart SLSQP on the raw weights
D_SYM = 0.0458758547680684918   # 1/4 - sqrt(1.5)/6
D_WORKED = 0.0162882692912616477  # 1/2 - (sqrt(0.54) + 1.2)/4
P0_WORKED = 0.0917517095361369971  # 1/2 - 0.3/sqrt(0.54)
D_PURE_DIAG = 0.211324865405187118  # 1/2 - sqrt(3)/6


class TestOctant:
    def test_signs(self):
        rn, signs = octant_normalize((-0.3, 0.2, -0.1))
        assert rn.as_tuple() == (0.3, 0.2, 0.1)
        assert signs == (-1, 1, -1)

    def test_origin(self):
        rn, signs = octant_normalize((0, 0, 0))
        assert rn.as_tuple() == (0, 0, 0) and signs == (1, 1, 1)

    def test_unmapped_pure_target(self):
        s = 1 / math.sqrt(2)
        res = solve((-s, 0, -s))
        assert res.weights[1] == pytest.approx(0.5, abs=1e-12)
        assert res.weights[3] == pytest.approx(0.5, abs=1e-12)
        # the optimum is the whole edge from |1> to |3>; only D is unique
        d, _ = slsqp_optimum(np.array([-s, 0, -s]))
        assert res.distance == pytest.approx(d, abs=1e-9)


class TestClassify:
    def test_s1(self):
        assert classify((0.2, 0.3, 0.4)).label == "S1"

    def test_s2(self):
        reg = classify((0.5, 0.5, 0.5))
        assert reg.label == "S2"
        p = reg.predicate("S2: x+y|z < sqrt(1-2c^2)+c")
        assert p.holds and p.lhs == pytest.approx(1.0)
        assert p.rhs == pytest.approx(math.sqrt(0.5) + 0.5)

    def test_s3(self):
        reg = classify((0.9, 0.1, 0.3))
        assert reg.label == "S3"
        assert not reg.predicate("S2: x+z|y < sqrt(1-2c^2)+c").holds
        assert not reg.predicate("S2: x+z|y < 2c").holds
        edge = reg.predicate("S3: sum > sqrt(1 - c^2)")
        assert edge.holds and edge.lhs == pytest.approx(1.2) and edge.rhs == pytest.approx(math.sqrt(0.99))

    def test_sign_blind(self):
        assert classify((-0.9, 0.1, -0.3)).label == "S3"

    def test_s4_and_s5(self):
        assert classify((0.1, 0.9, 0.3)).label == "S4"
        assert classify((0.3, 0.9, 0.1)).label == "S5"

    def test_strict_and_inclusive_s2_agree_off_boundary(self, rng):
        pts = np.abs(uniform_ball(rng, 20000))
        x, y, z = pts.T
        strict, incl = in_s2_strict(x, y, z), in_s2(x, y, z)
        # the inclusive set only adds the boundary, which random points miss
        assert np.array_equal(strict, incl)

    def test_pure_diagonal_in_s2(self):
        s = 1 / math.sqrt(3)
        assert classify((s, s, s)).label == "S2"
        assert not in_s2_strict(s, s, s)


class TestSolve:
    def test_s1_weights(self):
        res = solve((0.2, 0.3, 0.4))
        assert res.distance == 0.0
        assert list(res.weights) == pytest.approx([0.45, 0.05, 0.2, 0.0, 0.3, 0.0], abs=1e-15)
        assert res.optimal_bloch.as_tuple() == (0.2, 0.3, 0.4)
        assert res.free_params == (0.0, 0.0)
        assert res.free_param_bound == pytest.approx(0.05)

    def test_symmetric_point(self):
        res = solve((0.5, 0.5, 0.5))
        assert res.distance == pytest.approx(D_SYM, abs=1e-15)
        assert list(res.weights) == pytest.approx([1 / 3, 0, 1 / 3, 0, 1 / 3, 0], abs=1e-15)
        assert res.provenance is Provenance.CLOSED_FORM

    def test_worked_point(self):
        res = solve((0.9, 0.1, 0.3))
        assert res.label == "S3"
        assert res.distance == pytest.approx(D_WORKED, abs=1e-15)
        assert res.weights[0] == pytest.approx(P0_WORKED, abs=1e-15)
        assert res.weights[2] == pytest.approx(1 - P0_WORKED, abs=1e-15)
        assert sum(res.weights[i] for i in (1, 3, 4, 5)) == 0.0

    def test_pure_diagonal(self):
        s = 1 / math.sqrt(3)
        res = solve((s, s, s))
        assert res.label == "S2"
        assert res.distance == pytest.approx(D_PURE_DIAG, abs=1e-12)

    @pytest.mark.parametrize("r", [(0.5, 0.5, 0.5), (0.9, 0.1, 0.3), (0.1, 0.2, 0.95),
                                   (-0.6, 0.6, 0.3), (0.0, 0.8, -0.55)])
    def test_against_slsqp(self, r):
        d, _ = slsqp_optimum(np.array(r))
        assert solve(r).distance == pytest.approx(d, abs=1e-8)

    def test_distance_matches_matrix_fidelity(self, rng):
        for r in uniform_ball(rng, 300):
            res = solve(r)
            assert res.distance == pytest.approx(
                1 - uhlmann_fidelity(r, res.optimal_bloch.as_array()), abs=1e-9)
            assert check_distance(r, res) <= 1e-10

    @settings(max_examples=300)
    @given(bloch_vectors())
    def test_weights_valid(self, r):
        res = solve(r)
        w = res.weights.as_array()
        assert w.min() >= 0.0 and abs(w.sum() - 1.0) <= 1e-12
        v = mixture_bloch(b3(), res.weights)
        assert v.as_tuple() == pytest.approx(res.optimal_bloch.as_tuple(), abs=1e-12)

    def test_octahedral_symmetry(self, rng):
        for r in uniform_ball(rng, 40):
            d0 = solve(r).distance
            for perm in itertools.permutations(range(3)):
                for signs in itertools.product((1, -1), repeat=3):
                    assert solve(np.array(signs) * r[list(perm)]).distance == pytest.approx(d0, abs=1e-14)

    def test_pure_targets(self, rng):
        # F is linear in v for a pure target, so the best mixture is a vertex:
        # D = (1 - max |r_i|) / 2
        pts = uniform_ball(rng, 500)
        pts /= np.linalg.norm(pts, axis=1, keepdims=True)
        for p in pts:
            assert solve(p).distance == pytest.approx((1 - np.abs(p).max()) / 2, abs=1e-12)
        for p in pts[:10]:
            assert solve(p).distance == pytest.approx(slsqp_optimum(p)[0], abs=1e-7)

    def test_pure_s2_is_the_diagonal(self):
        # on the sphere the S2 formula only applies on the diagonal ray
        s = 1 / math.sqrt(3)
        r = 3 * s
        want = 0.5 - r / 6 - math.sqrt(max(2 * (3 - r * r), 0.0)) / 6
        assert solve((s, s, s)).distance == pytest.approx(want, abs=1e-12)
        d, _ = slsqp_optimum(np.array([s, s, s]))
        assert want == pytest.approx(d, abs=1e-5)


class TestSeams:
    def test_s1_s2_boundary_distance_zero(self, rng):
        pts = rng.dirichlet(np.ones(3), 500)
        pts = pts[in_s2(*pts.T)]
        assert len(pts) > 10
        assert np.max(np.abs(s2_distance(*pts.T))) <= 1e-9

    def test_s2_edge_seam_continuity(self):
        a, b = np.array([0.5, 0.5, 0.5]), np.array([0.9, 0.1, 0.3])
        lo, hi = 0.0, 1.0
        for _ in range(80):
            mid = (lo + hi) / 2
            if min(s2_weights(*(a + mid * (b - a)))) >= 0:
                lo = mid
            else:
                hi = mid
        x, y, z = a + lo * (b - a)
        _, _, d_edge = edge_solution("S3", x, y, z)
        assert float(s2_distance(x, y, z)) == pytest.approx(float(d_edge), abs=1e-9)

    def test_edge_candidates_minimum_wins(self, rng):
        pts = np.abs(uniform_ball(rng, 5000))
        for p in pts[~in_s2(*pts.T) & (pts.sum(axis=1) > 1)][:300]:
            res = solve(p)
            assert res.distance == pytest.approx(
                1 - fidelity(validate(*p), res.optimal_bloch), abs=1e-12)


class TestFreeParameters:
    def test_family_represents_target(self):
        r = (0.2, -0.3, 0.1)
        for t1, t2 in [(0, 0), (0.1, 0.05), (0.2, 0.0), (0.0, 0.2)]:
            w = s1_weights(r, t1, t2)
            assert mixture_bloch(b3(), w).as_tuple() == pytest.approx(r, abs=1e-15)
            assert min(w) >= -1e-15

    def test_range_enforced(self):
        with pytest.raises(ValueError):
            s1_weights((0.2, 0.3, 0.1), 0.15, 0.1)
        with pytest.raises(ValueError):
            s1_weights((0.2, 0.3, 0.6), 0, 0)


class TestKkt:
    def test_center(self):
        rep = kkt_residual((0, 0, 0), [1 / 6] * 6)
        assert rep.max_residual <= 1e-15
        assert rep.multiplier == 0.0 and set(rep.multipliers) == {0.0}

    def test_symmetric_point_multiplier(self):
        rep = kkt_residual((0.5, 0.5, 0.5), solve((0.5, 0.5, 0.5)))
        assert rep.max_residual <= 1e-12
        lam = (math.sqrt(0.75 / 2) - 1.5) / 6
        assert rep.multiplier == pytest.approx(lam, abs=1e-12)
        assert lam < 0

    def test_perturbed_weights_fail(self):
        w = [1 / 3 + 0.01, 0, 1 / 3 - 0.01, 0, 1 / 3, 0]
        assert kkt_residual((0.5, 0.5, 0.5), w).stationarity_residual > 1e-3

    def test_pure_rejected(self):
        with pytest.raises(PureStateUnsupported):
            kkt_residual((0, 0, 1), solve((0, 0, 1)))

    def test_residuals_nonnegative(self, rng):
        for r in uniform_ball(rng, 200):
            rep = kkt_residual(r, solve(r))
            assert min(rep.stationarity_residual, rep.complementarity_residual,
                       rep.feasibility_residual) >= 0.0

import math
import warnings

import numpy as np
import pytest

from conftest import slsqp_optimum, uniform_ball
from fidapprox.errors import NonConvergenceWarning
from fidapprox.fidelity_solver import octant_normalize, solve
from fidapprox.oracle import (
    OracleConfig, gradient_check, oracle_solve, project_simplex,
)
from fidapprox.sets import b3, b3_alpha0, b_alpha, mixture_bloch

FAST = OracleConfig(grid_step=0.02)


class TestConfig:
    @pytest.mark.parametrize("step", [0.0, -0.1, 0.2])
    def test_bad_step(self, step):
        with pytest.raises(ValueError):
            OracleConfig(grid_step=step)

    def test_bad_polish(self):
        with pytest.raises(ValueError):
            OracleConfig(polish_iters=0)

    def test_divisions(self):
        assert OracleConfig(grid_step=0.01).divisions == 100


class TestOracleSolve:
    def test_center(self):
        res = oracle_solve((0, 0, 0), cfg=FAST)
        assert res.distance <= 1e-12
        assert res.optimal_bloch.as_tuple() == pytest.approx((0, 0, 0), abs=1e-12)

    def test_symmetric_point(self):
        res = oracle_solve((0.5, 0.5, 0.5), cfg=FAST)
        assert res.distance == pytest.approx(solve((0.5, 0.5, 0.5)).distance, abs=5e-5)

    def test_trace_worked_point(self):
        res = oracle_solve((0.9, 0.1, 0.3), objective="trace", cfg=FAST)
        assert res.distance == pytest.approx(math.sqrt(0.03), abs=1e-9)
        assert res.metric == "trace"

    def test_unknown_objective(self):
        with pytest.raises(ValueError):
            oracle_solve((0, 0, 0), objective="bures")

    def test_weights_reproduce_v(self, rng):
        for r in uniform_ball(rng, 40):
            res = oracle_solve(r, cfg=FAST)
            w = res.weights.as_array()
            assert w.min() >= -1e-12
            v = mixture_bloch(b3(), res.weights).as_array()
            assert v == pytest.approx(res.optimal_bloch.as_array(), abs=1e-12)

    def test_inside_hull_is_exact(self, rng):
        pts = uniform_ball(rng, 400)
        for r in pts[np.abs(pts).sum(axis=1) <= 1][:40]:
            assert oracle_solve(r, cfg=FAST).distance <= 1e-10

    def test_agrees_with_closed_form(self, rng):
        worst = max(abs(oracle_solve(r, cfg=FAST).distance - solve(r).distance)
                    for r in uniform_ball(rng, 150))
        assert worst <= 5e-5

    def test_pure_vertex_start(self):
        # optimum sits next to the vertex (0, 0, -1); the grid start must not stall there
        r = np.array([0.462, 0.151, -0.874])
        r /= np.linalg.norm(r) * (1 + 1e-9)
        assert oracle_solve(r, cfg=FAST).distance == pytest.approx(solve(r).distance, abs=1e-9)

    def test_matches_slsqp_on_other_sets(self):
        s = math.sqrt(2) / 2
        b3a0 = b3_alpha0()
        for r in [(0.9, 0.1, 0.3), (-0.5, 0.3, 0.75), (0.2, -0.9, 0.1)]:
            d, _ = slsqp_optimum(np.array(r), points=b3a0.points)
            assert oracle_solve(r, b3a0, cfg=FAST).distance == pytest.approx(d, abs=1e-7)
        ba = b_alpha(0.7)
        for r in [(0.3, -0.9, 0.1), (0.6, 0.2, 0.4), (-0.5, 0.3, 0.7)]:
            d, _ = slsqp_optimum(np.array(r), points=ba.points)
            assert oracle_solve(r, ba, cfg=FAST).distance == pytest.approx(d, abs=1e-7)
        assert oracle_solve((s - 1e-9, 0, s - 1e-9), b3a0, cfg=FAST).distance <= 1e-10

    def test_nonconvergence_flag(self):
        cfg = OracleConfig(grid_step=0.1, polish_iters=1)
        with pytest.warns(NonConvergenceWarning):
            res = oracle_solve((0.9, 0.1, 0.3), cfg=cfg)
        assert not res.converged

    def test_converged_by_default(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error", NonConvergenceWarning)
            assert oracle_solve((0.6, 0.01, 0.6), b3_alpha0(), cfg=FAST).converged

    def test_no_contradictory_supports(self, rng):
        # in the octant the optimum never uses a negative pole
        pts = np.abs(uniform_ball(rng, 300))
        pts = pts[pts.sum(axis=1) > 1][:100]
        for r in pts:
            w = oracle_solve(r, cfg=FAST).weights
            assert max(w[1], w[3], w[5]) <= 1e-9


class TestGradient:
    def test_generic(self):
        assert gradient_check((0.3, 0.2, 0.1), (0.1, 0.1, 0.1)) <= 1e-8

    def test_center(self):
        assert gradient_check((0, 0, 0), (0, 0, 0)) <= 1e-10

    def test_axis(self):
        assert gradient_check((0.5, 0, 0), (0.2, 0, 0)) <= 1e-8


def test_project_simplex():
    p = project_simplex(np.array([0.8, 0.6, -0.2]))
    assert p == pytest.approx([0.6, 0.4, 0.0])
    assert project_simplex(np.array([0.2, 0.3, 0.5])) == pytest.approx([0.2, 0.3, 0.5])


def test_octant_invariance_of_oracle(rng):
    r = uniform_ball(rng, 1)[0]
    rn, _ = octant_normalize(r)
    assert oracle_solve(r, cfg=FAST).distance == pytest.approx(
        oracle_solve(rn, cfg=FAST).distance, abs=1e-9)

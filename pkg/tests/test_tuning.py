"""Tests for generalized cross validation of regularizers and threshold"""

import numpy as np
import pytest

from sufficient_graph.config import DEFAULT_EPS_GRID, DEFAULT_RHO_GRID
from sufficient_graph.errors import GcvDegenerate, InvalidConfig
from sufficient_graph.graph import threshold_graph
from sufficient_graph.gsir import GsirConfig, pair_grams
from sufficient_graph.kernel import gram_for
from sufficient_graph.numerics import fro_norm
from sufficient_graph.scorers import SgmScorer
from sufficient_graph.simgen import gen_model_1
from sufficient_graph.tuning import (
    GcvGrid,
    gcv_eps,
    gcv_eps_curve,
    gcv_rho,
    gcv_rho_curve,
    select_eps,
    step1_curves,
)
from sufficient_graph.types import EdgeScoreMatrix


def _direct_criterion(g1, g2, eps):
    n = g1.shape[0]
    c = eps * np.linalg.eigvalsh(g2)[-1]
    hat = g2 @ np.linalg.inv(g2 + c * np.eye(n))
    return fro_norm(g1 - hat @ g1) / (np.trace(np.eye(n) - hat) / n)


def test_curve_matches_direct_formula(rng):
    rows = rng.standard_normal((20, 3))
    g1, g2 = gram_for(rows[:, :2]).centered, gram_for(rows[:, [2]]).centered
    curve = gcv_eps_curve(g1, g2, DEFAULT_EPS_GRID)
    expected = [_direct_criterion(g1, g2, eps) for eps in DEFAULT_EPS_GRID]
    assert np.allclose(curve, expected, rtol=1e-6)


def test_selection_returns_grid_member(model1_small):
    data, _ = model1_small
    curve_pair, curve_minus = step1_curves(data, (3, 0), DEFAULT_EPS_GRID)
    assert select_eps([curve_pair], DEFAULT_EPS_GRID) in DEFAULT_EPS_GRID
    g_pair = gram_for(data.values[:, [3, 0]])
    g_minus = gram_for(data.values[:, [1, 2, 4]])
    assert gcv_eps(g_minus, g_pair, DEFAULT_EPS_GRID) == select_eps([curve_pair], DEFAULT_EPS_GRID)
    assert gcv_eps(g_pair, g_minus, DEFAULT_EPS_GRID) == select_eps([curve_minus], DEFAULT_EPS_GRID)


def test_ties_go_to_smallest_eps():
    assert select_eps([np.ones(3)], (1.0, 0.1, 0.01)) == 0.01
    assert select_eps([np.array([2.0, 1.0, 1.0])], (1.0, 0.1, 0.01)) == 0.01


def test_curves_are_summed_before_minimizing():
    grid = (1.0, 0.1)
    # the second curve alone favors 0.1, the sum [3, 4] favors 1.0
    curves = [np.array([1.0, 3.0]), np.array([2.0, 1.0]), None]
    assert select_eps(curves, grid) == 1.0
    assert select_eps(curves[1:], grid) == 0.1


def test_degenerate_inputs():
    with pytest.raises(GcvDegenerate):
        select_eps([None, None], DEFAULT_EPS_GRID)
    with pytest.raises(GcvDegenerate):
        gcv_eps_curve(np.eye(3), np.zeros((3, 3)), DEFAULT_EPS_GRID)


def test_gcv_is_invariant_to_sample_order(model1_small, rng):
    data, _ = model1_small
    perm = rng.permutation(data.n)
    base = step1_curves(data, (2, 0), DEFAULT_EPS_GRID)[0]
    shuffled = step1_curves(data.values[perm], (2, 0), DEFAULT_EPS_GRID)[0]
    assert np.allclose(base, shuffled, rtol=1e-8)


def test_grid_validation():
    with pytest.raises(InvalidConfig):
        GcvGrid(eps_values=(0.1, 1.0))
    with pytest.raises(InvalidConfig):
        GcvGrid(rho_values=())
    assert GcvGrid().rho_values == DEFAULT_RHO_GRID


def _planted_scores(p, truth_edges, rng):
    values = {}
    for i in range(p):
        for j in range(i):
            if (i, j) in truth_edges:
                values[(i, j)] = 0.9 + 0.01 * rng.standard_normal()
            else:
                values[(i, j)] = abs(0.01 + 0.001 * rng.standard_normal())
    return EdgeScoreMatrix.from_pairs(p, values)


def test_planted_gap_is_recovered():
    for seed in range(10):
        rng = np.random.default_rng(seed)
        data, truth = gen_model_1(60, seed=seed)
        scores = _planted_scores(data.p, truth.edges, rng)
        rho = gcv_rho(data, scores, DEFAULT_RHO_GRID)
        assert 0.02 <= rho <= 0.07
        estimate = threshold_graph(scores, rho)
        assert set(estimate.edges) == set(truth.edges)


def test_empty_neighborhoods_contribute_node_norm(model1_small):
    data, _ = model1_small
    scores = EdgeScoreMatrix.from_pairs(data.p, {(1, 0): 0.05})
    curve = gcv_rho_curve(data, scores, DEFAULT_RHO_GRID)
    node_norms = sum(fro_norm(gram_for(data.values[:, [i]]).centered) for i in range(data.p))
    # rho >= 0.05 leaves every neighborhood empty
    assert curve[-1] == pytest.approx(node_norms)
    assert curve[3] == pytest.approx(node_norms)


def test_all_empty_threshold_grid_is_degenerate(model1_small):
    data, _ = model1_small
    scores = EdgeScoreMatrix.from_pairs(data.p, {(1, 0): 0.001, (3, 2): 0.01})
    with pytest.raises(GcvDegenerate):
        gcv_rho(data, scores, DEFAULT_RHO_GRID)


@pytest.mark.slow
def test_grid_brackets_the_small_sample_optimum():
    interior = 0
    scorer = SgmScorer()
    for seed in range(20):
        data, _ = gen_model_1(30, seed=seed)
        g_minus, g_pair = pair_grams(data, (3, 0))
        g1, g2 = scorer.gcv_target(data, (3, 0), GsirConfig(), True, 0)
        chosen = (
            gcv_eps(g_minus, g_pair, DEFAULT_EPS_GRID),
            gcv_eps(g_pair, g_minus, DEFAULT_EPS_GRID),
            gcv_eps(g1, g2, DEFAULT_EPS_GRID),
        )
        interior += any(DEFAULT_EPS_GRID[-1] < eps < DEFAULT_EPS_GRID[0] for eps in chosen)
    assert interior > 10

"""Tests for the conditional covariance operator statistic"""

import numpy as np
import pytest

from sufficient_graph.ccco import (
    CccoInput,
    ccco_norm,
    hs_norm,
    naive_pair_score,
    pair_diagnostics,
    pair_score,
)
from sufficient_graph.errors import DegenerateSample, InvalidInput
from sufficient_graph.gsir import GsirConfig, predictor_for_pair
from sufficient_graph.kernel import gram_for
from sufficient_graph.numerics import fro_norm, psd_sqrt
from sufficient_graph.simgen import gen_model_1


def _features(g):
    """Coordinates F with F F^T = G, from numpy's own eigensolver"""
    lam, vec = np.linalg.eigh((g + g.T) / 2.0)
    keep = lam > 1e-12 * max(lam.max(), 1e-300)
    return vec[:, keep] * np.sqrt(lam[keep])


def _operator_hs_norm(g_iu, g_ju, g_u, eps_u):
    """HS norm built from the four sample covariance operators

    Sigma_AB = F_A^T F_B / n; the regularizer on Sigma_UU is eps_u / n.
    """
    n = g_u.shape[0]
    f_a, f_b, f_u = _features(g_iu), _features(g_ju), _features(g_u)
    s_ab = f_a.T @ f_b / n
    s_au = f_a.T @ f_u / n
    s_uu = f_u.T @ f_u / n
    s_ub = f_u.T @ f_b / n
    middle = np.linalg.solve(s_uu + (eps_u / n) * np.eye(s_uu.shape[0]), s_ub)
    return np.linalg.norm(s_ab - s_au @ middle, "fro")


def test_matches_explicit_operator_norm():
    rng = np.random.default_rng(7)
    for case in range(20):
        n = (8, 12, 15)[case % 3]
        data = rng.standard_normal((n, 4))
        cfg = GsirConfig(d=2, eps_minus=0.1, eps_pair=0.1)
        diag = pair_diagnostics(data, (3, 1), cfg, eps_u=0.1)

        predictor = predictor_for_pair(data, (3, 1), cfg)[0]
        u = predictor.values
        g_iu = gram_for(np.hstack([data[:, [3]], u])).centered
        g_ju = gram_for(np.hstack([data[:, [1]], u])).centered
        g_u = gram_for(u).centered
        oracle = _operator_hs_norm(g_iu, g_ju, g_u, diag.eps["u"])

        assert diag.score == pytest.approx(oracle, rel=1e-6)


def test_hs_norm_is_ccco_norm_over_n(rng):
    rows = rng.standard_normal((10, 3))
    ccco_input = CccoInput(
        g_iu=gram_for(rows[:, :2]), g_ju=gram_for(rows[:, 1:]), g_u=gram_for(rows[:, [1]]), eps_u=0.3
    )
    assert hs_norm(ccco_input) == pytest.approx(ccco_norm(ccco_input) / 10)


def test_large_regularizer_drops_conditioning(rng):
    rows = rng.standard_normal((12, 3))
    g_iu, g_ju = gram_for(rows[:, :2]), gram_for(rows[:, 1:])
    ccco_input = CccoInput(g_iu=g_iu, g_ju=g_ju, g_u=gram_for(rows[:, [1]]), eps_u=1e12)
    unconditional = fro_norm(psd_sqrt(g_iu.centered) @ psd_sqrt(g_ju.centered))
    assert ccco_norm(ccco_input) == pytest.approx(unconditional, rel=1e-6)


def test_scores_are_symmetric(model2_data):
    data, _ = model2_data
    cfg = GsirConfig()
    for i, j in [(0, 1), (2, 5), (4, 3)]:
        forward = pair_score(data, (i, j), cfg, eps_u=0.01)
        backward = pair_score(data, (j, i), cfg, eps_u=0.01)
        assert forward.value == backward.value
        assert forward.pair == (max(i, j), min(i, j))
        assert naive_pair_score(data, (i, j), 0.01).value == naive_pair_score(data, (j, i), 0.01).value


def test_scores_are_finite_and_nonnegative(model1_small):
    data, _ = model1_small
    for i in range(data.p):
        for j in range(i):
            value = pair_score(data, (i, j), GsirConfig(), eps_u=0.01).value
            assert np.isfinite(value) and value >= 0


def test_diagnostics_record_every_constant(model1_small):
    data, _ = model1_small
    diag = pair_diagnostics(data, (1, 0), GsirConfig(), eps_u=0.01)
    assert set(diag.gammas) == {"pair", "minus", "iu", "ju", "u"}
    assert set(diag.eps) == {"pair", "minus", "u"}
    assert len(diag.eigenvalues) == 2


def test_rejects_small_problems(rng):
    with pytest.raises(InvalidInput):
        pair_score(rng.standard_normal((10, 2)), (1, 0), GsirConfig(), 0.01)
    with pytest.raises(InvalidInput):
        naive_pair_score(rng.standard_normal((3, 4)), (1, 0), 0.01)
    with pytest.raises(InvalidInput):
        pair_score(rng.standard_normal((10, 4)), (2, 2), GsirConfig(), 0.01)


def test_identical_blocks_shrink_with_regularizer(rng):
    g_u = gram_for(rng.standard_normal((20, 2)))
    values = [
        ccco_norm(CccoInput(g_iu=g_u, g_ju=g_u, g_u=g_u, eps_u=eps)) for eps in (1e-1, 1e-3)
    ]
    assert values[0] > values[1] > 0


def test_naive_score_rejects_constant_complement(rng):
    data = rng.standard_normal((30, 3))
    data[:, 0] = 1.5
    with pytest.raises(DegenerateSample):
        naive_pair_score(data, (2, 1), 0.01)


@pytest.mark.slow
def test_true_edge_outscores_non_edge_and_noise():
    edge, non_edge = [], []
    for seed in range(50):
        data, _ = gen_model_1(1000, seed=seed)
        edge.append(pair_score(data, (3, 0), GsirConfig(), eps_u=0.01).value)
        non_edge.append(pair_score(data, (4, 2), GsirConfig(), eps_u=0.01).value)
    assert np.median(edge) > np.median(non_edge)

    noise = np.random.default_rng(0).standard_normal((500, 3))
    for pair in [(1, 0), (2, 0), (2, 1)]:
        assert pair_score(noise, pair, GsirConfig(), eps_u=0.01).value < np.median(edge)

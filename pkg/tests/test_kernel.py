"""Tests for Gram matrices and the bandwidth heuristic"""

import numpy as np
import pytest
from scipy.spatial import distance

from sufficient_graph.errors import DegenerateSample, InvalidBlock, InvalidInput
from sufficient_graph.kernel import (
    BlockKind,
    KernelConfig,
    VariableBlock,
    block_rows,
    gamma_heuristic,
    gram,
    gram_for,
)


def test_gamma_heuristic_two_points():
    assert gamma_heuristic(np.array([[0.0], [2.0]])) == pytest.approx(0.25)


def test_gamma_heuristic_rejects_constant_block():
    with pytest.raises(DegenerateSample):
        gamma_heuristic(np.ones((5, 2)))
    with pytest.raises(DegenerateSample):
        gamma_heuristic(np.zeros((1, 2)))


def test_gamma_heuristic_subsamples_large_inputs(rng):
    rows = rng.standard_normal((2500, 1))
    exact = 1.0 / np.mean(distance.pdist(rows)) ** 2
    sampled = gamma_heuristic(rows, seed=5)
    assert sampled == gamma_heuristic(rows, seed=5)
    assert sampled == pytest.approx(exact, rel=0.01)


def test_gram_entries_and_centering(rng):
    rows = rng.standard_normal((12, 2))
    g = gram(rows, KernelConfig(gamma=0.7))
    assert np.allclose(np.diag(g.raw), 1.0)
    expected = np.exp(-0.7 * np.sum((rows[3] - rows[5]) ** 2))
    assert g.raw[3, 5] == pytest.approx(expected)
    q = np.eye(12) - np.ones((12, 12)) / 12
    assert np.allclose(g.centered, q @ g.raw @ q, atol=1e-12)
    assert np.array_equal(g.centered, g.centered.T)


def test_gram_is_permutation_equivariant(rng):
    rows = rng.standard_normal((15, 3))
    perm = rng.permutation(15)
    g = gram_for(rows)
    permuted = gram_for(rows[perm])
    assert np.allclose(permuted.centered, g.centered[np.ix_(perm, perm)], atol=1e-12)


def test_bandwidth_makes_gram_scale_free(rng):
    rows = rng.standard_normal((20, 2))
    assert gamma_heuristic(3.0 * rows) == pytest.approx(gamma_heuristic(rows) / 9.0)
    assert np.allclose(gram_for(3.0 * rows).raw, gram_for(rows).raw, atol=1e-12)


def test_gram_rejects_non_finite():
    with pytest.raises(InvalidInput):
        gram(np.array([[0.0], [np.inf]]), KernelConfig(gamma=1.0))
    with pytest.raises(InvalidInput):
        KernelConfig(gamma=0.0)


def test_blocks():
    block = VariableBlock.complement(3, 1, 5)
    assert block.column_indices == (0, 2, 4)
    assert block.kind == BlockKind.COMPLEMENT
    assert VariableBlock.predictor(2).column_indices == (0, 1)
    with pytest.raises(InvalidBlock):
        VariableBlock.complement(2, 2, 5)
    with pytest.raises(InvalidBlock):
        VariableBlock((0, 0), BlockKind.PAIR)


def test_block_rows_keeps_order_and_checks_range(rng):
    data = rng.standard_normal((6, 4))
    assert np.array_equal(block_rows(data, VariableBlock.pair(3, 1)), data[:, [3, 1]])
    with pytest.raises(InvalidBlock):
        block_rows(data, VariableBlock.single(4))

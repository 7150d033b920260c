"""Tests for the dense linear algebra primitives"""

import numpy as np
import pytest

from sufficient_graph.errors import InvalidInput, NearSingular, NotPSD
from sufficient_graph.kernel import gram_for
from sufficient_graph.numerics import (
    as_symmetric,
    centering_matrix,
    eigh,
    fro_norm,
    pseudo_inverse,
    psd_sqrt,
    reg_inverse,
)

from .conftest import random_psd


def test_centering_matrix_is_idempotent(rng):
    for _ in range(50):
        n = int(rng.integers(2, 30))
        q = centering_matrix(n)
        assert np.allclose(q @ q, q, atol=1e-12)
        assert np.allclose(q.sum(axis=1), 0.0, atol=1e-12)


def test_centered_gram_has_zero_row_sums(rng):
    for _ in range(50):
        n = int(rng.integers(4, 40))
        g = gram_for(rng.standard_normal((n, 3)))
        assert np.max(np.abs(g.centered.sum(axis=1))) < 1e-8 * n


def test_psd_sqrt_reconstructs(rng):
    for _ in range(50):
        n = int(rng.integers(2, 20))
        m = random_psd(rng, n, rank=int(rng.integers(1, n + 1)))
        root = psd_sqrt(m)
        assert fro_norm(root @ root - m) <= 1e-7 * max(fro_norm(m), 1.0)
        assert np.min(np.linalg.eigvalsh(root)) >= -1e-8 * max(np.max(np.linalg.eigvalsh(root)), 1.0)


def test_pseudo_inverse_penrose_conditions(rng):
    for _ in range(50):
        n = int(rng.integers(2, 20))
        a = random_psd(rng, n, rank=int(rng.integers(1, n + 1)))
        a /= max(np.max(np.abs(a)), 1.0)
        x = pseudo_inverse(a)
        scale = max(1.0, fro_norm(x))
        assert fro_norm(a @ x @ a - a) < 1e-8 * scale
        assert fro_norm(x @ a @ x - x) < 1e-8 * scale * scale
        assert fro_norm((a @ x).T - a @ x) < 1e-8 * scale
        assert fro_norm((x @ a).T - x @ a) < 1e-8 * scale


def test_pseudo_inverse_of_zero_is_zero():
    assert np.array_equal(pseudo_inverse(np.zeros((3, 3))), np.zeros((3, 3)))


def test_reg_inverse_inverts_and_commutes(rng):
    m = random_psd(rng, 8)
    inv = reg_inverse(m, 0.5)
    assert np.allclose(inv @ (m + 0.5 * np.eye(8)), np.eye(8), atol=1e-8)
    assert np.allclose(inv @ m, m @ inv, atol=1e-8)


def test_reg_inverse_rejects_bad_regularizers():
    with pytest.raises(InvalidInput):
        reg_inverse(np.eye(3), 0.0)
    with pytest.raises(NearSingular):
        reg_inverse(-np.eye(3), 1.0)


def test_psd_sqrt_rejects_indefinite():
    with pytest.raises(NotPSD):
        psd_sqrt(np.diag([1.0, -1.0]))


def test_psd_sqrt_tolerates_roundoff_on_zero_matrix():
    noise = np.diag([1e-14, -1e-14, 0.0])
    assert np.allclose(psd_sqrt(noise), 0.0, atol=1e-6)


def test_eigh_orders_and_signs(rng):
    m = random_psd(rng, 6)
    decomp = eigh(m)
    assert np.all(np.diff(decomp.values) <= 0)
    for k in range(6):
        column = decomp.vectors[:, k]
        assert column[np.argmax(np.abs(column))] > 0
    assert np.allclose(decomp.rebuild(decomp.values), m, atol=1e-10)


def test_eigh_is_deterministic(rng):
    m = random_psd(rng, 12)
    first, second = eigh(m), eigh(m.copy())
    assert np.array_equal(first.values, second.values)
    assert np.array_equal(first.vectors, second.vectors)


def test_as_symmetric_validation():
    with pytest.raises(InvalidInput):
        as_symmetric(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(InvalidInput):
        as_symmetric(np.ones((2, 3)))
    with pytest.raises(InvalidInput):
        eigh(np.array([[np.nan, 0.0], [0.0, 1.0]]))

"""Tests for the simulation models"""

import numpy as np
import pytest

from sufficient_graph.errors import InvalidConfig
from sufficient_graph.simgen import (
    SimModel,
    column_noise,
    gen_hub_model,
    gen_model_1,
    gen_model_2,
    gen_model_5,
    generate,
    hub_groups,
    precision_matrix_model_5,
)
from sufficient_graph.types import ModelTag


def test_fixed_model_truths():
    data, truth = gen_model_1(10)
    assert data.values.shape == (10, 5)
    assert truth.edges == {(2, 0), (3, 0), (3, 1), (1, 0)}
    data, truth = gen_model_2(10)
    assert data.values.shape == (10, 6)
    assert len(truth.edges) == 8 and (5, 3) in truth.edges
    data, truth = gen_model_5(10)
    assert data.values.shape == (10, 20)
    assert len(truth.edges) == 7 and (4, 2) in truth.edges


def test_same_seed_same_draws():
    for tag in ModelTag:
        model = SimModel(tag=tag, seed=5)
        first, _ = generate(model, 30)
        second, _ = generate(model, 30)
        assert np.array_equal(first.values, second.values)
        other, _ = generate(model.with_seed(6), 30)
        assert not np.array_equal(first.values, other.values)


def test_column_noise_depends_only_on_seed_and_column():
    assert np.array_equal(column_noise(3, 7, 100), column_noise(3, 7, 100))
    assert not np.array_equal(column_noise(3, 7, 100), column_noise(3, 8, 100))
    # Drawing more rows extends the stream
    assert np.array_equal(column_noise(3, 7, 200)[:100], column_noise(3, 7, 100))


def test_isolated_node_of_model_1():
    data, _ = gen_model_1(10_000, seed=1)
    corr = np.corrcoef(data.values, rowvar=False)
    assert np.all(np.abs(corr[4, :4]) < 0.1)


@pytest.mark.parametrize("p, n_hubs, expected", [(50, 5, 45), (200, 10, 190), (12, 3, 9)])
def test_hub_edge_counts(p, n_hubs, expected):
    _, truth = gen_hub_model(20, p=p, n_hubs=n_hubs, seed=2)
    assert len(truth.edges) == expected
    groups = hub_groups(p, n_hubs, seed=2)
    members = sorted(m for _, group in groups for m in group)
    assert members == list(range(p))
    for hub, group in groups:
        assert hub in group and len(group) == p // n_hubs


def test_hub_parameters_are_validated():
    with pytest.raises(InvalidConfig):
        hub_groups(50, 3, seed=0)
    with pytest.raises(InvalidConfig):
        hub_groups(5, 5, seed=0)
    with pytest.raises(InvalidConfig):
        gen_hub_model(10, p=20, n_hubs=2, tag=ModelTag.V)


def test_model_4_dependence_is_in_the_variance():
    data, _ = gen_hub_model(20_000, p=10, n_hubs=1, tag=ModelTag.IV, seed=4)
    ((hub, members),) = hub_groups(10, 1, seed=4)
    i = next(m for m in members if m != hub)
    x_i, x_h = data.values[:, i], data.values[:, hub]
    assert abs(np.corrcoef(x_i, x_h)[0, 1]) < 0.05
    assert np.corrcoef(x_i ** 2, np.sin(x_h ** 3) ** 2)[0, 1] > 0.2


def test_model_3_shifts_the_mean():
    data, _ = gen_hub_model(5_000, p=10, n_hubs=1, tag=ModelTag.III, seed=4)
    ((hub, members),) = hub_groups(10, 1, seed=4)
    i = next(m for m in members if m != hub)
    assert np.corrcoef(data.values[:, i], data.values[:, hub] ** 2)[0, 1] > 0.5


def test_model_5_precision():
    theta = precision_matrix_model_5()
    assert np.allclose(theta, theta.T)
    assert np.linalg.eigvalsh(theta).min() > 0
    data, _ = gen_model_5(200_000, seed=9)
    estimated = np.linalg.inv(np.cov(data.values, rowvar=False))
    assert np.allclose(estimated, theta, atol=0.05)


def test_sim_model_defaults_and_validation():
    assert SimModel(tag="2").p == 6
    hub = SimModel(tag=ModelTag.IV)
    assert (hub.p, hub.n_hubs) == (50, 5)
    assert ModelTag.parse("iv") is ModelTag.IV
    assert ModelTag.parse(3) is ModelTag.III
    with pytest.raises(ValueError):
        ModelTag.parse("VI")
    with pytest.raises(InvalidConfig):
        SimModel(tag=ModelTag.I, p=6)
    with pytest.raises(InvalidConfig):
        SimModel(tag=ModelTag.I, seed=-1)
    with pytest.raises(InvalidConfig):
        gen_model_1(0)

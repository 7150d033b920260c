"""Simulation models with known graphs

Every column k draws its noise from its own counter-based Philox stream, so
the draws of a column depend only on (seed, k). Widening a hub model therefore
never changes the noise of existing columns. Hub selection uses a separate
structure stream.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.linalg import LinAlgError, cholesky, solve_triangular

from .errors import InvalidConfig
from .types import GroundTruth, ModelTag, Pair, SampleMatrix

logger = logging.getLogger(__name__)

MODEL_1_EDGES: Tuple[Pair, ...] = ((1, 3), (1, 4), (2, 4), (1, 2))
MODEL_2_EDGES: Tuple[Pair, ...] = ((1, 2), (1, 4), (3, 4), (1, 3), (2, 5), (3, 5), (2, 3), (4, 6))

MODEL_5_DIAGONAL: Tuple[float, ...] = (
    1, 1, 1, 1.333, 3.010, 3.203, 1.543, 1.270, 1.544, 3,
    1, 1, 1.2, 1, 1, 1, 1, 3, 2, 1,
)
# 1-based (i, j) -> theta_ij
MODEL_5_OFF_DIAGONAL: Dict[Pair, float] = {
    (3, 5): 1.418,
    (4, 10): -0.744,
    (5, 9): 0.519,
    (5, 10): -0.577,
    (13, 17): 0.287,
    (17, 20): 0.542,
    (14, 15): 0.998,
}

FIXED_DIMENSIONS = {ModelTag.I: 5, ModelTag.II: 6, ModelTag.V: 20}
DEFAULT_HUB_P = 50
DEFAULT_HUBS = 5


def _check_seed(seed: int) -> None:
    if seed < 0:
        raise InvalidConfig(f"seed must be >= 0, got {seed}")


def column_noise(seed: int, column: int, n: int) -> np.ndarray:
    """Standard normal draws of one column's substream"""
    stream = np.random.SeedSequence([seed, 0], spawn_key=(column,))
    return np.random.Generator(np.random.Philox(stream)).standard_normal(n)


def structure_rng(seed: int) -> np.random.Generator:
    """Generator for structural choices such as hub placement"""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, 1])))


def _noise(n: int, p: int, seed: int) -> np.ndarray:
    _check_seed(seed)
    if n < 1:
        raise InvalidConfig(f"n must be >= 1, got {n}")
    return np.column_stack([column_noise(seed, k, n) for k in range(p)])


def gen_model_1(n: int, seed: int = 0) -> Tuple[SampleMatrix, GroundTruth]:
    """Additive model on 5 variables with one isolated node"""
    e = _noise(n, 5, seed)
    x = np.empty_like(e)
    x[:, 0] = e[:, 0]
    x[:, 1] = e[:, 1]
    x[:, 2] = np.sin(2 * x[:, 0]) + e[:, 2]
    x[:, 3] = x[:, 0] ** 2 + x[:, 1] ** 2 + e[:, 3]
    x[:, 4] = e[:, 4]
    return SampleMatrix(x), GroundTruth.from_one_based(5, MODEL_1_EDGES)


def gen_model_2(n: int, seed: int = 0) -> Tuple[SampleMatrix, GroundTruth]:
    """Non-additive model on 6 variables"""
    e = _noise(n, 6, seed)
    x = np.empty_like(e)
    x[:, 0] = e[:, 0]
    x[:, 1] = x[:, 0] + e[:, 1]
    x[:, 2] = e[:, 2]
    x[:, 3] = (x[:, 0] + x[:, 2]) ** 2 + e[:, 3]
    x[:, 4] = np.cos(2 * x[:, 1] * x[:, 2]) + e[:, 4]
    x[:, 5] = x[:, 3] + e[:, 5]
    return SampleMatrix(x), GroundTruth.from_one_based(6, MODEL_2_EDGES)


def hub_groups(p: int, n_hubs: int, seed: int) -> Tuple[Tuple[int, Tuple[int, ...]], ...]:
    """Partition the vertices into n_hubs equal groups and pick each group's hub

    Returns:
        One (hub, members) entry per group, members sorted and including the hub

    Raises:
        InvalidConfig: If n_hubs < 1, p is not divisible by n_hubs, or the
            groups would have no neighbors
    """
    if n_hubs < 1:
        raise InvalidConfig(f"n_hubs must be >= 1, got {n_hubs}")
    if p % n_hubs != 0:
        raise InvalidConfig(f"p={p} is not divisible by n_hubs={n_hubs}")
    size = p // n_hubs
    if size < 2:
        raise InvalidConfig(f"Groups of size {size} have no neighbors")

    rng = structure_rng(seed)
    order = rng.permutation(p)
    groups = []
    for members in order.reshape(n_hubs, size):
        hub = int(members[rng.integers(size)])
        groups.append((hub, tuple(sorted(int(m) for m in members))))
    return tuple(groups)


def gen_hub_model(
    n: int,
    p: int = DEFAULT_HUB_P,
    n_hubs: int = DEFAULT_HUBS,
    tag: ModelTag = ModelTag.III,
    seed: int = 0,
) -> Tuple[SampleMatrix, GroundTruth]:
    """Hub network where every non-hub depends on its group's hub

    Model III shifts the conditional mean (1 + |X^h|^2 + e), Model IV scales
    the noise (sin((X^h)^3) * e).
    """
    tag = ModelTag.parse(tag)
    if tag not in (ModelTag.III, ModelTag.IV):
        raise InvalidConfig(f"Hub generator supports models III and IV, got {tag.value}")
    groups = hub_groups(p, n_hubs, seed)
    e = _noise(n, p, seed)
    x = e.copy()
    edges = []
    for hub, members in groups:
        driver = x[:, hub]
        for i in members:
            if i == hub:
                continue
            if tag == ModelTag.III:
                x[:, i] = 1 + np.abs(driver) ** 2 + e[:, i]
            else:
                x[:, i] = np.sin(driver ** 3) * e[:, i]
            edges.append((i, hub))
    logger.debug(f"Model {tag.value}: hubs {[hub for hub, _ in groups]}")
    return SampleMatrix(x), GroundTruth(p=p, edges=frozenset(edges))


def precision_matrix_model_5() -> np.ndarray:
    """20 x 20 precision matrix of the Gaussian model, symmetrized"""
    theta = np.diag(np.asarray(MODEL_5_DIAGONAL, dtype=float))
    for (i, j), value in MODEL_5_OFF_DIAGONAL.items():
        theta[i - 1, j - 1] = theta[j - 1, i - 1] = value
    return theta


def gen_model_5(n: int, seed: int = 0) -> Tuple[SampleMatrix, GroundTruth]:
    """Gaussian graphical model X ~ N(0, Theta^-1)

    With Theta = L L^T, rows z L^-1 of a standard normal matrix have
    covariance Theta^-1.

    Raises:
        InvalidConfig: If Theta is not positive definite
    """
    theta = precision_matrix_model_5()
    try:
        lower = cholesky(theta, lower=True)
    except LinAlgError as e:
        raise InvalidConfig(f"Model V precision matrix is not positive definite: {e}") from e
    z = _noise(n, theta.shape[0], seed)
    # x^T = L^-T z^T
    x = solve_triangular(lower, z.T, lower=True, trans="T").T
    return SampleMatrix(x), GroundTruth.from_one_based(20, tuple(MODEL_5_OFF_DIAGONAL))


@dataclass(frozen=True)
class SimModel:
    """A simulation model with its parameters

    Attributes:
        tag: Model identifier
        p: Node count; fixed for models I, II and V
        seed: Master seed
        n_hubs: Hub count for models III and IV
    """
    tag: ModelTag
    p: Optional[int] = None
    seed: int = 0
    n_hubs: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "tag", ModelTag.parse(self.tag))
        _check_seed(self.seed)
        fixed = FIXED_DIMENSIONS.get(self.tag)
        if fixed is not None:
            if self.p is not None and self.p != fixed:
                raise InvalidConfig(f"Model {self.tag.value} has p={fixed}, got {self.p}")
            object.__setattr__(self, "p", fixed)
        else:
            object.__setattr__(self, "p", self.p or DEFAULT_HUB_P)
            object.__setattr__(self, "n_hubs", self.n_hubs or DEFAULT_HUBS)

    def with_seed(self, seed: int) -> "SimModel":
        return SimModel(tag=self.tag, p=self.p, seed=seed, n_hubs=self.n_hubs)


def generate(model: SimModel, n: int) -> Tuple[SampleMatrix, GroundTruth]:
    """Draw n samples from a model"""
    if model.tag == ModelTag.I:
        return gen_model_1(n, model.seed)
    if model.tag == ModelTag.II:
        return gen_model_2(n, model.seed)
    if model.tag == ModelTag.V:
        return gen_model_5(n, model.seed)
    return gen_hub_model(n, model.p, model.n_hubs, model.tag, model.seed)

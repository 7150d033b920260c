"""Gaussian Gram matrices over variable blocks

Every kernel in the pipeline is the Gaussian radial basis function
k(u, v) = exp(-gamma ||u - v||^2), with gamma set from the mean pairwise
distance of the rows it is evaluated on.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Tuple, Union

import numpy as np
from scipy.spatial import distance

from .errors import DegenerateSample, InvalidBlock, InvalidInput
from .numerics import SymMatrix
from .types import SampleMatrix, as_samples

logger = logging.getLogger(__name__)

EXACT_PAIRS_LIMIT = 2000
SUBSAMPLED_PAIRS = 2_000_000


class BlockKind(str, Enum):
    """Interpretation of a variable block"""
    SINGLE = "single"
    PAIR = "pair"
    COMPLEMENT = "complement"
    PREDICTOR = "predictor"


@dataclass(frozen=True)
class VariableBlock:
    """Ordered set of columns a kernel is evaluated on

    Attributes:
        column_indices: Distinct column indices
        kind: What the block stands for in the pipeline
    """
    column_indices: Tuple[int, ...]
    kind: BlockKind

    def __post_init__(self):
        if len(set(self.column_indices)) != len(self.column_indices):
            raise InvalidBlock(f"Duplicate columns in block {self.column_indices}")
        if any(c < 0 for c in self.column_indices):
            raise InvalidBlock(f"Negative column index in block {self.column_indices}")
        if self.kind == BlockKind.PAIR and len(self.column_indices) != 2:
            raise InvalidBlock("A pair block has exactly two columns")

    @classmethod
    def single(cls, i: int) -> "VariableBlock":
        return cls((i,), BlockKind.SINGLE)

    @classmethod
    def pair(cls, i: int, j: int) -> "VariableBlock":
        return cls((i, j), BlockKind.PAIR)

    @classmethod
    def complement(cls, i: int, j: int, p: int) -> "VariableBlock":
        """All columns of a p-column sample except i and j, in order"""
        if not (0 <= i < p and 0 <= j < p) or i == j:
            raise InvalidBlock(f"Cannot form the complement of ({i}, {j}) among {p} columns")
        return cls(tuple(k for k in range(p) if k not in (i, j)), BlockKind.COMPLEMENT)

    @classmethod
    def predictor(cls, d: int) -> "VariableBlock":
        return cls(tuple(range(d)), BlockKind.PREDICTOR)


@dataclass(frozen=True)
class KernelConfig:
    """Gaussian kernel parameter

    Attributes:
        gamma: Inverse squared bandwidth
    """
    gamma: float

    def __post_init__(self):
        if not (np.isfinite(self.gamma) and self.gamma > 0):
            raise InvalidInput(f"gamma must be finite and > 0, got {self.gamma}")


@dataclass(frozen=True)
class GramMatrix:
    """Raw and centered Gram matrices of one block

    Attributes:
        raw: K with K_ab = exp(-gamma ||s_a - s_b||^2)
        centered: G = Q K Q
        n: Sample count
        gamma: Kernel parameter used
    """
    raw: SymMatrix
    centered: SymMatrix
    n: int
    gamma: float

    @property
    def lambda_max(self) -> float:
        """Largest eigenvalue of the centered matrix, floored at zero"""
        if self.n == 0:
            return 0.0
        return max(float(np.linalg.eigvalsh(self.centered)[-1]), 0.0)


def _as_rows(rows: Union[np.ndarray, Sequence[Sequence[float]]]) -> np.ndarray:
    rows = np.asarray(rows, dtype=float)
    if rows.ndim == 1:
        rows = rows[:, np.newaxis]
    if rows.ndim != 2:
        raise InvalidInput(f"Rows must form a 2-dimensional array, got shape {rows.shape}")
    if not np.all(np.isfinite(rows)):
        raise InvalidInput("Rows contain non-finite values")
    return rows


def gamma_heuristic(rows, seed: int = 0) -> float:
    """gamma = 1 / (mean pairwise Euclidean distance)^2

    All n(n-1)/2 pairs are used up to n = 2000; beyond that a fixed-seed
    sample of 2e6 pairs estimates the mean.

    Raises:
        DegenerateSample: If fewer than two rows or every distance is zero
    """
    rows = _as_rows(rows)
    n = rows.shape[0]
    if n < 2:
        raise DegenerateSample(f"Need at least two rows for the bandwidth heuristic, got {n}")

    if n <= EXACT_PAIRS_LIMIT:
        mean_dist = float(np.mean(distance.pdist(rows)))
    else:
        rng = np.random.default_rng(seed)
        a = rng.integers(0, n, size=SUBSAMPLED_PAIRS)
        b = rng.integers(0, n - 1, size=SUBSAMPLED_PAIRS)
        b = np.where(b >= a, b + 1, b)
        mean_dist = float(np.mean(np.linalg.norm(rows[a] - rows[b], axis=1)))
        logger.debug(f"Bandwidth from {SUBSAMPLED_PAIRS} sampled pairs (n={n})")

    if not mean_dist > 0:
        raise DegenerateSample("All pairwise distances are zero")
    return 1.0 / mean_dist ** 2


def center(k: np.ndarray) -> SymMatrix:
    """Double-center a kernel matrix: Q K Q"""
    if k.shape[0] == 0:
        return k.copy()
    row = k.mean(axis=1, keepdims=True)
    col = k.mean(axis=0, keepdims=True)
    g = k - row - col + k.mean()
    return (g + g.T) / 2.0


def gram(rows, cfg: KernelConfig) -> GramMatrix:
    """Gaussian Gram matrix and its centered version

    Raises:
        InvalidInput: If rows are empty, ragged, or non-finite
    """
    rows = _as_rows(rows)
    n = rows.shape[0]
    if n == 0:
        raise InvalidInput("Cannot build a Gram matrix from zero rows")
    sq = distance.squareform(distance.pdist(rows, "sqeuclidean")) if n > 1 else np.zeros((1, 1))
    raw = np.exp(-cfg.gamma * sq)
    return GramMatrix(raw=raw, centered=center(raw), n=n, gamma=cfg.gamma)


def gram_for(rows, seed: int = 0) -> GramMatrix:
    """Gram matrix with gamma chosen by the mean-distance heuristic"""
    return gram(rows, KernelConfig(gamma=gamma_heuristic(rows, seed=seed)))


def block_rows(data: Union[SampleMatrix, np.ndarray], block: VariableBlock) -> np.ndarray:
    """Restrict the sample to a block's columns, preserving sample order

    Raises:
        InvalidBlock: If an index is out of range for the data
    """
    values = as_samples(data).values
    p = values.shape[1]
    bad = [c for c in block.column_indices if c >= p]
    if bad:
        raise InvalidBlock(f"Columns {bad} out of range for {p} columns")
    return values[:, list(block.column_indices)]

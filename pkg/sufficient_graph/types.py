"""Type definitions for the sufficient graph estimator

This module contains the core data types shared across the pipeline: the
sample matrix, per-pair score responses and diagnostics, the edge score
matrix, graph estimates, ground truth and ROC curves.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import InvalidInput, InvalidTruth

Pair = Tuple[int, int]


def normalize_pair(i: int, j: int) -> Pair:
    """Return the pair ordered as (larger, smaller)"""
    if i == j:
        raise InvalidInput(f"Pair ({i}, {j}) is a self-loop")
    return (i, j) if i > j else (j, i)


class Method(str, Enum):
    """Edge scoring method

    Attributes:
        SGM: Sufficient graphical model (GSIR reduction, then CCCO)
        NAIVE: CCCO conditioned on the raw complement block
    """
    SGM = "sgm"
    NAIVE = "naive"


class ModelTag(str, Enum):
    """Simulation model identifiers"""
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"
    V = "V"

    @classmethod
    def parse(cls, value: Union[str, int, "ModelTag"]) -> "ModelTag":
        """Accept roman numerals or the integers 1 to 5"""
        if isinstance(value, ModelTag):
            return value
        text = str(value).strip().upper()
        arabic = {"1": "I", "2": "II", "3": "III", "4": "IV", "5": "V"}
        return cls(arabic.get(text, text))


@dataclass
class SampleMatrix:
    """n x p data matrix with column labels

    Attributes:
        values: Real matrix, one row per sample
        labels: Column names used in output files
    """
    values: np.ndarray
    labels: Tuple[str, ...] = ()

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise InvalidInput(f"Sample matrix must be 2-dimensional, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise InvalidInput("Sample matrix contains non-finite values")
        self.values = values
        if not self.labels:
            self.labels = tuple(f"X{k + 1}" for k in range(values.shape[1]))
        self.labels = tuple(str(label) for label in self.labels)
        if len(self.labels) != values.shape[1]:
            raise InvalidInput(
                f"{len(self.labels)} labels given for {values.shape[1]} columns"
            )

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]


def as_samples(data: Union[SampleMatrix, np.ndarray, Sequence[Sequence[float]]]) -> SampleMatrix:
    """Coerce an array-like to a SampleMatrix"""
    if isinstance(data, SampleMatrix):
        return data
    return SampleMatrix(np.asarray(data, dtype=float))


@dataclass
class PairDiagnostics:
    """Everything computed while scoring one pair

    Attributes:
        pair: Node pair (i, j) with i > j
        score: Edge score on the Hilbert-Schmidt scale
        gammas: Kernel parameter per kernel ("pair", "minus", "iu", "ju", "u")
        eigenvalues: Leading GSIR eigenvalues (empty for the naive method)
        eps: Absolute regularizers applied ("pair", "minus", "u")
    """
    pair: Pair
    score: float
    gammas: Dict[str, float]
    eigenvalues: Tuple[float, ...] = ()
    eps: Dict[str, float] = field(default_factory=dict)


@dataclass
class EdgeScore:
    """Score of one candidate edge

    Attributes:
        pair: Node pair (i, j) with i > j
        value: Nonnegative finite score
    """
    pair: Pair
    value: float

    def __post_init__(self):
        self.pair = normalize_pair(*self.pair)
        if not np.isfinite(self.value) or self.value < 0:
            raise InvalidInput(f"Edge score for {self.pair} must be finite and >= 0, got {self.value}")


@dataclass
class ScoreResponse:
    """Represents a scorer's response after scoring a pair

    Attributes:
        pair: The scored pair
        success: Whether scoring succeeded
        result: Diagnostics (if successful)
        error: Error message if scoring failed

    Example:
        >>> ScoreResponse(pair=(1, 0), success=False, result=None, error="Only 0 usable eigenvalue(s)")
    """
    pair: Pair
    success: bool
    result: Optional[PairDiagnostics]
    error: Optional[str] = None


@dataclass
class EdgeScoreMatrix:
    """Symmetric p x p matrix of edge scores

    Attributes:
        p: Node count
        scores: Symmetric nonnegative matrix with zero diagonal
        failed: Pairs whose score is a policy fallback rather than a statistic
        diagnostics: Per-pair diagnostics of the successful pairs
    """
    p: int
    scores: np.ndarray
    failed: Tuple[Pair, ...] = ()
    diagnostics: Dict[Pair, PairDiagnostics] = field(default_factory=dict)

    def __post_init__(self):
        scores = np.asarray(self.scores, dtype=float)
        if scores.shape != (self.p, self.p):
            raise InvalidInput(f"Score matrix shape {scores.shape} does not match p={self.p}")
        if not np.all(np.isfinite(scores)):
            raise InvalidInput("Score matrix contains non-finite values")
        if not np.array_equal(scores, scores.T):
            raise InvalidInput("Score matrix is not symmetric")
        if np.any(np.diag(scores) != 0):
            raise InvalidInput("Score matrix diagonal must be exactly zero")
        self.scores = scores

    @classmethod
    def from_pairs(cls, p: int, values: Dict[Pair, float], **kwargs) -> "EdgeScoreMatrix":
        """Build the symmetric matrix from a pair -> score mapping"""
        scores = np.zeros((p, p))
        for (i, j), value in values.items():
            scores[i, j] = scores[j, i] = value
        return cls(p=p, scores=scores, **kwargs)

    def pairs(self) -> Iterator[Tuple[int, int, float]]:
        """Iterate (i, j, score) over i > j in lexicographic order"""
        for i in range(self.p):
            for j in range(i):
                yield i, j, float(self.scores[i, j])


@dataclass
class GroundTruth:
    """True edge set of a simulated or curated network

    Attributes:
        p: Node count
        edges: Pairs (i, j) with i > j, 0-based
    """
    p: int
    edges: FrozenSet[Pair]

    def __post_init__(self):
        normalized = set()
        for i, j in self.edges:
            if not (0 <= i < self.p and 0 <= j < self.p):
                raise InvalidTruth(f"Edge ({i}, {j}) is out of range for p={self.p}")
            normalized.add(normalize_pair(i, j))
        self.edges = frozenset(normalized)

    @classmethod
    def from_one_based(cls, p: int, edges: Sequence[Pair]) -> "GroundTruth":
        """Build from edges written with 1-based node labels"""
        return cls(p=p, edges=frozenset((i - 1, j - 1) for i, j in edges))


@dataclass
class GraphEstimate:
    """Thresholded graph estimate

    Attributes:
        p: Node count
        edges: Estimated edges (i, j) with i > j, sorted
        threshold: Threshold used (strict inequality)
        score_matrix: Scores the edges were thresholded from
        config_snapshot: Every tuning constant needed to replay the run
        labels: Node labels for reporting
        warnings: Non-fatal issues encountered during estimation
        rho_fallback: True if the threshold is the fallback after GCV degenerated
    """
    p: int
    edges: List[Pair]
    threshold: float
    score_matrix: EdgeScoreMatrix
    config_snapshot: Dict[str, Any] = field(default_factory=dict)
    labels: Tuple[str, ...] = ()
    warnings: List[str] = field(default_factory=list)
    rho_fallback: bool = False


@dataclass
class RocCurve:
    """Receiver operating characteristic curve

    Attributes:
        fpr: False positive rates from threshold +inf down to -inf
        tpr: True positive rates at the same thresholds
        auc: Mann-Whitney area under the curve
    """
    fpr: np.ndarray
    tpr: np.ndarray
    auc: float

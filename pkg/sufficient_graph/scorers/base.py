"""Base scorer implementation for the sufficient graph estimator

Scorers turn one node pair into an edge score. They are the extension point
for edge statistics: the graph pipeline only talks to ``BaseScorer``, so a new
statistic is added by subclassing it.

Example:
    >>> class ConstantScorer(BaseScorer):
    ...     @property
    ...     def description(self) -> str:
    ...         return "Scores every pair with 1"
    ...
    ...     def _score(self, data, pair, gsir_cfg, eps_u, relative_eps, seed):
    ...         return PairDiagnostics(pair=pair, score=1.0, gammas={})
    ...
    ...     def gcv_target(self, data, pair, gsir_cfg, relative_eps, seed):
    ...         raise GcvDegenerate("No regularizer to tune")
"""

import logging
from abc import ABC, abstractmethod
from typing import Optional, Tuple

import numpy as np

from ..errors import SgmError
from ..gsir import GsirConfig
from ..types import Pair, PairDiagnostics, SampleMatrix, ScoreResponse, normalize_pair

logger = logging.getLogger(__name__)


class BaseScorer(ABC):
    """Abstract base class for edge scorers

    The scorer's name is derived from the class name unless given. Scorers
    hold no per-run state, so one instance can be shipped to worker processes.

    Attributes:
        _name: Protected name attribute of the scorer
    """

    def __init__(self, name: Optional[str] = None):
        """Initialize the scorer with an optional custom name

        Args:
            name: Optional custom name. If not provided, the class name is used.
        """
        self._name = name or self.__class__.__name__

    @property
    def name(self) -> str:
        """Get the scorer name"""
        return self._name

    @property
    @abstractmethod
    def description(self) -> str:
        """Short description of the statistic, used in logs and run records"""
        pass

    @property
    def uses_reduction(self) -> bool:
        """Whether the scorer runs the GSIR step (and needs its regularizers)"""
        return False

    @abstractmethod
    def _score(
        self,
        data: SampleMatrix,
        pair: Pair,
        gsir_cfg: GsirConfig,
        eps_u: float,
        relative_eps: bool,
        seed: int,
    ) -> PairDiagnostics:
        """Compute the statistic for one normalized pair

        Raises:
            SgmError: On any numerical or sample failure
        """
        pass

    @abstractmethod
    def gcv_target(
        self,
        data: SampleMatrix,
        pair: Pair,
        gsir_cfg: GsirConfig,
        relative_eps: bool,
        seed: int,
    ) -> Tuple[np.ndarray, np.ndarray]:
        """Return (G1, G2) of the GCV assignment for the conditioning regularizer"""
        pass

    def validate_params(self, data: SampleMatrix, pair: Pair) -> bool:
        """Check that the pair indexes existing, distinct columns

        Args:
            data: Sample matrix
            pair: Candidate pair

        Returns:
            True if the pair can be scored, False otherwise
        """
        i, j = pair
        if i == j:
            logger.error(f"Pair ({i}, {j}) is a self-loop")
            return False
        if not (0 <= i < data.p and 0 <= j < data.p):
            logger.error(f"Pair ({i}, {j}) is out of range for {data.p} columns")
            return False
        return True

    def execute(
        self,
        data: SampleMatrix,
        pair: Pair,
        gsir_cfg: GsirConfig,
        eps_u: float,
        relative_eps: bool = True,
        seed: int = 0,
    ) -> ScoreResponse:
        """Score one pair, reporting failures instead of raising

        Returns:
            ScoreResponse with diagnostics on success or the error message
        """
        if not self.validate_params(data, pair):
            return ScoreResponse(pair=pair, success=False, result=None, error="Invalid pair")

        pair = normalize_pair(*pair)
        try:
            result = self._score(data, pair, gsir_cfg, eps_u, relative_eps, seed)
            logger.debug(f"{self.name} scored {pair}: {result.score:.6g}")
            return ScoreResponse(pair=pair, success=True, result=result, error=None)

        except SgmError as e:
            error_msg = f"{self.name} failed on pair {pair}: {e.message}"
            logger.warning(error_msg)
            return ScoreResponse(pair=pair, success=False, result=None, error=error_msg)

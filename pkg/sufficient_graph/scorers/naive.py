"""Naive scorer: CCCO norm conditioned on the raw remaining variables"""

from typing import Tuple

import numpy as np

from ..ccco import naive_pair_diagnostics
from ..gsir import GsirConfig, pair_grams
from ..types import Pair, PairDiagnostics, SampleMatrix
from .base import BaseScorer


class NaiveScorer(BaseScorer):
    """Scores a pair without the dimension reduction step

    The conditioning kernel lives on all p - 2 remaining variables, which is
    what the reduction step is meant to avoid when p is large.
    """

    def __init__(self):
        super().__init__(name="naive")

    @property
    def description(self) -> str:
        return "CCCO norm given the full complement block"

    def _score(
        self,
        data: SampleMatrix,
        pair: Pair,
        gsir_cfg: GsirConfig,
        eps_u: float,
        relative_eps: bool,
        seed: int,
    ) -> PairDiagnostics:
        return naive_pair_diagnostics(data, pair, eps_u, relative_eps=relative_eps, seed=seed)

    def gcv_target(
        self,
        data: SampleMatrix,
        pair: Pair,
        gsir_cfg: GsirConfig,
        relative_eps: bool,
        seed: int,
    ) -> Tuple[np.ndarray, np.ndarray]:
        """G1 = G_{X^(i,j)}, G2 = G_{X^-(i,j)}"""
        g_minus, g_pair = pair_grams(data, pair, seed=seed)
        return g_pair.centered, g_minus.centered

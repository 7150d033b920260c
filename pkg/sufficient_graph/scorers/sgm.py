"""Sufficient graphical model scorer: GSIR reduction followed by the CCCO norm"""

from typing import Tuple

import numpy as np

from ..ccco import pair_diagnostics
from ..gsir import GsirConfig, predictor_for_pair
from ..kernel import gram_for
from ..types import Pair, PairDiagnostics, SampleMatrix
from .base import BaseScorer


class SgmScorer(BaseScorer):
    """Scores a pair conditionally on its extracted sufficient predictor"""

    def __init__(self):
        super().__init__(name="sgm")

    @property
    def description(self) -> str:
        return "CCCO norm given the GSIR sufficient predictor of the remaining variables"

    @property
    def uses_reduction(self) -> bool:
        return True

    def _score(
        self,
        data: SampleMatrix,
        pair: Pair,
        gsir_cfg: GsirConfig,
        eps_u: float,
        relative_eps: bool,
        seed: int,
    ) -> PairDiagnostics:
        return pair_diagnostics(data, pair, gsir_cfg, eps_u, relative_eps=relative_eps, seed=seed)

    def gcv_target(
        self,
        data: SampleMatrix,
        pair: Pair,
        gsir_cfg: GsirConfig,
        relative_eps: bool,
        seed: int,
    ) -> Tuple[np.ndarray, np.ndarray]:
        """G1 = G_{X^(i,j)}, G2 = G_U"""
        predictor, _, g_pair, _ = predictor_for_pair(
            data, pair, gsir_cfg, relative_eps=relative_eps, seed=seed
        )
        g_u = gram_for(predictor.values, seed=seed)
        return g_pair.centered, g_u.centered

"""Generalized sliced inverse regression on centered Gram matrices

For a pair (i, j) this extracts the d-dimensional sufficient predictor of the
complement block X^{-(i,j)} for the pair block X^{(i,j)}. The predictor values
at the sample points replace X^{-(i,j)} in the conditioning set of the edge
statistic.
"""

import logging
from dataclasses import dataclass, replace
from typing import List, Sequence, Tuple

import numpy as np

from .errors import InvalidConfig, InvalidInput, RankDeficient
from .kernel import GramMatrix, VariableBlock, block_rows, gram_for
from .numerics import SymMatrix, as_symmetric, eigh, reg_inverse
from .types import Pair, as_samples, normalize_pair

logger = logging.getLogger(__name__)

USABLE_EIG_REL_TOL = 1e-10
USABLE_EIG_ABS_TOL = 1e-14


@dataclass(frozen=True)
class GsirConfig:
    """Step-1 settings

    Attributes:
        d: Predictor dimension
        eps_minus: Regularizer for the complement Gram (eta)
        eps_pair: Regularizer for the pair Gram (epsilon)
    """
    d: int = 2
    eps_minus: float = 1e-2
    eps_pair: float = 1e-2

    def __post_init__(self):
        if self.d < 1:
            raise InvalidConfig(f"d must be >= 1, got {self.d}")
        if not (self.eps_minus > 0 and self.eps_pair > 0):
            raise InvalidConfig("GSIR regularizers must be > 0")

    def scaled(self, lmax_minus: float, lmax_pair: float) -> "GsirConfig":
        """Absolute config for regularizers given relative to lambda_max

        A zero lambda_max leaves the regularizer unscaled.
        """
        return replace(
            self,
            eps_minus=self.eps_minus * (lmax_minus if lmax_minus > 0 else 1.0),
            eps_pair=self.eps_pair * (lmax_pair if lmax_pair > 0 else 1.0),
        )


@dataclass
class SufficientPredictor:
    """Extracted predictor for one pair

    Attributes:
        values: n x d predictor values, centered with unit variance per column
        coefficients: n x d coefficient vectors b^r before normalization
        pair: The pair the predictor was extracted for
        eigenvalues: Leading d eigenvalues of the GSIR matrix, descending
        scale: Column standard deviations removed from G_minus @ coefficients
    """
    values: np.ndarray
    coefficients: np.ndarray
    pair: Pair
    eigenvalues: np.ndarray
    scale: np.ndarray


def _check_shared_n(g_minus: GramMatrix, g_pair: GramMatrix) -> None:
    if g_minus.n != g_pair.n:
        raise InvalidInput(f"Gram matrices disagree on n: {g_minus.n} vs {g_pair.n}")


def gsir_matrix(g_minus: GramMatrix, g_pair: GramMatrix, cfg: GsirConfig) -> SymMatrix:
    """M = W G_- G_+ (G_+ + eps I)^-1 G_- W with W = (G_- + eta I)^-1

    M has the form W B W with B positive semidefinite, so it is symmetric PSD
    up to round-off.
    """
    _check_shared_n(g_minus, g_pair)
    gm = g_minus.centered
    gp = g_pair.centered
    w = reg_inverse(gm, cfg.eps_minus)
    smoother = gp @ reg_inverse(gp, cfg.eps_pair)
    m = w @ gm @ smoother @ gm @ w
    return as_symmetric((m + m.T) / 2.0)


def extract_predictor(
    g_minus: GramMatrix,
    g_pair: GramMatrix,
    cfg: GsirConfig,
    pair: Pair = (0, 0),
) -> SufficientPredictor:
    """Top-d GSIR directions evaluated at the sample points

    Column r of the predictor is G_- b^r with b^r = (G_- + eta I)^-1 a^r, where
    a^r is the r-th eigenvector of the GSIR matrix, rescaled to unit variance.

    Raises:
        InvalidConfig: If d > n - 1
        RankDeficient: If fewer than d eigenvalues are usable
    """
    n = g_minus.n
    if cfg.d > n - 1:
        raise InvalidConfig(f"d={cfg.d} exceeds n-1={n - 1}")

    decomp = eigh(gsir_matrix(g_minus, g_pair, cfg))
    lam_max = float(decomp.values[0])
    if lam_max <= USABLE_EIG_ABS_TOL:
        available = 0
    else:
        available = int(np.sum(decomp.values > USABLE_EIG_REL_TOL * lam_max))
    if available < cfg.d:
        raise RankDeficient(available)

    directions = decomp.vectors[:, : cfg.d]
    coefficients = reg_inverse(g_minus.centered, cfg.eps_minus) @ directions
    # G_- has zero row sums, so these columns are already centered
    raw_values = g_minus.centered @ coefficients
    scale = raw_values.std(axis=0)
    if np.any(scale <= 0) or not np.all(np.isfinite(scale)):
        raise RankDeficient(int(np.sum(scale > 0)), "Predictor column has zero variance")

    return SufficientPredictor(
        values=raw_values / scale,
        coefficients=coefficients,
        pair=pair,
        eigenvalues=np.clip(decomp.values[: cfg.d], 0.0, None),
        scale=scale,
    )


def pair_grams(data, pair: Pair, seed: int = 0) -> Tuple[GramMatrix, GramMatrix]:
    """Centered Grams of the complement block and the pair block"""
    data = as_samples(data)
    i, j = normalize_pair(*pair)
    g_minus = gram_for(block_rows(data, VariableBlock.complement(i, j, data.p)), seed=seed)
    g_pair = gram_for(block_rows(data, VariableBlock.pair(i, j)), seed=seed)
    return g_minus, g_pair


def predictor_for_pair(
    data,
    pair: Pair,
    cfg: GsirConfig,
    relative_eps: bool = True,
    seed: int = 0,
) -> Tuple[SufficientPredictor, GramMatrix, GramMatrix, GsirConfig]:
    """Build both Grams and extract the predictor for one pair

    Returns the predictor, the complement and pair Grams, and the absolute
    config that was applied.
    """
    data = as_samples(data)
    pair = normalize_pair(*pair)
    g_minus, g_pair = pair_grams(data, pair, seed=seed)
    applied = cfg.scaled(g_minus.lambda_max, g_pair.lambda_max) if relative_eps else cfg
    predictor = extract_predictor(g_minus, g_pair, applied, pair=pair)
    logger.debug(f"Pair {pair}: GSIR eigenvalues {predictor.eigenvalues}")
    return predictor, g_minus, g_pair, applied


def extract_predictors(
    data,
    pairs: Sequence[Pair],
    cfg: GsirConfig,
    relative_eps: bool = True,
    seed: int = 0,
) -> List[SufficientPredictor]:
    """Batch extraction, one independent unit of work per pair"""
    data = as_samples(data)
    return [predictor_for_pair(data, pair, cfg, relative_eps, seed)[0] for pair in pairs]

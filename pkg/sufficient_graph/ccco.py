"""Conjoined conditional covariance operator statistic

The edge statistic for a pair (i, j) is the Hilbert-Schmidt norm of the
estimated operator of X^i and X^j, each joined with the conditioning
variable, given that variable. ``pair_score`` conditions on the GSIR
predictor U^{ij}; ``naive_pair_score`` conditions on the raw complement block.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from .errors import InvalidInput
from .gsir import GsirConfig, predictor_for_pair
from .kernel import GramMatrix, VariableBlock, block_rows, gram_for
from .numerics import centering_matrix, fro_norm, pseudo_inverse, psd_sqrt
from .types import EdgeScore, Pair, PairDiagnostics, SampleMatrix, as_samples, normalize_pair

logger = logging.getLogger(__name__)

PINV_REL_TOL = 1e-10
MIN_SAMPLES = 4
MIN_NODES = 3


@dataclass(frozen=True)
class CccoInput:
    """Centered Grams for the step-2 statistic

    Attributes:
        g_iu: Kernel on (X^i, U)
        g_ju: Kernel on (X^j, U)
        g_u: Kernel on U
        eps_u: Absolute Tikhonov regularizer for G_U
    """
    g_iu: GramMatrix
    g_ju: GramMatrix
    g_u: GramMatrix
    eps_u: float

    def __post_init__(self):
        if not (self.g_iu.n == self.g_ju.n == self.g_u.n):
            raise InvalidInput("CCCO Gram matrices must share the sample size")
        if not self.eps_u > 0:
            raise InvalidInput(f"eps_u must be > 0, got {self.eps_u}")

    @property
    def n(self) -> int:
        return self.g_u.n


def ccco_norm(ccco_input: CccoInput) -> float:
    """|| A^1/2 B^1/2 - A^1/2 G_U (G_U + eps Q)^+ B^1/2 ||_F

    A and B are the centered Grams of (X^i, U) and (X^j, U). The regularizer
    multiplies Q, so the pseudo-inverse is taken on a matrix that is singular
    along the constant vector.
    """
    n = ccco_input.n
    a_half = psd_sqrt(ccco_input.g_iu.centered)
    b_half = psd_sqrt(ccco_input.g_ju.centered)
    g_u = ccco_input.g_u.centered
    q = centering_matrix(n)
    projector = g_u @ pseudo_inverse(g_u + ccco_input.eps_u * q, rel_tol=PINV_REL_TOL)
    residual = a_half @ b_half - a_half @ projector @ b_half
    return fro_norm(residual)


def hs_norm(ccco_input: CccoInput) -> float:
    """Hilbert-Schmidt norm of the sample-averaged operator

    Equals ccco_norm / n; the matching operator-level regularizer is eps_u / n.
    """
    return ccco_norm(ccco_input) / ccco_input.n


def _check_shape(data: SampleMatrix) -> None:
    if data.p < MIN_NODES:
        raise InvalidInput(f"Need at least {MIN_NODES} variables, got {data.p}")
    if data.n < MIN_SAMPLES:
        raise InvalidInput(f"Need at least {MIN_SAMPLES} samples, got {data.n}")


def _conditional_score(
    data: SampleMatrix,
    pair: Pair,
    u_rows: np.ndarray,
    eps_u: float,
    relative_eps: bool,
    seed: int,
) -> Tuple[float, Dict[str, float], float]:
    i, j = pair
    x_i = data.values[:, [i]]
    x_j = data.values[:, [j]]
    g_iu = gram_for(np.hstack([x_i, u_rows]), seed=seed)
    g_ju = gram_for(np.hstack([x_j, u_rows]), seed=seed)
    g_u = gram_for(u_rows, seed=seed)

    eps_abs = eps_u
    if relative_eps:
        lam = g_u.lambda_max
        eps_abs = eps_u * lam if lam > 0 else eps_u

    value = hs_norm(CccoInput(g_iu=g_iu, g_ju=g_ju, g_u=g_u, eps_u=eps_abs))
    gammas = {"iu": g_iu.gamma, "ju": g_ju.gamma, "u": g_u.gamma}
    return value, gammas, eps_abs


def pair_diagnostics(
    data,
    pair: Pair,
    gsir_cfg: GsirConfig,
    eps_u: float,
    relative_eps: bool = True,
    seed: int = 0,
) -> PairDiagnostics:
    """Full two-step computation for one pair, with every constant recorded

    Raises:
        InvalidInput: If p < 3 or n < 4
        RankDeficient: If GSIR finds fewer than d usable directions
        DegenerateSample: If a kernel block is constant
    """
    data = as_samples(data)
    _check_shape(data)
    pair = normalize_pair(*pair)

    predictor, g_minus, g_pair, applied = predictor_for_pair(
        data, pair, gsir_cfg, relative_eps=relative_eps, seed=seed
    )
    value, gammas, eps_abs = _conditional_score(
        data, pair, predictor.values, eps_u, relative_eps, seed
    )
    gammas.update({"pair": g_pair.gamma, "minus": g_minus.gamma})
    return PairDiagnostics(
        pair=pair,
        score=value,
        gammas=gammas,
        eigenvalues=tuple(float(v) for v in predictor.eigenvalues),
        eps={"pair": applied.eps_pair, "minus": applied.eps_minus, "u": eps_abs},
    )


def naive_pair_diagnostics(
    data,
    pair: Pair,
    eps_u: float,
    relative_eps: bool = True,
    seed: int = 0,
) -> PairDiagnostics:
    """Statistic conditioned on the raw complement block"""
    data = as_samples(data)
    _check_shape(data)
    pair = normalize_pair(*pair)

    rest = block_rows(data, VariableBlock.complement(pair[0], pair[1], data.p))
    value, gammas, eps_abs = _conditional_score(data, pair, rest, eps_u, relative_eps, seed)
    return PairDiagnostics(pair=pair, score=value, gammas=gammas, eps={"u": eps_abs})


def pair_score(
    data,
    pair: Pair,
    gsir_cfg: GsirConfig,
    eps_u: float,
    relative_eps: bool = True,
    seed: int = 0,
) -> EdgeScore:
    """Edge score of the sufficient graphical model for one pair"""
    diag = pair_diagnostics(data, pair, gsir_cfg, eps_u, relative_eps=relative_eps, seed=seed)
    return EdgeScore(pair=diag.pair, value=diag.score)


def naive_pair_score(
    data,
    pair: Pair,
    eps_u: float,
    relative_eps: bool = True,
    seed: int = 0,
) -> EdgeScore:
    """Edge score without the dimension reduction step"""
    diag = naive_pair_diagnostics(data, pair, eps_u, relative_eps=relative_eps, seed=seed)
    return EdgeScore(pair=diag.pair, value=diag.score)

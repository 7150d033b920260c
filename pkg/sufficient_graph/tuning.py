"""Generalized cross validation for the regularizers and the threshold

Both criteria share one form. For positive semidefinite G1, G2 and
c = eps * lambda_max(G2):

    || G1 - G2 [G2 + c I]^-1 G1 ||_F  /  (1/n) tr{ I - G2 [G2 + c I]^-1 }

With G2 = V diag(lambda) V^T the numerator is || diag(c / (lambda + c)) V^T G1 ||_F
and the denominator is 1 - mean(lambda / (lambda + c)), so a whole grid costs
one eigendecomposition.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .config import DEFAULT_EPS_GRID, DEFAULT_RHO_GRID, _check_grid
from .errors import GcvDegenerate, InvalidInput
from .gsir import pair_grams
from .kernel import GramMatrix, gram_for
from .numerics import eigh, fro_norm
from .types import EdgeScoreMatrix, Pair, as_samples

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GcvGrid:
    """Grids searched by GCV

    Attributes:
        eps_values: Regularizer grid, strictly descending
        rho_values: Threshold grid, strictly ascending
    """
    eps_values: Tuple[float, ...] = DEFAULT_EPS_GRID
    rho_values: Tuple[float, ...] = DEFAULT_RHO_GRID

    def __post_init__(self):
        _check_grid("eps_values", tuple(self.eps_values), descending=True)
        _check_grid("rho_values", tuple(self.rho_values), descending=False)


@dataclass
class Regularizers:
    """Relative Tikhonov regularizers for one run

    Attributes:
        eps_pair: Regularizer of the pair Gram
        eps_minus: Regularizer of the complement Gram
        eps_u: Regularizer of the conditioning Gram
        sources: How each value was obtained ("gcv", "fixed", "fallback",
            "boundary" for an eps_u minimum at the top of the grid, or "unused")
    """
    eps_pair: float
    eps_minus: float
    eps_u: float
    sources: Dict[str, str] = field(default_factory=dict)

    def as_dict(self) -> Dict[str, float]:
        return {"eps_pair": self.eps_pair, "eps_minus": self.eps_minus, "eps_u": self.eps_u}


def _matrix(g) -> np.ndarray:
    return g.centered if isinstance(g, GramMatrix) else np.asarray(g, dtype=float)


def gcv_eps_curve(g1, g2, grid: Sequence[float]) -> np.ndarray:
    """Criterion value at every grid point for one (G1, G2) assignment

    Grid points with a nonpositive denominator evaluate to +inf.

    Raises:
        GcvDegenerate: If lambda_max(G2) <= 0 or every grid point is +inf
    """
    g1 = _matrix(g1)
    g2 = _matrix(g2)
    if g1.shape != g2.shape:
        raise InvalidInput(f"GCV matrices differ in shape: {g1.shape} vs {g2.shape}")

    decomp = eigh(g2)
    lam = np.clip(decomp.values, 0.0, None)
    lam_max = float(lam[0]) if lam.size else 0.0
    if lam_max <= 0:
        raise GcvDegenerate("Largest eigenvalue of G2 is zero")

    rotated = decomp.vectors.T @ g1
    curve = np.empty(len(grid))
    for k, eps in enumerate(grid):
        c = eps * lam_max
        shrink = c / (lam + c)
        numerator = fro_norm(shrink[:, np.newaxis] * rotated)
        denominator = 1.0 - float(np.mean(lam / (lam + c)))
        curve[k] = numerator / denominator if denominator > 0 else np.inf

    if not np.any(np.isfinite(curve)):
        raise GcvDegenerate("GCV denominator is nonpositive at every grid point")
    return curve


def _argmin(curve: np.ndarray, grid: Sequence[float]) -> float:
    """Grid value minimizing the curve; ties go to the smaller grid value"""
    values = np.where(np.isfinite(curve), curve, np.inf)
    best = min(range(len(grid)), key=lambda k: (values[k], grid[k]))
    return float(grid[best])


def gcv_eps(g1, g2, grid: Sequence[float]) -> float:
    """Minimizing regularizer for a single assignment"""
    return _argmin(gcv_eps_curve(g1, g2, grid), grid)


def select_eps(curves: Sequence[Optional[np.ndarray]], grid: Sequence[float]) -> float:
    """Sum per-pair curves and minimize

    Pairs without a curve (None) are skipped.

    Raises:
        GcvDegenerate: If no pair produced a curve
    """
    available = [c for c in curves if c is not None]
    if not available:
        raise GcvDegenerate("No pair produced a GCV curve")
    total = np.sum(np.vstack(available), axis=0)
    return _argmin(total, grid)


def step1_curves(data, pair: Pair, grid: Sequence[float], seed: int = 0) -> Tuple[np.ndarray, np.ndarray]:
    """GCV curves for the two GSIR regularizers of one pair

    Returns:
        (curve for eps_pair with G1 = G_-, G2 = G_+,
         curve for eps_minus with G1 = G_+, G2 = G_-)
    """
    g_minus, g_pair = pair_grams(data, pair, seed=seed)
    return gcv_eps_curve(g_minus, g_pair, grid), gcv_eps_curve(g_pair, g_minus, grid)


def _neighborhood_term(g_x: np.ndarray, g_c: Optional[np.ndarray], eps: float) -> float:
    # Empty or constant neighborhoods use the identity hat matrix: ||G_X||_F / 1
    if g_c is None:
        return fro_norm(g_x)
    try:
        return float(gcv_eps_curve(g_x, g_c, [eps])[0])
    except GcvDegenerate:
        return fro_norm(g_x)


def gcv_rho_curve(
    data,
    scores: EdgeScoreMatrix,
    grid: Sequence[float],
    eps_for_neighborhood: float = 1e-2,
    seed: int = 0,
) -> np.ndarray:
    """Neighborhood-regression GCV summed over nodes, at every threshold

    Raises:
        GcvDegenerate: If every node has an empty neighborhood at every threshold
    """
    data = as_samples(data)
    if scores.p != data.p:
        raise InvalidInput(f"Score matrix has p={scores.p} but data has p={data.p}")

    node_grams = [gram_for(data.values[:, [i]], seed=seed).centered for i in range(data.p)]
    neighborhood_grams: Dict[Tuple[int, ...], Optional[np.ndarray]] = {}
    off_diagonal = ~np.eye(data.p, dtype=bool)
    any_edge = False

    curve = np.empty(len(grid))
    for k, rho in enumerate(grid):
        adjacency = (scores.scores > rho) & off_diagonal
        total = 0.0
        for i in range(data.p):
            neighbors = tuple(int(j) for j in np.flatnonzero(adjacency[i]))
            g_c = None
            if neighbors:
                any_edge = True
                if neighbors not in neighborhood_grams:
                    neighborhood_grams[neighbors] = gram_for(
                        data.values[:, list(neighbors)], seed=seed
                    ).centered
                g_c = neighborhood_grams[neighbors]
            total += _neighborhood_term(node_grams[i], g_c, eps_for_neighborhood)
        curve[k] = total
        logger.debug(f"GCV(rho={rho}) = {total:.6g}, {int(adjacency.sum()) // 2} edges")

    if not any_edge:
        raise GcvDegenerate("Every neighborhood is empty on the whole threshold grid")
    return curve


def gcv_rho(
    data,
    scores: EdgeScoreMatrix,
    grid: Sequence[float] = DEFAULT_RHO_GRID,
    eps_for_neighborhood: float = 1e-2,
    seed: int = 0,
) -> float:
    """Threshold minimizing the neighborhood GCV; ties go to the smaller threshold"""
    curve = gcv_rho_curve(data, scores, grid, eps_for_neighborhood, seed=seed)
    rho = _argmin(curve, grid)
    logger.info(f"GCV selected threshold rho={rho}")
    return rho

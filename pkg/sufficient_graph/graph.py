"""Graph estimation: pairwise scores, threshold selection and the estimator"""

import logging
from functools import partial
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .config import PipelineConfig
from .errors import GcvDegenerate, InvalidConfig, InvalidInput, SgmError
from .flow import FlowManager, FlowStep
from .gsir import GsirConfig, pair_grams
from .parallel import map_ordered, run_sync
from .scorers import BaseScorer, scorer_for
from .tuning import Regularizers, gcv_eps_curve, gcv_rho, select_eps
from .types import (
    EdgeScoreMatrix,
    GraphEstimate,
    Method,
    Pair,
    SampleMatrix,
    ScoreResponse,
    as_samples,
)

logger = logging.getLogger(__name__)

NEIGHBORHOOD_FALLBACK_EPS = 1e-2


def all_pairs(p: int) -> List[Pair]:
    """Every pair (i, j) with i > j, in lexicographic order"""
    return [(i, j) for i in range(p) for j in range(i)]


def _check_dimensions(data: SampleMatrix) -> None:
    if data.p < 3:
        raise InvalidInput(f"Need at least 3 variables, got p={data.p}")
    if data.n < 4:
        raise InvalidInput(f"Need at least 4 samples, got n={data.n}")


def gsir_config(cfg: PipelineConfig, regularizers: Regularizers) -> GsirConfig:
    """GSIR settings for a run with the given regularizers"""
    return GsirConfig(d=cfg.d, eps_minus=regularizers.eps_minus, eps_pair=regularizers.eps_pair)


def neighborhood_eps(regularizers: Regularizers) -> float:
    """Regularizer for the threshold GCV: the pair one when it was tuned or given"""
    if regularizers.sources.get("eps_pair") in ("gcv", "fixed", "averaged"):
        return regularizers.eps_pair
    return NEIGHBORHOOD_FALLBACK_EPS


# Module-level tasks so the process pool can pickle them


def _safe_curve(g1, g2, grid: Sequence[float]) -> Optional[np.ndarray]:
    try:
        return gcv_eps_curve(g1, g2, grid)
    except SgmError as e:
        logger.debug(f"No GCV curve: {e.message}")
        return None


def _step1_task(
    pair: Pair, data: SampleMatrix, grid: Sequence[float], seed: int
) -> Tuple[Optional[np.ndarray], Optional[np.ndarray]]:
    try:
        g_minus, g_pair = pair_grams(data, pair, seed=seed)
    except SgmError as e:
        logger.warning(f"Pair {pair} skipped in regularizer tuning: {e.message}")
        return None, None
    return _safe_curve(g_minus, g_pair, grid), _safe_curve(g_pair, g_minus, grid)


def _step2_task(
    pair: Pair,
    data: SampleMatrix,
    scorer: BaseScorer,
    gsir_cfg: GsirConfig,
    grid: Sequence[float],
    relative_eps: bool,
    seed: int,
) -> Optional[np.ndarray]:
    try:
        g1, g2 = scorer.gcv_target(data, pair, gsir_cfg, relative_eps, seed)
    except SgmError as e:
        logger.warning(f"Pair {pair} skipped in conditioning regularizer tuning: {e.message}")
        return None
    return _safe_curve(g1, g2, grid)


def _score_task(
    pair: Pair,
    data: SampleMatrix,
    scorer: BaseScorer,
    gsir_cfg: GsirConfig,
    eps_u: float,
    relative_eps: bool,
    seed: int,
) -> ScoreResponse:
    return scorer.execute(data, pair, gsir_cfg, eps_u, relative_eps=relative_eps, seed=seed)


def _select(curves, cfg: PipelineConfig, name: str) -> Tuple[float, str]:
    try:
        value = select_eps(curves, cfg.eps_grid)
        logger.info(f"GCV selected {name}={value}")
        return value, "gcv"
    except GcvDegenerate as e:
        logger.warning(f"GCV for {name} degenerate ({e.message}); using {cfg.fallback_eps}")
        return cfg.fallback_eps, "fallback"


def _select_conditioning(curves, cfg: PipelineConfig) -> Tuple[float, str]:
    """GCV choice of eps_u, rejecting the top of the grid

    A minimum at the largest grid value means the predictor Gram explains
    none of the pair Gram. Used in the statistic, that value removes the
    conditioning and leaves the unconditional cross term, so the fallback
    regularizer is used instead.
    """
    value, source = _select(curves, cfg, "eps_u")
    if source == "gcv" and len(cfg.eps_grid) > 1 and value == cfg.eps_grid[0]:
        logger.warning(
            f"GCV for eps_u reached the top of the grid ({value}); using {cfg.fallback_eps}"
        )
        return cfg.fallback_eps, "boundary"
    return value, source


async def atune_regularizers(
    data, cfg: PipelineConfig, scorer: Optional[BaseScorer] = None
) -> Regularizers:
    """Select every regularizer the scorer needs by GCV over all pairs

    The GSIR regularizers are selected first, since the conditioning Gram of
    the second stage is built from predictors extracted with them. Values
    fixed in cfg skip their selection.
    """
    data = as_samples(data)
    _check_dimensions(data)
    scorer = scorer or scorer_for(cfg.method)
    pairs = all_pairs(data.p)
    sources: Dict[str, str] = {}

    eps_pair, eps_minus = cfg.eps_pair, cfg.eps_minus
    if scorer.uses_reduction and (eps_pair is None or eps_minus is None):
        task = partial(_step1_task, data=data, grid=cfg.eps_grid, seed=cfg.seed)
        curves = await map_ordered(task, pairs, cfg.workers)
        if eps_pair is None:
            eps_pair, sources["eps_pair"] = _select([c[0] for c in curves], cfg, "eps_pair")
        if eps_minus is None:
            eps_minus, sources["eps_minus"] = _select([c[1] for c in curves], cfg, "eps_minus")
    unused = "fixed" if scorer.uses_reduction else "unused"
    if eps_pair is None:
        eps_pair = cfg.fallback_eps
    if eps_minus is None:
        eps_minus = cfg.fallback_eps
    sources.setdefault("eps_pair", unused)
    sources.setdefault("eps_minus", unused)

    eps_u = cfg.eps_u
    if eps_u is None:
        gsir_cfg = GsirConfig(d=cfg.d, eps_minus=eps_minus, eps_pair=eps_pair)
        task = partial(
            _step2_task,
            data=data,
            scorer=scorer,
            gsir_cfg=gsir_cfg,
            grid=cfg.eps_grid,
            relative_eps=cfg.relative_eps,
            seed=cfg.seed,
        )
        curves = await map_ordered(task, pairs, cfg.workers)
        eps_u, sources["eps_u"] = _select_conditioning(curves, cfg)
    else:
        sources["eps_u"] = "fixed"

    return Regularizers(eps_pair=eps_pair, eps_minus=eps_minus, eps_u=eps_u, sources=sources)


def tune_regularizers(data, cfg: PipelineConfig, scorer: Optional[BaseScorer] = None) -> Regularizers:
    """Synchronous wrapper of atune_regularizers"""
    return run_sync(atune_regularizers(data, cfg, scorer))


async def ascore_all_pairs(
    data,
    cfg: PipelineConfig,
    regularizers: Optional[Regularizers] = None,
    scorer: Optional[BaseScorer] = None,
) -> EdgeScoreMatrix:
    """Score every pair i > j

    Pairs whose scorer fails get the largest successful score under the
    "keep" policy and 0 under "drop".

    Raises:
        InvalidInput: If p < 3 or n < 4
    """
    data = as_samples(data)
    _check_dimensions(data)
    scorer = scorer or scorer_for(cfg.method)
    if regularizers is None:
        regularizers = await atune_regularizers(data, cfg, scorer)

    pairs = all_pairs(data.p)
    logger.info(f"Scoring {len(pairs)} pairs with {scorer.name} on {cfg.workers} worker(s)")
    task = partial(
        _score_task,
        data=data,
        scorer=scorer,
        gsir_cfg=gsir_config(cfg, regularizers),
        eps_u=regularizers.eps_u,
        relative_eps=cfg.relative_eps,
        seed=cfg.seed,
    )
    responses: List[ScoreResponse] = await map_ordered(task, pairs, cfg.workers)
    return _collect_scores(data.p, responses, cfg.failed_pair_policy)


def score_pairs_serial(
    data,
    cfg: PipelineConfig,
    regularizers: Regularizers,
    scorer: Optional[BaseScorer] = None,
) -> EdgeScoreMatrix:
    """Score every pair in the calling process, without an event loop

    Used inside worker processes that already run one replication each.
    """
    data = as_samples(data)
    _check_dimensions(data)
    scorer = scorer or scorer_for(cfg.method)
    gsir_cfg = gsir_config(cfg, regularizers)
    responses = [
        _score_task(pair, data, scorer, gsir_cfg, regularizers.eps_u, cfg.relative_eps, cfg.seed)
        for pair in all_pairs(data.p)
    ]
    return _collect_scores(data.p, responses, cfg.failed_pair_policy)


def _collect_scores(p: int, responses: Sequence[ScoreResponse], policy: str) -> EdgeScoreMatrix:
    values: Dict[Pair, float] = {}
    diagnostics = {}
    failed: List[Pair] = []
    for response in responses:
        if response.success and response.result is not None:
            values[response.pair] = response.result.score
            diagnostics[response.pair] = response.result
        else:
            failed.append(response.pair)

    if failed:
        fill = max(values.values(), default=0.0) if policy == "keep" else 0.0
        logger.warning(
            f"{len(failed)} of {len(responses)} pairs failed; "
            f"policy {policy!r} assigns score {fill:.6g}"
        )
        for pair in failed:
            values[pair] = fill

    return EdgeScoreMatrix.from_pairs(p, values, failed=tuple(failed), diagnostics=diagnostics)


def score_all_pairs(
    data,
    cfg: Optional[PipelineConfig] = None,
    regularizers: Optional[Regularizers] = None,
    scorer: Optional[BaseScorer] = None,
) -> EdgeScoreMatrix:
    """Synchronous wrapper of ascore_all_pairs"""
    return run_sync(ascore_all_pairs(data, cfg or PipelineConfig(), regularizers, scorer))


def threshold_graph(
    scores: EdgeScoreMatrix,
    rho: float,
    snapshot: Optional[Dict[str, Any]] = None,
    labels: Sequence[str] = (),
) -> GraphEstimate:
    """Keep the pairs whose score is strictly above rho"""
    edges = sorted((i, j) for i, j, value in scores.pairs() if value > rho)
    return GraphEstimate(
        p=scores.p,
        edges=edges,
        threshold=float(rho),
        score_matrix=scores,
        config_snapshot=dict(snapshot or {}),
        labels=tuple(labels),
    )


CONFIG_PREFIX = "config."
GAMMA_PREFIX = "gamma."
SOURCE_PREFIX = "eps_source."


def build_snapshot(
    cfg: PipelineConfig,
    regularizers: Regularizers,
    rho: float,
    rho_source: str,
    scores: EdgeScoreMatrix,
) -> Dict[str, Any]:
    """Every constant needed to replay and audit a run, as one flat record

    Values are scalars, strings or lists of scalars. Config fields are keyed
    "config.<field>", regularizer sources "eps_source.<name>" and kernel
    parameters "gamma.<i>,<j>.<kernel>".
    """
    from . import __version__

    record: Dict[str, Any] = {
        "version": __version__,
        "eps_pair": regularizers.eps_pair,
        "eps_minus": regularizers.eps_minus,
        "eps_u": regularizers.eps_u,
        "rho": rho,
        "rho_source": rho_source,
        "failed_pairs": [f"{i},{j}" for i, j in scores.failed],
    }
    for name, source in sorted(regularizers.sources.items()):
        record[f"{SOURCE_PREFIX}{name}"] = source
    for name, value in cfg.to_dict().items():
        record[f"{CONFIG_PREFIX}{name}"] = value
    for (i, j), diag in sorted(scores.diagnostics.items()):
        for kernel, gamma in sorted(diag.gammas.items()):
            record[f"{GAMMA_PREFIX}{i},{j}.{kernel}"] = gamma
    return record


def config_from_snapshot(snapshot: Dict[str, Any]) -> PipelineConfig:
    """Rebuild the run config from the "config." keys of a snapshot

    Raises:
        InvalidConfig: If the record holds no config keys
    """
    changes = {
        key[len(CONFIG_PREFIX):]: value
        for key, value in snapshot.items()
        if key.startswith(CONFIG_PREFIX)
    }
    if not changes:
        raise InvalidConfig("Run record has no config.* entries")
    return PipelineConfig.from_dict(changes)


class GraphEstimator:
    """Estimates a sufficient graphical model from samples

    Example:
        >>> estimator = GraphEstimatorBuilder().with_d(2).with_workers(4).build()
        >>> estimate = await estimator.fit(samples)
    """

    def __init__(self, config: Optional[PipelineConfig] = None, scorer: Optional[BaseScorer] = None):
        self.config = config or PipelineConfig()
        self.scorer = scorer or scorer_for(self.config.method)

    async def _tune(self, data: Dict[str, Any]) -> Dict[str, Any]:
        regularizers = await atune_regularizers(data["samples"], self.config, self.scorer)
        warnings = [
            f"GCV for {name} degenerated; used {getattr(regularizers, name)}"
            for name, source in regularizers.sources.items()
            if source in ("fallback", "boundary")
        ]
        return {"regularizers": regularizers, "warnings": data["warnings"] + warnings}

    async def _score(self, data: Dict[str, Any]) -> Dict[str, Any]:
        scores = await ascore_all_pairs(
            data["samples"], self.config, data["regularizers"], self.scorer
        )
        warnings = list(data["warnings"])
        if scores.failed:
            warnings.append(
                f"{len(scores.failed)} pair(s) failed and were scored by the "
                f"{self.config.failed_pair_policy!r} policy"
            )
        return {"scores": scores, "warnings": warnings}

    async def _select_threshold(self, data: Dict[str, Any]) -> Dict[str, Any]:
        if self.config.rho is not None:
            return {"rho": self.config.rho, "rho_source": "fixed", "rho_fallback": False}

        eps = neighborhood_eps(data["regularizers"])
        try:
            rho = gcv_rho(
                data["samples"], data["scores"], self.config.rho_grid, eps, seed=self.config.seed
            )
            return {"rho": rho, "rho_source": "gcv", "rho_fallback": False}
        except GcvDegenerate as e:
            message = f"Threshold GCV degenerate ({e.message}); using rho={self.config.fallback_rho}"
            logger.warning(message)
            return {
                "rho": self.config.fallback_rho,
                "rho_source": "fallback",
                "rho_fallback": True,
                "warnings": data["warnings"] + [message],
            }

    async def _assemble(self, data: Dict[str, Any]) -> Dict[str, Any]:
        snapshot = build_snapshot(
            self.config, data["regularizers"], data["rho"], data["rho_source"], data["scores"]
        )
        estimate = threshold_graph(data["scores"], data["rho"], snapshot, data["samples"].labels)
        estimate.warnings = list(data["warnings"])
        estimate.rho_fallback = data["rho_fallback"]
        logger.info(f"Estimated {len(estimate.edges)} edges at rho={estimate.threshold}")
        return {"estimate": estimate}

    def _build_flow(self) -> FlowManager:
        return (
            FlowManager()
            .add_step(FlowStep(name="tune_regularizers", process=self._tune))
            .add_step(FlowStep(name="score_pairs", process=self._score, requires=["tune_regularizers"]))
            .add_step(FlowStep(name="select_threshold", process=self._select_threshold, requires=["score_pairs"]))
            .add_step(FlowStep(name="assemble", process=self._assemble, requires=["select_threshold"]))
        )

    async def fit(self, data) -> GraphEstimate:
        """Run regularizer tuning, scoring, threshold selection and thresholding"""
        samples = as_samples(data)
        _check_dimensions(samples)
        result = await self._build_flow().execute({"samples": samples, "warnings": []})
        return result["estimate"]


class GraphEstimatorBuilder:
    """Builder class for creating estimators with a fluent interface"""

    def __init__(self, config: Optional[PipelineConfig] = None):
        self.changes: Dict[str, Any] = config.to_dict() if config else {}
        self.scorer: Optional[BaseScorer] = None

    def with_d(self, d: int) -> "GraphEstimatorBuilder":
        """Set the predictor dimension"""
        self.changes["d"] = d
        return self

    def with_method(self, method: Union[Method, str]) -> "GraphEstimatorBuilder":
        """Set the edge scoring method"""
        self.changes["method"] = Method(method)
        return self

    def with_scorer(self, scorer: BaseScorer) -> "GraphEstimatorBuilder":
        """Use a custom scorer instead of the method's default"""
        self.scorer = scorer
        return self

    def with_eps(self, value: float) -> "GraphEstimatorBuilder":
        """Fix all three regularizers"""
        self.changes.update(eps_pair=value, eps_minus=value, eps_u=value)
        return self

    def with_rho(self, rho: float) -> "GraphEstimatorBuilder":
        """Fix the threshold"""
        self.changes["rho"] = rho
        return self

    def with_grids(
        self,
        eps_grid: Optional[Sequence[float]] = None,
        rho_grid: Optional[Sequence[float]] = None,
    ) -> "GraphEstimatorBuilder":
        """Replace the GCV grids"""
        if eps_grid is not None:
            self.changes["eps_grid"] = tuple(eps_grid)
        if rho_grid is not None:
            self.changes["rho_grid"] = tuple(rho_grid)
        return self

    def with_seed(self, seed: int) -> "GraphEstimatorBuilder":
        """Set the bandwidth subsampling seed"""
        self.changes["seed"] = seed
        return self

    def with_workers(self, workers: int) -> "GraphEstimatorBuilder":
        """Set the worker pool size"""
        self.changes["workers"] = workers
        return self

    def with_failed_pair_policy(self, policy: str) -> "GraphEstimatorBuilder":
        """Set how failed pairs are scored ("keep" or "drop")"""
        self.changes["failed_pair_policy"] = policy
        return self

    def build(self) -> GraphEstimator:
        """Create the estimator instance"""
        return GraphEstimator(config=PipelineConfig.from_dict(self.changes), scorer=self.scorer)


def estimate(data, cfg: Optional[PipelineConfig] = None) -> GraphEstimate:
    """Estimate the graph with the default flow

    A degenerate threshold GCV falls back to cfg.fallback_rho and sets
    rho_fallback on the result.
    """
    return run_sync(GraphEstimator(cfg).fit(data))

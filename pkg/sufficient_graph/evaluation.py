"""ROC evaluation of edge scores and replicated simulation studies"""

import logging
from dataclasses import dataclass, field
from functools import partial
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.stats import rankdata

from .config import PipelineConfig
from .errors import GcvDegenerate, InvalidConfig, InvalidInput, InvalidTruth, SgmError
from .graph import atune_regularizers, neighborhood_eps, score_pairs_serial
from .parallel import map_ordered, run_sync
from .simgen import SimModel, generate
from .tuning import Regularizers, gcv_rho
from .types import EdgeScoreMatrix, GroundTruth, Method, Pair, RocCurve, normalize_pair

logger = logging.getLogger(__name__)

FPR_GRID = np.linspace(0.0, 1.0, 101)
DEFAULT_TUNE_REPS = 5

PRESETS: Dict[str, Dict[str, int]] = {
    "desk": {"p": 50, "n_hubs": 5, "reps": 10},
    "full": {"p": 200, "n_hubs": 10, "reps": 50},
}


def _labelled_scores(scores: EdgeScoreMatrix, truth: GroundTruth) -> Tuple[np.ndarray, np.ndarray]:
    if truth.p != scores.p:
        raise InvalidTruth(f"Truth has p={truth.p} but scores have p={scores.p}")
    values = []
    labels = []
    for i, j, value in scores.pairs():
        values.append(value)
        labels.append((i, j) in truth.edges)
    values_arr = np.asarray(values)
    labels_arr = np.asarray(labels, dtype=bool)
    if labels_arr.all() or not labels_arr.any():
        raise InvalidTruth("Truth must contain both edges and non-edges")
    return values_arr, labels_arr


def auc_score(values: np.ndarray, labels: np.ndarray) -> float:
    """Mann-Whitney estimate of P(true score > false score) with ties counted half"""
    n_pos = int(labels.sum())
    n_neg = labels.size - n_pos
    ranks = rankdata(values, method="average")
    return float((ranks[labels].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


def roc(scores: EdgeScoreMatrix, truth: GroundTruth) -> RocCurve:
    """ROC curve over every distinct score, from (0, 0) to (1, 1)

    Raises:
        InvalidTruth: If truth has only one class or a different node count
    """
    values, labels = _labelled_scores(scores, truth)
    order = np.argsort(-values, kind="stable")
    sorted_values = values[order]
    sorted_labels = labels[order]

    tp = np.cumsum(sorted_labels)
    fp = np.cumsum(~sorted_labels)
    # Last position of each run of equal scores: everything >= that score is predicted
    cut = np.flatnonzero(np.r_[sorted_values[1:] != sorted_values[:-1], True])
    tpr = np.r_[0.0, tp[cut] / labels.sum()]
    fpr = np.r_[0.0, fp[cut] / (~labels).sum()]
    return RocCurve(fpr=fpr, tpr=tpr, auc=auc_score(values, labels))


def mean_curve(curves: Sequence[RocCurve], fpr_grid: np.ndarray = FPR_GRID) -> np.ndarray:
    """Vertical average: mean over curves of the best tpr reached at fpr <= f"""
    if not curves:
        raise InvalidInput("No curves to average")
    rows = []
    for curve in curves:
        # fpr and tpr are nondecreasing, so the last point with fpr <= f has the max tpr
        idx = np.searchsorted(curve.fpr, fpr_grid, side="right") - 1
        rows.append(curve.tpr[np.clip(idx, 0, None)])
    return np.mean(np.vstack(rows), axis=0)


def edge_f1(estimated: Iterable[Pair], truth: GroundTruth) -> float:
    """F1 of an estimated edge set against the true one"""
    found = {normalize_pair(i, j) for i, j in estimated}
    hits = len(found & truth.edges)
    if hits == 0:
        return 0.0
    precision = hits / len(found)
    recall = hits / len(truth.edges)
    return 2 * precision * recall / (precision + recall)


def operating_point(scores: EdgeScoreMatrix, truth: GroundTruth, rho: float) -> Tuple[float, float]:
    """(fpr, tpr) of the graph that keeps the scores strictly above rho"""
    values, labels = _labelled_scores(scores, truth)
    kept = values > rho
    return float(kept[~labels].mean()), float(kept[labels].mean())


def select_rho(data, scores: EdgeScoreMatrix, cfg: PipelineConfig, regularizers: Regularizers) -> float:
    """Threshold an estimate would use: fixed, GCV, or the fallback on degenerate GCV"""
    if cfg.rho is not None:
        return cfg.rho
    try:
        return gcv_rho(data, scores, cfg.rho_grid, neighborhood_eps(regularizers), seed=cfg.seed)
    except GcvDegenerate as e:
        logger.debug(f"Threshold GCV degenerate ({e.message}); using rho={cfg.fallback_rho}")
        return cfg.fallback_rho


@dataclass
class RepResult:
    """Outcome of one replication

    Attributes:
        seed: Replication seed
        method: Scoring method
        auc: Area under the ROC curve
        rho: Threshold selected for the replication
        fpr: False positive rate at rho
        tpr: True positive rate at rho
    """
    seed: int
    method: str
    auc: float
    rho: float = float("nan")
    fpr: float = float("nan")
    tpr: float = float("nan")


@dataclass
class ReplicationSummary:
    """Aggregate of a replicated simulation study

    Attributes:
        method: Scoring method
        mean_auc: Mean AUC over replications
        sd_auc: Sample standard deviation of the AUC (0 for one replication)
        fpr_grid: False positive rates of the averaged curve
        mean_tpr: Vertically averaged true positive rates
        runs: Per-replication results in seed order
        regularizers: Regularizers held fixed across replications
    """
    method: str
    mean_auc: float
    sd_auc: float
    fpr_grid: np.ndarray
    mean_tpr: np.ndarray
    runs: List[RepResult] = field(default_factory=list)
    regularizers: Optional[Regularizers] = None

    @property
    def operating_point(self) -> Tuple[float, float]:
        """Mean (fpr, tpr) at the selected thresholds"""
        if not self.runs:
            return float("nan"), float("nan")
        return (
            float(np.mean([run.fpr for run in self.runs])),
            float(np.mean([run.tpr for run in self.runs])),
        )


def replication_seeds(master_seed: int, reps: int) -> List[int]:
    """Independent sub-seeds derived from the master seed"""
    children = np.random.SeedSequence(master_seed).spawn(reps)
    return [int(child.generate_state(1)[0]) for child in children]


def _run_rep(
    seed: int, model: SimModel, n: int, cfg: PipelineConfig, regularizers: Regularizers
) -> Tuple[Optional[RepResult], Optional[RocCurve], Optional[str]]:
    # Errors come back as text: exception types with extra fields do not survive pickling
    try:
        data, truth = generate(model.with_seed(seed), n)
        scores = score_pairs_serial(data, cfg, regularizers)
        curve = roc(scores, truth)
        rho = select_rho(data, scores, cfg, regularizers)
        fpr, tpr = operating_point(scores, truth, rho)
    except SgmError as e:
        return None, None, f"{type(e).__name__}: {e.message}"
    result = RepResult(seed=seed, method=cfg.method.value, auc=curve.auc, rho=rho, fpr=fpr, tpr=tpr)
    return result, curve, None


def _average_regularizers(found: Sequence[Regularizers]) -> Regularizers:
    return Regularizers(
        eps_pair=float(np.mean([r.eps_pair for r in found])),
        eps_minus=float(np.mean([r.eps_minus for r in found])),
        eps_u=float(np.mean([r.eps_u for r in found])),
        sources={"eps_pair": "averaged", "eps_minus": "averaged", "eps_u": "averaged"},
    )


async def areplicate(
    model: SimModel,
    n: int,
    reps: int,
    method: Union[Method, str] = Method.SGM,
    cfg: Optional[PipelineConfig] = None,
    tune_reps: int = DEFAULT_TUNE_REPS,
    fpr_grid: np.ndarray = FPR_GRID,
) -> ReplicationSummary:
    """Replicate generate -> score -> ROC over derived seeds

    Unless cfg fixes them, the regularizers are tuned on the first
    min(tune_reps, reps) datasets, averaged, and then held fixed.

    Raises:
        InvalidConfig: If reps < 1
        SgmError: If any replication fails, naming its seed
    """
    if reps < 1:
        raise InvalidConfig(f"reps must be >= 1, got {reps}")
    cfg = (cfg or PipelineConfig()).replace(method=Method(method))
    seeds = replication_seeds(model.seed, reps)

    tune_seeds = [] if cfg.fixed_eps else seeds[: min(tune_reps, reps)]
    tuned = []
    for seed in tune_seeds:
        data, _ = generate(model.with_seed(seed), n)
        try:
            tuned.append(await atune_regularizers(data, cfg))
        except SgmError as e:
            raise SgmError(f"Tuning on replication seed {seed} failed: {e.message}") from e
    if tuned:
        regularizers = _average_regularizers(tuned)
    else:
        regularizers = Regularizers(
            eps_pair=cfg.eps_pair or cfg.fallback_eps,
            eps_minus=cfg.eps_minus or cfg.fallback_eps,
            eps_u=cfg.eps_u or cfg.fallback_eps,
            sources={"eps_pair": "fixed", "eps_minus": "fixed", "eps_u": "fixed"},
        )
    logger.info(f"Model {model.tag.value}, {cfg.method.value}: regularizers {regularizers.as_dict()}")

    # One process per replication; pairs are scored inline inside it
    task = partial(_run_rep, model=model, n=n, cfg=cfg.replace(workers=1), regularizers=regularizers)
    outcomes = await map_ordered(task, seeds, cfg.workers)

    runs: List[RepResult] = []
    curves: List[RocCurve] = []
    for seed, (result, curve, error) in zip(seeds, outcomes):
        if error is not None:
            raise SgmError(f"Replication with seed {seed} failed: {error}")
        runs.append(result)
        curves.append(curve)

    aucs = np.asarray([run.auc for run in runs])
    return ReplicationSummary(
        method=cfg.method.value,
        mean_auc=float(aucs.mean()),
        sd_auc=float(aucs.std(ddof=1)) if reps > 1 else 0.0,
        fpr_grid=np.asarray(fpr_grid),
        mean_tpr=mean_curve(curves, fpr_grid),
        runs=runs,
        regularizers=regularizers,
    )


def replicate(
    model: SimModel,
    n: int,
    reps: int,
    method: Union[Method, str] = Method.SGM,
    cfg: Optional[PipelineConfig] = None,
    tune_reps: int = DEFAULT_TUNE_REPS,
) -> ReplicationSummary:
    """Synchronous wrapper of areplicate"""
    return run_sync(areplicate(model, n, reps, method, cfg, tune_reps))


def compare_methods(
    model: SimModel,
    n: int,
    reps: int,
    methods: Sequence[Union[Method, str]] = (Method.SGM, Method.NAIVE),
    cfg: Optional[PipelineConfig] = None,
) -> Dict[str, ReplicationSummary]:
    """One replication summary per method, on the same datasets"""
    summaries: Dict[str, ReplicationSummary] = {}
    for method in methods:
        summary = replicate(model, n, reps, method, cfg)
        logger.info(f"{summary.method}: mean AUC {summary.mean_auc:.3f} (sd {summary.sd_auc:.3f})")
        summaries[summary.method] = summary
    return summaries


def preset(name: str) -> Dict[str, Any]:
    """Named hub-model scale"""
    if name not in PRESETS:
        raise InvalidConfig(f"Unknown preset {name!r}; choose from {sorted(PRESETS)}")
    return dict(PRESETS[name])

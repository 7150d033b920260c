"""Filesystem artifact store for estimation and evaluation runs"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, Mapping, Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402

from ..errors import DatasetError  # noqa: E402
from ..types import EdgeScoreMatrix, GraphEstimate, GroundTruth, SampleMatrix  # noqa: E402
from .base import BaseStorage, StorageConfig  # noqa: E402

logger = logging.getLogger(__name__)

EDGES = "edges.csv"
SCORES = "scores.csv"
DATA = "data.csv"
TRUTH = "truth.csv"
AUC = "auc.csv"
ROC = "roc.csv"
ROC_SVG = "roc.svg"
RUN = "run.json"


def _json_default(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"Cannot serialize {type(value).__name__}")


class ArtifactStore(BaseStorage):
    """Writes run artifacts as files in one output directory

    Example:
        >>> store = ArtifactStore(StorageConfig(output_dir="out"))
        >>> store.write_estimate(estimate)
    """

    def __init__(self, config: Optional[StorageConfig] = None):
        super().__init__(config)
        self.output_dir = Path(self.config.output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)

    def path(self, name: str) -> Path:
        return self.output_dir / name

    def write_table(self, name: str, frame: pd.DataFrame) -> Path:
        target = self.path(name)
        frame.to_csv(target, index=False, float_format=self.config.float_format)
        logger.info(f"Wrote {target}")
        return target

    def write_json(self, name: str, payload: Dict[str, Any]) -> Path:
        target = self.path(name)
        target.write_text(json.dumps(payload, indent=2, sort_keys=True, default=_json_default))
        logger.info(f"Wrote {target}")
        return target

    def write_figure(self, name: str, figure: Any) -> Path:
        target = self.path(name)
        try:
            figure.savefig(target, format=target.suffix.lstrip(".") or None)
        finally:
            plt.close(figure)
        logger.info(f"Wrote {target}")
        return target

    # Domain artifacts

    def write_scores(self, scores: EdgeScoreMatrix, labels: Sequence[str]) -> Path:
        """Full upper triangle as i,j,score"""
        rows = [(labels[i], labels[j], value) for i, j, value in scores.pairs()]
        return self.write_table(SCORES, pd.DataFrame(rows, columns=["i", "j", "score"]))

    def write_edges(self, estimate: GraphEstimate) -> Path:
        """Estimated edges as i,j,score"""
        labels = estimate.labels or tuple(f"X{k + 1}" for k in range(estimate.p))
        matrix = estimate.score_matrix.scores
        rows = [(labels[i], labels[j], matrix[i, j]) for i, j in estimate.edges]
        return self.write_table(EDGES, pd.DataFrame(rows, columns=["i", "j", "score"]))

    def write_estimate(self, estimate: GraphEstimate, extra: Optional[Dict[str, Any]] = None) -> Dict[str, Path]:
        """edges.csv, scores.csv and run.json of one estimation run"""
        labels = estimate.labels or tuple(f"X{k + 1}" for k in range(estimate.p))
        record = dict(estimate.config_snapshot)
        record.update(
            threshold=estimate.threshold,
            n_edges=len(estimate.edges),
            rho_fallback=estimate.rho_fallback,
            warnings=list(estimate.warnings),
        )
        record.update(extra or {})
        return {
            "edges": self.write_edges(estimate),
            "scores": self.write_scores(estimate.score_matrix, labels),
            "run": self.write_json(RUN, record),
        }

    def write_samples(self, data: SampleMatrix) -> Path:
        return self.write_table(DATA, pd.DataFrame(data.values, columns=list(data.labels)))

    def write_truth(self, truth: GroundTruth, labels: Sequence[str]) -> Path:
        """Edge list of labels, one true edge per row"""
        rows = [(labels[i], labels[j]) for i, j in sorted(truth.edges)]
        return self.write_table(TRUTH, pd.DataFrame(rows, columns=["i", "j"]))

    def write_auc(self, runs: Iterable[Any]) -> Path:
        """Per-replication rows: seed, method, auc and the selected operating point"""
        columns = ["seed", "method", "auc", "rho", "fpr", "tpr"]
        rows = [tuple(getattr(run, name) for name in columns) for run in runs]
        return self.write_table(AUC, pd.DataFrame(rows, columns=columns))

    def write_roc(self, summaries: Mapping[str, Any]) -> Path:
        """Vertically averaged curves as method,fpr,mean_tpr"""
        frames = [
            pd.DataFrame({"method": method, "fpr": summary.fpr_grid, "mean_tpr": summary.mean_tpr})
            for method, summary in summaries.items()
        ]
        return self.write_table(ROC, pd.concat(frames, ignore_index=True))

    def write_roc_svg(self, summaries: Mapping[str, Any], title: str = "") -> Path:
        """Line chart of the averaged curves

        A black dot on each curve marks the mean operating point at the
        selected thresholds, when the summary has one.
        """
        fig, ax = plt.subplots(figsize=(4.5, 4.5), constrained_layout=True)
        for method, summary in summaries.items():
            ax.plot(summary.fpr_grid, summary.mean_tpr, label=f"{method} (AUC {summary.mean_auc:.3f})")
            fpr, tpr = getattr(summary, "operating_point", (np.nan, np.nan))
            if np.isfinite(fpr) and np.isfinite(tpr):
                ax.plot([fpr], [tpr], "o", color="black", markersize=4, zorder=3)
        ax.plot([0, 1], [0, 1], color="grey", linestyle=":", linewidth=0.8)
        ax.set_xlim(0.0, 1.0)
        ax.set_ylim(0.0, 1.0)
        ax.set_xlabel("False positive rate")
        ax.set_ylabel("True positive rate")
        if title:
            ax.set_title(title)
        ax.legend(loc="lower right", fontsize=8)
        ax.grid(True, alpha=0.3)
        return self.write_figure(ROC_SVG, fig)

    @staticmethod
    def read_run(path) -> Dict[str, Any]:
        """Load a run.json record"""
        path = Path(path)
        try:
            return json.loads(path.read_text())
        except FileNotFoundError as e:
            raise DatasetError(f"No such run record: {path}") from e
        except json.JSONDecodeError as e:
            raise DatasetError(f"Run record {path} is not valid JSON: {e.msg}", row=e.lineno) from e

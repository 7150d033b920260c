"""Command-line entry point: ``sgm estimate|simulate|evaluate|score``"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from . import __version__
from .config import PipelineConfig, configure_logging, default_workers, load_environment
from .dataset import ingest_csv, ingest_truth, resolve_node
from .errors import InvalidConfig, InvalidInput, SgmError
from .evaluation import compare_methods, preset, roc
from .graph import config_from_snapshot, estimate, gsir_config, tune_regularizers
from .scorers import scorer_for
from .simgen import SimModel, generate
from .storage import ArtifactStore, StorageConfig
from .tuning import Regularizers
from .types import Method, ModelTag

logger = logging.getLogger(__name__)


def _auto_or_float(text: str) -> Optional[float]:
    if text.strip().lower() == "auto":
        return None
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'auto' or a number, got {text!r}")
    if not value > 0:
        raise argparse.ArgumentTypeError(f"value must be > 0, got {text!r}")
    return value


def _add_run_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--d", type=int, default=2, help="Sufficient predictor dimension")
    parser.add_argument("--method", choices=[m.value for m in Method], default=Method.SGM.value)
    parser.add_argument("--eps", type=_auto_or_float, default=None,
                        help="Relative regularizer for all Grams, or 'auto' for GCV")
    parser.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sgm", description="Nonparametric graphical models by sufficient dimension reduction"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, help="Overrides SGM_LOG")
    commands = parser.add_subparsers(dest="command", required=True)

    est = commands.add_parser("estimate", help="Estimate the graph of a CSV dataset")
    est.add_argument("--data", type=Path, help="n x p CSV, optional header row")
    est.add_argument("--out", type=Path, required=True, help="Output directory")
    _add_run_options(est)
    est.add_argument("--rho", type=_auto_or_float, default=None,
                     help="Edge threshold, or 'auto' for GCV")
    est.add_argument("--workers", type=int, default=None)
    est.add_argument("--truth", type=Path, default=None,
                     help="Edge list to report the AUC against")
    est.add_argument("--replay", type=Path, default=None,
                     help="run.json of an earlier run to repeat")

    sim = commands.add_parser("simulate", help="Draw a dataset from a simulation model")
    sim.add_argument("--model", required=True, help="I-V or 1-5")
    sim.add_argument("--n", type=int, required=True)
    sim.add_argument("--p", type=int, default=None)
    sim.add_argument("--n-hubs", type=int, default=None)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--out", type=Path, default=Path("."))

    ev = commands.add_parser("evaluate", help="Replicated ROC study of one model")
    ev.add_argument("--model", required=True, help="I-V or 1-5")
    ev.add_argument("--n", type=int, required=True)
    ev.add_argument("--reps", type=int, default=None)
    ev.add_argument("--methods", default="sgm,naive", help="Comma-separated methods")
    ev.add_argument("--preset", choices=["desk", "full"], default=None,
                    help="Hub-model scale (p, n-hubs, reps)")
    ev.add_argument("--p", type=int, default=None)
    ev.add_argument("--n-hubs", type=int, default=None)
    ev.add_argument("--d", type=int, default=2)
    ev.add_argument("--seed", type=int, default=0)
    ev.add_argument("--workers", type=int, default=None)
    ev.add_argument("--out", type=Path, default=Path("."))

    sc = commands.add_parser("score", help="Print the diagnostics of a single pair")
    sc.add_argument("--data", type=Path, required=True)
    sc.add_argument("--i", required=True, help="Node label or 1-based index")
    sc.add_argument("--j", required=True, help="Node label or 1-based index")
    _add_run_options(sc)
    return parser


def _run_config(args: argparse.Namespace) -> PipelineConfig:
    changes = dict(d=args.d, method=args.method, seed=args.seed)
    if args.eps is not None:
        changes.update(eps_pair=args.eps, eps_minus=args.eps, eps_u=args.eps)
    if getattr(args, "rho", None) is not None:
        changes["rho"] = args.rho
    if getattr(args, "workers", None) is not None:
        changes["workers"] = args.workers
    return PipelineConfig.from_dict(changes)


def cmd_estimate(args: argparse.Namespace) -> int:
    if args.replay is not None:
        record = ArtifactStore.read_run(args.replay)
        cfg = config_from_snapshot(record)
        if args.workers is not None:
            cfg = cfg.replace(workers=args.workers)
        else:
            cfg = cfg.replace(workers=default_workers())
        data_path = Path(record["data_path"])
        truth_path = Path(record["truth_path"]) if record.get("truth_path") else None
        logger.info(f"Replaying {args.replay} on {data_path}")
    else:
        if args.data is None:
            raise InvalidConfig("estimate needs --data or --replay")
        cfg = _run_config(args)
        data_path = args.data
        truth_path = args.truth

    data = ingest_csv(data_path)
    result = estimate(data, cfg)

    extra = {"data_path": str(Path(data_path).resolve())}
    if truth_path is not None:
        truth = ingest_truth(truth_path, data.labels)
        extra["truth_path"] = str(Path(truth_path).resolve())
        extra["auc"] = roc(result.score_matrix, truth).auc
        logger.info(f"AUC against {truth_path}: {extra['auc']:.4f}")

    ArtifactStore(StorageConfig(output_dir=args.out)).write_estimate(result, extra)
    for warning in result.warnings:
        logger.warning(warning)
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    model = SimModel(tag=ModelTag.parse(args.model), p=args.p, seed=args.seed, n_hubs=args.n_hubs)
    data, truth = generate(model, args.n)
    store = ArtifactStore(StorageConfig(output_dir=args.out))
    store.write_samples(data)
    store.write_truth(truth, data.labels)
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    scale = preset(args.preset) if args.preset else {}
    reps = args.reps or scale.get("reps", 10)
    model = SimModel(
        tag=ModelTag.parse(args.model),
        p=args.p or scale.get("p"),
        seed=args.seed,
        n_hubs=args.n_hubs or scale.get("n_hubs"),
    )
    methods = [Method(m.strip()) for m in args.methods.split(",") if m.strip()]
    if not methods:
        raise InvalidConfig("--methods names no method")
    changes = {"d": args.d}
    if args.workers is not None:
        changes["workers"] = args.workers
    summaries = compare_methods(model, args.n, reps, methods, PipelineConfig.from_dict(changes))

    store = ArtifactStore(StorageConfig(output_dir=args.out))
    store.write_auc([run for summary in summaries.values() for run in summary.runs])
    store.write_roc(summaries)
    store.write_roc_svg(summaries, title=f"Model {model.tag.value}, n={args.n}")
    return 0


def cmd_score(args: argparse.Namespace) -> int:
    data = ingest_csv(args.data)
    i, j = resolve_node(args.i, data.labels), resolve_node(args.j, data.labels)
    if i is None or j is None or not (0 <= i < data.p and 0 <= j < data.p) or i == j:
        raise InvalidInput(f"--i {args.i} --j {args.j} do not name two distinct columns")

    cfg = _run_config(args).replace(workers=default_workers())
    if cfg.fixed_eps:
        regularizers = Regularizers(
            eps_pair=cfg.eps_pair or cfg.fallback_eps,
            eps_minus=cfg.eps_minus or cfg.fallback_eps,
            eps_u=cfg.eps_u,
        )
    else:
        regularizers = tune_regularizers(data, cfg)

    response = scorer_for(cfg.method).execute(
        data, (i, j), gsir_config(cfg, regularizers), regularizers.eps_u, cfg.relative_eps, cfg.seed
    )
    if not response.success:
        raise SgmError(response.error or f"Scoring {(i, j)} failed")

    diag = response.result
    a, b = diag.pair
    print(f"pair: {data.labels[a]}, {data.labels[b]}")
    print(f"method: {cfg.method.value}")
    print(f"score: {diag.score:.12g}")
    for name, gamma in sorted(diag.gammas.items()):
        print(f"gamma_{name}: {gamma:.12g}")
    for name, eps in sorted(diag.eps.items()):
        print(f"eps_{name}: {eps:.12g}")
    if diag.eigenvalues:
        print("gsir_eigenvalues: " + ", ".join(f"{v:.12g}" for v in diag.eigenvalues))
    return 0


COMMANDS = {
    "estimate": cmd_estimate,
    "simulate": cmd_simulate,
    "evaluate": cmd_evaluate,
    "score": cmd_score,
}


def main(argv: Optional[List[str]] = None) -> int:
    load_environment()
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        return COMMANDS[args.command](args)
    except SgmError as e:
        logger.error(f"{args.command} failed: {e.message}")
        return 1
    except OSError as e:
        logger.error(f"{args.command} failed: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())

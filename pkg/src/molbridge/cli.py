"""Command-line front end: train, eval, predict, analyze.

Outputs land in a run directory (--out, else $MOLBRIDGE_OUT_ROOT, else
./runs/<name>). Every run directory gets a manifest.json recording the
command, the effective configuration, and a sha256 digest of the
dataset, which together are enough to replay the run. Exit codes: 0
success, 1 runtime failure, 2 usage error.

A config file of key=value lines can preload any train flag; explicit
flags win over file values.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import analysis, model, synthetic
from .checkpoint import load_checkpoint, save_checkpoint
from .data import dataset_digest, featurize_samples, load_dataset
from .errors import MolBridgeError, SmilesError
from .metrics import accumulate, format_metrics, macro_metrics, stratified_metrics
from .smiles import featurize, parse_smiles
from .splits import MODES, make_splits
from .train import TrainConfig, predict_labels, train

TRAIN_KEYS = ("mode", "fold", "seed", "epochs", "batch", "lr", "dim",
              "layers", "heads", "d_hid", "weight_decay", "selection")


def entry() -> None:
    sys.exit(main(sys.argv[1:]))


def main(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else int(exc.code)
    if not hasattr(args, "func"):
        parser.print_usage(sys.stderr)
        return 2
    try:
        return args.func(args)
    except SmilesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MolBridgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="molbridge",
        description="Drug pair interaction event prediction on joint "
                    "molecular graphs.")
    sub = parser.add_subparsers(dest="command")

    p_train = sub.add_parser("train", help="train a model on a dataset file")
    p_train.add_argument("--data", required=True)
    p_train.add_argument("--config", help="key=value file of defaults")
    p_train.add_argument("--mode", choices=MODES)
    p_train.add_argument("--fold", type=int)
    p_train.add_argument("--seed", type=int)
    p_train.add_argument("--epochs", type=int)
    p_train.add_argument("--batch", type=int)
    p_train.add_argument("--lr", type=float)
    p_train.add_argument("--dim", type=int)
    p_train.add_argument("--layers", type=int)
    p_train.add_argument("--heads", type=int)
    p_train.add_argument("--d-hid", dest="d_hid", type=int)
    p_train.add_argument("--weight-decay", dest="weight_decay", type=float)
    p_train.add_argument("--selection", choices=("accuracy", "macro_f1"))
    p_train.add_argument("--out")
    p_train.set_defaults(func=cmd_train)

    p_eval = sub.add_parser("eval", help="evaluate a checkpoint on a split")
    p_eval.add_argument("--checkpoint", required=True)
    p_eval.add_argument("--data", required=True)
    p_eval.add_argument("--split", choices=("train", "val", "test", "all"),
                        default="test")
    p_eval.add_argument("--mode", choices=MODES, default="transductive")
    p_eval.add_argument("--fold", type=int, default=0)
    p_eval.add_argument("--seed", type=int, default=42)
    p_eval.add_argument("--labels",
                        help="comma-separated label subset for stratified "
                             "metrics")
    p_eval.add_argument("--out")
    p_eval.set_defaults(func=cmd_eval)

    p_pred = sub.add_parser("predict",
                            help="class distribution for one drug pair")
    p_pred.add_argument("--checkpoint", required=True)
    p_pred.add_argument("smiles_1")
    p_pred.add_argument("smiles_2")
    p_pred.add_argument("--topk", type=int)
    p_pred.set_defaults(func=cmd_predict)

    p_ana = sub.add_parser("analyze", help="diagnostic reports")
    ana_sub = p_ana.add_subparsers(dest="subcommand")

    p_os = ana_sub.add_parser("oversmooth",
                              help="depth collapse probe on random graphs")
    p_os.add_argument("--seed", type=int, default=42)
    p_os.add_argument("--depth", type=int, default=8)
    p_os.add_argument("--trials", type=int, default=100)
    p_os.add_argument("--out")
    p_os.set_defaults(func=cmd_oversmooth)

    p_dist = ana_sub.add_parser("distance",
                                help="metrics stratified by path length")
    p_dist.add_argument("--checkpoint", required=True)
    p_dist.add_argument("--data", required=True)
    p_dist.add_argument("--split", choices=("train", "val", "test", "all"),
                        default="test")
    p_dist.add_argument("--mode", choices=MODES, default="transductive")
    p_dist.add_argument("--fold", type=int, default=0)
    p_dist.add_argument("--seed", type=int, default=42)
    p_dist.add_argument("--quantiles", type=int, default=5)
    p_dist.add_argument("--combine", choices=("pair_mean", "first"),
                        default="pair_mean")
    p_dist.add_argument("--out")
    p_dist.set_defaults(func=cmd_distance)

    p_edges = ana_sub.add_parser("edges",
                                 help="strongest cross-drug attention edges")
    p_edges.add_argument("--checkpoint", required=True)
    p_edges.add_argument("smiles_1")
    p_edges.add_argument("smiles_2")
    p_edges.add_argument("--k", type=int, default=10)
    p_edges.add_argument("--out")
    p_edges.set_defaults(func=cmd_edges)

    return parser


# ---------------------------------------------------------------------- #
# helpers
# ---------------------------------------------------------------------- #

def read_config_file(path) -> dict[str, str]:
    values: dict[str, str] = {}
    for line_no, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise MolBridgeError(f"{path}:{line_no}: expected key=value")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


def _resolve_out(arg_out: str | None, default_name: str) -> Path:
    if arg_out:
        run_dir = Path(arg_out)
    else:
        root = Path(os.environ.get("MOLBRIDGE_OUT_ROOT", "runs"))
        run_dir = root / default_name
    run_dir.mkdir(parents=True, exist_ok=True)
    return run_dir


def _write_manifest(run_dir: Path, command: str, config: dict,
                    outputs: dict[str, str]) -> None:
    manifest = {
        "command": command,
        "config": config,
        "outputs": outputs,
        "created_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }
    (run_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _split_indices(result, split: str, mode: str, fold: int, seed: int):
    if split == "all":
        return list(range(len(result.samples)))
    plan = make_splits(result.samples, mode, fold, seed)
    return getattr(plan, split)


# ---------------------------------------------------------------------- #
# commands
# ---------------------------------------------------------------------- #

def cmd_train(args) -> int:
    file_cfg = read_config_file(args.config) if args.config else {}

    def pick(key, cast, fallback):
        flag = getattr(args, key)
        if flag is not None:
            return flag
        if key in file_cfg:
            return cast(file_cfg[key])
        return fallback

    mode = pick("mode", str, "transductive")
    fold = pick("fold", int, 0)
    config = TrainConfig(
        batch_size=pick("batch", int, 512),
        lr=pick("lr", float, 0.005),
        seed=pick("seed", int, 42),
        layers=pick("layers", int, 3),
        heads=pick("heads", int, 4),
        dim=pick("dim", int, 32),
        d_hid=pick("d_hid", int, 0),
        max_epochs=pick("epochs", int, 500),
        weight_decay=pick("weight_decay", float, 0.01),
        selection=pick("selection", str, "accuracy"),
    )

    result = load_dataset(args.data)
    for row in result.quarantined:
        print(f"quarantined line {row.line}: {row.reason}", file=sys.stderr)
    plan = make_splits(result.samples, mode, fold, config.seed)
    params, record = train(result.samples, plan, config)

    run_dir = _resolve_out(args.out, f"train-{time.strftime('%Y%m%d-%H%M%S')}")
    ckpt_path = run_dir / "best.ckpt"
    save_checkpoint(ckpt_path, params, extra={
        "best_epoch": record.best_epoch,
        "selection": config.selection,
        "best_value": record.best_value,
    })
    record.write_csv(run_dir / "runrecord.csv")
    snapshot = {
        "data": str(args.data),
        "dataset_digest": dataset_digest(args.data),
        "mode": mode, "fold": fold, "seed": config.seed,
        "epochs": config.max_epochs, "batch": config.batch_size,
        "lr": config.lr, "dim": config.dim, "layers": config.layers,
        "heads": config.heads, "d_hid": config.d_hid,
        "weight_decay": config.weight_decay, "selection": config.selection,
    }
    _write_manifest(run_dir, "train", snapshot, {
        "checkpoint": "best.ckpt", "runrecord": "runrecord.csv"})
    print(f"run directory: {run_dir}")
    print(f"best epoch {record.best_epoch} "
          f"{config.selection}={record.best_value:.6f}")
    return 0


def cmd_eval(args) -> int:
    subset = None
    if args.labels is not None:
        fields = [f for f in args.labels.split(",") if f.strip()]
        if not fields:
            print("error: --labels must name at least one class",
                  file=sys.stderr)
            return 2
        subset = [int(f) for f in fields]

    params, _ = load_checkpoint(args.checkpoint)
    result = load_dataset(args.data)
    indices = _split_indices(result, args.split, args.mode, args.fold,
                             args.seed)
    chosen = [result.samples[i] for i in indices]
    pairs = featurize_samples(chosen)
    labels = [s.label for s in chosen]
    n_classes = params.config.classes
    preds = predict_labels(params, pairs)
    if subset is None:
        values = macro_metrics(accumulate(preds, labels, n_classes))
    else:
        values = stratified_metrics(preds, labels, n_classes, subset)
    report = format_metrics(values)
    print(report)
    if args.out:
        run_dir = _resolve_out(args.out, "")
        (run_dir / "metrics.txt").write_text(report + "\n")
        _write_manifest(run_dir, "eval", {
            "checkpoint": str(args.checkpoint), "data": str(args.data),
            "dataset_digest": dataset_digest(args.data),
            "split": args.split, "mode": args.mode, "fold": args.fold,
            "seed": args.seed, "labels": args.labels,
        }, {"metrics": "metrics.txt"})
    return 0


def cmd_predict(args) -> int:
    params, _ = load_checkpoint(args.checkpoint)
    g1 = featurize(parse_smiles(args.smiles_1))
    g2 = featurize(parse_smiles(args.smiles_2))
    probs = model.predict(g1, g2, params)
    order = np.argsort(-probs, kind="stable")
    if args.topk is not None:
        order = order[:max(args.topk, 1)]
    for cls in order:
        print(f"class={int(cls)} p={probs[cls]:.6f}")
    return 0


def cmd_oversmooth(args) -> int:
    report = analysis.depth_probe(args.seed, max_depth=args.depth,
                                  trials=args.trials)
    run_dir = _resolve_out(args.out, f"oversmooth-{args.seed}")
    path = run_dir / "oversmooth.csv"
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["depth", "plain_cosine", "gformer_cosine"])
        for i, depth in enumerate(report.depths):
            writer.writerow([int(depth), repr(float(report.plain_mean[i])),
                             repr(float(report.gformer_mean[i]))])
    _write_manifest(run_dir, "analyze.oversmooth", {
        "seed": args.seed, "depth": args.depth, "trials": args.trials,
    }, {"report": "oversmooth.csv"})
    print(f"report: {path}")
    return 0


def cmd_distance(args) -> int:
    params, _ = load_checkpoint(args.checkpoint)
    result = load_dataset(args.data)
    indices = _split_indices(result, args.split, args.mode, args.fold,
                             args.seed)
    chosen = [result.samples[i] for i in indices]
    pairs = featurize_samples(chosen)
    labels = [s.label for s in chosen]
    preds = predict_labels(params, pairs)
    mols = [(parse_smiles(s.smiles_1), parse_smiles(s.smiles_2))
            for s in chosen]
    strata = analysis.stratify_by_distance(
        mols, preds, labels, params.config.classes,
        quantiles=args.quantiles, combine=args.combine)

    run_dir = _resolve_out(args.out, "distance")
    path = run_dir / "distance.csv"
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["stratum", "upper_boundary", "count",
                         "accuracy", "macro_f1"])
        for k in range(args.quantiles):
            count = int((strata.assignments == k).sum())
            upper = (repr(float(strata.boundaries[k]))
                     if k < len(strata.boundaries) else "")
            row = strata.per_stratum[k]
            writer.writerow([
                k, upper, count,
                repr(row["accuracy"]) if row else "",
                repr(row["macro_f1"]) if row else "",
            ])
    _write_manifest(run_dir, "analyze.distance", {
        "checkpoint": str(args.checkpoint), "data": str(args.data),
        "dataset_digest": dataset_digest(args.data), "split": args.split,
        "mode": args.mode, "fold": args.fold, "seed": args.seed,
        "quantiles": args.quantiles, "combine": args.combine,
    }, {"report": "distance.csv"})
    print(f"report: {path}")
    return 0


def cmd_edges(args) -> int:
    params, _ = load_checkpoint(args.checkpoint)
    g1 = featurize(parse_smiles(args.smiles_1))
    g2 = featurize(parse_smiles(args.smiles_2))
    from .joint import build_joint, refine
    joint = build_joint(g1, g2)
    refined = refine(joint, params.proj_w, params.proj_b, params.w_q,
                     params.w_k, params.config.heads, params.theta)
    k = min(args.k, joint.boundary * (joint.adjacency.shape[0] - joint.boundary))
    edges = analysis.top_edges(refined.combined.value, k, joint.boundary)

    run_dir = _resolve_out(args.out, "edges")
    path = run_dir / "edges.csv"
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["atom_1", "atom_2", "weight"])
        for p, q, w in edges:
            writer.writerow([p, q, repr(w)])
    for p, q, w in edges[:10]:
        print(f"{p} -> {q}  {w:.6f}")
    _write_manifest(run_dir, "analyze.edges", {
        "checkpoint": str(args.checkpoint), "smiles_1": args.smiles_1,
        "smiles_2": args.smiles_2, "k": args.k,
    }, {"report": "edges.csv"})
    return 0

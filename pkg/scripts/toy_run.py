"""Desk-scale end-to-end demo: synthesize, train, evaluate, probe.

Runs a four-class synthetic corpus through the full pipeline with a
reduced configuration and prints validation progress, test metrics,
and the over-smoothing comparison. Around a minute on a laptop CPU.
"""

import argparse
import time

import numpy as np

from molbridge.analysis import depth_probe
from molbridge.data import featurize_samples
from molbridge.metrics import format_metrics
from molbridge.splits import make_splits
from molbridge.synthetic import make_balanced_dataset
from molbridge.train import TrainConfig, evaluate, train


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--epochs", type=int, default=60)
    ap.add_argument("--dim", type=int, default=16)
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()

    samples = make_balanced_dataset(args.n, seed=11)
    plan = make_splits(samples, "transductive", fold=0, seed=args.seed)
    config = TrainConfig(dim=args.dim, max_epochs=args.epochs,
                         seed=args.seed, batch_size=64)
    print(f"{args.n} pairs, train/val/test "
          f"{len(plan.train)}/{len(plan.val)}/{len(plan.test)}, "
          f"dim {config.dim}, {config.max_epochs} epochs")

    t0 = time.perf_counter()
    params, record = train(samples, plan, config)
    for rec in record.epochs[:: max(1, args.epochs // 6)]:
        print(f"  epoch {rec.epoch:3d}  loss {rec.train_loss:.4f}  "
              f"val acc {rec.val['accuracy']:.3f}")
    print(f"trained in {time.perf_counter() - t0:.1f}s, "
          f"best epoch {record.best_epoch}")

    chosen = [samples[i] for i in plan.test]
    metrics = evaluate(params, featurize_samples(chosen),
                       [s.label for s in chosen], 4)
    print("test:", " ".join(format_metrics(metrics).splitlines()))

    rep = depth_probe(args.seed, max_depth=8, trials=50)
    wins = int(np.sum(rep.plain[:, -1] > rep.gformer[:, -1]))
    print(f"depth 8 cosine: plain {rep.plain_mean[-1]:.3f} vs "
          f"gformer {rep.gformer_mean[-1]:.3f} "
          f"(plain more collapsed in {wins}/50 trials)")


if __name__ == "__main__":
    main()

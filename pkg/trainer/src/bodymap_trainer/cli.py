"""CLI: train and evaluate subcommands."""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .evaluate import evaluate
from .train import TrainConfig, train


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bodymap-trainer")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="fine-tune a classifier on an exported dataset")
    p.add_argument("--data", required=True, help="export directory (train/val class folders)")
    p.add_argument("--out", required=True)
    p.add_argument("--arch", default="efficientnet_b1")
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--batch-size", type=int, default=16)
    p.add_argument("--lr", type=float, default=1e-4)
    p.add_argument("--image-size", type=int, default=240)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eval-every", type=int, default=None)
    p.add_argument("--early-stop-f1", type=float, default=None)
    p.add_argument("--no-pretrained", dest="pretrained", action="store_false")

    p = sub.add_parser("evaluate", help="evaluate a checkpoint")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--split", default="val")
    p.add_argument("--batch-size", type=int, default=16)
    p.add_argument("--out", help="write metrics JSON here")

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    if args.command == "train":
        result = train(
            TrainConfig(
                data_dir=args.data,
                out_dir=args.out,
                arch=args.arch,
                pretrained=args.pretrained,
                batch_size=args.batch_size,
                learning_rate=args.lr,
                image_size=args.image_size,
                steps=args.steps,
                seed=args.seed,
                eval_every=args.eval_every,
                early_stop_f1=args.early_stop_f1,
            )
        )
        print(
            f"best val F1 {result.best_f1:.4f} at step {result.best_step} "
            f"({result.steps_run} steps run); checkpoint {result.checkpoint}"
        )
        return 0
    metrics = evaluate(
        args.checkpoint, args.data, split=args.split,
        batch_size=args.batch_size, out_path=args.out,
    )
    print(json.dumps(metrics, indent=1))
    return 0


if __name__ == "__main__":
    sys.exit(main())

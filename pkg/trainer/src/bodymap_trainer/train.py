"""Fine-tuning loop with per-step loss and per-epoch validation logging."""

from __future__ import annotations

import csv
import json
import logging
import math
import random
from dataclasses import dataclass, field
from pathlib import Path

import torch
from torch.utils.data import DataLoader

from .data import BodymapImages
from .metrics import evaluate_predictions
from .models import build_model

log = logging.getLogger(__name__)


@dataclass
class TrainConfig:
    data_dir: Path
    out_dir: Path
    arch: str = "efficientnet_b1"
    pretrained: bool = True
    batch_size: int = 16
    learning_rate: float = 1e-4
    image_size: int = 240
    steps: int = 1000
    seed: int = 0
    eval_every: int | None = None  # default: once per epoch
    early_stop_f1: float | None = None

    def __post_init__(self):
        self.data_dir = Path(self.data_dir)
        self.out_dir = Path(self.out_dir)
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if self.image_size < 32:
            raise ValueError("image_size must be >= 32")


@dataclass
class TrainResult:
    checkpoint: Path
    metrics_csv: Path
    summary_json: Path
    best_f1: float
    best_step: int
    steps_run: int
    history: list[dict] = field(default_factory=list)


@torch.no_grad()
def _validate(model, loader, device) -> tuple[float, dict]:
    criterion = torch.nn.CrossEntropyLoss()
    model.eval()
    labels: list[int] = []
    predictions: list[int] = []
    total_loss = 0.0
    batches = 0
    for x, y in loader:
        x, y = x.to(device), y.to(device)
        logits = model(x)
        total_loss += criterion(logits, y).item()
        batches += 1
        predictions.extend(logits.argmax(dim=1).tolist())
        labels.extend(y.tolist())
    model.train()
    return total_loss / max(batches, 1), evaluate_predictions(labels, predictions)


def train(config: TrainConfig) -> TrainResult:
    """Train for ``config.steps`` steps; keep the best-validation checkpoint.

    Writes ``metrics.csv`` (one ``train`` row per step, one ``val`` row per
    evaluation), ``summary.json`` and ``model_best.pt`` under the output
    directory.  Early-stops once validation F1 reaches ``early_stop_f1``
    when that threshold is set.
    """
    torch.manual_seed(config.seed)
    random.seed(config.seed)

    device = torch.device("cuda" if torch.cuda.is_available() else "cpu")
    train_set = BodymapImages(config.data_dir, "train", config.image_size)
    val_set = BodymapImages(config.data_dir, "val", config.image_size)
    generator = torch.Generator().manual_seed(config.seed)
    train_loader = DataLoader(
        train_set, batch_size=config.batch_size, shuffle=True,
        generator=generator, drop_last=False,
    )
    val_loader = DataLoader(val_set, batch_size=config.batch_size, shuffle=False)

    steps_per_epoch = math.ceil(len(train_set) / config.batch_size)
    eval_every = config.eval_every or steps_per_epoch

    model = build_model(config.arch, pretrained=config.pretrained).to(device)
    model.train()
    optimizer = torch.optim.Adam(model.parameters(), lr=config.learning_rate)
    criterion = torch.nn.CrossEntropyLoss()

    config.out_dir.mkdir(parents=True, exist_ok=True)
    checkpoint_path = config.out_dir / "model_best.pt"
    metrics_path = config.out_dir / "metrics.csv"
    summary_path = config.out_dir / "summary.json"

    history: list[dict] = []
    best_f1, best_step = -1.0, 0
    step = 0
    stop = False

    def save_checkpoint():
        torch.save(
            {
                "model": model.state_dict(),
                "arch": config.arch,
                "image_size": config.image_size,
            },
            checkpoint_path,
        )

    with metrics_path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=["kind", "step", "loss", "f1"])
        writer.writeheader()
        while step < config.steps and not stop:
            for x, y in train_loader:
                step += 1
                x, y = x.to(device), y.to(device)
                optimizer.zero_grad()
                loss = criterion(model(x), y)
                loss.backward()
                optimizer.step()
                row = {"kind": "train", "step": step, "loss": f"{loss.item():.6f}", "f1": ""}
                writer.writerow(row)
                history.append({"kind": "train", "step": step, "loss": loss.item()})

                if step % eval_every == 0 or step == config.steps:
                    val_loss, metrics = _validate(model, val_loader, device)
                    writer.writerow(
                        {
                            "kind": "val",
                            "step": step,
                            "loss": f"{val_loss:.6f}",
                            "f1": f"{metrics['f1']:.6f}",
                        }
                    )
                    history.append(
                        {"kind": "val", "step": step, "loss": val_loss, "f1": metrics["f1"]}
                    )
                    log.info(
                        "step %d: val loss %.4f, F1 %.4f", step, val_loss, metrics["f1"]
                    )
                    if metrics["f1"] > best_f1:
                        best_f1, best_step = metrics["f1"], step
                        save_checkpoint()
                    if (
                        config.early_stop_f1 is not None
                        and metrics["f1"] >= config.early_stop_f1
                    ):
                        stop = True
                if step >= config.steps or stop:
                    break

    if best_f1 < 0:  # steps < eval_every: still persist something usable
        val_loss, metrics = _validate(model, val_loader, device)
        best_f1, best_step = metrics["f1"], step
        save_checkpoint()

    summary = {
        "best_f1": best_f1,
        "best_step": best_step,
        "steps_run": step,
        "arch": config.arch,
        "seed": config.seed,
        "train_images": len(train_set),
        "val_images": len(val_set),
    }
    summary_path.write_text(json.dumps(summary, indent=1) + "\n")
    return TrainResult(
        checkpoint=checkpoint_path,
        metrics_csv=metrics_path,
        summary_json=summary_path,
        best_f1=best_f1,
        best_step=best_step,
        steps_run=step,
        history=history,
    )

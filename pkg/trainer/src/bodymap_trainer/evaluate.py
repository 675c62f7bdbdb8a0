"""Checkpoint evaluation: precision, recall, F1 and confusion counts."""

from __future__ import annotations

import json
from pathlib import Path

import torch
from torch.utils.data import DataLoader

from .data import BodymapImages
from .metrics import evaluate_predictions
from .models import build_model


def evaluate(
    checkpoint: str | Path,
    data_dir: str | Path,
    split: str = "val",
    batch_size: int = 16,
    out_path: str | Path | None = None,
) -> dict:
    """Evaluate a saved checkpoint on one split of the export layout."""
    state = torch.load(Path(checkpoint), map_location="cpu", weights_only=False)
    model = build_model(state["arch"], pretrained=False)
    model.load_state_dict(state["model"])
    model.eval()

    dataset = BodymapImages(data_dir, split, state["image_size"])
    if len(dataset) == 0:
        raise RuntimeError(f"no images in split {split!r}")
    loader = DataLoader(dataset, batch_size=batch_size, shuffle=False)
    labels: list[int] = []
    predictions: list[int] = []
    with torch.no_grad():
        for x, y in loader:
            predictions.extend(model(x).argmax(dim=1).tolist())
            labels.extend(y.tolist())
    metrics = evaluate_predictions(labels, predictions)
    metrics["split"] = split
    if out_path is not None:
        Path(out_path).write_text(json.dumps(metrics, indent=1) + "\n")
    return metrics

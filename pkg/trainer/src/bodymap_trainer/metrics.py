"""Precision/recall/F1 over binary predictions.

Conventions for degenerate cases: precision is 0 when TP+FP = 0, recall
is 0 when TP+FN = 0, and F1 is 0 when P+R = 0.
"""

from __future__ import annotations

from typing import Sequence


def confusion_counts(
    labels: Sequence[int], predictions: Sequence[int], positive: int = 1
) -> dict[str, int]:
    if len(labels) != len(predictions):
        raise ValueError("labels and predictions differ in length")
    tp = fp = fn = tn = 0
    for y, p in zip(labels, predictions):
        if p == positive:
            if y == positive:
                tp += 1
            else:
                fp += 1
        else:
            if y == positive:
                fn += 1
            else:
                tn += 1
    return {"tp": tp, "fp": fp, "fn": fn, "tn": tn}


def precision_recall_f1(counts: dict[str, int]) -> tuple[float, float, float]:
    tp, fp, fn = counts["tp"], counts["fp"], counts["fn"]
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


def evaluate_predictions(
    labels: Sequence[int], predictions: Sequence[int], positive: int = 1
) -> dict:
    counts = confusion_counts(labels, predictions, positive)
    precision, recall, f1 = precision_recall_f1(counts)
    return {
        "precision": precision,
        "recall": recall,
        "f1": f1,
        "n": len(labels),
        **counts,
    }

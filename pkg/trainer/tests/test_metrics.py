import random

import pytest

from bodymap_trainer.metrics import confusion_counts, evaluate_predictions, precision_recall_f1


def oracle_confusion(labels, predictions):
    """Independent matrix-walk oracle."""
    matrix = {(y, p): 0 for y in (0, 1) for p in (0, 1)}
    for y, p in zip(labels, predictions):
        matrix[(y, p)] += 1
    return {
        "tp": matrix[(1, 1)],
        "fp": matrix[(0, 1)],
        "fn": matrix[(1, 0)],
        "tn": matrix[(0, 0)],
    }


class TestF1:
    def test_all_correct_is_one(self):
        metrics = evaluate_predictions([0, 1, 1, 0], [0, 1, 1, 0])
        assert metrics["f1"] == 1.0

    def test_worked_example(self):
        # TP=8, FP=2, FN=2 -> P = R = F1 = 0.8
        labels = [1] * 8 + [0] * 2 + [1] * 2 + [0] * 5
        preds = [1] * 8 + [1] * 2 + [0] * 2 + [0] * 5
        metrics = evaluate_predictions(labels, preds)
        assert metrics["precision"] == pytest.approx(0.8)
        assert metrics["recall"] == pytest.approx(0.8)
        assert metrics["f1"] == pytest.approx(0.8)

    def test_degenerate_all_negative_predictor(self):
        metrics = evaluate_predictions([1, 1, 0], [0, 0, 0])
        assert metrics["precision"] == 0.0
        assert metrics["recall"] == 0.0
        assert metrics["f1"] == 0.0

    def test_matches_oracle_on_random_fixtures(self):
        rng = random.Random(11)
        for _ in range(200):
            n = rng.randint(1, 50)
            labels = [rng.randint(0, 1) for _ in range(n)]
            preds = [rng.randint(0, 1) for _ in range(n)]
            counts = confusion_counts(labels, preds)
            assert counts == oracle_confusion(labels, preds)
            p, r, f1 = precision_recall_f1(counts)
            tp, fp, fn = counts["tp"], counts["fp"], counts["fn"]
            expected_p = tp / (tp + fp) if tp + fp else 0.0
            expected_r = tp / (tp + fn) if tp + fn else 0.0
            expected_f1 = (
                2 * expected_p * expected_r / (expected_p + expected_r)
                if expected_p + expected_r
                else 0.0
            )
            assert (p, r, f1) == (expected_p, expected_r, expected_f1)

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            confusion_counts([1], [1, 0])

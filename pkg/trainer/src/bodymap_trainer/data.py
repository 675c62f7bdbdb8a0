"""Dataset access over the exported directory layout.

Expected tree (produced by the generator toolkit's export step)::

    <data_dir>/train/patellar_luxation/*.png
    <data_dir>/train/other/*.png
    <data_dir>/val/patellar_luxation/*.png
    <data_dir>/val/other/*.png

The positive class is ``patellar_luxation`` (label 1).
"""

from __future__ import annotations

from pathlib import Path

import torch
from PIL import Image
from torch.utils.data import Dataset

CLASSES = ("other", "patellar_luxation")
POSITIVE_CLASS = "patellar_luxation"
POSITIVE_LABEL = CLASSES.index(POSITIVE_CLASS)

IMAGENET_MEAN = (0.485, 0.456, 0.406)
IMAGENET_STD = (0.229, 0.224, 0.225)


class DataLayoutError(RuntimeError):
    pass


def list_images(data_dir: str | Path, split: str) -> list[tuple[Path, int]]:
    """(path, label) pairs for one split, sorted for determinism."""
    split_dir = Path(data_dir) / split
    if not split_dir.is_dir():
        raise DataLayoutError(f"missing split directory: {split_dir}")
    items: list[tuple[Path, int]] = []
    for label, cls in enumerate(CLASSES):
        cls_dir = split_dir / cls
        if not cls_dir.is_dir():
            raise DataLayoutError(f"missing class directory: {cls_dir}")
        files = sorted(p for p in cls_dir.iterdir() if p.suffix.lower() == ".png")
        if not files:
            raise DataLayoutError(f"class {cls!r} has zero images in {cls_dir}")
        items.extend((path, label) for path in files)
    return items


class BodymapImages(Dataset):
    """PNG images resized to a square and normalized with ImageNet stats."""

    def __init__(self, data_dir: str | Path, split: str, image_size: int = 240):
        self.items = list_images(data_dir, split)
        self.image_size = image_size
        self._mean = torch.tensor(IMAGENET_MEAN).view(3, 1, 1)
        self._std = torch.tensor(IMAGENET_STD).view(3, 1, 1)

    def __len__(self) -> int:
        return len(self.items)

    def __getitem__(self, index: int) -> tuple[torch.Tensor, int]:
        path, label = self.items[index]
        with Image.open(path) as img:
            img = img.convert("RGB").resize(
                (self.image_size, self.image_size), Image.BILINEAR
            )
            raw = torch.frombuffer(bytearray(img.tobytes()), dtype=torch.uint8)
        x = raw.view(self.image_size, self.image_size, 3).permute(2, 0, 1).float() / 255.0
        x = (x - self._mean) / self._std
        return x, label

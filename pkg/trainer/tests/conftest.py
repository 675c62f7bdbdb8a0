from __future__ import annotations

import random

import pytest
from PIL import Image, ImageDraw


def draw_sample(path, cls: str, rng: random.Random, size=(124, 62)):
    """Tiny stand-in for an exported body map: class-dependent blob pattern."""
    img = Image.new("RGB", size, (255, 255, 255))
    draw = ImageDraw.Draw(img)
    if cls == "patellar_luxation":
        # few marks clustered on the left
        for _ in range(rng.randint(2, 4)):
            x, y = rng.randint(5, 40), rng.randint(5, 50)
            draw.ellipse([x, y, x + 8, y + 8], fill=(255, 0, 0))
    else:
        # many marks spread everywhere
        for _ in range(rng.randint(8, 14)):
            x, y = rng.randint(5, 110), rng.randint(5, 50)
            draw.line([x, y, x + 6, y + 3], fill=(0, 90, 200), width=2)
    img.save(path, format="PNG")


@pytest.fixture()
def tiny_export(tmp_path):
    """Export-layout tree with 20 train + 8 val images per class."""
    rng = random.Random(7)
    for split, n in (("train", 20), ("val", 8)):
        for cls in ("patellar_luxation", "other"):
            d = tmp_path / "data" / split / cls
            d.mkdir(parents=True)
            for i in range(n):
                draw_sample(d / f"{cls[:3]}-{i:03d}.png", cls, rng)
    return tmp_path / "data"

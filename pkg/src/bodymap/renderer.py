"""Hand-drawn-style rendering of documentations onto the body-map template.

Rectangular regions get a sketchy line between jittered anchor points
(endpoint jitter is a uniform integer in [-5, 5] px per coordinate);
circular regions get a filled octagon whose vertices are shifted by a
uniform real in [-0.15r, 0.15r] per coordinate.  Every stroke draws from
its own sub-seed derived from (master seed, region, condition), so
render order and parallelism cannot change the output.  SVG output is
canonical and byte-reproducible; PNG rasterization via Pillow is derived
from the same stroke specs.
"""

from __future__ import annotations

import base64
import math
import random
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import TYPE_CHECKING, Protocol

from PIL import Image, ImageDraw

from .atlas import CircleGeometry, Condition, RectGeometry, Region, RegionAtlas
from .errors import ValidationError
from .seeds import derive_rng

if TYPE_CHECKING:  # pragma: no cover
    from .pipeline import Documentation

LINE_JITTER_PX = 5
INTERIOR_JITTER_PX = 2.0
CIRCLE_JITTER_FRACTION = 0.15
CIRCLE_VERTICES = 8
LINE_SAMPLES_PER_SEGMENT = 6  # 3 segments -> 19 emitted points
STROKE_WIDTH = 3


class RandomSource(Protocol):
    """What the stroke generators need from a random source."""

    def randint(self, a: int, b: int) -> int: ...

    def uniform(self, a: float, b: float) -> float: ...


@dataclass(frozen=True)
class StrokeSpec:
    region_index: int
    condition_index: int
    kind: str  # "line" | "filled_polygon"
    points: tuple[tuple[float, float], ...]
    color: tuple[int, int, int]


def line_anchor_points(region: Region) -> tuple[tuple[float, float], tuple[float, float]]:
    """Anchor endpoints along the primary orientation of a rectangle.

    Wide boxes (w >= h, including squares) anchor at the left/right edge
    midpoints; tall boxes at the top/bottom edge midpoints.
    """
    if region.shape != "rectangle" or not isinstance(region.geometry, RectGeometry):
        raise ValidationError(f"region {region.index} is not rectangular")
    g = region.geometry
    if g.w >= g.h:
        return (g.x, g.y + g.h / 2.0), (g.x + g.w, g.y + g.h / 2.0)
    return (g.x + g.w / 2.0, g.y), (g.x + g.w / 2.0, g.y + g.h)


def _catmull_rom(points: list[tuple[float, float]], samples_per_segment: int) -> list[tuple[float, float]]:
    """Uniform Catmull-Rom spline through all control points, endpoints exact."""
    pts = [points[0]] + points + [points[-1]]
    out: list[tuple[float, float]] = []
    for i in range(len(points) - 1):
        p0, p1, p2, p3 = pts[i], pts[i + 1], pts[i + 2], pts[i + 3]
        for j in range(samples_per_segment):
            t = j / samples_per_segment
            t2, t3 = t * t, t * t * t
            out.append(
                tuple(
                    0.5
                    * (
                        2 * p1[k]
                        + (-p0[k] + p2[k]) * t
                        + (2 * p0[k] - 5 * p1[k] + 4 * p2[k] - p3[k]) * t2
                        + (-p0[k] + 3 * p1[k] - 3 * p2[k] + p3[k]) * t3
                    )
                    for k in (0, 1)
                )
            )
    out.append(points[-1])
    return out


def render_line(
    region: Region, rng: RandomSource, condition: Condition | None = None
) -> StrokeSpec:
    """Sketchy line stroke for a rectangular region.

    Draw order from ``rng``: four endpoint offsets (integers), then two
    interior perpendicular offsets (reals).  The emitted path starts and
    ends exactly on the jittered anchors.
    """
    s, e = line_anchor_points(region)
    s_hat = (s[0] + rng.randint(-LINE_JITTER_PX, LINE_JITTER_PX),
             s[1] + rng.randint(-LINE_JITTER_PX, LINE_JITTER_PX))
    e_hat = (e[0] + rng.randint(-LINE_JITTER_PX, LINE_JITTER_PX),
             e[1] + rng.randint(-LINE_JITTER_PX, LINE_JITTER_PX))

    dx, dy = e_hat[0] - s_hat[0], e_hat[1] - s_hat[1]
    length = math.hypot(dx, dy)
    if length > 0:
        normal = (-dy / length, dx / length)
    else:
        normal = (0.0, 0.0)
    interior = []
    for frac in (1.0 / 3.0, 2.0 / 3.0):
        u = rng.uniform(-INTERIOR_JITTER_PX, INTERIOR_JITTER_PX)
        interior.append(
            (s_hat[0] + dx * frac + normal[0] * u, s_hat[1] + dy * frac + normal[1] * u)
        )

    path = _catmull_rom([s_hat, *interior, e_hat], LINE_SAMPLES_PER_SEGMENT)
    return StrokeSpec(
        region_index=region.index,
        condition_index=condition.index if condition else 0,
        kind="line",
        points=tuple(path),
        color=condition.color if condition else (0, 0, 0),
    )


def render_circle(
    region: Region, rng: RandomSource, condition: Condition | None = None
) -> StrokeSpec:
    """Filled sketchy octagon for a circular region.

    Eight vertices sit at 45-degree steps around the circumference, each
    coordinate shifted by a uniform real in [-0.15r, 0.15r] (x then y).
    """
    if region.shape != "circle" or not isinstance(region.geometry, CircleGeometry):
        raise ValidationError(f"region {region.index} is not circular")
    g = region.geometry
    if g.r <= 0:
        raise ValidationError(f"region {region.index} has non-positive radius")
    bound = CIRCLE_JITTER_FRACTION * g.r
    vertices = []
    for k in range(CIRCLE_VERTICES):
        angle = k * (2 * math.pi / CIRCLE_VERTICES)
        vertices.append(
            (
                g.cx + g.r * math.cos(angle) + rng.uniform(-bound, bound),
                g.cy + g.r * math.sin(angle) + rng.uniform(-bound, bound),
            )
        )
    return StrokeSpec(
        region_index=region.index,
        condition_index=condition.index if condition else 0,
        kind="filled_polygon",
        points=tuple(vertices),
        color=condition.color if condition else (0, 0, 0),
    )


def render_stroke(region: Region, condition: Condition, rng: RandomSource) -> StrokeSpec:
    if region.shape == "rectangle":
        return render_line(region, rng, condition)
    return render_circle(region, rng, condition)


def strokes_for_documentation(
    doc: "Documentation", atlas: RegionAtlas, seed: int
) -> list[StrokeSpec]:
    """One stroke per abnormality, in ascending region-index order."""
    strokes = []
    for region_index, condition_index in sorted(doc.abnormalities):
        region = atlas.region(region_index)
        condition = atlas.condition(condition_index)
        rng = derive_rng("stroke", seed, region_index, condition_index)
        stroke = render_stroke(region, condition, rng)
        _check_canvas(stroke, atlas)
        strokes.append(stroke)
    return strokes


def _check_canvas(stroke: StrokeSpec, atlas: RegionAtlas) -> None:
    w, h = atlas.template.width, atlas.template.height
    for x, y in stroke.points:
        if x < 0 or y < 0 or x > w or y > h:
            raise ValidationError(
                f"stroke for region {stroke.region_index} leaves the canvas at ({x:.1f}, {y:.1f})"
            )


# ---------------------------------------------------------------------------
# SVG / PNG emission
# ---------------------------------------------------------------------------


@lru_cache(maxsize=8)
def _template_base64(path: str) -> str:
    return base64.b64encode(Path(path).read_bytes()).decode("ascii")


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def _points_attr(points: tuple[tuple[float, float], ...]) -> str:
    return " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in points)


def render_svg(doc: "Documentation", atlas: RegionAtlas, seed: int) -> str:
    """Canonical SVG: template image layer plus one element per stroke.

    Byte-identical for identical (doc, atlas, seed).
    """
    template = atlas.template
    if not Path(template.path).is_file():
        raise ValidationError(f"template image missing: {template.path}")
    strokes = strokes_for_documentation(doc, atlas, seed)
    w, h = template.width, template.height
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'<image x="0" y="0" width="{w}" height="{h}" '
        f'href="data:image/png;base64,{_template_base64(str(template.path))}"/>',
    ]
    for stroke in strokes:
        color = "rgb({},{},{})".format(*stroke.color)
        meta = f'data-region="{stroke.region_index}" data-condition="{stroke.condition_index}"'
        if stroke.kind == "line":
            lines.append(
                f'<polyline points="{_points_attr(stroke.points)}" fill="none" '
                f'stroke="{color}" stroke-width="{STROKE_WIDTH}" stroke-linecap="round" '
                f'stroke-linejoin="round" {meta}/>'
            )
        else:
            lines.append(
                f'<polygon points="{_points_attr(stroke.points)}" fill="{color}" '
                f'stroke="none" {meta}/>'
            )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def rasterize(doc: "Documentation", atlas: RegionAtlas, seed: int) -> Image.Image:
    """PNG-ready raster of the same strokes over the template image."""
    template_path = Path(atlas.template.path)
    if not template_path.is_file():
        raise ValidationError(f"template image missing: {template_path}")
    img = Image.open(template_path).convert("RGB")
    if img.size != (atlas.template.width, atlas.template.height):
        raise ValidationError(
            f"template image size {img.size} does not match atlas canvas "
            f"({atlas.template.width}, {atlas.template.height})"
        )
    draw = ImageDraw.Draw(img)
    for stroke in strokes_for_documentation(doc, atlas, seed):
        if stroke.kind == "line":
            draw.line(list(stroke.points), fill=stroke.color, width=STROKE_WIDTH, joint="curve")
        else:
            draw.polygon(list(stroke.points), fill=stroke.color)
    return img


def write_artifacts(
    doc: "Documentation",
    atlas: RegionAtlas,
    seed: int,
    out_dir: str | Path,
    png: bool = False,
) -> dict[str, Path]:
    """Write ``<id>.svg`` (and optionally ``<id>.png``) under ``out_dir``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    svg_path = out_dir / f"{doc.id}.svg"
    svg_path.write_text(render_svg(doc, atlas, seed))
    paths = {"svg": svg_path}
    if png:
        png_path = out_dir / f"{doc.id}.png"
        rasterize(doc, atlas, seed).save(png_path, format="PNG")
        paths["png"] = png_path
    return paths

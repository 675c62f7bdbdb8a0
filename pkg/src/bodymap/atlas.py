"""Region atlas: the indexed mapping between body-map geometry and text.

The atlas discretizes a two-view dog body map (supine and prone
silhouettes on one canvas) into 214 labeled regions, each a rectangle or
circle in template pixel coordinates, plus 7 palpation conditions with
fixed stroke colors.  It is the shared vocabulary of every other module:
prompts list its entries, the renderer draws into its geometry, and
generated documentations index into it.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Iterable

from .data import default_atlas_path
from .errors import ParseError, ValidationError

if TYPE_CHECKING:  # pragma: no cover
    from .pipeline import Documentation

VIEWS = ("supine", "prone")
SIDES = ("left", "right", "midline")

REGION_COUNT = 214
CONDITION_COUNT = 7

#: Fixed colors for the two clinically anchored conditions.
ACUTE_LABEL = "acute inflammation"
CHRONIC_LABEL = "chronic change"
RED = (255, 0, 0)
BLACK = (0, 0, 0)

EMPTY_DOC_TEXT = "no abnormalities found"


@dataclass(frozen=True)
class RectGeometry:
    x: float
    y: float
    w: float
    h: float

    @property
    def center(self) -> tuple[float, float]:
        return (self.x + self.w / 2.0, self.y + self.h / 2.0)


@dataclass(frozen=True)
class CircleGeometry:
    cx: float
    cy: float
    r: float

    @property
    def center(self) -> tuple[float, float]:
        return (self.cx, self.cy)


@dataclass(frozen=True)
class Region:
    """One indexed anatomical region on the body-map template."""

    index: int
    label: str
    view: str
    side: str
    shape: str  # "rectangle" | "circle"
    geometry: RectGeometry | CircleGeometry
    tags: tuple[str, ...] = ()

    @property
    def center(self) -> tuple[float, float]:
        return self.geometry.center


@dataclass(frozen=True)
class Condition:
    """One palpation condition with its stroke color."""

    index: int
    label: str
    color: tuple[int, int, int]


@dataclass(frozen=True)
class TemplateRef:
    """The background body-map image and its canvas size."""

    path: Path
    width: int
    height: int


@dataclass(frozen=True)
class RegionAtlas:
    """Validated, immutable atlas; safe to share across threads."""

    regions: dict[int, Region]
    conditions: dict[int, Condition]
    template: TemplateRef
    source_path: Path | None = None
    file_sha256: str | None = None
    _label_to_region: dict[str, Region] = field(
        default_factory=dict, repr=False, compare=False, init=False
    )

    def __post_init__(self):
        _validate_structure(self.regions, self.conditions, self.template)
        object.__setattr__(
            self, "_label_to_region", {r.label: r for r in self.regions.values()}
        )

    def region(self, index: int) -> Region:
        try:
            return self.regions[index]
        except KeyError:
            raise ValidationError(f"unknown region index {index}") from None

    def condition(self, index: int) -> Condition:
        try:
            return self.conditions[index]
        except KeyError:
            raise ValidationError(f"unknown condition index {index}") from None

    def region_by_label(self, label: str) -> Region:
        try:
            return self._label_to_region[label]
        except KeyError:
            raise ValidationError(f"unknown region label {label!r}") from None

    def condition_by_label(self, label: str) -> Condition:
        for cond in self.conditions.values():
            if cond.label == label:
                return cond
        raise ValidationError(f"unknown condition label {label!r}")

    def regions_with_tag(self, tag: str, side: str | None = None) -> list[Region]:
        """Regions carrying ``tag``, ordered by index; optionally one side."""
        found = [
            r
            for r in sorted(self.regions.values(), key=lambda r: r.index)
            if tag in r.tags and (side is None or r.side == side)
        ]
        return found

    @property
    def region_indices(self) -> list[int]:
        return sorted(self.regions)

    @property
    def condition_indices(self) -> list[int]:
        return sorted(self.conditions)


def _geometry_bounds(geom: RectGeometry | CircleGeometry) -> tuple[float, float, float, float]:
    if isinstance(geom, RectGeometry):
        return (geom.x, geom.y, geom.x + geom.w, geom.y + geom.h)
    return (geom.cx - geom.r, geom.cy - geom.r, geom.cx + geom.r, geom.cy + geom.r)


def _validate_structure(
    regions: dict[int, Region], conditions: dict[int, Condition], template: TemplateRef
) -> None:
    """Structural invariants common to every atlas (counts are checked at load)."""
    if template.width <= 0 or template.height <= 0:
        raise ValidationError("template canvas must have positive size")

    labels: set[str] = set()
    for index, region in regions.items():
        if index != region.index:
            raise ValidationError(f"region key {index} does not match index {region.index}")
        if region.index < 1:
            raise ValidationError(f"region index {region.index} must be >= 1")
        if not region.label:
            raise ValidationError(f"region {region.index} has an empty label")
        if region.label in labels:
            raise ValidationError(f"duplicate region label {region.label!r}")
        labels.add(region.label)
        if region.view not in VIEWS:
            raise ValidationError(f"region {region.index} has unknown view {region.view!r}")
        if region.side not in SIDES:
            raise ValidationError(f"region {region.index} has unknown side {region.side!r}")
        geom = region.geometry
        if region.shape == "rectangle":
            if not isinstance(geom, RectGeometry) or geom.w <= 0 or geom.h <= 0:
                raise ValidationError(f"region {region.index} has degenerate rectangle geometry")
        elif region.shape == "circle":
            if not isinstance(geom, CircleGeometry) or geom.r <= 0:
                raise ValidationError(f"region {region.index} has degenerate circle geometry")
        else:
            raise ValidationError(f"region {region.index} has unknown shape {region.shape!r}")
        x0, y0, x1, y1 = _geometry_bounds(geom)
        if x0 < 0 or y0 < 0 or x1 > template.width or y1 > template.height:
            raise ValidationError(f"region {region.index} geometry lies outside the canvas")

    for index, cond in conditions.items():
        if index != cond.index:
            raise ValidationError(f"condition key {index} does not match index {cond.index}")
        if cond.index < 1:
            raise ValidationError(f"condition index {cond.index} must be >= 1")
        if not cond.label:
            raise ValidationError(f"condition {cond.index} has an empty label")
        if len(cond.color) != 3 or any(c < 0 or c > 255 for c in cond.color):
            raise ValidationError(f"condition {cond.index} has an invalid color {cond.color}")

    colors = [c.color for c in conditions.values()]
    if len(set(colors)) != len(colors):
        raise ValidationError("condition colors must be pairwise distinct")
    cond_labels = [c.label for c in conditions.values()]
    if len(set(cond_labels)) != len(cond_labels):
        raise ValidationError("condition labels must be unique")
    for cond in conditions.values():
        if cond.label == ACUTE_LABEL and cond.color != RED:
            raise ValidationError(f"condition {cond.label!r} must be colored red")
        if cond.label == CHRONIC_LABEL and cond.color != BLACK:
            raise ValidationError(f"condition {cond.label!r} must be colored black")

    _validate_mirroring(regions)


def _validate_mirroring(regions: dict[int, Region]) -> None:
    """Every non-midline region needs a label-paired twin on the other side."""
    by_label = {r.label: r for r in regions.values()}
    for region in regions.values():
        if region.side == "midline":
            continue
        prefix = region.side + " "
        if not region.label.startswith(prefix):
            raise ValidationError(
                f"region {region.index} on side {region.side} must be labeled {prefix!r}..."
            )
        base = region.label[len(prefix):]
        other_side = "right" if region.side == "left" else "left"
        twin = by_label.get(f"{other_side} {base}")
        if twin is None or twin.side != other_side:
            raise ValidationError(
                f"region {region.index} ({region.label!r}) has no {other_side}-side twin"
            )


def _parse_region(entry: dict) -> Region:
    shape = entry["shape"]
    raw = entry["geometry"]
    geometry: RectGeometry | CircleGeometry
    if shape == "rectangle":
        geometry = RectGeometry(raw["x"], raw["y"], raw["w"], raw["h"])
    elif shape == "circle":
        geometry = CircleGeometry(raw["cx"], raw["cy"], raw["r"])
    else:
        raise ValidationError(f"region {entry.get('index')} has unknown shape {shape!r}")
    return Region(
        index=entry["index"],
        label=entry["label"],
        view=entry["view"],
        side=entry["side"],
        shape=shape,
        geometry=geometry,
        tags=tuple(entry.get("tags", [])),
    )


def load_atlas(path: str | Path | None = None) -> RegionAtlas:
    """Load and fully validate an atlas file (the shipped default if ``path`` is None).

    Raises :class:`ParseError` for malformed files and
    :class:`ValidationError` naming the first violated invariant.
    """
    path = Path(path) if path is not None else default_atlas_path()
    try:
        raw_bytes = path.read_bytes()
        doc = json.loads(raw_bytes)
    except OSError as exc:
        raise ParseError(f"cannot read atlas file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed atlas file {path}: {exc}") from exc

    try:
        tpl = doc["template"]
        template = TemplateRef(
            path=(path.parent / tpl["path"]).resolve(),
            width=tpl["width"],
            height=tpl["height"],
        )
        region_list = [_parse_region(e) for e in doc["regions"]]
        condition_list = [
            Condition(index=e["index"], label=e["label"], color=tuple(e["color"]))
            for e in doc["conditions"]
        ]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"atlas file {path} is missing fields: {exc}") from exc

    regions: dict[int, Region] = {}
    for region in region_list:
        if region.index in regions:
            raise ValidationError(f"duplicate region index {region.index}")
        regions[region.index] = region
    conditions: dict[int, Condition] = {}
    for cond in condition_list:
        if cond.index in conditions:
            raise ValidationError(f"duplicate condition index {cond.index}")
        conditions[cond.index] = cond

    if len(regions) != REGION_COUNT:
        raise ValidationError(f"expected {REGION_COUNT} regions, found {len(regions)}")
    if sorted(regions) != list(range(1, REGION_COUNT + 1)):
        raise ValidationError(f"region indices must cover 1..{REGION_COUNT} exactly")
    if len(conditions) != CONDITION_COUNT:
        raise ValidationError(f"expected {CONDITION_COUNT} conditions, found {len(conditions)}")
    if sorted(conditions) != list(range(1, CONDITION_COUNT + 1)):
        raise ValidationError(f"condition indices must cover 1..{CONDITION_COUNT} exactly")

    return RegionAtlas(
        regions=regions,
        conditions=conditions,
        template=template,
        source_path=path,
        file_sha256=hashlib.sha256(raw_bytes).hexdigest(),
    )


def encode_documentation_as_text(doc: "Documentation", atlas: RegionAtlas) -> str:
    """Encode a documentation as one "<region>: <condition>" line per abnormality.

    Lines are ordered by ascending region index; an empty abnormality list
    encodes as the fixed sentence ``no abnormalities found``.
    """
    return encode_abnormalities(doc.abnormalities, atlas)


def encode_abnormalities(
    abnormalities: Iterable[tuple[int, int]], atlas: RegionAtlas
) -> str:
    pairs = sorted(abnormalities, key=lambda p: p[0])
    if not pairs:
        return EMPTY_DOC_TEXT
    lines = []
    for region_index, condition_index in pairs:
        region = atlas.region(region_index)
        condition = atlas.condition(condition_index)
        lines.append(f"{region.label}: {condition.label}")
    return "\n".join(lines)


def parse_documentation_text(text: str, atlas: RegionAtlas) -> list[tuple[int, int]]:
    """Inverse of :func:`encode_abnormalities` against the same atlas."""
    text = text.strip()
    if text == EMPTY_DOC_TEXT:
        return []
    pairs = []
    for line in text.splitlines():
        region_label, _, condition_label = line.partition(": ")
        region = atlas.region_by_label(region_label)
        condition = atlas.condition_by_label(condition_label)
        pairs.append((region.index, condition.index))
    return pairs

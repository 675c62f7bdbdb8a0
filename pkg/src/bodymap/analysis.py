"""Dataset evaluation measures: stroke frequencies, bubble charts,
duplicate counting, and grouped abnormality averages.

A bubble chart draws one bubble per region with at least one stroke,
centered on the region's geometry over the body-map template.  Bubble
*area* is proportional to the region's relative stroke frequency, and
the bubble interior is split into pie sectors by the per-region
condition shares, using the condition stroke colors.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .atlas import RegionAtlas
from .documents import Documentation
from .errors import ValidationError
from .metadata import BreedKnowledgeBase, age_bin, weight_bin
from .renderer import _template_base64

MAX_BUBBLE_RADIUS = 22.0

SELECTORS = ("grade", "location", "sex", "age_bin", "weight_bin", "none")
REPORT_SELECTORS = ("location", "grade", "age_bin", "sex", "weight_bin")


@dataclass(frozen=True)
class FrequencyMap:
    """Stroke counts per region and condition shares within each region."""

    total_strokes: int
    region_counts: dict[int, int]
    region_rel: dict[int, float]
    condition_shares: dict[int, dict[int, float]]

    def count(self, region_index: int) -> int:
        return self.region_counts.get(region_index, 0)


def stroke_frequencies(docs: Sequence[Documentation], atlas: RegionAtlas) -> FrequencyMap:
    """Exact stroke counting over a dataset validated against one atlas."""
    counts: dict[int, int] = {i: 0 for i in atlas.region_indices}
    pair_counts: dict[int, dict[int, int]] = {}
    total = 0
    for doc in docs:
        for region_index, condition_index in doc.abnormalities:
            atlas.region(region_index)
            atlas.condition(condition_index)
            counts[region_index] += 1
            pair_counts.setdefault(region_index, {}).setdefault(condition_index, 0)
            pair_counts[region_index][condition_index] += 1
            total += 1
    rel = {i: (c / total if total else 0.0) for i, c in counts.items()}
    shares = {
        region: {cond: n / counts[region] for cond, n in sorted(conds.items())}
        for region, conds in pair_counts.items()
    }
    return FrequencyMap(
        total_strokes=total, region_counts=counts, region_rel=rel, condition_shares=shares
    )


def duplicate_count(docs: Sequence[Documentation]) -> int:
    """Number of documentations whose abnormality *set* repeats an earlier one.

    Identity is the unordered set of (region, condition) pairs; metadata
    and ordering are ignored.
    """
    distinct = {frozenset(doc.abnormalities) for doc in docs}
    return len(docs) - len(distinct)


def average_abnormalities(
    docs: Sequence[Documentation],
    group_by: str = "none",
    kb: BreedKnowledgeBase | None = None,
) -> dict[str, float]:
    """Arithmetic mean abnormality count per group (empty groups omitted)."""
    groups = group_docs(docs, group_by, kb)
    return {
        key: sum(len(d.abnormalities) for d in members) / len(members)
        for key, members in groups.items()
        if members
    }


def _group_key(doc: Documentation, selector: str, kb: BreedKnowledgeBase | None) -> str:
    if selector == "none":
        return "all"
    if selector == "grade":
        return f"grade_{doc.diagnosis.grade}" if doc.diagnosis.grade else "unspecified"
    if selector == "location":
        return doc.diagnosis.location or "unspecified"
    if doc.metadata is None:
        raise ValidationError(f"documentation {doc.id} has no metadata for {selector} grouping")
    if selector == "sex":
        return doc.metadata.sex
    if selector == "age_bin":
        return age_bin(doc.metadata.age)
    if selector == "weight_bin":
        if kb is None:
            raise ValidationError("weight_bin grouping needs the breed knowledge base")
        record = kb.record(doc.metadata.breed)
        return weight_bin(record, doc.metadata.sex, doc.metadata.weight)
    raise ValidationError(f"unknown group selector {selector!r}")


def group_docs(
    docs: Sequence[Documentation],
    selector: str,
    kb: BreedKnowledgeBase | None = None,
) -> dict[str, list[Documentation]]:
    if selector not in SELECTORS:
        raise ValidationError(f"unknown group selector {selector!r}")
    groups: dict[str, list[Documentation]] = {}
    for doc in docs:
        groups.setdefault(_group_key(doc, selector, kb), []).append(doc)
    return dict(sorted(groups.items()))


# ---------------------------------------------------------------------------
# Bubble chart emission
# ---------------------------------------------------------------------------


def bubble_radius(rel_freq: float, max_rel_freq: float) -> float:
    """Radius whose *area* is proportional to the relative frequency."""
    if rel_freq <= 0 or max_rel_freq <= 0:
        return 0.0
    return MAX_BUBBLE_RADIUS * math.sqrt(rel_freq / max_rel_freq)


def _sector_path(cx: float, cy: float, r: float, frac0: float, frac1: float) -> str:
    a0 = 2 * math.pi * frac0 - math.pi / 2
    a1 = 2 * math.pi * frac1 - math.pi / 2
    x0, y0 = cx + r * math.cos(a0), cy + r * math.sin(a0)
    x1, y1 = cx + r * math.cos(a1), cy + r * math.sin(a1)
    large = 1 if (frac1 - frac0) > 0.5 else 0
    return (
        f"M {cx:.2f},{cy:.2f} L {x0:.2f},{y0:.2f} "
        f"A {r:.2f},{r:.2f} 0 {large} 1 {x1:.2f},{y1:.2f} Z"
    )


def bubble_chart_svg(freq: FrequencyMap, atlas: RegionAtlas) -> str:
    """SVG bubble chart over the body-map template."""
    w, h = atlas.template.width, atlas.template.height
    max_rel = max(freq.region_rel.values(), default=0.0)
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'<image x="0" y="0" width="{w}" height="{h}" '
        f'href="data:image/png;base64,{_template_base64(str(atlas.template.path))}"/>',
    ]
    for region_index in atlas.region_indices:
        count = freq.count(region_index)
        if count == 0:
            continue
        region = atlas.region(region_index)
        cx, cy = region.center
        r = bubble_radius(freq.region_rel[region_index], max_rel)
        shares = freq.condition_shares[region_index]
        if len(shares) == 1:
            (condition_index,) = shares
            color = "rgb({},{},{})".format(*atlas.condition(condition_index).color)
            lines.append(
                f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{r:.2f}" fill="{color}" '
                f'fill-opacity="0.75" data-region="{region_index}" data-kind="sector"/>'
            )
        else:
            start = 0.0
            for condition_index, share in sorted(shares.items()):
                color = "rgb({},{},{})".format(*atlas.condition(condition_index).color)
                lines.append(
                    f'<path d="{_sector_path(cx, cy, r, start, start + share)}" '
                    f'fill="{color}" fill-opacity="0.75" data-region="{region_index}" '
                    f'data-condition="{condition_index}" data-kind="sector"/>'
                )
                start += share
        lines.append(
            f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{r:.2f}" fill="none" '
            f'stroke="rgb(60,60,60)" stroke-width="0.8" data-region="{region_index}" '
            f'data-kind="bubble"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def frequency_csv_rows(freq: FrequencyMap, atlas: RegionAtlas) -> list[dict]:
    """One row per region with nonzero count, plus per-condition shares."""
    rows = []
    for region_index in atlas.region_indices:
        count = freq.count(region_index)
        if count == 0:
            continue
        row = {
            "region": region_index,
            "label": atlas.region(region_index).label,
            "count": count,
            "relative_frequency": f"{freq.region_rel[region_index]:.6f}",
        }
        shares = freq.condition_shares[region_index]
        for condition_index in atlas.condition_indices:
            row[f"share_{condition_index}"] = f"{shares.get(condition_index, 0.0):.6f}"
        rows.append(row)
    return rows


def bubble_chart(
    freq: FrequencyMap, atlas: RegionAtlas, svg_path: str | Path, csv_path: str | Path
) -> tuple[Path, Path]:
    """Write the chart SVG and its companion CSV."""
    svg_path, csv_path = Path(svg_path), Path(csv_path)
    svg_path.parent.mkdir(parents=True, exist_ok=True)
    svg_path.write_text(bubble_chart_svg(freq, atlas))
    rows = frequency_csv_rows(freq, atlas)
    fields = ["region", "label", "count", "relative_frequency"] + [
        f"share_{i}" for i in atlas.condition_indices
    ]
    with Path(csv_path).open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)
    return svg_path, csv_path


def analyze_groups(
    docs: Sequence[Documentation],
    selector: str,
    atlas: RegionAtlas,
    out_dir: str | Path,
    kb: BreedKnowledgeBase | None = None,
) -> dict[str, FrequencyMap]:
    """Per-group frequency maps, bubbles and CSVs for one selector."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    groups = group_docs(docs, selector, kb)
    freqs = {}
    for key, members in groups.items():
        freq = stroke_frequencies(members, atlas)
        bubble_chart(freq, atlas, out_dir / f"bubbles_{key}.svg", out_dir / f"freq_{key}.csv")
        freqs[key] = freq
    return freqs


def attribute_report(
    docs: Sequence[Documentation],
    kb: BreedKnowledgeBase,
    atlas: RegionAtlas,
    out_dir: str | Path,
) -> Path:
    """Charts for every attribute plus a summary table of per-group means."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    summary_rows = []
    for selector in REPORT_SELECTORS:
        analyze_groups(docs, selector, atlas, out_dir, kb)
        groups = group_docs(docs, selector, kb)
        means = average_abnormalities(docs, selector, kb)
        for key in groups:
            summary_rows.append(
                {
                    "attribute": selector,
                    "group": key,
                    "documentations": len(groups[key]),
                    "mean_abnormalities": f"{means[key]:.2f}",
                }
            )
    summary_path = out_dir / "summary.csv"
    with summary_path.open("w", newline="") as fh:
        writer = csv.DictWriter(
            fh, fieldnames=["attribute", "group", "documentations", "mean_abnormalities"]
        )
        writer.writeheader()
        writer.writerows(summary_rows)
    return summary_path

"""Dataset persistence: manifests, reproducible splits, and image export.

The manifest is JSON Lines (header line, then one line per entry or
reject) so long batch runs can append safely.  It is the single source
of truth: export re-renders every image from the documentation payloads
and stored seeds alone.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import __version__
from .atlas import RegionAtlas
from .documents import Documentation, doc_from_payload, doc_to_payload
from .errors import ParseError, ValidationError
from .renderer import rasterize, render_svg
from .seeds import derive_rng, derive_seed

log = logging.getLogger(__name__)

SPLITS = ("train", "val", "unassigned")
LABELS = ("patellar_luxation", "other")

DEFAULT_TRAIN_FRACTION = 0.8


@dataclass(frozen=True)
class ManifestEntry:
    id: str
    label: str
    doc: Documentation
    seed: int
    provenance: str
    split: str = "unassigned"
    image: str | None = None

    def __post_init__(self):
        if self.label not in LABELS:
            raise ValidationError(f"unknown label {self.label!r}")
        if self.split not in SPLITS:
            raise ValidationError(f"unknown split {self.split!r}")


@dataclass(frozen=True)
class DatasetManifest:
    entries: tuple[ManifestEntry, ...]
    atlas_sha256: str | None = None
    tool_version: str = __version__
    master_seed: int = 0
    rejects: tuple[dict, ...] = field(default_factory=tuple)

    def __post_init__(self):
        ids = [e.id for e in self.entries]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise ValidationError(f"duplicate manifest ids: {dupes[:5]}")

    @property
    def docs(self) -> list[Documentation]:
        return [e.doc for e in self.entries]


def write_manifest(manifest: DatasetManifest, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [
        json.dumps(
            {
                "kind": "header",
                "atlas_sha256": manifest.atlas_sha256,
                "tool_version": manifest.tool_version,
                "master_seed": manifest.master_seed,
            },
            ensure_ascii=True,
        )
    ]
    for entry in manifest.entries:
        lines.append(
            json.dumps(
                {
                    "kind": "entry",
                    "id": entry.id,
                    "label": entry.label,
                    "split": entry.split,
                    "seed": entry.seed,
                    "provenance": entry.provenance,
                    "image": entry.image,
                    "doc": doc_to_payload(entry.doc),
                },
                ensure_ascii=True,
            )
        )
    for reject in manifest.rejects:
        lines.append(json.dumps({"kind": "reject", **reject}, ensure_ascii=True))
    path.write_text("\n".join(lines) + "\n")
    return path


def read_manifest(
    path: str | Path, expected_atlas_sha256: str | None = None
) -> DatasetManifest:
    path = Path(path)
    try:
        raw_lines = path.read_text().splitlines()
    except OSError as exc:
        raise ParseError(f"cannot read manifest {path}: {exc}") from exc
    header = None
    entries: list[ManifestEntry] = []
    rejects: list[dict] = []
    for lineno, line in enumerate(raw_lines, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}:{lineno}: malformed JSON line: {exc}") from exc
        kind = record.get("kind")
        if kind == "header":
            header = record
        elif kind == "entry":
            try:
                entries.append(
                    ManifestEntry(
                        id=record["id"],
                        label=record["label"],
                        doc=doc_from_payload(record["doc"]),
                        seed=record["seed"],
                        provenance=record["provenance"],
                        split=record["split"],
                        image=record.get("image"),
                    )
                )
            except KeyError as exc:
                raise ParseError(f"{path}:{lineno}: entry missing field {exc}") from exc
        elif kind == "reject":
            rejects.append({k: v for k, v in record.items() if k != "kind"})
        else:
            raise ParseError(f"{path}:{lineno}: unknown record kind {kind!r}")
    if header is None:
        raise ParseError(f"{path}: missing manifest header line")
    manifest = DatasetManifest(
        entries=tuple(entries),
        atlas_sha256=header.get("atlas_sha256"),
        tool_version=header.get("tool_version", "unknown"),
        master_seed=header.get("master_seed", 0),
        rejects=tuple(rejects),
    )
    if (
        expected_atlas_sha256 is not None
        and manifest.atlas_sha256 is not None
        and manifest.atlas_sha256 != expected_atlas_sha256
    ):
        log.warning(
            "manifest %s was built against a different atlas (hash %s != %s)",
            path,
            manifest.atlas_sha256[:12],
            expected_atlas_sha256[:12],
        )
    return manifest


def split_dataset(
    manifest: DatasetManifest,
    train_fraction: float = DEFAULT_TRAIN_FRACTION,
    seed: int = 0,
) -> DatasetManifest:
    """Assign train/val splits, stratified by label and shuffled by seed.

    Each label's entries are shuffled deterministically and the first
    floor(n * train_fraction) go to train.  All entries must be
    unassigned.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValidationError(f"train_fraction {train_fraction} outside (0, 1)")
    assigned = [e.id for e in manifest.entries if e.split != "unassigned"]
    if assigned:
        raise ValidationError(f"entries already split: {assigned[:5]}")
    split_by_id: dict[str, str] = {}
    for label in sorted({e.label for e in manifest.entries}):
        ids = sorted(e.id for e in manifest.entries if e.label == label)
        derive_rng("split", seed, label).shuffle(ids)
        n_train = int(len(ids) * train_fraction)
        for i, entry_id in enumerate(ids):
            split_by_id[entry_id] = "train" if i < n_train else "val"
    new_entries = tuple(
        replace(entry, split=split_by_id[entry.id]) for entry in manifest.entries
    )
    return replace(manifest, entries=new_entries)


@dataclass
class ExportResult:
    out_dir: Path
    labels_csv: Path
    written: int
    rejects: list[dict]


def render_seed_for(entry: ManifestEntry) -> int:
    """Stroke-jitter seed for an entry, derived from its stored seed."""
    return derive_seed("render", entry.seed)


def export_dataset(
    manifest: DatasetManifest, atlas: RegionAtlas, out_dir: str | Path
) -> ExportResult:
    """Write the class-folder image tree and labels.csv.

    Layout: ``out/{train,val}/{label}/<id>.png`` rasterized at the
    template's native size, plus canonical SVG intermediates under
    ``out/svg/``.  Per-entry render failures are collected, not fatal.
    """
    for entry in manifest.entries:
        if entry.split == "unassigned":
            raise ValidationError(f"entry {entry.id} has no split assigned")
    out_dir = Path(out_dir)
    svg_dir = out_dir / "svg"
    svg_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    rejects: list[dict] = []
    written = 0
    for entry in manifest.entries:
        seed = render_seed_for(entry)
        target = out_dir / entry.split / entry.label
        target.mkdir(parents=True, exist_ok=True)
        png_path = target / f"{entry.id}.png"
        try:
            (svg_dir / f"{entry.id}.svg").write_text(render_svg(entry.doc, atlas, seed))
            rasterize(entry.doc, atlas, seed).save(png_path, format="PNG")
        except Exception as exc:  # per-entry failures must not kill the export
            rejects.append({"id": entry.id, "error": str(exc)})
            continue
        written += 1
        rows.append(
            {
                "id": entry.id,
                "label": entry.label,
                "split": entry.split,
                "path": str(png_path.relative_to(out_dir)),
            }
        )
    labels_csv = out_dir / "labels.csv"
    with labels_csv.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=["id", "label", "split", "path"])
        writer.writeheader()
        writer.writerows(rows)
    return ExportResult(out_dir=out_dir, labels_csv=labels_csv, written=written, rejects=rejects)

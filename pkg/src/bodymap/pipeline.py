"""Three-step generation pipeline: free-form -> JSON draft -> indices.

For each patient the pipeline samples metadata, asks the backend for a
free-form documentation, strips the reasoning trace, converts the rest
into a typed JSON draft under a schema constraint, then discretizes each
palpation finding into (region index, condition index) under a regex +
enumeration constraint.  Batch runs derive one seed per item from the
master seed, so results do not depend on execution order or the degree
of parallelism.
"""

from __future__ import annotations

import json
import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .atlas import CONDITION_COUNT, REGION_COUNT, RegionAtlas
from .client import (
    Backend,
    BackendConfig,
    ConstraintSchema,
    complete_constrained,
    complete_freeform,
    region_index_pattern,
)
from .datasetio import DatasetManifest, ManifestEntry
from .documents import (
    DiagnosisSpec,
    Documentation,
    DocumentationDraft,
    label_for_diagnosis,
)
from .errors import BodymapError, ValidationError
from .metadata import BreedKnowledgeBase, sample_metadata
from .prompts import (
    PromptLibrary,
    build_conversion_prompt,
    build_discretization_prompt,
    build_generation_prompt,
    extract_after_reasoning,
)
from .seeds import derive_rng, derive_seed

log = logging.getLogger(__name__)

__all__ = [
    "DiagnosisSpec",
    "Documentation",
    "DocumentationDraft",
    "GenerationFailure",
    "BatchStats",
    "draft_schema",
    "discretization_schema",
    "validate_documentation",
    "generate_one",
    "generate_batch",
]

#: JSON schema for the typed draft produced by the conversion step.
DRAFT_JSON_SCHEMA = {
    "type": "object",
    "properties": {
        "breed": {"type": "string"},
        "age": {"type": "integer", "minimum": 0},
        "sex": {"enum": ["male", "female"]},
        "weight": {"type": "number"},
        "palpation_findings": {
            "type": "array",
            "items": {"type": "string", "minLength": 1},
        },
    },
    "required": ["breed", "age", "sex", "weight", "palpation_findings"],
    "additionalProperties": False,
}


def draft_schema() -> ConstraintSchema:
    return ConstraintSchema.json_schema(DRAFT_JSON_SCHEMA)


def discretization_schema(atlas: RegionAtlas) -> ConstraintSchema:
    """Two-field schema: regex-constrained region, enumerated condition."""
    return ConstraintSchema.json_schema(
        {
            "type": "object",
            "properties": {
                "region": {
                    "type": "string",
                    "pattern": f"^{region_index_pattern(atlas)}$",
                },
                "condition": {"enum": [str(i) for i in atlas.condition_indices]},
            },
            "required": ["region", "condition"],
            "additionalProperties": False,
        }
    )


class GenerationFailure(BodymapError):
    """One item failed; carries every intermediate text for the rejects log."""

    category = "generation"

    def __init__(self, message: str, intermediates: dict):
        super().__init__(message)
        self.intermediates = intermediates


@dataclass
class BatchStats:
    """Thread-safe counters accumulated over a batch run."""

    duplicates_dropped: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def add_duplicates(self, n: int) -> None:
        if n:
            with self._lock:
                self.duplicates_dropped += n


def validate_documentation(doc: Documentation) -> tuple[Documentation, int]:
    """Enforce index ranges and the one-abnormality-per-region rule.

    Duplicate regions collapse to their first occurrence; the number of
    dropped pairs is returned alongside the validated documentation.
    """
    seen: set[int] = set()
    kept: list[tuple[int, int]] = []
    dropped = 0
    for region_index, condition_index in doc.abnormalities:
        if not 1 <= region_index <= REGION_COUNT:
            raise ValidationError(f"region index {region_index} out of range 1..{REGION_COUNT}")
        if not 1 <= condition_index <= CONDITION_COUNT:
            raise ValidationError(
                f"condition index {condition_index} out of range 1..{CONDITION_COUNT}"
            )
        if region_index in seen:
            dropped += 1
            continue
        seen.add(region_index)
        kept.append((region_index, condition_index))
    if dropped:
        log.warning("documentation %s: dropped %d duplicate-region findings", doc.id, dropped)
    return (
        Documentation(
            id=doc.id,
            metadata=doc.metadata,
            diagnosis=doc.diagnosis,
            abnormalities=tuple(kept),
            provenance=doc.provenance,
            seed=doc.seed,
        ),
        dropped,
    )


def _parse_draft(text: str) -> DocumentationDraft:
    data = json.loads(text)
    return DocumentationDraft(
        breed=data["breed"],
        age=data["age"],
        sex=data["sex"],
        weight=data["weight"],
        palpation_findings=tuple(data["palpation_findings"]),
    )


def generate_one(
    cfg: BackendConfig,
    atlas: RegionAtlas,
    kb: BreedKnowledgeBase,
    diagnosis: DiagnosisSpec,
    seed: int,
    *,
    backend: Backend,
    templates: PromptLibrary,
    few_shot: Sequence[Documentation],
    item_id: str | None = None,
    stats: BatchStats | None = None,
) -> Documentation:
    """Run the full three-step generation for one patient.

    Raises :class:`GenerationFailure` with all intermediate texts when
    any step fails beyond the constrained-call repair policy.
    """
    item_id = item_id or f"llm-{seed:016x}"
    intermediates: dict = {"seed": seed, "diagnosis": diagnosis.name}
    try:
        metadata = sample_metadata(kb, derive_rng("metadata", seed))
        intermediates["metadata"] = f"{metadata.breed}/{metadata.sex}/{metadata.age}/{metadata.weight}"

        gen_prompt = build_generation_prompt(
            atlas,
            list(few_shot),
            templates.instructions,
            metadata,
            diagnosis,
            templates,
            instruct_think=not cfg.reasoning_model,
        )
        freeform = complete_freeform(cfg, gen_prompt, backend)
        intermediates["freeform"] = freeform

        payload_text, _ = extract_after_reasoning(freeform)
        schema = draft_schema()
        conv_prompt = build_conversion_prompt(payload_text.strip(), schema.describe(), templates)
        draft_text = complete_constrained(cfg, conv_prompt, schema, backend)
        intermediates["draft"] = draft_text
        draft = _parse_draft(draft_text)

        disc_schema = discretization_schema(atlas)
        abnormalities: list[tuple[int, int]] = []
        for finding in draft.palpation_findings:
            disc_prompt = build_discretization_prompt(atlas, finding, templates)
            reply = complete_constrained(cfg, disc_prompt, disc_schema, backend)
            parsed = json.loads(reply)
            abnormalities.append((int(parsed["region"]), int(parsed["condition"])))
        intermediates["abnormalities"] = abnormalities

        doc = Documentation(
            id=item_id,
            metadata=metadata,
            diagnosis=diagnosis,
            abnormalities=tuple(abnormalities),
            provenance="generated_llm",
            seed=seed,
        )
        validated, dropped = validate_documentation(doc)
        if stats is not None:
            stats.add_duplicates(dropped)
        return validated
    except BodymapError as exc:
        raise GenerationFailure(f"item {item_id}: {exc}", intermediates) from exc


def pick_diagnosis(
    plan: Sequence[DiagnosisSpec], index: int, master_seed: int, mode: str = "round_robin"
) -> DiagnosisSpec:
    """Item's diagnosis from the plan, independent of execution order."""
    if not plan:
        raise ValidationError("diagnosis plan must not be empty")
    if mode == "round_robin":
        return plan[index % len(plan)]
    if mode == "uniform":
        return derive_rng("diagnosis", master_seed, index).choice(list(plan))
    raise ValidationError(f"unknown plan mode {mode!r}")


def generate_batch(
    cfg: BackendConfig,
    atlas: RegionAtlas,
    kb: BreedKnowledgeBase,
    plan: Sequence[DiagnosisSpec],
    count: int,
    master_seed: int,
    parallelism: int = 1,
    *,
    backend: Backend,
    templates: PromptLibrary,
    few_shot: Sequence[Documentation],
    plan_mode: str = "round_robin",
    stats: BatchStats | None = None,
) -> DatasetManifest:
    """Generate ``count`` documentations; failures go to the rejects list.

    Per-item seeds are hash-derived from the master seed, so the manifest
    is a pure function of (backend behavior, master_seed, plan, count)
    and identical for any parallelism degree.
    """
    if count < 1:
        raise ValidationError("count must be >= 1")
    if parallelism < 1:
        raise ValidationError("parallelism must be >= 1")
    stats = stats if stats is not None else BatchStats()

    def run_item(index: int):
        seed = derive_seed(master_seed, index)
        diagnosis = pick_diagnosis(plan, index, master_seed, plan_mode)
        item_id = f"llm-{index:05d}"
        try:
            doc = generate_one(
                cfg,
                atlas,
                kb,
                diagnosis,
                seed,
                backend=backend,
                templates=templates,
                few_shot=few_shot,
                item_id=item_id,
                stats=stats,
            )
            return index, doc, None
        except GenerationFailure as exc:
            log.warning("generation failed for %s: %s", item_id, exc)
            return index, None, {"id": item_id, "error": str(exc), **exc.intermediates}

    if parallelism == 1:
        results = [run_item(i) for i in range(count)]
    else:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            results = list(pool.map(run_item, range(count)))

    results.sort(key=lambda item: item[0])
    entries = []
    rejects = []
    for index, doc, reject in results:
        if doc is not None:
            entries.append(
                ManifestEntry(
                    id=doc.id,
                    label=label_for_diagnosis(doc.diagnosis.name),
                    doc=doc,
                    seed=doc.seed,
                    provenance=doc.provenance,
                )
            )
        else:
            rejects.append(reject)
    return DatasetManifest(
        entries=tuple(entries),
        atlas_sha256=atlas.file_sha256,
        master_seed=master_seed,
        rejects=tuple(rejects),
    )

"""Documentation record types shared across the pipeline, analysis and IO."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .data import default_few_shot_path
from .errors import ParseError, ValidationError
from .metadata import PatientMetadata

PROVENANCES = ("generated_llm", "rule_based", "real")
LOCATIONS = ("left", "right", "bilateral")

PATELLAR_DIAGNOSIS = "patellar luxation"
LABEL_PATELLAR = "patellar_luxation"
LABEL_OTHER = "other"


@dataclass(frozen=True)
class DiagnosisSpec:
    name: str
    grade: int | None = None  # 1..4 where supported
    location: str | None = None  # left | right | bilateral

    def __post_init__(self):
        if not self.name:
            raise ValidationError("diagnosis name must not be empty")
        if self.grade is not None and self.grade not in (1, 2, 3, 4):
            raise ValidationError(f"diagnosis grade {self.grade} outside 1..4")
        if self.location is not None and self.location not in LOCATIONS:
            raise ValidationError(f"unknown diagnosis location {self.location!r}")


@dataclass(frozen=True)
class DocumentationDraft:
    """Intermediate JSON object between free-form text and discretization."""

    breed: str
    age: int
    sex: str
    weight: float
    palpation_findings: tuple[str, ...]

    def __post_init__(self):
        for finding in self.palpation_findings:
            if not finding.strip():
                raise ValidationError("palpation_findings entries must be non-empty")


@dataclass(frozen=True)
class Documentation:
    """One synthetic patient record with discretized abnormalities."""

    id: str
    metadata: PatientMetadata | None
    diagnosis: DiagnosisSpec
    abnormalities: tuple[tuple[int, int], ...]
    provenance: str
    seed: int

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValidationError(f"unknown provenance {self.provenance!r}")


def label_for_diagnosis(name: str) -> str:
    return LABEL_PATELLAR if name == PATELLAR_DIAGNOSIS else LABEL_OTHER


def doc_to_payload(doc: Documentation) -> dict:
    return {
        "id": doc.id,
        "metadata": None
        if doc.metadata is None
        else {
            "breed": doc.metadata.breed,
            "age": doc.metadata.age,
            "sex": doc.metadata.sex,
            "weight": doc.metadata.weight,
        },
        "diagnosis": {
            "name": doc.diagnosis.name,
            "grade": doc.diagnosis.grade,
            "location": doc.diagnosis.location,
        },
        "abnormalities": [list(pair) for pair in doc.abnormalities],
        "provenance": doc.provenance,
        "seed": doc.seed,
    }


def doc_from_payload(payload: dict) -> Documentation:
    try:
        meta = payload["metadata"]
        metadata = None if meta is None else PatientMetadata(**meta)
        diagnosis = DiagnosisSpec(**payload["diagnosis"])
        return Documentation(
            id=payload["id"],
            metadata=metadata,
            diagnosis=diagnosis,
            abnormalities=tuple((int(r), int(c)) for r, c in payload["abnormalities"]),
            provenance=payload["provenance"],
            seed=payload["seed"],
        )
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed documentation payload: {exc}") from exc


def load_few_shot(path: str | Path | None = None) -> list[Documentation]:
    """The shipped in-context example documentations (grades 1-4)."""
    path = Path(path) if path is not None else default_few_shot_path()
    try:
        raw = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot load few-shot file {path}: {exc}") from exc
    return [doc_from_payload(entry) for entry in raw]

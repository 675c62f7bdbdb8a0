"""Breed knowledge base, patient-metadata sampling, and attribute binning.

The KB stores per-breed, per-sex life expectancy and weight ranges and
backs two things: uniform sampling of synthetic patient metadata, and
the breed-relative weight bins / fixed age bins used by the analysis
reports.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from pathlib import Path

from .data import default_kb_path
from .errors import ParseError, ValidationError

SEXES = ("male", "female")

AGE_BINS = ("bin_1_5", "bin_6_9", "bin_10_20")
WEIGHT_BINS = ("low", "medium", "high")


@dataclass(frozen=True)
class SexStats:
    life_expectancy: float
    w_min: float
    w_max: float


@dataclass(frozen=True)
class BreedRecord:
    breed: str
    male: SexStats
    female: SexStats

    def stats(self, sex: str) -> SexStats:
        if sex not in SEXES:
            raise ValidationError(f"unknown sex {sex!r}")
        return self.male if sex == "male" else self.female


@dataclass(frozen=True)
class PatientMetadata:
    breed: str
    age: int
    sex: str
    weight: float  # kg, one decimal place


@dataclass(frozen=True)
class WeightBins:
    """Breed/sex-relative thirds of the weight range.

    The range R = W_max - W_min splits into intervals of size S = R/3:
    low [W_min, ceil(W_min+S)), medium [ceil(W_min+S), ceil(W_min+2S)],
    high (ceil(W_min+2S), W_max].
    """

    w_min: float
    w_max: float

    @property
    def range(self) -> float:
        return self.w_max - self.w_min

    @property
    def interval_size(self) -> float:
        return self.range / 3.0

    @property
    def low_upper(self) -> float:
        return math.ceil(self.w_min + self.interval_size)

    @property
    def medium_upper(self) -> float:
        return math.ceil(self.w_min + 2 * self.interval_size)

    def bin(self, weight: float) -> str:
        if weight < self.w_min or weight > self.w_max:
            raise ValidationError(
                f"weight {weight} outside breed range [{self.w_min}, {self.w_max}]"
            )
        if self.range == 0:
            # the degenerate one-point range keeps the partition total
            return "medium"
        if weight < self.low_upper:
            return "low"
        if weight <= self.medium_upper:
            return "medium"
        return "high"


class BreedKnowledgeBase:
    """Immutable collection of breed records keyed by breed name."""

    def __init__(self, records: list[BreedRecord]):
        self._records: dict[str, BreedRecord] = {}
        for record in records:
            if record.breed in self._records:
                raise ValidationError(f"duplicate breed {record.breed!r}")
            for sex in SEXES:
                stats = record.stats(sex)
                if stats.w_min <= 0 or stats.w_min > stats.w_max:
                    raise ValidationError(
                        f"breed {record.breed!r} {sex} weights must satisfy 0 < w_min <= w_max"
                    )
                if stats.life_expectancy <= 0:
                    raise ValidationError(
                        f"breed {record.breed!r} {sex} life_expectancy must be positive"
                    )
            self._records[record.breed] = record
        self._names = sorted(self._records)

    def __len__(self) -> int:
        return len(self._records)

    def __iter__(self):
        return iter(self._records.values())

    @property
    def breeds(self) -> list[str]:
        return list(self._names)

    def record(self, breed: str) -> BreedRecord:
        try:
            return self._records[breed]
        except KeyError:
            raise ValidationError(f"unknown breed {breed!r}") from None


def load_kb(path: str | Path | None = None) -> BreedKnowledgeBase:
    """Load a breed KB file (the shipped default if ``path`` is None)."""
    path = Path(path) if path is not None else default_kb_path()
    try:
        raw = json.loads(path.read_text())
    except OSError as exc:
        raise ParseError(f"cannot read KB file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed KB file {path}: {exc}") from exc
    records = []
    try:
        for entry in raw:
            records.append(
                BreedRecord(
                    breed=entry["breed"],
                    male=SexStats(**entry["male"]),
                    female=SexStats(**entry["female"]),
                )
            )
    except (KeyError, TypeError) as exc:
        raise ParseError(f"KB file {path} is missing fields: {exc}") from exc
    return BreedKnowledgeBase(records)


def max_age(record: BreedRecord, sex: str) -> int:
    return max(1, math.ceil(record.stats(sex).life_expectancy))


def sample_metadata(kb: BreedKnowledgeBase, rng: random.Random) -> PatientMetadata:
    """Uniformly sample breed, sex, age and weight for one synthetic patient.

    Age is a uniform integer in [1, ceil(life expectancy)], weight a
    uniform real in [W_min, W_max] rounded to 0.1 kg.  Deterministic for
    a given rng state; the call order below is part of the contract.
    """
    if len(kb) == 0:
        raise ValidationError("cannot sample from an empty knowledge base")
    breed = rng.choice(kb.breeds)
    sex = rng.choice(list(SEXES))
    record = kb.record(breed)
    stats = record.stats(sex)
    age = rng.randint(1, max_age(record, sex))
    weight = round(rng.uniform(stats.w_min, stats.w_max), 1)
    # rounding may nudge past the range edge; clamp to the 0.1 grid inside it
    lo = math.ceil(stats.w_min * 10 - 1e-9) / 10
    hi = math.floor(stats.w_max * 10 + 1e-9) / 10
    weight = min(max(weight, lo), hi) if lo <= hi else stats.w_min
    metadata = PatientMetadata(breed=breed, age=age, sex=sex, weight=weight)
    validate_metadata(metadata, kb)
    return metadata


def validate_metadata(metadata: PatientMetadata, kb: BreedKnowledgeBase) -> None:
    record = kb.record(metadata.breed)
    stats = record.stats(metadata.sex)
    if metadata.age < 1 or metadata.age > max_age(record, metadata.sex):
        raise ValidationError(
            f"age {metadata.age} outside [1, {max_age(record, metadata.sex)}] for "
            f"{metadata.breed} ({metadata.sex})"
        )
    if not (stats.w_min - 0.05 <= metadata.weight <= stats.w_max + 0.05):
        raise ValidationError(
            f"weight {metadata.weight} outside [{stats.w_min}, {stats.w_max}] for "
            f"{metadata.breed} ({metadata.sex})"
        )


def weight_bins(record: BreedRecord, sex: str) -> WeightBins:
    stats = record.stats(sex)
    return WeightBins(w_min=stats.w_min, w_max=stats.w_max)


def weight_bin(record: BreedRecord, sex: str, weight: float) -> str:
    """Bin a weight into low/medium/high relative to the breed/sex range."""
    return weight_bins(record, sex).bin(weight)


def age_bin(age: int) -> str:
    """Fixed age bins: 1-5, 6-9, 10-20 (ages above 20 clamp into the top bin)."""
    if age < 1:
        raise ValidationError(f"age {age} must be >= 1")
    if age <= 5:
        return "bin_1_5"
    if age <= 9:
        return "bin_6_9"
    return "bin_10_20"

"""Hand-written rule-based documentation generators (ablation baseline).

Patellar rule: pick left/right/bilateral; each affected knee joint gets a
chronic or acute condition; the same-side hip joint gets one too with 20%
probability; 2-8 soft-tissue abnormalities (doubled when bilateral) are
drawn without replacement from the side-tagged knee/thigh/lower-leg
pools.  Other-diagnosis rule: 3-25 abnormalities over uniformly random
distinct regions with uniformly random conditions.
"""

from __future__ import annotations

import random

from .atlas import RegionAtlas
from .documents import DiagnosisSpec, Documentation, PATELLAR_DIAGNOSIS
from .errors import ValidationError

KNEE_TAG = "knee_joint"
HIP_TAG = "hip_joint"
SOFT_TISSUE_TAG = "patellar_soft_tissue"

HIP_PROBABILITY = 0.2
SOFT_TISSUE_RANGE = (2, 8)
OTHER_COUNT_RANGE = (3, 25)

ACUTE_OR_CHRONIC_LABELS = ("acute inflammation", "chronic change")
#: Conditions assigned to soft-tissue findings (the joint-damage pair is
#: reserved for the knee/hip joints themselves).
SOFT_TISSUE_CONDITION_LABELS = ("pain", "tension", "swelling", "warmth", "atrophy")


def _condition_indices(atlas: RegionAtlas, labels: tuple[str, ...]) -> list[int]:
    return [atlas.condition_by_label(label).index for label in labels]


def _tagged_index(atlas: RegionAtlas, tag: str, side: str) -> int:
    regions = atlas.regions_with_tag(tag, side)
    if not regions:
        raise ValidationError(f"atlas has no region tagged {tag!r} on side {side!r}")
    return regions[0].index


def rule_based_patellar(
    atlas: RegionAtlas, rng: random.Random, doc_id: str = "rule-patellar", seed: int = 0
) -> Documentation:
    """One rule-based patellar-luxation documentation."""
    location = rng.choice(["left", "right", "bilateral"])
    sides = ["left", "right"] if location == "bilateral" else [location]
    joint_conds = _condition_indices(atlas, ACUTE_OR_CHRONIC_LABELS)
    soft_conds = _condition_indices(atlas, SOFT_TISSUE_CONDITION_LABELS)

    abnormalities: list[tuple[int, int]] = []
    for side in sides:
        abnormalities.append((_tagged_index(atlas, KNEE_TAG, side), rng.choice(joint_conds)))
    # independent 20% hip involvement per affected side
    for side in sides:
        if rng.random() < HIP_PROBABILITY:
            abnormalities.append((_tagged_index(atlas, HIP_TAG, side), rng.choice(joint_conds)))

    count = rng.randint(*SOFT_TISSUE_RANGE)
    if location == "bilateral":
        count *= 2
    pool = sorted(
        {r.index for side in sides for r in atlas.regions_with_tag(SOFT_TISSUE_TAG, side)}
    )
    if count > len(pool):
        raise ValidationError(
            f"soft-tissue pool too small: need {count}, have {len(pool)}"
        )
    for region_index in rng.sample(pool, count):
        abnormalities.append((region_index, rng.choice(soft_conds)))

    return Documentation(
        id=doc_id,
        metadata=None,
        diagnosis=DiagnosisSpec(name=PATELLAR_DIAGNOSIS, location=location),
        abnormalities=tuple(abnormalities),
        provenance="rule_based",
        seed=seed,
    )


def rule_based_other(
    atlas: RegionAtlas, rng: random.Random, doc_id: str = "rule-other", seed: int = 0
) -> Documentation:
    """One rule-based documentation for the unspecific 'other' class."""
    count = rng.randint(*OTHER_COUNT_RANGE)
    regions = rng.sample(atlas.region_indices, count)
    abnormalities = tuple(
        (region_index, rng.choice(atlas.condition_indices)) for region_index in regions
    )
    return Documentation(
        id=doc_id,
        metadata=None,
        diagnosis=DiagnosisSpec(name="other"),
        abnormalities=abnormalities,
        provenance="rule_based",
        seed=seed,
    )

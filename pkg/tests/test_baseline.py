import random

import pytest

from bodymap.baseline import rule_based_other, rule_based_patellar
from bodymap.errors import ValidationError
from bodymap.pipeline import validate_documentation


class ForcedRng:
    """Deterministic stand-in steering every branch of the patellar rule."""

    def __init__(self, location="left", hip=False, soft_count=2):
        self.location = location
        self.hip = hip
        self.soft_count = soft_count

    def choice(self, seq):
        if "bilateral" in seq:
            return self.location
        return seq[0]

    def random(self):
        return 0.0 if self.hip else 0.99

    def randint(self, a, b):
        return self.soft_count

    def sample(self, population, k):
        return list(population)[:k]


class TestPatellar:
    def test_minimal_unilateral_case(self, atlas):
        doc = rule_based_patellar(atlas, ForcedRng("left", hip=False, soft_count=2))
        assert len(doc.abnormalities) == 3  # 1 knee + 2 soft tissue
        regions = [r for r, _ in doc.abnormalities]
        assert atlas.region_by_label("left knee joint").index in regions
        assert atlas.region_by_label("left hip joint").index not in regions

    def test_hip_assignment_same_side(self, atlas):
        doc = rule_based_patellar(atlas, ForcedRng("right", hip=True, soft_count=2))
        regions = [r for r, _ in doc.abnormalities]
        assert atlas.region_by_label("right knee joint").index in regions
        assert atlas.region_by_label("right hip joint").index in regions
        assert len(doc.abnormalities) == 4

    def test_bilateral_extremes(self, atlas):
        low = rule_based_patellar(atlas, ForcedRng("bilateral", hip=False, soft_count=2))
        assert len(low.abnormalities) == 2 + 0 + 4  # knees + hips + doubled soft tissue
        high = rule_based_patellar(atlas, ForcedRng("bilateral", hip=True, soft_count=8))
        assert len(high.abnormalities) == 2 + 2 + 16 == 20

    def test_joint_conditions_are_acute_or_chronic(self, atlas):
        acute = atlas.condition_by_label("acute inflammation").index
        chronic = atlas.condition_by_label("chronic change").index
        knee = atlas.region_by_label("left knee joint").index
        hip = atlas.region_by_label("left hip joint").index
        rng = random.Random(5)
        for _ in range(300):
            doc = rule_based_patellar(atlas, rng)
            for region, condition in doc.abnormalities:
                if region in (knee, hip) or region in (
                    atlas.region_by_label("right knee joint").index,
                    atlas.region_by_label("right hip joint").index,
                ):
                    assert condition in (acute, chronic)
                else:
                    assert condition not in (acute, chronic)

    def test_no_repeated_regions_in_1000_docs(self, atlas):
        rng = random.Random(17)
        for _ in range(1000):
            doc = rule_based_patellar(atlas, rng)
            regions = [r for r, _ in doc.abnormalities]
            assert len(set(regions)) == len(regions)

    def test_counts_within_rule_bounds(self, atlas):
        rng = random.Random(29)
        for _ in range(2000):
            doc = rule_based_patellar(atlas, rng)
            n = len(doc.abnormalities)
            if doc.diagnosis.location == "bilateral":
                assert 6 <= n <= 20
            else:
                assert 3 <= n <= 10

    def test_outputs_are_validation_clean(self, atlas):
        rng = random.Random(31)
        for _ in range(200):
            doc = rule_based_patellar(atlas, rng)
            validated, dropped = validate_documentation(doc)
            assert dropped == 0
            assert validated == doc

    def test_soft_tissue_stays_on_affected_sides(self, atlas):
        rng = random.Random(37)
        for _ in range(300):
            doc = rule_based_patellar(atlas, rng)
            if doc.diagnosis.location == "bilateral":
                continue
            side = doc.diagnosis.location
            for region_index, _ in doc.abnormalities:
                assert atlas.region(region_index).side == side

    def test_determinism_under_seed(self, atlas):
        a = rule_based_patellar(atlas, random.Random(99))
        b = rule_based_patellar(atlas, random.Random(99))
        assert a == b


class TestOther:
    def test_counts_in_range(self, atlas):
        rng = random.Random(41)
        for _ in range(2000):
            doc = rule_based_other(atlas, rng)
            assert 3 <= len(doc.abnormalities) <= 25

    def test_indices_in_domain(self, atlas):
        rng = random.Random(43)
        for _ in range(500):
            doc = rule_based_other(atlas, rng)
            for region, condition in doc.abnormalities:
                assert 1 <= region <= 214
                assert 1 <= condition <= 7

    def test_no_duplicate_regions(self, atlas):
        rng = random.Random(47)
        for _ in range(1000):
            doc = rule_based_other(atlas, rng)
            regions = [r for r, _ in doc.abnormalities]
            assert len(set(regions)) == len(regions)

    def test_validation_clean(self, atlas):
        rng = random.Random(53)
        for _ in range(200):
            doc = rule_based_other(atlas, rng)
            _, dropped = validate_documentation(doc)
            assert dropped == 0

    def test_diagnosis_label(self, atlas):
        doc = rule_based_other(atlas, random.Random(1))
        assert doc.diagnosis.name == "other"
        assert doc.provenance == "rule_based"


def test_missing_tags_raise(atlas):
    import dataclasses

    stripped_regions = {
        i: dataclasses.replace(r, tags=()) for i, r in atlas.regions.items()
    }
    bare = dataclasses.replace(atlas, regions=stripped_regions)
    with pytest.raises(ValidationError, match="tagged"):
        rule_based_patellar(bare, random.Random(0))

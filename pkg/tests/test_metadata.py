import json
import math
import random

import pytest
from hypothesis import given, strategies as st

from bodymap.errors import ParseError, ValidationError
from bodymap.metadata import (
    BreedKnowledgeBase,
    BreedRecord,
    SexStats,
    age_bin,
    load_kb,
    max_age,
    sample_metadata,
    validate_metadata,
    weight_bin,
    weight_bins,
)


def record(breed="Testhund", w_min=20.0, w_max=32.0, life=12.0):
    stats = SexStats(life_expectancy=life, w_min=w_min, w_max=w_max)
    return BreedRecord(breed=breed, male=stats, female=stats)


class TestLoad:
    def test_shipped_kb(self, kb):
        assert len(kb) == 149

    def test_invariants_hold_for_all_records(self, kb):
        for rec in kb:
            for sex in ("male", "female"):
                stats = rec.stats(sex)
                assert 0 < stats.w_min <= stats.w_max
                assert stats.life_expectancy > 0

    def test_wmin_greater_than_wmax_rejected(self):
        with pytest.raises(ValidationError, match="w_min"):
            BreedKnowledgeBase([record(w_min=30.0, w_max=20.0)])

    def test_duplicate_breed_rejected(self):
        with pytest.raises(ValidationError, match="duplicate breed"):
            BreedKnowledgeBase([record(), record()])

    def test_nonpositive_life_rejected(self):
        with pytest.raises(ValidationError, match="life_expectancy"):
            BreedKnowledgeBase([record(life=0.0)])

    def test_malformed_file(self, tmp_path):
        path = tmp_path / "kb.json"
        path.write_text("[{]")
        with pytest.raises(ParseError):
            load_kb(path)

    def test_missing_fields(self, tmp_path):
        path = tmp_path / "kb.json"
        path.write_text(json.dumps([{"breed": "X", "male": {}}]))
        with pytest.raises(ParseError):
            load_kb(path)


class TestSampling:
    def test_same_seed_same_metadata(self, kb):
        a = sample_metadata(kb, random.Random(99))
        b = sample_metadata(kb, random.Random(99))
        assert a == b

    def test_degenerate_weight_range(self):
        kb1 = BreedKnowledgeBase([record(w_min=10.0, w_max=10.0)])
        for seed in range(20):
            assert sample_metadata(kb1, random.Random(seed)).weight == 10.0

    def test_empty_kb(self):
        with pytest.raises(ValidationError):
            sample_metadata(BreedKnowledgeBase([]), random.Random(0))

    def test_breed_frequency_two_breeds(self):
        kb2 = BreedKnowledgeBase([record("A"), record("B")])
        rng = random.Random(123)
        n = 10_000
        hits = sum(sample_metadata(kb2, rng).breed == "A" for _ in range(n))
        assert 0.45 <= hits / n <= 0.55

    def test_sex_frequency(self, kb):
        rng = random.Random(7)
        n = 10_000
        males = sum(sample_metadata(kb, rng).sex == "male" for _ in range(n))
        assert 0.45 <= males / n <= 0.55

    def test_age_marginal_uniform(self):
        kb1 = BreedKnowledgeBase([record(life=10.0)])
        rng = random.Random(42)
        n = 10_000
        counts = {}
        for _ in range(n):
            md = sample_metadata(kb1, rng)
            counts[md.age] = counts.get(md.age, 0) + 1
        assert set(counts) == set(range(1, 11))
        for age, c in counts.items():
            assert abs(c / n - 0.1) <= 0.05, (age, c)

    def test_samples_satisfy_invariants(self, kb):
        rng = random.Random(3)
        for _ in range(500):
            md = sample_metadata(kb, rng)
            validate_metadata(md, kb)
            assert md.weight == round(md.weight, 1)
            assert md.age >= 1

    def test_age_respects_life_expectancy_ceiling(self):
        kb1 = BreedKnowledgeBase([record(life=7.3)])
        rng = random.Random(1)
        ages = {sample_metadata(kb1, rng).age for _ in range(2000)}
        assert max(ages) == math.ceil(7.3)
        assert min(ages) == 1


class TestWeightBins:
    def test_worked_example(self):
        rec = record(w_min=20.0, w_max=32.0)
        bins = weight_bins(rec, "male")
        assert bins.range == 12.0
        assert bins.interval_size == 4.0
        assert bins.low_upper == 24
        assert bins.medium_upper == 28
        assert weight_bin(rec, "male", 23.9) == "low"
        assert weight_bin(rec, "male", 24.0) == "medium"
        assert weight_bin(rec, "male", 28.0) == "medium"
        assert weight_bin(rec, "male", 28.1) == "high"

    def test_lower_boundary_is_low(self):
        rec = record(w_min=20.0, w_max=32.0)
        assert weight_bin(rec, "male", 20.0) == "low"

    def test_degenerate_range_is_medium(self):
        rec = record(w_min=10.0, w_max=10.0)
        assert weight_bin(rec, "male", 10.0) == "medium"

    def test_out_of_range_weight(self):
        rec = record(w_min=20.0, w_max=32.0)
        with pytest.raises(ValidationError):
            weight_bin(rec, "male", 19.9)
        with pytest.raises(ValidationError):
            weight_bin(rec, "male", 32.1)

    @given(
        st.integers(min_value=5, max_value=400),
        st.integers(min_value=0, max_value=300),
        st.floats(min_value=0.0, max_value=1.0),
    )
    def test_partition_property(self, wmin10, span10, frac):
        w_min = wmin10 / 10.0
        w_max = w_min + span10 / 10.0
        weight = round(w_min + (w_max - w_min) * frac, 1)
        weight = min(max(weight, w_min), w_max)
        rec = record(w_min=w_min, w_max=w_max)
        # exactly one bin matches and boundaries depend only on the range
        result = weight_bin(rec, "female", weight)
        bins = weight_bins(rec, "female")
        if bins.range == 0:
            assert result == "medium"
            return
        memberships = [
            weight < bins.low_upper,
            bins.low_upper <= weight <= bins.medium_upper,
            weight > bins.medium_upper,
        ]
        assert memberships.count(True) == 1
        assert result == ("low", "medium", "high")[memberships.index(True)]


class TestAgeBins:
    @pytest.mark.parametrize(
        "age,expected",
        [(1, "bin_1_5"), (5, "bin_1_5"), (6, "bin_6_9"), (9, "bin_6_9"),
         (10, "bin_10_20"), (20, "bin_10_20"), (25, "bin_10_20")],
    )
    def test_bins(self, age, expected):
        assert age_bin(age) == expected

    def test_age_below_one_rejected(self):
        with pytest.raises(ValidationError):
            age_bin(0)


def test_max_age_rounds_up():
    assert max_age(record(life=7.3), "male") == 8
    assert max_age(record(life=12.0), "male") == 12

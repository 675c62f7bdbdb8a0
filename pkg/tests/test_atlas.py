import json

import pytest
from hypothesis import given, strategies as st

from bodymap.atlas import (
    CONDITION_COUNT,
    EMPTY_DOC_TEXT,
    REGION_COUNT,
    encode_abnormalities,
    load_atlas,
    parse_documentation_text,
)
from bodymap.errors import ParseError, ValidationError


def reload_mutated(atlas_raw, tmp_path, mutate):
    raw = json.loads(json.dumps(atlas_raw))
    mutate(raw)
    path = tmp_path / "atlas.json"
    path.write_text(json.dumps(raw))
    # template path is relative to the atlas file
    (tmp_path / "template.png").write_bytes(b"\x89PNG\r\n\x1a\n")
    return load_atlas(path)


class TestLoad:
    def test_shipped_atlas_counts(self, atlas):
        assert len(atlas.regions) == REGION_COUNT
        assert len(atlas.conditions) == CONDITION_COUNT

    def test_all_indices_resolve(self, atlas):
        for i in range(1, REGION_COUNT + 1):
            atlas.region(i)
        for i in range(1, CONDITION_COUNT + 1):
            atlas.condition(i)

    @pytest.mark.parametrize("index", [0, -3, 215, 9999])
    def test_unknown_region_index_fails(self, atlas, index):
        with pytest.raises(ValidationError):
            atlas.region(index)

    @pytest.mark.parametrize("index", [0, 8, 100])
    def test_unknown_condition_index_fails(self, atlas, index):
        with pytest.raises(ValidationError):
            atlas.condition(index)

    def test_malformed_file(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(ParseError):
            load_atlas(path)

    def test_duplicate_region_index(self, atlas_raw, tmp_path):
        def mutate(raw):
            raw["regions"][1]["index"] = 12

        with pytest.raises(ValidationError, match="duplicate region index 12"):
            reload_mutated(atlas_raw, tmp_path, mutate)

    def test_zero_radius_circle(self, atlas_raw, tmp_path):
        def mutate(raw):
            circle = next(r for r in raw["regions"] if r["shape"] == "circle")
            circle["geometry"]["r"] = 0

        with pytest.raises(ValidationError, match="degenerate"):
            reload_mutated(atlas_raw, tmp_path, mutate)

    def test_zero_width_rectangle(self, atlas_raw, tmp_path):
        def mutate(raw):
            rect = next(r for r in raw["regions"] if r["shape"] == "rectangle")
            rect["geometry"]["w"] = 0

        with pytest.raises(ValidationError, match="degenerate"):
            reload_mutated(atlas_raw, tmp_path, mutate)

    def test_out_of_canvas_geometry(self, atlas_raw, tmp_path):
        def mutate(raw):
            raw["regions"][0]["geometry"]["x"] = raw["template"]["width"] - 1

        with pytest.raises(ValidationError, match="outside the canvas"):
            reload_mutated(atlas_raw, tmp_path, mutate)

    def test_wrong_region_count(self, atlas_raw, tmp_path):
        def mutate(raw):
            raw["regions"] = raw["regions"][:-1]

        with pytest.raises(ValidationError, match="214"):
            reload_mutated(atlas_raw, tmp_path, mutate)

    def test_wrong_condition_count(self, atlas_raw, tmp_path):
        def mutate(raw):
            raw["conditions"] = raw["conditions"][:-1]

        with pytest.raises(ValidationError, match="7"):
            reload_mutated(atlas_raw, tmp_path, mutate)

    def test_missing_mirror_twin(self, atlas_raw, tmp_path):
        def mutate(raw):
            region = next(r for r in raw["regions"] if r["label"] == "left knee joint")
            region["label"] = "left knee capsule"

        with pytest.raises(ValidationError, match="twin"):
            reload_mutated(atlas_raw, tmp_path, mutate)

    def test_acute_must_be_red(self, atlas_raw, tmp_path):
        def mutate(raw):
            cond = next(c for c in raw["conditions"] if c["label"] == "acute inflammation")
            cond["color"] = [10, 10, 10]

        with pytest.raises(ValidationError, match="red"):
            reload_mutated(atlas_raw, tmp_path, mutate)

    def test_duplicate_condition_colors(self, atlas_raw, tmp_path):
        def mutate(raw):
            raw["conditions"][0]["color"] = raw["conditions"][1]["color"]

        with pytest.raises(ValidationError, match="distinct"):
            reload_mutated(atlas_raw, tmp_path, mutate)

    def test_condition_palette(self, atlas):
        assert atlas.condition_by_label("acute inflammation").color == (255, 0, 0)
        assert atlas.condition_by_label("chronic change").color == (0, 0, 0)

    def test_mirroring_holds_everywhere(self, atlas):
        for region in atlas.regions.values():
            if region.side == "midline":
                continue
            other = "right" if region.side == "left" else "left"
            base = region.label.split(" ", 1)[1]
            twin = atlas.region_by_label(f"{other} {base}")
            assert twin.side == other


class TestEncode:
    def test_single_pair_against_shipped_atlas(self, atlas):
        assert atlas.region(12).label == "left knee joint"
        assert atlas.condition(3).label == "acute inflammation"
        assert encode_abnormalities([(12, 3)], atlas) == "left knee joint: acute inflammation"

    def test_empty_doc(self, atlas):
        assert encode_abnormalities([], atlas) == EMPTY_DOC_TEXT

    def test_ordering_by_region_index(self, atlas):
        text = encode_abnormalities([(40, 1), (7, 2)], atlas)
        lines = text.splitlines()
        assert lines[0].startswith(atlas.region(7).label)
        assert lines[1].startswith(atlas.region(40).label)

    def test_ordering_matches_sort_oracle(self, atlas):
        import random

        rng = random.Random(5)
        pairs = [(r, rng.randint(1, 7)) for r in rng.sample(range(1, 215), 20)]
        text = encode_abnormalities(pairs, atlas)
        labels = [line.split(": ")[0] for line in text.splitlines()]
        expected = [atlas.region(r).label for r, _ in sorted(pairs)]
        assert labels == expected

    def test_unknown_index_fails(self, atlas):
        with pytest.raises(ValidationError):
            encode_abnormalities([(215, 1)], atlas)
        with pytest.raises(ValidationError):
            encode_abnormalities([(1, 8)], atlas)

    @given(
        st.dictionaries(
            st.integers(min_value=1, max_value=214),
            st.integers(min_value=1, max_value=7),
            max_size=30,
        )
    )
    def test_round_trip(self, pairs):
        atlas = load_atlas()
        abnormalities = sorted(pairs.items())
        text = encode_abnormalities(abnormalities, atlas)
        assert parse_documentation_text(text, atlas) == abnormalities

    def test_injective_on_distinct_sets(self, atlas):
        import random

        rng = random.Random(11)
        seen = {}
        for _ in range(200):
            pairs = frozenset(
                (r, rng.randint(1, 7)) for r in rng.sample(range(1, 215), rng.randint(0, 8))
            )
            text = encode_abnormalities(sorted(pairs), atlas)
            if text in seen:
                assert seen[text] == pairs
            seen[text] = pairs

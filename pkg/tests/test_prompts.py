import random

import pytest

from bodymap.documents import DiagnosisSpec
from bodymap.errors import ConfigError, ValidationError
from bodymap.metadata import PatientMetadata, sample_metadata
from bodymap.prompts import (
    GENERATION_SECTION_MARKERS,
    THINK_INSTRUCTION,
    PromptTemplate,
    build_conversion_prompt,
    build_discretization_prompt,
    build_generation_prompt,
    extract_after_reasoning,
    load_prompts,
)

DIAG = DiagnosisSpec(name="patellar luxation", grade=2, location="left")
META = PatientMetadata(breed="Beagle", age=4, sex="male", weight=10.3)


class TestPromptTemplate:
    def test_render_fills_placeholders(self):
        t = PromptTemplate("a {{x}} b {{y}}")
        assert t.render(x="1", y="2") == "a 1 b 2"

    def test_missing_placeholder_fails(self):
        with pytest.raises(ValidationError, match="missing"):
            PromptTemplate("a {{x}}").render()

    def test_unknown_value_fails(self):
        with pytest.raises(ValidationError, match="unknown"):
            PromptTemplate("a {{x}}").render(x="1", z="2")

    def test_required_placeholders(self):
        assert PromptTemplate("{{x}} {{y}} {{x}}").required_placeholders == {"x", "y"}


class TestLoadPrompts:
    def test_missing_template_file_fails_fast(self, tmp_path):
        (tmp_path / "generation.txt").write_text("{{conditions}}")
        with pytest.raises(ConfigError, match="missing prompt template"):
            load_prompts(tmp_path)


class TestGenerationPrompt:
    def build(self, atlas, few_shot, templates, metadata=META, think=True):
        return build_generation_prompt(
            atlas, few_shot, templates.instructions, metadata, DIAG, templates,
            instruct_think=think,
        )

    def test_six_sections_in_order(self, atlas, few_shot, templates):
        prompt = self.build(atlas, few_shot, templates)
        positions = [prompt.find(marker) for marker in GENERATION_SECTION_MARKERS]
        assert all(p >= 0 for p in positions)
        assert positions == sorted(positions)

    def test_all_conditions_and_regions_listed(self, atlas, few_shot, templates):
        prompt = self.build(atlas, few_shot, templates)
        for i in atlas.condition_indices:
            assert f"{i}. {atlas.condition(i).label}" in prompt
        for i in atlas.region_indices:
            assert f"{i}. {atlas.region(i).label}" in prompt

    def test_quoted_instruction_constraints_present(self, atlas, few_shot, templates):
        prompt = self.build(atlas, few_shot, templates)
        assert "Each region can only have one abnormality (condition)." in prompt
        assert "Abnormalities are either present or absent, not mild or severe." in prompt

    def test_breed_only_in_final_section(self, atlas, few_shot, templates):
        prompt = self.build(atlas, few_shot, templates)
        tail_start = prompt.find(GENERATION_SECTION_MARKERS[-1])
        assert "Beagle" not in prompt[:tail_start]
        assert prompt[tail_start:].count("Beagle") == 1

    def test_dynamic_tail_only(self, atlas, few_shot, templates, kb):
        other_meta = sample_metadata(kb, random.Random(3))
        a = self.build(atlas, few_shot, templates)
        b = self.build(atlas, few_shot, templates, metadata=other_meta)
        tail = a.find(GENERATION_SECTION_MARKERS[-1])
        assert a[:tail] == b[:tail]

    def test_think_instruction_toggle(self, atlas, few_shot, templates):
        with_think = self.build(atlas, few_shot, templates, think=True)
        without = self.build(atlas, few_shot, templates, think=False)
        assert THINK_INSTRUCTION in with_think
        assert THINK_INSTRUCTION not in without

    def test_few_shot_encoded_and_spanning_9_to_51(self, atlas, few_shot, templates):
        counts = sorted(len(d.abnormalities) for d in few_shot)
        assert counts[0] == 9 and counts[-1] == 51
        prompt = self.build(atlas, few_shot, templates)
        assert "left knee joint: acute inflammation" in prompt

    def test_unresolvable_few_shot_index_fails(self, atlas, few_shot, templates):
        import dataclasses

        broken = dataclasses.replace(few_shot[0], abnormalities=((999, 1),))
        with pytest.raises(ValidationError):
            self.build(atlas, [broken], templates)


class TestConversionPrompt:
    def test_contains_inputs_exactly_once(self, templates):
        prompt = build_conversion_prompt("abc-doc-text", "THE-SCHEMA", templates)
        assert prompt.count("abc-doc-text") == 1
        assert prompt.count("THE-SCHEMA") == 1

    def test_empty_freeform_fails(self, templates):
        with pytest.raises(ValidationError):
            build_conversion_prompt("   ", "schema", templates)

    def test_placeholders_after_all_static_text(self, templates):
        text = templates.conversion.text
        first = text.find("{{")
        between = text[first:].replace("{{schema}}", "").replace("{{documentation}}", "")
        assert between.strip() == ""

    def test_prefix_stable_across_documents(self, templates):
        a = build_conversion_prompt("doc one", "S", templates)
        b = build_conversion_prompt("doc two", "S", templates)
        assert a[: a.find("doc one")] == b[: b.find("doc two")]


class TestDiscretizationPrompt:
    def test_lists_all_regions_and_conditions(self, atlas, templates):
        prompt = build_discretization_prompt(atlas, "pain in left thigh", templates)
        region_lines = [l for l in prompt.splitlines() if l.split(". ")[0].isdigit()]
        assert len(region_lines) == 214 + 7

    def test_abnormality_at_end(self, atlas, templates):
        prompt = build_discretization_prompt(atlas, "pain in left thigh", templates)
        assert prompt.endswith("pain in left thigh")

    def test_identical_prefix_for_caching(self, atlas, templates):
        a = build_discretization_prompt(atlas, "swelling left knee", templates)
        b = build_discretization_prompt(atlas, "tension right biceps", templates)
        prefix = a[: a.find("swelling")]
        assert b.startswith(prefix)

    def test_empty_abnormality_fails(self, atlas, templates):
        with pytest.raises(ValidationError):
            build_discretization_prompt(atlas, "", templates)


class TestExtractAfterReasoning:
    def test_single_delimiter(self):
        assert extract_after_reasoning("plan</think>result") == ("result", True)

    def test_no_delimiter(self):
        assert extract_after_reasoning("result") == ("result", False)

    def test_last_occurrence_wins(self):
        assert extract_after_reasoning("a</think>b</think>c") == ("c", True)

    def test_custom_delimiter(self):
        assert extract_after_reasoning("x[DONE]y", "[DONE]") == ("y", True)

"""Prompt construction for the three-step generation flow.

All three prompts keep their dynamic content strictly at the end so a
backend with prefix caching re-uses the long static head: the generation
prompt ends with the sampled patient block, the conversion prompt with
the schema and free-form text, and the discretization prompt with the
single abnormality description.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING

from .atlas import RegionAtlas, encode_documentation_as_text
from .data import default_prompts_dir
from .errors import ConfigError, ValidationError

if TYPE_CHECKING:  # pragma: no cover
    from .metadata import PatientMetadata
    from .pipeline import DiagnosisSpec, Documentation

_PLACEHOLDER = re.compile(r"\{\{(\w+)\}\}")

#: Ordered headers of the six generation-prompt components.
GENERATION_SECTION_MARKERS = (
    "## 1. Task definition and background",
    "## 2. Conditions",
    "## 3. Regions",
    "## 4. Example documentations",
    "## 5. Instructions",
    "## 6. Patient",
)

#: Appended to the instruction set for backends without built-in reasoning.
THINK_INSTRUCTION = (
    "- First think step by step about plausible findings for this patient, enclosed "
    "in <think> and </think>. After </think>, output only the documentation lines."
)

REASONING_DELIMITER = "</think>"

TEMPLATE_FILES = ("generation.txt", "instructions.txt", "conversion.txt", "discretization.txt")


@dataclass(frozen=True)
class PromptTemplate:
    """Text with ``{{name}}`` placeholders; rendering must fill all of them."""

    text: str

    @property
    def required_placeholders(self) -> frozenset[str]:
        return frozenset(_PLACEHOLDER.findall(self.text))

    def render(self, **values: str) -> str:
        required = self.required_placeholders
        missing = required - set(values)
        if missing:
            raise ValidationError(f"missing placeholder values: {sorted(missing)}")
        unknown = set(values) - required
        if unknown:
            raise ValidationError(f"unknown placeholder values: {sorted(unknown)}")
        rendered = _PLACEHOLDER.sub(lambda m: values[m.group(1)], self.text)
        if _PLACEHOLDER.search(rendered):
            raise ValidationError("placeholder markers remain after rendering")
        return rendered


@dataclass(frozen=True)
class PromptLibrary:
    generation: PromptTemplate
    instructions: str
    conversion: PromptTemplate
    discretization: PromptTemplate


def load_prompts(directory: str | Path | None = None) -> PromptLibrary:
    """Load the template files; fails fast if any is missing."""
    directory = Path(directory) if directory is not None else default_prompts_dir()
    texts = {}
    for name in TEMPLATE_FILES:
        path = directory / name
        if not path.is_file():
            raise ConfigError(f"missing prompt template file: {path}")
        texts[name] = path.read_text()
    return PromptLibrary(
        generation=PromptTemplate(texts["generation.txt"]),
        instructions=texts["instructions.txt"].rstrip("\n"),
        conversion=PromptTemplate(texts["conversion.txt"]),
        discretization=PromptTemplate(texts["discretization.txt"]),
    )


def condition_lines(atlas: RegionAtlas) -> str:
    return "\n".join(
        f"{i}. {atlas.condition(i).label}" for i in atlas.condition_indices
    )


def region_lines(atlas: RegionAtlas) -> str:
    return "\n".join(f"{i}. {atlas.region(i).label}" for i in atlas.region_indices)


def diagnosis_lines(diagnosis: "DiagnosisSpec") -> str:
    lines = [f"Diagnosis: {diagnosis.name}"]
    if diagnosis.grade is not None:
        lines.append(f"Grade: {diagnosis.grade}")
    if diagnosis.location is not None:
        lines.append(f"Location: {diagnosis.location}")
    return "\n".join(lines)


def patient_block(metadata: "PatientMetadata", diagnosis: "DiagnosisSpec") -> str:
    """The dynamic tail of the generation prompt."""
    return (
        f"Breed: {metadata.breed}\n"
        f"Age: {metadata.age} years\n"
        f"Sex: {metadata.sex}\n"
        f"Weight: {metadata.weight} kg\n"
        f"{diagnosis_lines(diagnosis)}"
    )


def few_shot_block(few_shot: list["Documentation"], atlas: RegionAtlas) -> str:
    blocks = []
    for doc in few_shot:
        header = f"Example documentation ({diagnosis_lines(doc.diagnosis).lower()}):".replace(
            "\n", ", "
        )
        blocks.append(f"{header}\n{encode_documentation_as_text(doc, atlas)}")
    return "\n\n".join(blocks)


def build_generation_prompt(
    atlas: RegionAtlas,
    few_shot: list["Documentation"],
    instructions: str,
    metadata: "PatientMetadata",
    diagnosis: "DiagnosisSpec",
    templates: PromptLibrary,
    instruct_think: bool = True,
) -> str:
    """Assemble the six-component generation prompt; only the final
    patient section varies between calls."""
    think = THINK_INSTRUCTION if instruct_think else ""
    return templates.generation.render(
        conditions=condition_lines(atlas),
        regions=region_lines(atlas),
        examples=few_shot_block(few_shot, atlas),
        instructions=instructions,
        think_instruction=think,
        patient=patient_block(metadata, diagnosis),
    ).rstrip("\n")


def build_conversion_prompt(freeform: str, schema_text: str, templates: PromptLibrary) -> str:
    """Short conversion prompt: static instructions, then schema, then text."""
    if not freeform.strip():
        raise ValidationError("free-form documentation is empty")
    return templates.conversion.render(
        schema=schema_text, documentation=freeform
    ).rstrip("\n")


def build_discretization_prompt(
    atlas: RegionAtlas, abnormality_text: str, templates: PromptLibrary
) -> str:
    """Index-matching prompt ending with the abnormality description."""
    if not abnormality_text.strip():
        raise ValidationError("abnormality text is empty")
    return templates.discretization.render(
        regions=region_lines(atlas),
        conditions=condition_lines(atlas),
        abnormality=abnormality_text,
    ).rstrip("\n")


def extract_after_reasoning(
    response: str, delimiter: str = REASONING_DELIMITER
) -> tuple[str, bool]:
    """Split off a reasoning trace: payload after the last delimiter occurrence."""
    pos = response.rfind(delimiter)
    if pos < 0:
        return response, False
    return response[pos + len(delimiter):], True

"""Paths to the data assets shipped inside the package."""

from __future__ import annotations

from importlib import resources
from pathlib import Path


def data_path(*parts: str) -> Path:
    return Path(str(resources.files("bodymap").joinpath("data", *parts)))


def default_atlas_path() -> Path:
    return data_path("atlas.json")


def default_kb_path() -> Path:
    return data_path("breeds.json")


def default_prompts_dir() -> Path:
    return data_path("prompts")


def default_few_shot_path() -> Path:
    return data_path("few_shot.json")


def default_diagnosis_pool_path() -> Path:
    return data_path("diagnoses.txt")


def e2e_fixture_path() -> Path:
    return data_path("fixtures", "e2e.json")

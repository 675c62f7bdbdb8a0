"""Synthetic canine musculoskeletal body-map toolkit.

Generates visual palpation documentations for dogs from an LLM backend
(or a fully offline scripted mock), renders them as hand-drawn-style
body maps, and analyses/exports the resulting datasets.
"""

__version__ = "0.1.0"

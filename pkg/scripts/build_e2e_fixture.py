#!/usr/bin/env python3
"""Build the shipped end-to-end mock fixture and its golden outputs.

The fixture scripts a 10-item `generate` run (master seed 1234, single
patellar diagnosis).  Every mock rule is keyed purely on request content
(metadata block, per-item case marker, or finding text), so any request
arrival order yields the same responses and parallel runs stay
deterministic.  Item 3 contains two findings that discretize to the same
region (exercising duplicate collapse) and item 7 has no findings at all.

Writes src/bodymap/data/fixtures/e2e.json and tests/golden/e2e_expected.json,
then re-runs the pipeline against the fixture to verify the golden data.
"""

from __future__ import annotations

import json
from pathlib import Path

from bodymap.atlas import load_atlas
from bodymap.client import BackendConfig, MockBackend
from bodymap.documents import DiagnosisSpec, load_few_shot
from bodymap.metadata import load_kb, sample_metadata
from bodymap.pipeline import generate_batch
from bodymap.prompts import load_prompts, patient_block
from bodymap.seeds import derive_rng, derive_seed

ROOT = Path(__file__).resolve().parents[1]
FIXTURE_PATH = ROOT / "src" / "bodymap" / "data" / "fixtures" / "e2e.json"
GOLDEN_PATH = ROOT / "tests" / "golden" / "e2e_expected.json"

MASTER_SEED = 1234
COUNT = 10
DIAGNOSIS = DiagnosisSpec(name="patellar luxation", grade=2, location="left")

# stable substrings of the shipped prompt templates used as rule keys
DISC_KEY = "the region index and the condition index that best match"
CONV_KEY = "Convert it into a JSON object"
GEN_KEY = "## 6. Patient"


def finding_catalog(atlas) -> list[tuple[str, str, str]]:
    def region(label):
        return str(atlas.region_by_label(label).index)

    return [
        ("acute inflammation of the left knee joint", region("left knee joint"), "3"),
        ("tension in the left vastus medialis", region("left vastus medialis"), "2"),
        ("pain on palpation of the left biceps femoris", region("left biceps femoris"), "1"),
        ("swelling around the left patellar ligament", region("left patellar ligament"), "4"),
        ("chronic change in the left hip joint", region("left hip joint"), "7"),
        ("warmth over the left gastrocnemius medial head",
         region("left gastrocnemius medial head"), "5"),
        ("tension in the left tensor fasciae latae", region("left tensor fasciae latae"), "2"),
        ("pain in the left lateral knee area", region("left lateral knee area"), "1"),
        # discretizes to the same region as the first entry (duplicate collapse)
        ("acute swelling of the left knee joint", region("left knee joint"), "4"),
    ]


def findings_for_item(i: int, catalog) -> list[int]:
    """Catalog indices for item i (item 3 duplicates a region, 7 is empty)."""
    if i == 7:
        return []
    if i == 3:
        return [0, 8, 1]  # both 0 and 8 map to the left knee joint
    k = 2 + (i % 3)
    return [(i * 3 + j) % 8 for j in range(k)]


def main() -> None:
    atlas = load_atlas()
    kb = load_kb()
    catalog = finding_catalog(atlas)

    disc_rules = []
    for text, region, condition in catalog:
        disc_rules.append(
            {
                "name": f"disc:{text[:30]}",
                "contains": [DISC_KEY, f"Abnormality: {text}"],
                "responses": [json.dumps({"region": region, "condition": condition})],
            }
        )

    conv_rules = []
    gen_rules = []
    golden = []
    blocks = set()
    for i in range(COUNT):
        seed = derive_seed(MASTER_SEED, i)
        metadata = sample_metadata(kb, derive_rng("metadata", seed))
        block = patient_block(metadata, DIAGNOSIS)
        assert block not in blocks, f"metadata collision at item {i}"
        blocks.add(block)

        chosen = findings_for_item(i, catalog)
        findings = [catalog[k][0] for k in chosen]
        marker = f"case-{i:02d}"
        body = "\n".join(f"- {t}" for t in findings) if findings else "No abnormalities found."
        freeform = (
            f"<think>Planning documentation {marker}: grade {DIAGNOSIS.grade} "
            f"{DIAGNOSIS.location} patellar luxation for a {metadata.breed}.</think>\n"
            f"Palpation documentation {marker}:\n{body}"
        )
        draft = {
            "breed": metadata.breed,
            "age": metadata.age,
            "sex": metadata.sex,
            "weight": metadata.weight,
            "palpation_findings": findings,
        }
        gen_rules.append(
            {"name": f"gen:{marker}", "contains": [GEN_KEY, block], "responses": [freeform]}
        )
        conv_rules.append(
            {
                "name": f"conv:{marker}",
                "contains": [CONV_KEY, marker],
                "responses": [json.dumps(draft)],
            }
        )

        expected = []
        seen = set()
        for k in chosen:
            _, region, condition = catalog[k]
            if int(region) in seen:
                continue
            seen.add(int(region))
            expected.append([int(region), int(condition)])
        golden.append({"id": f"llm-{i:05d}", "abnormalities": expected})

    fixture = {
        "native_constraints": False,
        "rules": disc_rules + conv_rules + gen_rules,
    }
    FIXTURE_PATH.parent.mkdir(parents=True, exist_ok=True)
    FIXTURE_PATH.write_text(json.dumps(fixture, indent=1) + "\n")
    GOLDEN_PATH.parent.mkdir(parents=True, exist_ok=True)
    GOLDEN_PATH.write_text(json.dumps(golden, indent=1) + "\n")

    # self-check: run the pipeline against the fixture at both parallelism levels
    cfg = BackendConfig(base_url="mock://", model="mock-model")
    templates = load_prompts()
    few_shot = load_few_shot()
    manifests = []
    for parallel in (1, 8):
        backend = MockBackend.from_file(FIXTURE_PATH)
        manifest = generate_batch(
            cfg, atlas, kb, [DIAGNOSIS], COUNT, MASTER_SEED,
            parallelism=parallel, backend=backend, templates=templates, few_shot=few_shot,
        )
        assert not manifest.rejects, manifest.rejects
        manifests.append(manifest)
    assert manifests[0] == manifests[1]
    for entry, exp in zip(manifests[0].entries, golden):
        assert entry.id == exp["id"]
        got = sorted(tuple(p) for p in entry.doc.abnormalities)
        want = sorted(tuple(p) for p in exp["abnormalities"])
        assert got == want, (entry.id, got, want)
    print(f"fixture: {len(fixture['rules'])} rules -> {FIXTURE_PATH}")
    print(f"golden:  {len(golden)} items -> {GOLDEN_PATH}")
    print("self-check passed (parallel 1 == parallel 8, golden sets match)")


if __name__ == "__main__":
    main()

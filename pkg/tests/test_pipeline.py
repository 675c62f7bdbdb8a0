import json
import random

import pytest

from bodymap.client import BackendConfig, MockBackend
from bodymap.documents import DiagnosisSpec, Documentation
from bodymap.errors import ValidationError
from bodymap.metadata import PatientMetadata, sample_metadata
from bodymap.pipeline import (
    BatchStats,
    GenerationFailure,
    generate_batch,
    generate_one,
    pick_diagnosis,
    validate_documentation,
)
from bodymap.prompts import patient_block
from bodymap.seeds import derive_rng, derive_seed

CFG = BackendConfig(base_url="mock://", model="m")
DIAG = DiagnosisSpec(name="patellar luxation", grade=1, location="left")


def make_doc(abnormalities, **kwargs):
    defaults = dict(
        id="d1",
        metadata=None,
        diagnosis=DiagnosisSpec(name="other"),
        abnormalities=tuple(abnormalities),
        provenance="rule_based",
        seed=0,
    )
    defaults.update(kwargs)
    return Documentation(**defaults)


def scripted_backend(kb, seed, findings, diagnosis=DIAG):
    """Single-item fixture: metadata-keyed generation reply, one conversion
    reply, and one discretization reply per finding text."""
    metadata = sample_metadata(kb, derive_rng("metadata", seed))
    freeform = "<think>plan</think>\nDocumentation case-X:\n" + "\n".join(
        f"- {text}" for text, _, _ in findings
    )
    draft = {
        "breed": metadata.breed,
        "age": metadata.age,
        "sex": metadata.sex,
        "weight": metadata.weight,
        "palpation_findings": [text for text, _, _ in findings],
    }
    rules = [
        {
            "contains": ["best match", f"Abnormality: {text}"],
            "responses": [json.dumps({"region": str(r), "condition": str(c)})],
        }
        for text, r, c in findings
    ]
    rules.append({
        "contains": ["Convert it into a JSON object", "case-X"],
        "responses": [json.dumps(draft)],
    })
    rules.append({
        "contains": [patient_block(metadata, diagnosis)],
        "responses": [freeform],
    })
    return MockBackend({"rules": rules}), metadata


class TestValidateDocumentation:
    def test_duplicate_regions_collapse_to_first(self):
        doc, dropped = validate_documentation(make_doc([(5, 1), (5, 2)]))
        assert doc.abnormalities == ((5, 1),)
        assert dropped == 1

    def test_region_out_of_range(self):
        with pytest.raises(ValidationError, match="region index 215 out of range"):
            validate_documentation(make_doc([(215, 1)]))

    def test_condition_out_of_range(self):
        with pytest.raises(ValidationError, match="condition index"):
            validate_documentation(make_doc([(5, 8)]))

    def test_empty_list_is_valid(self):
        doc, dropped = validate_documentation(make_doc([]))
        assert doc.abnormalities == ()
        assert dropped == 0

    def test_idempotent(self):
        once, _ = validate_documentation(make_doc([(5, 1), (5, 2), (9, 3)]))
        twice, dropped = validate_documentation(once)
        assert twice == once
        assert dropped == 0


class TestGenerateOne:
    def test_full_three_step_flow(self, atlas, kb, templates, few_shot):
        seed = derive_seed(42, 0)
        findings = [("left knee pain", 12, 1), ("left hip chronic", 8, 7)]
        backend, metadata = scripted_backend(kb, seed, findings)
        doc = generate_one(
            CFG, atlas, kb, DIAG, seed,
            backend=backend, templates=templates, few_shot=few_shot, item_id="t-0",
        )
        assert doc.abnormalities == ((12, 1), (8, 7))
        assert doc.metadata == metadata
        assert doc.provenance == "generated_llm"
        assert doc.seed == seed
        # three steps: 1 freeform + 1 conversion + 2 discretizations
        assert len(backend.requests) == 4

    def test_duplicate_findings_collapse_with_counter(self, atlas, kb, templates, few_shot):
        seed = derive_seed(43, 0)
        findings = [("left knee a", 12, 3), ("knee again", 12, 4), ("thigh", 30, 1)]
        backend, _ = scripted_backend(kb, seed, findings)
        stats = BatchStats()
        doc = generate_one(
            CFG, atlas, kb, DIAG, seed,
            backend=backend, templates=templates, few_shot=few_shot, stats=stats,
        )
        assert doc.abnormalities == ((12, 3), (30, 1))
        assert stats.duplicates_dropped == 1

    def test_zero_findings_yield_empty_documentation(self, atlas, kb, templates, few_shot):
        seed = derive_seed(44, 0)
        backend, _ = scripted_backend(kb, seed, [])
        doc = generate_one(
            CFG, atlas, kb, DIAG, seed,
            backend=backend, templates=templates, few_shot=few_shot,
        )
        assert doc.abnormalities == ()

    def test_failure_carries_intermediates(self, atlas, kb, templates, few_shot):
        seed = derive_seed(45, 0)
        metadata = sample_metadata(kb, derive_rng("metadata", seed))
        backend = MockBackend({
            "rules": [
                {"contains": [patient_block(metadata, DIAG)], "responses": ["<think>x</think>doc body"]},
            ],
            "default_response": "not json at all",
        })
        with pytest.raises(GenerationFailure) as excinfo:
            generate_one(
                CFG, atlas, kb, DIAG, seed,
                backend=backend, templates=templates, few_shot=few_shot,
            )
        assert "freeform" in excinfo.value.intermediates


class TestPickDiagnosis:
    def test_round_robin(self):
        plan = [DiagnosisSpec(name=f"d{i}") for i in range(3)]
        names = [pick_diagnosis(plan, i, 0, "round_robin").name for i in range(6)]
        assert names == ["d0", "d1", "d2", "d0", "d1", "d2"]

    def test_uniform_is_order_independent(self):
        plan = [DiagnosisSpec(name=f"d{i}") for i in range(10)]
        a = [pick_diagnosis(plan, i, 7, "uniform").name for i in range(20)]
        b = [pick_diagnosis(plan, i, 7, "uniform").name for i in reversed(range(20))]
        assert a == list(reversed(b))

    def test_empty_plan_rejected(self):
        with pytest.raises(ValidationError):
            pick_diagnosis([], 0, 0)


class TestGenerateBatch:
    def test_shipped_fixture_ten_items(self, atlas, kb, templates, few_shot, e2e_fixture, e2e_golden):
        backend = MockBackend.from_file(e2e_fixture)
        manifest = generate_batch(
            CFG, atlas, kb,
            [DiagnosisSpec(name="patellar luxation", grade=2, location="left")],
            10, 1234, backend=backend, templates=templates, few_shot=few_shot,
        )
        assert len(manifest.entries) == 10
        assert not manifest.rejects
        for entry, expected in zip(manifest.entries, e2e_golden):
            assert entry.id == expected["id"]
            assert sorted(entry.doc.abnormalities) == sorted(
                tuple(p) for p in expected["abnormalities"]
            )

    def test_parallelism_does_not_change_result(self, atlas, kb, templates, few_shot, e2e_fixture):
        manifests = []
        for parallel in (1, 8):
            backend = MockBackend.from_file(e2e_fixture)
            manifests.append(
                generate_batch(
                    CFG, atlas, kb,
                    [DiagnosisSpec(name="patellar luxation", grade=2, location="left")],
                    10, 1234, parallelism=parallel,
                    backend=backend, templates=templates, few_shot=few_shot,
                )
            )
        assert manifests[0] == manifests[1]

    def test_pool_plan_draws_only_pool_diagnoses(self, atlas, kb, templates, few_shot):
        from bodymap.data import default_diagnosis_pool_path

        pool = [
            DiagnosisSpec(name=line)
            for line in default_diagnosis_pool_path().read_text().splitlines()
            if line.strip()
        ]
        assert len(pool) == 136
        backend = MockBackend({
            "rules": [
                {
                    "contains": ["best match"],
                    "responses": [json.dumps({"region": "30", "condition": "1"})],
                },
                {
                    "contains": ["Convert it into a JSON object"],
                    "responses": [json.dumps({
                        "breed": "Beagle", "age": 3, "sex": "male", "weight": 10.0,
                        "palpation_findings": ["generic finding"],
                    })],
                },
                {"contains": ["## 6. Patient"], "responses": ["some finding text"]},
            ]
        })
        manifest = generate_batch(
            CFG, atlas, kb, pool, 25, 99,
            backend=backend, templates=templates, few_shot=few_shot, plan_mode="uniform",
        )
        names = {e.doc.diagnosis.name for e in manifest.entries}
        assert names <= {d.name for d in pool}
        assert len(names) > 1
        assert all(e.label == "other" for e in manifest.entries)

    def test_item_failure_is_recorded_not_fatal(self, atlas, kb, templates, few_shot, e2e_fixture):
        fixture = json.loads(e2e_fixture.read_text())
        # poison one conversion rule so exactly one item fails
        poisoned = next(r for r in fixture["rules"] if r["name"].startswith("conv:case-04"))
        poisoned["responses"] = ["never valid json"]
        manifest = generate_batch(
            CFG, atlas, kb,
            [DiagnosisSpec(name="patellar luxation", grade=2, location="left")],
            10, 1234, backend=MockBackend(fixture), templates=templates, few_shot=few_shot,
        )
        assert len(manifest.entries) == 9
        assert len(manifest.rejects) == 1
        assert manifest.rejects[0]["id"] == "llm-00004"
        assert "freeform" in manifest.rejects[0]

    def test_count_must_be_positive(self, atlas, kb, templates, few_shot):
        with pytest.raises(ValidationError):
            generate_batch(
                CFG, atlas, kb, [DIAG], 0, 1,
                backend=MockBackend({"rules": []}), templates=templates, few_shot=few_shot,
            )

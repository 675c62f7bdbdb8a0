"""Command-line entry point.

Subcommands: validate, generate, baseline, render, analyze, export.
Configuration precedence is flags > environment variables > config file
> built-in defaults.  Every generating or rendering subcommand requires
an explicit --seed; nothing is ever seeded from the clock.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .analysis import analyze_groups, average_abnormalities, duplicate_count, group_docs
from .atlas import load_atlas
from .baseline import rule_based_patellar, rule_based_other
from .client import (
    ENV_API_KEY,
    ENV_BACKEND_URL,
    ENV_MODEL,
    BackendConfig,
    HttpBackend,
    MockBackend,
)
from .data import default_diagnosis_pool_path
from .datasetio import (
    DatasetManifest,
    ManifestEntry,
    export_dataset,
    read_manifest,
    split_dataset,
    write_manifest,
)
from .documents import DiagnosisSpec, label_for_diagnosis, load_few_shot
from .errors import BodymapError, ConfigError
from .metadata import load_kb
from .pipeline import BatchStats, generate_batch
from .renderer import rasterize, render_svg
from .seeds import derive_seed

log = logging.getLogger(__name__)

SELECTOR_BY_FLAG = {
    "grade": "grade",
    "location": "location",
    "age": "age_bin",
    "sex": "sex",
    "weight": "weight_bin",
    "none": "none",
}


def _load_config_file(path: str | None) -> dict:
    if path is None:
        return {}
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {p}")
    if p.suffix == ".toml":
        try:
            import tomllib
        except ModuleNotFoundError as exc:  # python < 3.11
            raise ConfigError("TOML config needs Python >= 3.11; use JSON instead") from exc
        return tomllib.loads(p.read_text())
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed config file {p}: {exc}") from exc


def _resolve(flag_value, env_value, config: dict, key: str, default):
    """Precedence: flag > environment > config file > default."""
    if flag_value is not None:
        return flag_value
    if env_value is not None:
        return env_value
    if key in config:
        return config[key]
    return default


def _backend_config(args, config: dict) -> BackendConfig:
    import os

    return BackendConfig(
        base_url=_resolve(
            args.backend_url, os.getenv(ENV_BACKEND_URL), config, "backend_url",
            "http://localhost:8000/v1",
        ),
        model=_resolve(args.model, os.getenv(ENV_MODEL), config, "model", "default-model"),
        api_key=_resolve(None, os.getenv(ENV_API_KEY), config, "api_key", None),
        temperature=_resolve(args.temperature, None, config, "temperature", 0.6),
        top_p=_resolve(args.top_p, None, config, "top_p", 0.95),
        timeout=_resolve(args.timeout, None, config, "timeout", 60.0),
        max_retries=_resolve(args.max_retries, None, config, "max_retries", 3),
        native_constraints=bool(
            _resolve(args.native_constraints or None, None, config, "native_constraints", False)
        ),
        reasoning_model=bool(
            _resolve(args.reasoning_model or None, None, config, "reasoning_model", False)
        ),
    )


def _paths(args, config: dict) -> tuple[Path | None, Path | None, Path | None]:
    atlas = _resolve(args.atlas, None, config, "atlas", None)
    kb = _resolve(args.kb, None, config, "kb", None)
    prompts = _resolve(args.prompts, None, config, "prompts", None)
    for p in (atlas, kb, prompts):
        if p is not None and not Path(p).exists():
            raise ConfigError(f"path does not exist: {p}")
    return atlas, kb, prompts


def _build_plan(args) -> tuple[list[DiagnosisSpec], str]:
    if args.diagnosis_pool:
        pool_path = Path(args.diagnosis_pool)
        if not pool_path.is_file():
            raise ConfigError(f"diagnosis pool file not found: {pool_path}")
        labels = [line.strip() for line in pool_path.read_text().splitlines() if line.strip()]
        if not labels:
            raise ConfigError(f"diagnosis pool file {pool_path} is empty")
        return [DiagnosisSpec(name=label) for label in labels], args.plan_mode
    if not args.diagnosis:
        raise ConfigError("either --diagnosis or --diagnosis-pool is required")
    return (
        [DiagnosisSpec(name=args.diagnosis, grade=args.grade, location=args.location)],
        "round_robin",
    )


def cmd_validate(args, config) -> int:
    atlas_path, kb_path, prompts_dir = _paths(args, config)
    atlas = load_atlas(atlas_path)
    kb = load_kb(kb_path)
    from .prompts import load_prompts

    load_prompts(prompts_dir)
    few_shot = load_few_shot()
    print(
        f"ok: atlas {len(atlas.regions)} regions / {len(atlas.conditions)} conditions, "
        f"kb {len(kb)} breeds, {len(few_shot)} few-shot examples, prompts ok"
    )
    return 0


def cmd_generate(args, config) -> int:
    from .prompts import load_prompts

    atlas_path, kb_path, prompts_dir = _paths(args, config)
    atlas = load_atlas(atlas_path)
    kb = load_kb(kb_path)
    templates = load_prompts(prompts_dir)
    few_shot = load_few_shot(args.few_shot) if args.few_shot else load_few_shot()
    plan, plan_mode = _build_plan(args)
    cfg = _backend_config(args, config)
    out_dir = Path(args.out)

    if args.dry_run:
        backend_desc = f"mock fixture {args.mock}" if args.mock else cfg.base_url
        print(
            f"dry-run: would generate {args.count} documentations "
            f"(plan of {len(plan)} diagnoses, mode {plan_mode}) via {backend_desc} "
            f"into {out_dir / 'manifest.jsonl'}"
        )
        return 0

    backend = MockBackend.from_file(args.mock) if args.mock else HttpBackend(cfg)
    stats = BatchStats()
    manifest = generate_batch(
        cfg,
        atlas,
        kb,
        plan,
        args.count,
        args.seed,
        parallelism=args.parallel,
        backend=backend,
        templates=templates,
        few_shot=few_shot,
        plan_mode=plan_mode,
        stats=stats,
    )
    path = write_manifest(manifest, out_dir / "manifest.jsonl")
    print(
        f"wrote {len(manifest.entries)} entries ({len(manifest.rejects)} rejects, "
        f"{stats.duplicates_dropped} duplicate findings dropped) to {path}"
    )
    return 0


def cmd_baseline(args, config) -> int:
    atlas_path, _, _ = _paths(args, config)
    atlas = load_atlas(atlas_path)
    out_dir = Path(args.out)
    if args.dry_run:
        print(
            f"dry-run: would generate {args.count} rule-based {args.cls} documentations "
            f"into {out_dir / 'manifest.jsonl'}"
        )
        return 0
    entries = []
    for i in range(args.count):
        rng_seed = derive_seed(args.seed, args.cls, i)
        import random

        rng = random.Random(rng_seed)
        doc_id = f"rule-{args.cls}-{i:05d}"
        if args.cls == "patellar":
            doc = rule_based_patellar(atlas, rng, doc_id=doc_id, seed=rng_seed)
        else:
            doc = rule_based_other(atlas, rng, doc_id=doc_id, seed=rng_seed)
        entries.append(
            ManifestEntry(
                id=doc.id,
                label=label_for_diagnosis(doc.diagnosis.name),
                doc=doc,
                seed=rng_seed,
                provenance=doc.provenance,
            )
        )
    manifest = DatasetManifest(
        entries=tuple(entries), atlas_sha256=atlas.file_sha256, master_seed=args.seed
    )
    path = write_manifest(manifest, out_dir / "manifest.jsonl")
    print(f"wrote {len(entries)} rule-based {args.cls} entries to {path}")
    return 0


def cmd_render(args, config) -> int:
    atlas_path, _, _ = _paths(args, config)
    atlas = load_atlas(atlas_path)
    manifest = read_manifest(args.manifest, expected_atlas_sha256=atlas.file_sha256)
    out_dir = Path(args.out)
    if args.dry_run:
        print(f"dry-run: would render {len(manifest.entries)} documentations into {out_dir}")
        return 0
    out_dir.mkdir(parents=True, exist_ok=True)
    for entry in manifest.entries:
        stroke_seed = derive_seed("render", args.seed, entry.id)
        (out_dir / f"{entry.id}.svg").write_text(render_svg(entry.doc, atlas, stroke_seed))
        if args.png:
            rasterize(entry.doc, atlas, stroke_seed).save(
                out_dir / f"{entry.id}.png", format="PNG"
            )
    print(f"rendered {len(manifest.entries)} documentations to {out_dir}")
    return 0


def cmd_analyze(args, config) -> int:
    atlas_path, kb_path, _ = _paths(args, config)
    atlas = load_atlas(atlas_path)
    kb = load_kb(kb_path)
    manifest = read_manifest(args.manifest, expected_atlas_sha256=atlas.file_sha256)
    docs = manifest.docs
    selector = SELECTOR_BY_FLAG[args.by]
    out_dir = Path(args.out)
    if args.dry_run:
        print(f"dry-run: would analyze {len(docs)} documentations by {selector} into {out_dir}")
        return 0
    analyze_groups(docs, selector, atlas, out_dir, kb)
    means = average_abnormalities(docs, selector, kb)
    groups = group_docs(docs, selector, kb)
    import csv as _csv

    with (out_dir / "summary.csv").open("w", newline="") as fh:
        writer = _csv.DictWriter(
            fh, fieldnames=["group", "documentations", "mean_abnormalities", "duplicates"]
        )
        writer.writeheader()
        for key in groups:
            writer.writerow(
                {
                    "group": key,
                    "documentations": len(groups[key]),
                    "mean_abnormalities": f"{means[key]:.2f}",
                    "duplicates": duplicate_count(groups[key]),
                }
            )
    print(
        f"analyzed {len(docs)} documentations by {selector}: {len(groups)} groups, "
        f"{duplicate_count(docs)} duplicates overall; reports in {out_dir}"
    )
    return 0


def cmd_export(args, config) -> int:
    atlas_path, _, _ = _paths(args, config)
    atlas = load_atlas(atlas_path)
    manifest = read_manifest(args.manifest, expected_atlas_sha256=atlas.file_sha256)
    out_dir = Path(args.out)
    if args.dry_run:
        print(f"dry-run: would export {len(manifest.entries)} entries into {out_dir}")
        return 0
    if all(e.split == "unassigned" for e in manifest.entries):
        manifest = split_dataset(manifest, train_fraction=args.train_frac, seed=args.seed)
    result = export_dataset(manifest, atlas, out_dir)
    write_manifest(manifest, out_dir / "manifest.jsonl")
    print(
        f"exported {result.written} images ({len(result.rejects)} failures) "
        f"to {out_dir}; labels in {result.labels_csv}"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bodymap",
        description="Synthetic canine body-map documentation toolkit.",
    )
    parser.add_argument("--version", action="version", version=f"bodymap {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--atlas", help="atlas JSON file (default: shipped atlas)")
    common.add_argument("--kb", help="breed KB JSON file (default: shipped KB)")
    common.add_argument("--prompts", help="prompt template directory")
    common.add_argument("--config", help="JSON or TOML config file")
    common.add_argument("--dry-run", action="store_true", help="print the plan, write nothing")

    backend = argparse.ArgumentParser(add_help=False)
    backend.add_argument("--backend-url", help="chat-completions base URL")
    backend.add_argument("--model", help="model name")
    backend.add_argument("--temperature", type=float, help="sampling temperature (default 0.6)")
    backend.add_argument("--top-p", type=float, help="top-p threshold (default 0.95)")
    backend.add_argument("--timeout", type=float, help="request timeout seconds (default 60)")
    backend.add_argument("--max-retries", type=int, help="constrained repair retries (default 3)")
    backend.add_argument(
        "--native-constraints",
        action="store_true",
        help="backend supports native constrained generation",
    )
    backend.add_argument(
        "--reasoning-model",
        action="store_true",
        help="backend reasons on its own; do not inject <think> instructions",
    )

    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("validate", parents=[common], help="validate atlas, KB and prompts")

    p = sub.add_parser(
        "generate", parents=[common, backend], help="LLM three-step batch generation"
    )
    p.add_argument("--diagnosis", help="single diagnosis name")
    p.add_argument("--grade", type=int, choices=[1, 2, 3, 4])
    p.add_argument("--location", choices=["left", "right", "bilateral"])
    p.add_argument(
        "--diagnosis-pool",
        help=f"file with one diagnosis label per line (e.g. {default_diagnosis_pool_path()})",
    )
    p.add_argument(
        "--plan-mode",
        choices=["round_robin", "uniform"],
        default="uniform",
        help="how pool diagnoses map to items (default uniform)",
    )
    p.add_argument("--few-shot", help="few-shot documentation JSON file")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--parallel", type=int, default=1)
    p.add_argument("--out", required=True)
    p.add_argument("--mock", help="mock fixture file; use the offline backend")

    p = sub.add_parser("baseline", parents=[common], help="rule-based batch generation")
    p.add_argument("--class", dest="cls", choices=["patellar", "other"], required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("render", parents=[common], help="render manifest entries to SVG/PNG")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--png", action="store_true", help="also rasterize PNGs")

    p = sub.add_parser("analyze", parents=[common], help="frequency/bubble-chart reports")
    p.add_argument("--manifest", required=True)
    p.add_argument("--by", choices=sorted(SELECTOR_BY_FLAG), default="none")
    p.add_argument("--out", required=True)

    p = sub.add_parser("export", parents=[common], help="export labeled image dataset")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--train-frac", type=float, default=0.8)
    p.add_argument("--seed", type=int, required=True)

    return parser


COMMANDS = {
    "validate": cmd_validate,
    "generate": cmd_generate,
    "baseline": cmd_baseline,
    "render": cmd_render,
    "analyze": cmd_analyze,
    "export": cmd_export,
}


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config_file(getattr(args, "config", None))
        return COMMANDS[args.command](args, config)
    except BodymapError as exc:
        print(f"error:{exc.category}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

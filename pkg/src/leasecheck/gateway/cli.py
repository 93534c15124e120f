"""Command-line interface: analyze one case, score a corpus, serve the
HTTP API, or validate a knowledge base file.

Analyze exit codes encode the legal outcome for scripting: 0 lawful,
2 unlawful, 3 undetermined, 1 operational error.
"""

from __future__ import annotations

import argparse
import csv
import statistics
import sys
import time
from pathlib import Path

from leasecheck.dsl import load_kb_file
from leasecheck.engine import analyze, explain
from leasecheck.errors import KbSourceError, LeasecheckError
from leasecheck.extraction import LLM, PATTERN, ExtractorConfig, extract
from leasecheck.gateway.config import AppConfig, default_store_dir, load_configured_kb
from leasecheck.kb import builtin_kb

EXIT_BY_OUTCOME = {"lawful": 0, "unlawful": 2, "undetermined": 3}


def _extractor_config(kind: str) -> ExtractorConfig:
    if kind == LLM:
        return ExtractorConfig.from_env(LLM)
    return ExtractorConfig()


def _app_config(args: argparse.Namespace) -> AppConfig:
    return AppConfig(
        kb_path=getattr(args, "kb", None),
        extractor=_extractor_config(getattr(args, "extractor", PATTERN)),
        host=getattr(args, "host", "127.0.0.1"),
        port=getattr(args, "port", 8000),
        store_dir=Path(getattr(args, "store_dir", None) or default_store_dir()),
        frontend_dir=getattr(args, "frontend", None),
    )


def _cmd_analyze(args: argparse.Namespace) -> int:
    config = _app_config(args)
    kb = load_configured_kb(config)
    schema = kb.claim(args.claim)
    case_text = Path(args.case_file).read_text(encoding="utf-8")
    started = time.perf_counter()
    result = extract(case_text, schema, config.extractor)
    extracted = time.perf_counter()
    verdict = analyze(kb, result.normalized)
    analyzed = time.perf_counter()
    print(explain(verdict))
    if args.timing:
        print(f"extraction_ms: {(extracted - started) * 1000.0:.3f}")
        print(f"engine_ms: {(analyzed - extracted) * 1000.0:.3f}")
    return EXIT_BY_OUTCOME[verdict.outcome]


def _read_expectations(path: Path) -> list[dict[str, str]]:
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        required = {"file", "claim", "expected"}
        if reader.fieldnames is None or not required <= set(reader.fieldnames):
            raise LeasecheckError(
                f"expectations file {path} must have columns: file, claim, expected"
            )
        rows = []
        for row in reader:
            if not row.get("file"):
                continue
            if row["expected"] not in EXIT_BY_OUTCOME:
                raise LeasecheckError(
                    f"expectations file {path}: bad expected outcome "
                    f"{row['expected']!r} for {row['file']!r}"
                )
            rows.append(row)
        return rows


def _cmd_batch(args: argparse.Namespace) -> int:
    config = _app_config(args)
    kb = load_configured_kb(config)
    corpus = Path(args.corpus_dir)
    rows = _read_expectations(Path(args.expectations))
    correct = 0
    engine_times: list[float] = []
    for row in rows:
        case_path = corpus / row["file"]
        schema = kb.claim(row["claim"])
        case_text = case_path.read_text(encoding="utf-8")
        result = extract(case_text, schema, config.extractor)
        started = time.perf_counter()
        verdict = analyze(kb, result.normalized)
        engine_times.append((time.perf_counter() - started) * 1000.0)
        ok = verdict.outcome == row["expected"]
        correct += ok
        marker = "ok" if ok else "MISMATCH"
        print(f"{row['file']}: {verdict.outcome} (expected {row['expected']}) {marker}")
    print(f"{correct}/{len(rows)} correct")
    mean_ms = statistics.fmean(engine_times) if engine_times else 0.0
    print(f"mean_engine_ms: {mean_ms:.3f}")
    return 0 if correct == len(rows) else 1


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from leasecheck.gateway.service import create_app

    config = _app_config(args)
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level=config.log_level)
    return 0


def _cmd_validate_kb(args: argparse.Namespace) -> int:
    source = args.kb_file or "<builtin>"
    try:
        kb = load_kb_file(args.kb_file) if args.kb_file else builtin_kb()
    except KbSourceError as err:
        for diagnostic in err.diagnostics:
            print(f"{source}:{diagnostic}", file=sys.stderr)
        if not err.diagnostics:
            print(f"error: {err}", file=sys.stderr)
        return 1
    for warning in kb.warnings:
        print(f"{source}:{warning}")
    print(
        f"OK: {len(kb.rules)} rules, {len(kb.laws)} laws, "
        f"{len(kb.claims)} claims"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="leasecheck",
        description="Rule-based landlord-tenant compliance analysis for New York.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--kb", help="path to a .llkb file replacing the builtin KB")
        p.add_argument(
            "--extractor",
            choices=[PATTERN, LLM],
            default=PATTERN,
            help="case-fact extractor (default: pattern)",
        )

    p_analyze = sub.add_parser("analyze", help="analyze one case file")
    p_analyze.add_argument("case_file", help="file with the case description")
    p_analyze.add_argument("--claim", required=True, help="claim type to analyze")
    p_analyze.add_argument(
        "--timing", action="store_true", help="print extraction and engine times"
    )
    add_common(p_analyze)
    p_analyze.set_defaults(func=_cmd_analyze)

    p_batch = sub.add_parser("batch", help="score a corpus against expectations")
    p_batch.add_argument("corpus_dir", help="directory of case files")
    p_batch.add_argument(
        "expectations", help="CSV with columns: file, claim, expected"
    )
    add_common(p_batch)
    p_batch.set_defaults(func=_cmd_batch)

    p_serve = sub.add_parser("serve", help="run the HTTP API")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--store-dir", dest="store_dir", help="session store directory")
    p_serve.add_argument("--frontend", help="directory of static UI files to serve")
    add_common(p_serve)
    p_serve.set_defaults(func=_cmd_serve)

    p_validate = sub.add_parser("validate-kb", help="check a knowledge base file")
    p_validate.add_argument(
        "kb_file", nargs="?", default=None,
        help=".llkb file to validate (default: embedded knowledge base)")
    p_validate.set_defaults(func=_cmd_validate_kb)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LeasecheckError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Per-case timing over the fixture corpus.

Runs pattern extraction and the engine separately for each corpus case,
repeating the engine call to get a stable estimate, and prints one row
per case plus summary statistics.

Usage: python scripts/timing_report.py [--repeats N]
"""

from __future__ import annotations

import argparse
import csv
import statistics
import time
from pathlib import Path

from leasecheck.engine import analyze, make_case_facts
from leasecheck.extraction import pattern_extract
from leasecheck.kb import builtin_kb

ROOT = Path(__file__).resolve().parent.parent
CASES = ROOT / "fixtures" / "cases"
EXPECTED = ROOT / "fixtures" / "expected.csv"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=25,
                        help="engine runs per case (default 25)")
    args = parser.parse_args()

    kb = builtin_kb()
    engine_medians = []
    print(f"{'case':<12} {'claim':<20} {'extract_ms':>10} {'engine_ms':>10}  outcome")
    with open(EXPECTED, newline="") as handle:
        for row in csv.DictReader(handle):
            schema = kb.claim(row["claim"])
            text = (CASES / row["file"]).read_text()

            started = time.perf_counter()
            pairs = pattern_extract(text, schema)
            extract_ms = (time.perf_counter() - started) * 1000.0

            facts = make_case_facts(schema, pairs)
            samples = []
            for _ in range(args.repeats):
                started = time.perf_counter()
                verdict = analyze(kb, facts)
                samples.append((time.perf_counter() - started) * 1000.0)
            engine_ms = statistics.median(samples)
            engine_medians.append(engine_ms)

            print(f"{row['file']:<12} {row['claim']:<20} "
                  f"{extract_ms:>10.3f} {engine_ms:>10.3f}  {verdict.outcome}")

    print()
    print(f"engine median of medians: {statistics.median(engine_medians):.3f} ms")
    print(f"engine max of medians:    {max(engine_medians):.3f} ms")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

"""Terminal walkthrough of the guided interview.

Picks a claim type, optionally seeds the session from a case-text file,
asks the remaining questions one at a time, and prints the law-citing
verdict.

Usage: python scripts/interview_demo.py [--claim eviction] [--case FILE]
"""

from __future__ import annotations

import argparse
from pathlib import Path

from leasecheck.engine import explain
from leasecheck.errors import OutOfDomainError
from leasecheck.interview import finalize, next_question, start_interview, submit_answer
from leasecheck.kb import builtin_kb


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--claim", default="eviction",
                        help="claim type to analyze (default eviction)")
    parser.add_argument("--case", type=Path, default=None,
                        help="optional case text file to pre-answer from")
    args = parser.parse_args()

    kb = builtin_kb()
    case_text = args.case.read_text() if args.case else None
    session = start_interview(kb, args.claim, case_text=case_text)
    for warning in session.warnings:
        print(f"note: {warning}")
    if session.answered:
        print("pre-answered from the case text:")
        for name, value in session.answered.items():
            print(f"  {name} = {value}")
        print()

    while (question := next_question(kb, session)) is not None:
        print(question.prompt)
        options = ", ".join(question.options)
        while True:
            answer = input(f"  [{options}] > ").strip()
            try:
                session = submit_answer(kb, session, question.attribute, answer)
                break
            except OutOfDomainError as err:
                print(f"  {err}")
        print()

    session, verdict = finalize(kb, session)
    print(explain(verdict))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

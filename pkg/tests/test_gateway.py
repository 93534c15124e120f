"""Command-line interface behavior: exit codes, transcripts, and the
batch regression runner."""

from __future__ import annotations

import pytest

from conftest import CASES, EXPECTED_CSV, FIXTURES

from leasecheck.gateway.cli import EXIT_BY_OUTCOME, main

CASE01_TRANSCRIPT = """\
1. Tenant with a lease is protected from eviction during the lease period if lease provisions and local laws are not violated.
2. Landlords must give formal notice before seeking legal possession of the apartment.
3. Eviction proceedings can be initiated for non-payment or significant lease violations.
4. Landlords of rent-regulated apartments may need DHCR approval for court proceedings.
5. Tenants should not ignore legal papers to avoid eviction.
6. Legal eviction requires court proceeding and judgment of possession.
7. Landlords cannot evict tenants unlawfully or by force.
8. Tenant evicted unlawfully can recover triple damages.
9. Additional rules protect certain groups from eviction.

Tenant is in protected category, eviction for owner occupancy unlawful.

Decisive rule eviction_violation.1:
  case(court_ruling, false)  [satisfied]
  case(eviction_cause, owner_occupancy)  [satisfied]
  case(tenant_category, disabled)  [satisfied]
  overrides(disabled, owner_occupancy)  [satisfied]
"""


def test_exit_code_vocabulary():
    assert EXIT_BY_OUTCOME == {"lawful": 0, "unlawful": 2, "undetermined": 3}


def test_analyze_case01_transcript(capsys):
    code = main(["analyze", str(CASES / "case01.txt"), "--claim", "eviction"])
    out = capsys.readouterr().out
    assert out == CASE01_TRANSCRIPT
    assert code == 2


def test_analyze_lawful_case_exits_zero(capsys):
    code = main(["analyze", str(CASES / "case02.txt"), "--claim", "eviction"])
    out = capsys.readouterr().out
    assert code == 0
    assert "All conditions satisfied, eviction is lawful." in out
    assert "Decisive rule eviction_compliant.1:" in out


def test_analyze_undetermined_exits_three(tmp_path, capsys):
    vague = tmp_path / "vague.txt"
    vague.write_text("The tenant was evicted.\n")
    code = main(["analyze", str(vague), "--claim", "eviction"])
    out = capsys.readouterr().out
    assert code == 3
    assert "Undetermined: missing eviction_cause, court_ruling, executioner, tenant_category" in out
    assert "Decisive rule" not in out


def test_analyze_timing_lines(capsys):
    code = main(["analyze", str(CASES / "case01.txt"), "--claim", "eviction", "--timing"])
    lines = capsys.readouterr().out.splitlines()
    assert code == 2
    assert lines[-2].startswith("extraction_ms: ")
    assert lines[-1].startswith("engine_ms: ")
    float(lines[-2].split(": ")[1])
    float(lines[-1].split(": ")[1])


def test_analyze_unknown_claim_errors(capsys):
    code = main(["analyze", str(CASES / "case01.txt"), "--claim", "parking"])
    captured = capsys.readouterr()
    assert code == 1
    assert captured.err.startswith("error: ")


def test_analyze_missing_file_errors(tmp_path, capsys):
    code = main(["analyze", str(tmp_path / "absent.txt"), "--claim", "eviction"])
    assert code == 1
    assert "error: " in capsys.readouterr().err


def test_batch_full_corpus(capsys):
    code = main(["batch", str(CASES), str(EXPECTED_CSV)])
    out = capsys.readouterr().out
    assert code == 0
    assert "10/10 correct" in out
    assert "mean_engine_ms: " in out
    for i in range(1, 11):
        assert f"case{i:02d}.txt: " in out
    assert "MISMATCH" not in out


def test_batch_flags_mislabeled_rows(tmp_path, capsys):
    wrong = tmp_path / "expected.csv"
    wrong.write_text(
        "file,claim,expected\n"
        "case01.txt,eviction,lawful\n"
        "case02.txt,eviction,lawful\n"
    )
    code = main(["batch", str(CASES), str(wrong)])
    out = capsys.readouterr().out
    assert code == 1
    assert "case01.txt: unlawful (expected lawful) MISMATCH" in out
    assert "1/2 correct" in out


def test_batch_empty_expectations(tmp_path, capsys):
    empty = tmp_path / "expected.csv"
    empty.write_text("file,claim,expected\n")
    code = main(["batch", str(CASES), str(empty)])
    out = capsys.readouterr().out
    assert code == 0
    assert "0/0 correct" in out


def test_batch_rejects_bad_header(tmp_path, capsys):
    bad = tmp_path / "expected.csv"
    bad.write_text("path,kind,verdict\ncase01.txt,eviction,unlawful\n")
    code = main(["batch", str(CASES), str(bad)])
    assert code == 1
    assert "error: " in capsys.readouterr().err


def test_batch_rejects_bad_outcome_value(tmp_path, capsys):
    bad = tmp_path / "expected.csv"
    bad.write_text("file,claim,expected\ncase01.txt,eviction,guilty\n")
    code = main(["batch", str(CASES), str(bad)])
    assert code == 1
    assert "guilty" in capsys.readouterr().err


def test_validate_builtin_kb(capsys):
    code = main(["validate-kb"])
    out = capsys.readouterr().out
    assert code == 0
    assert out == "OK: 31 rules, 20 laws, 4 claims\n"


def test_validate_kb_file_ok(tmp_path, capsys):
    good = tmp_path / "tiny.llkb"
    good.write_text("p(a).\n")
    code = main(["validate-kb", str(good)])
    out = capsys.readouterr().out
    assert code == 0
    assert out.endswith("OK: 1 rules, 0 laws, 0 claims\n")


def test_validate_kb_reports_diagnostics(tmp_path, capsys):
    bad = tmp_path / "bad.llkb"
    bad.write_text("p(X) :- not q(X).\n")
    code = main(["validate-kb", str(bad)])
    captured = capsys.readouterr()
    assert code == 1
    assert "safety" in captured.err
    assert str(bad) in captured.err


def test_validate_kb_reports_syntax_errors(tmp_path, capsys):
    bad = tmp_path / "bad.llkb"
    bad.write_text("p :- q\n")
    code = main(["validate-kb", str(bad)])
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_custom_kb_flag(tmp_path, capsys):
    kb_file = tmp_path / "toy.llkb"
    kb_file.write_text(
        'law t1 { group toy_laws; text "Toy rule."; source "toy"; }\n'
        'claim toy { attr mood enum(good, bad) question "Mood?"; '
        "goal violation=toy_violation compliance=toy_compliant lawgroup=toy_laws; }\n"
        "toy_violation :- case(mood, bad).\n  @cite(t1)\n"
        "toy_compliant :- case(mood, good).\n  @cite(t1)\n"
    )
    case = tmp_path / "case.txt"
    case.write_text("Everything is good today.\n")
    code = main(["analyze", str(case), "--claim", "toy", "--kb", str(kb_file)])
    out = capsys.readouterr().out
    assert code == 0
    assert "1. Toy rule." in out
    assert "Compliance established by rule toy_compliant.1." in out


def test_llm_extractor_without_env_errors(monkeypatch, capsys):
    monkeypatch.delenv("LLM_API_URL", raising=False)
    monkeypatch.delenv("LLM_API_KEY", raising=False)
    code = main(["analyze", str(CASES / "case01.txt"), "--claim", "eviction",
                 "--extractor", "llm"])
    assert code == 1
    assert "error: " in capsys.readouterr().err


def test_help_exits_cleanly(capsys):
    with pytest.raises(SystemExit) as err:
        main(["--help"])
    assert err.value.code == 0
    assert "analyze" in capsys.readouterr().out

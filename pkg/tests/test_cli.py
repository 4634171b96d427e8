import json

import pytest

from accessgraph.cli import POLICY_ENV_VAR, main
from conftest import SAMPLES, worked_example_document

EXAMPLE_NARRATIVE = (
    "Access to Account might be lost when losing both Phone and Tablet, "
    "or losing your Phone and forgetting your password"
)


@pytest.fixture(autouse=True)
def clean_policy_env(monkeypatch):
    monkeypatch.delenv(POLICY_ENV_VAR, raising=False)


def write_doc(tmp_path, document, name="graph.json"):
    path = tmp_path / name
    path.write_text(json.dumps(document), encoding="utf-8")
    return str(path)


@pytest.fixture()
def graph_file(tmp_path):
    return write_doc(tmp_path, worked_example_document())


# ---------------------------------------------------------------------------
# validate


def test_validate_ok(graph_file, capsys):
    assert main(["validate", graph_file]) == 0
    out = capsys.readouterr()
    assert out.out == "ok: 9 nodes, 9 edges, 1 root(s)\n"
    assert out.err == ""


def test_validate_json(graph_file, capsys):
    assert main(["validate", graph_file, "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload == {
        "ok": True, "nodes": 9, "edges": 9, "roots": ["acct"], "warnings": [],
    }


def test_validate_warns_on_unknown_field(tmp_path, capsys):
    document = worked_example_document()
    document["comment"] = "hello"
    path = write_doc(tmp_path, document)
    assert main(["validate", path]) == 0
    assert "warning: unknown top-level field 'comment'" in capsys.readouterr().err


def test_validate_strict_rejects_unknown_field(tmp_path, capsys):
    document = worked_example_document()
    document["comment"] = "hello"
    path = write_doc(tmp_path, document)
    assert main(["validate", path, "--strict"]) == 1
    assert capsys.readouterr().err.startswith("error:")


def test_validate_bad_graph(tmp_path, capsys):
    document = worked_example_document()
    document["edges"].append(["acct", "nowhere"])
    assert main(["validate", write_doc(tmp_path, document)]) == 1
    err = capsys.readouterr().err
    assert err.startswith("error:") and "nowhere" in err


def test_missing_file(tmp_path, capsys):
    assert main(["validate", str(tmp_path / "nope.json")]) == 1
    assert capsys.readouterr().err.startswith("error:")


# ---------------------------------------------------------------------------
# score


def test_score_default_prints_all_metrics(graph_file, capsys):
    assert main(["score", graph_file, "--account", "acct"]) == 0
    assert capsys.readouterr().out == (
        "security: medium\n"
        "accessibility: 2\n"
        "legacy (reconstructed): 3/2 (1.5)\n"
    )


def test_score_single_metric_prints_bare_value(graph_file, capsys):
    assert main(["score", graph_file, "--account", "acct", "--accessibility"]) == 0
    assert capsys.readouterr().out == "2\n"
    assert main(["score", graph_file, "--account", "acct", "--security"]) == 0
    assert capsys.readouterr().out == "medium\n"


def test_score_two_metrics_are_labelled(graph_file, capsys):
    assert main([
        "score", graph_file, "--account", "acct", "--security", "--legacy",
    ]) == 0
    assert capsys.readouterr().out == (
        "security: medium\nlegacy (reconstructed): 3/2 (1.5)\n"
    )


def test_score_json(graph_file, capsys):
    assert main(["score", graph_file, "--account", "acct", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["account"] == "acct"
    assert payload["security"] == "medium"
    assert payload["accessibility"]["score"] == "2"
    assert payload["accessibility"]["narrative"] == EXAMPLE_NARRATIVE
    assert payload["legacy_accessibility"] == {
        "score": "3/2", "score_decimal": 1.5, "label": "legacy (reconstructed)",
    }


def test_score_json_single_metric_omits_legacy(graph_file, capsys):
    assert main([
        "score", graph_file, "--account", "acct", "--accessibility", "--json",
    ]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert "legacy_accessibility" not in payload


def test_score_unknown_account(graph_file, capsys):
    assert main(["score", graph_file, "--account", "ghost"]) == 1
    assert "ghost" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# explain


def test_explain_block(graph_file, capsys):
    assert main(["explain", graph_file, "--account", "acct"]) == 0
    assert capsys.readouterr().out == (
        "formula: (Memory ∧ (Tablet ∨ Phone)) ∨ Phone\n"
        "reduced: (Memory ∧ Tablet) ∨ Phone\n"
        "security: medium\n"
        "accessibility: 2\n"
        "lockout sets:\n"
        "  - Memory, Phone\n"
        "  - Phone, Tablet\n"
        f"{EXAMPLE_NARRATIVE}\n"
    )


def test_explain_json_matches_score_json(graph_file, capsys):
    assert main(["explain", graph_file, "--account", "acct", "--json"]) == 0
    explain_payload = json.loads(capsys.readouterr().out)
    assert main(["score", graph_file, "--account", "acct", "--json"]) == 0
    score_payload = json.loads(capsys.readouterr().out)
    assert explain_payload == score_payload


# ---------------------------------------------------------------------------
# what-if


def test_what_if_accessible(graph_file, capsys):
    assert main(["what-if", graph_file, "--account", "acct", "--lose", "phone"]) == 0
    assert capsys.readouterr().out == "accessible\nscore after loss: 1\n"


def test_what_if_inaccessible(graph_file, capsys):
    assert main([
        "what-if", graph_file, "--account", "acct", "--lose", "phone,tablet",
    ]) == 0
    assert capsys.readouterr().out == "inaccessible\n"


def test_what_if_json(graph_file, capsys):
    assert main([
        "what-if", graph_file, "--account", "acct", "--lose", " phone ,", "--json",
    ]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["account"] == "acct"
    assert payload["lost"] == ["phone"]
    assert payload["accessible"] is True
    assert payload["accessibility"]["score"] == "1"
    assert payload["accessibility"]["band"] == "red"
    assert payload["accessibility"]["narrative"] == (
        "Access to Account might be lost when losing Tablet, "
        "or forgetting your password"
    )


def test_what_if_unknown_method(graph_file, capsys):
    assert main(["what-if", graph_file, "--account", "acct", "--lose", "ghost"]) == 1
    assert capsys.readouterr().err.startswith("error:")


# ---------------------------------------------------------------------------
# convert / batch


def test_convert_writes_one_document_per_row(tmp_path, capsys):
    out_dir = tmp_path / "graphs"
    assert main([
        "convert", "--survey", str(SAMPLES / "survey.csv"), "--out", str(out_dir),
    ]) == 0
    names = sorted(p.name for p in out_dir.iterdir())
    assert names == [
        "user-000.json", "user-001.json", "user-002.json", "user-003.json",
    ]
    assert capsys.readouterr().out == f"wrote 4 graph(s) to {out_dir}\n"
    document = json.loads((out_dir / "user-000.json").read_text())
    assert main(["validate", write_doc(tmp_path, document)]) == 0


def test_convert_reports_bad_rows(tmp_path, capsys):
    survey = tmp_path / "survey.jsonl"
    survey.write_text('{"provider": "google", "google": {}}\n{oops\n')
    out_dir = tmp_path / "graphs"
    assert main(["convert", "--survey", str(survey), "--out", str(out_dir)]) == 1
    out = capsys.readouterr()
    assert "error: row 1:" in out.err
    assert out.out == f"wrote 1 graph(s) to {out_dir}\n"
    assert (out_dir / "user-000.json").exists()


def test_batch_writes_report(tmp_path, capsys):
    report_path = tmp_path / "report.json"
    assert main([
        "batch", "--survey", str(SAMPLES / "survey.csv"),
        "--report", str(report_path),
    ]) == 0
    assert capsys.readouterr().out == (
        f"analyzed 4 user(s), 0 error row(s); report at {report_path}\n"
    )
    payload = json.loads(report_path.read_text())
    assert payload["aggregates"]["count"] == 4


def test_batch_to_stdout(tmp_path, capsys):
    assert main([
        "batch", "--survey", str(SAMPLES / "survey.csv"), "--report", "-",
    ]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert len(payload["users"]) == 4


# ---------------------------------------------------------------------------
# scoring policy sources


def policy_file(tmp_path, overrides, name):
    path = tmp_path / name
    path.write_text(json.dumps({"overrides": overrides}))
    return str(path)


def test_policy_flag(graph_file, tmp_path, capsys):
    path = policy_file(tmp_path, {"sms": "low"}, "weak-sms.json")
    assert main([
        "score", graph_file, "--account", "acct", "--security", "--policy", path,
    ]) == 0
    assert capsys.readouterr().out == "low\n"


def test_policy_env_var(graph_file, tmp_path, capsys, monkeypatch):
    path = policy_file(tmp_path, {"sms": "low"}, "weak-sms.json")
    monkeypatch.setenv(POLICY_ENV_VAR, path)
    assert main(["score", graph_file, "--account", "acct", "--security"]) == 0
    assert capsys.readouterr().out == "low\n"


def test_policy_flag_beats_env(graph_file, tmp_path, capsys, monkeypatch):
    monkeypatch.setenv(
        POLICY_ENV_VAR, policy_file(tmp_path, {"sms": "low"}, "env.json")
    )
    flag = policy_file(tmp_path, {}, "flag.json")
    assert main([
        "score", graph_file, "--account", "acct", "--security", "--policy", flag,
    ]) == 0
    assert capsys.readouterr().out == "medium\n"


def test_bad_policy_file(graph_file, tmp_path, capsys):
    path = tmp_path / "policy.json"
    path.write_text('{"defaults": {"knowledge_based": "extreme"}}')
    assert main([
        "score", graph_file, "--account", "acct", "--policy", str(path),
    ]) == 1
    assert "extreme" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# usage errors exit with the argparse convention


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["make-coffee"],
        ["score", "graph.json"],  # --account is required
        ["what-if", "graph.json", "--account", "acct"],  # --lose is required
    ],
)
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as err:
        main(argv)
    assert err.value.code == 2
    capsys.readouterr()

import io
import json
import subprocess
import sys

import jsonschema
import pytest

from loopdmd.cli import main

from corpus import BY_NAME, MATMUL

FORMULA_SCHEMA = {
    "type": "object",
    "properties": {"plain": {"type": "string"}, "latex": {"type": "string"}},
    "required": ["plain", "latex"],
}

REPORT_SCHEMA = {
    "type": "object",
    "properties": {
        "program": {
            "type": "object",
            "properties": {"params": {"type": "array", "items": {"type": "string"}}},
            "required": ["params"],
        },
        "config": {"type": "object"},
        "dmd": FORMULA_SCHEMA,
        "counts": {
            "type": "object",
            "properties": {
                "n_total": FORMULA_SCHEMA,
                "n_warm": FORMULA_SCHEMA,
                "n_cold": FORMULA_SCHEMA,
            },
            "required": ["n_total", "n_warm", "n_cold"],
        },
        "groups": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "rd": FORMULA_SCHEMA,
                    "multiplicity": FORMULA_SCHEMA,
                    "scaling": {"type": "boolean"},
                    "class": {
                        "type": "object",
                        "properties": {
                            "source": {"type": "integer"},
                            "pred": {"type": "integer"},
                            "carrier": {"type": "integer"},
                        },
                        "required": ["source", "pred", "carrier"],
                    },
                },
                "required": ["rd", "multiplicity", "scaling", "class"],
            },
        },
        "diagnostics": {"type": "array"},
    },
    "required": ["program", "config", "dmd", "counts", "groups", "diagnostics"],
}


def run_cli(argv, stdin_text=None):
    out, err = io.StringIO(), io.StringIO()
    old_stdin = sys.stdin
    try:
        if stdin_text is not None:
            sys.stdin = io.StringIO(stdin_text)
        code = main(argv, stdout=out, stderr=err)
    finally:
        sys.stdin = old_stdin
    return code, out.getvalue(), err.getvalue()


@pytest.fixture()
def matmul_file(tmp_path):
    path = tmp_path / "matmul.dsl"
    path.write_text(MATMUL)
    return str(path)


def test_text_report_contains_dmd(matmul_file):
    code, out, err = run_cli(["--input", matmul_file])
    assert code == 0
    assert "DMD formula" in out
    assert "sqrt" in out
    assert "n_cold = K * M + K * N + M * N" in out


def test_json_report_schema_and_exit_code(matmul_file):
    code, out, _ = run_cli(["--input", matmul_file, "--json"])
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, REPORT_SCHEMA)
    assert doc["program"]["params"] == ["M", "N", "K"]
    assert doc["counts"]["n_total"]["plain"] == "4 * K * M * N"


def test_json_deterministic_across_runs(matmul_file):
    _, first, _ = run_cli(["--input", matmul_file, "--json"])
    _, second, _ = run_cli(["--input", matmul_file, "--json"])
    assert first == second


def test_missing_file_exit_2():
    code, out, err = run_cli(["--input", "/nonexistent/nosuch.dsl"])
    assert code == 2
    assert "error" in err.lower()
    assert out == ""


def test_diagnostics_exit_1():
    code, out, err = run_cli([], stdin_text="params N;\narray A[N, N];\nread A[0];\n")
    assert code == 1
    assert "rank mismatch" in err


def test_diagnostics_in_json_mode():
    code, out, _ = run_cli(["--json"], stdin_text="read A[i*j];")
    assert code == 1
    doc = json.loads(out)
    assert doc["diagnostics"]
    for d in doc["diagnostics"]:
        assert set(d) == {"category", "message", "start", "end"}


def test_concrete_mode_exact_counts(matmul_file):
    code, out, _ = run_cli(
        ["--input", matmul_file, "--param", "M=4", "--param", "N=4", "--param", "K=4",
         "--json"]
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["concrete"]["n_total"] == 256
    assert doc["concrete"]["n_cold"] == 48
    assert doc["config"]["mode"] == "concrete"


def test_concrete_mode_bad_param_exit_2(matmul_file):
    code, _, err = run_cli(["--input", matmul_file, "--param", "Q=4"])
    assert code == 2
    assert "Q" in err


def test_ignored_flags_warn(matmul_file):
    code, _, err = run_cli(
        ["--input", matmul_file, "--max-operations", "100", "--approximation-method", "scale",
         "--param", "M=2", "--param", "N=2", "--param", "K=2"]
    )
    assert code == 0
    assert "--max-operations" in err and "ignored" in err
    assert "--approximation-method" in err


def test_stdin_input():
    code, out, _ = run_cli(
        ["--param", "N=5", "--json"],
        stdin_text="params N;\narray A[N];\nfor i in 0 .. N {\n  read A[i];\n}\n",
    )
    assert code == 0
    assert json.loads(out)["concrete"]["n_cold"] == 5


def test_sampled_corpus_json_schema_and_determinism():
    """Spot-check a few corpus entries here; the acceptance suite covers all."""
    for name in ("walkthrough", "stencil1d", "conditional_diag", "stepped2", "random03"):
        entry = BY_NAME[name]
        argv = ["--json"] + entry.cli_args
        code1, out1, _ = run_cli(argv, stdin_text=entry.source)
        assert code1 == 0, name
        doc = json.loads(out1)
        jsonschema.validate(doc, REPORT_SCHEMA)
        code2, out2, _ = run_cli(argv, stdin_text=entry.source)
        assert out1 == out2, name


def test_installed_entry_point_subprocess(matmul_file):
    proc = subprocess.run(
        [sys.executable, "-m", "loopdmd.cli", "--input", matmul_file, "--json"],
        capture_output=True,
        text=True,
        timeout=300,
    )
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["counts"]["n_cold"]["plain"] == "K * M + K * N + M * N"

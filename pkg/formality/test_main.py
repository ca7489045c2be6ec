"""
Test script for the command line
Runs gen, witness, verify and friends through run() and checks exit statuses
"""

import io
import json
import logging
import sys
import os

import pytest

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from formality.config import FIELD_ENV_VAR
from formality.main import EXIT_INPUT, EXIT_OK, EXIT_VERDICT, run

# Configure logging for testing
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)

logger = logging.getLogger(__name__)


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv(FIELD_ENV_VAR, raising=False)
    return tmp_path


def generate(workdir, name, *options):
    path = workdir / name
    assert run(["--format", "json", "-o", str(path), "gen", *options]) == EXIT_OK
    return path


def test_gen_writes_a_document(workdir):
    path = generate(workdir, "p2.json", "--kind", "projective", "--n", "2")
    doc = json.loads(path.read_text())
    assert doc["schema"] == 1
    assert doc["kind"] == "dga"
    assert doc["meta"]["alpha"] == "1/2"


def test_witness_then_verify(workdir):
    p2 = generate(workdir, "p2.json", "--kind", "projective", "--n", "2")
    cert = workdir / "cert.json"
    assert run(["--format", "json", "-o", str(cert), "witness", str(p2)]) == EXIT_OK
    assert json.loads(cert.read_text())["kind"] == "certificate"
    assert run(["verify", str(cert)]) == EXIT_OK

    doc = json.loads(cert.read_text())
    doc["overall_N"] = 7
    cert.write_text(json.dumps(doc))
    assert run(["verify", str(cert)]) == EXIT_VERDICT


def test_report_on_configuration_space_of_the_line(workdir, capsys):
    path = generate(workdir, "f3.json", "--kind", "configuration", "--points", "3", "--d", "1", "--l", "5")
    capsys.readouterr()
    assert run(["--format", "json", "report", str(path)]) == EXIT_VERDICT
    payload = json.loads(capsys.readouterr().out)
    assert payload["failed_stage"] == "model"
    assert payload["betti"] == {"0": 1, "1": 3, "2": 2}


def test_grade_random_tate(workdir):
    clean = generate(workdir, "tate.json", "--kind", "random_tate", "--seed", "3")
    assert run(["-o", str(workdir / "graded.json"), "grade", str(clean)]) == EXIT_OK
    dirty = generate(workdir, "dirty.json", "--kind", "random_tate", "--seed", "3", "--contaminate")
    assert run(["grade", str(dirty)]) == EXIT_VERDICT


def test_purity_and_massey(workdir, capsys):
    p2 = generate(workdir, "p2.json", "--kind", "projective", "--n", "2")
    assert run(["purity", str(p2)]) == EXIT_OK
    assert run(["purity", "--alpha", "1", str(p2)]) == EXIT_VERDICT
    assert run(["massey", str(p2), "--classes", "[x],[x],[x]"]) == EXIT_OK

    capsys.readouterr()
    assert run(["--format", "json", "massey", "--predicate", "--alpha", "1/2", "--modulus", "3", "--k", "3"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["predicate"] == "forced-vanish"


def test_input_errors(workdir, capsys):
    assert run(["validate", str(workdir / "missing.json")]) == EXIT_INPUT
    assert run(["no-such-command"]) == EXIT_INPUT
    assert run(["massey", "--predicate", "--k", "3"]) == EXIT_INPUT

    p2 = generate(workdir, "p2.json", "--kind", "projective", "--n", "2")
    doc = json.loads(p2.read_text())
    doc["schema"] = 2
    p2.write_text(json.dumps(doc))
    capsys.readouterr()
    assert run(["--format", "json", "validate", str(p2)]) == EXIT_INPUT
    assert json.loads(capsys.readouterr().out)["pointer"] == "/schema"


def test_zigzag_on_generated_algebras(workdir, monkeypatch):
    gm = generate(workdir, "gm.json", "--kind", "gm", "--normalization", "weil")
    cert = workdir / "gm_cert.json"
    assert run(["--format", "json", "-o", str(cert), "zigzag", str(gm)]) == EXIT_OK
    assert json.loads(cert.read_text())["overall_N"] == 1
    assert run(["verify", str(cert)]) == EXIT_OK

    tate_gm = generate(workdir, "gm_tate.json", "--kind", "gm")
    assert run(["zigzag", "--alpha", "1", str(tate_gm)]) == EXIT_OK
    assert run(["zigzag", "--alpha", "2", str(tate_gm)]) == EXIT_VERDICT

    p2 = generate(workdir, "p2.json", "--kind", "projective", "--n", "2")
    monkeypatch.setattr(sys, "stdin", io.StringIO(p2.read_text()))
    assert run(["zigzag", "-"]) == EXIT_OK


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))

import json
from unittest.mock import patch

import pytest

from bigraded_formality import corpus
from bigraded_formality.cli import main
from bigraded_formality.errors import PreconditionFailed


def _run(capsys, *argv):
    code = main(list(argv))
    report = json.loads(capsys.readouterr().out)
    assert report["exit_code"] == code
    return code, report


@pytest.mark.parametrize("argv,expected", [
    (["ddbar-check", "corpus:square"], 0),
    (["ddbar-check", "corpus:zigzag2"], 1),
    (["sd-check", "--n", "1", "corpus:cp1-ring"], 0),
    (["s-strong", "--s", "2", "corpus:iwasawa-style"], 1),
    (["strong", "--n", "1", "corpus:cp1-model"], 0),
    (["promote", "--n", "1", "corpus:cp1-model"], 0),
    (["relations-check", "--n", "3", "corpus:clemens-shape"], 0),
    (["relations-check", "--n", "3", "corpus:cp1-ring"], 1),
    (["central-model", "corpus:central-n3-generic"], 0),
    (["central-model", "corpus:central-n3-special"], 0),
    (["relations-model", "--n", "3", "corpus:clemens-shape"], 0),
    (["relations-model", "--n", "3", "corpus:cp1-ring"], 2),
    (["lefschetz-extend", "corpus:cp2-to-cp1"], 0),
])
def test_exit_codes(capsys, argv, expected):
    code, report = _run(capsys, *argv)
    assert code == expected
    assert report["command"] == argv[0]


def test_failure_carries_a_witness(capsys):
    code, report = _run(capsys, "ddbar-check", "corpus:zigzag2")
    assert code == 1
    assert report["verdict"] is False
    assert report["result"]["bidegree"] == "(0,1)"
    assert report["result"]["witness"] == "1 * c"


def test_input_errors_exit_with_two(capsys, tmp_path):
    code, report = _run(capsys, "validate", str(tmp_path / "missing.pres"))
    assert code == 2
    assert report["result"]["error"] == "FileNotFoundError"

    code, report = _run(capsys, "validate", "corpus:no-such-entry")
    assert code == 2
    assert report["result"]["error"] == "UnknownCorpusEntry"

    bad = tmp_path / "bad.pres"
    bad.write_text("generator x bidegree (1,1)\ngenerator y bidegree (1,1)\ndel x = y\n")
    code, report = _run(capsys, "validate", str(bad))
    assert code == 2
    assert report["result"]["error"] == "GradingViolation"


def test_obstruction_exits_with_one(capsys):
    code, report = _run(capsys, "split", "--s", "2", "corpus:iwasawa-style")
    assert code == 1
    assert report["result"]["error"] == "SplittingObstructed"
    assert report["result"]["bidegree"] == "(0,2)"


def test_report_written_to_file(capsys, tmp_path):
    out = tmp_path / "report.json"
    code = main(["--out", str(out), "cohomology", "--kind", "A", "corpus:cp1-ring"])
    assert code == 0
    assert capsys.readouterr().out == ""
    report = json.loads(out.read_text())
    assert report["result"]["kind"] == "A"
    assert report["result"]["dims"]["(1,1)"] == 1


def test_corpus_listing(capsys):
    code, report = _run(capsys, "corpus", "list")
    assert code == 0
    names = [e["name"] for e in report["result"]["entries"]]
    assert "cp1-model" in names and "zigzag2" in names


def test_presentation_file_input(capsys):
    from pathlib import Path

    fixture = Path(__file__).parent / "fixtures" / "cp1_model.pres"
    code, report = _run(capsys, "--threads", "1", "validate", str(fixture))
    assert code == 0
    assert report["result"]["kind"] == "free"
    assert report["result"]["minimal"] is True


CORPUS_EXIT_CODES = {
    "dot": 0,
    "square": 0,
    "zigzag2": 1,
    "cp1-ring": 0,
    "cp2-ring": 0,
    "cp1xcp1-ring": 0,
    "cp1-model": 0,
    "cp2-model": 0,
    "cp3-model": 0,
    "iwasawa-style": 1,
    "central-n3-generic": 0,
    "central-n3-special": 0,
    "clemens-shape": 0,
    "clemens-model": 0,
    "k3-shape-reduced": 0,
    "cp2-to-cp1": 0,
    "cp3-to-k3": 1,
}


def test_every_corpus_entry_has_an_expected_exit_code():
    assert set(CORPUS_EXIT_CODES) == set(corpus.names())


@pytest.mark.parametrize("name,expected", sorted(CORPUS_EXIT_CODES.items()))
def test_corpus_run_exit_codes(capsys, name, expected):
    code, report = _run(capsys, "corpus", "run", name)
    assert code == expected
    assert report["command"] == corpus.entry(name).command


def test_extension_obstruction_is_reported(capsys):
    code, report = _run(capsys, "corpus", "run", "cp3-to-k3")
    assert code == 1
    assert report["verdict"] is False
    result = report["result"]
    assert result["name"] == "cp3-model-to-k3-shape-reduced"
    assert result["verification"]["passed"] is True
    assert result["promotion"] is None
    assert result["obstruction"]["error"] == "CompletionObstructed"
    assert result["obstruction"]["bidegree"] == "(0,4)"


def test_extension_report_carries_the_promotion(capsys):
    code, report = _run(capsys, "corpus", "run", "cp2-to-cp1")
    assert code == 0
    result = report["result"]
    assert result["name"] == "cp2-model-to-cp1-ring"
    assert result["obstruction"] is None
    assert result["promotion"]["verification"]["passed"] is True
    assert result["passes"] >= 1


def test_built_model_precondition_failure_exits_with_one(capsys):
    failure = PreconditionFailed("not 1-SD")
    with patch("bigraded_formality.builder.promote", side_effect=failure):
        code, report = _run(capsys, "corpus", "run", "cp2-to-cp1")
    assert code == 1
    assert report["result"]["obstruction"]["error"] == "PromotionObstructed"

    with patch("bigraded_formality.builder.promote", side_effect=failure):
        code, report = _run(capsys, "central-model", "corpus:central-n3-generic")
    assert code == 1
    assert report["result"]["error"] == "PromotionObstructed"

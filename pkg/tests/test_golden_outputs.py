import hashlib
import json
from pathlib import Path

from bigraded_formality import corpus
from bigraded_formality.pipeline import run
from bigraded_formality.presentation import serialize

FIXTURE_DIR = Path(__file__).parent / "fixtures"


def test_golden_cohomology_report():
    """
    Tests that the Bott-Chern report of the ℂP¹ ring matches the golden
    JSON; the input hash is checked separately against the canonical text.
    """
    expected_json_path = FIXTURE_DIR / "cp1_ring_cohomology.expected.json"
    with open(expected_json_path, "r") as f:
        expected_data = json.load(f)

    actual_data = run("cohomology", "corpus:cp1-ring").model_dump(mode="json")
    sha = actual_data.pop("sha256")

    assert actual_data == expected_data, "The cohomology report does not match the golden fixture."
    canonical = serialize(corpus.presentation("cp1-ring"))
    assert sha == hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def test_report_is_deterministic():
    first = run("dims", "corpus:square").model_dump_json(indent=2)
    second = run("dims", "corpus:square").model_dump_json(indent=2)
    assert first == second

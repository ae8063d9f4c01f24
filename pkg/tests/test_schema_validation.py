import pytest
from pydantic import ValidationError

from bigraded_formality.builder import HodgeInput
from bigraded_formality.schema import ExtensionSpec, Report


def test_report_envelope_defaults():
    report = Report(version="0.1.0", command="dims", exit_code=0)
    assert report.tool == "bigraded-formality"
    assert report.verdict is None
    assert report.result == {}


def test_report_rejects_unknown_fields_and_codes():
    with pytest.raises(ValidationError):
        Report(version="0.1.0", command="dims", exit_code=3)
    with pytest.raises(ValidationError):
        Report(version="0.1.0", command="dims", exit_code=0, extra="x")


def test_extension_spec_bounds():
    spec = ExtensionSpec(model="corpus:cp2-model", target="corpus:cp1-ring", n=1)
    assert spec.truncation is None
    with pytest.raises(ValidationError):
        ExtensionSpec(model="m", target="t", n=0)


def test_hodge_input_coerces_degree_keys():
    h = HodgeInput.model_validate({"n": 3, "primitive": {"3": {"(3,0)": 1}}})
    assert h.primitive == {3: {"(3,0)": 1}}
    with pytest.raises(ValidationError):
        HodgeInput.model_validate({"n": 3, "unexpected": True})

import pytest

from bigraded_formality import corpus
from bigraded_formality.bigraded import Bidegree
from bigraded_formality.errors import MorphismViolation, PreconditionFailed
from bigraded_formality.psi import build_psi
from bigraded_formality.splitting import SplittingCertificate, strong_check
from bigraded_formality.validation import validate


def _load(name):
    return validate(corpus.presentation(name))


def _gen(algebra, name):
    return algebra.generator_element(algebra.generator_index(name))


def test_psi_on_cp1_model():
    algebra = _load("cp1-model")
    psi = build_psi(algebra, strong_check(algebra, 1).certificate)
    assert set(psi.checks) == {"well_defined", "kills_differentials", "multiplicative", "bc_agreement",
                               "a_agreement", "onto", "injective"}
    assert psi.checks["well_defined"] > 0
    assert psi.checks["bc_agreement"] > 0
    assert psi.checks["onto"] > 0
    # x is its own class, r lies in the ideal and maps to zero
    assert psi.assignment[str(_gen(algebra, "x"))] == ["1"]
    assert psi.assignment[str(_gen(algebra, "r"))] == ["0"]
    assert psi.ranks["(1,1)"] == 1


def test_psi_rejects_an_unverified_certificate():
    algebra = _load("cp1-model")
    x, r = _gen(algebra, "x"), _gen(algebra, "r")
    bad = SplittingCertificate(algebra.name, 2, "s=2", {Bidegree(1, 1): (r,)}, {Bidegree(1, 1): (x,)})
    with pytest.raises(MorphismViolation, match="does not verify"):
        build_psi(algebra, bad)


def test_psi_needs_a_free_algebra():
    ring = _load("cp1-ring")
    certificate = SplittingCertificate(ring.name, 1, "s=1", {}, {})
    with pytest.raises(PreconditionFailed):
        build_psi(ring, certificate)

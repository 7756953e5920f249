from dataclasses import replace

from rmatrix_geometry.core.model.curves import sample_cbar, sample_s
from rmatrix_geometry.core.model.params import ModelParams
from rmatrix_geometry.core.numkit.sampling import derive_rng
from rmatrix_geometry.core.rmatrix.entries import rational_entries, symmetric_entries
from rmatrix_geometry.core.verify.identities import (
    identity_suite_generic,
    identity_suite_symmetric,
    symmetric_transpose_check,
    twist_covariance_check,
)

COUPLINGS = ((2, 0.6), (1.5 + 0.2j, 1 / 3 + 1j / 7))


def test_generic_identities_hold_on_s():
    for q, g in COUPLINGS:
        mp = ModelParams.create(q, g)
        rng = derive_rng(0, "identities")
        for _ in range(3):
            es = rational_entries(sample_s(mp, rng), sample_s(mp, rng), mp)
            report = identity_suite_generic(es, mp)
            assert report.passed, report.metadata["parts"]
            assert set(report.metadata["parts"]) == {"Q1", "Q2", "Q3", "Q4", "Q5"}


def test_generic_identities_catch_a_wrong_entry():
    mp = ModelParams.create(2, 0.6)
    rng = derive_rng(1, "identities")
    es = rational_entries(sample_s(mp, rng), sample_s(mp, rng), mp)
    report = identity_suite_generic(replace(es, a=es.a * 1.001, c=es.c * 0.999), mp)
    assert not report.passed
    assert report.max_residual > 1e-9


def test_symmetric_gauge_identities():
    mp = ModelParams.create(2, 0.6)
    rng = derive_rng(2, "identities")
    es = symmetric_entries(sample_cbar(mp, rng), sample_cbar(mp, rng), mp)
    report = identity_suite_symmetric(es, mp)
    assert report.passed, report.metadata["parts"]
    assert "Q5(cb=c, db=d)" in report.metadata["parts"]


def test_twist_covariance():
    for q, g in COUPLINGS:
        mp = ModelParams.create(q, g)
        rng = derive_rng(3, "twist")
        report = twist_covariance_check(sample_s(mp, rng), sample_s(mp, rng), mp)
        assert report.passed, report.max_residual


def test_symmetric_transpose():
    mp = ModelParams.create(2, 0.6)
    rng = derive_rng(4, "transpose")
    report = symmetric_transpose_check(sample_cbar(mp, rng), sample_cbar(mp, rng), mp)
    assert report.passed, report.metadata["parts"]
    assert len(report.metadata["parts"]) == 8


def test_tolerance_override():
    mp = ModelParams.create(2, 0.6)
    rng = derive_rng(5, "identities")
    es = rational_entries(sample_s(mp, rng), sample_s(mp, rng), mp)
    report = identity_suite_generic(es, mp, tol=1e-300)
    assert report.tolerance == 1e-300

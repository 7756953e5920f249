import math

from rmatrix_geometry.core.errors import DegeneracyError, MapInconsistencyError
from rmatrix_geometry.core.model.params import ModelParams
from rmatrix_geometry.core.numkit.residual import residual_from_terms
from rmatrix_geometry.core.verify.report import (
    MAX_TRIAL_RESAMPLES,
    CheckReport,
    expect_failure,
    failure,
    resolve_tolerance,
    run_trials,
    select_variant,
)


def test_build_and_flag():
    ok = CheckReport.build("x", [1e-12, 3e-11], 1e-10)
    assert ok.passed
    assert ok.max_residual == 3e-11
    assert not CheckReport.build("x", [], 1e-10).passed
    assert not CheckReport.build("x", [0.0], 1e-10, degenerate=True).passed
    assert CheckReport.flag("f", True).passed
    assert not CheckReport.flag("f", False).passed


def test_from_parts_records_labels_and_degeneracy():
    parts = {"zero": residual_from_terms([1, -1]), "small": 1e-12}
    report = CheckReport.from_parts("p", parts, 1e-10)
    assert report.passed
    assert report.metadata["parts"] == {"zero": 0.0, "small": 1e-12}

    tainted = CheckReport.from_parts("p", {"empty": residual_from_terms([])}, 1e-10)
    assert tainted.degenerate
    assert not tainted.passed


def test_expect_failure():
    failing = CheckReport.build("c", [1.0], 1e-10)
    assert expect_failure(failing, "ctl").passed
    assert expect_failure(failing, "ctl").metadata["control_residual"] == 1.0
    assert not expect_failure(CheckReport.build("c", [0.0], 1e-10), "ctl").passed
    degenerate = CheckReport.build("c", [1.0], 1e-10, degenerate=True)
    assert not expect_failure(degenerate, "ctl").passed


def test_select_variant_needs_exactly_one():
    one = select_variant("v", {"plain": 1e-14, "twisted": 0.3}, 1e-8)
    assert one.passed
    assert one.metadata["selected"] == "plain"
    assert one.max_residual == 1e-14

    both = select_variant("v", {"plain": 1e-14, "twisted": 1e-13}, 1e-8)
    assert not both.passed
    assert both.metadata["selected"] is None

    neither = select_variant("v", {"plain": 0.1, "twisted": 0.3}, 1e-8)
    assert not neither.passed


def test_resolve_tolerance():
    mp = ModelParams.create(2, 0.6)
    assert resolve_tolerance(mp, 1e-9, None) == 1e-9
    assert resolve_tolerance(mp, 1e-12, None) == 1e-10
    assert resolve_tolerance(mp, 1e-9, 1e-30) == 1e-30


def test_failure_report():
    err = MapInconsistencyError(code="E_MAP_CHAN_OFF_E1", message="off")
    report = failure("maps.chan", 1e-9, err, extra=1)
    assert not report.passed
    assert math.isinf(report.max_residual)
    assert report.metadata["error"] == {"code": "E_MAP_CHAN_OFF_E1", "message": "off"}
    assert report.metadata["extra"] == 1


def _noisy(rng):
    return CheckReport.build("noisy", [rng.random() * 1e-12], 1e-10)


def test_run_trials_is_deterministic_and_worker_independent():
    a = run_trials("noisy", _noisy, seed=11, trials=8, tol=1e-10)
    b = run_trials("noisy", _noisy, seed=11, trials=8, tol=1e-10, workers=4)
    c = run_trials("noisy", _noisy, seed=12, trials=8, tol=1e-10)
    assert a.passed
    assert a.residuals == b.residuals
    assert a.residuals != c.residuals
    assert a.metadata["successful_trials"] == 8


def test_run_trials_resamples_degeneracies():
    def sometimes(rng):
        if rng.random() < 0.5:
            raise DegeneracyError(code="E_TEST_DEGENERATE", message="resample")
        return CheckReport.build("s", [0.0], 1e-10)

    report = run_trials("s", sometimes, seed=0, trials=10, tol=1e-10)
    assert report.passed
    assert report.metadata["successful_trials"] == 10
    assert report.metadata["dropped_trials"] == 0


def test_run_trials_drops_hopeless_trials():
    def never(rng):
        raise DegeneracyError(code="E_TEST_DEGENERATE", message="always")

    report = run_trials("n", never, seed=0, trials=3, tol=1e-10)
    assert report.degenerate
    assert not report.passed
    assert report.metadata["dropped_trials"] == 3
    assert report.metadata["resamples"] == 3 * MAX_TRIAL_RESAMPLES
    assert report.metadata["degeneracy_codes"] == ["E_TEST_DEGENERATE"]


def test_run_trials_merges_variants():
    def trial(rng):
        return CheckReport.build(
            "v", [1e-12], 1e-8, metadata={"variants": {"e=1": 0.2, "e=2": 1e-12}}
        )

    report = run_trials("v", trial, seed=0, trials=3, tol=1e-8, select_variant=True)
    assert report.passed
    assert report.metadata["selected"] == "e=2"

    def ambiguous(rng):
        return CheckReport.build("v", [1e-12], 1e-8, metadata={"variants": {"a": 0, "b": 0}})

    report = run_trials("v", ambiguous, seed=0, trials=2, tol=1e-8, select_variant=True)
    assert not report.passed


def test_run_trials_fails_on_any_failed_trial():
    def trial(rng):
        return CheckReport.flag("f", rng.random() > 0.3)

    report = run_trials("f", trial, seed=3, trials=20, tol=0.5)
    assert not report.passed
    assert report.metadata["failed_trials"]

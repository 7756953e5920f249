from rmatrix_geometry.core.model.params import ModelParams
from rmatrix_geometry.core.numkit.sampling import derive_rng
from rmatrix_geometry.core.verify.appendix_b import (
    appendix_b_pipeline,
    qtilde5_cross_check,
    rescaling_check,
)


def test_rescaled_target_is_stilde():
    for q, g in ((2, 0.6), (1.5 + 0.2j, 1 / 3 + 1j / 7)):
        report = rescaling_check(ModelParams.create(q, g))
        assert report.passed, report.metadata


def test_qtilde5_matches_eliminated_q5():
    mp = ModelParams.create(2, 0.6)
    report = qtilde5_cross_check(mp, derive_rng(0, "qtilde5"), 1e-8)
    assert report.passed, report.max_residual


def test_pipeline_selects_square_exponent():
    mp = ModelParams.create(2, 0.6)
    pipeline, rescaling, cross = appendix_b_pipeline(mp, 3, seed=7)
    assert pipeline.name == "appendix-b.pipeline"
    assert pipeline.passed, pipeline.metadata
    assert pipeline.metadata["selected"] == "e=2"
    assert pipeline.metadata["variants"]["e=1"] > pipeline.tolerance
    assert rescaling.passed
    assert cross.passed

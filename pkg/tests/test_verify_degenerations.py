from rmatrix_geometry.core.model.params import ModelParams
from rmatrix_geometry.core.numkit.sampling import derive_rng
from rmatrix_geometry.core.verify.degenerations import (
    a_square_check,
    cbar_component_check,
    component_j_check,
    expected_component_j,
    psi_cover_check,
    sextic_factorization_check,
)
from rmatrix_geometry.core.verify.report import expect_failure


def test_sextic_factorizes_on_subm():
    for eps in (1, -1):
        report = sextic_factorization_check(4, eps)
        assert report.passed, report.metadata
        assert report.name == f"degenerations.sextic[eps={eps:+d}]"


def test_sextic_control_off_subm():
    for eps in (1, -1):
        control = sextic_factorization_check(4, eps, u_scale=1.01)
        assert not control.passed
        assert expect_failure(control, "control").passed


def test_a_is_a_square_at_zero_u():
    for q in (2, 1.5 + 0.2j):
        report = a_square_check(q)
        assert report.passed, report.max_residual
        assert report.metadata["surviving_terms"] == 0 or report.max_residual < 1e-12


def test_cubic_components_lie_on_cbar():
    for eps in (1, -1):
        report = cbar_component_check(4, eps, 4, seed=1)
        assert report.passed, report.metadata
        assert report.metadata["epsilon"] == eps


def test_cubic_component_control():
    for eps in (1, -1):
        report = cbar_component_check(4, eps, 3, seed=1, u_scale=1.01)
        assert not report.passed
        assert not report.degenerate


def test_component_j_values():
    assert abs(complex(expected_component_j(2, -1)) - 1728) < 1e-12
    assert abs(complex(expected_component_j(2, 1)) - 64 * 7**3 * 13**3 / (81 * 25)) < 1e-6
    for eps in (1, -1):
        report = component_j_check(2, eps, derive_rng(0, "component_j", eps))
        assert report.passed, report.metadata
        assert set(report.metadata["variants"]) == {"factor", "printed"}


def test_psi_cover():
    mp = ModelParams.create(2, 0.6)
    report = psi_cover_check(mp, derive_rng(0, "psi"))
    assert report.passed, report.metadata["parts"]

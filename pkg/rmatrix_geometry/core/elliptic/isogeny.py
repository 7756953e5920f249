from __future__ import annotations

import logging

from rmatrix_geometry.core.elliptic.context import context
from rmatrix_geometry.core.elliptic.invariants import (
    E3_READINGS,
    e3_weierstrass,
    j_e1,
    j_e2,
    j_e3,
    j_from_weierstrass,
    j_invariants,
    jacobi_quartic_j,
    legendre_j,
    phi2_residual,
)
from rmatrix_geometry.core.errors import NumericError
from rmatrix_geometry.core.model.params import ModelParams
from rmatrix_geometry.core.numkit.residual import ResidualReport, relative_difference

log = logging.getLogger(__name__)

MIN_ISOGENY_BITS = 128
ISOGENY_BITS = 256


def _working(mp: ModelParams) -> ModelParams:
    if mp.precision_bits < MIN_ISOGENY_BITS:
        raise NumericError(
            code="E_ISOGENY_PRECISION",
            message=(
                f"Phi2 cancels across ~15 orders of magnitude; {mp.precision_bits} bits "
                f"is below the {MIN_ISOGENY_BITS}-bit minimum"
            ),
            path="precision",
        )
    return mp if mp.precision_bits >= ISOGENY_BITS else mp.with_precision(ISOGENY_BITS)


def isogeny_check(mp: ModelParams) -> ResidualReport:
    """Normalized residual of Phi2[J(E1), J(E2)], evaluated at 256 bits or more."""
    work = _working(mp)
    js = j_invariants(work)
    je1, je2 = js.je1, js.je2
    report = phi2_residual(je1, je2, work.tolerance)
    log.debug("isogeny: J(E1)=%s J(E2)=%s normalized=%s", je1, je2, report.normalized)
    return report


def landen_check(mp: ModelParams, branch: int = 0) -> dict[str, ResidualReport]:
    """J(E1) and J(E2) recomputed from the modulus k of E2."""
    ectx = context(mp, branch)
    k = ectx.k
    tol = max(mp.tolerance, 1e-10)
    return {
        "je1_legendre_k2": relative_difference(j_e1(mp), legendre_j(k**2), tol=tol),
        "je2_jacobi_quartic": relative_difference(j_e2(mp), jacobi_quartic_j(k), tol=tol),
        "je2_legendre_landen": relative_difference(
            j_e2(mp), legendre_j(((1 - k) / (1 + k)) ** 2), tol=tol
        ),
    }


def e3_reading_check(mp: ModelParams) -> dict[str, ResidualReport]:
    """Printed J(E3) against the j of each reading of the E3 display."""
    je3 = j_e3(mp)
    tol = max(mp.tolerance, 1e-10)
    return {
        reading: relative_difference(je3, j_from_weierstrass(*e3_weierstrass(mp, reading)), tol=tol)
        for reading in E3_READINGS
    }

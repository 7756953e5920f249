from __future__ import annotations

import logging

import numpy as np

from rmatrix_geometry.core.elliptic.invariants import j_e1, j_e2, phi2
from rmatrix_geometry.core.elliptic.isogeny import (
    ISOGENY_BITS,
    e3_reading_check,
    isogeny_check,
    landen_check,
)
from rmatrix_geometry.core.errors import DegeneracyError, GeometryError, PoleError
from rmatrix_geometry.core.model.params import ModelParams
from rmatrix_geometry.core.numkit.residual import relative_difference
from rmatrix_geometry.core.numkit.sampling import random_complex
from rmatrix_geometry.core.verify.report import (
    CheckReport,
    failure,
    resolve_tolerance,
    run_trials,
    select_variant,
)

log = logging.getLogger(__name__)

ISOGENY_TOLERANCE = 1e-20
JACOBI_TOLERANCE = 1e-10
PHI2_CONSTANT = -157464000000000
# J(E1) and J(E2) must differ by at least this relative amount.
DISTINCT_J = 1e-3


def working_params(mp: ModelParams) -> ModelParams:
    return mp if mp.precision_bits >= ISOGENY_BITS else mp.with_precision(ISOGENY_BITS)


def phi2_constant_check() -> CheckReport:
    value = phi2(0, 0)
    return CheckReport.flag(
        "isogeny.phi2_constant",
        value == PHI2_CONSTANT,
        metadata={"value": str(value.real)},
    )


def distinct_j_check(work: ModelParams) -> CheckReport:
    """E1 and E2 are isogenous but not isomorphic."""
    gap = float(relative_difference(j_e1(work), j_e2(work)).normalized)
    return CheckReport.flag("isogeny.distinct", gap > DISTINCT_J, metadata={"relative_gap": gap})


def random_coupling_trial(bits: int, rng: np.random.Generator, tol: float) -> CheckReport:
    q, g = random_complex(rng, bits), random_complex(rng, bits)
    try:
        mp = ModelParams.create(q, g, bits=bits)
        report = isogeny_check(mp)
    except PoleError as e:
        raise DegeneracyError(code=e.code, message=e.message, source="isogeny") from e
    return CheckReport.build(
        "isogeny.random_couplings",
        [report.normalized],
        tol,
        metadata={"coupling": mp.describe()},
    )


def isogeny_suite(
    mp: ModelParams,
    trials: int,
    *,
    seed: int = 0,
    tol: float | None = None,
    workers: int = 1,
) -> list[CheckReport]:
    """Phi2 at the coupling and at random couplings, plus the J cross-checks.

    Everything runs at 256 bits or more.
    """
    work = working_params(mp)
    phi_tol = resolve_tolerance(work, ISOGENY_TOLERANCE, tol)
    jac_tol = resolve_tolerance(work, JACOBI_TOLERANCE, tol)
    reports: list[CheckReport] = [phi2_constant_check()]
    try:
        at_coupling = isogeny_check(work)
        reports.append(
            CheckReport.build(
                "isogeny.phi2", [at_coupling.normalized], phi_tol, metadata=work.describe()
            )
        )
        reports.append(distinct_j_check(work))
        reports.append(CheckReport.from_parts("isogeny.landen", landen_check(work), jac_tol))
        readings = {reading: r.normalized for reading, r in e3_reading_check(work).items()}
        reports.append(select_variant("isogeny.e3_reading", readings, jac_tol))
    except GeometryError as e:
        log.info("isogeny: coupling checks stopped at %s", e.code)
        reports.append(failure("isogeny.phi2", phi_tol, e))
    reports.append(
        run_trials(
            "isogeny.random_couplings",
            lambda rng: random_coupling_trial(work.precision_bits, rng, phi_tol),
            seed=seed,
            trials=trials,
            tol=phi_tol,
            workers=workers,
        )
    )
    return reports

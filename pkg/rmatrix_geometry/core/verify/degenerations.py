"""Checks on the degeneration loci: the SUBM factorization, U = 0 and the cubic components."""

from __future__ import annotations

import logging
from typing import Any

import numpy as np

from rmatrix_geometry.core.elliptic.cubic import nagell_cubic_j
from rmatrix_geometry.core.errors import DegeneracyError, MapInconsistencyError
from rmatrix_geometry.core.model.curves import sample_z, surface_a_residual, surface_z_residual
from rmatrix_geometry.core.model.maps import psi_map, subm_u
from rmatrix_geometry.core.model.params import ModelParams
from rmatrix_geometry.core.model.polys import (
    a_poly,
    cbar_affine_poly,
    cbar_component_poly,
    f1_f2,
    s_poly,
    sextic_factors,
)
from rmatrix_geometry.core.numkit.poly import PolyMV, mv_equal_up_to_scalar, mv_multiply
from rmatrix_geometry.core.numkit.precision import (
    DENOMINATOR_RATIO,
    context_for,
    default_tolerance,
)
from rmatrix_geometry.core.numkit.residual import normalized_residual, relative_difference
from rmatrix_geometry.core.numkit.sampling import random_complex
from rmatrix_geometry.core.verify.report import (
    CheckReport,
    failure,
    resolve_tolerance,
    run_trials,
)

log = logging.getLogger(__name__)

FACTORIZATION_BITS = 256
COEFFICIENT_TOLERANCE = 1e-12
CONTAINMENT_TOLERANCE = 1e-9
J_TOLERANCE = 1e-8
CUBIC_BITS = 128

# Readings of the printed y^3 coefficient of the cubic components.
COMPONENT_READINGS = ("factor", "printed")


def sextic_factorization_check(
    q: Any,
    eps: int,
    *,
    u_scale: Any = 1,
    tol: float = COEFFICIENT_TOLERANCE,
) -> CheckReport:
    """S = scalar * S-bar(+) S-bar(-) coefficient-wise at U = u_scale * subm_u(q, eps)."""
    bits = FACTORIZATION_BITS
    U = u_scale * subm_u(q, eps, bits)
    plus, minus = sextic_factors(q, eps, bits)
    sextic = s_poly(context_for(bits).mpc(q), U, bits)
    match = mv_equal_up_to_scalar(sextic, mv_multiply(plus, minus), tol)
    return CheckReport.build(
        f"degenerations.sextic[eps={eps:+d}]",
        [match.worst_error],
        tol,
        metadata={
            "epsilon": eps,
            "u_scale": float(u_scale),
            "worst_monomial": None if match.worst_monomial is None else list(match.worst_monomial),
            "scale": None if match.scale is None else _pair(match.scale),
        },
    )


def _pair(v: Any) -> list[float]:
    c = complex(v)
    return [c.real, c.imag]


def _max_coefficient(p: PolyMV) -> float:
    return max((float(abs(c)) for _, c in p.terms), default=0.0)


def a_square_check(q: Any, *, bits: int = FACTORIZATION_BITS) -> CheckReport:
    """A at U = 0 minus F1^2 is the zero polynomial after merging coefficients."""
    f1, _ = f1_f2(q, bits)
    square = f1 * f1
    diff = a_poly(q, 0, bits) - square
    residual = _max_coefficient(diff) / (_max_coefficient(square) or 1.0)
    return CheckReport.build(
        "degenerations.a_square",
        [residual],
        COEFFICIENT_TOLERANCE,
        metadata={"surviving_terms": len(diff), "q": _pair(q)},
    )


def component_point(
    cubic: PolyMV, rng: np.random.Generator, bits: int
) -> tuple[Any, Any, Any]:
    """(x, y, z) on a component: z^2 = -C(x, y) / (eps x - q^(3/2) y) at random (x, y)."""
    x, y = random_complex(rng, bits), random_complex(rng, bits)
    lead, _, const = cubic.univariate(2, (x, y, 0))
    if abs(lead) <= DENOMINATOR_RATIO * (abs(x) + abs(y)):
        raise DegeneracyError(
            code="E_COMPONENT_DENOMINATOR",
            message="eps x - q^(3/2) y vanishes",
            source="component_point",
        )
    z = context_for(bits).sqrt(-const / lead)
    return x, y, z


def cbar_component_check(
    q: Any,
    eps: int,
    trials: int,
    *,
    seed: int = 0,
    u_scale: Any = 1,
    tol: float | None = None,
    workers: int = 1,
) -> CheckReport:
    """Samples of the cubic component lie on C-bar at the same U.

    Only (q, U) enter: at eps = -1 the SUBM value of U does not determine a coupling g.
    """
    bits = 53
    tol = max(default_tolerance(bits), CONTAINMENT_TOLERANCE) if tol is None else float(tol)
    cbar = cbar_affine_poly(context_for(bits).mpc(q), u_scale * subm_u(q, eps, bits), bits)
    cubic = cbar_component_poly(context_for(bits).mpc(q), eps, "factor", bits)
    name = f"degenerations.cbar_component[eps={eps:+d}]"

    def trial(rng: np.random.Generator) -> CheckReport:
        x, y, z = component_point(cubic, rng, bits)
        if abs(z) <= DENOMINATOR_RATIO * (abs(x) + abs(y)):
            raise DegeneracyError(code="E_COMPONENT_DENOMINATOR", message="z vanishes")
        report = normalized_residual(cbar, (x / z, y / z), tol)
        return CheckReport.build(name, [report.normalized], tol, degenerate=report.degenerate)

    return run_trials(
        name,
        trial,
        seed=seed,
        trials=trials,
        tol=tol,
        workers=workers,
        metadata={"epsilon": eps, "u_scale": float(u_scale)},
    )


def expected_component_j(q: Any, eps: int, bits: int = CUBIC_BITS) -> Any:
    """1728 for eps = -1; 64 (q^2+3)^3 (3q^2+1)^3 / ((q^2-1)^4 (q^2+1)^2) for eps = +1."""
    ctx = context_for(bits)
    q = ctx.mpc(q)
    if eps == -1:
        return ctx.mpc(1728)
    return 64 * (q**2 + 3) ** 3 * (3 * q**2 + 1) ** 3 / ((q**2 - 1) ** 4 * (q**2 + 1) ** 2)


def component_j_check(
    q: Any, eps: int, rng: np.random.Generator, *, tol: float = J_TOLERANCE
) -> CheckReport:
    """j of each reading of the cubic component against the expected value.

    The factor reading decides the check; the printed reading is recorded.
    """
    bits = CUBIC_BITS
    expected = expected_component_j(q, eps, bits)
    variants: dict[str, float] = {}
    values: dict[str, list[float]] = {}
    for reading in COMPONENT_READINGS:
        cubic = cbar_component_poly(context_for(bits).mpc(q), eps, reading, bits)
        j = nagell_cubic_j(cubic, component_point(cubic, rng, bits))
        variants[reading] = float(relative_difference(j, expected).normalized)
        values[reading] = _pair(j)
    return CheckReport.build(
        f"degenerations.component_j[eps={eps:+d}]",
        [variants["factor"]],
        tol,
        metadata={
            "epsilon": eps,
            "expected": _pair(expected),
            "j": values,
            "variants": variants,
        },
    )


def psi_cover_check(
    mp: ModelParams, rng: np.random.Generator, *, tol: float | None = None
) -> CheckReport:
    """psi sends a point of Z onto A."""
    tol = resolve_tolerance(mp, CONTAINMENT_TOLERANCE, tol)
    name = "degenerations.psi_cover"
    z = sample_z(mp, rng)
    try:
        image = psi_map(z, mp)
    except MapInconsistencyError as e:
        return failure(name, tol, e)
    return CheckReport.from_parts(
        name,
        {"Z": surface_z_residual(z, mp), "A": surface_a_residual(image, mp)},
        tol,
    )

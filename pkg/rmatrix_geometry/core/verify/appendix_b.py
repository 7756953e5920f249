"""Reduction of the quartic surface Q~5 = 0 to the ruled quartic S~.

In h = a - f/q, hb = a - q f, p = g - gb/q, pb = g - q gb the quartic is quadratic
in pb. Completing the square with

    pb / h = [i sqrt(q) (q^4 - 1) U s - beta p hb] / (2 [(q^4 - 1)^2 p^2 - q U^2 hb^e]),
    beta = q (1 + q^4) U^2 - 2 (q^4 - 1)^2,

leaves s^2 + 4 q^4 p^4 - (4 - q U^2 + 4 q^4) p^2 hb^e + 4 hb^4 for the exponent e that
balances degrees. Both exponents are tried.
"""

from __future__ import annotations

import logging
from typing import Any

import numpy as np

from rmatrix_geometry.core.errors import DegeneracyError
from rmatrix_geometry.core.model.maps import stilde_residual
from rmatrix_geometry.core.model.params import ModelParams
from rmatrix_geometry.core.model.polys import q_polys, qtilde5_poly, stilde_poly
from rmatrix_geometry.core.numkit.poly import PolyMV, mv_equal_up_to_scalar
from rmatrix_geometry.core.numkit.precision import DENOMINATOR_RATIO, principal_root
from rmatrix_geometry.core.numkit.residual import (
    relative_difference,
    residual_from_terms,
)
from rmatrix_geometry.core.numkit.roots import uv_roots
from rmatrix_geometry.core.numkit.sampling import random_complex
from rmatrix_geometry.core.verify.report import CheckReport, resolve_tolerance, run_trials

log = logging.getLogger(__name__)

PIPELINE_TOLERANCE = 1e-8
EXPONENTS = (1, 2)
RESCALING_TOLERANCE = 1e-12


def _nonzero(value: Any, scale: Any, factor: str) -> None:
    if abs(value) <= DENOMINATOR_RATIO * abs(scale):
        raise DegeneracyError(
            code="E_APPENDIX_B_DENOMINATOR",
            message=f"{factor} vanishes",
            source="appendix_b",
            path=factor,
        )


def sample_qtilde5(mp: ModelParams, rng: np.random.Generator) -> tuple[Any, Any, Any, Any]:
    """(a, f, g, gb) on Q~5 = 0: random a, f, g and a root gb."""
    bits = mp.precision_bits
    a, f, g = (random_complex(rng, bits) for _ in range(3))
    roots = uv_roots(qtilde5_poly(mp.q, mp.U, bits).univariate(3, (a, f, g, 0)), bits=bits)
    if not roots:
        raise DegeneracyError(code="E_APPENDIX_B_DENOMINATOR", message="Q~5 has no root in gb")
    return a, f, g, roots[int(rng.integers(len(roots)))]


def auxiliary(mp: ModelParams, a: Any, f: Any, g: Any, gb: Any) -> tuple[Any, Any, Any, Any]:
    """(h, hb, p, pb)."""
    q = mp.q
    return a - f / q, a - q * f, g - gb / q, g - q * gb


def quadrature_s(mp: ModelParams, h: Any, hb: Any, p: Any, pb: Any, e: int) -> Any:
    """s = x0 x1 solved from the quadrature relation with exponent e."""
    q, U = mp.q, mp.U
    i = mp.ctx.mpc(0, 1)
    r = (q**4 - 1) ** 2
    alpha = r * p**2 - q * U**2 * hb**e
    beta = (q * (1 + q**4) * U**2 - 2 * r) * p * hb
    lead = i * mp.sqrt_q * (q**4 - 1) * U
    _nonzero(h, abs(p) + abs(hb), "h")
    _nonzero(lead, abs(q) ** 4 * abs(U), "i sqrt(q) (q^4 - 1) U")
    return (2 * alpha * pb / h + beta) / lead


def target_terms(mp: ModelParams, s: Any, p: Any, hb: Any, e: int) -> list[Any]:
    q, U = mp.q, mp.U
    return [s**2, 4 * q**4 * p**4, -(4 - q * U**2 + 4 * q**4) * p**2 * hb**e, 4 * hb**4]


def target_poly(mp: ModelParams) -> PolyMV:
    """The e = 2 target quartic; variables (x0, x1, p, hb) with s = x0 x1."""
    q, U = mp.q, mp.U
    x0, x1, p, hb = PolyMV.variables(4, mp.precision_bits)
    return x0**2 * x1**2 + 4 * q**4 * p**4 - (4 - q * U**2 + 4 * q**4) * p**2 * hb**2 + 4 * hb**4


def rescaling_check(mp: ModelParams) -> CheckReport:
    """With p = x2 / q^(3/4) and hb = q^(3/4) x3 the target quartic is S~."""
    c = principal_root(mp.q, 4, mp.precision_bits) ** 3
    scaled = target_poly(mp).scale_variables((1, 1, 1 / c, c))
    match = mv_equal_up_to_scalar(
        scaled, stilde_poly(mp.q, mp.U, mp.precision_bits), RESCALING_TOLERANCE
    )
    return CheckReport.build(
        "appendix-b.rescaling",
        [match.worst_error],
        RESCALING_TOLERANCE,
        metadata={
            "worst_monomial": None if match.worst_monomial is None else list(match.worst_monomial)
        },
    )


def qtilde5_cross_check(mp: ModelParams, rng: np.random.Generator, tol: float) -> CheckReport:
    """Q5 with bb, cb and db eliminated through Q3, Q1 and Q2 equals Q~5(a, f, g, gb)."""
    bits = mp.precision_bits
    q = mp.q
    a, b, c, d, f, g, gb = (random_complex(rng, bits) for _ in range(7))
    _nonzero(b, 1, "b")
    _nonzero(c, 1, "c")
    _nonzero(d, 1, "d")
    b_bb = -(g * f + a * gb) / (q + 1 / q)
    bb = b_bb / b
    cb = (b_bb + a * g) / c
    db = -(bb * b + f * gb) / (q * d)
    q5 = q_polys(q, mp.U, bits)[4].evaluate((a, b, bb, c, cb, d, db, f, g, gb))
    qt5 = qtilde5_poly(q, mp.U, bits).evaluate((a, f, g, gb))
    report = relative_difference(q5, qt5, tol=tol)
    return CheckReport.build("appendix-b.qtilde5", [report.normalized], tol)


def pipeline_trial(mp: ModelParams, rng: np.random.Generator, tol: float) -> CheckReport:
    """One sample of Q~5 pushed through the reduction, for each exponent."""
    a, f, g, gb = sample_qtilde5(mp, rng)
    h, hb, p, pb = auxiliary(mp, a, f, g, gb)
    variants: dict[str, float] = {}
    for e in EXPONENTS:
        s = quadrature_s(mp, h, hb, p, pb, e)
        report = residual_from_terms(
            target_terms(mp, s, p, hb, e), bits=mp.precision_bits, tol=tol
        )
        variants[f"e={e}"] = float(report.normalized)
    s = quadrature_s(mp, h, hb, p, pb, 2)
    c = principal_root(mp.q, 4, mp.precision_bits) ** 3
    on_stilde = stilde_residual((s, 1, c * p, hb / c), mp)
    return CheckReport.build(
        "appendix-b.pipeline",
        [min(variants.values()), on_stilde.normalized],
        tol,
        metadata={"variants": variants},
        degenerate=on_stilde.degenerate,
    )


def appendix_b_pipeline(
    mp: ModelParams,
    trials: int,
    *,
    seed: int = 0,
    tol: float | None = None,
    workers: int = 1,
) -> list[CheckReport]:
    """The reduction over `trials` samples plus the rescaling and Q~5 cross-checks.

    The pipeline report passes only when exactly one exponent vanishes on every trial.
    """
    tol = resolve_tolerance(mp, PIPELINE_TOLERANCE, tol)
    pipeline = run_trials(
        "appendix-b.pipeline",
        lambda rng: pipeline_trial(mp, rng, tol),
        seed=seed,
        trials=trials,
        tol=tol,
        workers=workers,
        select_variant=True,
    )
    cross = run_trials(
        "appendix-b.qtilde5",
        lambda rng: qtilde5_cross_check(mp, rng, tol),
        seed=seed,
        trials=trials,
        tol=tol,
        workers=workers,
    )
    return [pipeline, rescaling_check(mp), cross]

from __future__ import annotations

import logging
from typing import Any, Sequence

from rmatrix_geometry.core.elliptic.invariants import j_from_quartic
from rmatrix_geometry.core.errors import SingularCurveError
from rmatrix_geometry.core.numkit.poly import PolyMV
from rmatrix_geometry.core.numkit.precision import (
    PrecComplex,
    context_for,
    default_tolerance,
    precision_of,
)
from rmatrix_geometry.core.numkit.residual import coefficient_scaled_residual

log = logging.getLogger(__name__)

# Two fixed directions spanning the pencil of lines through the base point.
_PENCIL_A = (0.3 + 0.7j, -1.1 + 0.2j, 0.5 - 0.4j)
_PENCIL_B = (0.9 - 0.3j, 0.2 + 1.3j, -0.6 + 0.8j)

SMOOTHNESS_RATIO = 1e-8


def _on_curve(cubic: PolyMV, pt: Sequence[Any], tol: float) -> bool:
    return coefficient_scaled_residual(cubic, pt) < tol


def nagell_cubic_j(cubic: PolyMV, pt: Sequence[Any]) -> PrecComplex:
    """j of a smooth plane cubic, given a point on it.

    Lines D(t) = A + t B through the base point P cut the cubic in P and two more
    points, the roots s of grad F(P).D + s D^T H(P) D / 2 + s^2 F(D) = 0. The curve
    is birational to w^2 = disc(t), a binary quartic whose invariants give j.
    """
    if cubic.nvars != 3 or not cubic.is_homogeneous() or cubic.total_degree != 3:
        raise SingularCurveError(
            code="E_CUBIC_SHAPE", message="expected a homogeneous cubic in three variables"
        )
    bits = max([cubic.bits, *(precision_of(v) for v in pt)])
    ctx = context_for(bits)
    tol = default_tolerance(bits)
    P = [ctx.mpc(v) for v in pt]
    if not _on_curve(cubic, P, tol):
        raise SingularCurveError(
            code="E_CUBIC_POINT_OFF", message="base point does not lie on the cubic"
        )

    grad = [cubic.derivative(i) for i in range(3)]
    gP = [g.evaluate(P) for g in grad]
    hP = [[grad[i].derivative(j).evaluate(P) for j in range(3)] for i in range(3)]
    size = max(1, *(abs(v) for v in P))
    coeff_scale = ctx.fsum(abs(c) for _, c in cubic.terms) * size**2
    if max(abs(v) for v in gP) <= SMOOTHNESS_RATIO * coeff_scale:
        raise SingularCurveError(
            code="E_CUBIC_SINGULAR_POINT", message="gradient vanishes at the base point"
        )

    def disc(t: Any) -> Any:
        d = [ctx.mpc(a) + t * ctx.mpc(b) for a, b in zip(_PENCIL_A, _PENCIL_B)]
        c1 = ctx.fsum(g * di for g, di in zip(gP, d))
        c2 = ctx.fsum(hP[i][j] * d[i] * d[j] for i in range(3) for j in range(3)) / 2
        c3 = cubic.evaluate(d)
        return c2**2 - 4 * c1 * c3

    # Interpolate the quartic at the fifth roots of unity.
    omega = ctx.expjpi(ctx.mpf(2) / 5)
    nodes = [omega**k for k in range(5)]
    values = [disc(t) for t in nodes]
    coeffs = [ctx.fsum(v * nodes[k] ** (-j) for k, v in enumerate(values)) / 5 for j in range(5)]
    a0, a1, a2, a3, a4 = coeffs
    log.debug("nagell: branch quartic %s", [complex(c) for c in coeffs])
    try:
        return j_from_quartic(a4, a3, a2, a1, a0)
    except SingularCurveError as e:
        raise SingularCurveError(
            code="E_CUBIC_REDUCIBLE",
            message="branch quartic is degenerate; the cubic is singular or reducible",
        ) from e

from __future__ import annotations

import logging
from typing import Any, Sequence

from rmatrix_geometry.core.errors import DegeneracyError, MapInconsistencyError
from rmatrix_geometry.core.model.curves import e1_residual, spectral_point, surface_a_residual
from rmatrix_geometry.core.model.params import ModelParams
from rmatrix_geometry.core.model.points import (
    PointA,
    PointCbar,
    PointZ,
    SpectralPoint,
    SurfacePointS,
)
from rmatrix_geometry.core.model.polys import stilde_poly
from rmatrix_geometry.core.numkit.precision import (
    DENOMINATOR_RATIO,
    PrecComplex,
    context_for,
    precision_of,
)
from rmatrix_geometry.core.numkit.residual import ResidualReport, normalized_residual

log = logging.getLogger(__name__)

PSI_TOLERANCE = 1e-8

Projective = tuple[PrecComplex, PrecComplex, PrecComplex, PrecComplex]


def _require(value: Any, scale: Any, *, code: str, message: str, source: str) -> None:
    if abs(value) <= DENOMINATOR_RATIO * abs(scale):
        raise DegeneracyError(code=code, message=message, source=source)


def projective_distance(a: Sequence[Any], b: Sequence[Any]) -> float:
    """Max coordinate gap after normalizing both points on the largest entry of `a`."""
    if len(a) != len(b):
        raise ValueError("points live in different projective spaces")
    bits = max(precision_of(v) for v in (*a, *b))
    ctx = context_for(bits)
    k = max(range(len(a)), key=lambda i: abs(a[i]))
    if a[k] == 0 or b[k] == 0:
        return float("inf")
    return max(float(abs(ctx.mpc(x) / a[k] - ctx.mpc(y) / b[k])) for x, y in zip(a, b))


# -- CHAN -----------------------------------------------------------------------------------------


def spectral_from_surface(p: SurfacePointS, mp: ModelParams) -> SpectralPoint:
    """CHAN image of `p` without the E1 check.

    The cached roots satisfy sqrt(xi + x-) / sqrt(xi + x+) = -(x/y) / sqrt(q), which is
    the ratio the R-matrix entries need.
    """
    ctx = mp.ctx
    x, y, z, w = (ctx.mpc(v) for v in p.coords)
    size = max(abs(v) for v in (x, y, z, w))
    for name, v in (("x", x), ("y", y), ("z", z), ("w", w)):
        _require(
            v,
            size,
            code="E_MAP_DEGENERATE",
            message=f"coordinate {name} vanishes",
            source="chan_map",
        )
    rq = mp.sqrt_q
    theta = x**2 - mp.q * y**2
    _require(
        theta,
        abs(x) ** 2 + abs(mp.q * y**2),
        code="E_MAP_DEGENERATE",
        message="x^2 - q y^2 vanishes",
        source="chan_map",
    )
    shift_plus = -(mp.s / rq) * (y / x) * theta / (z * w)
    shift_minus = -(mp.s / (mp.q * rq)) * (x / y) * theta / (z * w)
    gamma = theta / (mp.q_quarter * x * w)
    root_plus = ctx.sqrt(shift_plus)
    root_minus = -(x / y) / rq * root_plus
    return spectral_point(
        mp,
        shift_plus - mp.xi,
        shift_minus - mp.xi,
        gamma,
        sqrt_xi_plus=root_plus,
        sqrt_xi_minus=root_minus,
    )


def chan_map(p: SurfacePointS, mp: ModelParams) -> SpectralPoint:
    sp = spectral_from_surface(p, mp)
    report = e1_residual(sp, mp)
    if not report.passed:
        raise MapInconsistencyError(
            code="E_MAP_CHAN_OFF_E1",
            message=f"CHAN image misses E1 (normalized {float(report.normalized):.3g})",
            source="chan_map",
        )
    return sp


def chan_second_preimage(p: SurfacePointS) -> SurfacePointS:
    """The other point of S over the same (x+, x-); gamma changes sign."""
    return SurfacePointS(-p.x, -p.y, p.z, p.w)


def surface_points_from_e1(sp: SpectralPoint, mp: ModelParams) -> SurfacePointS:
    """Inverse of CHAN with w = 1; the sign of y/x comes from the cached roots."""
    ctx = mp.ctx
    shift_plus = mp.xi + sp.xplus
    _require(
        shift_plus,
        abs(mp.xi) + abs(sp.xplus),
        code="E_MAP_DEGENERATE",
        message="xi + x+ vanishes",
        source="surface_points_from_e1",
    )
    _require(
        sp.sqrt_xi_minus,
        abs(sp.sqrt_xi_plus),
        code="E_MAP_DEGENERATE",
        message="xi + x- vanishes",
        source="surface_points_from_e1",
    )
    ratio = -sp.sqrt_xi_plus / (mp.sqrt_q * sp.sqrt_xi_minus)
    lead = 1 - mp.q * ratio**2
    _require(
        lead,
        1 + abs(mp.q * ratio**2),
        code="E_MAP_DEGENERATE",
        message="1 - q (y/x)^2 vanishes",
        source="surface_points_from_e1",
    )
    x = ctx.mpc(sp.gamma) * mp.q_quarter / lead
    y = ratio * x
    theta = x**2 * lead
    z = -(mp.s / mp.sqrt_q) * ratio * theta / shift_plus
    return SurfacePointS(x, y, z, ctx.mpc(1))


# -- phi ------------------------------------------------------------------------------------------


def phi_map(p: SurfacePointS, mp: ModelParams) -> Projective:
    """[x:y:z:w] -> [phi1/phi2 : w : x : y] onto S~."""
    ctx = mp.ctx
    i = ctx.mpc(0, 1)
    x, y, z, w = (ctx.mpc(v) for v in p.coords)
    q, U = mp.q, mp.U
    theta = x**2 - q * y**2
    phi1 = i * mp.sqrt_q * (U * theta * x * y + 2 * (x**2 - q**3 * y**2) * z * w)
    phi2 = theta * w
    _require(
        phi2,
        (abs(x) ** 2 + abs(q * y**2)) * abs(w),
        code="E_MAP_INDETERMINATE",
        message="(x^2 - q y^2) w vanishes",
        source="phi_map",
    )
    return (phi1 / phi2, w, x, y)


def phi_inverse(pt: Sequence[Any], mp: ModelParams) -> SurfacePointS:
    """[x0:x1:x2:x3] -> [x2 : x3 : psi2/psi1 : x1] back onto S."""
    ctx = mp.ctx
    i = ctx.mpc(0, 1)
    x0, x1, x2, x3 = (ctx.mpc(v) for v in pt)
    q = mp.q
    psi1 = 2 * i * mp.sqrt_q * x1 * (x2**2 - q**3 * x3**2)
    psi2 = (x0 * x1 - i * mp.sqrt_q * mp.U * x2 * x3) * (x2**2 - q * x3**2)
    _require(
        psi1,
        abs(x1) * (abs(x2) ** 2 + abs(q**3 * x3**2)),
        code="E_MAP_INDETERMINATE",
        message="x1 (x2^2 - q^3 x3^2) vanishes",
        source="phi_inverse",
    )
    return SurfacePointS(x2, x3, psi2 / psi1, x1)


def stilde_residual(pt: Sequence[Any], mp: ModelParams) -> ResidualReport:
    return normalized_residual(
        stilde_poly(mp.q, mp.U, mp.precision_bits),
        tuple(pt),
        mp.tolerance,
        metadata={"clearing_factor": "1"},
    )


def stilde_point(mp: ModelParams, x1: Any, x2: Any, x3: Any, branch: int = 0) -> Projective:
    """Point of S~ over (x1, x2, x3) obtained by solving for x0."""
    ctx = mp.ctx
    q, U = mp.q, mp.U
    x1, x2, x3 = ctx.mpc(x1), ctx.mpc(x2), ctx.mpc(x3)
    _require(
        x1,
        max(abs(x2), abs(x3), 1),
        code="E_MAP_DEGENERATE",
        message="x1 vanishes",
        source="stilde_point",
    )
    rest = 4 * q * x2**4 - (4 - q * U**2 + 4 * q**4) * x2**2 * x3**2 + 4 * q**3 * x3**4
    x0 = ctx.sqrt(-rest) / x1
    return (-x0 if branch else x0, x1, x2, x3)


# -- C-bar, Z and A -------------------------------------------------------------------------------


def mapc_spectral(p: PointCbar, mp: ModelParams) -> tuple[PrecComplex, PrecComplex]:
    """(x+, x-) of a C-bar point: CHAN on the slice z = w = 1."""
    one = mp.ctx.mpc(1)
    sp = chan_map(SurfacePointS(p.x, p.y, one, one), mp)
    return sp.xplus, sp.xminus


def psi_map(p: PointZ, mp: ModelParams) -> PointA:
    """[a:b:bb:c] -> [a^2 : ab : a bb : c^2 - b bb], the double cover Z -> A."""
    image = PointA(p.a**2, p.a * p.b, p.a * p.bb, p.c**2 - p.b * p.bb)
    report = surface_a_residual(image, mp)
    limit = max(mp.tolerance, PSI_TOLERANCE)
    if report.degenerate or float(report.normalized) >= limit:
        raise MapInconsistencyError(
            code="E_MAP_PSI_OFF_A",
            message=f"psi image misses A (normalized {float(report.normalized):.3g})",
            source="psi_map",
        )
    return image


def subm_u(q: Any, eps: int, bits: int = 53) -> PrecComplex:
    """U on the SUBM locus: qU^2 = 4 (q^2 + eps)^2, positive root 2 (q^2 + eps)/sqrt(q)."""
    if eps not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    ctx = context_for(bits)
    q = ctx.mpc(q)
    return 2 * (q**2 + eps) / ctx.sqrt(q)

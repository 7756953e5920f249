from __future__ import annotations

import logging
from typing import Any, Callable, TypeVar

import numpy as np

from rmatrix_geometry.core.errors import DegeneracyError, GeometryError
from rmatrix_geometry.core.model.params import ModelParams
from rmatrix_geometry.core.model.points import (
    PointA,
    PointCbar,
    PointE2,
    PointZ,
    SpectralPoint,
    SurfacePointS,
)
from rmatrix_geometry.core.model.polys import (
    a_poly,
    cbar_affine_poly,
    e1_poly,
    e2_poly,
    s_poly,
    z_poly,
)
from rmatrix_geometry.core.numkit.precision import DENOMINATOR_RATIO, PrecComplex
from rmatrix_geometry.core.numkit.residual import ResidualReport, normalized_residual
from rmatrix_geometry.core.numkit.roots import uv_roots
from rmatrix_geometry.core.numkit.sampling import random_complex

log = logging.getLogger(__name__)

MAX_RESAMPLES = 50

T = TypeVar("T")


def _retry(label: str, attempt: Callable[[int], T | None]) -> T:
    """Run `attempt(k)` until it returns a value; degeneracies count as a miss."""
    for k in range(MAX_RESAMPLES):
        try:
            out = attempt(k)
        except GeometryError as e:
            log.debug("%s: attempt %d rejected (%s)", label, k, e.code)
            continue
        if out is not None:
            return out
        log.debug("%s: attempt %d resampled", label, k)
    raise DegeneracyError(
        code="E_SAMPLER_EXHAUSTED",
        message=f"no nondegenerate sample after {MAX_RESAMPLES} attempts",
        source=label,
    )


def _small(value: Any, scale: Any) -> bool:
    return abs(value) <= DENOMINATOR_RATIO * abs(scale)


def _degenerate(mp: ModelParams, clearing: str) -> ResidualReport:
    zero = mp.ctx.mpf(0)
    return ResidualReport(
        raw=zero,
        scale=zero,
        normalized=mp.ctx.inf,
        tolerance=mp.tolerance,
        passed=False,
        degenerate=True,
        metadata={"clearing_factor": clearing},
    )


# -- E1 -------------------------------------------------------------------------------------------


def e1_residual(sp: SpectralPoint, mp: ModelParams) -> ResidualReport:
    clearing = "q*x+*x-"
    if sp.xplus == 0 or sp.xminus == 0:
        return _degenerate(mp, clearing)
    return normalized_residual(
        e1_poly(mp.q, mp.g, mp.precision_bits),
        (sp.xplus, sp.xminus),
        mp.tolerance,
        metadata={"clearing_factor": clearing},
    )


def spectral_point(
    mp: ModelParams,
    xplus: Any,
    xminus: Any,
    gamma: Any = 1,
    *,
    sqrt_xi_plus: Any = None,
    sqrt_xi_minus: Any = None,
) -> SpectralPoint:
    """SpectralPoint with principal roots unless roots are supplied."""
    ctx = mp.ctx
    xp, xm = ctx.mpc(xplus), ctx.mpc(xminus)
    rp = ctx.sqrt(mp.xi + xp) if sqrt_xi_plus is None else ctx.mpc(sqrt_xi_plus)
    rm = ctx.sqrt(mp.xi + xm) if sqrt_xi_minus is None else ctx.mpc(sqrt_xi_minus)
    return SpectralPoint(xp, xm, ctx.mpc(gamma), rp, rm)


def e1_xminus_coefficients(mp: ModelParams, xplus: Any) -> list[PrecComplex]:
    """E1 cleared, as a quadratic in x- (highest degree first)."""
    q, xi, g = mp.q, mp.xi, mp.g
    i = mp.ctx.mpc(0, 1)
    xp = mp.ctx.mpc(xplus)
    return [
        -(q**2) * (xp + xi),
        xp**2 + q**2 - (i * q / g) * xp,
        xi * xp**2 - xp,
    ]


def sample_e1(
    mp: ModelParams,
    rng: np.random.Generator,
    xplus: Any = None,
    gamma: Any = None,
    branch: int = 0,
) -> SpectralPoint:
    """Point on E1: x- solves the cleared quadratic at the given or drawn x+."""
    if branch not in (0, 1):
        raise DegeneracyError(code="E_SAMPLER_BRANCH", message="branch must be 0 or 1")
    bits = mp.precision_bits

    def attempt(k: int) -> SpectralPoint | None:
        xp = mp.ctx.mpc(xplus) if (xplus is not None and k == 0) else random_complex(rng, bits)
        if _small(xp, 1) or _small(xp + mp.xi, abs(xp) + abs(mp.xi)):
            return None
        coeffs = e1_xminus_coefficients(mp, xp)
        if _small(coeffs[0], abs(mp.q) ** 2 * (abs(xp) + abs(mp.xi))):
            return None
        roots = sorted(uv_roots(coeffs, bits=bits), key=lambda r: (float(r.real), float(r.imag)))
        xm = roots[branch]
        if _small(xm, 1):
            return None
        gam = mp.ctx.mpc(gamma) if gamma is not None else random_complex(rng, bits)
        return spectral_point(mp, xp, xm, gam)

    return _retry("sample_e1", attempt)


# -- S and E2 -------------------------------------------------------------------------------------


def surface_s_residual(p: SurfacePointS, mp: ModelParams) -> ResidualReport:
    return normalized_residual(
        s_poly(mp.q, mp.U, mp.precision_bits),
        p.coords,
        mp.tolerance,
        metadata={"clearing_factor": "1"},
    )


def e2_residual(p: PointE2, mp: ModelParams) -> ResidualReport:
    return normalized_residual(
        e2_poly(mp.q, mp.U, mp.precision_bits),
        (p.y1, p.y2),
        mp.tolerance,
        metadata={"clearing_factor": "1"},
    )


def e2_y1_squared(mp: ModelParams, y2: Any) -> PrecComplex:
    q, U = mp.q, mp.U
    return -4 * q + (4 - q * U**2 + 4 * q**4) * y2**2 - 4 * q**3 * y2**4


def sample_e2(mp: ModelParams, rng: np.random.Generator, y2: Any = None) -> PointE2:
    y = mp.ctx.mpc(y2) if y2 is not None else random_complex(rng, mp.precision_bits)
    return PointE2(mp.ctx.sqrt(e2_y1_squared(mp, y)), y)


def ruling_point(mp: ModelParams, t: Any, e2: PointE2) -> SurfacePointS:
    """Point with parameter t on the ruling line of S over `e2`."""
    ctx = mp.ctx
    q, U, rq = mp.q, mp.U, mp.sqrt_q
    i = ctx.mpc(0, 1)
    t = ctx.mpc(t)
    y1, y2 = e2.y1, e2.y2
    den = 1 - q**3 * y2**2
    if _small(den, 1 + abs(q**3 * y2**2)):
        raise DegeneracyError(
            code="E_MODEL_DENOMINATOR",
            message="1 - q^3 y2^2 vanishes on the ruling",
            source="sample_s",
        )
    z = t**2 * (y1 - i * rq * U * y2) * (1 - q * y2**2) / (2 * i * rq * den)
    return SurfacePointS(t, t * y2, z, ctx.mpc(1))


def sample_s(
    mp: ModelParams,
    rng: np.random.Generator,
    t: Any = None,
    e2: PointE2 | None = None,
) -> SurfacePointS:
    """Point of S on the ruling over a point of E2."""

    def attempt(k: int) -> SurfacePointS | None:
        base = e2 if (e2 is not None and k == 0) else sample_e2(mp, rng)
        tt = t if t is not None else random_complex(rng, mp.precision_bits)
        if tt == 0:
            return None
        return ruling_point(mp, tt, base)

    return _retry("sample_s", attempt)


# -- C-bar ----------------------------------------------------------------------------------------


def cbar_residual(p: PointCbar, mp: ModelParams) -> ResidualReport:
    return normalized_residual(
        cbar_affine_poly(mp.q, mp.U, mp.precision_bits),
        (p.x, p.y),
        mp.tolerance,
        metadata={"clearing_factor": "1"},
    )


def cbar_y_roots(mp: ModelParams, x: Any) -> list[PrecComplex]:
    poly = cbar_affine_poly(mp.q, mp.U, mp.precision_bits)
    return uv_roots(poly.univariate(1, (x, 0)), bits=mp.precision_bits)


def sample_cbar(mp: ModelParams, rng: np.random.Generator, x: Any = None) -> PointCbar:
    def attempt(k: int) -> PointCbar | None:
        xx = mp.ctx.mpc(x) if (x is not None and k == 0) else random_complex(rng, mp.precision_bits)
        roots = cbar_y_roots(mp, xx)
        if len(roots) < 6:
            return None
        return PointCbar(xx, roots[int(rng.integers(len(roots)))])

    return _retry("sample_cbar", attempt)


# -- A and Z --------------------------------------------------------------------------------------


def surface_a_residual(p: PointA, mp: ModelParams) -> ResidualReport:
    return normalized_residual(a_poly(mp.q, mp.U, mp.precision_bits), p.coords, mp.tolerance)


def surface_z_residual(p: PointZ, mp: ModelParams) -> ResidualReport:
    return normalized_residual(z_poly(mp.q, mp.U, mp.precision_bits), p.coords, mp.tolerance)


def sample_a(mp: ModelParams, rng: np.random.Generator) -> PointA:
    poly = a_poly(mp.q, mp.U, mp.precision_bits)

    def attempt(k: int) -> PointA | None:
        a, b, bb = (random_complex(rng, mp.precision_bits) for _ in range(3))
        roots = uv_roots(poly.univariate(3, (a, b, bb, 0)), bits=mp.precision_bits)
        if not roots:
            return None
        return PointA(a, b, bb, roots[int(rng.integers(len(roots)))])

    return _retry("sample_a", attempt)


def sample_z(mp: ModelParams, rng: np.random.Generator) -> PointZ:
    """Solve Z for c^2 at random (a, b, bb), then take a square root."""
    poly = z_poly(mp.q, mp.U, mp.precision_bits)

    def attempt(k: int) -> PointZ | None:
        a, b, bb = (random_complex(rng, mp.precision_bits) for _ in range(3))
        full = poly.univariate(3, (a, b, bb, 0))
        # Z is even in c; keep the coefficients of c^16, c^14, ..., c^0.
        roots = uv_roots(full[::2], bits=mp.precision_bits)
        if not roots:
            return None
        c2 = roots[int(rng.integers(len(roots)))]
        return PointZ(a, b, bb, mp.ctx.sqrt(c2))

    return _retry("sample_z", attempt)

"""J-invariants of the spectral curves and generic j-extraction from curve models."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from rmatrix_geometry.core.errors import PoleError, SingularCurveError
from rmatrix_geometry.core.model.params import ModelParams
from rmatrix_geometry.core.numkit.precision import PrecComplex, context_for, precision_of
from rmatrix_geometry.core.numkit.residual import ResidualReport, residual_from_terms

# Relative size under which a denominator counts as zero.
POLE_RATIO = 1e-12

E3_READINGS = ("weierstrass", "sign-flipped")


@dataclass(frozen=True)
class JInvariants:
    je1: PrecComplex
    je2: PrecComplex
    je3: PrecComplex


def _bits(*values: Any) -> int:
    return max(precision_of(v) for v in values)


def _subm_factors(mp: ModelParams) -> tuple[PrecComplex, PrecComplex, PrecComplex]:
    """c = 4 - qU^2 + 4q^4 and the two SUBM factors c + 8q^2, c - 8q^2."""
    q, U = mp.q, mp.U
    c = 4 - q * U**2 + 4 * q**4
    scale = 4 + abs(q * U**2) + 4 * abs(q) ** 4 + 8 * abs(q) ** 2
    plus, minus = c + 8 * q**2, c - 8 * q**2
    for label, v in (("4 - qU^2 + 4q^4 + 8q^2", plus), ("4 - qU^2 + 4q^4 - 8q^2", minus)):
        if abs(v) <= POLE_RATIO * scale:
            raise PoleError(
                code="E_J_POLE",
                message=f"factor {label} vanishes (SUBM locus)",
                path=label,
            )
    return c, plus, minus


def j_e1(mp: ModelParams) -> PrecComplex:
    q, U = mp.q, mp.U
    _, plus, minus = _subm_factors(mp)
    num = 16 - 8 * q * U**2 + q**2 * U**4 - 16 * q**4 - 8 * q**5 * U**2 + 16 * q**8
    return num**3 / (q**8 * plus * minus)


def j_e2(mp: ModelParams) -> PrecComplex:
    q, U = mp.q, mp.U
    _, plus, minus = _subm_factors(mp)
    num = 16 - 8 * q * U**2 + q**2 * U**4 + 224 * q**4 - 8 * q**5 * U**2 + 16 * q**8
    return num**3 / (q**4 * plus**2 * minus**2)


def j_e3(mp: ModelParams) -> PrecComplex:
    q, U = mp.q, mp.U
    _, plus, minus = _subm_factors(mp)
    num = (
        16
        - 8 * q * U**2
        + q**2 * U**4
        + 960 * q**2
        - 240 * q**3 * U**2
        + 2144 * q**4
        - 8 * q**5 * U**2
        + 960 * q**6
        + 16 * q**8
    )
    return num**3 / (q**2 * plus * minus**4)


def j_invariants(mp: ModelParams) -> JInvariants:
    return JInvariants(j_e1(mp), j_e2(mp), j_e3(mp))


def phi2_terms(x: Any, y: Any) -> list[PrecComplex]:
    """Monomials of the level-two modular polynomial at (x, y)."""
    ctx = context_for(_bits(x, y))
    x, y = ctx.mpc(x), ctx.mpc(y)
    return [
        x**3,
        y**3,
        -(x**2) * y**2,
        1488 * x**2 * y,
        1488 * x * y**2,
        -162000 * x**2,
        -162000 * y**2,
        40773375 * x * y,
        8748000000 * x,
        8748000000 * y,
        ctx.mpc(-157464000000000),
    ]


def phi2(x: Any, y: Any) -> PrecComplex:
    ctx = context_for(_bits(x, y))
    return ctx.fsum(phi2_terms(x, y))


def phi2_residual(x: Any, y: Any, tol: float | None = None) -> ResidualReport:
    return residual_from_terms(
        phi2_terms(x, y), bits=_bits(x, y), tol=tol, metadata={"polynomial": "Phi2"}
    )


def j_from_weierstrass(a: Any, b: Any) -> PrecComplex:
    """j of y^2 = x^3 + a x + b."""
    ctx = context_for(_bits(a, b))
    a, b = ctx.mpc(a), ctx.mpc(b)
    four_a3 = 4 * a**3
    disc = four_a3 + 27 * b**2
    if abs(disc) <= POLE_RATIO * (abs(four_a3) + 27 * abs(b) ** 2):
        raise SingularCurveError(
            code="E_WEIERSTRASS_SINGULAR",
            message="4a^3 + 27b^2 vanishes",
        )
    return 1728 * four_a3 / disc


def legendre_j(lam: Any) -> PrecComplex:
    """j of y^2 = x (x - 1)(x - lam)."""
    ctx = context_for(precision_of(lam))
    lam = ctx.mpc(lam)
    den = lam**2 * (1 - lam) ** 2
    if abs(den) <= POLE_RATIO * (1 + abs(lam)) ** 4:
        raise SingularCurveError(code="E_LEGENDRE_SINGULAR", message="lambda is 0 or 1")
    return 256 * (1 - lam + lam**2) ** 3 / den


def jacobi_quartic_j(k: Any) -> PrecComplex:
    """j of y^2 = (1 - x^2)(1 - k^2 x^2)."""
    ctx = context_for(precision_of(k))
    k2 = ctx.mpc(k) ** 2
    den = k2 * (1 - k2) ** 4
    if abs(den) <= POLE_RATIO * (1 + abs(k2)) ** 5:
        raise SingularCurveError(code="E_QUARTIC_SINGULAR", message="k^2 is 0 or 1")
    return 16 * (1 + 14 * k2 + k2**2) ** 3 / den


def quartic_invariants(a4: Any, a3: Any, a2: Any, a1: Any, a0: Any) -> tuple[Any, Any]:
    """Classical invariants I, J of the binary quartic a4 x^4 + ... + a0."""
    ctx = context_for(_bits(a4, a3, a2, a1, a0))
    a4, a3, a2, a1, a0 = (ctx.mpc(v) for v in (a4, a3, a2, a1, a0))
    inv_i = 12 * a4 * a0 - 3 * a3 * a1 + a2**2
    inv_j = (
        72 * a4 * a2 * a0
        + 9 * a3 * a2 * a1
        - 27 * a4 * a1**2
        - 27 * a0 * a3**2
        - 2 * a2**3
    )
    return inv_i, inv_j


def j_from_quartic(a4: Any, a3: Any, a2: Any, a1: Any, a0: Any) -> PrecComplex:
    """j of y^2 = a4 x^4 + a3 x^3 + a2 x^2 + a1 x + a0, i.e. 1728 4I^3 / (4I^3 - J^2)."""
    inv_i, inv_j = quartic_invariants(a4, a3, a2, a1, a0)
    try:
        return j_from_weierstrass(-27 * inv_i, -27 * inv_j)
    except SingularCurveError as e:
        raise SingularCurveError(
            code="E_QUARTIC_SINGULAR",
            message="4I^3 = J^2; the quartic has a repeated root",
        ) from e


def e3_coefficients(mp: ModelParams) -> tuple[PrecComplex, PrecComplex]:
    """The printed brackets (A, B) of the E3 display, over 48 and 864 respectively."""
    q, U = mp.q, mp.U
    big_a = (
        16
        + 8 * q * (120 * q - U**2) * (1 + q**4)
        + q**2 * U**4
        - 240 * q**3 * U**2
        + 2144 * q**4
        + 16 * q**8
    )
    big_b = (4 + 4 * q**4 + 24 * q**2 - q * U**2) * (
        16
        - 8 * q * (264 * q + U**2) * (1 + q**4)
        + q**2 * U**4
        + 528 * q**3 * U**2
        - 4000 * q**4
        + 16 * q**8
    )
    return big_a, big_b


def e3_weierstrass(mp: ModelParams, reading: str = "weierstrass") -> tuple[Any, Any]:
    """(a, b) of y^2 = x^3 + a x + b under one reading of the E3 display."""
    big_a, big_b = e3_coefficients(mp)
    if reading == "weierstrass":
        return -big_a / 48, -big_b / 864
    if reading == "sign-flipped":
        return big_a / 48, big_b / 864
    raise ValueError(f"unknown E3 reading {reading!r}; expected one of {E3_READINGS}")

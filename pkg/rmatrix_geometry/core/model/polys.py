"""Curves and surfaces as PolyMV data.

Every builder takes plain coefficients (q, U, ...) plus a precision and is cached.
Variable orders are fixed per builder and listed in its docstring.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Any

from rmatrix_geometry.core.numkit.poly import PolyMV
from rmatrix_geometry.core.numkit.precision import context_for

ENTRY_NAMES = ("a", "b", "bb", "c", "cb", "d", "db", "f", "g", "gb")
SYMMETRIC_ENTRY_NAMES = ("a", "b", "bb", "c", "d", "f", "g", "gb")


def _num(bits: int, v: Any) -> Any:
    return context_for(bits).mpc(v)


@lru_cache(maxsize=64)
def e1_poly(q: Any, g: Any, bits: int = 53) -> PolyMV:
    """E1 times q x+ x-; variables (x+, x-)."""
    q, g = _num(bits, q), _num(bits, g)
    i = _num(bits, 1j)
    xi = i * g * (q - 1 / q)
    xp, xm = PolyMV.variables(2, bits)
    return (
        xp**2 * xm
        + q**2 * xm
        - q**2 * xp * xm**2
        - xp
        + xi * xp**2
        - xi * q**2 * xm**2
        - (i * q / g) * xp * xm
    )


@lru_cache(maxsize=64)
def s_poly(q: Any, U: Any, bits: int = 53) -> PolyMV:
    """The sextic S; variables (x, y, z, w)."""
    q, U = _num(bits, q), _num(bits, U)
    x, y, z, w = PolyMV.variables(4, bits)
    theta = x**2 - q * y**2
    return (x**2 - y**2 / q) * theta**2 - U * x * y * z * w * theta - w**2 * z**2 * (
        x**2 - q**3 * y**2
    )


@lru_cache(maxsize=64)
def stilde_poly(q: Any, U: Any, bits: int = 53) -> PolyMV:
    """The quartic S~; variables (x0, x1, x2, x3)."""
    q, U = _num(bits, q), _num(bits, U)
    x0, x1, x2, x3 = PolyMV.variables(4, bits)
    return (
        x0**2 * x1**2
        + 4 * q * x2**4
        - (4 - q * U**2 + 4 * q**4) * x2**2 * x3**2
        + 4 * q**3 * x3**4
    )


@lru_cache(maxsize=64)
def e2_poly(q: Any, U: Any, bits: int = 53) -> PolyMV:
    """Jacobi quartic E2; variables (y1, y2)."""
    q, U = _num(bits, q), _num(bits, U)
    y1, y2 = PolyMV.variables(2, bits)
    return y1**2 + 4 * q - (4 - q * U**2 + 4 * q**4) * y2**2 + 4 * q**3 * y2**4


@lru_cache(maxsize=64)
def cbar_poly(q: Any, U: Any, bits: int = 53) -> PolyMV:
    """Homogeneous sextic C-bar (S with w = z); variables (x, y, z)."""
    q, U = _num(bits, q), _num(bits, U)
    x, y, z = PolyMV.variables(3, bits)
    theta = x**2 - q * y**2
    return (x**2 - y**2 / q) * theta**2 - U * x * y * z**2 * theta - z**4 * (x**2 - q**3 * y**2)


@lru_cache(maxsize=64)
def cbar_affine_poly(q: Any, U: Any, bits: int = 53) -> PolyMV:
    """C-bar on the chart z = 1; variables (x, y)."""
    return cbar_poly(q, U, bits).substitute(2, 1)


@lru_cache(maxsize=64)
def f1_f2(q: Any, bits: int = 53) -> tuple[PolyMV, PolyMV]:
    """F1, F2; variables (a, b, bb, g)."""
    q = _num(bits, q)
    a, b, bb, g = PolyMV.variables(4, bits)
    s1 = q + 1 / q
    s2 = q**2 + 1 / q**2
    f1 = (
        (a**2 - g**2) ** 2
        + b**4
        + bb**4
        - 4 * a * b * bb * g
        - s1 * (a**2 + g**2) * (b**2 + bb**2)
        - s2 * (2 * a * g + b * bb) * b * bb
    )
    f2 = (
        s1 * (a**2 + g**2) * (b**2 + bb**2) * b * bb
        + (b**4 + bb**4 + (4 + s2) * b**2 * bb**2) * a * g
        - b * bb * (a**2 - g**2) ** 2
    )
    return f1, f2


@lru_cache(maxsize=64)
def a_poly(q: Any, U: Any, bits: int = 53) -> PolyMV:
    """The octic A = F1^2 - (U^2/q)(ag + b bb) F2; variables (a, b, bb, g)."""
    qn, U = _num(bits, q), _num(bits, U)
    f1, f2 = f1_f2(q, bits)
    a, b, bb, g = PolyMV.variables(4, bits)
    return f1 * f1 - (U**2 / qn) * (a * g + b * bb) * f2


@lru_cache(maxsize=64)
def c_slice_poly(q: Any, U: Any, bits: int = 53) -> PolyMV:
    """Plane octic C: A restricted to g = 0; variables (a, b, bb)."""
    return a_poly(q, U, bits).substitute(3, 0)


@lru_cache(maxsize=64)
def f3_f4(q: Any, bits: int = 53) -> tuple[PolyMV, PolyMV]:
    """F3, F4; variables (a, b, bb, c)."""
    q = _num(bits, q)
    a, b, bb, c = PolyMV.variables(4, bits)
    s1 = q + 1 / q
    s2 = q**2 + 1 / q**2
    m = c**2 - b * bb
    plus = (a**2 + c**2 - b * bb) ** 2
    minus = (a**2 - c**2 + b * bb) ** 2
    f3 = (
        plus * minus
        + a**4 * (b**4 + bb**4 - 4 * b * bb * m)
        - s1 * a**2 * (b**2 + bb**2) * (a**4 + m**2)
        + s2 * a**4 * b * bb * (b * bb - 2 * c**2)
    )
    f4 = (
        s1 * a**2 * b * bb * (b**2 + bb**2) * (a**4 + m**2)
        + (4 + s2) * a**4 * b**2 * bb**2 * m
        - b * bb * plus * minus
        + a**4 * (b**4 + bb**4) * m
    )
    return f3, f4


@lru_cache(maxsize=64)
def z_poly(q: Any, U: Any, bits: int = 53) -> PolyMV:
    """Z = F3^2 - (U^2/q) a^4 c^2 F4; variables (a, b, bb, c)."""
    qn, U = _num(bits, q), _num(bits, U)
    f3, f4 = f3_f4(q, bits)
    a, _, _, c = PolyMV.variables(4, bits)
    return f3 * f3 - (U**2 / qn) * a**4 * c**2 * f4


@lru_cache(maxsize=64)
def q_polys(q: Any, U: Any, bits: int = 53) -> tuple[PolyMV, ...]:
    """Q1..Q5 of the variety Y; variables ENTRY_NAMES."""
    q, U = _num(bits, q), _num(bits, U)
    a, b, bb, c, cb, d, db, f, g, gb = PolyMV.variables(10, bits)
    quad = (gb - q * g) * (g - q * gb) - (f - q * a) * (a - q * f)
    return (
        b * bb + a * g - c * cb,
        bb * b + f * gb + q * d * db,
        g * f + a * gb + (q + 1 / q) * b * bb,
        a * f + g * gb - (b**2 + bb**2),
        quad**2 - q**2 * U**2 * c * cb * d * db,
    )


@lru_cache(maxsize=64)
def qbar_polys(q: Any, U: Any, bits: int = 53) -> tuple[PolyMV, ...]:
    """Symmetric-gauge quadrics Q-bar 1..5; variables SYMMETRIC_ENTRY_NAMES."""
    q, U = _num(bits, q), _num(bits, U)
    a, b, bb, c, d, f, g, gb = PolyMV.variables(8, bits)
    quad = (gb - q * g) * (g - q * gb) - (f - q * a) * (a - q * f)
    return (
        b * bb + a * g - c**2,
        bb * b + f * gb + q * d**2,
        g * f + a * gb + (q + 1 / q) * b * bb,
        a * f + g * gb - (b**2 + bb**2),
        quad - q * U * c * d,
    )


@lru_cache(maxsize=64)
def qtilde5_poly(q: Any, U: Any, bits: int = 53) -> PolyMV:
    """Q5 with b bb eliminated through Q3; variables (a, f, g, gb)."""
    q, U = _num(bits, q), _num(bits, U)
    a, f, g, gb = PolyMV.variables(4, bits)
    quad = (gb - q * g) * (g - q * gb) - (f - q * a) * (a - q * f)
    left = f * (q * gb - g) + gb * (f / q - a)
    right = a * (q * g - gb) - g * (f - a / q)
    return quad**2 + (q**3 * U**2 / (1 + q**2) ** 2) * left * right


@lru_cache(maxsize=64)
def sextic_factors(q: Any, eps: int, bits: int = 53) -> tuple[PolyMV, PolyMV]:
    """S-bar(+) and S-bar(-) on the SUBM locus; variables (x, y, z, w)."""
    q = _num(bits, q)
    ctx = context_for(bits)
    rq = ctx.sqrt(q)
    x, y, z, w = PolyMV.variables(4, bits)
    out = []
    for sign in (1, -1):
        out.append(
            x**3
            + sign * x**2 * y / rq
            - q * x * y**2
            - sign * rq * y**3
            + sign * eps * x * z * w
            - q * rq * y * z * w
        )
    return out[0], out[1]


@lru_cache(maxsize=64)
def cbar_component_poly(q: Any, eps: int, reading: str = "factor", bits: int = 53) -> PolyMV:
    """Cubic component of C-bar on SUBM; variables (x, y, z).

    reading "factor" is S-bar(+) with zw -> z^2 (y^3 coefficient -sqrt(q)); reading
    "printed" carries the coefficient -eps sqrt(q).
    """
    q = _num(bits, q)
    rq = context_for(bits).sqrt(q)
    cubic = rq if reading == "factor" else eps * rq
    x, y, z = PolyMV.variables(3, bits)
    return x**3 + x**2 * y / rq - q * x * y**2 - cubic * y**3 + eps * x * z**2 - q * rq * y * z**2

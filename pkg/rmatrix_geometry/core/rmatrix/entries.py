"""Boltzmann weights of the 16x16 R-matrix in both parameterizations.

AmplitudeSet holds the square-root form on E1; EntrySet holds the rational form on S,
normalized to c = 1.
"""

from __future__ import annotations

from dataclasses import astuple, dataclass, fields
from typing import Any

from rmatrix_geometry.core.errors import DegeneracyError
from rmatrix_geometry.core.model.params import ModelParams
from rmatrix_geometry.core.model.points import PointCbar, SpectralPoint, SurfacePointS
from rmatrix_geometry.core.numkit.precision import DENOMINATOR_RATIO, PrecComplex


@dataclass(frozen=True)
class AmplitudeSet:
    A: PrecComplex
    B: PrecComplex
    Bb: PrecComplex
    C: PrecComplex
    Cb: PrecComplex
    D: PrecComplex
    Db: PrecComplex
    F: PrecComplex
    G: PrecComplex

    def as_dict(self) -> dict[str, PrecComplex]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class EntrySet:
    a: PrecComplex
    b: PrecComplex
    bb: PrecComplex
    c: PrecComplex
    cb: PrecComplex
    d: PrecComplex
    db: PrecComplex
    f: PrecComplex
    g: PrecComplex
    gb: PrecComplex

    def as_dict(self) -> dict[str, PrecComplex]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def values(self) -> tuple[PrecComplex, ...]:
        return astuple(self)


def _nonzero(value: Any, scale: Any, factor: str, source: str) -> None:
    if abs(value) <= DENOMINATOR_RATIO * abs(scale):
        raise DegeneracyError(
            code="E_RMATRIX_DENOMINATOR",
            message=f"denominator {factor} vanishes",
            source=source,
            path=factor,
        )


def bk_amplitudes(p1: SpectralPoint, p2: SpectralPoint, mp: ModelParams) -> AmplitudeSet:
    """The nine square-root amplitudes; composite radicals are products of cached roots."""
    xi, q, rq = mp.xi, mp.q, mp.sqrt_q
    x1p, x1m, x2p, x2m = p1.xplus, p1.xminus, p2.xplus, p2.xminus
    rp1, rm1 = p1.sqrt_xi_plus, p1.sqrt_xi_minus
    rp2, rm2 = p2.sqrt_xi_plus, p2.sqrt_xi_minus
    g1, g2 = p1.gamma, p2.gamma

    src = "bk_amplitudes"
    gap = x2m - x1p
    _nonzero(gap, abs(x2m) + abs(x1p), "x2- - x1+", src)
    w = 1 - xi * (x1m + x2m) - x1m * x2m
    _nonzero(w, 1 + abs(xi) * (abs(x1m) + abs(x2m)) + abs(x1m * x2m), "W", src)
    for label, r in (("sqrt(xi+x1+)", rp1), ("sqrt(xi+x1-)", rm1), ("sqrt(xi+x2+)", rp2)):
        _nonzero(r, 1, label, src)
    for label, g in (("gamma1", g1), ("gamma2", g2)):
        _nonzero(g, 1, label, src)

    A = (x1m - x2p) * rp1 * rm2 / (gap * rp2 * rm1)
    B = (x1p - x2p) * rm2 / (rq * (-gap) * rp2)
    Bb = rq * (x1m - x2m) * rp1 / ((-gap) * rm1)
    C = g2 * (x1m - x1p) * rp1 * rm2 / (g1 * gap * rp2 * rm1)
    Cb = g1 * (x2m - x2p) / (g2 * gap)
    D = (x1m - x1p) * (x2m - x2p) * (x2p - x1p) * rm2 / (g1 * g2 * gap * rp2 * w)
    Db = (
        g1 * g2 * (1 + xi**2) * (x2p - x1p) * (xi + x2m) * rm1
        / (q**3 * gap * (xi + x2p) * rp1 * w)
    )
    F = (
        (x1p - x2p) * rm1 * rm2 * (1 - xi * (x1p + x2m) - x1p * x2m)
        / (q * gap * rp1 * rp2 * w)
    )
    G = (xi + x2m) * (x2p - x1p) * (1 - xi * (x1m + x2p) - x1m * x2p) / (q * (xi + x2p) * gap * w)
    return AmplitudeSet(A=A, B=B, Bb=Bb, C=C, Cb=Cb, D=D, Db=Db, F=F, G=G)


def rational_entries(s1: SurfacePointS, s2: SurfacePointS, mp: ModelParams) -> EntrySet:
    """Entries on S in affine coordinates, with c = 1."""
    q = mp.q
    src = "rational_entries"
    _nonzero(s1.w, max(abs(v) for v in s1.coords), "w1", src)
    _nonzero(s2.w, max(abs(v) for v in s2.coords), "w2", src)
    x1, y1, z1 = s1.affine()
    x2, y2, z2 = s2.affine()
    _nonzero(z2, max(abs(x2), abs(y2), 1), "z2", src)

    t1 = x1**2 - q * y1**2
    t2 = x2**2 - q * y2**2
    _nonzero(t1, abs(x1) ** 2 + abs(q * y1**2), "theta(x1, y1)", src)
    _nonzero(t2, abs(x2) ** 2 + abs(q * y2**2), "theta(x2, y2)", src)
    cross = x1**2 * x2**2 - q**2 * y1**2 * y2**2
    _nonzero(cross, abs(x1 * x2) ** 2 + abs(q * y1 * y2) ** 2, "x1^2 x2^2 - q^2 y1^2 y2^2", src)

    r = z1 / z2
    a = x1 * x2 / t2 - q * r * y1 * y2 / t1
    b = y1 * x2 / t2 - r * x1 * y2 / t1
    bb = q * x1 * y2 / t2 - q * r * y1 * x2 / t1
    g = r * x1 * x2 / t1 - q * y1 * y2 / t2
    d = (
        x1 * y1 * t1 * (x2**2 - q**3 * y2**2) - r * x2 * y2 * t2 * (x1**2 - q**3 * y1**2)
    ) / (t1 * t2 * cross)
    f = x1 * y1 * (x2 * y1 * t1 - r * x1 * y2 * t2) / (t1 * cross) + q**2 * x2 * y2 * (
        x1 * y2 * t1 - r * x2 * y1 * t2
    ) / (t2 * cross)
    gb = (q**2 * z1 * z2 * x2 * y1 - x1 * y2 * t1 * t2) / (t1 * t2) * d
    one = mp.ctx.mpc(1)
    return EntrySet(a=a, b=b, bb=bb, c=one, cb=r, d=d, db=z1 * z2 * d, f=f, g=g, gb=gb)


def symmetric_entries(c1: PointCbar, c2: PointCbar, mp: ModelParams) -> EntrySet:
    """Rational entries in the symmetric gauge z = w = 1, where cb = c and db = d."""
    one = mp.ctx.mpc(1)
    return rational_entries(
        SurfacePointS(c1.x, c1.y, one, one), SurfacePointS(c2.x, c2.y, one, one), mp
    )

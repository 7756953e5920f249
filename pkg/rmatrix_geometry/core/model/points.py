from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Any

from rmatrix_geometry.core.numkit.precision import PrecComplex


@dataclass(frozen=True)
class SpectralPoint:
    """(x+, x-, gamma) on E1 with cached sqrt(xi + x+) and sqrt(xi + x-)."""

    xplus: PrecComplex
    xminus: PrecComplex
    gamma: PrecComplex
    sqrt_xi_plus: PrecComplex
    sqrt_xi_minus: PrecComplex

    def flipped(self, plus: bool = False, minus: bool = False) -> "SpectralPoint":
        return replace(
            self,
            sqrt_xi_plus=-self.sqrt_xi_plus if plus else self.sqrt_xi_plus,
            sqrt_xi_minus=-self.sqrt_xi_minus if minus else self.sqrt_xi_minus,
        )


@dataclass(frozen=True)
class SurfacePointS:
    x: PrecComplex
    y: PrecComplex
    z: PrecComplex
    w: PrecComplex

    @property
    def coords(self) -> tuple[PrecComplex, PrecComplex, PrecComplex, PrecComplex]:
        return (self.x, self.y, self.z, self.w)

    def scaled(self, lam: Any) -> "SurfacePointS":
        return SurfacePointS(lam * self.x, lam * self.y, lam * self.z, lam * self.w)

    def affine(self) -> tuple[PrecComplex, PrecComplex, PrecComplex]:
        """Bold coordinates (x/w, y/w, z/w)."""
        return (self.x / self.w, self.y / self.w, self.z / self.w)


@dataclass(frozen=True)
class PointE2:
    y1: PrecComplex
    y2: PrecComplex


@dataclass(frozen=True)
class PointCbar:
    x: PrecComplex
    y: PrecComplex


@dataclass(frozen=True)
class PointA:
    a: PrecComplex
    b: PrecComplex
    bb: PrecComplex
    g: PrecComplex

    @property
    def coords(self) -> tuple[PrecComplex, ...]:
        return (self.a, self.b, self.bb, self.g)


@dataclass(frozen=True)
class PointZ:
    a: PrecComplex
    b: PrecComplex
    bb: PrecComplex
    c: PrecComplex

    @property
    def coords(self) -> tuple[PrecComplex, ...]:
        return (self.a, self.b, self.bb, self.c)

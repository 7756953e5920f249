"""Birational invariants of the double cover of the abelian surface."""

from __future__ import annotations

from dataclasses import dataclass

from rmatrix_geometry.core.errors import NumericError

PLURIGENERA_ORDERS = (2, 3, 4, 5)


@dataclass(frozen=True)
class BaseSurface:
    """Data of the base of a double cover branched along a divisor in |2L|."""

    chi: int
    Ksq: int
    LK: int
    pg: int
    q_irr: int
    h0_KL: int
    h1_KL: int = 0


@dataclass(frozen=True)
class SurfaceInvariants:
    L2: int
    chi: int
    Ksq: int
    pg: int
    q_irr: int
    plurigenera: tuple[int, ...]
    severi: bool
    h0_L: int


def abelian_base(L2: int) -> BaseSurface:
    """Abelian surface with ample L: K = 0 and h0(L) = L^2/2 by Riemann-Roch."""
    return BaseSurface(chi=0, Ksq=0, LK=0, pg=1, q_irr=2, h0_KL=L2 // 2)


def plurigenera(chi: int, Ksq: int) -> tuple[int, ...]:
    return tuple(chi + n * (n - 1) // 2 * Ksq for n in PLURIGENERA_ORDERS)


def double_cover_invariants(L2: int, base: BaseSurface) -> SurfaceInvariants:
    """chi = 2 chi(Y) + (L.K + L^2)/2, K^2 = 2 (K + L)^2, pg = pg(Y) + h0(K + L)."""
    if (base.LK + L2) % 2:
        raise NumericError(
            code="E_INVARIANTS_PARITY",
            message=f"L.K + L^2 = {base.LK + L2} must be even",
            path="L2",
        )
    chi = 2 * base.chi + (base.LK + L2) // 2
    Ksq = 2 * (base.Ksq + 2 * base.LK + L2)
    pg = base.pg + base.h0_KL
    q_irr = base.q_irr + base.h1_KL
    return SurfaceInvariants(
        L2=L2,
        chi=chi,
        Ksq=Ksq,
        pg=pg,
        q_irr=q_irr,
        plurigenera=plurigenera(chi, Ksq),
        severi=Ksq == 4 * chi,
        h0_L=L2 // 2,
    )


def surface_invariants_from_genus(gC: int) -> SurfaceInvariants:
    """Invariants of the double cover whose hyperplane curve has genus gC.

    Adjunction on the abelian base gives L^2 = 2 (gC - 1).
    """
    if gC < 2:
        raise NumericError(
            code="E_INVARIANTS_GENUS",
            message=f"curve genus must be at least 2, got {gC}",
            path="gC",
        )
    L2 = 2 * (gC - 1)
    return double_cover_invariants(L2, abelian_base(L2))


def product_surface_invariants(g1: int, g2: int) -> tuple[int, int]:
    """(q, pg) of the product of curves of genera g1 and g2."""
    if g1 < 0 or g2 < 0:
        raise NumericError(code="E_INVARIANTS_GENUS", message="genera must be non-negative")
    return g1 + g2, g1 * g2

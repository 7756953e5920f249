from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from rmatrix_geometry.core.elliptic.jacobi import jacobi_sn_cn_dn
from rmatrix_geometry.core.model.params import ModelParams
from rmatrix_geometry.core.model.points import PointE2
from rmatrix_geometry.core.numkit.precision import PrecComplex


@dataclass(frozen=True)
class EllipticContext:
    """Modulus data of E2: y1^2 = -4q (1 - lambda1 y2^2)(1 - lambda2 y2^2)."""

    lambda1: PrecComplex
    lambda2: PrecComplex
    Delta: PrecComplex
    k: PrecComplex
    branch: int


def context(mp: ModelParams, branch: int = 0) -> EllipticContext:
    """k + 1/k = Delta; branch 0 takes the root with |k| <= 1, branch 1 its reciprocal.

    lambda1 = q/k and lambda2 = q k, so lambda1 lambda2 = q^2 and k^2 = lambda2/lambda1.
    """
    if branch not in (0, 1):
        raise ValueError("branch must be 0 or 1")
    ctx = mp.ctx
    q, U = mp.q, mp.U
    delta = q**2 + 1 / q**2 - U**2 / (4 * q)
    root = ctx.sqrt(delta**2 / 4 - 1)
    k = delta / 2 + root
    if abs(k) > 1:
        k = delta / 2 - root
    if branch == 1:
        k = 1 / k
    return EllipticContext(lambda1=q / k, lambda2=q * k, Delta=delta, k=k, branch=branch)


def uniformize_e2(mu: Any, ectx: EllipticContext, mp: ModelParams) -> PointE2:
    """y1 = 2i sqrt(q) cn dn, y2 = sqrt(k/q) sn at argument mu."""
    c = mp.ctx
    sn, cn, dn = jacobi_sn_cn_dn(c.mpc(mu), ectx.k, mp.precision_bits)
    return PointE2(2 * c.mpc(0, 1) * mp.sqrt_q * cn * dn, c.sqrt(ectx.k / mp.q) * sn)

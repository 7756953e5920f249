from __future__ import annotations

import logging
from typing import Any

from rmatrix_geometry.core.errors import NumericError
from rmatrix_geometry.core.numkit.precision import (
    SUPPORTED_PRECISIONS,
    PrecComplex,
    context_for,
    precision_of,
)

log = logging.getLogger(__name__)

MAX_LANDEN_STEPS = 64

Triple = tuple[PrecComplex, PrecComplex, PrecComplex]


def _needs_reciprocal(k: Any) -> bool:
    m = k * k
    return abs(k) > 1 or (m.imag == 0 and m.real >= 1)


def _descending_landen(ctx: Any, u: Any, k: Any, eps: float) -> Triple:
    moduli: list[Any] = []
    for _ in range(MAX_LANDEN_STEPS):
        if abs(k) < eps:
            break
        kp = ctx.sqrt(1 - k * k)
        k1 = (1 - kp) / (1 + kp)
        if abs(k1) >= 1:
            raise NumericError(
                code="E_JACOBI_NO_CONVERGENCE",
                message="Landen modulus does not shrink (k^2 on [1, inf))",
            )
        moduli.append(k1)
        u = u / (1 + k1)
        k = k1
    else:
        raise NumericError(
            code="E_JACOBI_NO_CONVERGENCE",
            message=f"modulus above {eps:g} after {MAX_LANDEN_STEPS} Landen steps",
        )

    s = ctx.sin(u)
    sn, cn, dn = s, ctx.cos(u), 1 - k * k * s * s / 2
    for k1 in reversed(moduli):
        sq = k1 * sn * sn
        den = 1 + sq
        sn, cn, dn = (1 + k1) * sn / den, cn * dn / den, (1 - sq) / den
    return sn, cn, dn


def guard_bits(bits: int) -> int:
    """The next supported precision above `bits`; 512 stays at 512."""
    return next((b for b in SUPPORTED_PRECISIONS if b > bits), bits)


def jacobi_sn_cn_dn(u: Any, k: Any, bits: int | None = None) -> Triple:
    """sn, cn, dn of complex argument and modulus by descending Landen transformations.

    Moduli with |k| > 1 or k^2 real and >= 1 go through k -> 1/k first; a direct
    recursion that stalls is retried once through the same transformation. The
    recursion runs at `guard_bits(bits)` and the results are rounded back to `bits`.
    """
    bits = bits or max(precision_of(u), precision_of(k))
    out = context_for(bits)
    sn, cn, dn = _sn_cn_dn(u, k, guard_bits(bits))
    return out.mpc(sn), out.mpc(cn), out.mpc(dn)


def _sn_cn_dn(u: Any, k: Any, bits: int) -> Triple:
    ctx = context_for(bits)
    u, k = ctx.mpc(u), ctx.mpc(k)
    if u == 0:
        return ctx.mpc(0), ctx.mpc(1), ctx.mpc(1)
    if k * k == 1:
        sech = 1 / ctx.cosh(u)
        return ctx.tanh(u), sech, sech
    eps = 10.0 ** (-bits / 2)

    def reciprocal() -> Triple:
        sn, cn, dn = _descending_landen(ctx, k * u, 1 / k, eps)
        return sn / k, dn, cn

    if _needs_reciprocal(k):
        return reciprocal()
    try:
        return _descending_landen(ctx, u, k, eps)
    except NumericError as e:
        log.debug("landen: %s; retrying with the reciprocal modulus", e.message)
        return reciprocal()

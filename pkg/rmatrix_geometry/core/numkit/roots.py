from __future__ import annotations

import logging
from typing import Any, Sequence

import numpy as np

from rmatrix_geometry.core.errors import NumericError
from rmatrix_geometry.core.numkit.precision import PrecComplex, context_for, precision_of

log = logging.getLogger(__name__)

DEFAULT_MAX_STEPS = 200
POLISH_STEPS = 3


def _horner(ctx: Any, coeffs: Sequence[PrecComplex], x: PrecComplex) -> tuple[Any, Any, Any]:
    """p(x), p'(x) and sum |c_k x^k| for coefficients given highest degree first."""
    p = ctx.mpc(0)
    dp = ctx.mpc(0)
    for c in coeffs:
        dp = dp * x + p
        p = p * x + c
    ax = abs(x)
    scale = ctx.mpf(0)
    for c in coeffs:
        scale = scale * ax + abs(c)
    return p, dp, scale


def _polish(ctx: Any, coeffs: Sequence[PrecComplex], r: PrecComplex, steps: int) -> PrecComplex:
    for _ in range(steps):
        p, dp, _ = _horner(ctx, coeffs, r)
        if dp == 0 or p == 0:
            break
        r = r - p / dp
    return r


def root_residual(coeffs: Sequence[Any], r: Any) -> float:
    bits = max([precision_of(r), *(precision_of(c) for c in coeffs)])
    ctx = context_for(bits)
    p, _, scale = _horner(ctx, [ctx.mpc(c) for c in coeffs], ctx.mpc(r))
    if scale == 0:
        return 0.0
    return float(abs(p) / scale)


def strip_leading_zeros(coeffs: Sequence[Any]) -> list[Any]:
    out = list(coeffs)
    while out and out[0] == 0:
        out.pop(0)
    return out


def uv_roots(
    coeffs: Sequence[Any],
    *,
    bits: int | None = None,
    maxsteps: int = DEFAULT_MAX_STEPS,
    polish_steps: int = POLISH_STEPS,
) -> list[PrecComplex]:
    """All complex roots, with multiplicity, of the polynomial with `coeffs` (highest first).

    Durand-Kerner iteration (mpmath `polyroots`) followed by Newton polishing. When
    the iteration does not converge, numpy companion-matrix roots seed the polish and
    roots whose residual stays high are reported by index.
    """
    bits = bits or max([53, *(precision_of(c) for c in coeffs)])
    ctx = context_for(bits)
    c = [ctx.mpc(v) for v in strip_leading_zeros(coeffs)]
    if len(c) < 2:
        raise NumericError(
            code="E_ROOTS_DEGREE",
            message="polynomial has degree < 1 after stripping leading zeros",
        )

    try:
        roots = list(ctx.polyroots(c, maxsteps=maxsteps, extraprec=bits))
        steps = polish_steps
    except ctx.NoConvergence:
        log.debug("polyroots did not converge (degree %d); using companion roots", len(c) - 1)
        roots = [ctx.mpc(complex(r)) for r in np.roots(np.array([complex(v) for v in c]))]
        steps = max(polish_steps, 20)

    roots = [_polish(ctx, c, ctx.mpc(r), steps) for r in roots]

    threshold = 10.0 ** (-bits / 4)
    bad = [i for i, r in enumerate(roots) if root_residual(c, r) >= threshold]
    if bad:
        raise NumericError(
            code="E_ROOTS_NO_CONVERGENCE",
            message=f"{len(bad)} of {len(roots)} roots did not converge",
            path=f"roots{bad}",
        )
    return roots


def reconstruct(leading: Any, roots: Sequence[Any]) -> list[PrecComplex]:
    """Coefficients (highest first) of leading * prod (x - r)."""
    bits = max([precision_of(leading), *(precision_of(r) for r in roots)])
    ctx = context_for(bits)
    out = [ctx.mpc(leading)]
    for r in roots:
        nxt = out + [ctx.mpc(0)]
        for k in range(1, len(nxt)):
            nxt[k] = nxt[k] - r * out[k - 1]
        out = nxt
    return out

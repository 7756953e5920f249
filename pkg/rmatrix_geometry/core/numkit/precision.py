from __future__ import annotations

import threading
from typing import Any

import mpmath

from rmatrix_geometry.core.errors import NumericError

SUPPORTED_PRECISIONS: tuple[int, ...] = (53, 128, 256, 512)

DEFAULT_TOLERANCES: dict[int, float] = {
    53: 1e-10,
    128: 1e-18,
    256: 1e-25,
    512: 1e-50,
}

# Scale below which a residual is flagged degenerate.
DEGENERATE_SCALE = 1e-300

# Samplers resample when a denominator falls below this fraction of its term scale.
DENOMINATOR_RATIO = 1e-8

# Values are mpmath mpc numbers owned by one of the contexts below.
PrecComplex = Any

_local = threading.local()


def _check_bits(bits: int) -> int:
    if bits not in SUPPORTED_PRECISIONS:
        raise NumericError(
            code="E_PRECISION_UNSUPPORTED",
            message=f"precision {bits} not in {list(SUPPORTED_PRECISIONS)}",
            path="precision",
        )
    return bits


def context_for(bits: int) -> mpmath.ctx_mp.MPContext:
    """Return this thread's mpmath context at `bits` of working precision.

    mpmath raises `ctx.prec` temporarily inside polyroots/quad, so contexts are
    kept per thread and never shared.
    """
    _check_bits(bits)
    cache: dict[int, Any] | None = getattr(_local, "contexts", None)
    if cache is None:
        cache = {}
        _local.contexts = cache
    ctx = cache.get(bits)
    if ctx is None:
        ctx = mpmath.MPContext()
        ctx.prec = bits
        cache[bits] = ctx
    return ctx


def default_tolerance(bits: int) -> float:
    return DEFAULT_TOLERANCES[_check_bits(bits)]


def precision_of(value: Any) -> int:
    ctx = getattr(value, "context", None)
    if ctx is None:
        return 53
    prec = int(ctx.prec)
    for bits in SUPPORTED_PRECISIONS:
        if prec <= bits:
            return bits
    return SUPPORTED_PRECISIONS[-1]


def promote(*values: Any, bits: int = 53) -> tuple[Any, list[PrecComplex]]:
    """Convert values into the context of the largest precision among them (and `bits`)."""
    target = max([bits, *(precision_of(v) for v in values)])
    ctx = context_for(target)
    return ctx, [ctx.mpc(v) for v in values]


def principal_sqrt(value: Any, bits: int | None = None) -> PrecComplex:
    """Principal square root: Re >= 0, branch cut on the negative real axis."""
    ctx = context_for(bits or precision_of(value))
    return ctx.sqrt(ctx.mpc(value))


def principal_root(value: Any, n: int, bits: int | None = None) -> PrecComplex:
    """exp(log(value)/n), the principal n-th root."""
    ctx = context_for(bits or precision_of(value))
    v = ctx.mpc(value)
    if v == 0:
        return ctx.mpc(0)
    return ctx.exp(ctx.log(v) / n)


def magnitude(value: Any) -> float:
    return float(abs(value))

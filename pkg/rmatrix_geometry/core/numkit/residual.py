from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from rmatrix_geometry.core.numkit.poly import PolyMV
from rmatrix_geometry.core.numkit.precision import (
    DEGENERATE_SCALE,
    context_for,
    default_tolerance,
    precision_of,
)


@dataclass(frozen=True)
class ResidualReport:
    """|sum of terms| against sum of |terms|.

    `normalized` is raw/scale; a report whose scale underflows is degenerate and
    never passes.
    """

    raw: Any
    scale: Any
    normalized: Any
    tolerance: float
    passed: bool
    degenerate: bool = False
    metadata: dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed


def residual_from_terms(
    terms: Iterable[Any],
    *,
    bits: int = 53,
    tol: float | None = None,
    metadata: dict[str, Any] | None = None,
) -> ResidualReport:
    vals = list(terms)
    bits = max([bits, *(precision_of(t) for t in vals)])
    ctx = context_for(bits)
    tol = default_tolerance(bits) if tol is None else tol
    raw = abs(ctx.fsum(ctx.mpc(t) for t in vals)) if vals else ctx.mpf(0)
    scale = ctx.fsum(abs(ctx.mpc(t)) for t in vals) if vals else ctx.mpf(0)
    if scale < DEGENERATE_SCALE:
        return ResidualReport(
            raw=raw,
            scale=scale,
            normalized=ctx.mpf(0) if raw == 0 else ctx.inf,
            tolerance=tol,
            passed=False,
            degenerate=True,
            metadata=dict(metadata or {}),
        )
    normalized = raw / scale
    return ResidualReport(
        raw=raw,
        scale=scale,
        normalized=normalized,
        tolerance=tol,
        passed=bool(normalized < tol),
        metadata=dict(metadata or {}),
    )


def normalized_residual(
    p: PolyMV,
    v: Sequence[Any],
    tol: float | None = None,
    *,
    metadata: dict[str, Any] | None = None,
) -> ResidualReport:
    """Normalized residual of `p` at `v`."""
    bits = max([p.bits, *(precision_of(x) for x in v)])
    return residual_from_terms(p.term_values(v), bits=bits, tol=tol, metadata=metadata)


def coefficient_scaled_residual(p: PolyMV, v: Sequence[Any]) -> float:
    """|p(v)| / sum |c_t| max(1, |v|_inf)^deg_t; defined where every term vanishes."""
    r = max([1.0, *(float(abs(x)) for x in v)])
    denom = sum(float(abs(c)) * r ** sum(e) for e, c in p.terms)
    if denom == 0.0:
        return 0.0
    return float(abs(p.evaluate(v)) / denom)


def relative_difference(a: Any, b: Any, *, tol: float | None = None) -> ResidualReport:
    """Residual of a - b; normalized is |a - b| / (|a| + |b|)."""
    bits = max(precision_of(a), precision_of(b))
    ctx = context_for(bits)
    return residual_from_terms([ctx.mpc(a), -ctx.mpc(b)], bits=bits, tol=tol)


def worst(reports: Sequence[ResidualReport]) -> ResidualReport:
    """The report with the largest normalized residual; degenerate reports win ties."""
    return max(reports, key=lambda r: (r.degenerate, float(r.normalized)))

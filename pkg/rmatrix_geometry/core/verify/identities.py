from __future__ import annotations

from typing import Any

from rmatrix_geometry.core.model.params import ModelParams
from rmatrix_geometry.core.model.points import PointCbar, SurfacePointS
from rmatrix_geometry.core.model.polys import q_polys, qbar_polys
from rmatrix_geometry.core.numkit.residual import normalized_residual, relative_difference
from rmatrix_geometry.core.rmatrix.assemble import (
    DB_SLOTS,
    D_SLOTS,
    RMatrix16,
    rational_assemble,
)
from rmatrix_geometry.core.rmatrix.entries import EntrySet, rational_entries, symmetric_entries
from rmatrix_geometry.core.verify.report import CheckReport, resolve_tolerance

IDENTITY_TOLERANCE = 1e-9
TWIST_TOLERANCE = 1e-12

# Off-diagonal blocks that must be transposes of each other in the symmetric gauge.
SYMMETRIC_C_PAIRS = ((2, 5), (3, 9), (8, 14), (12, 15))

# (row, col) against its mirror: M(row, col) = ratio(q, delta1) M(col, row) iff db = d.
SYMMETRIC_D_PAIRS = (
    ((4, 7), lambda q, d1: -1 / (q * d1**2)),
    ((4, 10), lambda q, d1: -q / d1**2),
    ((13, 7), lambda q, d1: -1 / (q**3 * d1**2)),
    ((13, 10), lambda q, d1: -1 / (q * d1**2)),
)


def _symmetric_values(es: EntrySet) -> tuple[Any, ...]:
    return (es.a, es.b, es.bb, es.c, es.d, es.f, es.g, es.gb)


def identity_suite_generic(
    es: EntrySet, mp: ModelParams, *, tol: float | None = None
) -> CheckReport:
    """Normalized residuals of Q1..Q5 at the entries."""
    tol = resolve_tolerance(mp, IDENTITY_TOLERANCE, tol)
    v = es.values()
    parts = {
        f"Q{k}": normalized_residual(p, v, tol)
        for k, p in enumerate(q_polys(mp.q, mp.U, mp.precision_bits), start=1)
    }
    return CheckReport.from_parts("identities.generic", parts, tol)


def identity_suite_symmetric(
    es: EntrySet, mp: ModelParams, *, tol: float | None = None
) -> CheckReport:
    """Q-bar 1..5 in the symmetric gauge plus cb = c and db = d.

    Q5 is also evaluated with cb := c and db := d, which Q-bar 5 implies by squaring.
    """
    tol = resolve_tolerance(mp, IDENTITY_TOLERANCE, tol)
    v = _symmetric_values(es)
    parts: dict[str, Any] = {
        f"Qbar{k}": normalized_residual(p, v, tol)
        for k, p in enumerate(qbar_polys(mp.q, mp.U, mp.precision_bits), start=1)
    }
    parts["cb=c"] = relative_difference(es.cb, es.c, tol=tol)
    parts["db=d"] = relative_difference(es.db, es.d, tol=tol)
    squared = (es.a, es.b, es.bb, es.c, es.c, es.d, es.d, es.f, es.g, es.gb)
    q5 = q_polys(mp.q, mp.U, mp.precision_bits)[4]
    parts["Q5(cb=c, db=d)"] = normalized_residual(q5, squared, tol)
    return CheckReport.from_parts("identities.symmetric", parts, tol)


def _slot_error(u: Any, v: Any) -> float:
    size = abs(u) + abs(v)
    return 0.0 if size == 0 else float(abs(u - v) / size)


def twist_covariance_check(
    s1: SurfacePointS, s2: SurfacePointS, mp: ModelParams, *, tol: float | None = None
) -> CheckReport:
    """Doubling delta halves the d slots, doubles the db slots and fixes the rest."""
    tol = resolve_tolerance(mp, TWIST_TOLERANCE, tol)
    es = rational_entries(s1, s2, mp)
    base = rational_assemble(es, mp).slot_values()
    twisted = rational_assemble(es, mp.with_delta(2 * mp.delta)).slot_values()
    worst = 0.0
    worst_pos: tuple[int, int] | None = None
    for pos, (slot, v) in base.items():
        w = twisted[pos][1]
        if slot in D_SLOTS:
            expected = v / 2
        elif slot in DB_SLOTS:
            expected = 2 * v
        else:
            expected = v
        err = _slot_error(w, expected)
        if err > worst:
            worst, worst_pos = err, pos
    return CheckReport.build(
        "identities.twist_covariance",
        [worst],
        tol,
        metadata={"worst_position": None if worst_pos is None else list(worst_pos)},
    )


def symmetric_transpose_residuals(m: RMatrix16, mp: ModelParams) -> dict[str, float]:
    out: dict[str, float] = {}
    for i, j in SYMMETRIC_C_PAIRS:
        out[f"({i},{j})"] = _slot_error(m.entry(i, j), m.entry(j, i))
    for (i, j), ratio in SYMMETRIC_D_PAIRS:
        out[f"({i},{j})"] = _slot_error(m.entry(i, j), ratio(mp.q, mp.delta1) * m.entry(j, i))
    return out


def symmetric_transpose_check(
    c1: PointCbar, c2: PointCbar, mp: ModelParams, *, tol: float | None = None
) -> CheckReport:
    """Off-diagonal blocks of the symmetric-gauge matrix mirror each other.

    The c blocks are exactly symmetric; the d blocks are symmetric up to the fixed
    powers of q and delta1 that the display puts on d and db.
    """
    tol = resolve_tolerance(mp, IDENTITY_TOLERANCE, tol)
    m = rational_assemble(symmetric_entries(c1, c2, mp), mp)
    return CheckReport.from_parts(
        "identities.symmetric_transpose", symmetric_transpose_residuals(m, mp), tol
    )

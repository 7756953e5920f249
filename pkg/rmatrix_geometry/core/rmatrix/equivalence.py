from __future__ import annotations

import itertools
import logging
from typing import Any, Iterator, Sequence

from rmatrix_geometry.core.model.maps import chan_map
from rmatrix_geometry.core.model.params import ModelParams
from rmatrix_geometry.core.model.points import SpectralPoint, SurfacePointS
from rmatrix_geometry.core.numkit.precision import DEGENERATE_SCALE
from rmatrix_geometry.core.numkit.residual import ResidualReport
from rmatrix_geometry.core.rmatrix.assemble import (
    CORNER_READINGS,
    DB_SLOTS,
    D_SLOTS,
    POSITIONS,
    RMatrix16,
    bk_assemble,
    rational_assemble,
)
from rmatrix_geometry.core.rmatrix.entries import (
    AmplitudeSet,
    EntrySet,
    bk_amplitudes,
    rational_entries,
)

log = logging.getLogger(__name__)

FORM_TOLERANCE = 1e-8

# Entries smaller than this fraction of the pivot are compared absolutely.
RELATIVE_FLOOR = 1e-6

# BK amplitude against rational entry; None is the literal unit entry.
PAIRS: tuple[tuple[str | None, str], ...] = (
    ("A", "a"),
    ("B", "b"),
    ("Bb", "bb"),
    ("C", "c"),
    ("Cb", "cb"),
    ("F", "f"),
    (None, "g"),
    ("G", "gb"),
)

Flips = tuple[bool, bool, bool, bool]


def _entry_error(u: Any, v: Any) -> float:
    size = abs(u) + abs(v)
    if size == 0:
        return 0.0
    if size < RELATIVE_FLOOR:
        return float(abs(u - v))
    return float(abs(u - v) / size)


def _degenerate(tol: float, metadata: dict[str, Any]) -> ResidualReport:
    return ResidualReport(
        raw=0.0,
        scale=0.0,
        normalized=float("inf"),
        tolerance=tol,
        passed=False,
        degenerate=True,
        metadata=metadata,
    )


def branch_assignments() -> Iterator[Flips]:
    """Sign flips of (sqrt_xi_plus_1, sqrt_xi_minus_1, sqrt_xi_plus_2, sqrt_xi_minus_2)."""
    yield from itertools.product((False, True), repeat=4)


def _vectors(amps: AmplitudeSet, es: EntrySet, one: Any) -> tuple[list[Any], list[Any]]:
    bk = amps.as_dict()
    rat = es.as_dict()
    return (
        [one if b is None else bk[b] for b, _ in PAIRS],
        [rat[r] for _, r in PAIRS],
    )


def proportionality(
    amps: AmplitudeSet,
    es: EntrySet,
    mp: ModelParams,
    tol: float = FORM_TOLERANCE,
) -> ResidualReport:
    """Whether (A, B, Bb, C, Cb, F, 1, G) is a multiple of (a, b, bb, c, cb, f, g, gb).

    The pivot is the largest BK entry. D and Db carry the twist freedom, so only
    D Db is compared against lambda^2 d db; kappa = D / (lambda d) is recorded.
    """
    u, v = _vectors(amps, es, mp.ctx.mpc(1))
    p = max(range(len(u)), key=lambda i: abs(u[i]))
    if abs(u[p]) < DEGENERATE_SCALE or abs(v[p]) < DEGENERATE_SCALE:
        return _degenerate(tol, {"pivot": PAIRS[p][1]})
    un = [x / u[p] for x in u]
    vn = [x / v[p] for x in v]
    errors = {r: _entry_error(a, b) for (_, r), a, b in zip(PAIRS, un, vn)}
    errors["d*db"] = _entry_error(amps.D * amps.Db / u[p] ** 2, es.d * es.db / v[p] ** 2)

    lam = u[p] / v[p]
    kappa = amps.D / (lam * es.d) if abs(es.d) > DEGENERATE_SCALE else None
    corner_bk = (amps.A - amps.F / mp.q) / u[p]
    corner = {
        "plain": _entry_error(corner_bk, (es.a - es.f / mp.q) / v[p]),
        "twisted": _entry_error(corner_bk, (es.a - es.f / (mp.q * mp.delta1)) / v[p]),
    }
    worst_entry = max(errors, key=lambda k: errors[k])
    normalized = errors[worst_entry]
    return ResidualReport(
        raw=normalized,
        scale=float(abs(u[p])),
        normalized=normalized,
        tolerance=tol,
        passed=normalized < tol,
        metadata={
            "pivot": PAIRS[p][1],
            "lambda": [float(lam.real), float(lam.imag)],
            "worst_entry": worst_entry,
            "kappa": None if kappa is None else [float(kappa.real), float(kappa.imag)],
            "kappa_expected": [float((-mp.q).real), float((-mp.q).imag)],
            "corner": corner,
            "corner_match": [k for k, e in corner.items() if e < tol],
        },
    )


def full_matrix_proportionality(
    bk: RMatrix16,
    rational: RMatrix16,
    tol: float = FORM_TOLERANCE,
) -> ResidualReport:
    """All displayed entries agree up to one scalar once the diagonal twist is removed.

    The twist rescales D-type slots by tau and Db-type slots by 1/tau; tau is taken
    from the largest D-type entry and recorded.
    """
    slots = {(r, c): s for r, c, s in POSITIONS}
    p = max(slots, key=lambda pos: abs(bk.entry(*pos)))
    bp, rp = bk.entry(*p), rational.entry(*p)
    if abs(bp) < DEGENERATE_SCALE or abs(rp) < DEGENERATE_SCALE:
        return _degenerate(tol, {"pivot": list(p)})

    d_pos = max(
        (pos for pos, s in slots.items() if s in D_SLOTS),
        key=lambda pos: abs(bk.entry(*pos)),
    )
    bd, rd = bk.entry(*d_pos) / bp, rational.entry(*d_pos) / rp
    tau = bd / rd if abs(rd) > DEGENERATE_SCALE else 1

    worst = 0.0
    worst_pos = p
    for pos, slot in slots.items():
        u = bk.entry(*pos) / bp
        v = rational.entry(*pos) / rp
        if slot in D_SLOTS:
            v = v * tau
        elif slot in DB_SLOTS:
            v = v / tau
        err = _entry_error(u, v)
        if err > worst:
            worst, worst_pos = err, pos
    lam = bp / rp
    return ResidualReport(
        raw=worst,
        scale=float(abs(bp)),
        normalized=worst,
        tolerance=tol,
        passed=worst < tol,
        metadata={
            "lambda": [float(lam.real), float(lam.imag)],
            "twist": [float(complex(tau).real), float(complex(tau).imag)],
            "worst_position": list(worst_pos),
        },
    )


def _flip(sp: SpectralPoint, plus: bool, minus: bool) -> SpectralPoint:
    return sp.flipped(plus=plus, minus=minus)


def form_equivalence(
    s1: SurfacePointS,
    s2: SurfacePointS,
    mp: ModelParams,
    tol: float = FORM_TOLERANCE,
    *,
    flips: Sequence[Flips] | None = None,
) -> ResidualReport:
    """BK amplitudes at the CHAN images against rational entries at (s1, s2).

    The cached roots from CHAN are tried first; on failure every sign assignment of
    the four roots is tried and the passing one is recorded.
    """
    sp1, sp2 = chan_map(s1, mp), chan_map(s2, mp)
    es = rational_entries(s1, s2, mp)
    candidates = list(flips) if flips is not None else list(branch_assignments())

    best: tuple[ResidualReport, Flips, AmplitudeSet] | None = None
    for flip in candidates:
        amps = bk_amplitudes(_flip(sp1, flip[0], flip[1]), _flip(sp2, flip[2], flip[3]), mp)
        report = proportionality(amps, es, mp, tol)
        if best is None or float(report.normalized) < float(best[0].normalized):
            best = (report, flip, amps)
        if report.passed:
            break
    assert best is not None
    report, flip, amps = best
    if flip != (False, False, False, False):
        log.debug("form equivalence needed root flips %s", flip)

    full = {
        reading: float(
            full_matrix_proportionality(
                bk_assemble(amps, mp), rational_assemble(es, mp, reading), tol
            ).normalized
        )
        for reading in CORNER_READINGS
    }
    meta = dict(report.metadata)
    meta.update({"branch_flips": list(flip), "full_matrix": full})
    return ResidualReport(
        raw=report.raw,
        scale=report.scale,
        normalized=report.normalized,
        tolerance=report.tolerance,
        passed=report.passed,
        degenerate=report.degenerate,
        metadata=meta,
    )

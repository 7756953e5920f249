from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Literal

import numpy as np

from rmatrix_geometry.core.model.params import ModelParams
from rmatrix_geometry.core.numkit.precision import PrecComplex, context_for
from rmatrix_geometry.core.rmatrix.entries import AmplitudeSet, EntrySet

CornerReading = Literal["plain", "twisted"]
CORNER_READINGS: tuple[CornerReading, ...] = ("plain", "twisted")

# (row, col, slot), 1-indexed as displayed; basis index (i - 1) * 4 + j for e_i (x) e_j.
POSITIONS: tuple[tuple[int, int, str], ...] = (
    (1, 1, "a"),
    (2, 2, "b"),
    (2, 5, "c"),
    (3, 3, "b"),
    (3, 9, "c"),
    (4, 4, "f"),
    (4, 7, "d"),
    (4, 10, "d_q"),
    (4, 13, "a_qf"),
    (5, 2, "cb"),
    (5, 5, "bb"),
    (6, 6, "unit"),
    (7, 4, "db_q"),
    (7, 7, "gb"),
    (7, 10, "g_qgb"),
    (7, 13, "db_q2"),
    (8, 8, "bb"),
    (8, 14, "cb"),
    (9, 3, "cb"),
    (9, 9, "bb"),
    (10, 4, "db"),
    (10, 7, "g_gbq"),
    (10, 10, "gb"),
    (10, 13, "db_mq"),
    (11, 11, "unit"),
    (12, 12, "bb"),
    (12, 15, "cb"),
    (13, 4, "corner"),
    (13, 7, "d_mq"),
    (13, 10, "d"),
    (13, 13, "f"),
    (14, 8, "c"),
    (14, 14, "b"),
    (15, 12, "c"),
    (15, 15, "b"),
    (16, 16, "a"),
)

SUPPORT_SIZE = len(POSITIONS)

D_SLOTS = frozenset({"d", "d_q", "d_mq"})
DB_SLOTS = frozenset({"db", "db_q", "db_q2", "db_mq"})


@dataclass(frozen=True, eq=False)
class RMatrix16:
    """Sparse 16x16 matrix on the displayed support; `entries` keys are 1-indexed."""

    entries: dict[tuple[int, int], PrecComplex]
    bits: int = 53

    def entry(self, row: int, col: int) -> PrecComplex:
        return self.entries.get((row, col), context_for(self.bits).mpc(0))

    def support(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.entries)

    def slot_values(self) -> dict[tuple[int, int], tuple[str, PrecComplex]]:
        return {(r, c): (slot, self.entries[(r, c)]) for r, c, slot in POSITIONS}

    def to_numpy(self) -> np.ndarray:
        """complex128 copy at 53 bits, mpmath objects otherwise."""
        if self.bits == 53:
            out = np.zeros((16, 16), dtype=np.complex128)
            for (r, c), v in self.entries.items():
                out[r - 1, c - 1] = complex(v)
            return out
        ctx = context_for(self.bits)
        out = np.full((16, 16), ctx.mpc(0), dtype=object)
        for (r, c), v in self.entries.items():
            out[r - 1, c - 1] = v
        return out

    def transpose(self) -> "RMatrix16":
        return RMatrix16({(c, r): v for (r, c), v in self.entries.items()}, self.bits)


def _place(slots: dict[str, Any], bits: int) -> RMatrix16:
    return RMatrix16({(r, c): slots[slot] for r, c, slot in POSITIONS}, bits)


def bk_assemble(amps: AmplitudeSet, mp: ModelParams) -> RMatrix16:
    q, delta = mp.q, mp.delta
    A, F, G, D, Db = amps.A, amps.F, amps.G, amps.D, amps.Db
    slots = {
        "a": A,
        "b": amps.B,
        "bb": amps.Bb,
        "c": amps.C,
        "cb": amps.Cb,
        "f": F,
        "d": D / delta,
        "d_q": -q * D / delta,
        "d_mq": -D / (delta * q),
        "a_qf": A - q * F,
        "corner": A - F / q,
        "unit": mp.ctx.mpc(1),
        "gb": G,
        "g_qgb": 1 - q * G,
        "g_gbq": 1 - G / q,
        "db": delta * Db,
        "db_q": -delta * q * Db,
        "db_q2": delta * q**2 * Db,
        "db_mq": -delta * q * Db,
    }
    return _place(slots, mp.precision_bits)


def rational_assemble(
    es: EntrySet, mp: ModelParams, corner: CornerReading = "plain"
) -> RMatrix16:
    """Rational display with delta1 = -delta/q.

    `corner` picks the reading of row 13, column 4: "plain" is a - f/q, "twisted" is
    a - f/(q delta1) as printed.
    """
    if corner not in CORNER_READINGS:
        raise ValueError(f"unknown corner reading {corner!r}")
    q, d1 = mp.q, mp.delta1
    a, f, g, gb, d, db = es.a, es.f, es.g, es.gb, es.d, es.db
    slots = {
        "a": a,
        "b": es.b,
        "bb": es.bb,
        "c": es.c,
        "cb": es.cb,
        "f": f,
        "d": d / d1,
        "d_q": -q * d / d1,
        "d_mq": -d / (q * d1),
        "a_qf": a - q * f,
        "corner": a - f / q if corner == "plain" else a - f / (q * d1),
        "unit": g,
        "gb": gb,
        "g_qgb": g - q * gb,
        "g_gbq": g - gb / q,
        "db": d1 * db,
        "db_q": -q * d1 * db,
        "db_q2": q**2 * d1 * db,
        "db_mq": -q * d1 * db,
    }
    return _place(slots, mp.precision_bits)

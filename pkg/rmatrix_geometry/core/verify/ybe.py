"""Yang-Baxter and transfer-matrix checks on C^4 tensor products.

Operators are dense arrays: complex128 at 53 bits, mpmath objects otherwise. Factor
k of (C^4)^n is axis k of the reshaped state, so the basis index of
e_i (x) e_j is (i - 1) * 4 + j as in the displays.
"""

from __future__ import annotations

import itertools
import logging
from typing import Any, Literal, Sequence

import numpy as np

from rmatrix_geometry.core.model.params import ModelParams
from rmatrix_geometry.core.model.points import SpectralPoint, SurfacePointS
from rmatrix_geometry.core.rmatrix.assemble import RMatrix16, bk_assemble, rational_assemble
from rmatrix_geometry.core.rmatrix.entries import bk_amplitudes, rational_entries
from rmatrix_geometry.core.verify.report import CheckReport, resolve_tolerance

log = logging.getLogger(__name__)

Builder = Literal["bk", "rational"]

YBE_TOLERANCE = 1e-9
TRANSFER_TOLERANCE = 1e-8
MAX_SITES = 4

# Sign flips of (sqrt(xi + x+), sqrt(xi + x-)) for each of three points.
SignAssignment = tuple[bool, ...]


def embed(r: np.ndarray, i: int, j: int, n: int) -> np.ndarray:
    """The 16x16 operator `r` acting on factors i < j of (C^4)^n."""
    d = 4**n
    r4 = r.reshape(4, 4, 4, 4)
    eye = np.eye(d, dtype=r.dtype) if r.dtype != object else _object_eye(d, r)
    state = eye.reshape([4] * n + [d])
    out = np.tensordot(r4, state, axes=([2, 3], [i, j]))
    out = np.moveaxis(out, [0, 1], [i, j])
    return out.reshape(d, d)


def _object_eye(d: int, like: np.ndarray) -> np.ndarray:
    zero = like.flat[0] * 0
    out = np.full((d, d), zero, dtype=object)
    for k in range(d):
        out[k, k] = zero + 1
    return out


def max_abs(m: np.ndarray) -> float:
    if m.dtype == object:
        return max((float(abs(v)) for v in m.flat), default=0.0)
    return float(np.abs(m).max(initial=0.0))


def ybe_residual(r12: RMatrix16, r13: RMatrix16, r23: RMatrix16) -> float:
    """||R12 R13 R23 - R23 R13 R12||_max over the larger side's max entry."""
    a = embed(r12.to_numpy(), 0, 1, 3)
    b = embed(r13.to_numpy(), 0, 2, 3)
    c = embed(r23.to_numpy(), 1, 2, 3)
    lhs = a @ b @ c
    rhs = c @ b @ a
    scale = max(max_abs(lhs), max_abs(rhs))
    if scale == 0.0:
        return float("inf")
    return max_abs(lhs - rhs) / scale


def rational_r(p1: SurfacePointS, p2: SurfacePointS, mp: ModelParams) -> RMatrix16:
    return rational_assemble(rational_entries(p1, p2, mp), mp)


def bk_r(p1: SpectralPoint, p2: SpectralPoint, mp: ModelParams) -> RMatrix16:
    return bk_assemble(bk_amplitudes(p1, p2, mp), mp)


def _flipped(points: Sequence[SpectralPoint], signs: SignAssignment) -> list[SpectralPoint]:
    return [p.flipped(plus=signs[2 * k], minus=signs[2 * k + 1]) for k, p in enumerate(points)]


def _bk_residual(points: Sequence[SpectralPoint], mp: ModelParams) -> float:
    p1, p2, p3 = points
    return ybe_residual(bk_r(p1, p2, mp), bk_r(p1, p3, mp), bk_r(p2, p3, mp))


def ybe_check(
    builder: Builder,
    p1: Any,
    p2: Any,
    p3: Any,
    mp: ModelParams,
    *,
    tol: float | None = None,
) -> CheckReport:
    """YBE at (p1, p2, p3) with R13 = R(p1, p3).

    The bk builder first uses the cached roots; when that fails every sign
    assignment of the six roots is tried and the passing one is recorded.
    """
    tol = resolve_tolerance(mp, YBE_TOLERANCE, tol)
    name = f"ybe.{builder}"
    if builder == "rational":
        residual = ybe_residual(
            rational_r(p1, p2, mp), rational_r(p1, p3, mp), rational_r(p2, p3, mp)
        )
        return CheckReport.build(name, [residual], tol, metadata={"builder": builder})
    if builder != "bk":
        raise ValueError(f"unknown builder {builder!r}")

    points = [p1, p2, p3]
    principal: SignAssignment = (False,) * 6
    residual = _bk_residual(points, mp)
    signs = principal
    if residual >= tol:
        log.debug("ybe.bk: principal roots give %.3g; searching sign assignments", residual)
        best = (residual, principal)
        for cand in itertools.product((False, True), repeat=6):
            if cand == principal:
                continue
            r = _bk_residual(_flipped(points, cand), mp)
            if r < best[0]:
                best = (r, cand)
            if r < tol:
                break
        residual, signs = best
    return CheckReport.build(
        name,
        [residual],
        tol,
        metadata={
            "builder": builder,
            "branch_flips": list(signs),
            "branch_search": signs != principal,
        },
    )


def transfer_matrix(
    p: SurfacePointS,
    inhomogeneities: Sequence[SurfacePointS],
    mp: ModelParams,
) -> np.ndarray:
    """tr_a R_a1(p, s_1) R_a2(p, s_2) ... R_aN(p, s_N) on (C^4)^N; factor 0 is auxiliary."""
    n = len(inhomogeneities)
    mono = None
    for site, s in enumerate(inhomogeneities, start=1):
        op = embed(rational_r(p, s, mp).to_numpy(), 0, site, n + 1)
        mono = op if mono is None else mono @ op
    assert mono is not None
    d = 4**n
    blocks = mono.reshape(4, d, 4, d)
    out = blocks[0, :, 0, :]
    for a in range(1, 4):
        out = out + blocks[a, :, a, :]
    return out


def transfer_commutativity(
    mp: ModelParams,
    n: int,
    p1: SurfacePointS,
    p2: SurfacePointS,
    inhomogeneities: Sequence[SurfacePointS] | SurfacePointS,
    *,
    tol: float | None = None,
) -> CheckReport:
    """||[T(p1), T(p2)]||_max / (||T(p1)||_max ||T(p2)||_max) on N sites.

    A single inhomogeneity point is repeated on every site.
    """
    if not 2 <= n <= MAX_SITES:
        raise ValueError(f"number of sites must be in 2..{MAX_SITES}, got {n}")
    tol = resolve_tolerance(mp, TRANSFER_TOLERANCE, tol)
    repeated = isinstance(inhomogeneities, SurfacePointS)
    sites = [inhomogeneities] * n if repeated else list(inhomogeneities)
    if len(sites) != n:
        raise ValueError(f"expected {n} inhomogeneities, got {len(sites)}")
    t1 = transfer_matrix(p1, sites, mp)
    t2 = transfer_matrix(p2, sites, mp)
    scale = max_abs(t1) * max_abs(t2)
    residual = max_abs(t1 @ t2 - t2 @ t1) / scale if scale else float("inf")
    return CheckReport.build(
        f"transfer.n{n}",
        [residual],
        tol,
        metadata={"sites": n, "repeated_inhomogeneity": repeated},
    )

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Literal, Sequence

import numpy as np

from rmatrix_geometry.core.errors import NumericError
from rmatrix_geometry.core.numkit.poly import PolyMV
from rmatrix_geometry.core.numkit.precision import (
    DEGENERATE_SCALE,
    PrecComplex,
    context_for,
    default_tolerance,
    precision_of,
)

log = logging.getLogger(__name__)

CONDITION_LIMIT = 1e12
MAX_HALVINGS = 20
STEP_TOL = 1e-10

Acceptance = Literal["normalized", "scaled"]

# Status codes of the batch engine.
RUNNING, CONVERGED, SINGULAR, STAGNATION, MAX_ITER, DIVERGED = range(6)
REASONS = {
    RUNNING: "max_iter",
    CONVERGED: "converged",
    SINGULAR: "singular",
    STAGNATION: "stagnation",
    MAX_ITER: "max_iter",
    DIVERGED: "diverged",
}


@dataclass(frozen=True)
class NewtonResult:
    point: tuple[PrecComplex, ...]
    converged: bool
    reason: str
    iterations: int
    residual: float


@dataclass(frozen=True)
class BatchResult:
    points: np.ndarray
    status: np.ndarray
    iterations: np.ndarray
    residual: np.ndarray

    @property
    def converged(self) -> np.ndarray:
        return self.status == CONVERGED


class _System:
    """numpy view of a polynomial system and its Jacobian."""

    def __init__(self, f: Sequence[PolyMV]):
        if not f:
            raise NumericError(code="E_NEWTON_SHAPE", message="empty system")
        n = f[0].nvars
        if any(p.nvars != n for p in f):
            raise NumericError(code="E_NEWTON_SHAPE", message="equations differ in nvars")
        if len(f) < n:
            raise NumericError(
                code="E_NEWTON_SHAPE",
                message=f"{len(f)} equations in {n} unknowns is underdetermined",
            )
        self.f = list(f)
        self.n = n
        self.jac = [[p.derivative(j) for j in range(n)] for p in self.f]
        self.abs_coeffs = [np.abs(p.numpy_form[1]) for p in self.f]
        self.degrees = [p.numpy_form[0].sum(axis=1) for p in self.f]

    def values(self, x: np.ndarray) -> np.ndarray:
        return np.stack([p.evaluate_batch(x) for p in self.f], axis=1)

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        rows = [np.stack([d.evaluate_batch(x) for d in row], axis=1) for row in self.jac]
        return np.stack(rows, axis=1)

    def accepted(self, x: np.ndarray, fx: np.ndarray, mode: Acceptance, tol: float) -> np.ndarray:
        ok = np.ones(len(x), dtype=bool)
        if mode == "normalized":
            for k, p in enumerate(self.f):
                scale = p.term_scale_batch(x)
                with np.errstate(divide="ignore", invalid="ignore"):
                    norm = np.abs(fx[:, k]) / scale
                ok &= (scale > DEGENERATE_SCALE) & (norm < tol)
            return ok
        r = np.maximum(1.0, np.abs(x).max(axis=1))
        for k in range(len(self.f)):
            weights = r[:, None] ** self.degrees[k][None, :]
            denom = (self.abs_coeffs[k][None, :] * weights).sum(axis=1)
            with np.errstate(divide="ignore", invalid="ignore"):
                val = np.where(denom > 0, np.abs(fx[:, k]) / denom, 0.0)
            ok &= val < tol
        return ok


def _gauss_newton_step(J: np.ndarray, F: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Least-squares steps and condition estimates for stacked Jacobians."""
    U, S, Vh = np.linalg.svd(J, full_matrices=False)
    smax = S[:, 0]
    smin = S[:, -1]
    with np.errstate(divide="ignore", invalid="ignore"):
        cond = np.where(smin > 0, smax / smin, np.inf)
        inv = np.where(S > smax[:, None] / CONDITION_LIMIT ** 2, 1.0 / S, 0.0)
    coeff = np.einsum("nmk,nm->nk", U.conj(), F) * inv
    step = np.einsum("nkj,nk->nj", Vh.conj(), coeff)
    return step, cond


def newton_batch(
    f: Sequence[PolyMV],
    starts: np.ndarray,
    *,
    max_iter: int = 100,
    tol: float = 1e-10,
    accept: Acceptance = "normalized",
) -> BatchResult:
    """Damped Gauss-Newton from many starts at once, in complex128.

    A start converges once its residual is accepted and either the step falls below
    STEP_TOL relative to the point or the Jacobian condition exceeds CONDITION_LIMIT.
    A start whose Jacobian condition exceeds CONDITION_LIMIT before acceptance is
    marked singular; one whose residual cannot be decreased by up to MAX_HALVINGS
    step halvings is marked stagnant.
    """
    sys_ = _System(f)
    x = np.array(starts, dtype=np.complex128, copy=True)
    if x.ndim != 2 or x.shape[1] != sys_.n:
        raise NumericError(code="E_NEWTON_SHAPE", message=f"starts must have shape (N, {sys_.n})")
    N = len(x)
    status = np.full(N, RUNNING, dtype=np.int64)
    iters = np.zeros(N, dtype=np.int64)

    for _ in range(max_iter):
        idx = np.flatnonzero(status == RUNNING)
        if idx.size == 0:
            break
        xa = x[idx]
        fa = sys_.values(xa)
        finite = np.isfinite(xa).all(axis=1) & np.isfinite(fa).all(axis=1)
        status[idx[~finite]] = DIVERGED
        idx, xa, fa = idx[finite], xa[finite], fa[finite]
        if idx.size == 0:
            break

        ok = sys_.accepted(xa, fa, accept, tol)
        step, cond = _gauss_newton_step(sys_.jacobian(xa), fa)
        small = np.linalg.norm(step, axis=1) < STEP_TOL * (1.0 + np.linalg.norm(xa, axis=1))
        exact = np.all(fa == 0, axis=1)
        done = ok & (small | (cond > CONDITION_LIMIT) | exact)
        status[idx[done]] = CONVERGED
        singular = ~ok & (cond > CONDITION_LIMIT)
        status[idx[singular]] = SINGULAR

        move = ~done & ~singular
        if not move.any():
            continue
        idx, xa, fa, step = idx[move], xa[move], fa[move], step[move]
        r0 = np.linalg.norm(fa, axis=1)
        alpha = np.ones(len(idx))
        trial = xa - step
        r1 = np.linalg.norm(sys_.values(trial), axis=1)
        pending = ~(r1 < r0)
        for _ in range(MAX_HALVINGS):
            if not pending.any():
                break
            alpha[pending] *= 0.5
            trial[pending] = xa[pending] - alpha[pending, None] * step[pending]
            r1[pending] = np.linalg.norm(sys_.values(trial[pending]), axis=1)
            pending = ~(r1 < r0)
        stuck = pending
        status[idx[stuck]] = np.where(ok[move][stuck], CONVERGED, STAGNATION)
        advance = ~stuck
        x[idx[advance]] = trial[advance]
        iters[idx[advance]] += 1

    status[status == RUNNING] = MAX_ITER
    final = sys_.values(x)
    res = np.abs(final).max(axis=1) if final.size else np.zeros(N)
    log.debug("newton batch: %d of %d starts converged", int((status == CONVERGED).sum()), N)
    return BatchResult(points=x, status=status, iterations=iters, residual=res)


def _newton_mp(
    f: Sequence[PolyMV],
    start: Sequence[Any],
    bits: int,
    max_iter: int,
    tol: float,
) -> NewtonResult:
    ctx = context_for(bits)
    n = f[0].nvars
    jac = [[p.derivative(j) for j in range(n)] for p in f]
    x = [ctx.mpc(v) for v in start]

    def accepted(pt: list[Any]) -> bool:
        for p in f:
            terms = p.term_values(pt)
            scale = ctx.fsum(abs(t) for t in terms)
            if scale < DEGENERATE_SCALE or abs(ctx.fsum(terms)) / scale >= tol:
                return False
        return True

    def norm(vals: list[Any]) -> Any:
        return ctx.sqrt(ctx.fsum(abs(v) ** 2 for v in vals))

    for it in range(max_iter):
        fx = [p.evaluate(x) for p in f]
        J = ctx.matrix([[d.evaluate(x) for d in row] for row in jac])
        sv = ctx.svd_c(J, compute_uv=False)
        svals = [abs(sv[i]) for i in range(sv.rows)]
        smin = min(svals)
        cond = float(max(svals) / smin) if smin > 0 else float("inf")
        ok = accepted(x)
        if not ok and cond > CONDITION_LIMIT:
            return NewtonResult(tuple(x), False, "singular", it, float(norm(fx)))
        if cond > CONDITION_LIMIT:
            return NewtonResult(tuple(x), True, "converged", it, float(norm(fx)))
        rhs = ctx.matrix([-v for v in fx])
        dx = ctx.qr_solve(J, rhs)[0] if len(f) > n else ctx.lu_solve(J, rhs)
        step = [dx[j] for j in range(n)]
        if ok and norm(step) < STEP_TOL * (1 + norm(x)):
            return NewtonResult(tuple(x), True, "converged", it, float(norm(fx)))
        r0 = norm(fx)
        alpha = ctx.mpf(1)
        for _ in range(MAX_HALVINGS + 1):
            trial = [xi + alpha * si for xi, si in zip(x, step)]
            if norm([p.evaluate(trial) for p in f]) < r0:
                break
            alpha /= 2
        else:
            reason = "converged" if ok else "stagnation"
            return NewtonResult(tuple(x), ok, reason, it, float(r0))
        x = trial
    fx = [p.evaluate(x) for p in f]
    ok = accepted(x)
    return NewtonResult(tuple(x), ok, "converged" if ok else "max_iter", max_iter, float(norm(fx)))


def newton_system(
    f: Sequence[PolyMV],
    start: Sequence[Any],
    max_iter: int = 100,
    *,
    tol: float | None = None,
) -> NewtonResult:
    """Newton iteration for a polynomial system with analytic Jacobian.

    Square systems take plain Newton steps; systems with more equations than unknowns
    take Gauss-Newton (least-squares) steps. Convergence requires every normalized
    residual below `tol`. The 53-bit path runs the batch engine on a single start.
    """
    bits = max([p.bits for p in f] + [precision_of(v) for v in start])
    tol = default_tolerance(bits) if tol is None else tol
    if bits == 53:
        res = newton_batch(f, np.array([[complex(v) for v in start]]), max_iter=max_iter, tol=tol)
        ctx = context_for(53)
        status = int(res.status[0])
        return NewtonResult(
            point=tuple(ctx.mpc(complex(v)) for v in res.points[0]),
            converged=status == CONVERGED,
            reason=REASONS[status],
            iterations=int(res.iterations[0]),
            residual=float(res.residual[0]),
        )
    _System(f)
    return _newton_mp(f, start, bits, max_iter, tol)

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Mapping, Sequence

import numpy as np

from rmatrix_geometry.core.errors import NumericError
from rmatrix_geometry.core.numkit.precision import PrecComplex, context_for, precision_of

Exps = tuple[int, ...]


@dataclass(frozen=True, repr=False)
class PolyMV:
    """Sparse multivariate polynomial with mpmath coefficients.

    Terms are sorted by exponent vector; exponent vectors are unique and zero
    coefficients are absent. Build instances with `from_dict` or the arithmetic
    operators rather than the constructor.
    """

    nvars: int
    terms: tuple[tuple[Exps, PrecComplex], ...]
    bits: int = 53

    # -- construction -------------------------------------------------------------------------

    @classmethod
    def from_dict(cls, nvars: int, coeffs: Mapping[Exps, Any], bits: int = 53) -> "PolyMV":
        ctx = context_for(bits)
        items: list[tuple[Exps, PrecComplex]] = []
        for exps, c in coeffs.items():
            if len(exps) != nvars:
                raise NumericError(
                    code="E_POLY_ARITY",
                    message=f"exponent vector {exps} does not have {nvars} entries",
                )
            if any(e < 0 for e in exps):
                raise NumericError(code="E_POLY_ARITY", message=f"negative exponent in {exps}")
            v = ctx.mpc(c)
            if v != 0:
                items.append((tuple(int(e) for e in exps), v))
        items.sort(key=lambda t: t[0])
        return cls(nvars=nvars, terms=tuple(items), bits=bits)

    @classmethod
    def zero(cls, nvars: int, bits: int = 53) -> "PolyMV":
        return cls(nvars=nvars, terms=(), bits=bits)

    @classmethod
    def constant(cls, value: Any, nvars: int, bits: int = 53) -> "PolyMV":
        return cls.from_dict(nvars, {(0,) * nvars: value}, bits)

    @classmethod
    def variables(cls, nvars: int, bits: int = 53) -> tuple["PolyMV", ...]:
        out = []
        for i in range(nvars):
            exps = tuple(1 if j == i else 0 for j in range(nvars))
            out.append(cls.from_dict(nvars, {exps: 1}, bits))
        return tuple(out)

    # -- inspection ---------------------------------------------------------------------------

    @cached_property
    def _index(self) -> dict[Exps, PrecComplex]:
        return dict(self.terms)

    def coefficient(self, exps: Sequence[int]) -> PrecComplex:
        return self._index.get(tuple(exps), context_for(self.bits).mpc(0))

    def as_dict(self) -> dict[Exps, PrecComplex]:
        return dict(self._index)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def total_degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=0)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e, _ in self.terms), default=0)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e, _ in self.terms}) <= 1

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        return f"PolyMV(nvars={self.nvars}, terms={len(self.terms)}, bits={self.bits})"

    # -- arithmetic ---------------------------------------------------------------------------

    def _coerce(self, other: Any) -> "PolyMV":
        if isinstance(other, PolyMV):
            if other.nvars != self.nvars:
                raise NumericError(
                    code="E_POLY_ARITY",
                    message=f"nvars mismatch: {self.nvars} vs {other.nvars}",
                )
            return other
        bits = max(self.bits, precision_of(other))
        return PolyMV.constant(other, self.nvars, bits)

    def __add__(self, other: Any) -> "PolyMV":
        o = self._coerce(other)
        bits = max(self.bits, o.bits)
        ctx = context_for(bits)
        acc: dict[Exps, PrecComplex] = {e: ctx.mpc(c) for e, c in self.terms}
        for e, c in o.terms:
            acc[e] = acc[e] + c if e in acc else ctx.mpc(c)
        return PolyMV.from_dict(self.nvars, acc, bits)

    __radd__ = __add__

    def __neg__(self) -> "PolyMV":
        return PolyMV(nvars=self.nvars, terms=tuple((e, -c) for e, c in self.terms), bits=self.bits)

    def __sub__(self, other: Any) -> "PolyMV":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> "PolyMV":
        return self._coerce(other) + (-self)

    def __mul__(self, other: Any) -> "PolyMV":
        if not isinstance(other, PolyMV):
            bits = max(self.bits, precision_of(other))
            ctx = context_for(bits)
            s = ctx.mpc(other)
            return PolyMV.from_dict(self.nvars, {e: c * s for e, c in self.terms}, bits)
        return mv_multiply(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> "PolyMV":
        if isinstance(other, PolyMV):
            raise NumericError(code="E_POLY_DIVISION", message="only division by scalars")
        ctx = context_for(max(self.bits, precision_of(other)))
        return self * (1 / ctx.mpc(other))

    def __pow__(self, n: int) -> "PolyMV":
        if n < 0:
            raise NumericError(code="E_POLY_DIVISION", message="negative power")
        result = PolyMV.constant(1, self.nvars, self.bits)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def with_precision(self, bits: int) -> "PolyMV":
        return PolyMV.from_dict(self.nvars, self._index, bits)

    # -- calculus and substitution ------------------------------------------------------------

    def derivative(self, i: int) -> "PolyMV":
        out: dict[Exps, PrecComplex] = {}
        for e, c in self.terms:
            if e[i] == 0:
                continue
            ne = list(e)
            ne[i] -= 1
            out[tuple(ne)] = c * e[i]
        return PolyMV.from_dict(self.nvars, out, self.bits)

    def substitute(self, i: int, value: Any) -> "PolyMV":
        """Fix variable i at `value`; the result has nvars - 1 variables."""
        bits = max(self.bits, precision_of(value))
        ctx = context_for(bits)
        v = ctx.mpc(value)
        acc: dict[Exps, list[PrecComplex]] = defaultdict(list)
        for e, c in self.terms:
            ne = e[:i] + e[i + 1 :]
            acc[ne].append(ctx.mpc(c) * v ** e[i])
        merged = {e: ctx.fsum(cs) for e, cs in acc.items()}
        return PolyMV.from_dict(self.nvars - 1, merged, bits)

    def univariate(self, i: int, point: Sequence[Any]) -> list[PrecComplex]:
        """Coefficients in variable i (highest degree first) with the others fixed at `point`.

        `point[i]` is ignored.
        """
        bits = max([self.bits, *(precision_of(v) for j, v in enumerate(point) if j != i)])
        ctx = context_for(bits)
        vals = [ctx.mpc(v) if j != i else ctx.mpc(1) for j, v in enumerate(point)]
        deg = self.degree_in(i)
        buckets: list[list[PrecComplex]] = [[] for _ in range(deg + 1)]
        for e, c in self.terms:
            t = ctx.mpc(c)
            for j, ej in enumerate(e):
                if j != i and ej:
                    t *= vals[j] ** ej
            buckets[e[i]].append(t)
        return [ctx.fsum(b) if b else ctx.mpc(0) for b in reversed(buckets)]

    def scale_variables(self, factors: Sequence[Any]) -> "PolyMV":
        """Return p(f_0 x_0, ..., f_{n-1} x_{n-1})."""
        bits = max([self.bits, *(precision_of(f) for f in factors)])
        ctx = context_for(bits)
        fs = [ctx.mpc(f) for f in factors]
        out = {}
        for e, c in self.terms:
            t = ctx.mpc(c)
            for f, ej in zip(fs, e):
                if ej:
                    t *= f**ej
            out[e] = t
        return PolyMV.from_dict(self.nvars, out, bits)

    # -- evaluation ---------------------------------------------------------------------------

    def term_values(self, point: Sequence[Any]) -> list[PrecComplex]:
        if len(point) != self.nvars:
            raise NumericError(
                code="E_POLY_ARITY",
                message=f"point has {len(point)} coordinates, polynomial has {self.nvars}",
            )
        bits = max([self.bits, *(precision_of(v) for v in point)])
        ctx = context_for(bits)
        vals = [ctx.mpc(v) for v in point]
        powers: list[list[PrecComplex]] = []
        for j, v in enumerate(vals):
            deg = self.degree_in(j)
            pw = [ctx.mpc(1)]
            for _ in range(deg):
                pw.append(pw[-1] * v)
            powers.append(pw)
        out = []
        for e, c in self.terms:
            t = ctx.mpc(c)
            for j, ej in enumerate(e):
                if ej:
                    t *= powers[j][ej]
            out.append(t)
        return out

    def evaluate(self, point: Sequence[Any]) -> PrecComplex:
        vals = self.term_values(point)
        bits = max([self.bits, *(precision_of(v) for v in point)])
        return context_for(bits).fsum(vals) if vals else context_for(bits).mpc(0)

    __call__ = evaluate

    # -- numpy fast path (53 bits) --------------------------------------------------------------

    @cached_property
    def numpy_form(self) -> tuple[np.ndarray, np.ndarray]:
        """(exponents[T, n], coefficients[T]) as int64 / complex128 arrays."""
        if not self.terms:
            return np.zeros((0, self.nvars), dtype=np.int64), np.zeros(0, dtype=np.complex128)
        exps = np.array([e for e, _ in self.terms], dtype=np.int64)
        coeffs = np.array([complex(c) for _, c in self.terms], dtype=np.complex128)
        return exps, coeffs

    def monomials_batch(self, points: np.ndarray) -> np.ndarray:
        """Monomial values at each point: complex128 array of shape (N, T)."""
        exps, _ = self.numpy_form
        pts = np.asarray(points, dtype=np.complex128)
        return np.prod(pts[:, None, :] ** exps[None, :, :], axis=2)

    def evaluate_batch(self, points: np.ndarray) -> np.ndarray:
        _, coeffs = self.numpy_form
        if coeffs.size == 0:
            return np.zeros(len(points), dtype=np.complex128)
        return self.monomials_batch(points) @ coeffs

    def term_scale_batch(self, points: np.ndarray) -> np.ndarray:
        _, coeffs = self.numpy_form
        if coeffs.size == 0:
            return np.zeros(len(points))
        return np.abs(self.monomials_batch(points) * coeffs[None, :]).sum(axis=1)


def mv_multiply(p: PolyMV, q: PolyMV) -> PolyMV:
    """Product with coefficients merged by exponent vector.

    Colliding products are summed with `fsum`, so the result does not depend on
    operand order.
    """
    if p.nvars != q.nvars:
        raise NumericError(code="E_POLY_ARITY", message=f"nvars mismatch: {p.nvars} vs {q.nvars}")
    bits = max(p.bits, q.bits)
    ctx = context_for(bits)
    acc: dict[Exps, list[PrecComplex]] = defaultdict(list)
    for e1, c1 in p.terms:
        for e2, c2 in q.terms:
            acc[tuple(a + b for a, b in zip(e1, e2))].append(ctx.mpc(c1) * c2)
    return PolyMV.from_dict(p.nvars, {e: ctx.fsum(cs) for e, cs in acc.items()}, bits)


@dataclass(frozen=True)
class ScalarMatch:
    equal: bool
    scale: PrecComplex | None
    worst_monomial: Exps | None
    worst_error: float

    def __bool__(self) -> bool:
        return self.equal


def mv_equal_up_to_scalar(p: PolyMV, q: PolyMV, tol: float = 1e-12) -> ScalarMatch:
    """Decide p = scale * q coefficient-wise.

    The scale comes from the largest-magnitude coefficient of q. Coefficients below
    1e-30 of their polynomial's largest are treated as zero.
    """
    if p.nvars != q.nvars:
        raise NumericError(code="E_POLY_ARITY", message=f"nvars mismatch: {p.nvars} vs {q.nvars}")
    if p.is_zero() or q.is_zero():
        both = p.is_zero() and q.is_zero()
        return ScalarMatch(
            equal=both, scale=None, worst_monomial=None, worst_error=0.0 if both else 1.0
        )

    bits = max(p.bits, q.bits)
    ctx = context_for(bits)
    pd, qd = p.as_dict(), q.as_dict()
    pivot = max(qd, key=lambda e: abs(qd[e]))
    if pivot not in pd:
        return ScalarMatch(equal=False, scale=None, worst_monomial=pivot, worst_error=1.0)
    lam = ctx.mpc(pd[pivot]) / qd[pivot]

    pmax = max(abs(c) for c in pd.values())
    qmax = max(abs(lam * c) for c in qd.values())
    worst_e: Exps | None = None
    worst = 0.0
    for e in sorted(set(pd) | set(qd)):
        a = ctx.mpc(pd.get(e, 0))
        b = lam * qd.get(e, 0)
        a_zero = abs(a) < 1e-30 * pmax
        b_zero = abs(b) < 1e-30 * qmax
        if a_zero and b_zero:
            continue
        if a_zero or b_zero:
            err = 1.0
        else:
            err = float(abs(a - b) / max(abs(a), abs(b)))
        if err > worst:
            worst, worst_e = err, e
    return ScalarMatch(equal=worst < tol, scale=lam, worst_monomial=worst_e, worst_error=worst)

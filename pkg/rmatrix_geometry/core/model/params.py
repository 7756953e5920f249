from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from rmatrix_geometry.core.errors import ConfigError, DegeneracyError
from rmatrix_geometry.core.numkit.precision import (
    PrecComplex,
    context_for,
    default_tolerance,
    principal_root,
)

# Excluded deformation parameters.
_FORBIDDEN_Q = (0, 1, -1, 1j, -1j)
_EXCLUSION_RADIUS = 1e-12


def hubbard_u(q: Any, g: Any, bits: int = 53) -> PrecComplex:
    """U = sqrt(q) [1 - 2 g^2 (q - 1/q)^2] / (g sqrt(g^2 (q - 1/q)^2 - 1)), principal roots."""
    ctx = context_for(bits)
    q = ctx.mpc(q)
    g = ctx.mpc(g)
    if g == 0:
        raise DegeneracyError(code="E_MODEL_COUPLING", message="g must be nonzero", path="g")
    t = g**2 * (q - 1 / q) ** 2
    radicand = t - 1
    if abs(radicand) < _EXCLUSION_RADIUS * max(1, abs(t)):
        raise DegeneracyError(
            code="E_MODEL_BRANCH_POINT",
            message="radicand g^2 (q - 1/q)^2 - 1 vanishes",
            path="U",
        )
    return ctx.sqrt(q) * (1 - 2 * t) / (g * ctx.sqrt(radicand))


@dataclass(frozen=True)
class ModelParams:
    """Coupling data shared by every curve, surface and R-matrix builder.

    `s` is the square root of 1 + xi^2 on the branch tied to U: with principal roots
    in U, s = i sqrt(g^2 (q - 1/q)^2 - 1).
    """

    q: PrecComplex
    g: PrecComplex
    xi: PrecComplex
    U: PrecComplex
    delta: PrecComplex
    delta1: PrecComplex
    precision_bits: int
    s: PrecComplex
    sqrt_q: PrecComplex
    q_quarter: PrecComplex
    tolerance: float
    u_given: bool = field(default=False, compare=False)

    @property
    def ctx(self) -> Any:
        return context_for(self.precision_bits)

    @classmethod
    def create(
        cls,
        q: Any,
        g: Any,
        *,
        delta: Any = 1,
        bits: int = 53,
        tolerance: float | None = None,
    ) -> "ModelParams":
        ctx = context_for(bits)
        q = ctx.mpc(q)
        g = ctx.mpc(g)
        _check_q(q)
        U = hubbard_u(q, g, bits)
        return cls._build(q, g, U, delta, bits, tolerance, u_given=False)

    @classmethod
    def from_u(
        cls,
        q: Any,
        U: Any,
        *,
        delta: Any = 1,
        bits: int = 53,
        tolerance: float | None = None,
    ) -> "ModelParams":
        """Parameters with a prescribed U; g is recovered by inverting `hubbard_u`.

        xi^2 = X solves X^2 + X + (q^2 - 1)^2 / alpha = 0 with
        alpha = 4 (q^2 - 1)^2 - q U^2, and g = xi q / (i (q^2 - 1)).
        """
        ctx = context_for(bits)
        q = ctx.mpc(q)
        U = ctx.mpc(U)
        _check_q(q)
        c = (q**2 - 1) ** 2
        alpha = 4 * c - q * U**2
        if abs(alpha) < _EXCLUSION_RADIUS * (abs(4 * c) + abs(q * U**2)):
            raise DegeneracyError(
                code="E_MODEL_U_DEGENERATE",
                message="4 (q^2 - 1)^2 - q U^2 vanishes; U does not determine g",
                path="U",
            )
        disc = ctx.sqrt(1 - 4 * c / alpha)
        best: tuple[float, PrecComplex] | None = None
        for X in ((-1 + disc) / 2, (-1 - disc) / 2):
            xi = ctx.sqrt(X)
            g = xi * q / (ctx.mpc(0, 1) * (q**2 - 1))
            if g == 0:
                continue
            try:
                u_g = hubbard_u(q, g, bits)
            except DegeneracyError:
                continue
            for sign in (1, -1):
                err = float(abs(sign * u_g - U))
                if best is None or err < best[0]:
                    best = (err, sign * g)
        if best is None:
            raise DegeneracyError(
                code="E_MODEL_U_DEGENERATE",
                message="no coupling g reproduces the requested U",
                path="U",
            )
        return cls._build(q, best[1], U, delta, bits, tolerance, u_given=True)

    @classmethod
    def _build(
        cls,
        q: PrecComplex,
        g: PrecComplex,
        U: PrecComplex,
        delta: Any,
        bits: int,
        tolerance: float | None,
        *,
        u_given: bool,
    ) -> "ModelParams":
        ctx = context_for(bits)
        i = ctx.mpc(0, 1)
        xi = i * g * (q - 1 / q)
        rho = ctx.sqrt(g**2 * (q - 1 / q) ** 2 - 1)
        delta = ctx.mpc(delta)
        if delta == 0:
            raise ConfigError(
                code="E_MODEL_TWIST", message="twist delta must be nonzero", path="delta"
            )
        return cls(
            q=q,
            g=g,
            xi=xi,
            U=U,
            delta=delta,
            delta1=-delta / q,
            precision_bits=bits,
            s=i * rho,
            sqrt_q=ctx.sqrt(q),
            q_quarter=principal_root(q, 4, bits),
            tolerance=default_tolerance(bits) if tolerance is None else float(tolerance),
            u_given=u_given,
        )

    def with_precision(self, bits: int, tolerance: float | None = None) -> "ModelParams":
        if self.u_given:
            return ModelParams.from_u(
                self.q, self.U, delta=self.delta, bits=bits, tolerance=tolerance
            )
        return ModelParams.create(self.q, self.g, delta=self.delta, bits=bits, tolerance=tolerance)

    def with_delta(self, delta: Any) -> "ModelParams":
        return ModelParams._build(
            self.q,
            self.g,
            self.U,
            delta,
            self.precision_bits,
            self.tolerance,
            u_given=self.u_given,
        )

    def describe(self) -> dict[str, Any]:
        return {
            "q": _complex_pair(self.q),
            "g": _complex_pair(self.g),
            "U": _complex_pair(self.U),
            "delta": _complex_pair(self.delta),
            "precision": self.precision_bits,
        }


def _complex_pair(v: Any) -> list[float]:
    c = complex(v)
    return [c.real, c.imag]


def _check_q(q: PrecComplex) -> None:
    for bad in _FORBIDDEN_Q:
        if abs(q - bad) <= _EXCLUSION_RADIUS:
            raise ConfigError(
                code="E_MODEL_Q_EXCLUDED",
                message=f"q must avoid 0, +-1 and +-i (got {complex(q)})",
                path="q",
            )

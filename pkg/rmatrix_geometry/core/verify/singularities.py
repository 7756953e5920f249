"""Singular points of plane projective curves and the genus they leave.

The scan runs batch Gauss-Newton on {F, dF/du, dF/dv} in each affine chart, keeps
points where every homogeneous partial vanishes, merges them projectively and reads
the multiplicity and tangent cone off the local Taylor expansion.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Iterator, Literal, Sequence

import numpy as np

from rmatrix_geometry.core.errors import NumericError, SingularCurveError
from rmatrix_geometry.core.model.params import ModelParams
from rmatrix_geometry.core.numkit.newton import newton_batch
from rmatrix_geometry.core.numkit.poly import PolyMV
from rmatrix_geometry.core.numkit.residual import coefficient_scaled_residual
from rmatrix_geometry.core.numkit.sampling import derive_rng, random_normal_complex

log = logging.getLogger(__name__)

Classification = Literal["node", "tacnode-like", "other"]

DEFAULT_STARTS = 2000
NEWTON_TOL = 1e-10
NEWTON_MAX_ITER = 200
# Homogeneous partials must vanish to this scaled level.
EULER_TOL = 1e-8
# Tacnodes converge linearly, so merged copies sit a few 1e-7 apart.
DEDUPE_RADIUS = 1e-5
# A Taylor coefficient below this scaled level counts as vanishing.
ORDER_TOL = 1e-6
CONE_RATIO = 1e-6
# Points hit by fewer starts than this make the count a lower bound.
MIN_HITS = 2
MAX_ORDER = 6


@dataclass(frozen=True)
class SingularPointRecord:
    chart: int
    coords: tuple[complex, ...]
    multiplicity: int
    tangent_cone_discriminant: complex
    classification: Classification
    delta: int
    hits: int = 1


@dataclass(frozen=True)
class ScanResult:
    records: tuple[SingularPointRecord, ...]
    starts: int
    converged: int
    warning: bool

    def __iter__(self) -> Iterator[SingularPointRecord]:
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)

    def count(self, classification: Classification) -> int:
        return sum(1 for r in self.records if r.classification == classification)


def _normalize(points: np.ndarray) -> np.ndarray:
    """Scale each row so its largest-magnitude entry is 1."""
    k = np.abs(points).argmax(axis=1)
    return points / points[np.arange(len(points)), k][:, None]


def _dedupe(points: np.ndarray) -> list[tuple[np.ndarray, int]]:
    reps: list[list] = []
    for p in _normalize(points):
        for rep in reps:
            if np.abs(rep[0] - p).max() < DEDUPE_RADIUS:
                rep[1] += 1
                break
        else:
            reps.append([p, 1])
    return [(p, n) for p, n in reps]


def _local(curve: PolyMV, point: np.ndarray) -> tuple[int, PolyMV, tuple[complex, ...]]:
    """Chart of the largest coordinate, the dehomogenized curve and the local point."""
    chart = int(np.abs(point).argmax())
    p = point / point[chart]
    rest = tuple(complex(p[i]) for i in range(3) if i != chart)
    return chart, curve.substitute(chart, 1), rest


def _derivatives(f: PolyMV, order: int) -> list[PolyMV]:
    out = []
    for combo in itertools.combinations_with_replacement((0, 1), order):
        d = f
        for i in combo:
            d = d.derivative(i)
        out.append(d)
    return out


def multiplicity(f: PolyMV, pt: Sequence[complex]) -> int:
    """Lowest order with a nonvanishing Taylor coefficient at `pt`."""
    for order in range(1, MAX_ORDER + 1):
        if any(
            not d.is_zero() and coefficient_scaled_residual(d, pt) > ORDER_TOL
            for d in _derivatives(f, order)
        ):
            return order
    return MAX_ORDER + 1


def cone_discriminant(f: PolyMV, pt: Sequence[complex]) -> tuple[complex, float]:
    """(Fuv^2 - Fuu Fvv, max second derivative squared) at `pt`."""
    fuu = complex(f.derivative(0).derivative(0).evaluate(pt))
    fuv = complex(f.derivative(0).derivative(1).evaluate(pt))
    fvv = complex(f.derivative(1).derivative(1).evaluate(pt))
    return fuv**2 - fuu * fvv, max(abs(fuu), abs(fuv), abs(fvv)) ** 2


def _classify(m: int, disc: complex, scale: float) -> tuple[Classification, int]:
    if m == 2:
        if abs(disc) > CONE_RATIO * scale:
            return "node", 1
        return "tacnode-like", 2
    return "other", m * (m - 1) // 2


def singularity_scan(
    curve: PolyMV,
    degree: int,
    mp: ModelParams | None = None,
    *,
    starts: int = DEFAULT_STARTS,
    seed: int = 0,
) -> ScanResult:
    """Singular points of the projective curve `curve` = 0.

    `mp` is informational; the scan works in complex128 on the curve's coefficients.
    """
    if curve.nvars != 3 or not curve.is_homogeneous() or curve.total_degree != degree:
        raise SingularCurveError(
            code="E_SCAN_SHAPE",
            message=f"expected a homogeneous curve of degree {degree} in three variables",
        )
    grads = [curve.derivative(i) for i in range(3)]
    found: list[np.ndarray] = []
    converged = 0
    for chart in range(3):
        affine = curve.substitute(chart, 1)
        system = [affine, affine.derivative(0), affine.derivative(1)]
        rng = derive_rng(seed, "singularity_scan", chart)
        res = newton_batch(
            system,
            random_normal_complex(rng, (starts, 2)),
            max_iter=NEWTON_MAX_ITER,
            tol=NEWTON_TOL,
            accept="scaled",
        )
        pts = res.points[res.converged]
        converged += len(pts)
        if len(pts):
            found.append(np.insert(pts, chart, 1.0, axis=1))
    log.debug("singularity scan: %d of %d starts converged", converged, 3 * starts)

    records: list[SingularPointRecord] = []
    clusters = _dedupe(np.concatenate(found)) if found else []
    for point, hits in clusters:
        hpt = tuple(complex(v) for v in point)
        if any(coefficient_scaled_residual(g, hpt) > EULER_TOL for g in grads):
            continue
        chart, f, local = _local(curve, point)
        m = multiplicity(f, local)
        if m < 2:
            continue
        disc, scale = cone_discriminant(f, local)
        cls, delta = _classify(m, disc, scale)
        records.append(
            SingularPointRecord(
                chart=chart,
                coords=hpt,
                multiplicity=m,
                tangent_cone_discriminant=disc,
                classification=cls,
                delta=delta,
                hits=hits,
            )
        )
    records.sort(key=lambda r: (r.chart, r.coords[0].real, r.coords[0].imag, r.coords[1].real))
    warning = any(r.hits < MIN_HITS for r in records)
    if warning:
        log.info("singularity scan: some points were hit by fewer than %d starts", MIN_HITS)
    log.debug(
        "singularity scan: %d points (%s)",
        len(records),
        ", ".join(r.classification for r in records),
    )
    return ScanResult(tuple(records), starts=starts, converged=converged, warning=warning)


def genus_from_scan(degree: int, records: ScanResult | Sequence[SingularPointRecord]) -> int:
    """(d - 1)(d - 2)/2 minus the delta invariants."""
    if isinstance(records, ScanResult) and records.warning:
        raise NumericError(
            code="E_GENUS_INCOMPLETE",
            message="singularity scan is flagged incomplete; its count is only a lower bound",
        )
    return (degree - 1) * (degree - 2) // 2 - sum(r.delta for r in records)

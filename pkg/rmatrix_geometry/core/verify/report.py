from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Mapping, Sequence

import numpy as np

from rmatrix_geometry.core.errors import DegeneracyError, GeometryError
from rmatrix_geometry.core.model.params import ModelParams
from rmatrix_geometry.core.numkit.residual import ResidualReport
from rmatrix_geometry.core.numkit.sampling import derive_rng

log = logging.getLogger(__name__)

# Resamples per trial before the trial counts as degenerate.
MAX_TRIAL_RESAMPLES = 20

Part = ResidualReport | float


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one named check.

    `passed` holds exactly when every residual is below `tolerance` and the report is
    not degenerate.
    """

    name: str
    residuals: tuple[float, ...]
    tolerance: float
    passed: bool
    metadata: dict[str, Any] = field(default_factory=dict)
    degenerate: bool = False

    def __bool__(self) -> bool:
        return self.passed

    @property
    def max_residual(self) -> float:
        return max(self.residuals, default=math.inf)

    @classmethod
    def build(
        cls,
        name: str,
        residuals: Sequence[Any],
        tolerance: float,
        *,
        metadata: Mapping[str, Any] | None = None,
        degenerate: bool = False,
    ) -> "CheckReport":
        vals = tuple(float(r) for r in residuals)
        ok = bool(vals) and not degenerate and max(vals) < tolerance
        return cls(
            name=name,
            residuals=vals,
            tolerance=float(tolerance),
            passed=ok,
            metadata=dict(metadata or {}),
            degenerate=degenerate,
        )

    @classmethod
    def from_parts(
        cls,
        name: str,
        parts: Mapping[str, Part],
        tolerance: float,
        *,
        metadata: Mapping[str, Any] | None = None,
    ) -> "CheckReport":
        """One residual per labelled part; a degenerate ResidualReport taints the report."""
        values: dict[str, float] = {}
        degenerate = False
        for label, part in parts.items():
            if isinstance(part, ResidualReport):
                degenerate |= part.degenerate
                values[label] = float(part.normalized)
            else:
                values[label] = float(part)
        meta = dict(metadata or {})
        meta["parts"] = values
        return cls.build(
            name, list(values.values()), tolerance, metadata=meta, degenerate=degenerate
        )

    @classmethod
    def flag(
        cls, name: str, ok: bool, *, metadata: Mapping[str, Any] | None = None
    ) -> "CheckReport":
        """A yes/no check: residual 0 on success, 1 otherwise, against tolerance 1/2."""
        return cls.build(name, [0.0 if ok else 1.0], 0.5, metadata=metadata)

    def with_metadata(self, **extra: Any) -> "CheckReport":
        return replace(self, metadata={**self.metadata, **extra})


def expect_failure(report: CheckReport, name: str) -> CheckReport:
    """Control check: passes when `report` fails without degenerating."""
    return CheckReport.flag(
        name,
        not report.passed and not report.degenerate,
        metadata={"control_residual": report.max_residual, **report.metadata},
    )


def select_variant(
    name: str,
    variants: Mapping[str, Any],
    tolerance: float,
    *,
    metadata: Mapping[str, Any] | None = None,
) -> CheckReport:
    """Passes when exactly one reading is below `tolerance`; that reading is recorded."""
    values = {label: float(v) for label, v in variants.items()}
    passing = sorted(label for label, v in values.items() if v < tolerance)
    meta = {
        **(metadata or {}),
        "variants": values,
        "selected": passing[0] if len(passing) == 1 else None,
    }
    best = min(values.values(), default=math.inf)
    report = CheckReport.build(name, [best], tolerance, metadata=meta)
    if len(passing) != 1:
        report = replace(report, passed=False)
    return report


def resolve_tolerance(mp: ModelParams, floor: float, override: float | None) -> float:
    """An explicit tolerance wins; otherwise the looser of the precision default and `floor`."""
    if override is not None:
        return float(override)
    return max(mp.tolerance, floor)


def failure(name: str, tol: float, err: GeometryError, **metadata: Any) -> CheckReport:
    return CheckReport.build(
        name,
        [math.inf],
        tol,
        metadata={"error": {"code": err.code, "message": err.message}, **metadata},
    )


# -- trials ---------------------------------------------------------------------------------------

Trial = Callable[[np.random.Generator], CheckReport]


def _run_one(
    name: str, trial: Trial, seed: int, index: int
) -> tuple[CheckReport | None, int, GeometryError | None]:
    """(report, resamples, last degeneracy) for trial `index`."""
    last: GeometryError | None = None
    for attempt in range(MAX_TRIAL_RESAMPLES):
        rng = derive_rng(seed, name, index, attempt)
        try:
            report = trial(rng)
        except DegeneracyError as e:
            last = e
            log.debug("%s: trial %d attempt %d degenerate (%s)", name, index, attempt, e.code)
            continue
        if report.degenerate:
            log.debug("%s: trial %d attempt %d degenerate report", name, index, attempt)
            continue
        return report, attempt, None
    return None, MAX_TRIAL_RESAMPLES, last


def run_trials(
    name: str,
    trial: Trial,
    *,
    seed: int,
    trials: int,
    tol: float,
    workers: int = 1,
    select_variant: bool = False,
    metadata: Mapping[str, Any] | None = None,
) -> CheckReport:
    """Run `trial` `trials` times with per-trial generators and merge the reports.

    Degeneracies are resampled; a trial that never yields a value is dropped and
    counted. Trial metadata "variants" (reading -> residual) is merged by maximum;
    with `select_variant` the check also requires exactly one variant to pass.
    Results do not depend on `workers`.
    """

    def one(index: int) -> tuple[CheckReport | None, int, GeometryError | None]:
        return _run_one(name, trial, seed, index)

    if workers > 1 and trials > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(one, range(trials)))
    else:
        outcomes = [one(i) for i in range(trials)]

    residuals: list[float] = []
    failed_trials: list[int] = []
    variants: dict[str, float] = {}
    resamples = 0
    dropped = 0
    worst: tuple[float, int, CheckReport] | None = None
    codes: set[str] = set()
    for index, (report, extra, err) in enumerate(outcomes):
        resamples += extra
        if report is None:
            dropped += 1
            if err is not None:
                codes.add(err.code)
            continue
        r = report.max_residual
        residuals.append(r)
        if not report.passed:
            failed_trials.append(index)
        for label, v in report.metadata.get("variants", {}).items():
            variants[label] = max(variants.get(label, 0.0), float(v))
        if worst is None or r > worst[0]:
            worst = (r, index, report)

    meta: dict[str, Any] = dict(metadata or {})
    meta.update(
        {
            "trials": trials,
            "successful_trials": len(residuals),
            "resamples": resamples,
            "dropped_trials": dropped,
        }
    )
    if codes:
        meta["degeneracy_codes"] = sorted(codes)
    if dropped:
        log.info("%s: %d of %d trials dropped after repeated degeneracy", name, dropped, trials)
    if worst is not None:
        meta["worst_trial"] = {"index": worst[1], **worst[2].metadata}
    if failed_trials:
        meta["failed_trials"] = failed_trials

    if not residuals:
        return CheckReport.build(name, [math.inf], tol, metadata=meta, degenerate=True)

    report = CheckReport.build(name, residuals, tol, metadata=meta)
    if failed_trials and report.passed:
        # Trials may fail for reasons other than their residuals.
        report = replace(report, passed=False)
    if variants:
        passing = sorted(label for label, v in variants.items() if v < tol)
        meta["variants"] = variants
        meta["selected"] = passing[0] if len(passing) == 1 else None
        if select_variant and len(passing) != 1:
            report = replace(report, passed=False)
        report = replace(report, metadata=meta)
    return report

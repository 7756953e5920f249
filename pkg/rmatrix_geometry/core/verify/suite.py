from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from rmatrix_geometry.core.errors import GeometryError
from rmatrix_geometry.core.model.curves import sample_cbar, sample_e1, sample_s
from rmatrix_geometry.core.model.params import ModelParams
from rmatrix_geometry.core.model.polys import c_slice_poly, cbar_poly
from rmatrix_geometry.core.rmatrix.entries import rational_entries, symmetric_entries
from rmatrix_geometry.core.verify.appendix_b import appendix_b_pipeline
from rmatrix_geometry.core.verify.consistency import (
    MAP_TOLERANCE,
    chan_consistency_check,
    form_equivalence_check,
    mapc_check,
    phi_round_trip_check,
    uniformization_check,
)
from rmatrix_geometry.core.verify.degenerations import (
    CONTAINMENT_TOLERANCE,
    J_TOLERANCE,
    a_square_check,
    cbar_component_check,
    component_j_check,
    psi_cover_check,
    sextic_factorization_check,
)
from rmatrix_geometry.core.verify.identities import (
    IDENTITY_TOLERANCE,
    TWIST_TOLERANCE,
    identity_suite_generic,
    identity_suite_symmetric,
    symmetric_transpose_check,
    twist_covariance_check,
)
from rmatrix_geometry.core.verify.invariants import (
    product_surface_invariants,
    surface_invariants_from_genus,
)
from rmatrix_geometry.core.verify.isogeny import isogeny_suite
from rmatrix_geometry.core.verify.report import (
    CheckReport,
    Trial,
    expect_failure,
    failure,
    resolve_tolerance,
    run_trials,
)
from rmatrix_geometry.core.verify.singularities import (
    DEFAULT_STARTS,
    ScanResult,
    genus_from_scan,
    singularity_scan,
)
from rmatrix_geometry.core.verify.ybe import (
    TRANSFER_TOLERANCE,
    YBE_TOLERANCE,
    transfer_commutativity,
    ybe_check,
)

log = logging.getLogger(__name__)


# Check groups selectable from the CLI; `all` runs every group.
# - ybe: rational YBE at the configured and the complex coupling, BK YBE with branch search
# - identities: Q1..Q5 on S, Q-bar 1..5 on C-bar, twist covariance, symmetric transpose
# - isogeny: Phi2 at the coupling and random couplings, Landen and E3 cross-checks
# - degenerations: SUBM sextic factorization and its off-locus control, A at U = 0,
#   cubic components of C-bar and their j, psi from Z onto A
# - genus: singularity scans of C-bar and the octic slice C, and their genera
# - invariants: double-cover invariants from the genus of C and the product contrast
# - appendix-b: reduction of Q~5 to S~
# - transfer: commuting transfer matrices on 2 and 3 sites
# - maps: CHAN, phi, the ramified map of C-bar, the E2 uniformization and BK/rational
#   form equivalence

SECOND_COUPLING = (complex(1.5, 0.2), complex(1 / 3, 1 / 7))
SUBM_Q = 4
COMPONENT_J_Q = 2
CONTROL_U_SCALE = 1.01
CONTROL_TRIALS = 5
TRANSFER_SITES = (2, 3)
CBAR_DEGREE = 6
CBAR_SINGULARITIES = {"node": 1, "tacnode-like": 2}
CBAR_GENUS = 5
SLICE_DEGREE = 8
SLICE_SINGULARITIES = {"node": 12}
SLICE_GENUS = 9
# Expected double-cover data at the genus of the slice: (chi, K^2, pg, q, P3).
SLICE_SURFACE = (8, 32, 9, 2, 104)
PRODUCT_GENERA = (CBAR_GENUS, CBAR_GENUS)

# Trials per sampled check when the run does not fix a count.
DEFAULT_TRIALS = 20
MIN_TRIALS = {
    "ybe.rational": 100,
    "identities.generic": 100,
    "identities.symmetric": 100,
    "appendix-b": 50,
    "degenerations.cbar_component": 50,
    "maps.form_equivalence": 50,
}


@dataclass(frozen=True)
class RunContext:
    mp: ModelParams
    seed: int = 0
    trials: int | None = None
    tol: float | None = None
    workers: int = 1
    epsilon: int | None = None
    starts: int = DEFAULT_STARTS

    @property
    def epsilons(self) -> tuple[int, ...]:
        return (1, -1) if self.epsilon is None else (self.epsilon,)

    def count(self, name: str) -> int:
        """The fixed trial count, or the minimum for `name` (bracketed labels ignored)."""
        if self.trials is not None:
            return self.trials
        return MIN_TRIALS.get(name.split("[", 1)[0], DEFAULT_TRIALS)

    def guarded(self, name: str, build: Callable[[], CheckReport]) -> CheckReport:
        """`build()`, or a failed report named `name` when it raises."""
        try:
            return build()
        except GeometryError as e:
            log.info("%s stopped: %s", name, e)
            return failure(name, self.tol if self.tol is not None else 0.5, e)

    def trials_of(self, name: str, trial: Trial, floor: float, **kwargs: Any) -> CheckReport:
        return self.guarded(
            name,
            lambda: run_trials(
                name,
                trial,
                seed=self.seed,
                trials=self.count(name),
                tol=resolve_tolerance(self.mp, floor, self.tol),
                workers=self.workers,
                **kwargs,
            ),
        )


def second_coupling(mp: ModelParams) -> ModelParams:
    q, g = SECOND_COUPLING
    return ModelParams.create(q, g, bits=mp.precision_bits)


# -- groups ---------------------------------------------------------------------------------------


def _rational_ybe(rc: RunContext, mp: ModelParams, label: str) -> CheckReport:
    tol = resolve_tolerance(mp, YBE_TOLERANCE, rc.tol)

    def trial(rng: np.random.Generator) -> CheckReport:
        p1, p2, p3 = (sample_s(mp, rng) for _ in range(3))
        return ybe_check("rational", p1, p2, p3, mp, tol=tol)

    return rc.trials_of(
        f"ybe.rational[{label}]", trial, YBE_TOLERANCE, metadata={"coupling": mp.describe()}
    )


def ybe_group(rc: RunContext) -> list[CheckReport]:
    mp = rc.mp
    tol = resolve_tolerance(mp, YBE_TOLERANCE, rc.tol)

    def bk_trial(rng: np.random.Generator) -> CheckReport:
        p1, p2, p3 = (sample_e1(mp, rng) for _ in range(3))
        return ybe_check("bk", p1, p2, p3, mp, tol=tol)

    return [
        _rational_ybe(rc, mp, "configured"),
        _rational_ybe(rc, second_coupling(mp), "complex"),
        rc.trials_of("ybe.bk", bk_trial, YBE_TOLERANCE),
    ]


def identities_group(rc: RunContext) -> list[CheckReport]:
    mp = rc.mp
    tol = resolve_tolerance(mp, IDENTITY_TOLERANCE, rc.tol)
    twist_tol = resolve_tolerance(mp, TWIST_TOLERANCE, rc.tol)

    def generic(rng: np.random.Generator) -> CheckReport:
        es = rational_entries(sample_s(mp, rng), sample_s(mp, rng), mp)
        return identity_suite_generic(es, mp, tol=tol)

    def symmetric(rng: np.random.Generator) -> CheckReport:
        es = symmetric_entries(sample_cbar(mp, rng), sample_cbar(mp, rng), mp)
        return identity_suite_symmetric(es, mp, tol=tol)

    def twist(rng: np.random.Generator) -> CheckReport:
        return twist_covariance_check(sample_s(mp, rng), sample_s(mp, rng), mp, tol=twist_tol)

    def transpose(rng: np.random.Generator) -> CheckReport:
        return symmetric_transpose_check(sample_cbar(mp, rng), sample_cbar(mp, rng), mp, tol=tol)

    return [
        rc.trials_of("identities.generic", generic, IDENTITY_TOLERANCE),
        rc.trials_of("identities.symmetric", symmetric, IDENTITY_TOLERANCE),
        rc.trials_of("identities.twist_covariance", twist, TWIST_TOLERANCE),
        rc.trials_of("identities.symmetric_transpose", transpose, IDENTITY_TOLERANCE),
    ]


def isogeny_group(rc: RunContext) -> list[CheckReport]:
    return isogeny_suite(
        rc.mp, rc.count("isogeny"), seed=rc.seed, tol=rc.tol, workers=rc.workers
    )


def degenerations_group(rc: RunContext) -> list[CheckReport]:
    reports: list[CheckReport] = []
    j_tol = J_TOLERANCE if rc.tol is None else rc.tol
    for eps in rc.epsilons:
        tag = f"eps={eps:+d}"
        component = f"degenerations.cbar_component[{tag}]"
        reports.append(
            rc.guarded(
                f"degenerations.sextic[{tag}]",
                lambda eps=eps: sextic_factorization_check(SUBM_Q, eps),
            )
        )
        reports.append(
            rc.guarded(
                f"degenerations.sextic_control[{tag}]",
                lambda eps=eps, tag=tag: expect_failure(
                    sextic_factorization_check(SUBM_Q, eps, u_scale=CONTROL_U_SCALE),
                    f"degenerations.sextic_control[{tag}]",
                ),
            )
        )
        reports.append(
            rc.guarded(
                component,
                lambda eps=eps, component=component: cbar_component_check(
                    SUBM_Q,
                    eps,
                    rc.count(component),
                    seed=rc.seed,
                    tol=rc.tol,
                    workers=rc.workers,
                ),
            )
        )
        reports.append(
            rc.guarded(
                f"degenerations.component_control[{tag}]",
                lambda eps=eps, tag=tag: expect_failure(
                    cbar_component_check(
                        SUBM_Q,
                        eps,
                        CONTROL_TRIALS,
                        seed=rc.seed,
                        u_scale=CONTROL_U_SCALE,
                        tol=rc.tol,
                    ),
                    f"degenerations.component_control[{tag}]",
                ),
            )
        )
        reports.append(
            rc.guarded(
                f"degenerations.component_j[{tag}]",
                lambda eps=eps, tag=tag: run_trials(
                    f"degenerations.component_j[{tag}]",
                    lambda rng: component_j_check(COMPONENT_J_Q, eps, rng, tol=j_tol),
                    seed=rc.seed,
                    trials=1,
                    tol=j_tol,
                ),
            )
        )
    reports.append(rc.guarded("degenerations.a_square", lambda: a_square_check(rc.mp.q)))
    reports.append(
        rc.trials_of(
            "degenerations.psi_cover",
            lambda rng: psi_cover_check(rc.mp, rng, tol=rc.tol),
            CONTAINMENT_TOLERANCE,
        )
    )
    return reports


def _scan_report(
    name: str, scan: ScanResult, expected: dict[str, int], metadata: dict
) -> CheckReport:
    counts = {cls: scan.count(cls) for cls in ("node", "tacnode-like", "other")}
    wanted = {cls: expected.get(cls, 0) for cls in counts}
    return CheckReport.flag(
        name,
        counts == wanted and not scan.warning,
        metadata={
            **metadata,
            "counts": counts,
            "expected": wanted,
            "warning": scan.warning,
            "converged_starts": scan.converged,
            "points": [
                {
                    "chart": r.chart,
                    "coords": [[c.real, c.imag] for c in r.coords],
                    "classification": r.classification,
                    "multiplicity": r.multiplicity,
                    "hits": r.hits,
                }
                for r in scan
            ],
        },
    )


def _genus_report(name: str, degree: int, scan: ScanResult, expected: int) -> CheckReport:
    try:
        genus = genus_from_scan(degree, scan)
    except GeometryError as e:
        return failure(name, 0.5, e)
    meta = {"genus": genus, "expected": expected}
    return CheckReport.flag(name, genus == expected, metadata=meta)


def genus_group(rc: RunContext) -> list[CheckReport]:
    mp = rc.mp
    curves = (
        ("cbar", cbar_poly(mp.q, mp.U), CBAR_DEGREE, CBAR_SINGULARITIES, CBAR_GENUS),
        ("c", c_slice_poly(mp.q, mp.U), SLICE_DEGREE, SLICE_SINGULARITIES, SLICE_GENUS),
    )
    reports: list[CheckReport] = []
    for label, curve, degree, singular, genus in curves:
        try:
            scan = singularity_scan(curve, degree, mp, starts=rc.starts, seed=rc.seed)
            doubled = singularity_scan(curve, degree, mp, starts=2 * rc.starts, seed=rc.seed)
        except GeometryError as e:
            log.info("genus scan of %s stopped: %s", label, e)
            reports.extend(
                failure(f"genus.{kind}[{label}]", 0.5, e)
                for kind in ("scan", "scan_doubled", "genus")
            )
            continue
        meta = {"degree": degree, "starts": rc.starts}
        reports.append(_scan_report(f"genus.scan[{label}]", scan, singular, meta))
        reports.append(
            _scan_report(
                f"genus.scan_doubled[{label}]",
                doubled,
                singular,
                {"degree": degree, "starts": 2 * rc.starts},
            )
        )
        reports.append(_genus_report(f"genus.genus[{label}]", degree, scan, genus))
    return reports


def invariants_group(rc: RunContext) -> list[CheckReport]:
    inv = surface_invariants_from_genus(SLICE_GENUS)
    found = (inv.chi, inv.Ksq, inv.pg, inv.q_irr, inv.plurigenera[1])
    product = product_surface_invariants(*PRODUCT_GENERA)
    return [
        CheckReport.flag(
            "invariants.surface",
            found == SLICE_SURFACE,
            metadata={
                "gC": SLICE_GENUS,
                "L2": inv.L2,
                "chi": inv.chi,
                "Ksq": inv.Ksq,
                "pg": inv.pg,
                "q": inv.q_irr,
                "plurigenera": list(inv.plurigenera),
                "h0_L": inv.h0_L,
            },
        ),
        CheckReport.flag("invariants.severi", inv.severi and inv.Ksq == 4 * inv.chi),
        CheckReport.flag(
            "invariants.product",
            product == (10, 25),
            metadata={"genera": list(PRODUCT_GENERA), "q": product[0], "pg": product[1]},
        ),
    ]


def appendix_b_group(rc: RunContext) -> list[CheckReport]:
    return appendix_b_pipeline(
        rc.mp, rc.count("appendix-b"), seed=rc.seed, tol=rc.tol, workers=rc.workers
    )


def transfer_group(rc: RunContext) -> list[CheckReport]:
    mp = rc.mp
    tol = resolve_tolerance(mp, TRANSFER_TOLERANCE, rc.tol)
    reports = []
    for n in TRANSFER_SITES:

        def trial(rng: np.random.Generator, n: int = n) -> CheckReport:
            p1, p2, p0 = (sample_s(mp, rng) for _ in range(3))
            return transfer_commutativity(mp, n, p1, p2, p0, tol=tol)

        reports.append(rc.trials_of(f"transfer.n{n}", trial, TRANSFER_TOLERANCE))
    return reports


def maps_group(rc: RunContext) -> list[CheckReport]:
    mp = rc.mp
    reports = [
        rc.trials_of(
            "maps.chan", lambda rng: chan_consistency_check(mp, rng, tol=rc.tol), MAP_TOLERANCE
        ),
        rc.trials_of(
            "maps.phi", lambda rng: phi_round_trip_check(mp, rng, tol=rc.tol), MAP_TOLERANCE
        ),
        rc.trials_of(
            "maps.mapc", lambda rng: mapc_check(mp, rng, tol=rc.tol), MAP_TOLERANCE
        ),
    ]
    for branch in (0, 1):
        reports.append(
            rc.trials_of(
                f"maps.uniformization[branch={branch}]",
                lambda rng, b=branch: uniformization_check(mp, rng, b, tol=rc.tol),
                MAP_TOLERANCE,
            )
        )
    name = "maps.form_equivalence"
    reports.append(
        rc.guarded(
            name,
            lambda: form_equivalence_check(
                mp, rc.count(name), seed=rc.seed, tol=rc.tol, workers=rc.workers
            ),
        )
    )
    return reports


Group = Callable[[RunContext], list[CheckReport]]

CHECK_GROUPS: dict[str, Group] = {
    "ybe": ybe_group,
    "identities": identities_group,
    "isogeny": isogeny_group,
    "degenerations": degenerations_group,
    "genus": genus_group,
    "invariants": invariants_group,
    "appendix-b": appendix_b_group,
    "transfer": transfer_group,
    "maps": maps_group,
}


def expand_checks(checks: Iterable[str]) -> list[str]:
    """Group names in canonical order; `all` expands to every group."""
    wanted = set(checks)
    if "all" in wanted:
        return list(CHECK_GROUPS)
    unknown = wanted - set(CHECK_GROUPS)
    if unknown:
        raise ValueError(f"unknown checks: {', '.join(sorted(unknown))}")
    return [name for name in CHECK_GROUPS if name in wanted]


def run_all(
    mp: ModelParams,
    seed: int = 0,
    trials: int | None = None,
    checks: Sequence[str] = ("all",),
    *,
    workers: int = 1,
    tol: float | None = None,
    epsilon: int | None = None,
) -> list[CheckReport]:
    """Run the selected groups and return their reports sorted by name.

    `trials` fixes the count of every sampled check; unset, each check runs its minimum.
    A check that raises is recorded as a failed report under its own name. A group that
    raises outside its checks becomes one failed report; the other groups still run.
    """
    rc = RunContext(mp=mp, seed=seed, trials=trials, tol=tol, workers=workers, epsilon=epsilon)
    coupling = mp.describe()
    reports: list[CheckReport] = []
    for group in expand_checks(checks):
        log.info("running %s", group)
        try:
            found = CHECK_GROUPS[group](rc)
        except GeometryError as e:
            log.info("%s stopped: %s", group, e)
            found = [failure(f"{group}.error", 0.5, e)]
        reports.extend(found)
    out = [
        r.with_metadata(**{"seed": seed, "coupling": coupling, **r.metadata}) for r in reports
    ]
    return sorted(out, key=lambda r: r.name)

"""Consistency of the maps between the curves and surfaces of the model."""

from __future__ import annotations

import logging
from dataclasses import replace

import numpy as np

from rmatrix_geometry.core.elliptic.context import context, uniformize_e2
from rmatrix_geometry.core.errors import MapInconsistencyError
from rmatrix_geometry.core.model.curves import (
    e1_residual,
    e2_residual,
    sample_cbar,
    sample_s,
    surface_s_residual,
)
from rmatrix_geometry.core.model.maps import (
    chan_map,
    chan_second_preimage,
    mapc_spectral,
    phi_inverse,
    phi_map,
    projective_distance,
    spectral_from_surface,
    stilde_point,
    stilde_residual,
    surface_points_from_e1,
)
from rmatrix_geometry.core.model.params import ModelParams
from rmatrix_geometry.core.model.polys import e1_poly
from rmatrix_geometry.core.numkit.residual import normalized_residual, relative_difference
from rmatrix_geometry.core.numkit.sampling import random_complex
from rmatrix_geometry.core.rmatrix.assemble import CORNER_READINGS
from rmatrix_geometry.core.rmatrix.equivalence import FORM_TOLERANCE, form_equivalence
from rmatrix_geometry.core.verify.report import (
    CheckReport,
    failure,
    resolve_tolerance,
    run_trials,
)

log = logging.getLogger(__name__)

MAP_TOLERANCE = 1e-9


def chan_consistency_check(
    mp: ModelParams, rng: np.random.Generator, *, tol: float | None = None
) -> CheckReport:
    """CHAN of a point of S lies on E1, the second preimage has the same image and
    the inverse map returns the point."""
    tol = resolve_tolerance(mp, MAP_TOLERANCE, tol)
    name = "maps.chan"
    p = sample_s(mp, rng)
    try:
        sp = chan_map(p, mp)
    except MapInconsistencyError as e:
        return failure(name, tol, e)
    other = spectral_from_surface(chan_second_preimage(p), mp)
    back = surface_points_from_e1(sp, mp)
    return CheckReport.from_parts(
        name,
        {
            "S": surface_s_residual(p, mp),
            "E1": e1_residual(sp, mp),
            "second x+": relative_difference(other.xplus, sp.xplus, tol=tol),
            "second x-": relative_difference(other.xminus, sp.xminus, tol=tol),
            "second gamma": relative_difference(other.gamma, -sp.gamma, tol=tol),
            "inverse": projective_distance(p.coords, back.coords),
        },
        tol,
    )


def phi_round_trip_check(
    mp: ModelParams, rng: np.random.Generator, *, tol: float | None = None
) -> CheckReport:
    """phi lands on S~ and inverts phi_inverse, starting from either side."""
    tol = resolve_tolerance(mp, MAP_TOLERANCE, tol)
    bits = mp.precision_bits
    p = sample_s(mp, rng)
    image = phi_map(p, mp)
    forward = phi_inverse(image, mp)

    start = stilde_point(mp, *(random_complex(rng, bits) for _ in range(3)))
    pulled = phi_inverse(start, mp)
    backward = phi_map(pulled, mp)
    return CheckReport.from_parts(
        "maps.phi",
        {
            "S~(phi)": stilde_residual(image, mp),
            "S -> S~ -> S": projective_distance(p.coords, forward.coords),
            "S(phi^-1)": surface_s_residual(pulled, mp),
            "S~ -> S -> S~": projective_distance(start, backward),
        },
        tol,
    )


def mapc_check(
    mp: ModelParams, rng: np.random.Generator, *, tol: float | None = None
) -> CheckReport:
    """The ramified map sends C-bar to E1 and is even under (x, y) -> (-x, -y)."""
    tol = resolve_tolerance(mp, MAP_TOLERANCE, tol)
    name = "maps.mapc"
    p = sample_cbar(mp, rng)
    e1 = e1_poly(mp.q, mp.g, mp.precision_bits)
    try:
        xplus, xminus = mapc_spectral(p, mp)
        mirror = mapc_spectral(replace(p, x=-p.x, y=-p.y), mp)
    except MapInconsistencyError as e:
        return failure(name, tol, e)
    return CheckReport.from_parts(
        name,
        {
            "E1": normalized_residual(e1, (xplus, xminus), tol),
            "even x+": relative_difference(mirror[0], xplus, tol=tol),
            "even x-": relative_difference(mirror[1], xminus, tol=tol),
        },
        tol,
    )


def uniformization_check(
    mp: ModelParams, rng: np.random.Generator, branch: int = 0, *, tol: float | None = None
) -> CheckReport:
    """The Jacobi parametrization of E2 at a random argument lies on E2."""
    tol = resolve_tolerance(mp, MAP_TOLERANCE, tol)
    ectx = context(mp, branch)
    mu = random_complex(rng, mp.precision_bits)
    report = e2_residual(uniformize_e2(mu, ectx, mp), mp)
    return CheckReport.from_parts(
        f"maps.uniformization[branch={branch}]",
        {"E2": report},
        tol,
        metadata={"branch": branch},
    )


def form_equivalence_trial(
    mp: ModelParams, rng: np.random.Generator, tol: float
) -> CheckReport:
    s1, s2 = sample_s(mp, rng), sample_s(mp, rng)
    try:
        report = form_equivalence(s1, s2, mp, tol)
    except MapInconsistencyError as e:
        return failure("maps.form_equivalence", tol, e)
    full = report.metadata.get("full_matrix", {})
    return CheckReport.build(
        "maps.form_equivalence",
        [report.normalized],
        tol,
        metadata={
            "variants": {reading: full[reading] for reading in CORNER_READINGS if reading in full},
            "branch_flips": report.metadata.get("branch_flips"),
        },
        degenerate=report.degenerate,
    )


def form_equivalence_check(
    mp: ModelParams,
    trials: int,
    *,
    seed: int = 0,
    tol: float | None = None,
    workers: int = 1,
) -> CheckReport:
    """BK amplitudes against rational entries over `trials` pairs of S.

    Exactly one reading of the row 13, column 4 slot must match the whole matrix.
    """
    tol = resolve_tolerance(mp, FORM_TOLERANCE, tol)
    return run_trials(
        "maps.form_equivalence",
        lambda rng: form_equivalence_trial(mp, rng, tol),
        seed=seed,
        trials=trials,
        tol=tol,
        workers=workers,
        select_variant=True,
    )

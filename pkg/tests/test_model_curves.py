from rmatrix_geometry.core.errors import MapInconsistencyError
from rmatrix_geometry.core.model import curves
from rmatrix_geometry.core.model.maps import (
    chan_map,
    chan_second_preimage,
    phi_inverse,
    phi_map,
    projective_distance,
    psi_map,
    spectral_from_surface,
    stilde_point,
    stilde_residual,
    surface_points_from_e1,
)
from rmatrix_geometry.core.model.params import ModelParams
from rmatrix_geometry.core.model.points import PointZ
from rmatrix_geometry.core.numkit.sampling import derive_rng

COUPLINGS = ((2, 0.6), (1.5 + 0.2j, 1 / 3 + 1j / 7))

SAMPLERS = (
    (curves.sample_e1, curves.e1_residual),
    (curves.sample_s, curves.surface_s_residual),
    (curves.sample_e2, curves.e2_residual),
    (curves.sample_cbar, curves.cbar_residual),
    (curves.sample_a, curves.surface_a_residual),
    (curves.sample_z, curves.surface_z_residual),
)


def test_samplers_land_on_their_varieties():
    for q, g in COUPLINGS:
        mp = ModelParams.create(q, g)
        for draw, residual in SAMPLERS:
            rng = derive_rng(0, draw.__name__)
            for _ in range(3):
                report = residual(draw(mp, rng), mp)
                assert report.passed, (draw.__name__, float(report.normalized))


def test_sample_e1_respects_given_coordinate():
    mp = ModelParams.create(2, 0.6)
    sp = curves.sample_e1(mp, derive_rng(1), xplus=0.7 + 0.1j, gamma=2)
    assert sp.xplus == mp.ctx.mpc(0.7, 0.1)
    assert sp.gamma == 2
    assert curves.e1_residual(sp, mp).passed


def test_e1_residual_at_zero_is_degenerate():
    mp = ModelParams.create(2, 0.6)
    sp = curves.spectral_point(mp, 0, 1)
    report = curves.e1_residual(sp, mp)
    assert report.degenerate
    assert not report.passed


def test_sampling_at_high_precision():
    mp = ModelParams.create(2, 0.6, bits=128)
    report = curves.surface_s_residual(curves.sample_s(mp, derive_rng(2)), mp)
    assert report.passed
    assert report.tolerance == 1e-18


def test_chan_round_trip():
    for q, g in COUPLINGS:
        mp = ModelParams.create(q, g)
        p = curves.sample_s(mp, derive_rng(3, "chan"))
        sp = chan_map(p, mp)
        assert curves.e1_residual(sp, mp).passed
        assert projective_distance(p.coords, surface_points_from_e1(sp, mp).coords) < 1e-9

        other = spectral_from_surface(chan_second_preimage(p), mp)
        assert abs(other.xplus - sp.xplus) < 1e-9 * (1 + abs(sp.xplus))
        assert abs(other.gamma + sp.gamma) < 1e-9 * abs(sp.gamma)


def test_chan_rejects_points_off_s():
    mp = ModelParams.create(2, 0.6)
    p = curves.sample_s(mp, derive_rng(4))
    try:
        chan_map(p.__class__(p.x, p.y, 1.1 * p.z, p.w), mp)
        assert False, "expected MapInconsistencyError"
    except MapInconsistencyError as e:
        assert e.code == "E_MAP_CHAN_OFF_E1"


def test_phi_is_birational():
    mp = ModelParams.create(2, 0.6)
    rng = derive_rng(5, "phi")
    p = curves.sample_s(mp, rng)
    image = phi_map(p, mp)
    assert stilde_residual(image, mp).passed
    assert projective_distance(p.coords, phi_inverse(image, mp).coords) < 1e-9

    start = stilde_point(mp, 0.8 + 0.3j, -0.4 + 1.1j, 0.6 - 0.2j, branch=1)
    assert stilde_residual(start, mp).passed
    assert projective_distance(start, phi_map(phi_inverse(start, mp), mp)) < 1e-9


def test_psi_maps_z_to_a():
    mp = ModelParams.create(2, 0.6)
    z = curves.sample_z(mp, derive_rng(6))
    assert curves.surface_a_residual(psi_map(z, mp), mp).passed

    off = PointZ(z.a, z.b, z.bb, 1.3 * z.c)
    try:
        psi_map(off, mp)
        assert False, "expected MapInconsistencyError"
    except MapInconsistencyError as e:
        assert e.code == "E_MAP_PSI_OFF_A"


def test_projective_distance_ignores_scale():
    mp = ModelParams.create(2, 0.6)
    p = curves.sample_s(mp, derive_rng(7))
    assert projective_distance(p.coords, p.scaled(2 - 3j).coords) < 1e-12

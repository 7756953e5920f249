import mpmath

from rmatrix_geometry.core.elliptic.context import context, uniformize_e2
from rmatrix_geometry.core.elliptic.cubic import nagell_cubic_j
from rmatrix_geometry.core.elliptic.invariants import (
    j_e1,
    j_e2,
    j_e3,
    j_from_quartic,
    j_invariants,
    j_from_weierstrass,
    jacobi_quartic_j,
    legendre_j,
    phi2,
    phi2_residual,
)
from rmatrix_geometry.core.elliptic.isogeny import e3_reading_check, isogeny_check, landen_check
from rmatrix_geometry.core.elliptic.jacobi import guard_bits, jacobi_sn_cn_dn
from rmatrix_geometry.core.errors import NumericError, PoleError, SingularCurveError
from rmatrix_geometry.core.model.curves import e2_residual
from rmatrix_geometry.core.model.maps import subm_u
from rmatrix_geometry.core.model.params import ModelParams
from rmatrix_geometry.core.numkit.poly import PolyMV
from rmatrix_geometry.core.numkit.precision import precision_of


def test_phi2_constant_term():
    assert phi2(0, 0) == -157464000000000


def test_phi2_vanishes_on_known_isogeny():
    # j(i) = 1728 and j(2i) = 66^3 are 2-isogenous.
    assert phi2_residual(1728, 287496).passed
    assert not phi2_residual(1728, 287497).passed


def test_classical_j_values():
    assert abs(complex(legendre_j(2)) - 1728) < 1e-9
    assert abs(complex(legendre_j(mpmath.expjpi(mpmath.mpf(1) / 3)))) < 1e-9
    assert abs(complex(j_from_weierstrass(1, 0)) - 1728) < 1e-9
    assert abs(complex(j_from_weierstrass(0, 1))) < 1e-12
    try:
        j_from_weierstrass(-3, 2)
        assert False, "expected SingularCurveError"
    except SingularCurveError as e:
        assert e.code == "E_WEIERSTRASS_SINGULAR"


def test_jacobi_quartic_matches_generic_quartic():
    k = 0.3 + 0.1j
    k2 = k * k
    generic = j_from_quartic(k2, 0, -(1 + k2), 0, 1)
    assert abs(complex(jacobi_quartic_j(k)) / complex(generic) - 1) < 1e-10


def test_nagell_cubic():
    x, y, z = PolyMV.variables(3)
    assert abs(complex(nagell_cubic_j(x**3 + y**3 + z**3, (1, -1, 0)))) < 1e-8

    weierstrass = y**2 * z - x**3 + x * z**2 - z**3
    got = complex(nagell_cubic_j(weierstrass, (0, 1, 0)))
    want = complex(j_from_weierstrass(-1, 1))
    assert abs(got / want - 1) < 1e-8


def test_nagell_rejects_bad_input():
    x, y, z = PolyMV.variables(3)
    nodal = y**2 * z - x**3 - x**2 * z
    try:
        nagell_cubic_j(nodal, (0, 1, 0))
        assert False, "expected SingularCurveError"
    except SingularCurveError as e:
        assert e.code == "E_CUBIC_REDUCIBLE"
    try:
        nagell_cubic_j(x**3 + y**3 + z**3, (1, 1, 1))
        assert False, "expected SingularCurveError"
    except SingularCurveError as e:
        assert e.code == "E_CUBIC_POINT_OFF"


def test_jacobi_functions_match_mpmath():
    u = mpmath.mpc(0.3, 0.2)
    for k in (0.4 + 0.1j, 0.9j):
        sn, cn, dn = jacobi_sn_cn_dn(u, k)
        m = mpmath.mpc(k) ** 2
        assert abs(sn - mpmath.ellipfun("sn", u, m=m)) < 1e-10
        assert abs(cn - mpmath.ellipfun("cn", u, m=m)) < 1e-10
        assert abs(dn - mpmath.ellipfun("dn", u, m=m)) < 1e-10


def test_jacobi_identities_for_large_modulus():
    u = mpmath.mpc(0.3, 0.2)
    for k in (1.5, 2 - 0.5j):
        sn, cn, dn = jacobi_sn_cn_dn(u, k)
        assert abs(sn**2 + cn**2 - 1) < 1e-12
        assert abs(mpmath.mpc(k) ** 2 * sn**2 + dn**2 - 1) < 1e-12


def test_jacobi_rounds_back_from_guard_precision():
    assert guard_bits(53) == 128
    assert guard_bits(256) == 512
    assert guard_bits(512) == 512
    sn, cn, dn = jacobi_sn_cn_dn(mpmath.mpc(0.3, 0.2), 3 + 1j, 53)
    assert precision_of(sn) == precision_of(cn) == precision_of(dn) == 53
    assert abs(sn**2 + cn**2 - 1) < 1e-12


def test_modulus_context():
    mp = ModelParams.create(2, 0.6)
    for branch in (0, 1):
        ectx = context(mp, branch)
        assert abs(ectx.k + 1 / ectx.k - ectx.Delta) < 1e-12 * abs(ectx.Delta)
        assert abs(ectx.lambda1 * ectx.lambda2 - mp.q**2) < 1e-12
        point = uniformize_e2(mpmath.mpc(0.4, -0.3), ectx, mp)
        assert e2_residual(point, mp).passed
    assert abs(context(mp, 0).k) <= 1


def test_isogeny_needs_extended_precision():
    try:
        isogeny_check(ModelParams.create(2, 0.6))
        assert False, "expected NumericError"
    except NumericError as e:
        assert e.code == "E_ISOGENY_PRECISION"


def test_isogeny_holds_for_both_couplings():
    for q, g in ((2, 0.6), (1.5 + 0.2j, 1 / 3 + 1j / 7)):
        report = isogeny_check(ModelParams.create(q, g, bits=128))
        assert report.passed
        assert report.tolerance == 1e-25


def test_landen_relations():
    mp = ModelParams.create(2, 0.6)
    for branch in (0, 1):
        reports = landen_check(mp, branch)
        assert all(r.passed for r in reports.values()), reports


def test_e3_reading_is_weierstrass():
    reports = e3_reading_check(ModelParams.create(2, 0.6))
    assert reports["weierstrass"].passed
    assert not reports["sign-flipped"].passed


def test_j_pole_on_subm_locus():
    mp = ModelParams.from_u(4, subm_u(4, 1))
    try:
        j_e1(mp)
        assert False, "expected PoleError"
    except PoleError as e:
        assert e.code == "E_J_POLE"


def test_j_invariants_bundle():
    mp = ModelParams.create(2, 0.6)
    js = j_invariants(mp)
    assert js.je1 == j_e1(mp)
    assert js.je2 == j_e2(mp)
    assert js.je3 == j_e3(mp)

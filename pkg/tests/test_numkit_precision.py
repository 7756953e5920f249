from rmatrix_geometry.core.errors import NumericError
from rmatrix_geometry.core.numkit.precision import (
    SUPPORTED_PRECISIONS,
    context_for,
    default_tolerance,
    precision_of,
    principal_root,
    principal_sqrt,
    promote,
)
from rmatrix_geometry.core.numkit.sampling import derive_rng, random_complex


def test_default_tolerances():
    assert default_tolerance(53) == 1e-10
    assert default_tolerance(128) == 1e-18
    assert default_tolerance(256) == 1e-25
    assert default_tolerance(512) == 1e-50


def test_unsupported_precision():
    try:
        context_for(64)
        assert False, "expected NumericError"
    except NumericError as e:
        assert e.code == "E_PRECISION_UNSUPPORTED"
        assert e.path == "precision"


def test_precision_of_context_values():
    for bits in SUPPORTED_PRECISIONS:
        assert precision_of(context_for(bits).mpc(1, 2)) == bits
    assert precision_of(1.5) == 53
    assert precision_of(2 + 1j) == 53


def test_promote_takes_largest_precision():
    ctx, vals = promote(context_for(128).mpf(1), 2.0)
    assert ctx.prec == 128
    assert all(precision_of(v) == 128 for v in vals)


def test_principal_branches():
    assert abs(complex(principal_sqrt(-4)) - 2j) < 1e-15
    assert abs(complex(principal_root(-8, 3)) - complex(1, 3**0.5)) < 1e-12
    assert principal_root(0, 5) == 0


def test_derive_rng_is_stable_and_keyed():
    a = derive_rng(7, "ybe", 3).random(4)
    b = derive_rng(7, "ybe", 3).random(4)
    c = derive_rng(7, "ybe", 4).random(4)
    assert list(a) == list(b)
    assert list(a) != list(c)


def test_derive_rng_accepts_negative_keys():
    plus = derive_rng(0, "component_j", 1).random(3)
    minus = derive_rng(0, "component_j", -1).random(3)
    assert list(minus) == list(derive_rng(0, "component_j", -1).random(3))
    assert list(plus) != list(minus)


def test_random_complex_magnitude_range():
    rng = derive_rng(0, "magnitudes")
    for _ in range(100):
        z = random_complex(rng)
        assert 0.5 - 1e-12 <= abs(z) <= 2.0 + 1e-12

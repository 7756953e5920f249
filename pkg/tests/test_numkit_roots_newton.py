from rmatrix_geometry.core.errors import NumericError
from rmatrix_geometry.core.numkit.newton import newton_batch, newton_system
from rmatrix_geometry.core.numkit.poly import PolyMV
from rmatrix_geometry.core.numkit.residual import (
    coefficient_scaled_residual,
    relative_difference,
    residual_from_terms,
    worst,
)
from rmatrix_geometry.core.numkit.roots import reconstruct, uv_roots


def test_roots_of_cubic():
    roots = uv_roots([1, -6, 11, -6])
    got = sorted(complex(r).real for r in roots)
    assert all(abs(g - w) < 1e-12 for g, w in zip(got, [1, 2, 3]))
    assert all(abs(complex(r).imag) < 1e-12 for r in roots)


def test_roots_at_high_precision():
    roots = uv_roots([1, 0, -2], bits=256)
    assert any(abs(r - r.context.sqrt(2)) < 1e-70 for r in roots)


def test_roots_strip_leading_zeros():
    try:
        uv_roots([0, 0, 5])
        assert False, "expected NumericError"
    except NumericError as e:
        assert e.code == "E_ROOTS_DEGREE"


def test_reconstruct():
    assert [complex(c) for c in reconstruct(2, [1, 2])] == [2, -6, 4]


def test_newton_square_system():
    x, y = PolyMV.variables(2)
    res = newton_system([x**2 - 2, y - 1], [1.0, 0.5])
    assert res.converged
    assert res.reason == "converged"
    assert abs(complex(res.point[0]) - 2**0.5) < 1e-9
    assert abs(complex(res.point[1]) - 1) < 1e-9


def test_newton_multiprecision():
    x, y = PolyMV.variables(2, bits=128)
    res = newton_system([x**2 - 2, x * y - 1], [1.4, 0.7], tol=1e-18)
    assert res.converged
    assert abs(res.point[0] ** 2 - 2) < 1e-15


def test_newton_rejects_underdetermined():
    x, y = PolyMV.variables(2)
    try:
        newton_system([x + y], [1.0, 1.0])
        assert False, "expected NumericError"
    except NumericError as e:
        assert e.code == "E_NEWTON_SHAPE"


def test_newton_batch_many_starts():
    x, y = PolyMV.variables(2)
    res = newton_batch([x**2 - 1, y], [[0.5, 0.1], [-0.7, 0.2], [2.0, -1.0]])
    assert res.converged.all()
    assert sorted(round(p[0].real) for p in res.points) == [-1, 1, 1]


def test_residual_from_terms():
    assert residual_from_terms([1, -1]).passed
    r = residual_from_terms([1, -0.5])
    assert not r.passed
    assert abs(float(r.normalized) - 1 / 3) < 1e-15
    empty = residual_from_terms([])
    assert empty.degenerate
    assert not empty.passed


def test_relative_difference_and_worst():
    close = relative_difference(1, 1 + 1e-12)
    far = relative_difference(1, 2)
    assert close.passed
    assert not far.passed
    assert worst([close, far]) is far


def test_coefficient_scaled_residual():
    (x,) = PolyMV.variables(1)
    assert coefficient_scaled_residual(x**2 - 2, [2**0.5]) < 1e-15
    assert coefficient_scaled_residual(x**2 - 2, [1.0]) > 0.1

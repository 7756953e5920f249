from rmatrix_geometry.core.errors import NumericError
from rmatrix_geometry.core.verify.invariants import (
    abelian_base,
    double_cover_invariants,
    plurigenera,
    product_surface_invariants,
    surface_invariants_from_genus,
)


def test_invariants_at_slice_genus():
    inv = surface_invariants_from_genus(9)
    assert inv.L2 == 16
    assert (inv.chi, inv.Ksq, inv.pg, inv.q_irr) == (8, 32, 9, 2)
    assert inv.plurigenera == (40, 104, 200, 328)
    assert inv.severi
    assert inv.h0_L == 8


def test_invariants_at_genus_two():
    inv = surface_invariants_from_genus(2)
    assert (inv.L2, inv.chi, inv.Ksq, inv.pg, inv.q_irr) == (2, 1, 4, 2, 2)
    assert inv.plurigenera == plurigenera(1, 4) == (5, 13, 25, 41)


def test_odd_branch_class_is_rejected():
    try:
        double_cover_invariants(3, abelian_base(3))
        assert False, "expected NumericError"
    except NumericError as e:
        assert e.code == "E_INVARIANTS_PARITY"


def test_small_genus_is_rejected():
    for gC in (0, 1):
        try:
            surface_invariants_from_genus(gC)
            assert False, "expected NumericError"
        except NumericError as e:
            assert e.code == "E_INVARIANTS_GENUS"


def test_product_of_curves():
    assert product_surface_invariants(5, 5) == (10, 25)
    assert product_surface_invariants(0, 3) == (3, 0)
    try:
        product_surface_invariants(-1, 2)
        assert False, "expected NumericError"
    except NumericError as e:
        assert e.code == "E_INVARIANTS_GENUS"

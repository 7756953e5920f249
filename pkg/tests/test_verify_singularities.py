import numpy as np

from rmatrix_geometry.core.errors import NumericError, SingularCurveError
from rmatrix_geometry.core.model.params import ModelParams
from rmatrix_geometry.core.model.polys import c_slice_poly, cbar_poly
from rmatrix_geometry.core.numkit.poly import PolyMV
from rmatrix_geometry.core.verify.singularities import (
    DEDUPE_RADIUS,
    ScanResult,
    _dedupe,
    genus_from_scan,
    singularity_scan,
)


def test_smooth_fermat_sextic():
    x, y, z = PolyMV.variables(3)
    scan = singularity_scan(x**6 + y**6 + z**6, 6, starts=200)
    assert len(scan) == 0
    assert not scan.warning
    assert genus_from_scan(6, scan) == 10


def test_nodal_cubic():
    x, y, z = PolyMV.variables(3)
    scan = singularity_scan(y**2 * z - x**3 - x**2 * z, 3, starts=300)
    assert scan.count("node") == 1
    assert len(scan) == 1
    (record,) = scan
    assert record.multiplicity == 2
    assert abs(record.coords[0]) < 1e-6 and abs(record.coords[1]) < 1e-6
    assert genus_from_scan(3, scan) == 0


def test_tacnode_quartic():
    x, y, z = PolyMV.variables(3)
    scan = singularity_scan(y**2 * z**2 - x**4 - y**4, 4, starts=300)
    assert scan.count("tacnode-like") == 1
    assert len(scan) == 1
    assert next(iter(scan)).delta == 2
    assert genus_from_scan(4, scan) == 1


def test_cbar_singularities_and_genus():
    mp = ModelParams.create(2, 0.6)
    scan = singularity_scan(cbar_poly(mp.q, mp.U), 6, mp)
    assert scan.count("node") == 1
    assert scan.count("tacnode-like") == 2
    assert scan.count("other") == 0
    assert genus_from_scan(6, scan) == 5


def test_octic_slice_singularities_and_genus():
    mp = ModelParams.create(2, 0.6)
    scan = singularity_scan(c_slice_poly(mp.q, mp.U), 8, mp)
    assert scan.count("node") == 12
    assert len(scan) == 12
    assert genus_from_scan(8, scan) == 9


def test_genus_refuses_incomplete_scan():
    try:
        genus_from_scan(4, ScanResult((), starts=1, converged=0, warning=True))
        assert False, "expected NumericError"
    except NumericError as e:
        assert e.code == "E_GENUS_INCOMPLETE"


def test_scan_rejects_wrong_shape():
    x, y, z = PolyMV.variables(3)
    for curve, degree in ((x**3 + y**3 + z**3, 4), (x**3 + y**2 + z, 3)):
        try:
            singularity_scan(curve, degree)
            assert False, "expected SingularCurveError"
        except SingularCurveError as e:
            assert e.code == "E_SCAN_SHAPE"


def test_dedupe_merges_slowly_converged_copies():
    base = np.array([0.3 + 0.1j, 1.0, -0.2j])
    points = np.array([base, base * (2 + 1j), base + 4e-7, base + 1e-3])
    clusters = _dedupe(points)
    assert [hits for _, hits in clusters] == [3, 1]
    assert 1e-6 < DEDUPE_RADIUS < 1e-4

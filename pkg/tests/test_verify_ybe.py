import numpy as np

from rmatrix_geometry.core.model.curves import sample_s
from rmatrix_geometry.core.model.maps import chan_map
from rmatrix_geometry.core.model.params import ModelParams
from rmatrix_geometry.core.numkit.sampling import derive_rng
from rmatrix_geometry.core.verify.ybe import (
    embed,
    rational_r,
    transfer_commutativity,
    ybe_check,
    ybe_residual,
)

COUPLINGS = ((2, 0.6), (1.5 + 0.2j, 1 / 3 + 1j / 7))


def _points(mp, seed, n=3):
    rng = derive_rng(seed, "ybe-test")
    return [sample_s(mp, rng) for _ in range(n)]


def test_embed_identity_and_swap():
    assert np.allclose(embed(np.eye(16), 0, 2, 3), np.eye(64))
    swap = np.zeros((16, 16))
    for i in range(4):
        for j in range(4):
            swap[4 * j + i, 4 * i + j] = 1
    assert np.allclose(embed(swap, 0, 1, 2), swap)


def test_rational_ybe():
    for q, g in COUPLINGS:
        mp = ModelParams.create(q, g)
        p1, p2, p3 = _points(mp, 0)
        report = ybe_check("rational", p1, p2, p3, mp)
        assert report.passed, report.max_residual


def test_rational_ybe_at_high_precision():
    mp = ModelParams.create(2, 0.6, bits=128)
    p1, p2, p3 = _points(mp, 1)
    report = ybe_check("rational", p1, p2, p3, mp)
    assert report.passed
    assert report.max_residual < 1e-20


def test_mismatched_spectral_points_break_ybe():
    mp = ModelParams.create(2, 0.6)
    p1, p2, p3, p4 = _points(mp, 2, 4)
    residual = ybe_residual(rational_r(p1, p2, mp), rational_r(p1, p4, mp), rational_r(p2, p3, mp))
    assert residual > 1e-6


def test_bk_ybe():
    mp = ModelParams.create(2, 0.6)
    p1, p2, p3 = (chan_map(p, mp) for p in _points(mp, 3))
    report = ybe_check("bk", p1, p2, p3, mp)
    assert report.passed, report.metadata
    assert len(report.metadata["branch_flips"]) == 6


def test_unknown_builder():
    mp = ModelParams.create(2, 0.6)
    p1, p2, p3 = _points(mp, 4)
    try:
        ybe_check("sparse", p1, p2, p3, mp)
        assert False, "expected ValueError"
    except ValueError:
        pass


def test_transfer_matrices_commute():
    mp = ModelParams.create(2, 0.6)
    p1, p2, s = _points(mp, 5)
    for n in (2, 3):
        report = transfer_commutativity(mp, n, p1, p2, s)
        assert report.passed, (n, report.max_residual)
        assert report.name == f"transfer.n{n}"

    sites = _points(mp, 6, 2)
    assert transfer_commutativity(mp, 2, p1, p2, sites).passed


def test_transfer_site_limits():
    mp = ModelParams.create(2, 0.6)
    p1, p2, s = _points(mp, 7)
    for n in (1, 5):
        try:
            transfer_commutativity(mp, n, p1, p2, s)
            assert False, "expected ValueError"
        except ValueError:
            pass

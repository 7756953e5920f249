from dataclasses import replace

import numpy as np

from rmatrix_geometry.core.model.curves import sample_cbar, sample_s
from rmatrix_geometry.core.model.maps import chan_map
from rmatrix_geometry.core.model.params import ModelParams
from rmatrix_geometry.core.numkit.sampling import derive_rng
from rmatrix_geometry.core.rmatrix.assemble import (
    POSITIONS,
    SUPPORT_SIZE,
    bk_assemble,
    rational_assemble,
)
from rmatrix_geometry.core.rmatrix.entries import (
    bk_amplitudes,
    rational_entries,
    symmetric_entries,
)
from rmatrix_geometry.core.rmatrix.equivalence import (
    FORM_TOLERANCE,
    branch_assignments,
    form_equivalence,
    proportionality,
)


def _pair(mp, seed):
    rng = derive_rng(seed, "rmatrix")
    return sample_s(mp, rng), sample_s(mp, rng)


def test_support_has_36_positions():
    assert SUPPORT_SIZE == 36
    assert len({(r, c) for r, c, _ in POSITIONS}) == 36

    mp = ModelParams.create(2, 0.6)
    s1, s2 = _pair(mp, 0)
    m = rational_assemble(rational_entries(s1, s2, mp), mp)
    assert len(m.support()) == 36
    dense = m.to_numpy()
    assert dense.shape == (16, 16)
    assert np.count_nonzero(dense) <= 36
    assert dense[0, 1] == 0
    assert m.transpose().entry(5, 2) == m.entry(2, 5)


def test_high_precision_matrix_is_object_array():
    mp = ModelParams.create(2, 0.6, bits=128)
    s1, s2 = _pair(mp, 1)
    es = rational_entries(s1, s2, mp)
    dense = rational_assemble(es, mp).to_numpy()
    assert dense.dtype == object
    assert dense[5, 5] == es.g
    assert dense[0, 0] == es.a


def test_unknown_corner_reading():
    mp = ModelParams.create(2, 0.6)
    s1, s2 = _pair(mp, 2)
    try:
        rational_assemble(rational_entries(s1, s2, mp), mp, corner="mirrored")
        assert False, "expected ValueError"
    except ValueError:
        pass


def test_form_equivalence_selects_plain_corner():
    for q, g in ((2, 0.6), (1.5 + 0.2j, 1 / 3 + 1j / 7)):
        mp = ModelParams.create(q, g)
        for seed in range(3):
            s1, s2 = _pair(mp, seed)
            report = form_equivalence(s1, s2, mp)
            assert report.passed, report.metadata
            full = report.metadata["full_matrix"]
            assert full["plain"] < FORM_TOLERANCE
            assert full["twisted"] > FORM_TOLERANCE
            assert len(report.metadata["branch_flips"]) == 4


def test_bk_matrix_has_unit_entries():
    mp = ModelParams.create(2, 0.6)
    s1, s2 = _pair(mp, 3)
    amps = bk_amplitudes(chan_map(s1, mp), chan_map(s2, mp), mp)
    m = bk_assemble(amps, mp)
    assert m.entry(6, 6) == 1
    assert m.entry(11, 11) == 1
    assert m.support() == frozenset((r, c) for r, c, _ in POSITIONS)


def test_proportionality_detects_a_wrong_entry():
    mp = ModelParams.create(2, 0.6)
    s1, s2 = _pair(mp, 4)
    report = form_equivalence(s1, s2, mp)
    flips = tuple(report.metadata["branch_flips"])
    assert flips in set(branch_assignments())

    sp1 = chan_map(s1, mp).flipped(plus=flips[0], minus=flips[1])
    sp2 = chan_map(s2, mp).flipped(plus=flips[2], minus=flips[3])
    amps = bk_amplitudes(sp1, sp2, mp)
    es = rational_entries(s1, s2, mp)
    assert proportionality(amps, es, mp).passed

    bad = proportionality(amps, replace(es, b=es.b * 1.01), mp)
    assert not bad.passed
    assert bad.metadata["worst_entry"] in {"b", "a", "bb", "c", "cb", "f", "g", "gb"}


def test_symmetric_gauge():
    mp = ModelParams.create(2, 0.6)
    rng = derive_rng(5, "gauge")
    es = symmetric_entries(sample_cbar(mp, rng), sample_cbar(mp, rng), mp)
    assert es.cb == es.c == 1
    assert es.db == es.d

import math

import numpy as np
import pytest

from chirpfab.scene import (
    POLARIZATIONS,
    PointScatterer,
    ScatteringMatrix,
    Scene,
    UNIT_SCATTERING,
    ground_truth_report,
    range_to,
    reciprocity_violations,
)

from helpers import make_fabric, make_geometry


def test_entry_selection_is_receive_then_transmit():
    s = ScatteringMatrix(1 + 0j, 2 + 0j, 3 + 0j, 4 + 0j)
    # entry(pol_tx, pol_rx) reads s_{rx,tx}
    assert s.entry("H", "H") == 1
    assert s.entry("V", "H") == 2
    assert s.entry("H", "V") == 3
    assert s.entry("V", "V") == 4


def test_entry_rejects_unknown_polarization():
    with pytest.raises(ValueError):
        UNIT_SCATTERING.entry("X", "H")


def test_as_array_layout_and_norm():
    s = ScatteringMatrix(3, 0, 0, 4j)
    a = s.as_array()
    assert a.shape == (2, 2)
    assert a[0, 0] == 3 and a[1, 1] == 4j
    assert s.frobenius_norm() == pytest.approx(5.0)


def test_reciprocity_predicate():
    assert ScatteringMatrix(1, 2j, 2j, -1).is_reciprocal()
    assert not ScatteringMatrix(1, 2j, -2j, -1).is_reciprocal()
    assert ScatteringMatrix(1, 1, 1 + 1e-12, 1).is_reciprocal(tol=1e-9)


def test_scattering_matrix_rejects_nonfinite():
    with pytest.raises(ValueError):
        ScatteringMatrix(float("nan"), 0, 0, 1)
    with pytest.raises(ValueError):
        ScatteringMatrix(1, 0, 0, complex(0, float("inf")))


def test_range_to_pythagorean_triple():
    sc = PointScatterer((3.0, 0.0, 4.0), UNIT_SCATTERING)
    assert range_to(sc, np.zeros(3)) == pytest.approx(5.0)


def test_range_to_zero_range_rejected():
    sc = PointScatterer((0.1, 0.0, 0.0), UNIT_SCATTERING)
    with pytest.raises(ValueError, match="zero range"):
        range_to(sc, np.array([0.1, 0.0, 0.0]))


def test_range_is_symmetric_under_translation():
    rng = np.random.default_rng(7)
    for _ in range(50):
        pos = rng.normal(size=3)
        elem = rng.normal(size=3)
        shift = rng.normal(size=3)
        sc = PointScatterer(tuple(pos), UNIT_SCATTERING)
        sc_shifted = PointScatterer(tuple(pos + shift), UNIT_SCATTERING)
        r = range_to(sc, elem)
        assert r == pytest.approx(np.linalg.norm(pos - elem))
        assert range_to(sc_shifted, elem + shift) == pytest.approx(r)


def test_scene_holds_scatterers_and_flags():
    scene = Scene([PointScatterer((0, 0, 2), UNIT_SCATTERING)],
                  name="bench", spreading_loss=True)
    assert len(scene.scatterers) == 1
    assert scene.name == "bench"
    assert scene.spreading_loss


def test_ground_truth_report_center_referenced():
    cfg = make_fabric(k=2, m=4, p=8, band=(60e9, 81e9), bw=300e6,
                      duration=1e-4)
    geom = make_geometry(cfg)  # centered on x = 0
    scene = Scene([PointScatterer((0.05, 0.0, 2.0), UNIT_SCATTERING)])
    rows = ground_truth_report(scene, geom)
    assert len(rows) == 1
    row = rows[0]
    assert row.index == 0
    assert row.range_to_center_m == pytest.approx(math.hypot(0.05, 2.0))
    assert row.cross_range_m == pytest.approx(0.05)
    assert row.scattering == UNIT_SCATTERING


def test_reciprocity_violations_found():
    ok = PointScatterer((0, 0, 1.0), ScatteringMatrix(1, 2, 2, 1))
    bad = PointScatterer((0, 0, 2.0), ScatteringMatrix(1, 2, 3, 1))
    scene = Scene([ok, bad])
    violations = reciprocity_violations(scene)
    assert violations == [1]


def test_polarization_constants():
    assert POLARIZATIONS == ("H", "V")

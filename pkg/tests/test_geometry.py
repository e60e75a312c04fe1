import numpy as np
import pytest

from chirpfab.geometry import FabricGeometry


def line(origin=(0.0, 0.0, 0.0), direction=(1.0, 0.0, 0.0), d=2e-3, n=8):
    return FabricGeometry(np.asarray(origin, float), np.asarray(direction, float),
                          element_spacing_m=d, n_elements=n)


def test_direction_is_normalized():
    geom = line(direction=(3.0, 0.0, 4.0))
    assert np.linalg.norm(geom.aperture_direction) == pytest.approx(1.0)
    assert np.allclose(geom.aperture_direction, [0.6, 0.0, 0.8])


def test_element_positions_are_uniformly_spaced():
    geom = line(origin=(-7e-3, 0, 0), d=2e-3, n=8)
    pts = np.stack([geom.element_position(v) for v in range(8)])
    gaps = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    assert np.allclose(gaps, 2e-3)
    assert np.allclose(pts[0], [-7e-3, 0, 0])
    assert np.allclose(pts[7], [7e-3, 0, 0])


def test_element_index_bounds():
    geom = line(n=4)
    with pytest.raises(ValueError, match="outside fabric"):
        geom.element_position(4)
    with pytest.raises(ValueError, match="outside fabric"):
        geom.element_position(-1)


def test_center_and_length():
    geom = line(origin=(-7e-3, 0, 0), d=2e-3, n=8)
    assert np.allclose(geom.aperture_center(), [0.0, 0.0, 0.0])
    assert geom.aperture_length_m() == pytest.approx(14e-3)


def test_cross_range_is_signed_axis_offset():
    geom = line(origin=(-7e-3, 0, 0), d=2e-3, n=8)
    assert geom.cross_range_of((0.05, 0.0, 2.0)) == pytest.approx(0.05)
    assert geom.cross_range_of((-0.02, 1.0, 5.0)) == pytest.approx(-0.02)


def test_rejects_degenerate_geometry():
    with pytest.raises(ValueError):
        line(direction=(0.0, 0.0, 0.0))
    with pytest.raises(ValueError):
        line(d=0.0)
    with pytest.raises(ValueError):
        line(n=0)
    with pytest.raises(ValueError):
        FabricGeometry(np.zeros(2), np.array([1.0, 0, 0]), 1e-3, 4)
    with pytest.raises(ValueError):
        line(origin=(float("inf"), 0, 0))

"""Point-scatterer scenes with full polarimetric scattering matrices.

Every scatterer carries a 2x2 complex matrix over the (H, V) basis.  The
entry seen by one chirp is selected by the transmit and receive
polarizations: transmit P and receive Q pick s_qp.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

POL_H = "H"
POL_V = "V"
POLARIZATIONS = (POL_H, POL_V)


@dataclass(frozen=True)
class ScatteringMatrix:
    """2x2 complex scattering matrix, row index receive, column index transmit.

    s_hv is the response received on H when transmitting V.
    """

    s_hh: complex
    s_hv: complex
    s_vh: complex
    s_vv: complex

    def __post_init__(self) -> None:
        for name in ("s_hh", "s_hv", "s_vh", "s_vv"):
            val = complex(getattr(self, name))
            if not (np.isfinite(val.real) and np.isfinite(val.imag)):
                raise ValueError(f"{name} must be finite")

    def entry(self, pol_tx: str, pol_rx: str) -> complex:
        """Entry selected by a (transmit, receive) polarization pair."""
        key = f"s_{pol_rx.lower()}{pol_tx.lower()}"
        if pol_tx not in POLARIZATIONS or pol_rx not in POLARIZATIONS:
            raise ValueError(f"unknown polarization pair ({pol_tx}, {pol_rx})")
        return complex(getattr(self, key))

    def as_array(self) -> np.ndarray:
        return np.array([[self.s_hh, self.s_hv], [self.s_vh, self.s_vv]], dtype=complex)

    def frobenius_norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))

    def is_reciprocal(self, tol: float = 0.0) -> bool:
        # monostatic reciprocity collapses the cross terms to one value
        return abs(complex(self.s_hv) - complex(self.s_vh)) <= tol


UNIT_SCATTERING = ScatteringMatrix(1.0, 1.0, 1.0, 1.0)


@dataclass(frozen=True)
class PointScatterer:
    position_m: tuple[float, float, float]
    scattering: ScatteringMatrix

    def __post_init__(self) -> None:
        pos = tuple(float(x) for x in self.position_m)
        if len(pos) != 3 or not all(np.isfinite(pos)):
            raise ValueError("scatterer position must be a finite 3-vector")
        object.__setattr__(self, "position_m", pos)

    def position_array(self) -> np.ndarray:
        return np.asarray(self.position_m, dtype=float)


@dataclass
class Scene:
    """Collection of point scatterers probed by the fabric.

    spreading_loss switches on a 1/R^2 amplitude roll-off; by default
    amplitudes are range-independent so geometry effects stay isolated.
    """

    scatterers: list[PointScatterer] = field(default_factory=list)
    name: str = ""
    spreading_loss: bool = False


def range_to(scatterer: PointScatterer, element_position_m) -> float:
    """Euclidean range from a fabric element to a scatterer, in meters."""
    delta = scatterer.position_array() - np.asarray(element_position_m, dtype=float)
    r = float(np.linalg.norm(delta))
    if r == 0.0:
        raise ValueError("zero range: scatterer coincides with element position")
    return r


@dataclass(frozen=True)
class GroundTruthRow:
    index: int
    range_to_center_m: float
    cross_range_m: float
    scattering: ScatteringMatrix


def ground_truth_report(scene: Scene, geometry) -> list[GroundTruthRow]:
    """Per-scatterer truth relative to the aperture center, in input order."""
    center = geometry.aperture_center()
    rows = []
    for i, sc in enumerate(scene.scatterers):
        rows.append(GroundTruthRow(
            index=i,
            range_to_center_m=float(np.linalg.norm(sc.position_array() - center)),
            cross_range_m=geometry.cross_range_of(sc.position_m),
            scattering=sc.scattering,
        ))
    return rows


def reciprocity_violations(scene: Scene, tol: float = 0.0) -> list[int]:
    """Indices of scatterers whose cross-pol entries differ beyond tol."""
    return [i for i, sc in enumerate(scene.scatterers)
            if not sc.scattering.is_reciprocal(tol)]

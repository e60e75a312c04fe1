"""Static element geometry of the trunk-and-module fabric.

The case-study fabric is a 1-D line of effective radiating positions.
Virtual element v sits at ``origin + v * spacing * direction``, where v is
the flattened (chain, module, step) index assigned by the imaging layer.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class FabricGeometry:
    """Placement of the fabric's virtual elements along a line.

    Value type; treat as read-only after construction.
    """

    aperture_origin_m: np.ndarray
    aperture_direction: np.ndarray
    element_spacing_m: float
    n_elements: int

    def __post_init__(self) -> None:
        origin = np.asarray(self.aperture_origin_m, dtype=float)
        direction = np.asarray(self.aperture_direction, dtype=float)
        if origin.shape != (3,) or direction.shape != (3,):
            raise ValueError("aperture origin and direction must be 3-vectors")
        if not (np.all(np.isfinite(origin)) and np.all(np.isfinite(direction))):
            raise ValueError("aperture geometry must be finite")
        norm = float(np.linalg.norm(direction))
        if norm == 0.0:
            raise ValueError("aperture direction must be nonzero")
        self.aperture_origin_m = origin
        self.aperture_direction = direction / norm
        if self.element_spacing_m <= 0.0:
            raise ValueError("element spacing must be positive")
        if self.n_elements < 1:
            raise ValueError("fabric needs at least one element")

    def element_position(self, v: int) -> np.ndarray:
        """Position of virtual element v, in meters."""
        if not 0 <= v < self.n_elements:
            raise ValueError(f"element index {v} outside fabric of {self.n_elements}")
        return self.aperture_origin_m + v * self.element_spacing_m * self.aperture_direction

    def aperture_center(self) -> np.ndarray:
        half_span = 0.5 * (self.n_elements - 1) * self.element_spacing_m
        return self.aperture_origin_m + half_span * self.aperture_direction

    def aperture_length_m(self) -> float:
        # end-to-end span of element positions
        return (self.n_elements - 1) * self.element_spacing_m

    def cross_range_of(self, position_m) -> float:
        """Signed offset of a point along the aperture axis, from the center."""
        rel = np.asarray(position_m, dtype=float) - self.aperture_center()
        return float(np.dot(rel, self.aperture_direction))

"""Low-dimensional control coordinates for one acquisition.

A chirp is fully described by a point u = (f, q, s): the frequency state
(which subband slice), the aperture state (which chain and module, hence
which spatial position radiates), and the waveform state (chirp timing,
transmit polarization, slot index).  A frame is a trajectory through these
points; its serialized size is a handful of integers per chirp no matter
how large the scene or the fabric grows.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import FabricGeometry
from .scene import POLARIZATIONS
from .scheduling import Schedule
from .validation import Verdict


@dataclass(frozen=True)
class FrequencyState:
    """Center-frequency step of the active chirp."""

    index: int
    center_hz: float
    chirp_bandwidth_hz: float


@dataclass
class ApertureState:
    """Which physical state of the fabric is radiating."""

    chain_id: int
    module_id: int
    element_position_m: np.ndarray

    def __post_init__(self) -> None:
        self.element_position_m = np.asarray(self.element_position_m, dtype=float)


@dataclass(frozen=True)
class WaveformState:
    chirp_duration_s: float
    pol_tx: str
    slot_index: int


@dataclass
class ControlPoint:
    """One point u = (f, q, s) of the generative control space."""

    f: FrequencyState
    q: ApertureState
    s: WaveformState

    def coordinates(self) -> tuple:
        """Scene-size-independent identifying tuple."""
        return (self.f.index, self.q.chain_id, self.q.module_id,
                self.s.pol_tx, self.s.slot_index)

    def channel_key(self, pol_rx: str) -> str:
        # receive-then-transmit subscript, matching the scattering entry it probes
        return f"{pol_rx}{self.s.pol_tx}".lower()


@dataclass
class Trajectory:
    """Slot-ordered sequence of control points forming one acquisition."""

    points: list[ControlPoint]

    def __post_init__(self) -> None:
        if not self.points:
            raise ValueError("trajectory must contain at least one point")
        slots = [p.s.slot_index for p in self.points]
        if any(b < a for a, b in zip(slots, slots[1:])):
            raise ValueError("trajectory slot indices must be non-decreasing")

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


@dataclass(frozen=True)
class ControlSpaceBounds:
    """Extent of the admissible control space for one fabric."""

    k_chains: int
    m_modules: int
    p_steps: int
    band_lo_hz: float
    band_hi_hz: float


def validate_point(u: ControlPoint, bounds: ControlSpaceBounds) -> Verdict:
    """Admissibility check; returns the first violated constraint."""
    if not 0 <= u.q.chain_id < bounds.k_chains:
        return Verdict.failed(f"chain_id {u.q.chain_id} outside [0, {bounds.k_chains})")
    if not 0 <= u.q.module_id < bounds.m_modules:
        return Verdict.failed(f"module_id {u.q.module_id} outside [0, {bounds.m_modules})")
    if not 0 <= u.f.index < bounds.p_steps:
        return Verdict.failed(f"frequency index {u.f.index} outside [0, {bounds.p_steps})")
    if u.f.center_hz <= 0.0:
        return Verdict.failed("chirp center frequency must be positive")
    if u.f.chirp_bandwidth_hz <= 0.0:
        return Verdict.failed("chirp bandwidth must be positive")
    lo = u.f.center_hz - 0.5 * u.f.chirp_bandwidth_hz
    hi = u.f.center_hz + 0.5 * u.f.chirp_bandwidth_hz
    span = bounds.band_hi_hz - bounds.band_lo_hz
    if lo < bounds.band_lo_hz - 1e-9 * span or hi > bounds.band_hi_hz + 1e-9 * span:
        return Verdict.failed(
            f"chirp band [{lo:.6g}, {hi:.6g}] Hz leaves the system band "
            f"[{bounds.band_lo_hz:.6g}, {bounds.band_hi_hz:.6g}] Hz")
    if u.s.chirp_duration_s <= 0.0:
        return Verdict.failed("chirp duration must be positive")
    if u.s.pol_tx not in POLARIZATIONS:
        return Verdict.failed(f"unknown transmit polarization {u.s.pol_tx!r}")
    if u.s.slot_index < 0:
        return Verdict.failed("slot index must be non-negative")
    if not np.all(np.isfinite(u.q.element_position_m)):
        return Verdict.failed("element position must be finite")
    return Verdict.passed()


def trajectory_from_schedule(sched: Schedule, geometry: FabricGeometry) -> Trajectory:
    """Expand a schedule into slot-ordered control points.

    Concurrent chains of one slot appear in ascending chain order.  The
    element position of each point comes from the flattened virtual index
    v = chain * M * P + module * P + step.
    """
    cfg = sched.cfg
    points = []
    for e in sorted(sched.entries, key=lambda e: (e.slot, e.chain_id)):
        v = e.chain_id * cfg.m_modules * cfg.p_steps + e.module_id * cfg.p_steps + e.step
        if v >= geometry.n_elements:
            raise ValueError(
                f"schedule references element {v} absent from the "
                f"{geometry.n_elements}-element geometry")
        points.append(ControlPoint(
            f=FrequencyState(
                index=e.step,
                center_hz=sched.plan.center(e.chain_id, e.module_id, e.step),
                chirp_bandwidth_hz=sched.plan.chirp_bandwidth_hz,
            ),
            q=ApertureState(
                chain_id=e.chain_id,
                module_id=e.module_id,
                element_position_m=geometry.element_position(v),
            ),
            s=WaveformState(
                chirp_duration_s=cfg.chirp_duration_s,
                pol_tx=e.pol_tx,
                slot_index=e.slot,
            ),
        ))
    return Trajectory(points=points)

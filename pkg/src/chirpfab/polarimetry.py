"""Full-polarimetric acquisition and scattering-matrix estimation.

A dual-pol run serializes an all-H frame then an all-V frame while both
receive polarizations are captured for every chirp, giving four channels
per virtual element and 4 * N_vir real-pair degrees of freedom per frame.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .control import trajectory_from_schedule
from .fmcw import C_MPS, ChirpConfig, NoiseConfig, NOISE_NONE, simulate_state
from .geometry import FabricGeometry
from .imaging import (
    GridSpec,
    ImageGrid,
    RangeProfile,
    VirtualElement,
    backproject,
    backproject_at,
    map_state_to_element,
    merge_channels,
)
from .scene import POL_H, POL_V, PointScatterer, Scene, ScatteringMatrix, UNIT_SCATTERING
from .scheduling import FabricConfig, SubbandPlan, build_schedule, partition_band

CHANNEL_KEYS = ("hh", "hv", "vh", "vv")  # receive-then-transmit subscripts


@dataclass
class AcquisitionContext:
    """Everything needed to run (or re-run) one acquisition pipeline."""

    cfg: FabricConfig
    geometry: FabricGeometry
    sample_rate_hz: float
    plan: SubbandPlan | None = None
    pad_factor: int = 4
    window: str = "hann"
    c_mps: float = C_MPS

    def __post_init__(self) -> None:
        if self.plan is None:
            self.plan = partition_band(self.cfg)

    def chirp_for(self, center_hz: float) -> ChirpConfig:
        return ChirpConfig.create(center_hz, self.cfg.chirp_bandwidth_hz,
                                  self.cfg.chirp_duration_s, self.sample_rate_hz)

    def elements(self) -> list[VirtualElement]:
        out = []
        for chain in range(self.cfg.k_chains):
            for module in range(self.cfg.m_modules):
                for step in range(self.cfg.p_steps):
                    out.append(map_state_to_element(
                        chain, module, step, self.cfg, self.geometry, self.plan))
        return out


@dataclass
class PolFrame:
    """One dual-pol frame: four channels of per-element range profiles."""

    channels: dict  # key -> list of (VirtualElement, RangeProfile), v-ordered
    slot_span: int
    context: AcquisitionContext

    @property
    def n_virtual(self) -> int:
        return len(self.channels[CHANNEL_KEYS[0]])


def dof_count(n_virtual: int) -> int:
    """Independently estimable complex channels per world-model frame."""
    return 4 * n_virtual


def acquire_pol_frame(scene: Scene, ctx: AcquisitionContext,
                      noise: NoiseConfig = NOISE_NONE,
                      signal_sink=None) -> PolFrame:
    """Simulate one full-polarimetric frame over the fabric.

    Builds the dual-pol schedule, walks its trajectory, and range-compresses
    both receive polarizations of every chirp.  signal_sink, when given, is
    called with every raw BeatSignal (debug taps).
    """
    from .imaging import range_profile as _range_profile

    sched = build_schedule(ctx.cfg, [POL_H, POL_V])
    traj = trajectory_from_schedule(sched, ctx.geometry)
    n_vir = ctx.cfg.n_virtual
    channels = {key: [None] * n_vir for key in CHANNEL_KEYS}
    for u in traj:
        chirp = ctx.chirp_for(u.f.center_hz)
        elem = map_state_to_element(u.q.chain_id, u.q.module_id, u.f.index,
                                    ctx.cfg, ctx.geometry, ctx.plan)
        for pol_rx in (POL_H, POL_V):
            sig = simulate_state(u, scene, chirp, noise, pol_rx, ctx.c_mps)
            if signal_sink is not None:
                signal_sink(sig)
            prof = _range_profile(sig, ctx.pad_factor, ctx.window, ctx.c_mps)
            channels[u.channel_key(pol_rx)][elem.index] = (elem, prof)
    for key, entries in channels.items():
        if any(e is None for e in entries):
            raise RuntimeError(f"channel {key} left elements unobserved")
    return PolFrame(channels=channels, slot_span=sched.n_slots, context=ctx)


def unit_response(ctx: AcquisitionContext, location_m) -> dict:
    """Noiseless per-channel back-projected response of a unit scatterer.

    Calibration run: a synthetic target with every scattering entry equal
    to one is placed at the query location and acquired through the same
    pipeline, so window loss, padding and interpolation divide out of the
    estimates exactly.
    """
    loc = tuple(float(x) for x in np.asarray(location_m, dtype=float))
    cal_scene = Scene([PointScatterer(loc, UNIT_SCATTERING)], name="calibration")
    frame = acquire_pol_frame(cal_scene, ctx, NOISE_NONE)
    point = np.asarray(loc, dtype=float)
    out = {}
    for key in CHANNEL_KEYS:
        out[key] = complex(backproject_at(frame.channels[key], point, ctx.c_mps)[0])
    return out


def estimate_scattering(frame: PolFrame, location_m,
                        calibration: dict | None = None) -> ScatteringMatrix:
    """Estimate the scattering matrix at one location.

    Each channel is back-projected at the location and jointly normalized
    by the unit-scatterer calibration response.  Estimation is linear in
    the underlying scattering entries.
    """
    point = np.asarray(location_m, dtype=float)
    if calibration is None:
        calibration = unit_response(frame.context, point)
    vals = {}
    for key in CHANNEL_KEYS:
        try:
            raw = complex(backproject_at(frame.channels[key], point,
                                         frame.context.c_mps)[0])
        except ValueError as exc:
            raise ValueError("location outside grid support") from exc
        vals[key] = raw / calibration[key]
    return ScatteringMatrix(s_hh=vals["hh"], s_hv=vals["hv"],
                            s_vh=vals["vh"], s_vv=vals["vv"])


@dataclass
class ScattererEstimate:
    location_m: tuple
    estimate: ScatteringMatrix
    truth: ScatteringMatrix | None = None
    rel_error_frobenius: float | None = None


@dataclass
class WorldModelFrame:
    """Polarimetric world-model snapshot produced by one dual-pol frame."""

    image: ImageGrid
    estimates: list[ScattererEstimate]
    dof: int
    timestamp_slots: int


def channel_image(frame: PolFrame, key: str, spec: GridSpec) -> ImageGrid:
    return backproject(frame.channels[key], spec, frame.context.c_mps)


def build_world_model(frame: PolFrame, spec: GridSpec,
                      truth_scene: Scene | None = None) -> WorldModelFrame:
    """Back-project all four channels and estimate S at known locations.

    When a truth scene is given, estimates are evaluated at the true
    scatterer locations and tagged with their relative Frobenius error.
    """
    image = merge_channels([channel_image(frame, key, spec) for key in CHANNEL_KEYS])
    estimates = []
    if truth_scene is not None:
        cal_cache = {}
        for sc in truth_scene.scatterers:
            loc = sc.position_m
            if loc not in cal_cache:
                cal_cache[loc] = unit_response(frame.context, loc)
            est = estimate_scattering(frame, loc, cal_cache[loc])
            delta = est.as_array() - sc.scattering.as_array()
            denom = sc.scattering.frobenius_norm()
            rel = float(np.linalg.norm(delta)) / denom if denom > 0 else float("nan")
            estimates.append(ScattererEstimate(
                location_m=loc, estimate=est, truth=sc.scattering,
                rel_error_frobenius=rel))
    return WorldModelFrame(
        image=image,
        estimates=estimates,
        dof=dof_count(frame.n_virtual),
        timestamp_slots=frame.slot_span,
    )

"""Shared builders and independent oracles for the test suite.

Oracles here deliberately avoid the library's own code paths: the
schedule oracle enumerates and checks assignments directly against the
frequency plan, and the beat-frequency oracle reads an FFT peak.
"""

from __future__ import annotations

import itertools

import numpy as np

from chirpfab.control import ApertureState, ControlPoint, FrequencyState, WaveformState
from chirpfab.fmcw import ChirpConfig
from chirpfab.geometry import FabricGeometry
from chirpfab.polarimetry import AcquisitionContext
from chirpfab.scene import PointScatterer, ScatteringMatrix, Scene
from chirpfab.scheduling import FabricConfig, Schedule, ScheduleEntry, partition_band

C3 = 3.0e8

IDENTITY = ScatteringMatrix(1, 0, 0, 1)
DIHEDRAL = ScatteringMatrix(1, 0, 0, -1)
CROSS = ScatteringMatrix(0, 1j, 1j, 0)


def make_fabric(k=2, m=2, p=4, band=(60.0e9, 66.0e9), bw=None,
                duration=2.0e-5) -> FabricConfig:
    lo, hi = band
    step = (hi - lo) / (k * m * p)
    if bw is None:
        bw = 0.8 * step
    return FabricConfig(k_chains=k, m_modules=m, p_steps=p, band_lo_hz=lo,
                        band_hi_hz=hi, chirp_bandwidth_hz=bw,
                        chirp_duration_s=duration)


def make_geometry(cfg: FabricConfig, c=C3) -> FabricGeometry:
    # half-wavelength line centered on x = 0
    d = 0.5 * c / cfg.band_center_hz
    n = cfg.n_virtual
    origin = np.array([-0.5 * (n - 1) * d, 0.0, 0.0])
    return FabricGeometry(origin, np.array([1.0, 0.0, 0.0]), d, n)


def make_ctx(cfg=None, sample_rate=2.0e6, pad=4, window="hann",
             c=C3) -> AcquisitionContext:
    if cfg is None:
        cfg = make_fabric()
    return AcquisitionContext(cfg=cfg, geometry=make_geometry(cfg, c),
                              sample_rate_hz=sample_rate, pad_factor=pad,
                              window=window, c_mps=c)


def unit_scene(position=(0.0, 0.0, 2.0), matrix=IDENTITY, **kw) -> Scene:
    return Scene([PointScatterer(tuple(position), matrix)], **kw)


def make_point(center_hz, bw_hz, duration_s, position=(0.0, 0.0, 0.0),
               chain=0, module=0, index=0, pol="H", slot=0) -> ControlPoint:
    return ControlPoint(
        f=FrequencyState(index=index, center_hz=center_hz,
                         chirp_bandwidth_hz=bw_hz),
        q=ApertureState(chain_id=chain, module_id=module,
                        element_position_m=np.asarray(position, float)),
        s=WaveformState(chirp_duration_s=duration_s, pol_tx=pol,
                        slot_index=slot),
    )


def make_chirp(center_hz=60.5e9, bw_hz=300.0e6, duration_s=2.0e-5,
               sample_rate_hz=2.0e6) -> ChirpConfig:
    return ChirpConfig.create(center_hz, bw_hz, duration_s, sample_rate_hz)


def fft_peak_frequency(samples: np.ndarray, sample_rate_hz: float,
                       pad: int = 8) -> float:
    """Independent beat-frequency readout: padded FFT magnitude peak."""
    n_fft = pad * len(samples)
    spec = np.abs(np.fft.fft(samples, n=n_fft))
    return float(np.argmax(spec)) * sample_rate_hz / n_fft


# ---------------------------------------------------------------------------
# schedule oracle: direct enumeration and first-principles validity predicate

def oracle_schedule_valid(assignment, cfg: FabricConfig, plan) -> bool:
    """Validity of one single-pol assignment, checked from first principles.

    assignment[slot][chain] = (module, step).  Valid iff every chain covers
    every (module, step) exactly once across the slots and no two chirp
    bands sharing a slot overlap.
    """
    n_slots = len(assignment)
    states = [(m, p) for m in range(cfg.m_modules) for p in range(cfg.p_steps)]
    for chain in range(cfg.k_chains):
        seen = [assignment[s][chain] for s in range(n_slots)]
        if sorted(seen) != sorted(states):
            return False
    for s in range(n_slots):
        bands = []
        for chain in range(cfg.k_chains):
            m, p = assignment[s][chain]
            bands.append(plan.chirp_band(chain, m, p))
        bands.sort()
        for (lo1, hi1), (lo2, hi2) in zip(bands, bands[1:]):
            if lo2 < hi1 - 1e-3:
                return False
    return True


def enumerate_assignments(cfg: FabricConfig, n_slots: int):
    """Every possible single-pol assignment of (module, step) per chain per slot."""
    states = [(m, p) for m in range(cfg.m_modules) for p in range(cfg.p_steps)]
    per_slot = list(itertools.product(states, repeat=cfg.k_chains))
    return itertools.product(per_slot, repeat=n_slots)


def assignment_to_schedule(assignment, cfg: FabricConfig, plan,
                           pol="H") -> Schedule:
    entries = []
    for slot, per_chain in enumerate(assignment):
        for chain, (m, p) in enumerate(per_chain):
            entries.append(ScheduleEntry(slot, chain, m, p, pol))
    return Schedule(entries=entries, n_slots=len(assignment), cfg=cfg, plan=plan)


def schedule_to_assignment(sched: Schedule):
    """Canonical form of a single-pol schedule for set membership tests."""
    per_slot = {}
    for e in sched.entries:
        per_slot.setdefault(e.slot, {})[e.chain_id] = (e.module_id, e.step)
    return tuple(
        tuple(per_slot[s][k] for k in sorted(per_slot[s]))
        for s in sorted(per_slot)
    )


def tiny_plan(cfg: FabricConfig):
    return partition_band(cfg)

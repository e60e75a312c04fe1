"""Interference-free activation planning for the module fabric.

K RF chains drive K modules concurrently.  The system band is tiled into
K*M equal contiguous subbands, one per (chain, module) pair, assigned
chain-major then module-minor in ascending frequency.  Inside its subband
each of the P frequency steps owns a width/P slice with the chirp band
centered in it, so any two concurrently active states are spectrally
disjoint by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .scene import POLARIZATIONS
from .validation import Verdict


@dataclass(frozen=True)
class FabricConfig:
    """Dimensions and band budget of one fabric deployment."""

    k_chains: int
    m_modules: int
    p_steps: int
    band_lo_hz: float
    band_hi_hz: float
    chirp_bandwidth_hz: float
    chirp_duration_s: float

    def __post_init__(self) -> None:
        if min(self.k_chains, self.m_modules, self.p_steps) < 1:
            raise ValueError("k_chains, m_modules and p_steps must all be >= 1")
        if self.band_hi_hz <= self.band_lo_hz:
            raise ValueError("band_hi_hz must exceed band_lo_hz")
        if self.band_lo_hz <= 0.0:
            raise ValueError("band_lo_hz must be positive")
        if self.chirp_bandwidth_hz <= 0.0:
            raise ValueError("chirp_bandwidth_hz must be positive")
        if self.chirp_duration_s <= 0.0:
            raise ValueError("chirp_duration_s must be positive")

    @property
    def n_virtual(self) -> int:
        return self.k_chains * self.m_modules * self.p_steps

    @property
    def subband_width_hz(self) -> float:
        return (self.band_hi_hz - self.band_lo_hz) / (self.k_chains * self.m_modules)

    @property
    def step_width_hz(self) -> float:
        return self.subband_width_hz / self.p_steps

    @property
    def band_center_hz(self) -> float:
        return 0.5 * (self.band_lo_hz + self.band_hi_hz)


@dataclass
class SubbandPlan:
    """Concrete frequency assignment for every (chain, module, step)."""

    subbands: dict          # (chain, module) -> (lo_hz, hi_hz)
    centers: dict           # (chain, module, step) -> center_hz
    chirp_bandwidth_hz: float

    def band(self, chain: int, module: int) -> tuple[float, float]:
        return self.subbands[(chain, module)]

    def center(self, chain: int, module: int, step: int) -> float:
        return self.centers[(chain, module, step)]

    def chirp_band(self, chain: int, module: int, step: int) -> tuple[float, float]:
        c = self.center(chain, module, step)
        half = 0.5 * self.chirp_bandwidth_hz
        return (c - half, c + half)


def partition_band(cfg: FabricConfig) -> SubbandPlan:
    """Tile the system band into per-(chain, module) subbands and step centers.

    Raises ValueError("chirp does not fit subband step") when the chirp
    bandwidth exceeds the width/P slice owned by a single frequency step.
    """
    width = cfg.subband_width_hz
    step_width = cfg.step_width_hz
    if cfg.chirp_bandwidth_hz > step_width * (1.0 + 1e-12):
        raise ValueError("chirp does not fit subband step")
    subbands = {}
    centers = {}
    for chain in range(cfg.k_chains):
        for module in range(cfg.m_modules):
            lo = cfg.band_lo_hz + (chain * cfg.m_modules + module) * width
            subbands[(chain, module)] = (lo, lo + width)
            for step in range(cfg.p_steps):
                centers[(chain, module, step)] = lo + (step + 0.5) * step_width
    return SubbandPlan(subbands=subbands, centers=centers,
                       chirp_bandwidth_hz=cfg.chirp_bandwidth_hz)


@dataclass(frozen=True)
class ScheduleEntry:
    slot: int
    chain_id: int
    module_id: int
    step: int
    pol_tx: str


@dataclass
class Schedule:
    """Slot-by-slot activation plan plus the frequency plan that backs it."""

    entries: list[ScheduleEntry]
    n_slots: int
    cfg: FabricConfig
    plan: SubbandPlan


def build_schedule(cfg: FabricConfig, pol_states: list[str]) -> Schedule:
    """Round-robin frame builder.

    One single-pol frame spans M*P slots: modules rotate in the outer loop
    and frequency steps in the inner loop, with all K chains active in
    every slot on their own subbands.  The frame is repeated verbatim for
    each entry of pol_states (a dual-pol run serializes all-H then all-V).
    """
    if not pol_states:
        raise ValueError("pol_states must not be empty")
    for pol in pol_states:
        if pol not in POLARIZATIONS:
            raise ValueError(f"unknown polarization {pol!r}")
    plan = partition_band(cfg)
    frame_len = cfg.m_modules * cfg.p_steps
    entries = []
    for frame_idx, pol in enumerate(pol_states):
        base = frame_idx * frame_len
        for module in range(cfg.m_modules):
            for step in range(cfg.p_steps):
                slot = base + module * cfg.p_steps + step
                for chain in range(cfg.k_chains):
                    entries.append(ScheduleEntry(slot, chain, module, step, pol))
    return Schedule(entries=entries, n_slots=len(pol_states) * frame_len,
                    cfg=cfg, plan=plan)


def _bands_overlap(a: tuple[float, float], b: tuple[float, float], tol: float) -> bool:
    lo = max(a[0], b[0])
    hi = min(a[1], b[1])
    return hi - lo > tol


def validate_schedule(sched: Schedule, plan: SubbandPlan, cfg: FabricConfig) -> Verdict:
    """Check the five schedule postconditions; first violation wins.

    (a) each slot activates exactly one (module, step) per chain with all
        K chains concurrent, (b) every (chain, module, step) appears exactly
        once per frame, (c) a frame spans M*P slots, (d) frames are
        single-pol repetitions, (e) concurrent chirp bands are disjoint.
    """
    frame_len = cfg.m_modules * cfg.p_steps
    if sched.n_slots < 1 or sched.n_slots % frame_len != 0:
        return Verdict.failed(
            f"slot count {sched.n_slots} is not a whole number of {frame_len}-slot frames")

    for idx, e in enumerate(sched.entries):
        if not 0 <= e.slot < sched.n_slots:
            return Verdict.failed(f"entry slot {e.slot} out of range", entry_index=idx)
        if not 0 <= e.chain_id < cfg.k_chains:
            return Verdict.failed(f"entry chain {e.chain_id} out of range", entry_index=idx)
        if not 0 <= e.module_id < cfg.m_modules:
            return Verdict.failed(f"entry module {e.module_id} out of range", entry_index=idx)
        if not 0 <= e.step < cfg.p_steps:
            return Verdict.failed(f"entry step {e.step} out of range", entry_index=idx)
        if e.pol_tx not in POLARIZATIONS:
            return Verdict.failed(f"entry polarization {e.pol_tx!r} unknown", entry_index=idx)

    by_slot: dict[int, list[ScheduleEntry]] = {s: [] for s in range(sched.n_slots)}
    for e in sched.entries:
        by_slot[e.slot].append(e)

    for slot in range(sched.n_slots):
        chains_seen = set()
        for e in by_slot[slot]:
            if e.chain_id in chains_seen:
                return Verdict.failed(
                    f"chain {e.chain_id} activated more than once in slot {slot}", slot=slot)
            chains_seen.add(e.chain_id)
        if len(chains_seen) != cfg.k_chains:
            missing = sorted(set(range(cfg.k_chains)) - chains_seen)
            return Verdict.failed(
                f"chain {missing[0]} idle in slot {slot}", slot=slot)

    n_frames = sched.n_slots // frame_len
    all_states = {(k, m, p)
                  for k in range(cfg.k_chains)
                  for m in range(cfg.m_modules)
                  for p in range(cfg.p_steps)}
    for f in range(n_frames):
        frame_entries = [e for s in range(f * frame_len, (f + 1) * frame_len)
                         for e in by_slot[s]]
        pols = {e.pol_tx for e in frame_entries}
        if len(pols) > 1:
            return Verdict.failed(f"mixed polarization in frame {f}", slot=f * frame_len)
        states = [(e.chain_id, e.module_id, e.step) for e in frame_entries]
        missing = all_states - set(states)
        if missing:
            k, m, p = sorted(missing)[0]
            return Verdict.failed(
                f"incomplete frame coverage: (chain {k}, module {m}, step {p}) "
                f"missing from frame {f}", slot=f * frame_len)
        if len(states) != len(set(states)):
            dup = sorted(s for s in set(states) if states.count(s) > 1)[0]
            return Verdict.failed(
                f"state (chain {dup[0]}, module {dup[1]}, step {dup[2]}) "
                f"repeated in frame {f}", slot=f * frame_len)

    tol = 1e-9 * (cfg.band_hi_hz - cfg.band_lo_hz)
    for slot in range(sched.n_slots):
        entries = by_slot[slot]
        bands = [plan.chirp_band(e.chain_id, e.module_id, e.step) for e in entries]
        order = sorted(range(len(bands)), key=lambda i: bands[i][0])
        for a, b in zip(order, order[1:]):
            if _bands_overlap(bands[a], bands[b], tol):
                return Verdict.failed(f"spectral collision in slot {slot}", slot=slot)

    return Verdict.passed()


def frame_duration(sched: Schedule, cfg: FabricConfig) -> float:
    """Wall-clock span of the schedule: one complete chirp per slot."""
    return sched.n_slots * cfg.chirp_duration_s


def schedule_rows(sched: Schedule) -> list[dict]:
    """Flat export rows, one per entry, ordered by (slot, chain)."""
    rows = []
    for e in sorted(sched.entries, key=lambda e: (e.slot, e.chain_id)):
        rows.append({
            "slot": e.slot,
            "chain": e.chain_id,
            "module": e.module_id,
            "step": e.step,
            "center_hz": sched.plan.center(e.chain_id, e.module_id, e.step),
            "chirp_bw_hz": sched.plan.chirp_bandwidth_hz,
            "pol_tx": e.pol_tx,
        })
    return rows

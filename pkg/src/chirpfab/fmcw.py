"""Dechirped FMCW acquisition of one control point.

Stop-and-hop point-target model.  After mixing with the transmit chirp, a
scatterer at range R contributes a complex tone

    a * exp(j 2 pi f_b t) * exp(-j 2 pi f_c * 2 R / c),   f_b = 2 R * slope / c

where a is the scattering entry selected by the polarization pair and f_c
is the chirp center frequency.  Residual video phase is neglected, which
holds for the desk-scale ranges and chirp slopes simulated here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .control import ControlPoint
from .scene import POLARIZATIONS, Scene, range_to

C_MPS = 299_792_458.0  # exact by definition; scenarios may round to 3e8

NOISE_KINDS = ("none", "complex_gaussian")


@dataclass(frozen=True)
class ChirpConfig:
    """Fast-time sampling of a single dechirped chirp."""

    center_hz: float
    bandwidth_hz: float
    duration_s: float
    sample_rate_hz: float
    n_samples: int

    def __post_init__(self) -> None:
        if min(self.center_hz, self.bandwidth_hz, self.duration_s,
               self.sample_rate_hz) <= 0.0:
            raise ValueError("chirp parameters must be positive")
        if self.n_samples < 2:
            raise ValueError("chirp needs at least 2 samples")

    @classmethod
    def create(cls, center_hz: float, bandwidth_hz: float, duration_s: float,
               sample_rate_hz: float) -> "ChirpConfig":
        n = int(round(duration_s * sample_rate_hz))
        return cls(center_hz, bandwidth_hz, duration_s, sample_rate_hz, n)

    @property
    def slope_hz_per_s(self) -> float:
        return self.bandwidth_hz / self.duration_s

    @property
    def times_s(self) -> np.ndarray:
        return np.arange(self.n_samples) / self.sample_rate_hz


@dataclass(frozen=True)
class NoiseConfig:
    """Receiver noise model.

    snr_db is referenced to the per-sample power of a unit-amplitude
    scatterer, so kind="complex_gaussian" with snr_db=20 puts the noise
    floor 20 dB under a |s|=1 return.  The stream is derived from
    (seed, control-point coordinates, receive pol), so every chirp gets an
    independent reproducible stream no matter in what order it is run.
    """

    kind: str = "none"
    snr_db: float = float("inf")
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in NOISE_KINDS:
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if self.seed < 0:
            raise ValueError("noise seed must be non-negative")


NOISE_NONE = NoiseConfig(kind="none")


@dataclass
class BeatSignal:
    """Complex baseband samples of one dechirped chirp."""

    samples: np.ndarray
    chirp: ChirpConfig
    state: ControlPoint
    pol_rx: str


def beat_frequency(range_m: float, slope_hz_per_s: float, c_mps: float = C_MPS) -> float:
    """Dechirped beat frequency of a point target: f_b = 2 R slope / c."""
    return 2.0 * range_m * slope_hz_per_s / c_mps


def range_resolution(bandwidth_hz: float, c_mps: float = C_MPS) -> float:
    """Rayleigh range resolution of a bandwidth B: c / (2 B)."""
    if bandwidth_hz <= 0.0:
        raise ValueError("bandwidth must be positive")
    return c_mps / (2.0 * bandwidth_hz)


def _noise_stream(noise: NoiseConfig, u: ControlPoint, pol_rx: str,
                  n_samples: int) -> np.ndarray:
    power = 10.0 ** (-noise.snr_db / 10.0)
    key = [noise.seed, u.s.slot_index, u.q.chain_id, u.q.module_id,
           u.f.index, POLARIZATIONS.index(u.s.pol_tx), POLARIZATIONS.index(pol_rx)]
    rng = np.random.default_rng(key)
    scale = np.sqrt(power / 2.0)
    return scale * (rng.standard_normal(n_samples)
                    + 1j * rng.standard_normal(n_samples))


def simulate_state(u: ControlPoint, scene: Scene, chirp: ChirpConfig,
                   noise: NoiseConfig = NOISE_NONE, pol_rx: str = "H",
                   c_mps: float = C_MPS) -> BeatSignal:
    """Simulate the dechirped return of one control point.

    The chirp must be centered at the point's frequency state.  Each
    scatterer contributes the tone above with amplitude picked from its
    scattering matrix by (u.s.pol_tx, pol_rx); a zero entry contributes
    nothing.  Output is deterministic given the noise config.
    """
    if pol_rx not in POLARIZATIONS:
        raise ValueError(f"unknown receive polarization {pol_rx!r}")
    if chirp.center_hz != u.f.center_hz:
        raise ValueError("chirp band is not centered at the control point's "
                         "frequency state")
    t = chirp.times_s
    acc = np.zeros(chirp.n_samples, dtype=complex)
    for sc in scene.scatterers:
        a = sc.scattering.entry(u.s.pol_tx, pol_rx)
        if a == 0:
            continue
        r = range_to(sc, u.q.element_position_m)
        if scene.spreading_loss:
            a = a / (r * r)
        f_b = beat_frequency(r, chirp.slope_hz_per_s, c_mps)
        carrier_phase = -4.0 * np.pi * chirp.center_hz * r / c_mps
        acc += a * np.exp(1j * (2.0 * np.pi * f_b * t + carrier_phase))
    if noise.kind == "complex_gaussian":
        acc = acc + _noise_stream(noise, u, pol_rx, chirp.n_samples)
    return BeatSignal(samples=acc, chirp=chirp, state=u, pol_rx=pol_rx)

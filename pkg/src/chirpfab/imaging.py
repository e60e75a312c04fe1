"""Range compression and coherent back-projection over the virtual aperture.

Every (chain, module, step) state is one virtual element with its own
position on the fabric and its own chirp carrier.  Back-projection

    I(p) = sum_v P_v(r_v(p)) * exp(+j 2 pi f_v * 2 r_v(p) / c)

evaluates each element's range profile at the element-to-pixel distance
and re-applies that element's carrier phase, so the disjoint subbands
fuse coherently without any resampling to a common grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .control import ControlPoint
from .fmcw import C_MPS, BeatSignal
from .geometry import FabricGeometry
from .scheduling import FabricConfig, SubbandPlan, partition_band

WINDOWS = {
    "hann": np.hanning,
    "hamming": np.hamming,
    "rect": np.ones,
}


@dataclass
class VirtualElement:
    """One synthesized aperture position and the carrier it radiated."""

    index: int
    position_m: np.ndarray
    carrier_hz: float
    chain_id: int
    module_id: int
    step: int

    def __post_init__(self) -> None:
        self.position_m = np.asarray(self.position_m, dtype=float)


def map_state_to_element(chain: int, module: int, step: int, cfg: FabricConfig,
                         geometry: FabricGeometry,
                         plan: SubbandPlan | None = None) -> VirtualElement:
    """Flatten a fabric state to its virtual element.

    v = chain * M * P + module * P + step, placed at origin + v * d along
    the aperture axis, carrying that state's subband-slice center.
    """
    if not 0 <= chain < cfg.k_chains:
        raise ValueError(f"chain {chain} outside [0, {cfg.k_chains})")
    if not 0 <= module < cfg.m_modules:
        raise ValueError(f"module {module} outside [0, {cfg.m_modules})")
    if not 0 <= step < cfg.p_steps:
        raise ValueError(f"step {step} outside [0, {cfg.p_steps})")
    if plan is None:
        plan = partition_band(cfg)
    v = chain * cfg.m_modules * cfg.p_steps + module * cfg.p_steps + step
    return VirtualElement(
        index=v,
        position_m=geometry.element_position(v),
        carrier_hz=plan.center(chain, module, step),
        chain_id=chain,
        module_id=module,
        step=step,
    )


@dataclass
class RangeProfile:
    """Range-compressed chirp: windowed zero-padded FFT of the beat signal."""

    values: np.ndarray
    bin_size_m: float
    state: ControlPoint
    pol_rx: str

    @property
    def n_bins(self) -> int:
        return len(self.values)

    @property
    def range_axis_m(self) -> np.ndarray:
        return np.arange(self.n_bins) * self.bin_size_m

    @property
    def max_range_m(self) -> float:
        return (self.n_bins - 1) * self.bin_size_m

    def interp(self, ranges_m: np.ndarray) -> np.ndarray:
        """Linear interpolation of the complex profile at arbitrary ranges."""
        r = np.asarray(ranges_m, dtype=float)
        if np.any(r < 0.0) or np.any(r > self.max_range_m):
            raise ValueError("range exceeds profile support")
        pos = r / self.bin_size_m
        lo = np.floor(pos).astype(int)
        lo = np.minimum(lo, self.n_bins - 2)
        frac = pos - lo
        return self.values[lo] * (1.0 - frac) + self.values[lo + 1] * frac


def range_profile(sig: BeatSignal, pad_factor: int = 4, window: str = "hann",
                  c_mps: float = C_MPS) -> RangeProfile:
    """Range-compress one beat signal.

    The beat axis maps to range through r = f * c / (2 * slope); with
    n_samples = duration * sample_rate the padded bin size is
    c / (2 * chirp_bandwidth * pad_factor).
    """
    if pad_factor < 1:
        raise ValueError("pad_factor must be >= 1")
    if window not in WINDOWS:
        raise ValueError(f"unknown window {window!r}")
    n = sig.chirp.n_samples
    w = WINDOWS[window](n)
    n_fft = pad_factor * n
    spectrum = np.fft.fft(w * sig.samples, n=n_fft)
    freq_step = sig.chirp.sample_rate_hz / n_fft
    bin_size = freq_step * c_mps / (2.0 * sig.chirp.slope_hz_per_s)
    return RangeProfile(values=spectrum, bin_size_m=bin_size,
                        state=sig.state, pol_rx=sig.pol_rx)


@dataclass(frozen=True)
class GridSpec:
    """Regular imaging grid in the y = 0 plane."""

    x_min_m: float
    x_max_m: float
    x_step_m: float
    z_min_m: float
    z_max_m: float
    z_step_m: float

    def __post_init__(self) -> None:
        if self.x_step_m <= 0.0 or self.z_step_m <= 0.0:
            raise ValueError("grid steps must be positive")
        if self.x_max_m < self.x_min_m or self.z_max_m < self.z_min_m:
            raise ValueError("grid extents must be ordered")

    @property
    def x_axis_m(self) -> np.ndarray:
        n = int(round((self.x_max_m - self.x_min_m) / self.x_step_m)) + 1
        return self.x_min_m + np.arange(n) * self.x_step_m

    @property
    def z_axis_m(self) -> np.ndarray:
        n = int(round((self.z_max_m - self.z_min_m) / self.z_step_m)) + 1
        return self.z_min_m + np.arange(n) * self.z_step_m

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.x_axis_m), len(self.z_axis_m))

    def points(self) -> np.ndarray:
        """All grid points as an (n_pixels, 3) array, x-major order."""
        xs, zs = np.meshgrid(self.x_axis_m, self.z_axis_m, indexing="ij")
        pts = np.zeros((xs.size, 3))
        pts[:, 0] = xs.ravel()
        pts[:, 2] = zs.ravel()
        return pts


@dataclass
class ImageGrid:
    """Back-projected complex image, one 2-D array per polarimetric channel.

    Channel keys use receive-then-transmit subscripts ("hv" is received on
    H while V transmitted), matching the scattering entry they estimate.
    """

    spec: GridSpec
    channels: dict

    def channel(self, key: str) -> np.ndarray:
        return self.channels[key]

    def total_power(self) -> np.ndarray:
        out = np.zeros(self.spec.shape)
        for img in self.channels.values():
            out += np.abs(img) ** 2
        return out

    def peak_position(self) -> tuple[float, float]:
        """(x, z) of the strongest total-power pixel."""
        power = self.total_power()
        ix, iz = np.unravel_index(int(np.argmax(power)), power.shape)
        return (float(self.spec.x_axis_m[ix]), float(self.spec.z_axis_m[iz]))


def backproject_at(profiles: list, points_m: np.ndarray,
                   c_mps: float = C_MPS) -> np.ndarray:
    """Coherent back-projection onto arbitrary points.

    profiles is a list of (VirtualElement, RangeProfile) pairs sharing one
    polarimetric channel and fast-time configuration.  Raises when any
    point falls beyond a profile's unambiguous range.
    """
    pts = np.atleast_2d(np.asarray(points_m, dtype=float))
    acc = np.zeros(len(pts), dtype=complex)
    for elem, prof in profiles:
        r = np.linalg.norm(pts - elem.position_m[None, :], axis=1)
        vals = prof.interp(r)
        acc += vals * np.exp(1j * 4.0 * np.pi * elem.carrier_hz * r / c_mps)
    return acc


def backproject(profiles: list, spec: GridSpec, c_mps: float = C_MPS) -> ImageGrid:
    """Back-project one channel's profiles onto a regular grid."""
    if not profiles:
        raise ValueError("no profiles to back-project")
    channels = {(p.state.s.pol_tx, p.pol_rx) for _, p in profiles}
    if len(channels) > 1:
        raise ValueError("profiles mix polarimetric channels")
    key = profiles[0][1].state.channel_key(profiles[0][1].pol_rx)

    max_support = min(prof.max_range_m for _, prof in profiles)
    corners = np.array([[x, 0.0, z]
                        for x in (spec.x_min_m, spec.x_max_m)
                        for z in (spec.z_min_m, spec.z_max_m)])
    for elem, _ in profiles:
        reach = np.linalg.norm(corners - elem.position_m[None, :], axis=1)
        if float(np.max(reach)) > max_support:
            raise ValueError("grid exceeds range support")

    values = backproject_at(profiles, spec.points(), c_mps)
    return ImageGrid(spec=spec, channels={key: values.reshape(spec.shape)})


def coherent_gain(profiles: list, point_m, c_mps: float = C_MPS) -> float:
    """Coherent-to-single-element magnitude ratio at one point.

    Back-projects the full aperture at the point and divides by the mean
    per-element magnitude there; an ideal focus over N elements returns N.
    """
    pt = np.asarray(point_m, dtype=float).reshape(1, 3)
    total = abs(backproject_at(profiles, pt, c_mps)[0])
    singles = []
    for elem, prof in profiles:
        r = float(np.linalg.norm(pt[0] - elem.position_m))
        singles.append(abs(prof.interp(np.array([r]))[0]))
    mean_single = float(np.mean(singles))
    if mean_single == 0.0:
        return 0.0
    return total / mean_single


def merge_channels(images: list[ImageGrid]) -> ImageGrid:
    """Combine single-channel images over one grid into a multichannel image."""
    spec = images[0].spec
    channels = {}
    for img in images:
        if img.spec != spec:
            raise ValueError("images use different grids")
        channels.update(img.channels)
    return ImageGrid(spec=spec, channels=channels)


@dataclass
class AngularSpectrum:
    """Slow-time spectrum across the virtual aperture at one range bin."""

    values: np.ndarray
    sin_theta_axis: np.ndarray
    ref_carrier_hz: float
    bin_width_sin_theta: float

    def peak_sin_theta(self) -> float:
        return float(self.sin_theta_axis[int(np.argmax(np.abs(self.values)))])


def angular_spectrum(profiles: list, range_bin: int, pad_factor: int = 8,
                     c_mps: float = C_MPS) -> AngularSpectrum:
    """Quick-look angular transform at one range bin.

    Each element's profile sample is phase-compensated with its own carrier
    at the range-bin center, then an FFT runs across the element index.
    The angle axis is referenced to the mean carrier.  Accurate when the
    dominant return sits near the bin center; a return offset from the bin
    center leaks a residual carrier-dependent phase ramp across elements,
    the usual stepped-frequency range-angle coupling.

    All virtual elements must be present; absent indices raise.
    """
    n = len(profiles)
    if n == 0:
        raise ValueError("no profiles given")
    by_index = {elem.index: (elem, prof) for elem, prof in profiles}
    missing = [v for v in range(n) if v not in by_index]
    if missing:
        raise ValueError(f"missing virtual elements {missing}")
    ordered = [by_index[v] for v in range(n)]

    bin_size = ordered[0][1].bin_size_m
    if not 0 <= range_bin < ordered[0][1].n_bins:
        raise ValueError(f"range bin {range_bin} outside profile")
    r_bin = range_bin * bin_size

    z = np.array([prof.values[range_bin]
                  * np.exp(1j * 4.0 * np.pi * elem.carrier_hz * r_bin / c_mps)
                  for elem, prof in ordered])
    carriers = np.array([elem.carrier_hz for elem, _ in ordered])
    f_ref = float(np.mean(carriers))

    positions = np.stack([elem.position_m for elem, _ in ordered])
    spacings = np.linalg.norm(np.diff(positions, axis=0), axis=1)
    d = float(np.mean(spacings)) if len(spacings) else 1.0

    n_fft = pad_factor * n
    spec = np.fft.fftshift(np.fft.fft(z, n=n_fft))
    nu = np.fft.fftshift(np.fft.fftfreq(n_fft))  # cycles per element
    # two-way phase per element: 4 pi f_ref d sin(theta) / c = 2 pi nu
    sin_theta = nu * c_mps / (2.0 * d * f_ref)
    bin_width = (1.0 / n) * c_mps / (2.0 * d * f_ref)
    return AngularSpectrum(values=spec, sin_theta_axis=sin_theta,
                           ref_carrier_hz=f_ref, bin_width_sin_theta=bin_width)

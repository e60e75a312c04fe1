"""Strict JSON scenario configs for the command-line harness.

Unknown fields are rejected everywhere and validation reports every
problem it finds in one pass, each tagged with its field path.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .fmcw import C_MPS, ChirpConfig, NoiseConfig
from .geometry import FabricGeometry
from .imaging import GridSpec
from .polarimetry import AcquisitionContext
from .scene import PointScatterer, ScatteringMatrix, Scene, reciprocity_violations
from .scheduling import FabricConfig

PRESETS = {"case-study": "case_study.json"}


class ConfigError(Exception):
    """Carries every validation failure found in a config."""

    def __init__(self, errors: list[str]):
        self.errors = list(errors)
        super().__init__("invalid config:\n" + "\n".join(f"  - {e}" for e in self.errors))


@dataclass
class ScenarioConfig:
    name: str
    fabric: FabricConfig
    geometry: FabricGeometry
    scene: Scene
    noise: NoiseConfig
    grid: GridSpec
    sample_rate_hz: float
    pad_factor: int
    window: str
    c_mps: float
    seed: int
    canonical: dict

    def config_hash(self) -> str:
        payload = json.dumps(self.canonical, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def context(self) -> AcquisitionContext:
        return AcquisitionContext(
            cfg=self.fabric,
            geometry=self.geometry,
            sample_rate_hz=self.sample_rate_hz,
            pad_factor=self.pad_factor,
            window=self.window,
            c_mps=self.c_mps,
        )


def preset_path(name: str) -> Path:
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; available: {sorted(PRESETS)}")
    return Path(str(resources.files("chirpfab").joinpath("presets", PRESETS[name])))


class _Parser:
    """Collects typed values and every validation error with field paths."""

    def __init__(self):
        self.errors: list[str] = []

    def fail(self, path: str, message: str) -> None:
        self.errors.append(f"{path}: {message}")

    def section(self, obj: dict, path: str, required: set, optional: set) -> bool:
        if not isinstance(obj, dict):
            self.fail(path, "must be an object")
            return False
        ok = True
        for key in obj:
            if key not in required and key not in optional:
                self.fail(f"{path}.{key}" if path else key, "unknown field")
                ok = False
        for key in required:
            if key not in obj:
                self.fail(f"{path}.{key}" if path else key, "missing required field")
                ok = False
        return ok

    def number(self, obj: dict, key: str, path: str, default=None):
        if key not in obj:
            return default
        val = obj[key]
        if isinstance(val, bool) or not isinstance(val, (int, float)):
            self.fail(f"{path}.{key}", "must be a number")
            return default
        if not np.isfinite(val):
            self.fail(f"{path}.{key}", "must be finite")
            return default
        return float(val)

    def integer(self, obj: dict, key: str, path: str, default=None):
        if key not in obj:
            return default
        val = obj[key]
        if isinstance(val, bool) or not isinstance(val, int):
            self.fail(f"{path}.{key}", "must be an integer")
            return default
        return val

    def string(self, obj: dict, key: str, path: str, default=None):
        if key not in obj:
            return default
        val = obj[key]
        if not isinstance(val, str):
            self.fail(f"{path}.{key}", "must be a string")
            return default
        return val

    def boolean(self, obj: dict, key: str, path: str, default=None):
        if key not in obj:
            return default
        val = obj[key]
        if not isinstance(val, bool):
            self.fail(f"{path}.{key}", "must be a boolean")
            return default
        return val

    def vec3(self, obj: dict, key: str, path: str, default=None):
        if key not in obj:
            return default
        val = obj[key]
        if (not isinstance(val, list) or len(val) != 3
                or any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in val)):
            self.fail(f"{path}.{key}", "must be a 3-element array of numbers")
            return default
        return [float(x) for x in val]

    def complex_pair(self, val, path: str):
        if (not isinstance(val, list) or len(val) != 2
                or any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in val)):
            self.fail(path, "must be a [re, im] pair")
            return None
        return complex(float(val[0]), float(val[1]))


def parse_config(obj: dict, source: str = "config",
                 seed_override: int | None = None) -> ScenarioConfig:
    """Parse and validate a scenario dict; raises ConfigError with every issue."""
    p = _Parser()
    if not isinstance(obj, dict):
        raise ConfigError([f"{source}: top level must be an object"])

    p.section(obj, "", required={"fabric", "geometry", "chirp", "scene", "grid"},
              optional={"noise", "constants", "seed", "name"})

    seed = p.integer(obj, "seed", "", default=0)
    if seed is not None and seed < 0:
        p.fail("seed", "must be non-negative")
        seed = 0
    if seed_override is not None:
        seed = seed_override
    name = p.string(obj, "name", "", default="")

    c_mps = C_MPS
    constants = obj.get("constants", {})
    if p.section(constants, "constants", required=set(), optional={"c_mps"}):
        val = p.number(constants, "c_mps", "constants", default=C_MPS)
        if val is not None:
            if val <= 0:
                p.fail("constants.c_mps", "must be positive")
            else:
                c_mps = val

    # fabric
    fabric = None
    fab = obj.get("fabric", {})
    fab_keys = {"k_chains", "m_modules", "p_steps", "band_lo_hz", "band_hi_hz",
                "chirp_bandwidth_hz", "chirp_duration_s"}
    if p.section(fab, "fabric", required=fab_keys, optional=set()):
        k = p.integer(fab, "k_chains", "fabric")
        m = p.integer(fab, "m_modules", "fabric")
        steps = p.integer(fab, "p_steps", "fabric")
        lo = p.number(fab, "band_lo_hz", "fabric")
        hi = p.number(fab, "band_hi_hz", "fabric")
        bw = p.number(fab, "chirp_bandwidth_hz", "fabric")
        dur = p.number(fab, "chirp_duration_s", "fabric")
        if None not in (k, m, steps, lo, hi, bw, dur):
            if k < 1:
                p.fail("fabric.k_chains", "must be >= 1")
            if m < 1:
                p.fail("fabric.m_modules", "must be >= 1")
            if steps < 1:
                p.fail("fabric.p_steps", "must be >= 1")
            if lo <= 0:
                p.fail("fabric.band_lo_hz", "must be positive")
            if hi <= lo:
                p.fail("fabric.band_hi_hz", "must exceed fabric.band_lo_hz")
            if bw <= 0:
                p.fail("fabric.chirp_bandwidth_hz", "must be positive")
            if dur <= 0:
                p.fail("fabric.chirp_duration_s", "must be positive")
            if not p.errors or all(not e.startswith("fabric") for e in p.errors):
                fabric = FabricConfig(k, m, steps, lo, hi, bw, dur)
                if bw > fabric.step_width_hz * (1.0 + 1e-12):
                    p.fail("fabric.chirp_bandwidth_hz",
                           f"chirp does not fit subband step "
                           f"({bw:.6g} Hz > {fabric.step_width_hz:.6g} Hz)")
                    fabric = None

    # geometry
    geometry = None
    geo = obj.get("geometry", {})
    if p.section(geo, "geometry", required={"aperture_origin_m", "aperture_direction",
                                            "element_spacing"}, optional=set()):
        origin = p.vec3(geo, "aperture_origin_m", "geometry")
        direction = p.vec3(geo, "aperture_direction", "geometry")
        spacing_raw = geo.get("element_spacing")
        spacing = None
        if isinstance(spacing_raw, str):
            if spacing_raw != "half-wavelength":
                p.fail("geometry.element_spacing",
                       'must be a positive number or "half-wavelength"')
            elif fabric is not None:
                spacing = 0.5 * c_mps / fabric.band_center_hz
        elif isinstance(spacing_raw, bool) or not isinstance(spacing_raw, (int, float)):
            p.fail("geometry.element_spacing",
                   'must be a positive number or "half-wavelength"')
        elif spacing_raw <= 0:
            p.fail("geometry.element_spacing", "must be positive")
        else:
            spacing = float(spacing_raw)
        if origin is not None and direction is not None and spacing is not None \
                and fabric is not None:
            if all(x == 0 for x in direction):
                p.fail("geometry.aperture_direction", "must be nonzero")
            else:
                geometry = FabricGeometry(np.array(origin), np.array(direction),
                                          spacing, fabric.n_virtual)

    # chirp sampling
    sample_rate = None
    pad_factor = 4
    window = "hann"
    ch = obj.get("chirp", {})
    if p.section(ch, "chirp", required={"sample_rate_hz"},
                 optional={"pad_factor", "window"}):
        sample_rate = p.number(ch, "sample_rate_hz", "chirp")
        if sample_rate is not None and sample_rate <= 0:
            p.fail("chirp.sample_rate_hz", "must be positive")
            sample_rate = None
        pf = p.integer(ch, "pad_factor", "chirp", default=4)
        if pf is not None:
            if pf < 1:
                p.fail("chirp.pad_factor", "must be >= 1")
            else:
                pad_factor = pf
        win = p.string(ch, "window", "chirp", default="hann")
        if win is not None:
            from .imaging import WINDOWS
            if win not in WINDOWS:
                p.fail("chirp.window", f"must be one of {sorted(WINDOWS)}")
            else:
                window = win
    if fabric is not None and sample_rate is not None:
        n_samples = int(round(fabric.chirp_duration_s * sample_rate))
        if n_samples < 2:
            p.fail("chirp.sample_rate_hz",
                   "fewer than 2 samples per chirp at this duration")
            sample_rate = None

    # noise
    noise = NoiseConfig(kind="none", seed=seed)
    nz = obj.get("noise", {"kind": "none"})
    if p.section(nz, "noise", required={"kind"}, optional={"snr_db", "seed"}):
        kind = p.string(nz, "kind", "noise")
        if kind not in ("none", "complex_gaussian"):
            p.fail("noise.kind", 'must be "none" or "complex_gaussian"')
        else:
            nseed = p.integer(nz, "seed", "noise", default=seed)
            if nseed is not None and nseed < 0:
                p.fail("noise.seed", "must be non-negative")
                nseed = seed
            if seed_override is not None:
                nseed = seed_override
            if kind == "complex_gaussian":
                snr = p.number(nz, "snr_db", "noise")
                if snr is None and "snr_db" not in nz:
                    p.fail("noise.snr_db", "required when kind is complex_gaussian")
                elif snr is not None:
                    noise = NoiseConfig(kind=kind, snr_db=snr, seed=nseed)
            else:
                noise = NoiseConfig(kind="none", seed=nseed)

    # scene
    scene = None
    sc = obj.get("scene", {})
    if p.section(sc, "scene", required={"scatterers"},
                 optional={"name", "monostatic_reciprocity", "spreading_loss"}):
        scene_name = p.string(sc, "name", "scene", default="")
        reciprocity = p.boolean(sc, "monostatic_reciprocity", "scene", default=False)
        spreading = p.boolean(sc, "spreading_loss", "scene", default=False)
        raw_list = sc.get("scatterers")
        scatterers = []
        if not isinstance(raw_list, list):
            p.fail("scene.scatterers", "must be an array")
        else:
            for i, raw in enumerate(raw_list):
                path = f"scene.scatterers[{i}]"
                if not p.section(raw, path, required={"position", "scattering"},
                                 optional=set()):
                    continue
                pos = p.vec3(raw, "position", path)
                mat = raw.get("scattering")
                entries = {}
                if not p.section(mat, f"{path}.scattering",
                                 required={"hh", "hv", "vh", "vv"}, optional=set()):
                    continue
                for key in ("hh", "hv", "vh", "vv"):
                    val = p.complex_pair(mat.get(key), f"{path}.scattering.{key}")
                    if val is not None:
                        entries[key] = val
                if pos is None or len(entries) != 4:
                    continue
                if pos[1] != 0.0:
                    p.fail(f"{path}.position",
                           "scatterers must lie in the aperture plane (y = 0)")
                    continue
                matrix = ScatteringMatrix(entries["hh"], entries["hv"],
                                          entries["vh"], entries["vv"])
                if matrix.frobenius_norm() == 0.0:
                    p.fail(f"{path}.scattering", "must have a nonzero entry")
                    continue
                scatterers.append(PointScatterer(tuple(pos), matrix))
            if len(scatterers) == len(raw_list):
                scene = Scene(scatterers=scatterers, name=scene_name or "",
                              spreading_loss=bool(spreading))
                if reciprocity:
                    for i in reciprocity_violations(scene):
                        p.fail(f"scene.scatterers[{i}].scattering",
                               "monostatic reciprocity violated (s_hv != s_vh)")
                        scene = None

    # grid
    grid = None
    gr = obj.get("grid", {})
    grid_keys = {"x_min_m", "x_max_m", "x_step_m", "z_min_m", "z_max_m", "z_step_m"}
    if p.section(gr, "grid", required=grid_keys, optional=set()):
        vals = {key: p.number(gr, key, "grid") for key in grid_keys}
        if None not in vals.values():
            if vals["x_step_m"] <= 0:
                p.fail("grid.x_step_m", "must be positive")
            elif vals["z_step_m"] <= 0:
                p.fail("grid.z_step_m", "must be positive")
            elif vals["x_max_m"] < vals["x_min_m"] or vals["z_max_m"] < vals["z_min_m"]:
                p.fail("grid.x_max_m", "grid extents must be ordered")
            else:
                grid = GridSpec(vals["x_min_m"], vals["x_max_m"], vals["x_step_m"],
                                vals["z_min_m"], vals["z_max_m"], vals["z_step_m"])

    # grid must stay inside every profile's unambiguous range
    if None not in (fabric, geometry, grid) and sample_rate is not None:
        n_samples = int(round(fabric.chirp_duration_s * sample_rate))
        n_fft = pad_factor * n_samples
        slope = fabric.chirp_bandwidth_hz / fabric.chirp_duration_s
        bin_size = (sample_rate / n_fft) * c_mps / (2.0 * slope)
        support = (n_fft - 1) * bin_size
        corners = np.array([[x, 0.0, z]
                            for x in (grid.x_min_m, grid.x_max_m)
                            for z in (grid.z_min_m, grid.z_max_m)])
        reach = 0.0
        for v in range(fabric.n_virtual):
            pos = geometry.element_position(v)
            reach = max(reach, float(np.max(np.linalg.norm(corners - pos, axis=1))))
        if reach > support:
            p.fail("grid", f"grid exceeds range support "
                           f"({reach:.3f} m > {support:.3f} m unambiguous)")

    if p.errors:
        raise ConfigError(sorted(set(p.errors)))

    canonical = {
        "name": name,
        "seed": seed,
        "constants": {"c_mps": c_mps},
        "fabric": {
            "k_chains": fabric.k_chains, "m_modules": fabric.m_modules,
            "p_steps": fabric.p_steps, "band_lo_hz": fabric.band_lo_hz,
            "band_hi_hz": fabric.band_hi_hz,
            "chirp_bandwidth_hz": fabric.chirp_bandwidth_hz,
            "chirp_duration_s": fabric.chirp_duration_s,
        },
        "geometry": {
            "aperture_origin_m": [float(x) for x in geometry.aperture_origin_m],
            "aperture_direction": [float(x) for x in geometry.aperture_direction],
            "element_spacing_m": geometry.element_spacing_m,
        },
        "chirp": {"sample_rate_hz": sample_rate, "pad_factor": pad_factor,
                  "window": window},
        "noise": {"kind": noise.kind, "snr_db": noise.snr_db, "seed": noise.seed}
                 if noise.kind != "none" else {"kind": "none", "seed": noise.seed},
        "scene": {
            "name": scene.name, "spreading_loss": scene.spreading_loss,
            "scatterers": [
                {"position": list(s.position_m),
                 "scattering": {k: [getattr(s.scattering, f"s_{k}").real,
                                    getattr(s.scattering, f"s_{k}").imag]
                                for k in ("hh", "hv", "vh", "vv")}}
                for s in scene.scatterers],
        },
        "grid": {"x_min_m": grid.x_min_m, "x_max_m": grid.x_max_m,
                 "x_step_m": grid.x_step_m, "z_min_m": grid.z_min_m,
                 "z_max_m": grid.z_max_m, "z_step_m": grid.z_step_m},
    }
    return ScenarioConfig(
        name=name or "", fabric=fabric, geometry=geometry, scene=scene,
        noise=noise, grid=grid, sample_rate_hz=sample_rate,
        pad_factor=pad_factor, window=window, c_mps=c_mps, seed=seed,
        canonical=canonical,
    )


def load_config(path, seed_override: int | None = None) -> ScenarioConfig:
    """Load and validate a scenario JSON file."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError([f"{p}: cannot read file ({exc})"]) from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"{p}: invalid JSON ({exc})"]) from exc
    return parse_config(obj, source=str(p), seed_override=seed_override)

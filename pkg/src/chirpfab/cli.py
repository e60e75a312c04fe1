"""Command-line harness: compare, schedule, simulate, reconstruct.

Each run writes into its own output directory (config hash + timestamp
unless --out pins one).  Failures are atomic: partial outputs are removed.
Exit codes: 0 success, 1 config validation error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import report
from .architectures import case_study_trio, compare, render_text_table
from .fmcw import range_resolution
from .imaging import coherent_gain, map_state_to_element, range_profile
from .polarimetry import (
    CHANNEL_KEYS,
    acquire_pol_frame,
    build_world_model,
)
from .scenario import ConfigError, ScenarioConfig, load_config, preset_path
from .scene import POL_H, POL_V
from .scheduling import build_schedule, frame_duration, validate_schedule
from .control import trajectory_from_schedule
from .fmcw import simulate_state


class _Outputs:
    """Tracks what a run created so failures can be rolled back."""

    def __init__(self):
        self.files: list[Path] = []
        self.dirs: list[Path] = []

    def prepare_dir(self, path: Path) -> Path:
        to_create = []
        probe = path
        while not probe.exists():
            to_create.append(probe)
            probe = probe.parent
        path.mkdir(parents=True, exist_ok=True)
        self.dirs.extend(reversed(to_create))
        return path

    def path(self, base: Path, name: str) -> Path:
        p = base / name
        self.files.append(p)
        return p

    def cleanup(self) -> None:
        for f in self.files:
            try:
                f.unlink(missing_ok=True)
            except OSError:
                pass
        for d in reversed(self.dirs):
            try:
                d.rmdir()
            except OSError:
                pass

    def manifest(self, base: Path) -> list[str]:
        return sorted(str(f.relative_to(base)) for f in self.files if f.exists())


def _resolve_config_path(args) -> Path:
    if getattr(args, "config", None):
        return Path(args.config)
    return preset_path(args.preset)


def _out_dir(args, tag: str) -> Path:
    if args.out:
        return Path(args.out)
    stamp = time.strftime("%Y%m%d-%H%M%S", time.gmtime())
    return Path("runs") / f"{tag}-{stamp}"


def _load(args) -> ScenarioConfig:
    return load_config(_resolve_config_path(args), seed_override=args.seed)


def run_compare(args, out: _Outputs) -> int:
    rows = compare(case_study_trio())
    base = out.prepare_dir(_out_dir(args, "compare"))
    names = report.write_comparison_outputs(base, rows)
    for n in names:
        out.files.append(base / n)
    report.save_comparison_figure(out.path(base, "comparison.png"), rows)
    report.write_json(out.path(base, "manifest.json"), {
        "command": "compare",
        "preset": args.preset,
        "outputs": out.manifest(base),
    })
    print(render_text_table(rows), end="")
    print(f"[done] comparison written to {base}")
    return 0


def run_schedule(args, out: _Outputs) -> int:
    cfg = _load(args)
    sched = build_schedule(cfg.fabric, [POL_H, POL_V])
    verdict = validate_schedule(sched, sched.plan, cfg.fabric)
    base = out.prepare_dir(_out_dir(args, f"schedule-{cfg.config_hash()[:12]}"))
    report.write_schedule_csv(out.path(base, "schedule.csv"), sched)
    report.write_schedule_json(out.path(base, "schedule.json"), sched,
                               verdict.reason, frame_duration(sched, cfg.fabric))
    report.save_schedule_figure(out.path(base, "schedule.png"), sched)
    report.write_json(out.path(base, "manifest.json"), {
        "command": "schedule",
        "config_hash": cfg.config_hash(),
        "n_slots": sched.n_slots,
        "verdict": verdict.reason,
        "outputs": out.manifest(base),
    })
    print(f"schedule: {sched.n_slots} slots, {len(sched.entries)} entries, "
          f"verdict {verdict.reason}")
    print(f"[done] schedule written to {base}")
    return 0 if verdict.ok else 2


def _simulate_all(cfg: ScenarioConfig, out: _Outputs, base: Path,
                  debug_signals: bool):
    """Walk the dual-pol trajectory, returning per-channel profile lists."""
    ctx = cfg.context()
    sched = build_schedule(cfg.fabric, [POL_H, POL_V])
    traj = trajectory_from_schedule(sched, cfg.geometry)
    sig_dir = None
    if debug_signals:
        sig_dir = base / "signals"
        out.prepare_dir(sig_dir)
    channels = {key: [] for key in CHANNEL_KEYS}
    n_chirps = 0
    for u in traj:
        chirp = ctx.chirp_for(u.f.center_hz)
        elem = map_state_to_element(u.q.chain_id, u.q.module_id, u.f.index,
                                    cfg.fabric, cfg.geometry, ctx.plan)
        for pol_rx in (POL_H, POL_V):
            sig = simulate_state(u, cfg.scene, chirp, cfg.noise, pol_rx, cfg.c_mps)
            n_chirps += 1
            if sig_dir is not None:
                name = (f"slot{u.s.slot_index:03d}_chain{u.q.chain_id}"
                        f"_{u.s.pol_tx.lower()}{pol_rx.lower()}.csv")
                report.write_beat_signal_csv(out.path(sig_dir, name), sig)
            prof = range_profile(sig, cfg.pad_factor, cfg.window, cfg.c_mps)
            channels[u.channel_key(pol_rx)].append((elem, prof))
    for key in channels:
        channels[key].sort(key=lambda pair: pair[0].index)
    return sched, channels, n_chirps


def run_simulate(args, out: _Outputs) -> int:
    cfg = _load(args)
    base = out.prepare_dir(_out_dir(args, f"simulate-{cfg.config_hash()[:12]}"))
    sched, channels, n_chirps = _simulate_all(cfg, out, base, args.debug_signals)
    rows = []
    for key in CHANNEL_KEYS:
        for elem, prof in channels[key]:
            for b, val in enumerate(prof.values):
                rows.append({
                    "channel": key,
                    "element": elem.index,
                    "bin": b,
                    "range_m": b * prof.bin_size_m,
                    "re": float(val.real),
                    "im": float(val.imag),
                })
    report.write_csv(out.path(base, "range_profiles.csv"),
                     ["channel", "element", "bin", "range_m", "re", "im"], rows)
    report.save_profiles_figure(out.path(base, "range_profiles.png"),
                                channels["hh"])
    report.write_json(out.path(base, "manifest.json"), {
        "command": "simulate",
        "config_hash": cfg.config_hash(),
        "counters": {
            "n_slots": sched.n_slots,
            "n_chirps_simulated": n_chirps,
            "n_samples_per_chirp": int(round(cfg.fabric.chirp_duration_s
                                             * cfg.sample_rate_hz)),
        },
        "outputs": out.manifest(base),
    })
    print(f"simulated {n_chirps} chirps over {sched.n_slots} slots")
    print(f"[done] simulation written to {base}")
    return 0


def _window_peak(image, center_x: float, center_z: float,
                 half_x: float, half_z: float) -> tuple[float, float]:
    power = image.total_power()
    xs = image.spec.x_axis_m
    zs = image.spec.z_axis_m
    mx = (xs >= center_x - half_x) & (xs <= center_x + half_x)
    mz = (zs >= center_z - half_z) & (zs <= center_z + half_z)
    if not mx.any() or not mz.any():
        return image.peak_position()
    sub = power[np.ix_(mx, mz)]
    ix, iz = np.unravel_index(int(np.argmax(sub)), sub.shape)
    return (float(xs[mx][ix]), float(zs[mz][iz]))


def run_reconstruct(args, out: _Outputs) -> int:
    cfg = _load(args)
    ctx = cfg.context()
    base = out.prepare_dir(_out_dir(args, f"reconstruct-{cfg.config_hash()[:12]}"))

    sched = build_schedule(cfg.fabric, [POL_H, POL_V])
    verdict = validate_schedule(sched, sched.plan, cfg.fabric)

    sig_dir = None
    sink = None
    if args.debug_signals:
        sig_dir = base / "signals"
        out.prepare_dir(sig_dir)

        def sink(sig):
            u = sig.state
            name = (f"slot{u.s.slot_index:03d}_chain{u.q.chain_id}"
                    f"_{u.s.pol_tx.lower()}{sig.pol_rx.lower()}.csv")
            report.write_beat_signal_csv(out.path(sig_dir, name), sig)

    frame = acquire_pol_frame(cfg.scene, ctx, cfg.noise, signal_sink=sink)
    wmf = build_world_model(frame, cfg.grid, truth_scene=cfg.scene)

    band_total = cfg.fabric.band_hi_hz - cfg.fabric.band_lo_hz
    fused_res = range_resolution(band_total, cfg.c_mps)
    chirp_res = range_resolution(cfg.fabric.chirp_bandwidth_hz, cfg.c_mps)
    lam_ref = cfg.c_mps / cfg.fabric.band_center_hz
    aperture = cfg.geometry.aperture_length_m()

    peak_x, peak_z = wmf.image.peak_position()
    localization = []
    for i, sc in enumerate(cfg.scene.scatterers):
        tx, _, tz = sc.position_m
        r = float(np.linalg.norm(np.asarray(sc.position_m)
                                 - cfg.geometry.aperture_center()))
        cross_cell = lam_ref * r / (2.0 * aperture) if aperture > 0 else cfg.grid.x_step_m
        wx, wz = _window_peak(wmf.image, tx, tz, 3.0 * cross_cell, 3.0 * fused_res)
        gain = coherent_gain(frame.channels["hh"], sc.position_m, cfg.c_mps)
        localization.append({
            "scatterer": i,
            "truth_position_m": [float(v) for v in sc.position_m],
            "peak_xz_m": [wx, wz],
            "dx_m": wx - tx,
            "dz_m": wz - tz,
            "coherent_gain_hh": gain,
        })

    report.write_image_csv(out.path(base, "image.csv"), wmf.image)
    report.write_json(out.path(base, "image_meta.json"), {
        "config_hash": cfg.config_hash(),
        "grid": cfg.canonical["grid"],
        "channels": sorted(wmf.image.channels),
    })
    report.write_world_model_json(out.path(base, "world_model.json"), wmf)
    report.save_image_figure(out.path(base, "image.png"), wmf.image)
    report.save_profiles_figure(out.path(base, "range_profiles.png"),
                                frame.channels["hh"])

    run_report = {
        "command": "reconstruct",
        "config_hash": cfg.config_hash(),
        "schedule": {
            "n_slots": sched.n_slots,
            "n_entries": len(sched.entries),
            "frame_duration_s": frame_duration(sched, cfg.fabric),
            "verdict": verdict.reason,
        },
        "counters": {
            "n_virtual_elements": cfg.fabric.n_virtual,
            "n_chirps_simulated": 2 * len(sched.entries),
            "n_samples_per_chirp": int(round(cfg.fabric.chirp_duration_s
                                             * cfg.sample_rate_hz)),
            "n_pixels": int(np.prod(cfg.grid.shape)),
            "dof": wmf.dof,
        },
        "resolution": {
            "per_chirp_range_bin_m": frame.channels["hh"][0][1].bin_size_m,
            "per_chirp_range_resolution_m": chirp_res,
            "fused_range_resolution_m": fused_res,
        },
        "localization": {
            "global_peak_xz_m": [peak_x, peak_z],
            "scatterers": localization,
        },
        "scattering": [
            {
                "location_m": [float(v) for v in est.location_m],
                "estimate": report.scattering_dict(est.estimate),
                "truth": report.scattering_dict(est.truth),
                "rel_error_frobenius": est.rel_error_frobenius,
            }
            for est in wmf.estimates
        ],
    }
    rr_path = out.path(base, "run_report.json")
    run_report["outputs"] = sorted(set(out.manifest(base) + [rr_path.name]))
    report.write_json(rr_path, run_report)

    for row in localization:
        print(f"scatterer {row['scatterer']}: peak at "
              f"(x={row['peak_xz_m'][0]:.4f}, z={row['peak_xz_m'][1]:.4f}) m, "
              f"dx={row['dx_m']*1e3:.2f} mm, dz={row['dz_m']*1e3:.2f} mm, "
              f"gain {row['coherent_gain_hh']:.1f}")
    print(f"[done] reconstruction written to {base}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chirpfab",
        description="Simulate and analyze frequency-as-aperture acquisition "
                    "over a clip-on module fabric.",
        epilog="examples:\n"
               "  chirpfab compare --out runs/compare\n"
               "  chirpfab schedule --preset case-study --out runs/sched\n"
               "  chirpfab reconstruct --preset case-study --out runs/recon\n",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, needs_config: bool):
        sp.add_argument("--out", default=None,
                        help="output directory (default: runs/<tag>-<timestamp>)")
        sp.add_argument("--seed", type=int, default=None,
                        help="override the config seed")
        if needs_config:
            group = sp.add_mutually_exclusive_group(required=True)
            group.add_argument("--config", help="scenario JSON file")
            group.add_argument("--preset", choices=["case-study"],
                               help="bundled scenario")

    sp = sub.add_parser("compare", help="architecture comparison table")
    sp.add_argument("--preset", choices=["case-study"], default="case-study")
    sp.add_argument("--out", default=None)
    sp.add_argument("--seed", type=int, default=None)

    sp = sub.add_parser("schedule", help="build and validate the fabric schedule")
    common(sp, needs_config=True)

    sp = sub.add_parser("simulate", help="simulate the scheduled acquisition")
    common(sp, needs_config=True)
    sp.add_argument("--debug-signals", action="store_true",
                    help="dump every raw beat signal as CSV")

    sp = sub.add_parser("reconstruct", help="acquire, back-project and estimate")
    common(sp, needs_config=True)
    sp.add_argument("--debug-signals", action="store_true",
                    help="dump every raw beat signal as CSV")
    return parser


HANDLERS = {
    "compare": run_compare,
    "schedule": run_schedule,
    "simulate": run_simulate,
    "reconstruct": run_reconstruct,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = _Outputs()
    try:
        return HANDLERS[args.command](args, out)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        out.cleanup()
        return 1
    except Exception as exc:  # noqa: BLE001 - single CLI failure funnel
        print(f"error: {exc}", file=sys.stderr)
        out.cleanup()
        return 2


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()

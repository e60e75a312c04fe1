"""File emitters for CLI runs: delimited data, JSON reports and figures.

Everything written here is deterministic for a given config so repeated
runs can be compared byte for byte.  matplotlib is imported lazily and
always drives the Agg backend.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .architectures import ArchMetrics, comparison_rows, render_text_table
from .fmcw import BeatSignal
from .imaging import ImageGrid
from .polarimetry import CHANNEL_KEYS, WorldModelFrame
from .scheduling import Schedule, schedule_rows


def write_csv(path: Path, fieldnames: list[str], rows: list[dict]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(rows)


def write_json(path: Path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_schedule_csv(path: Path, sched: Schedule) -> None:
    write_csv(path, ["slot", "chain", "module", "step", "center_hz",
                     "chirp_bw_hz", "pol_tx"], schedule_rows(sched))


def write_schedule_json(path: Path, sched: Schedule, verdict_reason: str,
                        frame_duration_s: float) -> None:
    write_json(path, {
        "n_slots": sched.n_slots,
        "n_entries": len(sched.entries),
        "frame_duration_s": frame_duration_s,
        "verdict": verdict_reason,
        "entries": schedule_rows(sched),
    })


def write_beat_signal_csv(path: Path, sig: BeatSignal) -> None:
    rows = [{"sample_index": i, "re": float(s.real), "im": float(s.imag)}
            for i, s in enumerate(sig.samples)]
    write_csv(path, ["sample_index", "re", "im"], rows)


def write_image_csv(path: Path, image: ImageGrid) -> None:
    """One row per pixel: x, z and |I| of every channel present."""
    keys = [k for k in CHANNEL_KEYS if k in image.channels]
    keys += sorted(k for k in image.channels if k not in keys)
    mags = {k: np.abs(image.channels[k]) for k in keys}
    rows = []
    x_axis = image.spec.x_axis_m
    z_axis = image.spec.z_axis_m
    for ix, x in enumerate(x_axis):
        for iz, z in enumerate(z_axis):
            row = {"x_m": float(x), "z_m": float(z)}
            for k in keys:
                row[f"abs_{k}"] = float(mags[k][ix, iz])
            rows.append(row)
    write_csv(path, ["x_m", "z_m"] + [f"abs_{k}" for k in keys], rows)


def scattering_dict(matrix) -> dict:
    return {k: [getattr(matrix, f"s_{k}").real, getattr(matrix, f"s_{k}").imag]
            for k in CHANNEL_KEYS}


def write_world_model_json(path: Path, wmf: WorldModelFrame) -> None:
    scatterers = []
    for est in wmf.estimates:
        entry = {
            "location_m": [float(x) for x in est.location_m],
            "estimate": scattering_dict(est.estimate),
        }
        if est.truth is not None:
            entry["truth"] = scattering_dict(est.truth)
            entry["rel_error_frobenius"] = est.rel_error_frobenius
        scatterers.append(entry)
    write_json(path, {
        "n_virtual_elements": wmf.dof // 4,
        "dof": wmf.dof,
        "timestamp_slots": wmf.timestamp_slots,
        "channels": sorted(wmf.image.channels),
        "scatterers": scatterers,
    })


def write_comparison_outputs(out_dir: Path, rows: list[ArchMetrics]) -> list[str]:
    csv_path = out_dir / "comparison.csv"
    txt_path = out_dir / "comparison.txt"
    data = comparison_rows(rows)
    write_csv(csv_path, list(data[0].keys()), data)
    txt_path.write_text(render_text_table(rows), encoding="utf-8")
    return [csv_path.name, txt_path.name]


def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def save_schedule_figure(path: Path, sched: Schedule) -> None:
    """Frequency-time occupancy of the schedule, colored by RF chain."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(10, 5))
    cmap = plt.get_cmap("tab10")
    seen = set()
    for e in sched.entries:
        lo, hi = sched.plan.chirp_band(e.chain_id, e.module_id, e.step)
        label = f"chain {e.chain_id}"
        ax.broken_barh([(e.slot, 1.0)], (lo / 1e9, (hi - lo) / 1e9),
                       facecolors=cmap(e.chain_id % 10), edgecolor="none",
                       label=None if label in seen else label)
        seen.add(label)
    ax.set_xlabel("slot")
    ax.set_ylabel("frequency [GHz]")
    ax.set_title("fabric activation schedule")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_profiles_figure(path: Path, profiles: list, max_lines: int = 8) -> None:
    """Range-profile magnitudes of the first few virtual elements."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(8, 4.5))
    for elem, prof in profiles[:max_lines]:
        mag = np.abs(prof.values)
        floor = mag.max() * 1e-6 if mag.max() > 0 else 1e-12
        ax.plot(prof.range_axis_m, 20.0 * np.log10(np.maximum(mag, floor)),
                lw=0.8, label=f"v={elem.index}")
    ax.set_xlabel("range [m]")
    ax.set_ylabel("|profile| [dB]")
    ax.set_title("range-compressed chirps")
    ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_image_figure(path: Path, image: ImageGrid) -> None:
    """Per-channel |I| maps in dB, normalized to the global peak."""
    plt = _pyplot()
    keys = [k for k in CHANNEL_KEYS if k in image.channels]
    keys += sorted(k for k in image.channels if k not in keys)
    n = len(keys)
    ncols = 2 if n > 1 else 1
    nrows = (n + ncols - 1) // ncols
    fig, axes = plt.subplots(nrows, ncols, figsize=(5.5 * ncols, 4.2 * nrows),
                             squeeze=False)
    peak = max(float(np.abs(image.channels[k]).max()) for k in keys)
    peak = peak if peak > 0 else 1.0
    extent = (image.spec.z_min_m, image.spec.z_max_m,
              image.spec.x_min_m, image.spec.x_max_m)
    im = None
    for i, key in enumerate(keys):
        ax = axes[i // ncols][i % ncols]
        db = 20.0 * np.log10(np.maximum(np.abs(image.channels[key]) / peak, 1e-6))
        im = ax.imshow(db, origin="lower", extent=extent, aspect="auto",
                       vmin=-40.0, vmax=0.0, cmap="viridis")
        ax.set_title(f"channel {key}")
        ax.set_xlabel("z [m]")
        ax.set_ylabel("x [m]")
    for j in range(n, nrows * ncols):
        axes[j // ncols][j % ncols].axis("off")
    if im is not None:
        fig.colorbar(im, ax=[a for row in axes for a in row], label="|I| [dB]",
                     shrink=0.85)
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_comparison_figure(path: Path, rows: list[ArchMetrics]) -> None:
    plt = _pyplot()
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4.2))
    names = [r.name for r in rows]
    xs = np.arange(len(rows))
    ax1.bar(xs - 0.2, [r.virtual_elements for r in rows], width=0.4,
            label="virtual elements")
    ax1.bar(xs + 0.2, [r.absolute_chirps_per_frame for r in rows], width=0.4,
            label="chirps per pol frame")
    ax1.set_xticks(xs, names, rotation=15)
    ax1.legend(fontsize=8)
    ax1.set_title("aperture samples vs chirp cost")
    ax2.bar(xs, [r.frame_multiplier for r in rows], width=0.5, color="tab:orange")
    ax2.set_xticks(xs, names, rotation=15)
    ax2.set_title("frame-time multiplier (lower is faster)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)

"""Front-end architecture bookkeeping for full-polarimetric acquisition.

Compares three ways of filling a 64-element virtual aperture: a classic
phased array (all elements instantaneous), TDM MIMO (transmitters take
turns), and the multi-chain frequency-as-aperture fabric simulated by this
package (states walked by waveform scheduling).  Update rates are
normalized to each architecture's own single-polarization frame time T0;
absolute chirp counts are reported alongside so the normalization is
auditable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union


@dataclass(frozen=True)
class PhasedArray:
    n_elements: int


@dataclass(frozen=True)
class TdmMimo:
    n_tx: int
    n_rx: int


@dataclass(frozen=True)
class MrcFaaCaf:
    """Multi-RF-chain frequency-as-aperture clip-on aperture fabric."""

    k_chains: int
    m_modules: int
    p_steps: int


ArchVariant = Union[PhasedArray, TdmMimo, MrcFaaCaf]


@dataclass(frozen=True)
class ArchSpec:
    variant: ArchVariant
    pol_tx_states: int = 2

    def __post_init__(self) -> None:
        if self.pol_tx_states < 1:
            raise ValueError("pol_tx_states must be >= 1")


def display_name(spec: ArchSpec) -> str:
    v = spec.variant
    if isinstance(v, PhasedArray):
        return "phased_array"
    if isinstance(v, TdmMimo):
        return "tdm_mimo"
    if isinstance(v, MrcFaaCaf):
        return "mrc_faa_caf"
    raise TypeError(f"unknown architecture {v!r}")


def virtual_elements(spec: ArchSpec) -> int:
    """Independent spatial samples available per frame."""
    v = spec.variant
    if isinstance(v, PhasedArray):
        return v.n_elements
    if isinstance(v, TdmMimo):
        return v.n_tx * v.n_rx
    if isinstance(v, MrcFaaCaf):
        return v.k_chains * v.m_modules * v.p_steps
    raise TypeError(f"unknown architecture {v!r}")


def pol_channels_per_element(spec: ArchSpec) -> int:
    # dual-pol receive is captured simultaneously on every chirp
    return 2 * spec.pol_tx_states


def frame_multiplier(spec: ArchSpec) -> int:
    """Frame-time cost relative to a single snapshot of the same front end.

    The phased array and the fabric pay only the polarization serialization
    (x pol_tx_states); TDM MIMO additionally serializes its transmitters.
    """
    v = spec.variant
    if isinstance(v, PhasedArray):
        return spec.pol_tx_states
    if isinstance(v, TdmMimo):
        return v.n_tx * spec.pol_tx_states
    if isinstance(v, MrcFaaCaf):
        return spec.pol_tx_states
    raise TypeError(f"unknown architecture {v!r}")


def update_rate(spec: ArchSpec) -> Fraction:
    """World-model update rate in units of 1/T0: exactly 1/frame_multiplier."""
    return Fraction(1, frame_multiplier(spec))


def absolute_chirps_per_frame(spec: ArchSpec) -> int:
    """Raw chirp count of one full-polarimetric frame.

    The phased array fires one chirp per polarization, TDM MIMO one per
    (transmitter, polarization), and the fabric one slot per
    (module, step, polarization) with all K chains sharing each slot.
    """
    v = spec.variant
    if isinstance(v, PhasedArray):
        return spec.pol_tx_states
    if isinstance(v, TdmMimo):
        return v.n_tx * spec.pol_tx_states
    if isinstance(v, MrcFaaCaf):
        return v.m_modules * v.p_steps * spec.pol_tx_states
    raise TypeError(f"unknown architecture {v!r}")


# Qualitative deployment ratings; fixed engineering judgments, not computed.
ORDINAL_SCALE = ("Low", "Low–Moderate", "Moderate", "Moderate–High", "High")

ORDINAL_RATINGS = {
    PhasedArray: {
        "energy": "High",
        "hardware_calibration": "High",
        "deployment_flexibility": "Low",
        "persistence_suitability": "Moderate",
    },
    TdmMimo: {
        "energy": "Moderate–High",
        "hardware_calibration": "Moderate",
        "deployment_flexibility": "Moderate",
        "persistence_suitability": "Low",
    },
    MrcFaaCaf: {
        "energy": "Low–Moderate",
        "hardware_calibration": "Low",
        "deployment_flexibility": "High",
        "persistence_suitability": "High",
    },
}


@dataclass(frozen=True)
class ArchMetrics:
    """One comparison row."""

    name: str
    layout: str
    virtual_elements: int
    pol_channels_per_element: int
    frame_multiplier: int
    update_rate_inv_t0: Fraction
    absolute_chirps_per_frame: int
    energy: str
    hardware_calibration: str
    deployment_flexibility: str
    persistence_suitability: str


def _layout(spec: ArchSpec) -> str:
    v = spec.variant
    if isinstance(v, PhasedArray):
        return f"{v.n_elements} elements"
    if isinstance(v, TdmMimo):
        return f"{v.n_tx}x{v.n_rx} tx*rx"
    if isinstance(v, MrcFaaCaf):
        return f"{v.k_chains}*{v.m_modules}*{v.p_steps} chains*modules*steps"
    raise TypeError(f"unknown architecture {v!r}")


def metrics(spec: ArchSpec) -> ArchMetrics:
    ratings = ORDINAL_RATINGS[type(spec.variant)]
    return ArchMetrics(
        name=display_name(spec),
        layout=_layout(spec),
        virtual_elements=virtual_elements(spec),
        pol_channels_per_element=pol_channels_per_element(spec),
        frame_multiplier=frame_multiplier(spec),
        update_rate_inv_t0=update_rate(spec),
        absolute_chirps_per_frame=absolute_chirps_per_frame(spec),
        energy=ratings["energy"],
        hardware_calibration=ratings["hardware_calibration"],
        deployment_flexibility=ratings["deployment_flexibility"],
        persistence_suitability=ratings["persistence_suitability"],
    )


def compare(specs: list[ArchSpec]) -> list[ArchMetrics]:
    return [metrics(s) for s in specs]


def case_study_trio() -> list[ArchSpec]:
    """The 64-virtual-element desk-scale comparison set."""
    return [
        ArchSpec(PhasedArray(n_elements=64)),
        ArchSpec(TdmMimo(n_tx=8, n_rx=8)),
        ArchSpec(MrcFaaCaf(k_chains=2, m_modules=4, p_steps=8)),
    ]


def format_update_rate(rate: Fraction) -> str:
    return f"1/({rate.denominator}*T0)"


def render_text_table(rows: list[ArchMetrics]) -> str:
    """Aligned plain-text comparison table."""
    headers = ["metric"] + [r.name for r in rows]
    lines_spec = [
        ("layout", [r.layout for r in rows]),
        ("virtual elements", [str(r.virtual_elements) for r in rows]),
        ("pol channels per element", [str(r.pol_channels_per_element) for r in rows]),
        ("frame multiplier", [f"x{r.frame_multiplier}" for r in rows]),
        ("update rate", [format_update_rate(r.update_rate_inv_t0) for r in rows]),
        ("chirps per pol frame", [str(r.absolute_chirps_per_frame) for r in rows]),
        ("energy", [r.energy for r in rows]),
        ("hardware + calibration", [r.hardware_calibration for r in rows]),
        ("deployment flexibility", [r.deployment_flexibility for r in rows]),
        ("persistence suitability", [r.persistence_suitability for r in rows]),
    ]
    table = [headers] + [[label] + cells for label, cells in lines_spec]
    widths = [max(len(row[i]) for row in table) for i in range(len(headers))]
    out = []
    for i, row in enumerate(table):
        out.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        if i == 0:
            out.append("  ".join("-" * w for w in widths))
    out.append("")
    out.append("Update rates are in units of 1/T0, each architecture's own "
               "single-polarization frame time;")
    out.append("absolute chirp counts per full-polarimetric frame are listed "
               "so the normalization is auditable.")
    return "\n".join(out) + "\n"


def comparison_rows(rows: list[ArchMetrics]) -> list[dict]:
    """CSV-ready dict rows of the comparison."""
    out = []
    for r in rows:
        out.append({
            "architecture": r.name,
            "layout": r.layout,
            "virtual_elements": r.virtual_elements,
            "pol_channels_per_element": r.pol_channels_per_element,
            "frame_multiplier": r.frame_multiplier,
            "update_rate_inv_t0": format_update_rate(r.update_rate_inv_t0),
            "absolute_chirps_per_frame": r.absolute_chirps_per_frame,
            "energy": r.energy,
            "hardware_calibration": r.hardware_calibration,
            "deployment_flexibility": r.deployment_flexibility,
            "persistence_suitability": r.persistence_suitability,
        })
    return out

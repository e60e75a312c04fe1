"""Simulator and analysis toolkit for frequency-as-aperture mmWave sensing.

A fabric of clip-on radiating modules on microstrip trunks is driven by a
small number of RF chains.  Stepping the chirp center frequency walks the
active electromagnetic state across the fabric, so a frame of chirps
synthesizes a large virtual aperture without per-element transceivers.
This package simulates that acquisition over polarimetric point-scatterer
scenes, schedules the module activations, reconstructs a polarimetric
image by back-projection, and tabulates how the approach compares with
phased-array and TDM-MIMO front ends.
"""

from .architectures import (
    ArchMetrics,
    ArchSpec,
    MrcFaaCaf,
    PhasedArray,
    TdmMimo,
    absolute_chirps_per_frame,
    case_study_trio,
    compare,
    frame_multiplier,
    update_rate,
    virtual_elements,
)
from .control import (
    ApertureState,
    ControlPoint,
    ControlSpaceBounds,
    FrequencyState,
    Trajectory,
    WaveformState,
    trajectory_from_schedule,
    validate_point,
)
from .fmcw import (
    C_MPS,
    BeatSignal,
    ChirpConfig,
    NoiseConfig,
    beat_frequency,
    range_resolution,
    simulate_state,
)
from .geometry import FabricGeometry
from .imaging import (
    GridSpec,
    ImageGrid,
    RangeProfile,
    VirtualElement,
    angular_spectrum,
    backproject,
    backproject_at,
    map_state_to_element,
    range_profile,
)
from .polarimetry import (
    AcquisitionContext,
    PolFrame,
    WorldModelFrame,
    acquire_pol_frame,
    build_world_model,
    dof_count,
    estimate_scattering,
    unit_response,
)
from .scene import (
    PointScatterer,
    ScatteringMatrix,
    Scene,
    ground_truth_report,
    range_to,
)
from .scheduling import (
    FabricConfig,
    Schedule,
    ScheduleEntry,
    SubbandPlan,
    build_schedule,
    frame_duration,
    partition_band,
    validate_schedule,
)
from .scenario import ConfigError, ScenarioConfig, load_config, parse_config, preset_path
from .validation import Verdict

__version__ = "0.1.0"

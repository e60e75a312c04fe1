import numpy as np
import pytest

from chirpfab.fmcw import NoiseConfig
from chirpfab.imaging import GridSpec
from chirpfab.polarimetry import (
    CHANNEL_KEYS,
    acquire_pol_frame,
    build_world_model,
    channel_image,
    dof_count,
    estimate_scattering,
    unit_response,
)
from chirpfab.scene import PointScatterer, ScatteringMatrix, Scene

from helpers import CROSS, DIHEDRAL, IDENTITY, make_ctx, make_fabric, unit_scene

SMALL = make_fabric(k=2, m=2, p=2, band=(60e9, 64e9), bw=400e6, duration=2e-5)


@pytest.fixture(scope="module")
def ctx():
    return make_ctx(SMALL)


def rel_frobenius(est: ScatteringMatrix, truth: ScatteringMatrix) -> float:
    delta = est.as_array() - truth.as_array()
    return float(np.linalg.norm(delta) / truth.frobenius_norm())


def test_dof_count_scales_with_elements():
    assert dof_count(64) == 256
    assert dof_count(8) == 32


def test_frame_covers_all_channels_and_elements(ctx):
    frame = acquire_pol_frame(unit_scene((0, 0, 1.5)), ctx)
    assert set(frame.channels) == set(CHANNEL_KEYS)
    assert frame.n_virtual == 8
    assert frame.slot_span == 2 * SMALL.m_modules * SMALL.p_steps
    for key in CHANNEL_KEYS:
        indices = [elem.index for elem, _ in frame.channels[key]]
        assert indices == list(range(8))


def test_identity_target_leaves_cross_channels_silent(ctx):
    frame = acquire_pol_frame(unit_scene((0, 0, 1.5), IDENTITY), ctx)
    for key in ("hv", "vh"):
        for _, prof in frame.channels[key]:
            assert np.all(prof.values == 0)
    for key in ("hh", "vv"):
        assert any(np.any(prof.values != 0) for _, prof in frame.channels[key])


@pytest.mark.parametrize("truth", [IDENTITY, DIHEDRAL, CROSS],
                         ids=["identity", "dihedral", "cross"])
def test_noiseless_estimation_closes(ctx, truth):
    loc = (0.02, 0.0, 1.4)
    frame = acquire_pol_frame(unit_scene(loc, truth), ctx)
    est = estimate_scattering(frame, loc)
    assert rel_frobenius(est, truth) <= 1e-6


def test_estimation_is_linear_in_the_truth(ctx):
    loc = (0.0, 0.0, 1.5)
    alpha = 2.5 - 0.5j
    scaled = ScatteringMatrix(alpha * DIHEDRAL.s_hh, alpha * DIHEDRAL.s_hv,
                              alpha * DIHEDRAL.s_vh, alpha * DIHEDRAL.s_vv)
    cal = unit_response(ctx, loc)
    est_base = estimate_scattering(acquire_pol_frame(unit_scene(loc, DIHEDRAL), ctx),
                                   loc, cal)
    est_scaled = estimate_scattering(acquire_pol_frame(unit_scene(loc, scaled), ctx),
                                     loc, cal)
    assert np.allclose(est_scaled.as_array(), alpha * est_base.as_array(),
                       rtol=1e-9, atol=1e-12)


def test_channels_are_isolated_bit_for_bit(ctx):
    # perturbing one scatterer's s_hv must leave the hh/vh/vv data untouched
    a = PointScatterer((0.0, 0.0, 1.4), IDENTITY)
    b = PointScatterer((0.04, 0.0, 1.6), ScatteringMatrix(1, 0, 0, 1))
    b_mod = PointScatterer((0.04, 0.0, 1.6), ScatteringMatrix(1, 0.5j, 0.5j, 1))
    frame_a = acquire_pol_frame(Scene([a, b]), ctx)
    frame_b = acquire_pol_frame(Scene([a, b_mod]), ctx)
    for key in ("hh", "vv"):
        for (_, pa), (_, pb) in zip(frame_a.channels[key], frame_b.channels[key]):
            assert np.array_equal(pa.values, pb.values)
    changed = any(
        not np.array_equal(pa.values, pb.values)
        for (_, pa), (_, pb) in zip(frame_a.channels["hv"], frame_b.channels["hv"]))
    assert changed


def test_unit_response_normalizes_itself(ctx):
    loc = (0.01, 0.0, 1.5)
    cal = unit_response(ctx, loc)
    frame = acquire_pol_frame(unit_scene(loc, ScatteringMatrix(1, 1, 1, 1)), ctx)
    est = estimate_scattering(frame, loc, cal)
    assert np.allclose(est.as_array(), np.ones((2, 2)), rtol=1e-9, atol=1e-9)


def test_estimate_with_noise_stays_close(ctx):
    loc = (0.0, 0.0, 1.5)
    truth = DIHEDRAL
    noise = NoiseConfig(kind="complex_gaussian", snr_db=20.0, seed=7)
    frame = acquire_pol_frame(unit_scene(loc, truth), ctx, noise=noise)
    est = estimate_scattering(frame, loc)
    assert rel_frobenius(est, truth) <= 0.15


def test_estimate_rejects_unreachable_location(ctx):
    frame = acquire_pol_frame(unit_scene((0, 0, 1.5)), ctx)
    cal = unit_response(ctx, (0.0, 0.0, 1.5))
    with pytest.raises(ValueError, match="outside grid support"):
        estimate_scattering(frame, (0.0, 0.0, 500.0), cal)


def test_world_model_reports_dof_timestamp_and_errors(ctx):
    loc = (0.0, 0.0, 1.5)
    scene = unit_scene(loc, DIHEDRAL)
    frame = acquire_pol_frame(scene, ctx)
    spec = GridSpec(-0.06, 0.06, 0.01, 1.40, 1.60, 0.005)
    wmf = build_world_model(frame, spec, truth_scene=scene)
    assert wmf.dof == 32
    assert wmf.timestamp_slots == frame.slot_span
    assert set(wmf.image.channels) == set(CHANNEL_KEYS)
    assert wmf.image.channel("hh").shape == spec.shape
    assert len(wmf.estimates) == 1
    est = wmf.estimates[0]
    assert est.truth == DIHEDRAL
    assert est.rel_error_frobenius <= 1e-6
    px, pz = wmf.image.peak_position()
    assert abs(px - 0.0) <= 0.03
    assert abs(pz - 1.5) <= 0.02


def test_channel_image_matches_manual_backprojection(ctx):
    from chirpfab.imaging import backproject

    frame = acquire_pol_frame(unit_scene((0, 0, 1.5)), ctx)
    spec = GridSpec(-0.04, 0.04, 0.02, 1.45, 1.55, 0.01)
    via_helper = channel_image(frame, "hh", spec)
    direct = backproject(frame.channels["hh"], spec, ctx.c_mps)
    assert np.array_equal(via_helper.channel("hh"), direct.channel("hh"))

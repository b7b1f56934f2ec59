import json
import math

import numpy as np
import pytest

from acqc.errors import LimitViolationError, SingularScheduleError
from acqc.schedule import (
    AnalyticWaveform,
    DriveSchedule,
    HardwareLimits,
    TabulatedWaveform,
    cd_transform,
    cd_transform_zero_phase,
    constant_waveform,
    linear_schedule,
    sample_schedule,
    save_schedule_csv,
    save_schedule_json,
    schedule_to_dict,
    smooth_schedule,
    validate_boundary,
    z_rotation_transform,
)

# Independently derived reference values.
SMOOTH_OMEGA_QUARTER = 0.8028499335394067  # sin^2((pi/2) sin(pi/4))
SMOOTH_DELTA_QUARTER = -0.7071067811865476  # -cos(pi/4)


def _line(a: float, b: float, T: float) -> AnalyticWaveform:
    slope = (b - a) / T
    return AnalyticWaveform(
        kind="line",
        duration=T,
        fn=lambda t: a + slope * np.asarray(t, dtype=float),
        dfn=lambda t: np.full_like(np.asarray(t, dtype=float), slope),
        params=(("a", a), ("b", b)),
    )


# ---------------------------------------------------------------------------
# Waveforms
# ---------------------------------------------------------------------------


def test_constant_waveform():
    w = constant_waveform(3.5, 2.0)
    assert w(0.7) == pytest.approx(3.5)
    assert w.derivative(1.3) == pytest.approx(0.0)
    t = np.linspace(0, 2, 7)
    assert np.all(np.asarray(w(t)) == 3.5)


def test_tabulated_waveform_validation():
    with pytest.raises(ValueError):
        TabulatedWaveform(times=np.array([0.0]), values=np.array([1.0]))
    with pytest.raises(ValueError):
        TabulatedWaveform(times=np.array([0.0, 1.0, 1.5]), values=np.zeros(3))
    with pytest.raises(ValueError):
        TabulatedWaveform(times=np.array([0.0, 0.0, 1.0]), values=np.zeros(3))
    with pytest.raises(ValueError):
        TabulatedWaveform(
            times=np.array([0.0, 1.0]), values=np.array([1.0, np.nan])
        )


def test_tabulated_waveform_is_read_only():
    w = TabulatedWaveform(times=np.linspace(0, 1, 5), values=np.zeros(5))
    with pytest.raises(ValueError):
        w.values[0] = 1.0


def test_tabulated_derivative_exact_on_quadratic():
    # Second-order stencils reproduce a quadratic exactly, endpoints included.
    t = np.linspace(0.0, 1.0, 21)
    w = TabulatedWaveform(times=t, values=3.0 * t * t - 2.0 * t + 0.5)
    expected = 6.0 * t - 2.0
    np.testing.assert_allclose(np.asarray(w.derivative(t)), expected, atol=1e-12)


def test_tabulated_interpolates_linearly():
    w = TabulatedWaveform(times=np.array([0.0, 1.0]), values=np.array([0.0, 2.0]))
    assert w(0.25) == pytest.approx(0.5)
    assert w.duration == pytest.approx(1.0)


def test_analytic_derivative_matches_central_difference():
    sched = smooth_schedule(HardwareLimits(), 1.0)
    h = 1e-6
    for t in (0.2, 0.37, 0.5, 0.81):
        for w in (sched.omega, sched.delta):
            numeric = (float(w(t + h)) - float(w(t - h))) / (2 * h)
            exact = float(w.derivative(t))
            assert numeric == pytest.approx(exact, rel=1e-6, abs=1e-6)


# ---------------------------------------------------------------------------
# Baseline schedules
# ---------------------------------------------------------------------------


def test_linear_schedule_shape():
    lim = HardwareLimits(omega_max=10.0, delta_max=20.0)
    s = linear_schedule(lim, 2.0)
    assert s.protocol == "linear"
    assert float(s.omega(0.0)) == pytest.approx(0.0)
    assert float(s.omega(0.1)) == pytest.approx(5.0)  # mid-ramp
    assert float(s.omega(1.0)) == pytest.approx(10.0)
    assert float(s.omega(2.0)) == pytest.approx(0.0, abs=1e-12)
    assert float(s.delta(0.0)) == pytest.approx(-20.0)
    assert float(s.delta(1.0)) == pytest.approx(0.0, abs=1e-12)
    assert float(s.delta(2.0)) == pytest.approx(20.0)
    assert s.phase_is_zero


def test_linear_schedule_smooth_ramps():
    lim = HardwareLimits(omega_max=10.0, delta_max=20.0)
    s = linear_schedule(lim, 1.0, smooth_ramps=True)
    assert float(s.omega(0.05)) == pytest.approx(5.0)  # sin^2(pi/4) = 1/2
    assert float(s.omega(0.5)) == pytest.approx(10.0)
    assert float(s.omega.derivative(0.0)) == pytest.approx(0.0, abs=1e-9)
    assert float(s.omega.derivative(0.5)) == pytest.approx(0.0, abs=1e-9)


def test_smooth_schedule_reference_points():
    s = smooth_schedule(HardwareLimits(omega_max=1.0, delta_max=1.0), 1.0)
    assert s.protocol == "smooth"
    assert float(s.omega(0.25)) == pytest.approx(SMOOTH_OMEGA_QUARTER, rel=1e-12)
    assert float(s.delta(0.25)) == pytest.approx(SMOOTH_DELTA_QUARTER, rel=1e-12)
    assert float(s.omega(0.5)) == pytest.approx(1.0)
    assert float(s.omega(0.0)) == pytest.approx(0.0, abs=1e-15)
    assert float(s.omega.derivative(0.0)) == pytest.approx(0.0, abs=1e-12)
    assert float(s.omega.derivative(1.0)) == pytest.approx(0.0, abs=1e-9)


def test_boundary_validation():
    assert validate_boundary(linear_schedule(HardwareLimits(), 1.0)).passed
    assert validate_boundary(smooth_schedule(HardwareLimits(), 1.0)).passed
    flat = DriveSchedule(
        omega=constant_waveform(5.0, 1.0),
        delta=constant_waveform(3.0, 1.0),
        phase=constant_waveform(0.0, 1.0),
        total_time=1.0,
        limits=HardwareLimits(),
        protocol="flat",
    )
    report = validate_boundary(flat)
    assert not report.passed
    assert report.omega_start == pytest.approx(5.0)


def test_limits_validation():
    with pytest.raises(ValueError):
        HardwareLimits(omega_max=0.0)
    with pytest.raises(ValueError):
        HardwareLimits(delta_max=-1.0)


# ---------------------------------------------------------------------------
# Counterdiabatic transform
# ---------------------------------------------------------------------------


def test_cd_transform_reference_point():
    # omega = 1, delta = t - 1/2: at mid-window omega' = sqrt(2),
    # delta' = 0, phi' = pi/4.
    base = DriveSchedule(
        omega=constant_waveform(1.0, 1.0),
        delta=_line(-0.5, 0.5, 1.0),
        phase=constant_waveform(0.0, 1.0),
        total_time=1.0,
        limits=HardwareLimits(omega_max=2.0, delta_max=1.0),
        protocol="test",
    )
    cd = cd_transform(base, n_samples=101)
    k = 50  # t = 0.5 exactly
    assert cd.omega.values[k] == pytest.approx(math.sqrt(2.0), rel=1e-12)
    assert cd.delta.values[k] == pytest.approx(0.0, abs=1e-12)
    assert cd.phase.values[k] == pytest.approx(math.pi / 4.0, rel=1e-12)
    assert cd.protocol == "acqc"
    assert cd.base_protocol == "test"


def test_cd_zero_phase_specialization_agrees_exactly():
    base = smooth_schedule(HardwareLimits(), 0.7)
    general = cd_transform(base, n_samples=501, limit_mode="allow")
    special = cd_transform_zero_phase(base, n_samples=501, limit_mode="allow")
    np.testing.assert_array_equal(general.omega.values, special.omega.values)
    np.testing.assert_array_equal(general.delta.values, special.delta.values)
    np.testing.assert_array_equal(general.phase.values, special.phase.values)


def test_cd_zero_phase_rejects_phased_base():
    base = smooth_schedule(HardwareLimits(), 1.0)
    phased = DriveSchedule(
        omega=base.omega,
        delta=base.delta,
        phase=_line(0.0, 0.3, 1.0),
        total_time=1.0,
        limits=base.limits,
        protocol="smooth",
    )
    with pytest.raises(ValueError):
        cd_transform_zero_phase(phased)


def test_cd_amplitude_exceeds_base_peak():
    # The synthesized amplitude majorizes the base amplitude, so the peak
    # always lands above omega_max for the smooth base.
    base = smooth_schedule(HardwareLimits(), 1.0)
    cd = cd_transform(base, limit_mode="allow")
    peak = float(np.max(cd.omega.values))
    assert peak > base.limits.omega_max
    assert cd.limits.omega_max == pytest.approx(peak)
    assert cd.clip_fraction == 0.0


def test_cd_limit_modes():
    base = smooth_schedule(HardwareLimits(), 1.0)
    with pytest.raises(LimitViolationError) as err:
        cd_transform(base)
    assert err.value.limit == pytest.approx(15.0)
    assert err.value.value > 15.0
    clamped = cd_transform(base, limit_mode="clamp")
    assert float(np.max(clamped.omega.values)) == pytest.approx(15.0)
    assert clamped.clip_fraction > 0.0
    assert clamped.limits.omega_max == pytest.approx(15.0)
    with pytest.raises(ValueError):
        cd_transform(base, limit_mode="bogus")


def test_cd_phase_is_continuous():
    cd = cd_transform(smooth_schedule(HardwareLimits(), 0.5), limit_mode="allow")
    jumps = np.abs(np.diff(cd.phase.values))
    assert float(jumps.max()) < math.pi


def test_cd_singular_base_rejected():
    base = DriveSchedule(
        omega=constant_waveform(0.0, 1.0),
        delta=_line(-1.0, 1.0, 1.0),
        phase=constant_waveform(0.0, 1.0),
        total_time=1.0,
        limits=HardwareLimits(omega_max=1.0, delta_max=1.0),
        protocol="test",
    )
    with pytest.raises(SingularScheduleError):
        cd_transform(base)


def test_cd_boundary_preserved():
    cd = cd_transform(smooth_schedule(HardwareLimits(), 1.0), limit_mode="allow")
    assert validate_boundary(cd).passed


# ---------------------------------------------------------------------------
# Phase-to-detuning frame change
# ---------------------------------------------------------------------------


def test_zrot_structure():
    cd = cd_transform(smooth_schedule(HardwareLimits(), 1.0), limit_mode="allow")
    zr = z_rotation_transform(cd, limit_mode="allow")
    assert zr.protocol == "acqc-zrot"
    assert zr.phase_is_zero
    np.testing.assert_array_equal(zr.omega.values, cd.omega.values)


def test_zrot_delta_absorbs_phase_velocity():
    cd = cd_transform(smooth_schedule(HardwareLimits(), 1.0), limit_mode="allow")
    zr = z_rotation_transform(cd, limit_mode="allow")
    t = cd.phase.times
    h = float(t[1] - t[0])
    ph = np.unwrap(np.asarray(cd.phase.values))
    k = t.size // 2
    dph = (ph[k + 1] - ph[k - 1]) / (2 * h)
    expected = float(cd.delta.values[k]) + dph
    assert zr.delta.values[k] == pytest.approx(expected, rel=1e-9)


def test_zrot_detuning_limit_modes():
    cd = cd_transform(smooth_schedule(HardwareLimits(), 1.0), limit_mode="allow")
    with pytest.raises(LimitViolationError):
        z_rotation_transform(cd)
    clamped = z_rotation_transform(cd, limit_mode="clamp")
    assert float(np.max(np.abs(clamped.delta.values))) <= 17.0 + 1e-9


# ---------------------------------------------------------------------------
# Sampling and export
# ---------------------------------------------------------------------------


def test_sample_schedule_table():
    s = smooth_schedule(HardwareLimits(), 1.0)
    table = sample_schedule(s, 11)
    assert table.shape == (11, 4)
    assert table[0, 0] == 0.0
    assert table[-1, 0] == pytest.approx(1.0)
    assert table[5, 1] == pytest.approx(15.0)  # omega peak at T/2
    with pytest.raises(ValueError):
        sample_schedule(s, 1)


def test_schedule_to_dict_keys():
    doc = schedule_to_dict(linear_schedule(HardwareLimits(), 1.0), 11)
    assert doc["protocol"] == "linear"
    assert doc["T_us"] == pytest.approx(1.0)
    assert len(doc["samples"]) == 11
    assert set(doc["samples"][0]) == {"t", "omega", "delta", "phi"}
    assert doc["limits"]["omega_max"] == pytest.approx(15.0)


def test_save_schedule_files(tmp_path):
    s = smooth_schedule(HardwareLimits(), 1.0)
    jpath = tmp_path / "s.json"
    cpath = tmp_path / "s.csv"
    save_schedule_json(s, jpath, 21)
    save_schedule_csv(s, cpath, 21)
    doc = json.loads(jpath.read_text())
    assert len(doc["samples"]) == 21
    lines = cpath.read_text().splitlines()
    assert lines[0] == "t,omega,delta,phi"
    assert len(lines) == 22
    mid = lines[11].split(",")
    assert float(mid[1]) == pytest.approx(15.0)

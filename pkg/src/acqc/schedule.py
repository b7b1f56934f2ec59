"""Drive schedules: adiabatic ramps and counterdiabatic synthesis.

A schedule bundles three real controls on [0, T]: Rabi amplitude omega(t),
detuning delta(t), and drive phase phi(t). Baseline protocols ("linear",
"smooth") are closed-form waveforms. The counterdiabatic transform takes a
differentiable base schedule and returns new controls that absorb the
velocity-dependent correction into a redefined amplitude, detuning, and
phase, evaluated on a uniform grid:

    g1 = omega * (1 + delta * dphi / (omega^2 + delta^2))
    g2 = -(omega * ddelta - delta * domega) / (omega^2 + delta^2)

    omega' = sqrt(g1^2 + g2^2)
    delta' = delta - omega^2 * dphi / (omega^2 + delta^2)
    phi'   = phi - atan2(g2, g1)

For hardware without phase control, a further frame change trades the
synthesized phase for extra detuning: delta'' = delta' + d(phi')/dt with
phi'' = 0, leaving measured distributions unchanged.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from pathlib import Path
from typing import Callable

import numpy as np

from .constants import DELTA_MAX_DEFAULT, OMEGA_MAX_DEFAULT, UNIT_CONVENTION
from .errors import LimitViolationError, SingularScheduleError

__all__ = [
    "HardwareLimits",
    "Waveform",
    "AnalyticWaveform",
    "TabulatedWaveform",
    "DriveSchedule",
    "BoundaryReport",
    "constant_waveform",
    "linear_schedule",
    "smooth_schedule",
    "cd_transform",
    "cd_transform_zero_phase",
    "z_rotation_transform",
    "validate_boundary",
    "sample_schedule",
    "schedule_to_dict",
    "save_schedule_json",
    "save_schedule_csv",
]

DEFAULT_TRANSFORM_SAMPLES = 10001
DEFAULT_EXPORT_SAMPLES = 1001
LIMIT_MODES = ("error", "clamp", "allow")


# ---------------------------------------------------------------------------
# Limits
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HardwareLimits:
    """Drive bounds. The baseline constructors also use these as the ramp
    targets, so omega_max doubles as the peak Rabi amplitude and delta_max
    as the detuning sweep endpoint."""

    omega_max: float = OMEGA_MAX_DEFAULT
    delta_max: float = DELTA_MAX_DEFAULT
    phase_controllable: bool = True

    def __post_init__(self):
        if self.omega_max <= 0 or self.delta_max <= 0:
            raise ValueError("omega_max and delta_max must be positive")

    def to_dict(self) -> dict:
        return {
            "omega_max": self.omega_max,
            "delta_max": self.delta_max,
            "phase_controllable": self.phase_controllable,
        }


def _denominator_floor(limits: HardwareLimits) -> float:
    return 1e-9 * (limits.omega_max**2 + limits.delta_max**2)


# ---------------------------------------------------------------------------
# Waveforms
# ---------------------------------------------------------------------------


class Waveform:
    """A real control on [0, duration], evaluable with its time derivative.

    Subclasses implement ``__call__`` and ``derivative`` accepting scalars
    or arrays of times.
    """

    duration: float

    def __call__(self, t):  # pragma: no cover - interface
        raise NotImplementedError

    def derivative(self, t):  # pragma: no cover - interface
        raise NotImplementedError


@dataclass(frozen=True)
class AnalyticWaveform(Waveform):
    """Closed-form waveform with an exact derivative.

    Attributes:
        kind: short name of the functional family.
        duration: domain length in us.
        params: parameters identifying the instance within its family.
    """

    kind: str
    duration: float
    fn: Callable = field(repr=False)
    dfn: Callable = field(repr=False)
    params: tuple[tuple[str, float], ...] = ()

    def __call__(self, t):
        return self.fn(np.asarray(t, dtype=float))

    def derivative(self, t):
        return self.dfn(np.asarray(t, dtype=float))


@dataclass(frozen=True)
class TabulatedWaveform(Waveform):
    """Uniformly sampled waveform with finite-difference derivatives.

    Evaluation interpolates linearly between samples; the derivative uses
    central differences in the interior and second-order one-sided stencils
    at the endpoints, itself interpolated.
    """

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.ndim != 1 or t.shape != v.shape:
            raise ValueError("times and values must be equal-length 1-d arrays")
        if t.size < 2:
            raise ValueError("a tabulated waveform needs at least 2 samples")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(v))):
            raise ValueError("samples must be finite")
        steps = np.diff(t)
        if np.any(steps <= 0):
            raise ValueError("times must be strictly increasing")
        h = steps[0]
        if not np.allclose(steps, h, rtol=1e-9, atol=1e-12 * max(t[-1], 1.0)):
            raise ValueError("times must be uniformly spaced")
        t = t.copy()
        v = v.copy()
        t.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    @property
    def duration(self) -> float:
        return float(self.times[-1] - self.times[0])

    @cached_property
    def _derivative_values(self) -> np.ndarray:
        v = self.values
        h = float(self.times[1] - self.times[0])
        d = np.empty_like(v)
        if v.size == 2:
            d[:] = (v[1] - v[0]) / h
        else:
            d[1:-1] = (v[2:] - v[:-2]) / (2.0 * h)
            d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h)
            d[-1] = (3.0 * v[-1] - 4.0 * v[-2] + v[-3]) / (2.0 * h)
        d.setflags(write=False)
        return d

    def __call__(self, t):
        return np.interp(np.asarray(t, dtype=float), self.times, self.values)

    def derivative(self, t):
        return np.interp(
            np.asarray(t, dtype=float), self.times, self._derivative_values
        )


def constant_waveform(value: float, duration: float) -> AnalyticWaveform:
    """Waveform holding a fixed value with zero derivative."""
    value = float(value)
    return AnalyticWaveform(
        kind="constant",
        duration=float(duration),
        fn=lambda t: np.full_like(t, value),
        dfn=lambda t: np.zeros_like(t),
        params=(("value", value),),
    )


# ---------------------------------------------------------------------------
# Schedules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DriveSchedule:
    """Three drive controls on a common time window.

    Attributes:
        omega: Rabi amplitude waveform, nonnegative.
        delta: detuning waveform.
        phase: drive phase waveform.
        total_time: window length T in us.
        limits: bounds the schedule was synthesized against.
        protocol: which protocol this schedule realizes
            ("linear", "smooth", "acqc", "acqc-zrot").
        base_protocol: for transformed schedules, the protocol of the base.
        clip_fraction: fraction of samples clipped when a transform ran in
            clamp mode (0.0 otherwise).
    """

    omega: Waveform
    delta: Waveform
    phase: Waveform
    total_time: float
    limits: HardwareLimits
    protocol: str
    base_protocol: str | None = None
    clip_fraction: float = 0.0

    def __post_init__(self):
        if self.total_time <= 0:
            raise ValueError("total_time must be positive")

    @property
    def phase_is_zero(self) -> bool:
        """True when the phase is provably identically zero."""
        ph = self.phase
        if isinstance(ph, AnalyticWaveform) and ph.kind == "constant":
            return dict(ph.params).get("value", None) == 0.0
        if isinstance(ph, TabulatedWaveform):
            return bool(np.all(ph.values == 0.0))
        return False


@dataclass(frozen=True)
class BoundaryReport:
    """Endpoint values of a schedule against the annealing boundary rules:
    omega vanishes at both ends, delta starts negative and ends positive."""

    omega_start: float
    omega_end: float
    delta_start: float
    delta_end: float
    tolerance: float
    passed: bool


# ---------------------------------------------------------------------------
# Baseline constructors
# ---------------------------------------------------------------------------


def linear_schedule(
    limits: HardwareLimits | None = None,
    total_time: float = 1.0,
    *,
    ramp_fraction: float = 0.1,
    smooth_ramps: bool = False,
) -> DriveSchedule:
    """Trapezoidal Rabi ramp with a linear detuning sweep.

    Omega ramps 0 -> omega_max over the first ramp_fraction of the window,
    holds, and ramps back to 0; delta sweeps linearly from -delta_max to
    +delta_max. With smooth_ramps the two ramps are replaced by half-period
    sine-squared segments of the same length, which removes the derivative
    kinks while keeping the plateau (useful when the schedule must be
    differentiable everywhere).

    Args:
        limits: drive bounds and ramp targets (defaults applied when None).
        total_time: window length T in us.
        ramp_fraction: fraction of T spent in each omega ramp, in (0, 0.5].
        smooth_ramps: use sine-squared ramps instead of linear ones.

    Returns:
        The baseline schedule with zero phase.
    """
    if limits is None:
        limits = HardwareLimits()
    if total_time <= 0:
        raise ValueError("total_time must be positive")
    if not (0 < ramp_fraction <= 0.5):
        raise ValueError("ramp_fraction must lie in (0, 0.5]")

    T = float(total_time)
    om0 = limits.omega_max
    de0 = limits.delta_max
    ramp = ramp_fraction * T

    if smooth_ramps:

        def om_fn(t):
            t = np.asarray(t, dtype=float)
            up = np.clip(t, 0.0, ramp)
            down = np.clip(T - t, 0.0, ramp)
            out = np.where(
                t < T / 2,
                np.sin(np.pi * up / (2.0 * ramp)) ** 2,
                np.sin(np.pi * down / (2.0 * ramp)) ** 2,
            )
            return om0 * out

        def om_dfn(t):
            t = np.asarray(t, dtype=float)
            rate = np.pi / (2.0 * ramp)
            rising = om0 * rate * np.sin(np.pi * t / ramp)
            falling = -om0 * rate * np.sin(np.pi * (T - t) / ramp)
            out = np.where(t < ramp, rising, 0.0)
            out = np.where(t > T - ramp, falling, out)
            return out

        kind = "trapezoid-smooth"
    else:
        knots_t = np.array([0.0, ramp, T - ramp, T])
        knots_v = np.array([0.0, om0, om0, 0.0])

        def om_fn(t):
            return np.interp(np.asarray(t, dtype=float), knots_t, knots_v)

        def om_dfn(t):
            t = np.asarray(t, dtype=float)
            slope = om0 / ramp
            out = np.where(t < ramp, slope, 0.0)
            out = np.where(t > T - ramp, -slope, out)
            return out

        kind = "trapezoid"

    omega = AnalyticWaveform(
        kind=kind,
        duration=T,
        fn=om_fn,
        dfn=om_dfn,
        params=(("omega_max", om0), ("ramp_fraction", ramp_fraction)),
    )
    delta = AnalyticWaveform(
        kind="linear",
        duration=T,
        fn=lambda t: -de0 + (2.0 * de0 / T) * np.asarray(t, dtype=float),
        dfn=lambda t: np.full_like(np.asarray(t, dtype=float), 2.0 * de0 / T),
        params=(("delta_max", de0),),
    )
    return DriveSchedule(
        omega=omega,
        delta=delta,
        phase=constant_waveform(0.0, T),
        total_time=T,
        limits=limits,
        protocol="linear",
    )


def smooth_schedule(
    limits: HardwareLimits | None = None, total_time: float = 1.0
) -> DriveSchedule:
    """Infinitely differentiable ramp pair with flat endpoints.

    omega(t) = omega_max * sin^2((pi/2) * sin(pi t / T))
    delta(t) = -delta_max * cos(pi t / T)

    Both controls start and end with zero slope, which keeps the
    counterdiabatic correction bounded over the whole window.
    """
    if limits is None:
        limits = HardwareLimits()
    if total_time <= 0:
        raise ValueError("total_time must be positive")

    T = float(total_time)
    om0 = limits.omega_max
    de0 = limits.delta_max

    def om_fn(t):
        t = np.asarray(t, dtype=float)
        return om0 * np.sin(0.5 * np.pi * np.sin(np.pi * t / T)) ** 2

    def om_dfn(t):
        t = np.asarray(t, dtype=float)
        inner = 0.5 * np.pi * np.sin(np.pi * t / T)
        return om0 * np.sin(2.0 * inner) * (np.pi**2 / (2.0 * T)) * np.cos(np.pi * t / T)

    omega = AnalyticWaveform(
        kind="sine-squared-of-sine",
        duration=T,
        fn=om_fn,
        dfn=om_dfn,
        params=(("omega_max", om0),),
    )
    delta = AnalyticWaveform(
        kind="cosine",
        duration=T,
        fn=lambda t: -de0 * np.cos(np.pi * np.asarray(t, dtype=float) / T),
        dfn=lambda t: de0 * (np.pi / T) * np.sin(np.pi * np.asarray(t, dtype=float) / T),
        params=(("delta_max", de0),),
    )
    return DriveSchedule(
        omega=omega,
        delta=delta,
        phase=constant_waveform(0.0, T),
        total_time=T,
        limits=limits,
        protocol="smooth",
    )


# ---------------------------------------------------------------------------
# Counterdiabatic synthesis
# ---------------------------------------------------------------------------


def _sample_with_derivatives(base: DriveSchedule, n_samples: int):
    t = np.linspace(0.0, base.total_time, n_samples)
    om = np.asarray(base.omega(t), dtype=float)
    de = np.asarray(base.delta(t), dtype=float)
    ph = np.asarray(base.phase(t), dtype=float)
    omd = np.asarray(base.omega.derivative(t), dtype=float)
    ded = np.asarray(base.delta.derivative(t), dtype=float)
    phd = np.asarray(base.phase.derivative(t), dtype=float)
    return t, om, de, ph, omd, ded, phd


def _check_denominator(
    denom: np.ndarray, t: np.ndarray, limits: HardwareLimits
) -> None:
    floor = _denominator_floor(limits)
    if np.any(denom < floor):
        k = int(np.argmin(denom))
        raise SingularScheduleError(
            f"omega^2 + delta^2 = {denom[k]:.6g} at t = {t[k]:.6g} us, "
            f"below the safety floor {floor:.6g}; the base schedule passes "
            f"too close to the origin of the control plane"
        )


def _snap_endpoint_zeros(om_new: np.ndarray, limits: HardwareLimits) -> np.ndarray:
    """Replace roundoff-level endpoint amplitudes with exact zeros.

    Annealing bases vanish at the window edges analytically, but float
    evaluation of the boundary trigonometry leaves residues around 1e-15
    that would end up in exported pulse files. Snapping is restricted to
    the two endpoint samples and to values far below any physical scale,
    so schedules that genuinely start or end driven are untouched.
    """
    floor = 1e-12 * limits.omega_max
    for k in (0, -1):
        if abs(om_new[k]) < floor:
            om_new[k] = 0.0
    return om_new


def _apply_omega_limit(
    om_new: np.ndarray,
    t: np.ndarray,
    limits: HardwareLimits,
    limit_mode: str,
) -> tuple[np.ndarray, HardwareLimits, float]:
    """Enforce the amplitude bound per the requested policy.

    Returns possibly clipped values, the limits to attach to the resulting
    schedule (widened in allow mode so the schedule is self-consistent),
    and the clipped fraction.
    """
    if limit_mode not in LIMIT_MODES:
        raise ValueError(f"limit_mode must be one of {LIMIT_MODES}")
    over = om_new > limits.omega_max
    if not np.any(over):
        return om_new, limits, 0.0
    k = int(np.argmax(om_new))
    if limit_mode == "error":
        raise LimitViolationError("omega", float(om_new[k]), limits.omega_max, float(t[k]))
    if limit_mode == "clamp":
        return (
            np.minimum(om_new, limits.omega_max),
            limits,
            float(np.mean(over)),
        )
    widened = replace(limits, omega_max=float(om_new[k]))
    return om_new, widened, 0.0


def cd_transform(
    base: DriveSchedule,
    n_samples: int = DEFAULT_TRANSFORM_SAMPLES,
    *,
    limit_mode: str = "error",
) -> DriveSchedule:
    """Counterdiabatic control synthesis for an arbitrary-phase base.

    Samples the base controls and their derivatives on a uniform grid and
    applies the pointwise redefinition of amplitude, detuning, and phase
    (see the module docstring). The synthesized phase is unwrapped so
    adjacent samples never differ by a 2 pi artifact.

    The amplitude can exceed the base limits (it majorizes the base
    amplitude whenever the correction is nonzero). Policy via limit_mode:
    "error" raises, "clamp" clips and records the clipped fraction, and
    "allow" widens the attached limits to the actual peak.

    Args:
        base: differentiable schedule to transform.
        n_samples: grid resolution (at least 2).
        limit_mode: amplitude bound policy, one of "error", "clamp", "allow".

    Returns:
        Tabulated schedule with protocol "acqc".
    """
    if n_samples < 2:
        raise ValueError("n_samples must be at least 2")
    t, om, de, ph, omd, ded, phd = _sample_with_derivatives(base, n_samples)
    denom = om * om + de * de
    _check_denominator(denom, t, base.limits)

    g1 = om * (1.0 + de * phd / denom)
    g2 = -(om * ded - de * omd) / denom
    om_new = _snap_endpoint_zeros(np.hypot(g1, g2), base.limits)
    de_new = de - om * om * phd / denom
    ph_new = np.unwrap(ph - np.arctan2(g2, g1))

    om_new, out_limits, clip_fraction = _apply_omega_limit(
        om_new, t, base.limits, limit_mode
    )

    return DriveSchedule(
        omega=TabulatedWaveform(times=t, values=om_new),
        delta=TabulatedWaveform(times=t, values=de_new),
        phase=TabulatedWaveform(times=t, values=ph_new),
        total_time=base.total_time,
        limits=out_limits,
        protocol="acqc",
        base_protocol=base.protocol,
        clip_fraction=clip_fraction,
    )


def cd_transform_zero_phase(
    base: DriveSchedule,
    n_samples: int = DEFAULT_TRANSFORM_SAMPLES,
    *,
    limit_mode: str = "error",
) -> DriveSchedule:
    """Counterdiabatic synthesis specialized to zero-phase bases.

    Implements the simplified form directly (g1 reduces to omega and the
    detuning is untouched) rather than delegating, so the general transform
    can be validated against it.

    Args:
        base: schedule whose phase is identically zero.
        n_samples: grid resolution (at least 2).
        limit_mode: amplitude bound policy, as in cd_transform.

    Returns:
        Tabulated schedule with protocol "acqc".
    """
    if n_samples < 2:
        raise ValueError("n_samples must be at least 2")
    t, om, de, ph, omd, ded, _ = _sample_with_derivatives(base, n_samples)
    if np.any(ph != 0.0):
        raise ValueError("base phase must be identically zero for this transform")
    denom = om * om + de * de
    _check_denominator(denom, t, base.limits)

    g2 = -(om * ded - de * omd) / denom
    om_new = _snap_endpoint_zeros(np.hypot(om, g2), base.limits)
    ph_new = np.unwrap(-np.arctan2(g2, om))

    om_new, out_limits, clip_fraction = _apply_omega_limit(
        om_new, t, base.limits, limit_mode
    )

    return DriveSchedule(
        omega=TabulatedWaveform(times=t, values=om_new),
        delta=TabulatedWaveform(times=t, values=de.copy()),
        phase=TabulatedWaveform(times=t, values=ph_new),
        total_time=base.total_time,
        limits=out_limits,
        protocol="acqc",
        base_protocol=base.protocol,
        clip_fraction=clip_fraction,
    )


def z_rotation_transform(
    cd: DriveSchedule, *, limit_mode: str = "error"
) -> DriveSchedule:
    """Trade the synthesized drive phase for detuning.

    Moving to the frame that co-rotates with the drive phase leaves the
    amplitude unchanged, zeroes the phase, and shifts the detuning by the
    phase velocity:

        delta'' = delta' + d(phi')/dt

    Measured bitstring distributions are unchanged. Intended for schedules
    produced by the counterdiabatic transform, whose phase is already
    tabulated and unwrapped.

    At the window endpoints the amplitude vanishes and the phase value
    there is a pure gauge choice, so differentiating across it would inject
    a spurious detuning spike of no physical consequence. The endpoint
    slopes are therefore extrapolated from the interior of the grid.

    Args:
        cd: schedule to strip of phase control.
        limit_mode: detuning bound policy, one of "error", "clamp", "allow".

    Returns:
        Schedule with protocol "acqc-zrot" and identically zero phase.
    """
    if limit_mode not in LIMIT_MODES:
        raise ValueError(f"limit_mode must be one of {LIMIT_MODES}")
    if isinstance(cd.phase, TabulatedWaveform):
        t = cd.phase.times.copy()
    else:
        t = np.linspace(0.0, cd.total_time, DEFAULT_TRANSFORM_SAMPLES)
    ph = np.unwrap(np.asarray(cd.phase(t), dtype=float))
    de = np.asarray(cd.delta(t), dtype=float)

    h = float(t[1] - t[0])
    dph = np.empty_like(ph)
    if ph.size == 2:
        dph[:] = (ph[1] - ph[0]) / h
    else:
        dph[1:-1] = (ph[2:] - ph[:-2]) / (2.0 * h)
        dph[0] = (-3.0 * ph[0] + 4.0 * ph[1] - ph[2]) / (2.0 * h)
        dph[-1] = (3.0 * ph[-1] - 4.0 * ph[-2] + ph[-3]) / (2.0 * h)
    if ph.size >= 5:
        # Endpoint phase values are gauge (amplitude is zero there); take the
        # boundary slopes from the interior instead of across the endpoints.
        dph[1] = 2.0 * dph[2] - dph[3]
        dph[0] = 2.0 * dph[1] - dph[2]
        dph[-2] = 2.0 * dph[-3] - dph[-4]
        dph[-1] = 2.0 * dph[-2] - dph[-3]

    de_new = de + dph
    out_limits = cd.limits
    clip_fraction = cd.clip_fraction
    over = np.abs(de_new) > cd.limits.delta_max
    if np.any(over):
        k = int(np.argmax(np.abs(de_new)))
        if limit_mode == "error":
            raise LimitViolationError(
                "delta", float(de_new[k]), cd.limits.delta_max, float(t[k])
            )
        if limit_mode == "clamp":
            de_new = np.clip(de_new, -cd.limits.delta_max, cd.limits.delta_max)
            clip_fraction = max(clip_fraction, float(np.mean(over)))
        else:
            out_limits = replace(cd.limits, delta_max=float(np.abs(de_new[k])))

    return DriveSchedule(
        omega=cd.omega,
        delta=TabulatedWaveform(times=t, values=de_new),
        phase=constant_waveform(0.0, cd.total_time),
        total_time=cd.total_time,
        limits=out_limits,
        protocol="acqc-zrot",
        base_protocol=cd.base_protocol or cd.protocol,
        clip_fraction=clip_fraction,
    )


# ---------------------------------------------------------------------------
# Validation and sampling
# ---------------------------------------------------------------------------


def validate_boundary(
    schedule: DriveSchedule, tolerance: float | None = None
) -> BoundaryReport:
    """Check the annealing boundary conditions at the window endpoints.

    Passing requires |omega| <= tolerance at both ends, delta(0) <=
    -tolerance, and delta(T) >= tolerance (the sweep must genuinely cross
    from negative to positive detuning).

    Args:
        schedule: schedule to check.
        tolerance: endpoint tolerance in rad/us; defaults to
            1e-6 * omega_max of the schedule's limits.
    """
    if tolerance is None:
        tolerance = 1e-6 * schedule.limits.omega_max
    om_start = float(schedule.omega(0.0))
    om_end = float(schedule.omega(schedule.total_time))
    de_start = float(schedule.delta(0.0))
    de_end = float(schedule.delta(schedule.total_time))
    passed = (
        abs(om_start) <= tolerance
        and abs(om_end) <= tolerance
        and de_start <= -tolerance
        and de_end >= tolerance
    )
    return BoundaryReport(
        omega_start=om_start,
        omega_end=om_end,
        delta_start=de_start,
        delta_end=de_end,
        tolerance=float(tolerance),
        passed=passed,
    )


def sample_schedule(schedule: DriveSchedule, n_samples: int) -> np.ndarray:
    """Uniform table of the three controls, endpoints included.

    Returns:
        Array of shape (n_samples, 4) with columns t, omega, delta, phi.
        Sampling a tabulated waveform on its own grid reproduces its
        values exactly.
    """
    if n_samples < 2:
        raise ValueError("n_samples must be at least 2")
    t = np.linspace(0.0, schedule.total_time, n_samples)
    return np.column_stack(
        (
            t,
            np.asarray(schedule.omega(t), dtype=float),
            np.asarray(schedule.delta(t), dtype=float),
            np.asarray(schedule.phase(t), dtype=float),
        )
    )


def schedule_to_dict(
    schedule: DriveSchedule, n_samples: int = DEFAULT_EXPORT_SAMPLES
) -> dict:
    """JSON-ready description of a schedule (sampled controls plus limits)."""
    table = sample_schedule(schedule, n_samples)
    return {
        "protocol": schedule.protocol,
        "T_us": schedule.total_time,
        "units": UNIT_CONVENTION,
        "base": schedule.base_protocol,
        "limits": schedule.limits.to_dict(),
        "clip_fraction": schedule.clip_fraction,
        "samples": [
            {"t": row[0], "omega": row[1], "delta": row[2], "phi": row[3]}
            for row in table.tolist()
        ],
    }


def save_schedule_json(
    schedule: DriveSchedule, path, n_samples: int = DEFAULT_EXPORT_SAMPLES
) -> None:
    Path(path).write_text(
        json.dumps(schedule_to_dict(schedule, n_samples), indent=2) + "\n"
    )


def save_schedule_csv(
    schedule: DriveSchedule, path, n_samples: int = DEFAULT_EXPORT_SAMPLES
) -> None:
    table = sample_schedule(schedule, n_samples)
    lines = ["t,omega,delta,phi"]
    for row in table:
        lines.append(",".join(f"{x:.12g}" for x in row))
    Path(path).write_text("\n".join(lines) + "\n")

"""Exact state-vector evolution and protocol-level experiment runs.

Evolution solves i d/dt psi = H(t) psi from the all-ground product state
with an adaptive high-order explicit stepper (Dormand-Prince pairs from
scipy) whose step size is additionally capped by dt_max. Norm drift is
monitored rather than corrected; renormalization is off by default so a
failing integration surfaces as an error instead of being papered over.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .constants import (
    C6_DEFAULT,
    RNG_ALGORITHM,
    SIMULATION_QUBIT_CAP,
    UNIT_CONVENTION,
)
from .errors import DimensionError, IntegrationError
from .graph import CostParams, MisSolution, UnitDiskGraph, cost_energy, solve_mis_exact
from .hamiltonian import RydbergHamiltonian, build_interactions
from .schedule import (
    DriveSchedule,
    HardwareLimits,
    cd_transform,
    linear_schedule,
    smooth_schedule,
    z_rotation_transform,
)

__all__ = [
    "PROTOCOLS",
    "StateVector",
    "EvolutionConfig",
    "RunResult",
    "evolve",
    "evolve_trajectory",
    "ground_state_fidelity",
    "sample_bitstrings",
    "run_protocol",
    "build_protocol_schedule",
    "index_to_bitstring",
    "bitstring_to_index",
]

PROTOCOLS = ("linear", "smooth", "acqc", "acqc-zrot")

_METHOD_BY_ORDER = {4: "RK45", 8: "DOP853"}


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------


@dataclass
class StateVector:
    """Complex amplitudes over the 2^n computational basis, little-endian."""

    amplitudes: np.ndarray
    n_qubits: int

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (1 << self.n_qubits,):
            raise DimensionError(
                f"amplitude vector of shape {amps.shape} does not match "
                f"{self.n_qubits} qubits"
            )
        self.amplitudes = amps

    @classmethod
    def ground(cls, n_qubits: int) -> "StateVector":
        amps = np.zeros(1 << n_qubits, dtype=complex)
        amps[0] = 1.0
        return cls(amplitudes=amps, n_qubits=n_qubits)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True)
class EvolutionConfig:
    """Integrator settings.

    Attributes:
        dt_max: step-size cap in us; None means total_time / 2000.
        norm_tolerance: allowed |norm - 1| at the final time.
        order: accuracy-order marker, 4 or 8 (explicit embedded pairs).
        renormalize: rescale the final state to unit norm after the check.
        rtol, atol: local error tolerances for the adaptive controller.
    """

    dt_max: float | None = None
    norm_tolerance: float = 1e-6
    order: int = 8
    renormalize: bool = False
    rtol: float = 1e-10
    atol: float = 1e-12

    def __post_init__(self):
        if self.dt_max is not None and self.dt_max <= 0:
            raise ValueError("dt_max must be positive when given")
        if self.norm_tolerance <= 0:
            raise ValueError("norm_tolerance must be positive")
        if self.order not in _METHOD_BY_ORDER:
            raise ValueError(f"order must be one of {sorted(_METHOD_BY_ORDER)}")


@dataclass(frozen=True)
class RunResult:
    """Outcome of one protocol run on one instance.

    samples holds (bitstring, count) pairs in ascending basis-index order,
    with energies evaluated per distinct bitstring in the same order.
    Bitstring character i is qubit i.
    """

    protocol: str
    total_time: float
    seed: int
    shots: int
    samples: tuple[tuple[str, int], ...]
    energies: tuple[float, ...]
    ground_population: float
    final_state: StateVector | None
    params: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        doc = {
            "protocol": self.protocol,
            "T_us": self.total_time,
            "seed": self.seed,
            "shots": self.shots,
            "units": UNIT_CONVENTION,
            "cost": {"A": self.params.get("A"), "B": self.params.get("B")},
            "c6": self.params.get("c6"),
            "ground_population": self.ground_population,
            "samples": [
                {"bitstring": b, "count": c, "energy": e}
                for (b, c), e in zip(self.samples, self.energies)
            ],
            "schedule": {
                "protocol": self.protocol,
                "base": self.params.get("base_protocol"),
                "omega_max": self.params.get("omega_max"),
                "delta_max": self.params.get("delta_max"),
            },
        }
        extra = {
            k: v
            for k, v in self.params.items()
            if k not in ("A", "B", "c6", "base_protocol", "omega_max", "delta_max")
        }
        if extra:
            doc["meta"] = extra
        return doc

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")


# ---------------------------------------------------------------------------
# Bitstring helpers
# ---------------------------------------------------------------------------


def index_to_bitstring(index: int, n_qubits: int) -> str:
    """Basis index to bitstring with qubit i at character i."""
    return "".join("1" if (index >> i) & 1 else "0" for i in range(n_qubits))


def bitstring_to_index(bitstring: str) -> int:
    """Inverse of index_to_bitstring."""
    if any(ch not in "01" for ch in bitstring):
        raise ValueError(f"bitstring may contain only 0 and 1: {bitstring!r}")
    return sum(1 << i for i, ch in enumerate(bitstring) if ch == "1")


# ---------------------------------------------------------------------------
# Evolution
# ---------------------------------------------------------------------------


def _integrate(
    h: RydbergHamiltonian, config: EvolutionConfig, t_eval: Sequence[float]
):
    total_time = h.schedule.total_time
    dt_max = config.dt_max if config.dt_max is not None else total_time / 2000.0
    psi0 = np.zeros(h.dim, dtype=complex)
    psi0[0] = 1.0

    def rhs(t, y):
        return -1j * h._apply_raw(t, y)

    sol = solve_ivp(
        rhs,
        (0.0, total_time),
        psi0,
        method=_METHOD_BY_ORDER[config.order],
        t_eval=list(t_eval),
        max_step=dt_max,
        rtol=config.rtol,
        atol=config.atol,
    )
    if not sol.success:
        raise IntegrationError(f"time evolution failed: {sol.message}")
    return sol


def evolve(
    h: RydbergHamiltonian, config: EvolutionConfig | None = None
) -> StateVector:
    """Evolve |0...0> to the end of the schedule window.

    Raises IntegrationError when the final norm drifts beyond the
    configured tolerance (a smaller dt_max or tighter rtol/atol is the
    usual remedy).
    """
    if config is None:
        config = EvolutionConfig()
    total_time = h.schedule.total_time
    sol = _integrate(h, config, [total_time])
    final = sol.y[:, -1]
    drift = abs(np.linalg.norm(final) - 1.0)
    if drift > config.norm_tolerance:
        raise IntegrationError(
            f"norm drifted by {drift:.3e}, beyond the tolerance "
            f"{config.norm_tolerance:.3e}; reduce dt_max or tighten rtol/atol"
        )
    if config.renormalize:
        final = final / np.linalg.norm(final)
    return StateVector(amplitudes=final, n_qubits=h.n_qubits)


def evolve_trajectory(
    h: RydbergHamiltonian,
    times: Sequence[float],
    config: EvolutionConfig | None = None,
) -> list[StateVector]:
    """States at the requested times in one integration pass."""
    if config is None:
        config = EvolutionConfig()
    times = sorted(float(t) for t in times)
    if not times:
        raise ValueError("times must be nonempty")
    if times[0] < 0 or times[-1] > h.schedule.total_time:
        raise ValueError("times must lie within the schedule window")
    sol = _integrate(h, config, times)
    return [
        StateVector(amplitudes=sol.y[:, k], n_qubits=h.n_qubits)
        for k in range(sol.y.shape[1])
    ]


# ---------------------------------------------------------------------------
# Measurement
# ---------------------------------------------------------------------------


def ground_state_fidelity(psi: StateVector, mis: MisSolution) -> float:
    """Total probability on the optimal configurations."""
    if not mis.witnesses:
        raise ValueError("the solution carries no witnesses")
    total = 0.0
    for w in mis.witnesses:
        if len(w) != psi.n_qubits:
            raise DimensionError(
                f"witness length {len(w)} does not match {psi.n_qubits} qubits"
            )
        total += float(np.abs(psi.amplitudes[bitstring_to_index(w)]) ** 2)
    return total


def sample_bitstrings(
    psi: StateVector, shots: int, seed: int
) -> list[tuple[str, int]]:
    """Multinomial bitstring counts from the measurement distribution.

    Returns (bitstring, count) pairs for every observed outcome, ordered
    by ascending basis index. Deterministic for a fixed seed.
    """
    if shots < 1:
        raise ValueError("shots must be at least 1")
    p = psi.probabilities()
    p = np.clip(p, 0.0, None)
    total = p.sum()
    if total <= 0:
        raise ValueError("state has no probability mass")
    p = p / total
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(shots, p)
    return [
        (index_to_bitstring(int(i), psi.n_qubits), int(c))
        for i, c in enumerate(counts)
        if c > 0
    ]


# ---------------------------------------------------------------------------
# Protocol runs
# ---------------------------------------------------------------------------


def build_protocol_schedule(
    protocol: str,
    total_time: float,
    limits: HardwareLimits | None = None,
    *,
    clamp_limits: bool = False,
    n_schedule_samples: int | None = None,
) -> DriveSchedule:
    """Construct the schedule a named protocol runs.

    The counterdiabatic protocols are built on the smooth base. Their
    synthesized amplitude (and, for the phase-free variant, detuning)
    exceeds the base limits whenever the correction is active, so the
    transform runs in "allow" mode by default, recording the actual peak
    in the widened limits; clamp_limits switches to clipping instead.
    """
    if protocol not in PROTOCOLS:
        raise ValueError(f"unknown protocol {protocol!r}, expected one of {PROTOCOLS}")
    if limits is None:
        limits = HardwareLimits()
    mode = "clamp" if clamp_limits else "allow"
    kwargs = {}
    if n_schedule_samples is not None:
        kwargs["n_samples"] = n_schedule_samples
    if protocol == "linear":
        return linear_schedule(limits, total_time)
    if protocol == "smooth":
        return smooth_schedule(limits, total_time)
    base = smooth_schedule(limits, total_time)
    cd = cd_transform(base, limit_mode=mode, **kwargs)
    if protocol == "acqc":
        return cd
    return z_rotation_transform(cd, limit_mode=mode)


def run_protocol(
    graph: UnitDiskGraph,
    protocol: str,
    total_time: float,
    *,
    limits: HardwareLimits | None = None,
    cost: CostParams | None = None,
    shots: int = 500,
    seed: int = 0,
    config: EvolutionConfig | None = None,
    c6: float = C6_DEFAULT,
    clamp_limits: bool = False,
) -> RunResult:
    """Simulate one protocol on one instance and sample the outcome.

    Builds the schedule, evolves the full interacting system exactly,
    samples bitstrings, and attaches the classical energy of each distinct
    outcome. The exact optimum is solved alongside so the result carries
    the ground-state population of the final state.

    Args:
        graph: instance to anneal.
        protocol: one of PROTOCOLS.
        total_time: window length T in us.
        limits: drive bounds (defaults applied when None).
        cost: classical cost coefficients (defaults applied when None).
        shots: number of measurement samples, at least 1.
        seed: sampling seed.
        config: integrator settings.
        c6: interaction coefficient.
        clamp_limits: clip synthesized controls at the limits instead of
            letting them exceed (changes the protocol; off by default).

    Returns:
        RunResult with samples, energies, and run metadata.
    """
    if total_time <= 0:
        raise ValueError("total_time must be positive")
    if shots < 1:
        raise ValueError("shots must be at least 1")
    n = graph.n_vertices
    if n < 1:
        raise ValueError("the instance has no atoms")
    if n > SIMULATION_QUBIT_CAP:
        raise ValueError(
            f"{n} qubits is above the exact-simulation cap {SIMULATION_QUBIT_CAP}"
        )
    if limits is None:
        limits = HardwareLimits()
    if cost is None:
        cost = CostParams()

    schedule = build_protocol_schedule(
        protocol, total_time, limits, clamp_limits=clamp_limits
    )
    interactions = build_interactions(graph, c6)
    h = RydbergHamiltonian(interactions, schedule)
    psi = evolve(h, config)

    mis = solve_mis_exact(graph, cost)
    ground_pop = ground_state_fidelity(psi, mis)
    samples = sample_bitstrings(psi, shots, seed)
    energies = tuple(cost_energy(graph, b, cost) for b, _ in samples)

    peak_omega = float(np.max(np.asarray(schedule.omega(np.linspace(0, total_time, 2001)))))
    params: dict[str, Any] = {
        "A": cost.penalty,
        "B": cost.reward,
        "c6": c6,
        "units": UNIT_CONVENTION,
        "rng": RNG_ALGORITHM,
        "omega_max": limits.omega_max,
        "delta_max": limits.delta_max,
        "base_protocol": schedule.base_protocol,
        "omega_peak": peak_omega,
        "omega_excess": max(0.0, peak_omega - limits.omega_max),
        "clip_fraction": schedule.clip_fraction,
        "clamp_limits": clamp_limits,
        "mis_size": mis.size,
        "mis_energy": mis.energy,
    }
    return RunResult(
        protocol=protocol,
        total_time=float(total_time),
        seed=seed,
        shots=shots,
        samples=tuple(samples),
        energies=energies,
        ground_population=ground_pop,
        final_state=psi if n <= SIMULATION_QUBIT_CAP else None,
        params=params,
    )

"""Driven Rydberg-array Hamiltonian in the computational basis.

With n_i = (1 - sigma_z_i) / 2 counting the excitation on qubit i, the
Hamiltonian (hbar = 1) is

    H(t) = (omega(t) / 2) * sum_i (cos(phi) sigma_x_i - sin(phi) sigma_y_i)
           - delta(t) * sum_i n_i
           + sum_{i<j} J_ij n_i n_j

Basis states are indexed little-endian: bit i of the index is qubit i, and
bit value 1 means excited. The interaction and occupation terms are
diagonal and precomputed once; the drive couples each index to its n
single-bit flips with amplitude (omega/2) e^{+-i phi}, so H acts matrix
free in O(n 2^n) per application. A dense builder exists as an independent
cross-check for small systems.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable

import numpy as np

from .constants import C6_DEFAULT
from .errors import DimensionError, SingularScheduleError
from .graph import UnitDiskGraph
from .schedule import DriveSchedule

if TYPE_CHECKING:  # pragma: no cover
    from .evolve import StateVector

__all__ = [
    "InteractionMatrix",
    "RydbergHamiltonian",
    "CdCoefficients",
    "build_interactions",
    "zero_interactions",
    "apply_hamiltonian",
    "build_dense",
    "cd_coefficients",
    "gauge_residual",
    "DENSE_QUBIT_CAP",
]

DENSE_QUBIT_CAP = 12

# Below this qubit count the flip-index and sign tables are precomputed;
# above it they are rebuilt per application to bound memory.
_PRECOMPUTE_QUBIT_CAP = 16


# ---------------------------------------------------------------------------
# Interactions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InteractionMatrix:
    """Symmetric pair interaction table J_ij with zero diagonal (rad/us)."""

    values: np.ndarray
    c6: float

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError("interaction matrix must be square")
        if not np.allclose(v, v.T):
            raise ValueError("interaction matrix must be symmetric")
        if np.any(np.diagonal(v) != 0.0):
            raise ValueError("interaction matrix must have zero diagonal")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n_qubits(self) -> int:
        return self.values.shape[0]


def build_interactions(
    graph: UnitDiskGraph,
    c6: float = C6_DEFAULT,
    *,
    truncate_to_edges: bool = False,
) -> InteractionMatrix:
    """Pair interactions J_ij = c6 / r_ij^6 for every atom pair.

    All pairs interact regardless of the graph's blockade radius; the
    radius only defines adjacency. Setting truncate_to_edges zeroes the
    interaction beyond the radius, which is useful for quantifying the
    effect of the long-range tail but is not the physical default.

    Args:
        graph: atom layout.
        c6: van der Waals coefficient in rad/us * um^6.
        truncate_to_edges: keep only interactions on graph edges.

    Returns:
        InteractionMatrix for the layout.
    """
    if c6 <= 0:
        raise ValueError("c6 must be positive")
    pos = np.asarray(graph.positions, dtype=float).reshape(graph.n_vertices, 2)
    n = graph.n_vertices
    values = np.zeros((n, n))
    if n > 1:
        diff = pos[:, None, :] - pos[None, :, :]
        dist = np.sqrt((diff**2).sum(axis=-1))
        off = ~np.eye(n, dtype=bool)
        if np.any(dist[off] <= 0.0):
            raise ValueError("coincident atoms give a divergent interaction")
        values[off] = c6 / dist[off] ** 6
        if truncate_to_edges:
            keep = np.zeros((n, n), dtype=bool)
            for u, v in graph.edges:
                keep[u, v] = keep[v, u] = True
            values[~keep] = 0.0
    return InteractionMatrix(values=values, c6=c6)


def zero_interactions(n_qubits: int) -> InteractionMatrix:
    """Interaction-free matrix, for isolated-qubit limits and tests."""
    if n_qubits < 1:
        raise ValueError("n_qubits must be at least 1")
    return InteractionMatrix(values=np.zeros((n_qubits, n_qubits)), c6=0.0)


# ---------------------------------------------------------------------------
# Hamiltonian
# ---------------------------------------------------------------------------


class RydbergHamiltonian:
    """Time-dependent Hamiltonian bound to a schedule and an interaction table.

    Precomputes the static diagonal data (occupation counts and pairwise
    interaction sums over all 2^n basis states) at construction.
    """

    def __init__(self, interactions: InteractionMatrix, schedule: DriveSchedule):
        n = interactions.n_qubits
        if n < 1:
            raise ValueError("need at least one qubit")
        self.interactions = interactions
        self.schedule = schedule
        self.n_qubits = n
        self.dim = 1 << n

        idx = np.arange(self.dim, dtype=np.int64)
        bits = ((idx[:, None] >> np.arange(n)) & 1).astype(np.int8)
        self._index = idx
        self._pop = bits.sum(axis=1).astype(float)

        j = interactions.values
        diag = np.zeros(self.dim)
        for u in range(n):
            ju = j[u]
            bu = bits[:, u]
            for v in range(u + 1, n):
                if ju[v] != 0.0:
                    diag += ju[v] * (bu & bits[:, v])
        self._diag = diag

        self._phase_zero = schedule.phase_is_zero
        if n <= _PRECOMPUTE_QUBIT_CAP:
            self._flips = (idx[None, :] ^ (1 << np.arange(n))[:, None]).astype(np.int64)
            self._signs = np.ascontiguousarray((1.0 - 2.0 * bits).T)
            self._bits = bits
        else:
            self._flips = None
            self._signs = None
            self._bits = None

    def values_at(self, t: float) -> tuple[float, float, float]:
        """Controls (omega, delta, phi) at time t."""
        om = float(self.schedule.omega(t))
        de = float(self.schedule.delta(t))
        ph = 0.0 if self._phase_zero else float(self.schedule.phase(t))
        return om, de, ph

    def _apply_raw(self, t: float, amps: np.ndarray) -> np.ndarray:
        """H(t) @ amps on a bare complex array (hot path)."""
        om, de, ph = self.values_at(t)
        out = (self._diag - de * self._pop) * amps
        if om == 0.0:
            return out
        half = 0.5 * om
        if self._flips is not None:
            gathered = amps[self._flips]
            if ph == 0.0:
                out += half * gathered.sum(axis=0)
            else:
                c = half * np.cos(ph)
                s = half * np.sin(ph)
                out += c * gathered.sum(axis=0)
                out += (1j * s) * (self._signs * gathered).sum(axis=0)
        else:
            idx = self._index
            if ph == 0.0:
                for i in range(self.n_qubits):
                    out += half * amps[idx ^ (1 << i)]
            else:
                c = half * np.cos(ph)
                s = half * np.sin(ph)
                for i in range(self.n_qubits):
                    sign = 1.0 - 2.0 * ((idx >> i) & 1)
                    out += (c + 1j * s * sign) * amps[idx ^ (1 << i)]
        return out


def apply_hamiltonian(h: RydbergHamiltonian, t: float, psi):
    """Apply H(t) to a state without forming the matrix.

    Accepts either a StateVector or a bare complex array of length 2^n and
    returns the same kind.
    """
    amps = np.asarray(getattr(psi, "amplitudes", psi), dtype=complex)
    if amps.shape != (h.dim,):
        raise DimensionError(
            f"state has shape {amps.shape}, expected ({h.dim},) for "
            f"{h.n_qubits} qubits"
        )
    out = h._apply_raw(t, amps)
    if hasattr(psi, "amplitudes"):
        return type(psi)(amplitudes=out, n_qubits=h.n_qubits)
    return out


def build_dense(h: RydbergHamiltonian, t: float) -> np.ndarray:
    """Explicit 2^n x 2^n matrix of H(t), as an independent cross-check.

    Capped at DENSE_QUBIT_CAP qubits. The drive entry between index x and
    x with bit i flipped is (omega/2) e^{i phi} when bit i of x is 1 (the
    lowering component) and the conjugate when it is 0.
    """
    n = h.n_qubits
    if n > DENSE_QUBIT_CAP:
        raise ValueError(f"dense construction is capped at {DENSE_QUBIT_CAP} qubits")
    om, de, ph = h.values_at(t)
    dim = h.dim
    idx = np.arange(dim)
    bits = ((idx[:, None] >> np.arange(n)) & 1).astype(np.int8)
    m = np.zeros((dim, dim), dtype=complex)
    m[idx, idx] = h._diag - de * h._pop
    half = 0.5 * om
    up = half * np.exp(1j * ph)
    for i in range(n):
        rows = idx ^ (1 << i)
        vals = np.where(bits[:, i] == 1, up, np.conj(up))
        m[rows, idx] += vals
    return m


# ---------------------------------------------------------------------------
# Counterdiabatic coefficients and the gauge check
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CdCoefficients:
    """Per-qubit coefficients of the counterdiabatic correction.

    The correction is f_x * sum_i sigma_x_i + f_y * sum_i sigma_y_i
    + f_z * sum_i n_i, with time-dependent coefficients derived from the
    base schedule:

        q   = (omega * ddelta - delta * domega) / (2 (omega^2 + delta^2))
        p   = omega * delta * dphi / (2 (omega^2 + delta^2))
        f_x = -q sin(phi) + p cos(phi)
        f_y = -q cos(phi) - p sin(phi)
        f_z = omega^2 * dphi / (omega^2 + delta^2)
    """

    f_x: Callable
    f_y: Callable
    f_z: Callable
    duration: float


def cd_coefficients(base: DriveSchedule) -> CdCoefficients:
    """Counterdiabatic coefficients for a differentiable base schedule.

    The denominator omega^2 + delta^2 is scanned on a coarse grid at
    construction and the same singular-schedule guard applies as in the
    schedule transforms.
    """
    floor = 1e-9 * (base.limits.omega_max**2 + base.limits.delta_max**2)
    t_scan = np.linspace(0.0, base.total_time, 1001)
    om_s = np.asarray(base.omega(t_scan), dtype=float)
    de_s = np.asarray(base.delta(t_scan), dtype=float)
    denom_s = om_s * om_s + de_s * de_s
    if np.any(denom_s < floor):
        k = int(np.argmin(denom_s))
        raise SingularScheduleError(
            f"omega^2 + delta^2 = {denom_s[k]:.6g} at t = {t_scan[k]:.6g} us, "
            f"below the safety floor {floor:.6g}"
        )

    def _terms(t):
        t = np.asarray(t, dtype=float)
        om = np.asarray(base.omega(t), dtype=float)
        de = np.asarray(base.delta(t), dtype=float)
        ph = np.asarray(base.phase(t), dtype=float)
        omd = np.asarray(base.omega.derivative(t), dtype=float)
        ded = np.asarray(base.delta.derivative(t), dtype=float)
        phd = np.asarray(base.phase.derivative(t), dtype=float)
        denom = om * om + de * de
        q = (om * ded - de * omd) / (2.0 * denom)
        p = om * de * phd / (2.0 * denom)
        return om, ph, phd, denom, q, p

    def f_x(t):
        _, ph, _, _, q, p = _terms(t)
        return -q * np.sin(ph) + p * np.cos(ph)

    def f_y(t):
        _, ph, _, _, q, p = _terms(t)
        return -q * np.cos(ph) - p * np.sin(ph)

    def f_z(t):
        om, _, phd, denom, _, _ = _terms(t)
        return om * om * phd / denom

    return CdCoefficients(f_x=f_x, f_y=f_y, f_z=f_z, duration=base.total_time)


def _operator_sum(op: np.ndarray, n: int) -> np.ndarray:
    """sum_i op_i as a dense 2^n matrix, qubit i on bit i of the index."""
    dim = 1 << n
    total = np.zeros((dim, dim), dtype=complex)
    for i in range(n):
        m = np.kron(np.eye(1 << (n - 1 - i)), np.kron(op, np.eye(1 << i)))
        total += m
    return total


_SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
_NUMBER = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)


def gauge_residual(
    base: DriveSchedule,
    t: float,
    n_qubits: int = 1,
    *,
    interactions: InteractionMatrix | None = None,
    fy_scale: float = 1.0,
) -> float:
    """Operator norm of the counterdiabatic consistency commutator.

    For the drive-only Hamiltonian H(t) (interactions off) and the
    correction K(t) built from cd_coefficients, exact counterdiabatic
    coefficients make

        [dH/dt - i [H, K], H]

    vanish identically. The returned spectral norm is zero up to floating
    point error when the coefficients are right, and order-one (relative to
    the norm scale of H) when they are wrong. fy_scale deliberately
    corrupts the sigma_y coefficient so tests can confirm the check has
    teeth.

    Args:
        base: differentiable base schedule.
        t: evaluation time in us.
        n_qubits: system size, at most 3 (dense construction).
        interactions: must be absent or identically zero; the consistency
            statement holds only in the interaction-free limit.
        fy_scale: multiplier on f_y (1.0 for the honest check).

    Returns:
        Nonnegative residual norm in rad^3/us^3.
    """
    if not 1 <= n_qubits <= 3:
        raise ValueError("the gauge check is limited to 1..3 qubits")
    if interactions is not None and np.any(interactions.values != 0.0):
        raise ValueError(
            "the gauge check is defined in the interaction-free limit; "
            "pass zero interactions or none"
        )

    om = float(base.omega(t))
    de = float(base.delta(t))
    ph = float(base.phase(t))
    omd = float(base.omega.derivative(t))
    ded = float(base.delta.derivative(t))
    phd = float(base.phase.derivative(t))

    sx = _operator_sum(_SIGMA_X, n_qubits)
    sy = _operator_sum(_SIGMA_Y, n_qubits)
    nn = _operator_sum(_NUMBER, n_qubits)

    cosp = np.cos(ph)
    sinp = np.sin(ph)
    h_ad = 0.5 * om * (cosp * sx - sinp * sy) - de * nn
    dh = (
        0.5 * omd * (cosp * sx - sinp * sy)
        + 0.5 * om * phd * (-sinp * sx - cosp * sy)
        - ded * nn
    )

    coeffs = cd_coefficients(base)
    fx = float(coeffs.f_x(t))
    fy = fy_scale * float(coeffs.f_y(t))
    fz = float(coeffs.f_z(t))
    k = fx * sx + fy * sy + fz * nn

    gauge = dh - 1j * (h_ad @ k - k @ h_ad)
    residual = gauge @ h_ad - h_ad @ gauge
    return float(np.linalg.norm(residual, 2))

"""Shot-based statistics: approximation ratios and energy densities."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import MisSolution

__all__ = [
    "EnergyStats",
    "KdeCurve",
    "approximation_ratio",
    "confidence_interval",
    "kde",
]

Z_95 = 1.96


@dataclass(frozen=True)
class EnergyStats:
    """Summary of sampled configuration energies against the exact optimum.

    approximation_ratio is mean energy over optimal energy, so 1.0 means
    every shot hit an optimal configuration. min_ratio uses the best shot
    instead of the mean. ci_half_width is the 95 percent normal-theory
    half-width of the mean estimate (0.0 when only one shot was taken).
    """

    mean: float
    min: float
    std: float
    approximation_ratio: float
    min_ratio: float
    ci_half_width: float
    shots: int


@dataclass(frozen=True)
class KdeCurve:
    """Gaussian kernel density over energies with the bandwidth used."""

    grid: np.ndarray
    density: np.ndarray
    bandwidth: float


def _weighted_moments(
    energies: np.ndarray, counts: np.ndarray
) -> tuple[float, float, int]:
    shots = int(counts.sum())
    mean = float((energies * counts).sum() / shots)
    if shots < 2:
        return mean, 0.0, shots
    var = float((counts * (energies - mean) ** 2).sum() / (shots - 1))
    return mean, np.sqrt(max(var, 0.0)), shots


def _as_energy_arrays(energies, counts) -> tuple[np.ndarray, np.ndarray]:
    e = np.asarray(energies, dtype=float)
    if e.ndim != 1 or e.size == 0:
        raise ValueError("energies must be a nonempty 1-d sequence")
    if counts is None:
        c = np.ones_like(e)
    else:
        c = np.asarray(counts, dtype=float)
        if c.shape != e.shape:
            raise ValueError("counts must match energies in shape")
        if np.any(c < 0) or c.sum() <= 0:
            raise ValueError("counts must be nonnegative with positive total")
    return e, c


def approximation_ratio(
    energies, counts, mis: MisSolution
) -> EnergyStats:
    """Energy statistics of a sampled run relative to the exact optimum.

    Args:
        energies: energy per distinct outcome.
        counts: shot count per outcome (None for unweighted samples).
        mis: exact solution providing the optimal energy.

    Returns:
        EnergyStats. Raises ValueError for a zero optimal energy (an
        empty instance has no meaningful ratio).
    """
    if mis.energy == 0.0:
        raise ValueError("optimal energy is zero; the ratio is undefined")
    e, c = _as_energy_arrays(energies, counts)
    mean, std, shots = _weighted_moments(e, c)
    best = float(e.min())
    ci = Z_95 * std / np.sqrt(shots) if shots >= 2 else 0.0
    return EnergyStats(
        mean=mean,
        min=best,
        std=std,
        approximation_ratio=mean / mis.energy,
        min_ratio=best / mis.energy,
        ci_half_width=float(ci),
        shots=shots,
    )


def confidence_interval(energies, counts=None) -> float:
    """95 percent normal-theory half-width of the mean energy estimate."""
    e, c = _as_energy_arrays(energies, counts)
    mean, std, shots = _weighted_moments(e, c)
    if shots < 2:
        raise ValueError("need at least 2 shots for a confidence interval")
    return float(Z_95 * std / np.sqrt(shots))


def kde(
    energies,
    counts=None,
    *,
    bandwidth: float | None = None,
    n_grid: int = 512,
) -> KdeCurve:
    """Weighted Gaussian kernel density of sampled energies.

    The default bandwidth is the normal-reference rule 1.06 * std *
    shots^(-1/5), floored at 1e-9 times the energy range so repeated
    identical energies still yield a finite curve. The grid spans the data
    range padded by four bandwidths.

    Args:
        energies: energy per distinct outcome.
        counts: shot count per outcome (None for unweighted).
        bandwidth: override the automatic bandwidth.
        n_grid: number of grid points.

    Returns:
        KdeCurve whose density integrates to 1 up to the grid truncation.
    """
    if n_grid < 2:
        raise ValueError("n_grid must be at least 2")
    e, c = _as_energy_arrays(energies, counts)
    _, std, shots = _weighted_moments(e, c)
    span = float(e.max() - e.min())
    if bandwidth is None:
        bw = 1.06 * std * shots ** (-0.2)
        bw = max(bw, 1e-9 * span)
        if bw <= 0.0:
            bw = max(1e-9 * abs(float(e[0])), 1e-12)
    else:
        if bandwidth <= 0:
            raise ValueError("bandwidth must be positive")
        bw = float(bandwidth)
    grid = np.linspace(e.min() - 4.0 * bw, e.max() + 4.0 * bw, n_grid)
    z = (grid[:, None] - e[None, :]) / bw
    weights = c / c.sum()
    density = (weights[None, :] * np.exp(-0.5 * z**2)).sum(axis=1)
    density /= bw * np.sqrt(2.0 * np.pi)
    return KdeCurve(grid=grid, density=density, bandwidth=bw)

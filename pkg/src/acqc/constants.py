"""Shared physical constants and the package-wide unit convention.

All angular frequencies (Rabi amplitude, detuning, interaction strengths)
are in rad/us, times in us, distances in um, with hbar = 1. Numbers quoted
in MHz elsewhere are taken at face value as rad/us under this convention.
"""

from __future__ import annotations

UNIT_CONVENTION = "angular frequencies in rad/us, times in us, distances in um, hbar = 1"

# van der Waals coefficient for the pair interaction C6 / r^6.
C6_DEFAULT = 5.42e6  # rad/us * um^6

# Default drive limits used by the schedule constructors.
OMEGA_MAX_DEFAULT = 15.0  # rad/us
DELTA_MAX_DEFAULT = 17.0  # rad/us

# Default lattice constant for grid-placed atoms.
SPACING_DEFAULT = 5.5  # um

# Identity of the pseudorandom generator used for all sampling.
RNG_ALGORITHM = "numpy-pcg64"

# Hard cap on exact state-vector simulation size.
SIMULATION_QUBIT_CAP = 20


def default_blockade_radius(
    c6: float = C6_DEFAULT, omega_max: float = OMEGA_MAX_DEFAULT
) -> float:
    """Distance at which the pair interaction equals the peak Rabi amplitude.

    Within this radius the interaction dominates the drive and double
    excitation is suppressed, which is what makes independent-set structure
    energetically favored.
    """
    if c6 <= 0 or omega_max <= 0:
        raise ValueError("c6 and omega_max must be positive")
    return (c6 / omega_max) ** (1.0 / 6.0)

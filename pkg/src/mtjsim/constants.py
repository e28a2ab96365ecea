"""Physical constants and unit conventions.

Everything inside the package is strict SI: metres, seconds, amperes, kelvin,
joules, siemens, A/m for magnetic fields.  Conversions to ns / uA / mS happen
only at the I/O boundary (CLI and CSV writers).

Constant values are fixed (CODATA 2010 era) rather than pulled from scipy so
that published outputs stay bit-reproducible across environments.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class PhysicalConstants:
    mu_b: float = 9.27400968e-24    # Bohr magneton [J/T]
    q_e: float = 1.602176565e-19    # elementary charge [C]
    hbar: float = 1.054571726e-34   # reduced Planck constant [J s]
    mu_0: float = 1.2566370614359173e-6  # vacuum permeability, 4 pi e-7 [T m/A]
    k_b: float = 1.3806488e-23      # Boltzmann constant [J/K]

    @property
    def gamma(self) -> float:
        """Electron gyromagnetic ratio 2 mu_B mu_0 / hbar [m/(A s)].

        With this convention gamma * H gives an angular rate directly from a
        field in A/m (numerically ~2.21e5).
        """
        return 2.0 * self.mu_b * self.mu_0 / self.hbar

    def items(self):
        return [
            ("mu_B [J/T]", self.mu_b),
            ("q [C]", self.q_e),
            ("hbar [J s]", self.hbar),
            ("mu_0 [T m/A]", self.mu_0),
            ("k_B [J/K]", self.k_b),
            ("gamma [m/(A s)]", self.gamma),
        ]


CONSTANTS = PhysicalConstants()

SECONDS_PER_HOUR = 3600.0
SECONDS_PER_YEAR = 365.25 * 24.0 * 3600.0

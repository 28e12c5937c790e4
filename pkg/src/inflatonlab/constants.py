"""Physical constants and unit scalings (natural units, hbar = c = 1, GeV base).

All public APIs of the package take and return quantities in plain GeV
powers.  Internally the solvers rescale time, field and expansion rate so
that the state stays O(1)-O(1e3); the scalings live here so every module
agrees on them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# --- gravity ---------------------------------------------------------------

PLANCK_MASS_GEV = 1.22089e19
"""Planck mass in GeV (hbar = c = 1)."""

G_NEWTON = 1.0 / PLANCK_MASS_GEV**2  # 6.70883e-39 GeV^-2
"""Newton constant in GeV^-2."""

# --- default potential couplings (the fitted benchmark point) ---------------

KAPPA_DEFAULT = 8.38e12       # GeV
LAMBDA_DEFAULT = 1.05e-15     # dimensionless

# --- length / time conversions ----------------------------------------------

HBARC_GEV_M = 1.973269804e-16
"""hbar*c in GeV*m: converts lengths to inverse GeV."""

M_IN_INV_GEV = 1.0 / HBARC_GEV_M          # 1 m in GeV^-1
CM_IN_INV_GEV = 1e-2 * M_IN_INV_GEV       # 1 cm in GeV^-1
SECOND_IN_INV_GEV = 299792458.0 * M_IN_INV_GEV

MPC_IN_M = 3.0856775814913673e22
MPC_IN_INV_GEV = MPC_IN_M * M_IN_INV_GEV  # 1 Mpc in GeV^-1

GRAM_GEV = 5.609588603e23                 # 1 g in GeV
GRAM_PER_CM3_IN_GEV4 = GRAM_GEV / CM_IN_INV_GEV**3
KEV_GEV = 1e-6


def kev_per_cm_to_gev2(value_kev_per_cm: float) -> float:
    """Convert a stopping power from keV/cm to GeV^2."""
    return value_kev_per_cm * KEV_GEV / CM_IN_INV_GEV


# --- internal scalings -------------------------------------------------------
#
# Raw GeV magnitudes in the inflationary epoch span ~66 decades; the solvers
# work in these units so that times, fields and rates are O(1)-O(1e3).

@dataclass(frozen=True)
class UnitScales:
    """Scalings between raw GeV quantities and the solver's internal units."""

    time_unit: float = 1e-12    # GeV^-1
    field_unit: float = 1e19    # GeV
    hubble_unit: float = 1e14   # GeV

    def __post_init__(self):
        if min(self.time_unit, self.field_unit, self.hubble_unit) <= 0:
            raise ValueError("unit scales must be positive")

    # time
    def to_scaled_time(self, t_gev_inv):
        return t_gev_inv / self.time_unit

    def from_scaled_time(self, tau):
        return tau * self.time_unit

    # field
    def to_scaled_field(self, phi_gev):
        return phi_gev / self.field_unit

    def from_scaled_field(self, f):
        return f * self.field_unit

    # expansion rate
    def to_scaled_hubble(self, h_gev):
        return h_gev / self.hubble_unit

    def from_scaled_hubble(self, h):
        return h * self.hubble_unit

    @property
    def efold_rate(self) -> float:
        """e-folds per scaled time unit per scaled Hubble unit (= 100)."""
        return self.time_unit * self.hubble_unit


SCALES = UnitScales()

TWO_PI = 2.0 * math.pi

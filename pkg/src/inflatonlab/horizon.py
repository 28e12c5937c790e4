"""Horizon-crossing solver and the fixed late-universe constants.

A comoving mode q leaves the horizon when its physical wavenumber q/a(t)
drops to the expansion rate H(t).  With a(t) reconstructed from the e-fold
accumulator, a(t) = a_I exp(-integral_t^{t_I} H dt'), the condition becomes
the logarithmic form

    efolds_to_end(t) = ln( H(t) / (q/a_I) ),

which is what the solver brackets and refines.  The scale factor at the end
of inflation is identified with the last-scattering value a_L.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .background import BackgroundSolution
from .constants import MPC_IN_INV_GEV

DEFAULT_QR_MPC_INV = 0.05
DEFAULT_Z_L = 1089.0
DEFAULT_DA_MPC = 12.99


class NoHorizonExit(RuntimeError):
    """The exit condition has no sign change: not enough inflation in range."""


@dataclass(frozen=True)
class CosmoConstants:
    """Reference wavenumber and last-scattering geometry.

    q_R         : GeV, comoving pivot wavenumber
    a_L         : scale factor at last scattering (a(today) = 1)
    d_A         : GeV^-1, angular distance of the last-scattering surface
    r_L         : GeV^-1, radial coordinate d_A / a_L
    q_R_over_aI : GeV, physical pivot wavenumber at the end of inflation
    """

    q_R: float
    a_L: float
    d_A: float
    r_L: float
    q_R_over_aI: float

    def __post_init__(self):
        if abs(self.r_L - self.d_A / self.a_L) > 1e-3 * self.r_L:
            raise ValueError("r_L inconsistent with d_A / a_L")
        if abs(self.q_R_over_aI - self.q_R / self.a_L) > 1e-2 * self.q_R_over_aI:
            raise ValueError("q_R_over_aI inconsistent with q_R / a_L")

    @classmethod
    def from_physical(cls, q_R_mpc_inv: float = DEFAULT_QR_MPC_INV,
                      z_L: float = DEFAULT_Z_L,
                      d_A_mpc: float = DEFAULT_DA_MPC) -> "CosmoConstants":
        q_R = q_R_mpc_inv / MPC_IN_INV_GEV
        a_L = 1.0 / (z_L + 1.0)
        d_A = d_A_mpc * MPC_IN_INV_GEV
        return cls(q_R=q_R, a_L=a_L, d_A=d_A, r_L=d_A / a_L, q_R_over_aI=q_R / a_L)


DEFAULT_CONSTANTS = CosmoConstants.from_physical()


@dataclass(frozen=True)
class HorizonExit:
    """Solved exit point for one mode.

    residual is efolds_to_end(t_exit) - ln(H(t_exit)/(q/a_I)), which the
    solver drives below 1e-6.
    """

    t_exit: float          # GeV^-1
    phi_exit: float        # GeV
    H_exit: float          # GeV
    residual: float
    efolds_to_end: float
    q_over_aI: float       # GeV


def log_q_over_aH(sol: BackgroundSolution, q_over_aI: float, t) -> np.ndarray:
    """ln of q/(a(t) H(t)); log-space because efolds_to_end reaches ~5000."""
    return math.log(q_over_aI) + sol.efolds_to_end(t) - np.log(sol.hubble(t))


def solve_exit_general(sol: BackgroundSolution, q_over_aI: float) -> HorizonExit:
    """Find t with efolds_to_end(t) = ln(H(t)/(q/a_I)) by bracketed refinement.

    The bracket is located by scanning the solver's own grid, where the
    mismatch function is smooth and monotone through the crossing.
    """
    if q_over_aI <= 0:
        raise ValueError("q_over_aI must be positive")
    t_I = sol.end_of_inflation()
    grid = sol.grid_times
    grid = grid[(grid >= sol.t_start) & (grid < t_I)]

    def F(t):
        return float(sol.efolds_to_end(t) - math.log(sol.hubble(t) / q_over_aI))

    vals = np.array([F(t) for t in grid])
    sign_change = np.where(np.diff(np.sign(vals)) != 0)[0]
    if len(sign_change) == 0:
        raise NoHorizonExit(
            f"q/a_I = {q_over_aI:.3e} GeV never satisfies the exit condition; "
            "parameters produce insufficient inflation in range")
    i = sign_change[0]
    t_exit = brentq(F, grid[i], grid[i + 1], xtol=1e-18, rtol=1e-15)
    res = F(t_exit)
    if abs(res) > 1e-6:
        # secant polish; brentq at these tolerances normally leaves |F| ~ 1e-10
        t2 = t_exit - res * (grid[i + 1] - grid[i]) / (F(grid[i + 1]) - F(grid[i]))
        if abs(F(t2)) < abs(res):
            t_exit, res = t2, F(t2)
    return HorizonExit(
        t_exit=float(t_exit),
        phi_exit=float(sol.phi(t_exit)),
        H_exit=float(sol.hubble(t_exit)),
        residual=float(res),
        efolds_to_end=float(sol.efolds_to_end(t_exit)),
        q_over_aI=float(q_over_aI),
    )


def solve_exit_reference(sol: BackgroundSolution,
                         consts: CosmoConstants = DEFAULT_CONSTANTS) -> HorizonExit:
    """Exit of the pivot mode q_R."""
    return solve_exit_general(sol, consts.q_R_over_aI)


def solve_exit_direct(sol: BackgroundSolution, q_over_aI: float) -> float:
    """Exit time from the defining condition q/a(t) = H(t) solved directly.

    Cross-check path for the logarithmic form; returns the time only.
    """
    t_I = sol.end_of_inflation()
    grid = sol.grid_times
    grid = grid[(grid >= sol.t_start) & (grid < t_I)]

    def g(t):
        return float(log_q_over_aH(sol, q_over_aI, t))

    vals = np.array([g(t) for t in grid])
    sign_change = np.where(np.diff(np.sign(vals)) != 0)[0]
    if len(sign_change) == 0:
        raise NoHorizonExit("no direct-form crossing in range")
    i = sign_change[0]
    return brentq(g, grid[i], grid[i + 1], xtol=1e-18, rtol=1e-15)

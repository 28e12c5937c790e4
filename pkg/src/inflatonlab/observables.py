"""Slow-roll functions, primordial spectra and comparison against survey targets.

The spectral report is built from the potential-shape functions at a horizon
exit:

    epsilon = (V'/V)^2 / (16 pi G)
    delta   = (V'^2/V^2 - 2 V''/V) / (16 pi G)

with the amplitude/tilt identities n_s = 1 - 4 eps - 2 delta, n_T = -2 eps,
[N_S]^2 = G H^2 / (4 pi^2 eps), [N_T]^2 = G H^2 / pi^2 and r = 16 eps held
exactly by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .horizon import DEFAULT_CONSTANTS, CosmoConstants, HorizonExit
from .perturbations import GravityMode, get_gravity_mode
from .potential import PotentialParams, potential, potential_d1, potential_d2


class SlowRollDomainError(ValueError):
    """V(phi) <= 0: outside the slow-roll domain."""


def slow_roll_functions(params: PotentialParams, phi: float) -> tuple[float, float]:
    """(epsilon, delta) at field value phi.  Requires V(phi) > 0.

    The quartic is a perfect square, so "outside the domain" means at (or
    numerically indistinguishable from) the minimum, where V'/V diverges.
    """
    V = potential(params, phi)
    v2 = params.kappa**2 / params.lam
    floor = 1e-13 * 0.25 * params.lam * np.asarray(phi * phi + v2) ** 2
    if np.any(np.asarray(V) <= floor):
        raise SlowRollDomainError(f"V(phi) vanishes at phi = {phi:g}")
    Vp = potential_d1(params, phi)
    Vpp = potential_d2(params, phi)
    pref = 1.0 / (16 * np.pi * params.G)
    eps = pref * (Vp / V) ** 2
    delta = pref * ((Vp / V) ** 2 - 2 * Vpp / V)
    return eps, delta


@dataclass(frozen=True)
class SlowRollReport:
    """Spectral observables at one horizon exit."""

    epsilon: float
    delta: float
    n_s: float
    n_T: float
    NS2: float            # scalar amplitude [N_S]^2
    NT2: float            # tensor amplitude [N_T]^2
    r: float              # tensor-to-scalar ratio
    t_exit: float
    phi_exit: float
    H_exit: float
    gravity: str = GravityMode.QUANTUM.value

    def __post_init__(self):
        # the report's defining identities, re-asserted on every construction
        assert self.n_s == 1 - 4 * self.epsilon - 2 * self.delta
        assert self.n_T == -2 * self.epsilon
        if self.gravity == GravityMode.QUANTUM.value:
            assert self.r == 16 * self.epsilon
            assert abs(self.NT2 / self.NS2 - 4 * self.epsilon) <= 1e-12 * 4 * self.epsilon

    def to_dict(self) -> dict:
        return {
            "epsilon": self.epsilon, "delta": self.delta,
            "n_s": self.n_s, "n_T": self.n_T,
            "NS2": self.NS2, "NT2": self.NT2, "r": self.r,
            "t_exit_gev_inv": self.t_exit, "phi_exit_gev": self.phi_exit,
            "H_exit_gev": self.H_exit, "gravity": self.gravity,
        }


def spectra_report(params: PotentialParams, exit: HorizonExit,
                   gravity: GravityMode | None = None) -> SlowRollReport:
    """Populate the full report at a solved exit.

    In classical-gravity mode the tensor sector is switched off: the tensor
    amplitude and r are identically zero while the scalar sector is kept.
    """
    if gravity is None:
        gravity = get_gravity_mode()
    eps, delta = slow_roll_functions(params, exit.phi_exit)
    NS2 = params.G * exit.H_exit**2 / (4 * np.pi**2 * eps)
    if gravity is GravityMode.CLASSICAL:
        NT2, r = 0.0, 0.0
    else:
        NT2 = params.G * exit.H_exit**2 / np.pi**2
        r = 16 * eps
    return SlowRollReport(
        epsilon=eps, delta=delta,
        n_s=1 - 4 * eps - 2 * delta, n_T=-2 * eps,
        NS2=NS2, NT2=NT2, r=r,
        t_exit=exit.t_exit, phi_exit=exit.phi_exit, H_exit=exit.H_exit,
        gravity=gravity.value,
    )


def power_spectrum(report: SlowRollReport, q: float, mode: str = "scalar",
                   consts: CosmoConstants = DEFAULT_CONSTANTS) -> float:
    """Power-law spectrum amplitude at wavenumber q (q^-3-weighted form).

    scalar: [N_S]^2 q_R^-3 (q/q_R)^(n_s - 4)
    tensor: [N_T]^2 q_R^-3 (q/q_R)^(n_T - 3)
    """
    if q <= 0:
        raise ValueError("q must be positive")
    qR = consts.q_R
    if mode == "scalar":
        return report.NS2 * qR**-3 * (q / qR) ** (report.n_s - 4)
    if mode == "tensor":
        return report.NT2 * qR**-3 * (q / qR) ** (report.n_T - 3)
    raise ValueError(f"mode must be 'scalar' or 'tensor', got {mode!r}")


@dataclass(frozen=True)
class ObservationalTargets:
    """Survey values the report is graded against."""

    n_s: float = 0.966
    n_s_sigma: float = 0.003
    NS2: float = 1.93e-10
    NS2_sigma: float = 0.12e-10
    r_bound: float = 0.032


DEFAULT_TARGETS = ObservationalTargets()


@dataclass(frozen=True)
class TargetRecord:
    name: str
    value: float
    target: float
    sigma: float
    z: float
    within_2sigma: bool


@dataclass(frozen=True)
class TargetComparison:
    records: tuple[TargetRecord, ...]
    r: float
    r_bound: float
    r_bound_violated: bool

    def to_dict(self) -> dict:
        return {
            "records": [vars(r) for r in self.records],
            "r": self.r, "r_bound": self.r_bound,
            "r_bound_violated": self.r_bound_violated,
        }


def compare_targets(report: SlowRollReport,
                    targets: ObservationalTargets = DEFAULT_TARGETS) -> TargetComparison:
    """Per-observable z-scores plus the tensor-ratio bound verdict."""
    recs = []
    for name, value, target, sigma in (
        ("n_s", report.n_s, targets.n_s, targets.n_s_sigma),
        ("NS2", report.NS2, targets.NS2, targets.NS2_sigma),
    ):
        z = (value - target) / sigma
        recs.append(TargetRecord(name=name, value=value, target=target,
                                 sigma=sigma, z=z, within_2sigma=abs(z) <= 2))
    return TargetComparison(
        records=tuple(recs),
        r=report.r,
        r_bound=targets.r_bound,
        r_bound_violated=report.r >= targets.r_bound,
    )

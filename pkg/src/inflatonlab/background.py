"""Background evolution of the inflaton-Friedmann system.

The dynamical state is (phi, phidot) only: the expansion rate follows
algebraically from the energy constraint

    H^2 = (8 pi G / 3) (phidot^2/2 + V(phi)),

and ln a is accumulated by quadrature of H, so no exponentially growing
variable ever enters the ODE state.  Integration starts from the asymptotic
solution phi = v e^{alpha t}, valid while phi is far below the minimum, and
runs through the end of inflation into the damped-oscillation phase.

Internally everything is scaled (time/1e-12 GeV^-1, field/1e19 GeV,
H/1e14 GeV); the public accessors speak GeV.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .constants import SCALES, UnitScales
from .potential import (
    DerivedConstants,
    PotentialParams,
    derive_constants,
    epsilon_of_field,
)

DEFAULT_T_START = -25e-12   # GeV^-1
DEFAULT_T_END = 15e-12      # GeV^-1
DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-12

# asymptotic initial data is trusted only while phi stays well below the minimum
MAX_START_FIELD_FRACTION = 0.15


class IntegrationError(RuntimeError):
    """Integration failed (step-size underflow, non-finite state, bad residual)."""


class EndOfInflationNotFound(RuntimeError):
    """The solution never meets the end-of-inflation criterion in range."""


class EndCriterion(str, enum.Enum):
    """How the end of inflation t_I is detected."""

    FIELD_CROSSING = "field"     # first t with phi(t) = v
    EPSILON_UNITY = "epsilon"    # first t with epsilon(t) = 1


@dataclass(frozen=True)
class BackgroundState:
    """Instantaneous background state, all in GeV powers.

    N counts e-folds accumulated since the start of the integration.
    """

    t: float
    phi: float
    phidot: float
    H: float
    N: float


class _Coeffs:
    """Scaled ODE coefficients for one parameter set."""

    def __init__(self, params: PotentialParams, scales: UnitScales):
        T0, F0, HU = scales.time_unit, scales.field_unit, scales.hubble_unit
        pref = 8 * math.pi * params.G / 3
        self.kin = pref * F0**2 / (2 * T0**2 * HU**2)
        self.v4 = pref * (params.lam * F0**4 / 4) / HU**2
        self.vbar2 = params.kappa**2 / params.lam / F0**2    # (v/F0)^2
        self.k1 = params.kappa**2 * T0**2
        self.k2 = params.lam * F0**2 * T0**2
        self.efold = scales.efold_rate  # 100

    def hubble(self, f, g):
        # factored potential keeps h^2 nonnegative and cancellation-free
        h2 = self.kin * g * g + self.v4 * (f * f - self.vbar2) ** 2
        return np.sqrt(h2)

    def rhs(self, tau, y):
        f, g = y[0], y[1]
        h = self.hubble(f, g)
        return [g, -3 * self.efold * h * g + self.k1 * f - self.k2 * f**3, self.efold * h]


def _hermite(x, xn, yn, dn):
    """Piecewise cubic Hermite evaluation on a strictly increasing grid.

    Reproduces grid nodes exactly and uses the stored ODE derivatives, so the
    interpolant is C^1 and consistent with the dynamics at every node.
    """
    x = np.asarray(x, dtype=float)
    i = np.clip(np.searchsorted(xn, x, side="right") - 1, 0, len(xn) - 2)
    h = xn[i + 1] - xn[i]
    s = (x - xn[i]) / h
    s2, s3 = s * s, s * s * s
    h00 = 2 * s3 - 3 * s2 + 1
    h10 = s3 - 2 * s2 + s
    h01 = -2 * s3 + 3 * s2
    h11 = s3 - s2
    return h00 * yn[i] + h10 * h * dn[i] + h01 * yn[i + 1] + h11 * h * dn[i + 1]


@dataclass
class BackgroundSolution:
    """Integrated background with dense interpolation.

    Grid arrays live in scaled units; accessor methods take/return GeV.
    """

    params: PotentialParams
    derived: DerivedConstants
    scales: UnitScales
    t_start: float                    # GeV^-1
    t_end: float                      # GeV^-1
    rtol: float
    atol: float
    tau: np.ndarray                   # scaled times, strictly increasing
    f: np.ndarray                     # phi / field_unit
    g: np.ndarray                     # dphi/dtau (scaled)
    N: np.ndarray                     # e-folds from start
    fp: np.ndarray                    # df/dtau at nodes (= g)
    gp: np.ndarray                    # dg/dtau at nodes
    Np: np.ndarray                    # dN/dtau at nodes (= 100 h)
    t_I: float | None = None          # end of inflation (GeV^-1), default criterion
    _coeffs: _Coeffs = field(default=None, repr=False)

    # -- construction helpers -------------------------------------------------

    def __post_init__(self):
        if self._coeffs is None:
            self._coeffs = _Coeffs(self.params, self.scales)
        if np.any(np.diff(self.tau) <= 0):
            raise IntegrationError("time grid is not strictly increasing")

    # -- scaled-space evaluation ----------------------------------------------

    def _tau_of(self, t):
        tau = np.asarray(t, dtype=float) / self.scales.time_unit
        lo, hi = self.tau[0], self.tau[-1]
        if np.any(tau < lo - 1e-9) or np.any(tau > hi + 1e-9):
            raise ValueError(f"t outside solution range [{lo}, {hi}] (scaled)")
        return np.clip(tau, lo, hi)

    def _f(self, tau):
        return _hermite(tau, self.tau, self.f, self.fp)

    def _g(self, tau):
        return _hermite(tau, self.tau, self.g, self.gp)

    def _N(self, tau):
        return _hermite(tau, self.tau, self.N, self.Np)

    def _h(self, tau):
        # H from the constraint, never interpolated directly
        return self._coeffs.hubble(self._f(tau), self._g(tau))

    # -- public accessors (GeV in, GeV out) -----------------------------------

    def phi(self, t):
        return self._f(self._tau_of(t)) * self.scales.field_unit

    def phidot(self, t):
        return self._g(self._tau_of(t)) * self.scales.field_unit / self.scales.time_unit

    def hubble(self, t):
        return self._h(self._tau_of(t)) * self.scales.hubble_unit

    def efolds_from_start(self, t):
        return self._N(self._tau_of(t))

    def state(self, t: float) -> BackgroundState:
        tau = self._tau_of(t)
        return BackgroundState(
            t=float(t),
            phi=float(self.phi(t)),
            phidot=float(self.phidot(t)),
            H=float(self.hubble(t)),
            N=float(self.efolds_from_start(t)),
        )

    @property
    def grid_times(self) -> np.ndarray:
        """Accepted solver steps in GeV^-1."""
        return self.tau * self.scales.time_unit

    # -- end of inflation and e-fold bookkeeping ------------------------------

    def end_of_inflation(self, criterion: EndCriterion = EndCriterion.FIELD_CROSSING) -> float:
        if criterion == EndCriterion.FIELD_CROSSING and self.t_I is not None:
            return self.t_I
        t = end_of_inflation(self, criterion)
        if criterion == EndCriterion.FIELD_CROSSING:
            self.t_I = t
        return t

    def efolds_to_end(self, t):
        """Integral of H dt' from t to the end of inflation."""
        N_I = self.efolds_from_start(self.end_of_inflation())
        return N_I - self.efolds_from_start(t)

    def a_over_a_end(self, t):
        """a(t)/a(t_I), reconstructed from the e-fold accumulator."""
        return np.exp(-self.efolds_to_end(t))

    # -- serialization ---------------------------------------------------------

    CACHE_FORMAT = 2

    def to_arrays(self) -> dict:
        d = {
            "format": np.array([self.CACHE_FORMAT]),
            "meta": np.array([self.params.kappa, self.params.lam, self.params.G,
                              self.t_start, self.t_end, self.rtol, self.atol,
                              np.nan if self.t_I is None else self.t_I]),
            "tau": self.tau, "f": self.f, "g": self.g, "N": self.N,
            "fp": self.fp, "gp": self.gp, "Np": self.Np,
        }
        return d

    @classmethod
    def from_arrays(cls, d: dict) -> "BackgroundSolution":
        if int(d["format"][0]) != cls.CACHE_FORMAT:
            raise ValueError("incompatible cache format")
        meta = d["meta"]
        params = PotentialParams(kappa=float(meta[0]), lam=float(meta[1]), G=float(meta[2]))
        t_I = None if math.isnan(float(meta[7])) else float(meta[7])
        return cls(
            params=params, derived=derive_constants(params), scales=SCALES,
            t_start=float(meta[3]), t_end=float(meta[4]),
            rtol=float(meta[5]), atol=float(meta[6]),
            tau=d["tau"], f=d["f"], g=d["g"], N=d["N"],
            fp=d["fp"], gp=d["gp"], Np=d["Np"], t_I=t_I,
        )


# -- operations ----------------------------------------------------------------

def initial_state(params: PotentialParams, t_start: float,
                  scales: UnitScales = SCALES) -> BackgroundState:
    """Asymptotic initial data phi = v e^{alpha t}, phidot = alpha phi.

    Rejects start times at which the linearized form is no longer trustworthy
    (phi above 15% of the potential minimum).
    """
    der = derive_constants(params)
    phi = der.v * math.exp(der.alpha * t_start)
    if phi > MAX_START_FIELD_FRACTION * der.v:
        raise ValueError(
            f"t_start={t_start:g} gives phi/v={phi / der.v:.3f} > "
            f"{MAX_START_FIELD_FRACTION}; start earlier"
        )
    phidot = der.alpha * phi
    H = math.sqrt(8 * math.pi * params.G / 3
                  * (0.5 * phidot**2 + params.kappa**4 / (4 * params.lam)
                     - 0.5 * params.kappa**2 * phi**2 + 0.25 * params.lam * phi**4))
    return BackgroundState(t=t_start, phi=phi, phidot=phidot, H=H, N=0.0)


def integrate(params: PotentialParams,
              t_start: float = DEFAULT_T_START,
              t_end: float = DEFAULT_T_END,
              rtol: float = DEFAULT_RTOL,
              atol: float = DEFAULT_ATOL,
              scales: UnitScales = SCALES,
              detect_end: bool = True) -> BackgroundSolution:
    """Integrate the self-contained (phi, phidot) system with adaptive steps.

    H is evaluated algebraically from the constraint at every step and the
    e-fold count is carried as a quadrature variable.  The post-inflation
    oscillation (period ~0.5e-12 GeV^-1) is resolved, not stiff-suppressed.
    """
    if t_end <= t_start:
        raise ValueError("t_end must exceed t_start")
    ini = initial_state(params, t_start, scales)
    co = _Coeffs(params, scales)
    tau0 = t_start / scales.time_unit
    tau1 = t_end / scales.time_unit
    y0 = [ini.phi / scales.field_unit,
          ini.phidot * scales.time_unit / scales.field_unit,
          0.0]

    sol = solve_ivp(co.rhs, (tau0, tau1), y0, method="DOP853",
                    rtol=rtol, atol=atol, dense_output=True)
    if not sol.success:
        raise IntegrationError(f"solver failed near t = {sol.t[-1] * scales.time_unit:g}: "
                               f"{sol.message}")
    if not np.all(np.isfinite(sol.y)):
        raise IntegrationError("non-finite state encountered")

    # refine the storage grid below the solver's own (large, 8th-order) steps
    # so the cubic Hermite interpolant stays near the 1e-7 level; at least six
    # subintervals per accepted step, since the step length already tracks the
    # local curvature (steep end-of-inflation approach, oscillation tail)
    pieces = [np.array([sol.t[0]])]
    for a, b in zip(sol.t[:-1], sol.t[1:]):
        n_sub = max(math.ceil((b - a) / 0.05), 6)
        pieces.append(np.linspace(a, b, n_sub + 1)[1:])
    tau = np.concatenate(pieces)
    f, g, N = sol.sol(tau)
    derivs = np.array([co.rhs(t, (fi, gi, Ni)) for t, fi, gi, Ni in zip(tau, f, g, N)]).T

    bg = BackgroundSolution(
        params=params, derived=derive_constants(params), scales=scales,
        t_start=t_start, t_end=t_end, rtol=rtol, atol=atol,
        tau=tau, f=f, g=g, N=N, fp=derivs[0], gp=derivs[1], Np=derivs[2],
    )
    _check_midpoint_residual(bg, co)
    if detect_end:
        try:
            bg.t_I = end_of_inflation(bg)
        except EndOfInflationNotFound:
            bg.t_I = None
    return bg


def _check_midpoint_residual(bg: BackgroundSolution, co: _Coeffs,
                             limit: float = 1e-6) -> None:
    """Abort if the dense output disagrees with the ODE at step midpoints.

    Guards against silently accepting a corrupted solve.  The check covers
    the inflationary phase, which feeds every downstream consumer; in the
    damped-oscillation tail the stored cubic interpolant is curvature-limited
    (omega^4 growth of the fourth derivative) and only display-grade.
    """
    vbar = bg.derived.v / bg.scales.field_unit
    inside = bg.f < vbar
    last = len(bg.tau) - 1 if np.all(inside) else int(np.argmax(~inside))
    mid = 0.5 * (bg.tau[: last - 1] + bg.tau[1:last])
    mid = mid[:: max(1, len(mid) // 200)]
    g = bg._g(mid)
    # d(f)/dtau must equal g; compare Hermite slope against interpolated g
    eps = 1e-7
    slope = (bg._f(mid + eps) - bg._f(mid - eps)) / (2 * eps)
    scale = np.maximum(np.abs(g), np.max(np.abs(bg.g[:last])) * 1e-3)
    worst = float(np.max(np.abs(slope - g) / scale))
    if worst > limit:
        raise IntegrationError(f"dense-output residual {worst:.2e} exceeds {limit:g}")


def end_of_inflation(sol: BackgroundSolution,
                     criterion: EndCriterion = EndCriterion.FIELD_CROSSING) -> float:
    """Time of the end of inflation, by bracketed root finding on dense output.

    Default: first crossing phi(t) = v.  Alternative: first epsilon(t) = 1.
    """
    scales = sol.scales
    if criterion == EndCriterion.FIELD_CROSSING:
        target = sol.derived.v / scales.field_unit

        def fn(tau):
            return sol._f(tau) - target
    elif criterion == EndCriterion.EPSILON_UNITY:
        def fn(tau):
            return float(epsilon_of_field(sol.params, sol._f(tau) * scales.field_unit)) - 1.0
    else:
        raise ValueError(f"unknown criterion {criterion!r}")

    vals = np.array([fn(t) for t in sol.tau])
    pos = np.where(vals >= 0)[0]
    if len(pos) == 0 or pos[0] == 0:
        raise EndOfInflationNotFound(
            f"no {criterion.value} crossing in [{sol.t_start:g}, {sol.t_end:g}]")
    i = pos[0]
    tau_I = brentq(fn, sol.tau[i - 1], sol.tau[i], xtol=1e-12)
    return tau_I * scales.time_unit


def efolds_to_end(sol: BackgroundSolution, t) -> float:
    """Integral of H dt' from t to the end of inflation (module-level form)."""
    return sol.efolds_to_end(t)


class BigBangClass(enum.Enum):
    BB_AT_MINUS_INFINITY = "BB at -infinity"
    NO_BB = "no BB"
    BB_AT_FINITE_TIME = "BB at finite t"


@dataclass(frozen=True)
class BigBangClassification:
    kind: BigBangClass
    t_bb: float | None = None     # GeV^-1, only for the finite-time case


def classify_bigbang(K: float, rho_bar: float, G: float = None,
                     a_bar: float = 1.0) -> BigBangClassification:
    """Locate the zero of the constant-density scale factor for curvature K.

    The general solution a(t) = a_bar e^{Ht} + (K / 4 a_bar H^2) e^{-Ht} with
    H = sqrt(8 pi G rho_bar / 3) has no zero for K > 0, a zero only at
    t -> -infinity for K = 0, and a single finite zero for K < 0 at
    t = ln(-K / (4 a_bar^2 H^2)) / (2H).
    """
    if rho_bar <= 0:
        raise ValueError("rho_bar must be positive")
    if G is None:
        from .constants import G_NEWTON as G
    H = math.sqrt(8 * math.pi * G / 3 * rho_bar)
    if K == 0:
        return BigBangClassification(BigBangClass.BB_AT_MINUS_INFINITY)
    if K > 0:
        return BigBangClassification(BigBangClass.NO_BB)
    t_bb = math.log(-K / (4 * a_bar**2 * H**2)) / (2 * H)
    return BigBangClassification(BigBangClass.BB_AT_FINITE_TIME, t_bb=t_bb)

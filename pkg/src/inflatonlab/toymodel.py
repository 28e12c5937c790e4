"""Finite-dimensional realization of the macroscopic-probability postulate.

A model is an N-dimensional Hilbert space carrying a Hamiltonian, a set of
self-adjoint "macroscopic" observables A_j, one positive weight operator C_j
per observable, a smearing mass mu and an initial density matrix W.  The
central object is the superoperator kernel

    K(xi) W = (1/2) { i sum_j xi_j A_j - (mu^4/2) sum_j xi_j^2 C_j , W },

whose time-ordered exponential, interleaved with the Hamiltonian flow and
realized as a product of constant-coupling slices, generates the
characteristic function

    Phi(k) = Tr{ G[k] W }.

Fourier inversion of Phi yields the joint probability density of the smeared
observables; conditioning that density on observed values reduces the state.

Sign conventions: the kernel couples +i xi_j A_j, the inversion uses
exp(-i k.theta), and moments are (-i d/dk)^n Phi at 0.  This is the unique
assignment under which the density of a sharp observable peaks at its
eigenvalue, the mean equals Tr(A W), and marginalization integrates to one;
the source equations carry one sign slip among these three and are
reconciled here.

Everything is dimensionless; mu plays the role of a mass in the field
theory but enters the toy only through mu^4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import expm

HERMITICITY_TOL = 1e-12
Slice = tuple[float, Sequence[float]]          # (duration, xi per observable)
Template = Sequence[tuple[float, Sequence[float]]]   # (duration, weight row)


class InsufficientDecay(RuntimeError):
    """|Phi| has not decayed below threshold at the k-grid edge (mu too small)."""


def _check_hermitian(M: np.ndarray, name: str, tol: float = HERMITICITY_TOL):
    if np.max(np.abs(M - M.conj().T)) > tol * max(1.0, np.max(np.abs(M))):
        raise ValueError(f"{name} is not self-adjoint within {tol:g}")


@dataclass(frozen=True)
class ToyModel:
    """Hilbert-space model of the postulate's ingredients."""

    dim: int
    hamiltonian: np.ndarray
    observables: tuple[np.ndarray, ...]
    weight_ops: tuple[np.ndarray, ...]
    mu: float
    initial_state: np.ndarray

    def __post_init__(self):
        H = np.asarray(self.hamiltonian, dtype=complex)
        _check_hermitian(H, "hamiltonian")
        if H.shape != (self.dim, self.dim):
            raise ValueError("hamiltonian shape mismatch")
        if len(self.observables) != len(self.weight_ops):
            raise ValueError("need one weight operator per observable")
        for j, A in enumerate(self.observables):
            _check_hermitian(np.asarray(A, dtype=complex), f"observable {j}")
        for j, C in enumerate(self.weight_ops):
            C = np.asarray(C, dtype=complex)
            _check_hermitian(C, f"weight op {j}")
            if np.linalg.eigvalsh(C).min() < -1e-10:
                raise ValueError(f"weight op {j} is not positive semidefinite")
        W = np.asarray(self.initial_state, dtype=complex)
        _check_hermitian(W, "initial state")
        if abs(np.trace(W).real - 1.0) > 1e-12 or abs(np.trace(W).imag) > 1e-12:
            raise ValueError("initial state must have unit trace")
        if np.linalg.eigvalsh(W).min() < -1e-10:
            raise ValueError("initial state is not positive semidefinite")
        if self.mu < 0:
            raise ValueError("mu must be nonnegative")

    @property
    def mu4(self) -> float:
        return self.mu**4

    @property
    def n_obs(self) -> int:
        return len(self.observables)


def two_level_model(c1: float = 1.0, c2: float = 1.0, mu: float = 0.8,
                    hamiltonian: np.ndarray | None = None) -> ToyModel:
    """Two-level benchmark: A = diag(+1,-1), diagonal weight op, mixed state.

    With zero Hamiltonian and a single unit-length slice this model has the
    closed-form characteristic function

        Phi(k) = (e^{ik - mu^4 c1 k^2/2} + e^{-ik - mu^4 c2 k^2/2}) / 2

    and density p = N(+1, mu^4 c1)/2 + N(-1, mu^4 c2)/2.
    """
    H = np.zeros((2, 2), dtype=complex) if hamiltonian is None else hamiltonian
    return ToyModel(
        dim=2,
        hamiltonian=H,
        observables=(np.diag([1.0, -1.0]).astype(complex),),
        weight_ops=(np.diag([c1, c2]).astype(complex),),
        mu=mu,
        initial_state=np.eye(2, dtype=complex) / 2,
    )


def random_model(seed: int, dim: int | None = None, n_obs: int = 1,
                 mu4_range: tuple[float, float] = (0.3, 1.0),
                 random_psd_weights: bool = False) -> ToyModel:
    """Randomized model in the positivity-safe class used by the test battery.

    Weight operators are c0*I + c1*A^2 (or a floored random PSD matrix when
    random_psd_weights is set) and mu^4 stays at O(1), so the Gaussian
    smearing dominates the k-space tails.  The Hamiltonian is rescaled to
    keep ||[H, A_j]|| <= mu^4 lam_min(C_j): the kernel carries no
    double-commutator decoherence, so once the Hamiltonian rotation of an
    observable outruns the smearing variance (empirically at about three
    times this cap) the inverted density develops genuine negative lobes
    and the postulate's positivity claim stops holding.
    """
    rng = np.random.default_rng(seed)
    if dim is None:
        dim = int(rng.integers(2, 5))

    def herm(scale=1.0):
        X = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        return scale * (X + X.conj().T) / 2

    H = herm()
    obs, wops = [], []
    for _ in range(n_obs):
        A = herm()
        if random_psd_weights:
            X = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
            C = X @ X.conj().T / dim + 0.3 * np.eye(dim)
        else:
            C = rng.uniform(0.5, 1.5) * np.eye(dim) + rng.uniform(0.0, 0.5) * (A @ A)
        obs.append(A)
        wops.append(C)
    X = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    W = X @ X.conj().T
    W /= np.trace(W).real
    mu = float(rng.uniform(*mu4_range)) ** 0.25

    cap = min(mu**4 * np.linalg.eigvalsh(C).min() for C in wops)
    rot = max(np.linalg.norm(H @ A - A @ H, 2) for A in obs)
    if rot > cap:
        H = H * (cap / rot)
    return ToyModel(dim=dim, hamiltonian=H, observables=tuple(obs),
                    weight_ops=tuple(wops), mu=mu, initial_state=W)


def pointer_random_model(seed: int, dim: int | None = None) -> ToyModel:
    """Random model in the pointer sector: [H, A] = [W, A] = [C, A] = 0.

    Sharp-outcome conditioning produces an exactly positive reduced state
    only on this sector.  Off it, the conditioning kernel acts as a Hadamard
    multiplier with indefinite sign structure on the observable's
    off-diagonal coherences, and the conditioned operator acquires genuine
    negative eigenvalues of order |W_offdiag| * spectrum^2 / smearing
    variance -- a sharp boundary of the reduction postulate that the
    reduction property test documents rather than hides.
    """
    rng = np.random.default_rng(seed)
    if dim is None:
        dim = int(rng.integers(2, 5))
    X = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    V = np.linalg.qr(X)[0]                          # random common eigenbasis
    a = np.sort(rng.uniform(-1.5, 1.5, size=dim))
    h = rng.uniform(-1.0, 1.0, size=dim)
    c = rng.uniform(0.4, 1.6, size=dim)
    w = rng.uniform(0.05, 1.0, size=dim)
    w /= w.sum()
    mu = float(rng.uniform(0.3, 1.0)) ** 0.25
    diag = lambda d: V @ np.diag(d.astype(complex)) @ V.conj().T
    return ToyModel(dim=dim, hamiltonian=diag(h), observables=(diag(a),),
                    weight_ops=(diag(c),), mu=mu, initial_state=diag(w))


# --- kernel and propagation -----------------------------------------------------

def _coupling_operator(model: ToyModel, xi: Sequence[float]) -> np.ndarray:
    """Y = i sum xi_j A_j - (mu^4/2) sum xi_j^2 C_j."""
    if len(xi) != model.n_obs:
        raise ValueError(f"expected {model.n_obs} couplings, got {len(xi)}")
    Y = np.zeros((model.dim, model.dim), dtype=complex)
    for x, A, C in zip(xi, model.observables, model.weight_ops):
        Y += 1j * x * np.asarray(A, dtype=complex)
        Y -= 0.5 * model.mu4 * x * x * np.asarray(C, dtype=complex)
    return Y


def apply_kernel(model: ToyModel, xi: Sequence[float], W: np.ndarray) -> np.ndarray:
    """K(xi) W = (1/2){Y, W}, the symmetrized kernel action on an operator."""
    W = np.asarray(W, dtype=complex)
    if W.shape != (model.dim, model.dim):
        raise ValueError("operator dimension mismatch")
    Y = _coupling_operator(model, xi)
    return 0.5 * (Y @ W + W @ Y)


def _left(X: np.ndarray) -> np.ndarray:
    return np.kron(X, np.eye(X.shape[0]))


def _right(X: np.ndarray) -> np.ndarray:
    return np.kron(np.eye(X.shape[0]), X.T)


def liouvillian(model: ToyModel) -> np.ndarray:
    """Hamiltonian flow L_H W = -i [H, W] as an N^2 x N^2 matrix (row-major vec)."""
    H = np.asarray(model.hamiltonian, dtype=complex)
    return -1j * (_left(H) - _right(H))


def kernel_generator(model: ToyModel, xi: Sequence[float]) -> np.ndarray:
    """K(xi) as an N^2 x N^2 matrix."""
    Y = _coupling_operator(model, xi)
    return 0.5 * (_left(Y) + _right(Y))


def _slice_factors(model: ToyModel, xi: Sequence[float], dt: float):
    """(E_left, E_right) with W -> E_left W E_right for one constant slice.

    The generator splits into commuting left- and right-multiplication parts,
    so the slice map is exactly a two-sided matrix exponential; no Trotter
    error is incurred within a constant-coupling slice.
    """
    H = np.asarray(model.hamiltonian, dtype=complex)
    Y = _coupling_operator(model, xi)
    return expm(dt * (-1j * H + 0.5 * Y)), expm(dt * (1j * H + 0.5 * Y))


def evolve_density(model: ToyModel, schedule: Sequence[Slice], W: np.ndarray) -> np.ndarray:
    """Apply the slice-ordered propagation directly to a density operator."""
    W = np.asarray(W, dtype=complex)
    for dt, xi in schedule:
        if dt <= 0:
            raise ValueError("slice durations must be positive")
        El, Er = _slice_factors(model, xi, dt)
        W = El @ W @ Er
    if not np.all(np.isfinite(W)):
        raise FloatingPointError("non-finite entries during propagation")
    return W


def propagate(model: ToyModel, schedule: Sequence[Slice]) -> np.ndarray:
    """Slice-ordered propagator as an explicit N^2 x N^2 superoperator matrix.

    Empty schedules give the identity.  Later slices compose on the left:
    propagate(S1 + S2) = propagate(S2) @ propagate(S1).
    """
    n2 = model.dim**2
    G = np.eye(n2, dtype=complex)
    for dt, xi in schedule:
        if dt <= 0:
            raise ValueError("slice durations must be positive")
        El, Er = _slice_factors(model, xi, dt)
        G = np.kron(El, Er.T) @ G
    if not np.all(np.isfinite(G)):
        raise FloatingPointError("non-finite entries in the propagator")
    return G


def refined_propagator(model: ToyModel, xi_fn, t0: float, t1: float,
                       tol: float = 1e-8, max_doublings: int = 16) -> np.ndarray:
    """Propagator for a continuously varying coupling profile xi_fn(t).

    Realizes the time-ordered exponential by midpoint-sampled constant
    slices, doubling the slice count until the propagator changes by less
    than tol in the max norm.
    """
    n = 1
    prev = None
    for _ in range(max_doublings):
        edges = np.linspace(t0, t1, n + 1)
        schedule = [(edges[i + 1] - edges[i], xi_fn(0.5 * (edges[i] + edges[i + 1])))
                    for i in range(n)]
        G = propagate(model, schedule)
        if prev is not None and np.max(np.abs(G - prev)) < tol:
            return G
        prev = G
        n *= 2
    raise RuntimeError(f"slice refinement did not converge to {tol:g}")


# --- characteristic function and density -----------------------------------------

DEFAULT_WINDOW: Template = ((1.0, (1.0,)),)


def _template_for(model: ToyModel, template: Template | None) -> Template:
    if template is not None:
        return template
    return ((1.0, (1.0,) * model.n_obs),)


@dataclass(frozen=True)
class CharacteristicFunction:
    """Sampled Phi(k) = Tr{G[k] W} on centered uniform k-grids (one per observable)."""

    k_grids: tuple[np.ndarray, ...]
    samples: np.ndarray            # complex, shape = grid lengths
    template: Template

    def __post_init__(self):
        center = tuple(len(g) // 2 for g in self.k_grids)
        for g, c in zip(self.k_grids, center):
            if abs(g[c]) > 1e-12:
                raise ValueError("k-grids must be centered on zero")
        if abs(self.samples[center] - 1.0) > 1e-10:
            raise ValueError(f"Phi(0) = {self.samples[center]:.12f} != 1")

    @property
    def dk(self) -> tuple[float, ...]:
        return tuple(float(g[1] - g[0]) for g in self.k_grids)

    def edge_decay(self) -> float:
        """Largest |Phi| on any face of the grid."""
        worst = 0.0
        for ax in range(self.samples.ndim):
            sl = [slice(None)] * self.samples.ndim
            for edge in (0, -1):
                sl[ax] = edge
                worst = max(worst, float(np.max(np.abs(self.samples[tuple(sl)]))))
        return worst


def characteristic_fn(model: ToyModel, template: Template | None,
                      k_grids: Sequence[np.ndarray] | np.ndarray) -> CharacteristicFunction:
    """Sample Phi over the outer product of per-observable k-grids.

    The template assigns each slice a duration and a weight row w_s; slice s
    couples xi_j = k_j * w_sj, so the template is the discrete analog of the
    weight profile that smears each observable in time.
    """
    if isinstance(k_grids, np.ndarray) and k_grids.ndim == 1:
        k_grids = [k_grids]
    k_grids = [np.asarray(g, dtype=float) for g in k_grids]
    if len(k_grids) != model.n_obs:
        raise ValueError("need one k-grid per observable")
    template = _template_for(model, template)
    shape = tuple(len(g) for g in k_grids)
    out = np.empty(shape, dtype=complex)
    W0 = np.asarray(model.initial_state, dtype=complex)
    for idx in np.ndindex(shape):
        kvec = [k_grids[j][idx[j]] for j in range(len(k_grids))]
        schedule = [(dt, [k * w for k, w in zip(kvec, wrow)]) for dt, wrow in template]
        out[idx] = np.trace(evolve_density(model, schedule, W0))
    return CharacteristicFunction(k_grids=tuple(k_grids), samples=out, template=template)


def auto_k_grid(model: ToyModel, template: Template | None = None,
                tail: float = 1e-10, min_points: int = 64,
                max_points: int = 4096) -> list[np.ndarray]:
    """Per-observable centered k-grids sized so |Phi| < tail at the edges.

    Extent from the guaranteed Gaussian damping exp(-mu^4 k^2 sum_s dt w^2
    lam_min(C)/2); spacing from the spectral supportary of the smeared
    observable plus Gaussian tails (conjugate sampling relation).
    """
    template = _template_for(model, template)
    if model.mu4 <= 0:
        raise InsufficientDecay("mu = 0 gives no k-space damping; "
                                "choose a positive mu for grid-based inversion")
    grids = []
    for j, (A, C) in enumerate(zip(model.observables, model.weight_ops)):
        wsum = sum(dt * wrow[j] ** 2 for dt, wrow in template)
        wabs = sum(dt * abs(wrow[j]) for dt, wrow in template)
        lam = np.linalg.eigvalsh(np.asarray(C, dtype=complex))
        lam_min, lam_max = float(lam[0]), float(lam[-1])
        if lam_min * wsum <= 0:
            raise InsufficientDecay(f"observable {j} has no Gaussian damping")
        # design for a tenth of the target tail: the power-of-two grid rounding
        # leaves the positive edge one dk short of the nominal extent
        k_max = math.sqrt(2 * math.log(10.0 / tail) / (model.mu4 * wsum * lam_min))
        a_max = float(np.max(np.abs(np.linalg.eigvalsh(np.asarray(A, dtype=complex)))))
        theta_max = wabs * a_max + 8 * math.sqrt(model.mu4 * wsum * lam_max) + 1.0
        dk = math.pi / theta_max
        M = max(min_points, 2 ** math.ceil(math.log2(2 * k_max / dk)))
        if M > max_points:
            raise InsufficientDecay(
                f"observable {j} would need {M} k-points (> {max_points}); mu too small")
        grids.append((np.arange(M) - M // 2) * dk)
    return grids


@dataclass(frozen=True)
class DensitySamples:
    """Probability density on centered theta-grids, plus its moment table."""

    theta_grids: tuple[np.ndarray, ...]
    p: np.ndarray                # real
    dtheta: tuple[float, ...]
    imag_residual: float         # max |Im| discarded by the inversion

    def cell(self) -> float:
        out = 1.0
        for d in self.dtheta:
            out *= d
        return out

    def normalization(self) -> float:
        return float(np.sum(self.p) * self.cell())

    def min_value(self) -> float:
        return float(np.min(self.p))

    def mean(self) -> np.ndarray:
        cell = self.cell()
        out = []
        for ax, grid in enumerate(self.theta_grids):
            out.append(float(np.tensordot(self.p, _axis_mesh(grid, self.p.shape, ax),
                                          axes=self.p.ndim) * cell))
        return np.array(out)

    def second_moments(self) -> np.ndarray:
        cell = self.cell()
        n = len(self.theta_grids)
        out = np.empty((n, n))
        for i in range(n):
            mi = _axis_mesh(self.theta_grids[i], self.p.shape, i)
            for j in range(i, n):
                mj = _axis_mesh(self.theta_grids[j], self.p.shape, j)
                out[i, j] = out[j, i] = float(np.sum(self.p * mi * mj) * cell)
        return out

    def variance(self) -> np.ndarray:
        m = self.mean()
        return np.diag(self.second_moments()) - m**2

    def interp(self, theta: Sequence[float]) -> float:
        """Multilinear interpolation of p at an arbitrary point."""
        pt = np.asarray(theta, dtype=float)
        arr = self.p
        for ax, grid in enumerate(self.theta_grids):
            i = int(np.clip(np.searchsorted(grid, pt[ax]) - 1, 0, len(grid) - 2))
            s = (pt[ax] - grid[i]) / (grid[i + 1] - grid[i])
            arr = (1 - s) * np.take(arr, i, axis=0) + s * np.take(arr, i + 1, axis=0)
        return float(arr)


def _axis_mesh(grid: np.ndarray, shape: tuple, axis: int) -> np.ndarray:
    view = [1] * len(shape)
    view[axis] = len(grid)
    return grid.reshape(view) * np.ones(shape)


def _invert_axis(arr: np.ndarray, dk: float, axis: int) -> tuple[np.ndarray, np.ndarray]:
    """One axis of the centered inverse transform sum_n Phi_n exp(-i k_n theta_m) dk/2pi."""
    M = arr.shape[axis]
    n = np.arange(M)
    shape = [1] * arr.ndim
    shape[axis] = M
    signs = ((-1.0) ** n).reshape(shape)
    f = np.fft.fft(arr * signs, axis=axis)
    phase = ((-1.0) ** n).reshape(shape) * np.exp(-1j * np.pi * M / 2)
    out = dk / (2 * np.pi) * phase * f
    dtheta = 2 * np.pi / (M * dk)
    theta = (n - M // 2) * dtheta
    return out, theta


def invert_to_density(cf: CharacteristicFunction, tail: float = 1e-10) -> DensitySamples:
    """Discrete Fourier inversion of Phi on conjugate centered theta-grids.

    Requires |Phi| to have decayed below `tail` at every grid edge, which the
    mu^4-Gaussian damping guarantees for a wide enough grid; otherwise the
    periodized density would alias.
    """
    decay = cf.edge_decay()
    if decay > tail:
        raise InsufficientDecay(
            f"|Phi| = {decay:.2e} at the k-grid edge exceeds {tail:g}; "
            "mu too small for this grid")
    arr = cf.samples.astype(complex)
    thetas = []
    for ax, dk in enumerate(cf.dk):
        arr, theta = _invert_axis(arr, dk, ax)
        thetas.append(theta)
    imag_res = float(np.max(np.abs(arr.imag)))
    return DensitySamples(theta_grids=tuple(thetas), p=arr.real,
                          dtheta=tuple(float(t[1] - t[0]) for t in thetas),
                          imag_residual=imag_res)


def density(model: ToyModel, template: Template | None = None,
            k_grids=None) -> DensitySamples:
    """Convenience pipeline: auto grid -> characteristic function -> density."""
    if k_grids is None:
        k_grids = auto_k_grid(model, template)
    return invert_to_density(characteristic_fn(model, template, k_grids))


def cf_moments(model: ToyModel, template: Template | None = None,
               h: float = 1e-3) -> tuple[np.ndarray, np.ndarray]:
    """First and second moments from central differences of Phi at k = 0.

    mean_j = -i dPhi/dk_j,  second_ij = - d2 Phi / dk_i dk_j.
    """
    template = _template_for(model, template)
    n = model.n_obs
    W0 = np.asarray(model.initial_state, dtype=complex)

    def phi(kvec):
        schedule = [(dt, [k * w for k, w in zip(kvec, wrow)]) for dt, wrow in template]
        return complex(np.trace(evolve_density(model, schedule, W0)))

    mean = np.empty(n)
    second = np.empty((n, n))
    e = np.eye(n)
    for j in range(n):
        mean[j] = (-1j * (phi(h * e[j]) - phi(-h * e[j])) / (2 * h)).real
    p0 = phi(np.zeros(n))
    for i in range(n):
        for j in range(i, n):
            if i == j:
                d2 = (phi(h * e[i]) - 2 * p0 + phi(-h * e[i])) / h**2
            else:
                d2 = (phi(h * (e[i] + e[j])) - phi(h * (e[i] - e[j]))
                      - phi(h * (e[j] - e[i])) + phi(-h * (e[i] + e[j]))) / (4 * h**2)
            second[i, j] = second[j, i] = (-d2).real
    return mean, second


def smeared_observable_mean(model: ToyModel, template: Template | None = None) -> np.ndarray:
    """Quantum expectation of each time-smeared observable under the flow.

    <theta_j> target: integral over the window of w_j(t) Tr(A_j W(t)) dt with
    W(t) the purely Hamiltonian evolution of the initial state.
    """
    template = _template_for(model, template)
    H = np.asarray(model.hamiltonian, dtype=complex)
    out = np.zeros(model.n_obs)
    W = np.asarray(model.initial_state, dtype=complex)
    n_sub = 64
    for dt, wrow in template:
        dts = dt / n_sub
        U = expm(-1j * H * dts)
        for _ in range(n_sub):
            Wmid = expm(-1j * H * dts / 2) @ W @ expm(1j * H * dts / 2)
            for j, A in enumerate(model.observables):
                out[j] += wrow[j] * np.trace(A @ Wmid).real * dts
            W = U @ W @ U.conj().T
    return out


def marginalize(ds: DensitySamples, keep: Sequence[int]) -> DensitySamples:
    """Integrate out every axis not listed in `keep` (order preserved)."""
    keep = sorted(keep)
    drop = [ax for ax in range(ds.p.ndim) if ax not in keep]
    p = ds.p
    cellfactor = 1.0
    for ax in sorted(drop, reverse=True):
        p = p.sum(axis=ax) * ds.dtheta[ax]
        cellfactor *= 1.0
    return DensitySamples(
        theta_grids=tuple(ds.theta_grids[ax] for ax in keep),
        p=p,
        dtheta=tuple(ds.dtheta[ax] for ax in keep),
        imag_residual=ds.imag_residual,
    )


# --- state reduction ---------------------------------------------------------

@dataclass(frozen=True)
class ReducedState:
    """Conditioned density matrix after observing theta_bar on the past window."""

    W_c: np.ndarray
    p_past: float                 # joint density of the observed values
    hermiticity_defect: float
    min_eigenvalue: float
    trace_defect: float


def reduce_state(model: ToyModel, template: Template | None,
                 theta_bar: Sequence[float],
                 k_grids: Sequence[np.ndarray] | None = None) -> ReducedState:
    """Condition the state on observed smeared values for the past window.

    Fourier-inverts the operator-valued numerator at theta_bar:

        W_num = prod_j (dk_j/2pi) sum_k exp(-i k.theta_bar) G[k] W,
        W_c   = W_num / Tr W_num,

    where Tr W_num is the past density at theta_bar.  Conditioning on an
    outcome whose density underflows raises.

    W_c is always hermitian and trace one, and the Bayes identity
    (conditional future density times past density equals the joint) holds
    for any model.  Positivity of W_c under sharp conditioning, however,
    holds on the pointer sector ([H, A] = [W, A] = 0); see
    pointer_random_model for the boundary.
    """
    template = _template_for(model, template)
    if k_grids is None:
        k_grids = auto_k_grid(model, template)
    k_grids = [np.asarray(g, dtype=float) for g in k_grids]
    theta_bar = np.asarray(theta_bar, dtype=float)
    if len(theta_bar) != model.n_obs:
        raise ValueError("theta_bar length mismatch")
    shape = tuple(len(g) for g in k_grids)
    W0 = np.asarray(model.initial_state, dtype=complex)
    Wnum = np.zeros((model.dim, model.dim), dtype=complex)
    cell = 1.0
    for dk in (g[1] - g[0] for g in k_grids):
        cell *= dk / (2 * np.pi)
    for idx in np.ndindex(shape):
        kvec = np.array([k_grids[j][idx[j]] for j in range(len(k_grids))])
        schedule = [(dt, [k * w for k, w in zip(kvec, wrow)]) for dt, wrow in template]
        Wk = evolve_density(model, schedule, W0)
        Wnum += np.exp(-1j * float(kvec @ theta_bar)) * Wk
    Wnum *= cell
    p_past = float(np.trace(Wnum).real)
    if p_past < 1e-12:
        raise ValueError(f"conditioning on a measure-zero outcome (p = {p_past:.3e})")
    Wc = Wnum / np.trace(Wnum)
    herm = float(np.max(np.abs(Wc - Wc.conj().T)))
    eig = np.linalg.eigvalsh(0.5 * (Wc + Wc.conj().T))
    return ReducedState(W_c=Wc, p_past=p_past,
                        hermiticity_defect=herm,
                        min_eigenvalue=float(eig.min()),
                        trace_defect=float(abs(np.trace(Wc) - 1.0)))

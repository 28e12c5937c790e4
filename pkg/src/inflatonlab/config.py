"""Run configuration: JSON key-value files with strict unknown-key rejection."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .background import DEFAULT_ATOL, DEFAULT_RTOL, DEFAULT_T_END, DEFAULT_T_START
from .constants import G_NEWTON, KAPPA_DEFAULT, LAMBDA_DEFAULT
from .horizon import DEFAULT_DA_MPC, DEFAULT_QR_MPC_INV, DEFAULT_Z_L, CosmoConstants
from .potential import PotentialParams


class ConfigError(ValueError):
    """Malformed configuration; the message carries the offending key path."""


@dataclass
class ScanConfig:
    kappa_min: float = 0.8 * KAPPA_DEFAULT
    kappa_max: float = 1.2 * KAPPA_DEFAULT
    kappa_points: int = 3
    lambda_min: float = 0.8 * LAMBDA_DEFAULT
    lambda_max: float = 1.2 * LAMBDA_DEFAULT
    lambda_points: int = 3


@dataclass
class ToyConfig:
    dim: int = 2
    mu: float = 0.8
    seeds: int = 50
    # row-major real symmetric matrices; None selects the built-in benchmark
    hamiltonian: list | None = None
    observable: list | None = None
    weight_op: list | None = None
    schedule: list | None = None    # [[duration, weight], ...]


@dataclass
class ExperimentConfig:
    dEdx_gev2: float = 5e-20
    sigma2_max: float = 1e-3
    # second threshold reading (the quoted consistency level applied to sigma
    # rather than sigma^2); both enter the reported bracket
    sigma2_max_alt: float = 1e-6


@dataclass
class RunConfig:
    kappa_gev: float = KAPPA_DEFAULT
    lam: float = LAMBDA_DEFAULT
    G_gev_m2: float = G_NEWTON
    t_start: float = DEFAULT_T_START
    t_end: float = DEFAULT_T_END
    rtol: float = DEFAULT_RTOL
    atol: float = DEFAULT_ATOL
    end_criterion: str = "field"
    q_R_mpc_inv: float = DEFAULT_QR_MPC_INV
    z_L: float = DEFAULT_Z_L
    d_A_mpc: float = DEFAULT_DA_MPC
    gravity: str = "quantum"
    x_start: float = 100.0
    x_end: float = 0.01
    mode_rtol: float = 1e-10
    mode_atol: float = 1e-12
    out_dir: str = "out"
    format: str = "csv"
    cache: bool = True
    cache_dir: str | None = None
    seed: int = 0
    workers: int = 1
    scan: ScanConfig = field(default_factory=ScanConfig)
    toy: ToyConfig = field(default_factory=ToyConfig)
    experiment: ExperimentConfig = field(default_factory=ExperimentConfig)

    # config-file key for the reserved word "lambda"
    _ALIASES = {"lambda": "lam"}

    def params(self) -> PotentialParams:
        return PotentialParams(kappa=self.kappa_gev, lam=self.lam, G=self.G_gev_m2)

    def cosmo_constants(self) -> CosmoConstants:
        return CosmoConstants.from_physical(
            q_R_mpc_inv=self.q_R_mpc_inv, z_L=self.z_L, d_A_mpc=self.d_A_mpc)

    def validate(self) -> "RunConfig":
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if self.gravity not in ("quantum", "classical"):
            raise ConfigError(f"gravity must be quantum or classical, got {self.gravity!r}")
        if self.end_criterion not in ("field", "epsilon"):
            raise ConfigError(f"end_criterion must be field or epsilon, "
                              f"got {self.end_criterion!r}")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        self.params()           # raises on invalid couplings
        return self

    def toy_model(self):
        from .toymodel import ToyModel, two_level_model
        t = self.toy
        if t.hamiltonian is None and t.observable is None:
            return two_level_model(mu=t.mu)
        dim = t.dim

        def mat(rowmajor, name):
            if rowmajor is None:
                raise ConfigError(f"toy.{name} required when any toy matrix is given")
            arr = np.asarray(rowmajor, dtype=float).reshape(dim, dim)
            return arr.astype(complex)

        return ToyModel(
            dim=dim,
            hamiltonian=mat(t.hamiltonian, "hamiltonian"),
            observables=(mat(t.observable, "observable"),),
            weight_ops=(mat(t.weight_op, "weight_op"),),
            mu=t.mu,
            initial_state=np.eye(dim, dtype=complex) / dim,
        )

    def toy_template(self):
        if self.toy.schedule is None:
            return None
        return tuple((float(dt), (float(w),)) for dt, w in self.toy.schedule)


_GROUPS = {"scan": ScanConfig, "toy": ToyConfig, "experiment": ExperimentConfig}


def _apply(obj, data: dict, path: str = ""):
    known = {f.name for f in fields(obj)}
    aliases = getattr(obj, "_ALIASES", {})
    for key, value in data.items():
        name = aliases.get(key, key)
        where = f"{path}{key}"
        if name in _GROUPS and isinstance(obj, RunConfig):
            if not isinstance(value, dict):
                raise ConfigError(f"{where}: expected an object")
            _apply(getattr(obj, name), value, path=f"{where}.")
        elif name in known:
            setattr(obj, name, value)
        else:
            raise ConfigError(f"unknown config key {where!r}")
    return obj


def load_config(path: str | Path | None = None, overrides: dict | None = None) -> RunConfig:
    """Read a JSON config file; later `overrides` win.  Unknown keys raise."""
    cfg = RunConfig()
    if path is not None:
        text = Path(path).read_text()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path}: not valid JSON ({e})") from e
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: top level must be an object")
        _apply(cfg, data)
    if overrides:
        _apply(cfg, overrides)
    return cfg.validate()

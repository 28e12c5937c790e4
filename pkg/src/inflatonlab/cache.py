"""Background-solution cache: versioned npz files keyed by a run-parameter hash."""

from __future__ import annotations

import hashlib
from pathlib import Path

import numpy as np

from .background import BackgroundSolution
from .potential import PotentialParams

CACHE_VERSION = BackgroundSolution.CACHE_FORMAT


def cache_key(params: PotentialParams, t_start: float, t_end: float,
              rtol: float, atol: float) -> str:
    blob = (f"v{CACHE_VERSION}|{params.kappa!r}|{params.lam!r}|{params.G!r}"
            f"|{t_start!r}|{t_end!r}|{rtol!r}|{atol!r}")
    return hashlib.sha256(blob.encode()).hexdigest()[:24]


def cache_path(cache_dir: str | Path, key: str) -> Path:
    return Path(cache_dir) / f"background_{key}.npz"


def save_background(sol: BackgroundSolution, cache_dir: str | Path) -> Path:
    path = cache_path(cache_dir, cache_key(sol.params, sol.t_start, sol.t_end,
                                           sol.rtol, sol.atol))
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savez_compressed(path, **sol.to_arrays())
    return path


def load_background(params: PotentialParams, t_start: float, t_end: float,
                    rtol: float, atol: float,
                    cache_dir: str | Path) -> BackgroundSolution | None:
    path = cache_path(cache_dir, cache_key(params, t_start, t_end, rtol, atol))
    if not path.exists():
        return None
    try:
        with np.load(path) as data:
            return BackgroundSolution.from_arrays(dict(data.items()))
    except Exception:
        return None   # stale or corrupt cache falls back to a fresh solve

import json

import numpy as np
import pytest

import inflatonlab as il
from inflatonlab.cache import cache_key, load_background, save_background
from inflatonlab.config import ConfigError, load_config


def test_defaults_validate():
    cfg = load_config(None)
    assert cfg.params().kappa == 8.38e12
    assert cfg.gravity == "quantum"


def test_load_from_file(tmp_path):
    p = tmp_path / "run.json"
    p.write_text(json.dumps({"kappa_gev": 9e12, "lambda": 1.1e-15,
                             "scan": {"kappa_points": 2}}))
    cfg = load_config(p)
    assert cfg.params().kappa == 9e12
    assert cfg.params().lam == 1.1e-15
    assert cfg.scan.kappa_points == 2


def test_unknown_key_rejected_with_location(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"kapa_gev": 9e12}))
    with pytest.raises(ConfigError, match="kapa_gev"):
        load_config(p)
    p.write_text(json.dumps({"scan": {"kappa_pts": 2}}))
    with pytest.raises(ConfigError, match="scan.kappa_pts"):
        load_config(p)


def test_malformed_json_rejected(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(ConfigError, match="JSON"):
        load_config(p)
    p.write_text("[1, 2]")
    with pytest.raises(ConfigError, match="object"):
        load_config(p)


def test_invalid_values_rejected(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"gravity": "semiclassical"}))
    with pytest.raises(ConfigError, match="gravity"):
        load_config(p)
    p.write_text(json.dumps({"format": "xml"}))
    with pytest.raises(ConfigError, match="format"):
        load_config(p)


def test_toy_model_from_config(tmp_path):
    p = tmp_path / "toy.json"
    p.write_text(json.dumps({"toy": {
        "dim": 2, "mu": 0.7,
        "hamiltonian": [0, 0, 0, 0],
        "observable": [1, 0, 0, -1],
        "weight_op": [1, 0, 0, 1],
        "schedule": [[1.0, 1.0]],
    }}))
    cfg = load_config(p)
    model = cfg.toy_model()
    assert model.dim == 2
    assert model.mu == 0.7
    assert cfg.toy_template() == ((1.0, (1.0,)),)


def test_cache_key_sensitivity(params):
    k1 = cache_key(params, -25e-12, 15e-12, 1e-10, 1e-12)
    k2 = cache_key(params, -25e-12, 15e-12, 1e-10, 1e-13)
    p2 = il.PotentialParams(kappa=params.kappa * (1 + 1e-12))
    k3 = cache_key(p2, -25e-12, 15e-12, 1e-10, 1e-12)
    assert len({k1, k2, k3}) == 3


def test_cache_round_trip(tmp_path, background, params):
    save_background(background, tmp_path)
    loaded = load_background(params, background.t_start, background.t_end,
                             background.rtol, background.atol, tmp_path)
    assert loaded is not None
    ts = np.linspace(-20e-12, 10e-12, 25)
    assert np.array_equal(loaded.phi(ts), background.phi(ts))
    assert np.array_equal(loaded.hubble(ts), background.hubble(ts))
    # a different key misses
    assert load_background(params, -26e-12, 15e-12, background.rtol,
                           background.atol, tmp_path) is None


def test_cached_and_fresh_downstream_identical(tmp_path, background, params, consts):
    save_background(background, tmp_path)
    loaded = load_background(params, background.t_start, background.t_end,
                             background.rtol, background.atol, tmp_path)
    e1 = il.solve_exit_reference(background, consts)
    e2 = il.solve_exit_reference(loaded, consts)
    r1 = il.spectra_report(params, e1)
    r2 = il.spectra_report(params, e2)
    assert r1.to_dict() == r2.to_dict()


def test_corrupt_cache_falls_back(tmp_path, background, params):
    path = save_background(background, tmp_path)
    path.write_bytes(b"garbage")
    assert load_background(params, background.t_start, background.t_end,
                           background.rtol, background.atol, tmp_path) is None

"""Command-line front end.

Subcommands: table1, figs, observables, modes, mubound, toy, scan.
Global flags: --config PATH, --out DIR, --format csv|json,
--gravity quantum|classical, --no-cache.
Exit codes: 0 success, 1 contract violation, 2 invalid configuration.

All floating-point output is pinned to 6 significant digits so identical
configurations produce byte-identical files; every file write funnels
through a single writer.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .background import BackgroundSolution, integrate
from .cache import load_background, save_background
from .config import ConfigError, RunConfig, load_config
from .horizon import solve_exit_general, solve_exit_reference
from .observables import compare_targets, slow_roll_functions, spectra_report
from .perturbations import GravityMode, integrate_scalar, integrate_tensor
from .svg import line_chart
from .toy_battery import run_battery
from .toymodel import characteristic_fn, auto_k_grid, invert_to_density
from .variance import mu_bound, preset_air_mip, sigma_squared

# Published reference rows (t/1e-12, phi/1e19, H/1e14, efolds-to-end, ln(H a_I/q_R));
# None marks blanks in the source layout.  Used only for the appended
# comparison report; the computed table always carries our own solution.
REFERENCE_TABLE = [
    (-25.0, 2.66, 2.53, 5083.0, None),
    (-23.0, 3.13, 2.52, 4473.0, None),
    (-21.0, 3.76, 2.50, 3970.0, None),
    (-19.0, 4.51, 2.48, 3173.0, None),
    (-17.0, 5.41, 2.44, 2980.0, None),
    (-15.0, 6.50, 2.39, 2394.0, None),
    (-13.0, 7.79, 2.32, 2323.0, None),
    (-11.0, 9.34, 2.22, 1570.0, None),
    (-9.0, 11.19, 2.07, 1140.0, 116.9),
    (-7.0, 13.39, 1.87, 751.0, 116.8),
    (-5.0, 15.97, 1.57, 406.0, 116.7),
    (-3.0, 18.96, 1.17, 260.0, 116.2),
    (-2.0, 20.59, 0.920, 156.0, 116.1),
    (-1.48, 21.46, 0.775, 115.4, 115.9),
    (-1.0, 22.27, 0.642, 78.0, 115.8),
    (0.0, 23.91, 0.349, 28.0, 114.6),
    (1.0, 25.26, 0.093, 6.0, 113.8),
    (3.0, 25.74, 0.002, 1.0, 110.1),
    (6.0, 25.73, 0.001, 1.0, 99.1),
    (9.0, 25.74, 0.001, 0.0, None),
    (12.0, 25.73, 0.000, 0.0, None),
    (15.0, 25.74, 0.000, None, None),
]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.6g}"


def _round_floats(obj):
    if isinstance(obj, float):
        return float(f"{obj:.6g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, (np.floating, np.integer)):
        return _round_floats(float(obj))
    return obj


class Writer:
    """Single funnel for every file the CLI produces."""

    def __init__(self, out_dir: str | Path):
        self.out_dir = Path(out_dir)
        self.written: list[Path] = []

    def _path(self, name: str) -> Path:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        return self.out_dir / name

    def text(self, name: str, content: str) -> Path:
        p = self._path(name)
        p.write_text(content)
        self.written.append(p)
        print(f"wrote {p}")
        return p

    def csv(self, name: str, header: list[str], rows: list[list],
            footer_lines: list[str] | None = None) -> Path:
        lines = [",".join(header)]
        lines += [",".join(_fmt(x) for x in row) for row in rows]
        if footer_lines:
            lines += [f"# {line}" for line in footer_lines]
        return self.text(name, "\n".join(lines) + "\n")

    def json(self, name: str, obj) -> Path:
        return self.text(name, json.dumps(_round_floats(obj), indent=2,
                                          sort_keys=True) + "\n")


# --- shared pipeline pieces -----------------------------------------------------

def _background(cfg: RunConfig) -> BackgroundSolution:
    cache_dir = cfg.cache_dir or str(Path(cfg.out_dir) / "cache")
    if cfg.cache:
        sol = load_background(cfg.params(), cfg.t_start, cfg.t_end,
                              cfg.rtol, cfg.atol, cache_dir)
        if sol is not None:
            return sol
    sol = integrate(cfg.params(), cfg.t_start, cfg.t_end, rtol=cfg.rtol, atol=cfg.atol)
    if cfg.cache:
        save_background(sol, cache_dir)
    return sol


def _gravity(cfg: RunConfig) -> GravityMode:
    return GravityMode(cfg.gravity)


def _table_rows(cfg: RunConfig, sol: BackgroundSolution):
    consts = cfg.cosmo_constants()
    exit_ = solve_exit_reference(sol, consts)
    rows = []
    for t12, *_ in REFERENCE_TABLE:
        t = t12 * 1e-12
        phi = sol.phi(t) / 1e19
        H = sol.hubble(t) / 1e14
        efolds = sol.efolds_to_end(t)
        ln_term = float(np.log(sol.hubble(t) / consts.q_R_over_aI))
        rows.append([t12, phi, H, efolds, ln_term])
    return rows, exit_


# --- subcommands -----------------------------------------------------------------

def cmd_table1(cfg: RunConfig, w: Writer) -> int:
    sol = _background(cfg)
    rows, exit_ = _table_rows(cfg, sol)
    footer = ["comparison against the published reference rows (dev% = computed/reference - 1)"]
    for (t12, rphi, rH, refold, rln), row in zip(REFERENCE_TABLE, rows):
        devs = []
        for label, ref, val in (("phi", rphi, row[1]), ("H", rH, row[2]),
                                ("efolds", refold, row[3]), ("ln", rln, row[4])):
            if ref in (None, 0.0):
                continue
            devs.append(f"{label} {100 * (val / ref - 1):+.2f}%")
        footer.append(f"t={t12:g}: " + ", ".join(devs))
    footer.append(f"computed horizon exit: t_exit = {_fmt(exit_.t_exit / 1e-12)}e-12 "
                  f"GeV^-1, phi = {_fmt(exit_.phi_exit / 1e19)}e19 GeV, "
                  f"H = {_fmt(exit_.H_exit / 1e14)}e14 GeV, "
                  f"efolds-to-end = {_fmt(exit_.efolds_to_end)}")
    header = ["t_1e-12_gev_inv", "phi_1e19_gev", "H_1e14_gev",
              "efolds_to_end", "ln_H_aI_over_qR"]
    if cfg.format == "json":
        w.json("table1.json", {
            "header": header,
            "rows": [[None if x is None else float(x) for x in r] for r in rows],
            "comparison": footer,
        })
    else:
        w.csv("table1.csv", header, rows, footer_lines=footer)
    return 0


def cmd_figs(cfg: RunConfig, w: Writer) -> int:
    sol = _background(cfg)
    consts = cfg.cosmo_constants()
    exit_ = solve_exit_reference(sol, consts)
    der = sol.derived
    t_I = sol.end_of_inflation()

    ts = np.linspace(cfg.t_start, cfg.t_end, 800)
    phi = sol.phi(ts) / 1e19
    H = sol.hubble(ts) / 1e14
    t12 = ts / 1e-12
    w.csv("fig1_phi.csv", ["t_1e-12_gev_inv", "phi_1e19_gev"],
          [[a, b] for a, b in zip(t12, phi)])
    line_chart(w._path("fig1_phi.svg"), [("phi(t)/1e19 GeV", t12.tolist(), phi.tolist())],
               title="inflaton background", xlabel="t / 1e-12 GeV^-1",
               ylabel="phi / 1e19 GeV",
               markers=[(t12[-1], der.v / 1e19, f"limit {der.v / 1e19:.3g}")])
    w.written.append(w._path("fig1_phi.svg"))
    w.csv("fig2_hubble.csv", ["t_1e-12_gev_inv", "H_1e14_gev"],
          [[a, b] for a, b in zip(t12, H)])
    line_chart(w._path("fig2_hubble.svg"), [("H(t)/1e14 GeV", t12.tolist(), H.tolist())],
               title="expansion rate", xlabel="t / 1e-12 GeV^-1",
               ylabel="H / 1e14 GeV",
               markers=[(t12[0], der.hbar_inf / 1e14,
                         f"limit {der.hbar_inf / 1e14:.3g}")])

    # exit construction: e-folds to the end vs the log of the horizon condition
    ts3 = np.linspace(max(cfg.t_start, -10e-12), t_I - 0.02e-12, 600)
    ef = sol.efolds_to_end(ts3)
    ln_term = np.log(sol.hubble(ts3) / consts.q_R_over_aI)
    t312 = ts3 / 1e-12
    w.csv("fig3_exit.csv",
          ["t_1e-12_gev_inv", "efolds_to_end", "ln_H_aI_over_qR"],
          [[a, b, c] for a, b, c in zip(t312, ef, ln_term)])
    line_chart(w._path("fig3_exit.svg"),
               [("efolds to end", t312.tolist(), ef.tolist()),
                ("ln(H a_I/q_R)", t312.tolist(), ln_term.tolist())],
               title="horizon-exit construction", xlabel="t / 1e-12 GeV^-1",
               ylabel="e-folds",
               markers=[(exit_.t_exit / 1e-12, exit_.efolds_to_end,
                         f"exit {exit_.t_exit / 1e-12:.3g}")])
    w.written += [w._path("fig2_hubble.svg"), w._path("fig3_exit.svg")]
    return 0


def cmd_observables(cfg: RunConfig, w: Writer) -> int:
    sol = _background(cfg)
    consts = cfg.cosmo_constants()
    exit_ = solve_exit_reference(sol, consts)
    report = spectra_report(cfg.params(), exit_, gravity=_gravity(cfg))
    comparison = compare_targets(report)
    payload = {
        "report": report.to_dict(),
        "targets": comparison.to_dict(),
        "exit": {
            "t_exit_gev_inv": exit_.t_exit,
            "efolds_to_end": exit_.efolds_to_end,
            "residual": exit_.residual,
        },
    }
    w.json("observables.json", payload)
    if cfg.format == "csv":
        d = report.to_dict()
        keys = sorted(d)
        w.csv("observables.csv", keys, [[d[k] for k in keys]])
    return 0


def cmd_modes(cfg: RunConfig, w: Writer) -> int:
    sol = _background(cfg)
    consts = cfg.cosmo_constants()
    gravity = _gravity(cfg)
    exit_ = solve_exit_reference(sol, consts)
    report = spectra_report(cfg.params(), exit_, gravity=gravity)
    q = consts.q_R
    sc = integrate_scalar(sol, q, consts, x_start=cfg.x_start, x_end=cfg.x_end,
                          rtol=cfg.mode_rtol, atol=cfg.mode_atol, gravity=gravity)
    tn = integrate_tensor(sol, q, consts, x_start=cfg.x_start, x_end=cfg.x_end,
                          rtol=cfg.mode_rtol, atol=cfg.mode_atol, gravity=gravity)

    rows = [[t / 1e-12, c.real, c.imag, p.real, p.imag, x, r.real, r.imag]
            for t, c, p, x, r in zip(sc.t, sc.chi, sc.psi, sc.q_over_aH, sc.R)]
    w.csv("mode_scalar.csv",
          ["t_1e-12_gev_inv", "re_chi", "im_chi", "re_psi", "im_psi",
           "q_over_aH", "re_R", "im_R"], rows)
    rows = [[t / 1e-12, d.real, d.imag, x]
            for t, d, x in zip(tn.t, tn.D, tn.q_over_aH)]
    w.csv("mode_tensor.csv", ["t_1e-12_gev_inv", "re_D", "im_D", "q_over_aH"], rows)

    R2 = abs(sc.R_plateau) ** 2
    D2 = abs(tn.D_plateau) ** 2
    slow_roll_R2 = report.NS2 * q**-3
    summary = {
        "gravity": gravity.value,
        "q_gev": q,
        "R_plateau_sq": R2,
        "D_plateau_sq": D2,
        "ratio_4D2_over_R2": (4 * D2 / R2) if R2 else None,
        "sixteen_epsilon": 16 * report.epsilon,
        "slow_roll_R2": slow_roll_R2,
        "R2_over_slow_roll": R2 / slow_roll_R2,
        "tensor_wronskian_drift": tn.wronskian_drift,
        "scalar_constraint_residual_max": sc.constraint_residual_max,
        "r": report.r,
        "r_bound": 0.032,
        "r_bound_satisfied": bool(report.r < 0.032),
    }
    w.json("modes_summary.json", summary)
    return 0


def cmd_mubound(cfg: RunConfig, w: Writer) -> int:
    exp = preset_air_mip()
    if cfg.experiment.dEdx_gev2 != exp.dEdx:
        exp = type(exp)(gamma_q=exp.gamma_q, t_bar=exp.t_bar, rho_0=exp.rho_0,
                        dEdx=cfg.experiment.dEdx_gev2, b=exp.b)
    s2 = sigma_squared(1.0, exp)
    bound_main = mu_bound(exp, cfg.experiment.sigma2_max)
    bound_alt = mu_bound(exp, cfg.experiment.sigma2_max_alt)
    all_bounds = list(bound_main.bracket) + list(bound_alt.bracket)
    payload = {
        "experiment": {
            "gamma_q_gev": exp.gamma_q, "t_bar_gev_inv": exp.t_bar,
            "rho_0_gev4": exp.rho_0, "dEdx_gev2": exp.dEdx, "b_gev_inv": exp.b,
        },
        "sigma2_per_mu4": {
            "composed": s2.coeff_composed,
            "literal": s2.coeff_literal,
        },
        "mu_bound_gev": {
            "sigma2_max": cfg.experiment.sigma2_max,
            "composed": bound_main.mu_composed,
            "literal": bound_main.mu_literal,
            "sigma2_max_alt": cfg.experiment.sigma2_max_alt,
            "composed_alt": bound_alt.mu_composed,
            "literal_alt": bound_alt.mu_literal,
            "bracket": [min(all_bounds), max(all_bounds)],
        },
    }
    w.json("mubound.json", payload)
    return 0


def cmd_toy(cfg: RunConfig, w: Writer) -> int:
    results = run_battery(n_seeds=cfg.toy.seeds)
    for r in results:
        print(r.line())
    model = cfg.toy_model()
    template = cfg.toy_template()
    cf = characteristic_fn(model, template, auto_k_grid(model, template))
    ds = invert_to_density(cf)
    w.csv("toy_density.csv", ["theta", "p"],
          [[t, p] for t, p in zip(ds.theta_grids[0], ds.p)])
    w.json("toy_properties.json", {
        "properties": [{"name": r.name, "passed": r.passed, "worst": r.worst,
                        "tolerance": r.tolerance} for r in results],
        "density_normalization": ds.normalization(),
        "density_min": ds.min_value(),
    })
    return 0 if all(r.passed for r in results) else 1


def _scan_row(job) -> list:
    kappa, lam, cfg_dict = job
    from .config import RunConfig as RC
    cfg = RC(**cfg_dict)
    try:
        from .potential import PotentialParams
        params = PotentialParams(kappa=kappa, lam=lam, G=cfg.G_gev_m2)
        sol = integrate(params, cfg.t_start, cfg.t_end, rtol=cfg.rtol, atol=cfg.atol)
        exit_ = solve_exit_general(sol, cfg.cosmo_constants().q_R_over_aI)
        report = spectra_report(params, exit_, gravity=GravityMode(cfg.gravity))
        return [kappa, lam, report.n_s, report.NS2, report.r, exit_.t_exit, "ok"]
    except Exception as e:   # failures are recorded per row, never fatal
        return [kappa, lam, None, None, None, None, type(e).__name__]


def cmd_scan(cfg: RunConfig, w: Writer) -> int:
    sc = cfg.scan
    if min(sc.kappa_min, sc.kappa_max, sc.lambda_min, sc.lambda_max) <= 0:
        raise ConfigError("scan bounds must be positive")
    kappas = np.geomspace(sc.kappa_min, sc.kappa_max, sc.kappa_points)
    lams = np.geomspace(sc.lambda_min, sc.lambda_max, sc.lambda_points)
    cfg_dict = {
        "G_gev_m2": cfg.G_gev_m2, "t_start": cfg.t_start, "t_end": cfg.t_end,
        "rtol": cfg.rtol, "atol": cfg.atol, "gravity": cfg.gravity,
        "q_R_mpc_inv": cfg.q_R_mpc_inv, "z_L": cfg.z_L, "d_A_mpc": cfg.d_A_mpc,
    }
    jobs = [(float(k), float(l), cfg_dict) for k in kappas for l in lams]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            rows = list(pool.map(_scan_row, jobs))
    else:
        rows = [_scan_row(j) for j in jobs]
    w.csv("scan.csv", ["kappa_gev", "lambda", "n_s", "NS2", "r",
                       "t_exit_gev_inv", "status"], rows)
    return 0


COMMANDS = {
    "table1": cmd_table1,
    "figs": cmd_figs,
    "observables": cmd_observables,
    "modes": cmd_modes,
    "mubound": cmd_mubound,
    "toy": cmd_toy,
    "scan": cmd_scan,
}


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", default=None)
    common.add_argument("--out", metavar="DIR", default=None)
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--gravity", choices=("quantum", "classical"), default=None)
    common.add_argument("--no-cache", action="store_true")
    parser = argparse.ArgumentParser(
        prog="inflatonlab",
        description="inflaton background, CMB observables, variance bound and "
                    "probability-postulate toy model")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    overrides: dict = {}
    if args.out is not None:
        overrides["out_dir"] = args.out
    if args.format is not None:
        overrides["format"] = args.format
    if args.gravity is not None:
        overrides["gravity"] = args.gravity
    if args.no_cache:
        overrides["cache"] = False
    try:
        cfg = load_config(args.config, overrides)
    except (ConfigError, OSError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    writer = Writer(cfg.out_dir)
    try:
        return COMMANDS[args.command](cfg, writer)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except Exception as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

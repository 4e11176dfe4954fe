"""Configuration-driven experiment runner.

Each experiment writes machine-readable CSV data plus a JSON summary with a
full parameter echo.  CSV output is byte-identical across runs of the same
configuration: 17 significant digits, '.' decimal separator, '\\n' line
endings, fixed column order.

Exit codes: 0 success, 2 config error, 3 numerical-contract violation,
4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .bath import BathSpec, jc_kinetic_coefficients
from .config import EXPERIMENTS, ExperimentConfig, load_config
from .eigenoperators import (
    DrivenGenerator,
    deviation_up_to_phase,
    monodromy_eigenoperators,
    static_eigenoperators,
    verify_eigenoperator,
)
from .errors import ConfigError, CovlindError
from .gkls import DissipatorSpec, Channel, build_dissipator, instantaneous_attractor
from .jaynes_cummings import (
    JCParams,
    fit_gaussian_envelope,
    jc_autonomous_trajectory,
    jc_eigenoperators,
    jc_semiclassical_hamiltonian,
    jc_semiclassical_propagator,
    touchard,
    touchard_asymptotic,
)
from .operators import DensityMatrix, qubit_ops, uhlmann_fidelity
from .propagate import TimeGrid

_Q = qubit_ops()


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_csv(path: Path, header: list[str], columns: list[np.ndarray]):
    rows = len(columns[0])
    lines = [",".join(header)]
    for i in range(rows):
        lines.append(",".join(_fmt(col[i]) for col in columns))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="")


def write_json(path: Path, payload: dict):
    payload = dict(payload)
    payload["library_version"] = __version__
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8", newline="")


def _echo_params(p: JCParams) -> dict:
    return {"omega_c": p.omega_c, "omega_eg": p.omega_eg, "g": p.g,
            "alpha": [p.alpha.real, p.alpha.imag], "delta": p.delta,
            "nbar": p.nbar, "rabi": p.rabi}


def _bath_from_cfg(cfg: ExperimentConfig) -> BathSpec:
    b = dict(cfg.bath)
    return BathSpec(temperature=float(b.get("temperature", 0.5)),
                    model=b.get("model", "ohmic"),
                    eta=float(b.get("eta", 0.1)),
                    omega_cut=float(b.get("omega_cut", 20.0)),
                    omega_lo=float(b.get("omega_lo", 0.0)),
                    omega_hi=float(b.get("omega_hi", np.inf)))


def _pauli_series(states) -> dict[str, np.ndarray]:
    out = {}
    for name in ("sx", "sy", "sz"):
        op = _Q[name]
        out[name] = np.array([np.trace(op @ st.data).real for st in states])
    return out


def _fig2_single(cfg: ExperimentConfig, alpha: complex):
    p = cfg.jc_params(alpha=alpha)
    t1 = float(cfg.grid.get("t1", 40.0 / p.rabi))
    steps = int(cfg.grid.get("steps", 2000))
    times = np.linspace(float(cfg.grid.get("t0", 0.0)), t1, steps + 1)
    rho0 = DensityMatrix.from_matrix(cfg.initial_matrix(), (2,))
    auto = jc_autonomous_trajectory(rho0, p, times)
    sc = []
    for t in times:
        u = jc_semiclassical_propagator(t, p)
        sc.append(DensityMatrix.from_matrix(u @ rho0.data @ u.conj().T, (2,)))
    fid = np.array([uhlmann_fidelity(a, b) for a, b in zip(auto, sc)])
    pa, ps = _pauli_series(auto), _pauli_series(sc)
    try:
        envelope_rate = fit_gaussian_envelope(times, pa["sx"])
    except CovlindError:
        envelope_rate = float("nan")
    return p, times, fid, pa, ps, envelope_rate


def run_fig2(cfg: ExperimentConfig, out: Path) -> dict:
    """Autonomous vs semi-classical convergence for a list of alphas."""
    alphas = cfg.alphas()
    results = {}
    with ThreadPoolExecutor(max_workers=min(4, len(alphas))) as pool:
        futures = {pool.submit(_fig2_single, cfg, a): a for a in alphas}
        for fut, a in futures.items():
            results[a] = fut.result()
    summary_alphas = []
    for a in alphas:
        p, times, fid, pa, ps, env = results[a]
        tag = _fmt(abs(a)).replace(".", "p")
        write_csv(out / f"fig2_alpha_{tag}.csv",
                  ["t_normalized", "fidelity",
                   "sx_autonomous", "sy_autonomous", "sz_autonomous",
                   "sx_semiclassical", "sy_semiclassical", "sz_semiclassical"],
                  [times * p.rabi, fid, pa["sx"], pa["sy"], pa["sz"],
                   ps["sx"], ps["sy"], ps["sz"]])
        summary_alphas.append({"alpha": [complex(a).real, complex(a).imag],
                               "min_fidelity": float(np.min(fid)),
                               "envelope_decay_rate": env,
                               "params": _echo_params(p)})
    summary = {"experiment": "fig2", "alphas": summary_alphas,
               "initial_state": str(cfg.initial_state),
               "monotone_min_fidelity": bool(np.all(np.diff(
                   [s["min_fidelity"] for s in summary_alphas]) > 0))}
    write_json(out / "fig2_summary.json", summary)
    return summary


def run_jc_sim(cfg: ExperimentConfig, out: Path) -> dict:
    """Single-alpha autonomous + semi-classical trajectory dump."""
    alpha = cfg.alphas()[0]
    p, times, fid, pa, ps, env = _fig2_single(cfg, alpha)
    write_csv(out / "jc_sim.csv",
              ["t", "t_normalized", "fidelity",
               "sx_autonomous", "sy_autonomous", "sz_autonomous",
               "sx_semiclassical", "sy_semiclassical", "sz_semiclassical"],
              [times, times * p.rabi, fid, pa["sx"], pa["sy"], pa["sz"],
               ps["sx"], ps["sy"], ps["sz"]])
    summary = {"experiment": "jc-sim", "min_fidelity": float(np.min(fid)),
               "envelope_decay_rate": env, "params": _echo_params(p),
               "initial_state": str(cfg.initial_state)}
    write_json(out / "jc_sim_summary.json", summary)
    return summary


def run_eigenops(cfg: ExperimentConfig, out: Path) -> dict:
    """Monodromy eigenfrequencies and deviation from the analytic forms."""
    cfg.jc.setdefault("rabi", 0.4)
    cfg.jc.setdefault("alpha", 2.0)
    alpha = cfg.alphas()[0]
    if abs(alpha) == 0:
        omega_c = float(cfg.jc.get("omega_c", 1.0))
        omega_eg = float(cfg.jc.get("omega_eg", omega_c + float(cfg.jc.get("delta", 0.0))))
        eset = static_eigenoperators(0.5 * omega_eg * _Q["sz"])
        report = {"experiment": "eigenops", "mode": "static-fallback",
                  "bohr_frequencies": sorted(float(f) for f in eset.freqs),
                  "omega_eg": omega_eg}
        write_json(out / "eigenops_report.json", report)
        return report
    p = cfg.jc_params(alpha=alpha)
    gen = DrivenGenerator(lambda t: jc_semiclassical_hamiltonian(t, p),
                          period=2 * np.pi / p.omega_c)
    eset = monodromy_eigenoperators(gen)
    f_plus, f_minus, _w = jc_eigenoperators(p)
    grid = TimeGrid(0.0, 10 * 2 * np.pi / p.rabi, 400)
    residuals = {
        "F_plus": verify_eigenoperator(f_plus, +p.rabi, gen, grid),
        "F_minus": verify_eigenoperator(f_minus, -p.rabi, gen, grid),
    }
    deviations = []
    nilpotency = []
    for target, freq in ((f_plus(0.0).data, p.rabi), (f_minus(0.0).data, -p.rabi)):
        best = None
        for op, lam, inv in zip(eset.ops, eset.freqs, eset.invariant_flags):
            if inv:
                continue
            dev = deviation_up_to_phase(op.data, target)
            if best is None or dev < best[0]:
                best = (dev, lam)
        deviations.append({"target_frequency": freq, "max_deviation": best[0],
                           "monodromy_frequency": float(best[1])})
        nilpotency.append(float(np.max(np.abs(target @ target))) < 1e-10)
    report = {"experiment": "eigenops",
              "monodromy_frequencies": sorted(float(f) for f in eset.freqs),
              "heisenberg_residuals": residuals,
              "analytic_deviation": deviations,
              "nilpotent_flags": nilpotency,
              "params": _echo_params(p)}
    write_json(out / "eigenops_report.json", report)
    return report


def _attractor_single(p: JCParams, bath: BathSpec):
    g0, gm, gp = jc_kinetic_coefficients(p, bath)
    f_plus, f_minus, w = jc_eigenoperators(p)
    channels = [(f_minus(0.0), gm, gp)]
    res = instantaneous_attractor(channels)
    spec = DissipatorSpec(channels=[Channel(f_minus(0.0), gm, gp)],
                          dephasing_invariant=([w(0.0)], [[g0]]))
    d_full = build_dissipator(spec)
    resid = float(np.max(np.abs(d_full.apply(res.state.data).data)))
    return res, (g0, gm, gp), resid


def run_attractor(cfg: ExperimentConfig, out: Path) -> dict:
    """Instantaneous attractor of the driven-qubit dissipator."""
    p = cfg.jc_params()
    bath = _bath_from_cfg(cfg)
    res, (g0, gm, gp), resid = _attractor_single(p, bath)
    report = {"experiment": "attractor",
              "coefficients": {"gamma0": g0, "gammaMinus": gm, "gammaPlus": gp},
              "delta_minus": float(res.deltas[0]),
              "zero_temperature_branch": bool(res.zero_temperature),
              "attractor": [[x.real, x.imag] for x in res.state.data.reshape(-1)],
              "effective_hamiltonian": [[x.real, x.imag]
                                        for x in res.effective_hamiltonian.data.reshape(-1)],
              "residual": resid,
              "bath": {"temperature": bath.temperature, "model": bath.model,
                       "eta": bath.eta, "omega_cut": bath.omega_cut},
              "params": _echo_params(p)}
    write_json(out / "attractor_report.json", report)
    return report


def run_coefficients(cfg: ExperimentConfig, out: Path) -> dict:
    """Kinetic-coefficient sweep over detuning or temperature."""
    bath = _bath_from_cfg(cfg)
    cfg.jc.setdefault("rabi", 0.4)
    cfg.jc.setdefault("alpha", 2.0)
    base = cfg.jc_params()
    variable = cfg.sweep.get("variable", "delta")
    if variable not in ("delta", "temperature"):
        raise ConfigError(f"sweep.variable must be 'delta' or 'temperature', "
                          f"got {variable!r}")
    if "values" in cfg.sweep:
        values = [float(v) for v in cfg.sweep["values"]]
    elif variable == "delta":
        values = list(np.linspace(-2 * base.rabi, 2 * base.rabi, 41))
    else:
        values = list(np.linspace(0.0, 10.0 * base.omega_c, 41))
    rows = {"delta": [], "T": [], "gamma0": [], "gammaMinus": [], "gammaPlus": []}
    for v in values:
        if variable == "delta":
            p = JCParams(base.omega_c, base.omega_c + v, base.g, base.alpha)
            b = bath
        else:
            p = base
            b = BathSpec(temperature=v, model=bath.model, eta=bath.eta,
                         omega_cut=bath.omega_cut, omega_lo=bath.omega_lo,
                         omega_hi=bath.omega_hi)
        g0, gm, gp = jc_kinetic_coefficients(p, b)
        rows["delta"].append(p.delta)
        rows["T"].append(b.temperature)
        rows["gamma0"].append(g0)
        rows["gammaMinus"].append(gm)
        rows["gammaPlus"].append(gp)
    write_csv(out / "coefficients.csv",
              ["delta", "T", "gamma0", "gammaMinus", "gammaPlus"],
              [np.array(rows[k]) for k in ("delta", "T", "gamma0",
                                           "gammaMinus", "gammaPlus")])
    summary = {"experiment": "coefficients", "variable": variable,
               "count": len(values), "all_nonnegative": bool(
                   min(min(rows["gamma0"]), min(rows["gammaMinus"]),
                       min(rows["gammaPlus"])) >= 0),
               "params": _echo_params(base)}
    write_json(out / "coefficients_summary.json", summary)
    return summary


def run_touchard(cfg: ExperimentConfig, out: Path) -> dict:
    """Touchard polynomial asymptotics sweep."""
    orders = [int(j) for j in cfg.touchard.get("orders", [2, 3, 4, 5, 6])]
    xs = [float(x) for x in cfg.touchard.get("x_values", [1e2, 1e3, 1e4])]
    cols = {"j": [], "x": [], "touchard": [], "asymptotic": [], "scaled_residual": []}
    slopes = {}
    for j in orders:
        resids = []
        for x in xs:
            tj = touchard(j, x)
            asym = touchard_asymptotic(j, x)
            resid = abs(tj / x ** j - 1.0 - j * (j - 1) / (2.0 * x))
            cols["j"].append(j)
            cols["x"].append(x)
            cols["touchard"].append(tj)
            cols["asymptotic"].append(asym)
            cols["scaled_residual"].append(resid)
            resids.append(resid)
        slope = np.polyfit(np.log(xs), np.log(resids), 1)[0]
        slopes[str(j)] = float(slope)
    write_csv(out / "touchard.csv",
              ["j", "x", "touchard", "asymptotic", "scaled_residual"],
              [np.array(cols[k], dtype=float)
               for k in ("j", "x", "touchard", "asymptotic", "scaled_residual")])
    summary = {"experiment": "touchard", "loglog_slopes": slopes}
    write_json(out / "touchard_summary.json", summary)
    return summary


_RUNNERS = {
    "fig2": run_fig2,
    "jc-sim": run_jc_sim,
    "eigenops": run_eigenops,
    "attractor": run_attractor,
    "coefficients": run_coefficients,
    "touchard": run_touchard,
}


def _parse_alpha_list(text: str) -> list[complex]:
    try:
        return [complex(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ConfigError(f"cannot parse --alpha list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="covlind",
        description="Thermodynamically consistent driven-qubit experiments")
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENTS:
        sp = sub.add_parser(name, help=f"run the {name} experiment")
        sp.add_argument("--config", default=None, help="YAML config file")
        sp.add_argument("--out", default=None, help="output directory")
        sp.add_argument("--alpha", default=None,
                        help="comma-separated coherent amplitudes")
        sp.add_argument("--tmax", type=float, default=None, help="final time")
        sp.add_argument("--steps", type=int, default=None, help="grid steps")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        overrides = {
            "alphas": _parse_alpha_list(args.alpha) if args.alpha else None,
            "tmax": args.tmax,
            "steps": args.steps,
            "output": args.out,
        }
        cfg = load_config(args.config, experiment=args.experiment,
                          overrides=overrides)
    except (ConfigError, FileNotFoundError, yaml.YAMLError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        out = Path(cfg.output)
        out.mkdir(parents=True, exist_ok=True)
        _RUNNERS[cfg.experiment](cfg, out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except CovlindError as exc:
        print(f"numerical contract violation: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4
    print(json.dumps({"experiment": cfg.experiment, "output": str(out),
                      "ok": True}, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())

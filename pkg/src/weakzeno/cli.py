"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 domain or numerical error.
"""

from __future__ import annotations

import argparse
import copy
import io
import math
import re
import sys
import warnings
from pathlib import Path

import numpy as np

from weakzeno import doublewell as dw
from weakzeno import tunneling_time as tt
from weakzeno import zeno_sim as zs
from weakzeno.constants import PICO, parse_quantity
from weakzeno.dissipation import EnergyTriple, decay_gamma
from weakzeno.errors import DomainError, OdeError, QuadratureError, RootFindingError
from weakzeno.records import (
    ResultRecord,
    fmt,
    records_to_csv,
    records_to_json,
    records_to_table,
    write_csv,
)

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN = 0, 2, 3

F_DWELL_COTH = "tau_D = coth(gamma tau_M / 2) / gamma"
F_DWELL_TANH = "tau_D = tanh(gamma tau_M / 2) / gamma"
F_DWELL_NUM = "tau_D = quadrature of the weak dwell integral"
F_GAMMA = "gamma = sqrt((Hi-Hf)(Hi-H0)) / hbar"
F_Z_VAR = "tau_Z = hbar / dH"
F_Z_GEO = "tau_Z = sqrt(tau_L tau_M)"
F_Z_WEAK = "tau_Z = sqrt(2) hbar / sqrt((Hi-Hf)(Hi-H0))"
F_Z_SWITCH = "tau_Z = sqrt(2) hbar / |eps0|"
F_PULSED = "P = [1 - (tau_M/tau_Z)^2]^(T/tau_M)"
F_EXPO = "P = exp(-T tau_M / tau_Z^2)"


class UsageError(Exception):
    pass


def _energy(text: str) -> float:
    return parse_quantity(text, "energy")


def _time(text: str) -> float:
    return parse_quantity(text, "time")


def _rate(text: str) -> float:
    return parse_quantity(text, "rate")


_energy.__name__ = "energy"
_time.__name__ = "time"
_rate.__name__ = "rate"


def _ps_record(name: str, seconds: float, formula: str, inputs) -> list[ResultRecord]:
    return [
        ResultRecord(name, seconds, "s", formula, inputs),
        ResultRecord(name + "_ps", seconds / PICO, "ps", formula, inputs),
    ]


def _triple(ns, required: bool = False) -> EnergyTriple | None:
    given = [ns.hi, ns.hf, ns.h0]
    if all(v is None for v in given):
        if required:
            raise UsageError("need --hi, --hf and --h0")
        return None
    if any(v is None for v in given):
        raise UsageError("--hi, --hf and --h0 must be given together")
    return EnergyTriple(h_i=ns.hi, h_f=ns.hf, h_0=ns.h0)


def _triple_inputs(e: EnergyTriple) -> dict:
    return {"h_i": (e.h_i, "J"), "h_f": (e.h_f, "J"), "h_0": (e.h_0, "J")}


# ---------------------------------------------------------------- commands


def compute_dwell(ns) -> list[ResultRecord]:
    if ns.tm is None:
        raise UsageError("--tm is required")
    e = _triple(ns)
    if e is not None and ns.gamma is not None:
        raise UsageError("give either --gamma or the energy triple, not both")
    records = []
    if e is not None:
        gamma = decay_gamma(e)
        inputs = {**_triple_inputs(e), "tau_m": (ns.tm, "s")}
        records.append(ResultRecord("gamma", gamma, "s^-1", F_GAMMA, _triple_inputs(e)))
    elif ns.gamma is not None:
        gamma = ns.gamma
        inputs = {"gamma": (gamma, "s^-1"), "tau_m": (ns.tm, "s")}
    else:
        raise UsageError("need --gamma or --hi/--hf/--h0")
    w = tt.MeasurementWindow.of_length(ns.tm)

    forms = ["paper-coth", "derived-tanh", "numeric"] if ns.all else [ns.form]
    for form in forms:
        if form == "numeric":
            value = tt.dwell_weak_numeric(gamma, w)
            records.append(ResultRecord("dwell_numeric", value, "s", F_DWELL_NUM, inputs))
        elif form == "derived-tanh":
            value = tt.dwell_closed(gamma, w, tt.DwellForm.DERIVED_TANH)
            records.append(ResultRecord("dwell_derived_tanh", value, "s", F_DWELL_TANH, inputs))
        else:
            value = tt.dwell_closed(gamma, w, tt.DwellForm.PAPER_COTH)
            records.append(ResultRecord("dwell_paper_coth", value, "s", F_DWELL_COTH, inputs))
    if ns.all:
        coth = tt.dwell_closed(gamma, w, tt.DwellForm.PAPER_COTH)
        tanh = tt.dwell_closed(gamma, w, tt.DwellForm.DERIVED_TANH)
        records.append(ResultRecord(
            "coth_tanh_gamma2", coth * tanh * gamma**2, "dimensionless",
            "coth form * tanh form * gamma^2 = 1", inputs,
        ))
    return records


def compute_zeno(ns) -> list[ResultRecord]:
    e = _triple(ns)
    if ns.epsilon0 is not None:
        bias = dw.BiasSpec(epsilon0=ns.epsilon0, tunneling_element=abs(ns.epsilon0))
        inputs = {"epsilon0": (ns.epsilon0, "J")}
        return [ResultRecord("epsilon0", ns.epsilon0, "J", "input asymmetry energy", {})] + _ps_record(
            "zeno_time_switching", dw.zeno_time_switching(bias), F_Z_SWITCH, inputs
        )
    if e is not None:
        return _ps_record("zeno_time_weak", tt.zeno_time_weak(e), F_Z_WEAK, _triple_inputs(e))
    if ns.delta_h is not None:
        return _ps_record(
            "zeno_time_variance", tt.zeno_time_variance(ns.delta_h), F_Z_VAR,
            {"delta_h": (ns.delta_h, "J")},
        )
    if ns.tau_l is not None or ns.tau_m is not None:
        if ns.tau_l is None or ns.tau_m is None:
            raise UsageError("--tau-l and --tau-m must be given together")
        return _ps_record(
            "zeno_time_geometric", tt.zeno_time_geometric(ns.tau_l, ns.tau_m), F_Z_GEO,
            {"tau_l": (ns.tau_l, "s"), "tau_m": (ns.tau_m, "s")},
        )
    raise UsageError("need one of --epsilon0, --delta-h, --tau-l/--tau-m or --hi/--hf/--h0")


def _doublewell_params(ns) -> dw.DoubleWellParams | None:
    physical = [ns.m, ns.omega0, ns.a]
    if any(v is not None for v in physical):
        if any(v is None for v in physical):
            raise UsageError("--m, --omega0 and --a must be given together")
        if ns.v0 is not None:
            raise UsageError("--v0 conflicts with --m/--omega0/--a")
        return dw.DoubleWellParams(m=ns.m, omega0=ns.omega0, a=ns.a, A=ns.A, B=ns.B)
    if ns.v0 is not None:
        return dw.DoubleWellParams.from_scaled(A=ns.A, B=ns.B, beta_sq=ns.beta2, v0=ns.v0)
    return None


def compute_doublewell(ns) -> list[ResultRecord]:
    A, B = ns.A, ns.B
    xi0, xi1, xi2 = dw.extrema_closed(A, B)
    params = _doublewell_params(ns)
    beta_sq = params.beta_sq if params is not None else ns.beta2
    if not beta_sq > 0:
        raise DomainError("beta^2 must be positive")
    shape_in = {"A": (A, "dimensionless"), "B": (B, "dimensionless")}
    full_in = {**shape_in, "beta_sq": (beta_sq, "dimensionless")}
    eps_over_v0 = float(dw.shape(xi2, A, B))
    coeff = dw.bias_coefficient(A, B)
    k0 = dw.ground_energy_k0(beta_sq, B)
    nd = "dimensionless"
    records = [
        ResultRecord("xi0", xi0, nd, "left minimum", shape_in),
        ResultRecord("xi1", xi1, nd, "xi1 = (3A - sqrt(9A^2 - 32B)) / 8", shape_in),
        ResultRecord("xi2", xi2, nd, "xi2 = (3A + sqrt(9A^2 - 32B)) / 8", shape_in),
        ResultRecord("epsilon_over_v0", eps_over_v0, nd, "eps/V0 = xi2^2 (xi2^2 - A xi2 + B)", shape_in),
        ResultRecord("h_coefficient", coeff, nd, "h = eps (1 - c / beta^2)", shape_in),
        ResultRecord("beta_sq", beta_sq, nd, "beta^2 = m omega0 a^2 / hbar", {}),
        ResultRecord("k0", k0, nd, "K0 = sqrt(B)/2 + 3/(8 beta^2 B)", full_in),
        ResultRecord("h_over_v0", eps_over_v0 * (1 - coeff / beta_sq), nd, "h = eps (1 - c / beta^2)", full_in),
        ResultRecord(
            "tunneling_condition", float(dw.tunneling_condition(beta_sq)), nd, "beta^2 > 0.0645", full_in
        ),
    ]
    eps0 = ns.epsilon0
    if params is not None:
        eps_j = dw.asymmetry_epsilon(params)
        records += [
            ResultRecord("v0", params.v0, "J", "V0 = m omega0^2 a^2 / 2", {}),
            ResultRecord("hbar_omega0", params.energy_unit, "J", "energy unit of K", {}),
            ResultRecord("epsilon0", eps_j, "J", "eps = V(xi2) - V(0)", full_in),
            ResultRecord("h", dw.bias_h(params), "J", "h = (K0'(xi2) - K0) hbar omega0", full_in),
        ]
        if eps0 is None:
            eps0 = eps_j
    if eps0 is not None and eps0 != 0:
        records += _ps_record(
            "zeno_time_switching", dw.zeno_time_switching(dw.BiasSpec(eps0)), F_Z_SWITCH,
            {"epsilon0": (eps0, "J")},
        )
    if getattr(ns, "curve", None):
        xi, v = dw.curve(A, B, ns.xi_min, ns.xi_max, ns.curve_points)
        _write_rows(ns.curve, ["xi", "V_over_V0"], zip(xi.tolist(), v.tolist()))
    return records


def compute_survival(ns) -> list[ResultRecord]:
    for flag, v in (("--tau-z", ns.tau_z), ("--tau-m", ns.tau_m), ("--T", ns.T)):
        if v is None:
            raise UsageError(f"{flag} is required")
    inputs = {"tau_z": (ns.tau_z, "s"), "tau_m": (ns.tau_m, "s"), "T": (ns.T, "s")}
    pulsed = tt.survival_pulsed(ns.tau_m, ns.tau_z, ns.T)
    expo = tt.survival_exponential(ns.tau_m, ns.tau_z, ns.T)
    nd = "dimensionless"
    records = [
        ResultRecord("survival_pulsed", pulsed, nd, F_PULSED, inputs),
        ResultRecord("survival_exponential", expo, nd, F_EXPO, inputs),
        ResultRecord("survival_difference", pulsed - expo, nd, "pulsed - exponential", inputs),
    ]
    if getattr(ns, "curve", None):
        rows = []
        for t in np.linspace(0.0, ns.T, ns.curve_points).tolist():
            p = tt.survival_pulsed(ns.tau_m, ns.tau_z, t)
            q = tt.survival_exponential(ns.tau_m, ns.tau_z, t)
            rows.append((t, p, q, p - q))
        _write_rows(ns.curve, ["T_seconds", "pulsed", "exponential", "difference"], rows)
    return records


def compute_bathsim(ns) -> list[ResultRecord]:
    for flag, v in (("--N", ns.N), ("--dE", ns.dE), ("--coupling", ns.coupling), ("--t-end", ns.t_end)):
        if v is None:
            raise UsageError(f"{flag} is required")
    model = zs.BathModel(n_levels=ns.N, delta_e=ns.dE, coupling=ns.coupling)
    dt = ns.dt if ns.dt is not None else model.max_dt()
    if math.isinf(dt):
        dt = ns.t_end / 1000 if ns.t_end > 0 else 1.0
    traj = zs.evolve_bath(model, ns.t_end, dt)
    nd = "dimensionless"
    inputs = {"N": (float(ns.N), nd), "dE": (ns.dE, "J"), "coupling": (ns.coupling, "J")}
    records = [
        ResultRecord("energy_spread", model.energy_spread, "J", "dH = H sqrt(2N)", inputs),
        ResultRecord("survival_final", float(traj.p_survival[-1]), nd, "P = |a0(t_end)|^2", inputs),
        ResultRecord("norm_drift", float(np.max(np.abs(traj.norm - 1))), nd, "max |norm - 1|", inputs),
    ]
    if model.coupling > 0:
        tau_z = model.zeno_time
        records.append(ResultRecord("zeno_time_variance", tau_z, "s", F_Z_VAR, inputs))
        # dedicated fine-step run resolving 1e-8 <= 1-P <= 1e-3
        fine_dt = min(1e-4 * tau_z, model.max_dt())
        short = zs.evolve_bath(model, 0.05 * tau_z, fine_dt)
        fit = zs.short_time_exponent(short)
        records.append(ResultRecord("short_time_exponent", fit.slope, nd, "slope of log(1-P) vs log t", inputs))
        records.append(ResultRecord("short_time_r_squared", fit.r_squared, nd, "fit quality", inputs))
        window = _parse_window(ns.fit_window) if ns.fit_window else zs.default_decay_window(traj)
        if window is not None:
            decay = zs.fit_decay_rate(traj, window)
            records.append(ResultRecord("gamma_fit", decay.gamma, "s^-1", "-slope/2 of ln P vs t", inputs))
            records.append(ResultRecord("gamma_fit_r_squared", decay.fit.r_squared, nd, "fit quality", inputs))
        else:
            print("note: no decay window in trajectory; gamma_fit skipped", file=sys.stderr)
    else:
        print("note: zero coupling; short-time and decay fits skipped", file=sys.stderr)
    if ns.pulses is not None:
        schedule = zs.MeasurementSchedule.from_pulses(ns.t_end, ns.pulses)
        rep = zs.survival_repeated(model, schedule, dt)
        p_in = {**inputs, "pulses": (float(ns.pulses), nd), "T": (ns.t_end, "s")}
        records.append(ResultRecord("survival_repeated", rep, nd, "P(T/n)^n", p_in))
        if model.coupling > 0 and schedule.tau_m < model.zeno_time:
            records.append(ResultRecord(
                "survival_pulsed_formula",
                tt.survival_pulsed(schedule.tau_m, model.zeno_time, ns.t_end), nd, F_PULSED, p_in,
            ))
    if ns.trajectory:
        stride = max(1, ns.every)
        rows = zip(
            traj.times[::stride].tolist(),
            traj.a0.real[::stride].tolist(),
            traj.a0.imag[::stride].tolist(),
            traj.p_survival[::stride].tolist(),
            traj.bath_norm[::stride].tolist(),
        )
        _write_rows(ns.trajectory, ["t_seconds", "re_a0", "im_a0", "p_survival", "bath_norm"], rows)
    return records


def _parse_window(text: str) -> tuple[float, float]:
    try:
        lo, hi = text.split(":")
        return _time(lo), _time(hi)
    except ValueError:
        raise UsageError(f"--fit-window expects t0:t1, got {text!r}") from None


def _write_rows(path: str, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        write_csv(fh, header, rows)


COMPUTE = {
    "dwell": compute_dwell,
    "zeno": compute_zeno,
    "doublewell": compute_doublewell,
    "survival": compute_survival,
    "bathsim": compute_bathsim,
}

# numeric parameters that sweep may vary: name -> (namespace attribute, unit kind)
SWEEPABLE = {
    "dwell": {"gamma": "rate", "tm": "time", "hi": "energy", "hf": "energy", "h0": "energy"},
    "zeno": {
        "delta_h": "energy", "tau_l": "time", "tau_m": "time",
        "hi": "energy", "hf": "energy", "h0": "energy", "epsilon0": "energy",
    },
    "doublewell": {
        "A": None, "B": None, "beta2": None, "v0": "energy",
        "m": None, "omega0": None, "a": None, "epsilon0": "energy",
    },
    "survival": {"tau_z": "time", "tau_m": "time", "T": "time"},
}


def _parse_sweep(text: str, command: str) -> tuple[str, list[float]]:
    try:
        name, spec = text.split("=", 1)
    except ValueError:
        raise UsageError(f"--sweep expects param=start:stop:points[:log], got {text!r}") from None
    name = name.strip().replace("-", "_")
    if name not in SWEEPABLE[command]:
        raise UsageError(
            f"unknown sweep parameter {name!r} for {command}; "
            f"choose from {', '.join(SWEEPABLE[command])}"
        )
    kind = SWEEPABLE[command][name]
    parts = spec.split(":")
    if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] not in ("log", "lin")):
        raise UsageError(f"bad sweep grid {spec!r}")
    try:
        start, stop = (parse_quantity(p, kind) if kind else float(p) for p in parts[:2])
        points = int(parts[2])
    except ValueError as exc:
        raise UsageError(f"bad sweep grid {spec!r}: {exc}") from None
    log = len(parts) == 4 and parts[3] == "log"
    if points < 1:
        raise UsageError("sweep needs at least one point")
    if points == 1:
        return name, [start]
    if not start < stop:
        raise UsageError("sweep needs start < stop")
    if log:
        if not start > 0:
            raise UsageError("logarithmic sweep needs start > 0")
        return name, np.geomspace(start, stop, points).tolist()
    return name, np.linspace(start, stop, points).tolist()


def run_sweep(command: str, base_ns, param: str, values: list[float]) -> tuple[list[str], list[list]]:
    header: list[str] | None = None
    rows = []
    for v in values:
        ns = copy.copy(base_ns)
        setattr(ns, param, v)
        ns.curve = None
        records = COMPUTE[command](ns)
        names = [r.name for r in records]
        if header is None:
            header = [param] + names
        elif names != header[1:]:
            raise DomainError(f"sweep output columns changed at {param}={fmt(v)}")
        rows.append([float(v)] + [float(r.value) for r in records])
    return header or [param], rows


# ---------------------------------------------------------------- parsing


def _common_parent() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--json", action="store_true", help="print records as a JSON array")
    p.add_argument("--csv", metavar="PATH", help="write records (or sweep rows) as CSV to PATH")
    p.add_argument("--config", metavar="PATH", help="key = value file; command-line flags override it")
    return p


def _add_triple(p: argparse.ArgumentParser) -> None:
    p.add_argument("--hi", type=_energy, help="initial level H_i (J, eV or K)")
    p.add_argument("--hf", type=_energy, help="final level H_f")
    p.add_argument("--h0", type=_energy, help="ground level H_0")


def _add_dwell_args(p):
    p.add_argument("--gamma", type=_rate, help="decay constant (1/s)")
    _add_triple(p)
    p.add_argument("--tm", type=_time, help="measurement time tau_M (s or ps)")
    p.add_argument("--form", choices=["paper-coth", "derived-tanh", "numeric"], default="paper-coth")
    p.add_argument("--all", action="store_true", help="emit all three forms and the coth*tanh check")


def _add_zeno_args(p):
    p.add_argument("--delta-h", type=_energy, help="energy spread dH")
    p.add_argument("--tau-l", type=_time, help="lifetime tau_L")
    p.add_argument("--tau-m", type=_time, help="measurement interval tau_M")
    _add_triple(p)
    p.add_argument("--epsilon0", type=_energy, help="asymmetry energy (J, eV or K)")


def _add_doublewell_args(p, with_curve: bool = True):
    p.add_argument("--A", type=float, default=14.0)
    p.add_argument("--B", type=float, default=45.0)
    p.add_argument("--beta2", type=float, default=1.0, help="beta^2 = m omega0 a^2 / hbar")
    p.add_argument("--v0", type=_energy, help="V0 in joules; enables absolute energies")
    p.add_argument("--m", type=float, help="mass (kg)")
    p.add_argument("--omega0", type=float, help="angular frequency (rad/s)")
    p.add_argument("--a", type=float, help="length scale (m)")
    p.add_argument("--epsilon0", type=_energy, help="asymmetry energy for the switching Zeno time")
    if with_curve:
        p.add_argument("--curve", metavar="PATH", help="write V(xi)/V0 samples to PATH")
        p.add_argument("--curve-points", type=int, default=201)
        p.add_argument("--xi-min", type=float, default=-1.0)
        p.add_argument("--xi-max", type=float, default=9.0)


def _add_survival_args(p, with_curve: bool = True):
    p.add_argument("--tau-z", type=_time)
    p.add_argument("--tau-m", type=_time)
    p.add_argument("--T", type=_time, help="total time")
    if with_curve:
        p.add_argument("--curve", metavar="PATH", help="write survival vs T to PATH")
        p.add_argument("--curve-points", type=int, default=101)


def _add_bathsim_args(p):
    p.add_argument("--N", type=int, help="bath half-width (2N+1 levels)")
    p.add_argument("--dE", type=_energy, help="level spacing")
    p.add_argument("--coupling", type=_energy, help="coupling H")
    p.add_argument("--t-end", type=_time)
    p.add_argument("--dt", type=_time, help="RK4 step (default: largest admissible)")
    p.add_argument("--pulses", type=int, help="projective measurements over t-end")
    p.add_argument("--trajectory", metavar="PATH", default="trajectory.csv",
                   help="trajectory CSV path ('' to skip)")
    p.add_argument("--every", type=int, default=1, help="write every k-th sample")
    p.add_argument("--fit-window", metavar="T0:T1", help="window for the decay-rate fit")


ADDERS = {
    "dwell": _add_dwell_args,
    "zeno": _add_zeno_args,
    "doublewell": _add_doublewell_args,
    "survival": _add_survival_args,
    "bathsim": _add_bathsim_args,
}

HELP = {
    "dwell": "weak dwell time for a decay constant or energy triple",
    "zeno": "Zeno time from an energy spread, lifetime, energy triple or asymmetry energy",
    "doublewell": "quartic double-well extrema, energies and switching Zeno time",
    "survival": "pulsed vs exponential survival probability",
    "bathsim": "simulate the reference level decaying into a bath ladder",
    "sweep": "evaluate a command over a parameter grid, one CSV row per point",
}


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(
        prog="weakzeno", description="Weak-measurement dwell and Zeno times in dissipative systems."
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    parent = _common_parent()
    subparsers = {}
    for name, adder in ADDERS.items():
        sp = sub.add_parser(name, parents=[parent], help=HELP[name], description=HELP[name])
        adder(sp)
        subparsers[name] = sp
    sp = sub.add_parser("sweep", parents=[parent], help=HELP["sweep"], description=HELP["sweep"])
    sp.add_argument("--command", dest="target", required=True, choices=sorted(SWEEPABLE))
    sp.add_argument("--sweep", required=True, metavar="PARAM=START:STOP:POINTS[:log]")
    subparsers["sweep"] = sp
    return parser, subparsers


def _config_tokens(path: str) -> list[str]:
    tokens = []
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc}") from None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        flag = "--" + key.lstrip("-").replace("_", "-")
        if value.lower() in ("true", "yes", "on"):
            tokens.append(flag)
        elif value.lower() in ("false", "no", "off"):
            continue
        else:
            tokens += [flag, value]
    return tokens


def _with_config(argv: list[str], commands) -> list[str]:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return argv
    idx = next((i for i, a in enumerate(argv) if a in commands), None)
    if idx is None:
        return argv
    # config flags go first so the command line overrides them
    return argv[: idx + 1] + _config_tokens(known.config) + argv[idx + 1 :]


_NEGATIVE_VALUE = re.compile(r"^-\.?\d")


def _attach_negative_values(argv: list[str]) -> list[str]:
    # argparse would read "-6.9e-24J" as an option; bind it to its flag instead
    out: list[str] = []
    for token in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and _NEGATIVE_VALUE.match(token):
            out[-1] = f"{out[-1]}={token}"
        else:
            out.append(token)
    return out


def _emit(records: list[ResultRecord], ns, out) -> None:
    if ns.csv:
        Path(ns.csv).write_text(records_to_csv(records), encoding="utf-8")
    if ns.json:
        out.write(records_to_json(records) + "\n")
    else:
        out.write(records_to_table(records))


def main(argv: list[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subparsers = build_parser()
    try:
        argv = _attach_negative_values(_with_config(argv, subparsers))
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"weakzeno: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        ns, extra = parser.parse_known_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if ns.command is None:
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    active = subparsers[ns.command]
    try:
        if ns.command == "sweep":
            base = argparse.ArgumentParser(prog=f"weakzeno sweep --command {ns.target}")
            ADDERS[ns.target](base)
            try:
                base_ns = base.parse_args(extra)
            except SystemExit as exc:
                return int(exc.code or 0)
            param, values = _parse_sweep(ns.sweep, ns.target)
            with warnings.catch_warnings():
                warnings.simplefilter("always")
                header, rows = run_sweep(ns.target, base_ns, param, values)
            buf = io.StringIO()
            write_csv(buf, header, rows)
            if ns.csv:
                Path(ns.csv).write_text(buf.getvalue(), encoding="utf-8")
            else:
                out.write(buf.getvalue())
            return EXIT_OK
        if extra:
            active.print_usage(sys.stderr)
            print(f"weakzeno {ns.command}: error: unrecognized arguments: {' '.join(extra)}", file=sys.stderr)
            return EXIT_USAGE
        records = COMPUTE[ns.command](ns)
        _emit(records, ns, out)
        return EXIT_OK
    except UsageError as exc:
        active.print_usage(sys.stderr)
        print(f"weakzeno {ns.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except zs.StepSizeError as exc:
        print(f"weakzeno {ns.command}: {exc} (suggested dt: {exc.suggested_dt:.6g} s)", file=sys.stderr)
        return EXIT_DOMAIN
    except (DomainError, QuadratureError, RootFindingError, OdeError) as exc:
        print(f"weakzeno {ns.command}: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    raise SystemExit(main())

"""``mbell`` command line: sweeps, strategy optimization, Bell evaluation, uniqueness."""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Callable

import numpy as np

from mbell import bell, game, optimize, uniqueness
from mbell.quantum import StateVector, make_phi_in, make_psi_in, make_six_in

SWEEP_COLUMNS = [
    "alpha",
    "payoff_low_strategy",
    "payoff_high_strategy",
    "payoff_envelope",
    "chi_payoff_opt",
    "chi_mabk_max",
    "delta_chi",
    "fulcrum_flag",
]
COMMANDS = ("sweep", "optimize", "bell", "uniqueness")


@dataclass(frozen=True)
class Family:
    name: str
    n: int
    state: Callable[[float], StateVector]
    low: game.SymmetricProfile
    high: game.SymmetricProfile


FAMILIES = {
    "psi4": Family("psi4", 4, make_psi_in, game.M_LOW, game.M_HIGH),
    "phi4": Family("phi4", 4, make_phi_in, game.M_LOW, game.M_HIGH),
    "six": Family("six", 6, make_six_in, game.SIX_LOW, game.SIX_HIGH),
}


@dataclass
class RunConfig:
    command: str = "sweep"
    family: str = "psi4"
    alpha_steps: int = 21
    output_path: str = "sweep.csv"
    alpha: float | None = None
    plane: str = "xy"
    polynomial: str = "mabk"
    axis: str | None = None
    fulcrum_tol: float = 1e-13
    optimizer_xatol: float = 1e-10
    match_tol: float = 1e-8

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {sorted(FAMILIES)}")
        if int(self.alpha_steps) < 2:
            raise ValueError("alpha_steps must be at least 2")
        if self.alpha is not None and not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.plane.lower() not in bell.PLANES:
            raise ValueError(f"invalid plane {self.plane!r}; expected xy, zy or xz")
        if self.polynomial not in ("mabk", "payoff"):
            raise ValueError(f"invalid polynomial {self.polynomial!r}; expected mabk or payoff")
        if self.axis is not None and self.axis.upper() not in uniqueness.AXES:
            raise ValueError(f"invalid axis {self.axis!r}; expected z, x or y")

    def alphas(self) -> np.ndarray:
        return optimize.alpha_grid(int(self.alpha_steps))


def fmt(x: float) -> str:
    """Positional decimal with 10 significant digits; tiny residues print as 0."""
    x = float(x)
    if np.isnan(x):
        return "nan"
    if abs(x) < 1e-13:
        return "0"
    return np.format_float_positional(x, precision=10, unique=False, fractional=False, trim="-")


def read_config_file(path: str) -> dict[str, str]:
    """Flat ``key = value`` lines; blank lines and ``#`` comments ignored."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


_ALIASES = {"steps": "alpha_steps", "out": "output_path"}


def build_config(command: str, file_values: dict[str, str], flags: dict) -> RunConfig:
    """Merge defaults < config file < command-line flags."""
    types = {f.name: f.type for f in fields(RunConfig)}
    merged: dict = {}
    for key, value in file_values.items():
        key = _ALIASES.get(key, key)
        if key not in types or key == "command":
            raise ValueError(f"unknown config key {key!r}")
        merged[key] = value
    for key, value in flags.items():
        if value is not None:
            merged[_ALIASES.get(key, key)] = value
    for key, value in list(merged.items()):
        if isinstance(value, str):
            t = types[key]
            if "int" in t:
                merged[key] = int(value)
            elif "float" in t:
                merged[key] = float(value)
    return RunConfig(command=command, **merged)


def max_mabk_violation(state: StateVector, planes=("xy", "zy", "xz")) -> tuple[float, str]:
    poly = bell.mabk_polynomial(state.n_qubits)
    results = [(bell.maximize_violation(poly, state, p)[1], p) for p in planes]
    return max(results)


def cmd_sweep(cfg: RunConfig, out=None) -> list[dict[str, str]]:
    out = out or sys.stdout
    fam = FAMILIES[cfg.family]
    spec = game.minority_payoff_spec(fam.n)
    fulcrum = optimize.find_fulcrum(fam.state, spec, fam.low, fam.high, tol=cfg.fulcrum_tol)
    table = optimize.payoff_sweep(fam.state, spec, [fam.low, fam.high], cfg.alphas())
    bound = bell.lhv_bound(bell.mabk_polynomial(fam.n))
    rows = []
    for alpha, (p_low, p_high), env in zip(table.alphas, table.payoffs, table.envelope):
        state = fam.state(alpha)
        region_two = alpha >= fulcrum.alpha_star
        if fam.n == 4:
            scheme = bell.axis_scheme(4, "xy" if region_two else "zy")
            chi_payoff = bell.evaluate(bell.payoff_polynomial(), state, scheme)
        else:
            chi_payoff = float("nan")
        chi_max, _ = max_mabk_violation(state)
        rows.append(
            {
                "alpha": fmt(alpha),
                "payoff_low_strategy": fmt(p_low),
                "payoff_high_strategy": fmt(p_high),
                "payoff_envelope": fmt(env),
                "chi_payoff_opt": fmt(chi_payoff),
                "chi_mabk_max": fmt(chi_max),
                "delta_chi": fmt(chi_max / bound),
                "fulcrum_flag": "1" if region_two else "0",
            }
        )
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    try:
        Path(cfg.output_path).write_text(buf.getvalue())
    except OSError as exc:
        raise ValueError(f"cannot write {cfg.output_path}: {exc.strerror}") from exc
    print(f"family: {fam.name}  rows: {len(rows)}  written to {cfg.output_path}", file=out)
    print(f"fulcrum alpha* = {fmt(fulcrum.alpha_star)}", file=out)
    print(f"payoff at fulcrum = {fmt(fulcrum.payoff_at_fulcrum)}", file=out)
    return rows


def cmd_optimize(cfg: RunConfig, out=None) -> dict:
    out = out or sys.stdout
    if cfg.alpha is None:
        raise ValueError("optimize needs --alpha")
    fam = FAMILIES[cfg.family]
    spec = game.minority_payoff_spec(fam.n)
    state = fam.state(cfg.alpha)
    res = optimize.optimize_symmetric_strategy(state, spec, xatol=cfg.optimizer_xatol)
    theta, beta = res.best_parameters
    print(f"family: {fam.name}  alpha = {fmt(cfg.alpha)}", file=out)
    print(f"optimal theta = {fmt(theta)}  beta = {fmt(beta)}", file=out)
    print(f"optimal payoff = {fmt(res.best_value)}  ({res.evaluations} evaluations)", file=out)
    report = {"theta": theta, "beta": beta, "payoff": res.best_value, "matches": []}
    for label, ref in (("M_<", fam.low), ("M_>", fam.high)):
        p_ref = game.expected_payoff(state, ref, spec)
        residual = res.best_value - p_ref
        same_params = optimize.same_class(res.profile, ref)
        matches = abs(residual) < cfg.match_tol
        if matches:
            report["matches"].append(label)
        print(
            f"{label} (theta={fmt(ref.theta)}, beta={fmt(ref.beta)}): payoff {fmt(p_ref)}  "
            f"residual {residual:.3e}  parameters {'equivalent' if same_params else 'differ'}  "
            f"-> {'MATCH' if matches else 'no match'}",
            file=out,
        )
    if not report["matches"]:
        print("optimum exceeds both reference strategies", file=out)
    return report


def cmd_bell(cfg: RunConfig, out=None) -> dict:
    out = out or sys.stdout
    if cfg.alpha is None:
        raise ValueError("bell needs --alpha")
    fam = FAMILIES[cfg.family]
    state = fam.state(cfg.alpha)
    if cfg.polynomial == "payoff":
        poly = bell.payoff_polynomial(fam.n)
        scheme = bell.axis_scheme(fam.n, cfg.plane)
        scheme_name = f"axis scheme {bell.PLANES[cfg.plane.lower()]}"
    else:
        poly = bell.mabk_polynomial(fam.n)
        scheme = bell.werner_scheme(fam.n, cfg.plane)
        scheme_name = f"Werner scheme {bell.PLANES[cfg.plane.lower()]}"
    direct = bell.evaluate(poly, state, scheme)
    best_scheme, best = bell.maximize_violation(poly, state, cfg.plane)
    bound = bell.lhv_bound(poly)
    a1, a2 = best_scheme.settings[0]
    print(f"family: {fam.name}  alpha = {fmt(cfg.alpha)}  polynomial: {cfg.polynomial}", file=out)
    print(f"chi at {scheme_name} = {fmt(direct)}", file=out)
    print(f"max |chi| over symmetric {a1.axes} schemes = {fmt(best)}", file=out)
    print(f"  at angles ({fmt(a1.angle)}, {fmt(a2.angle)})", file=out)
    print(f"lhv_bound = {fmt(bound)}", file=out)
    print(f"delta_chi = {fmt(best / bound)}", file=out)
    return {"direct": direct, "max": best, "lhv_bound": bound, "delta_chi": best / bound}


REPRESENTATIVE = {
    "Z": uniqueness.EliminationChoice("Z", np.pi / 2, np.pi / 8),
    "X": uniqueness.EliminationChoice("X", np.pi / 3, 0.0),
    "Y": uniqueness.EliminationChoice("Y", np.pi / 3, np.pi / 4),
}

SAMPLE_GAMES = {
    "a=1/4, b=0 (Minority)": (0.25, 0.0),
    "a=0, b=1/4 (anti-Minority)": (0.0, 0.25),
    "a=1, b=-1": (1.0, -1.0),
    "a=-1, b=1": (-1.0, 1.0),
    "a=1, b=1": (1.0, 1.0),
    "a=-1, b=-1": (-1.0, -1.0),
}


def cmd_uniqueness(cfg: RunConfig, out=None) -> dict:
    out = out or sys.stdout
    axes = [cfg.axis.upper()] if cfg.axis else list(uniqueness.AXES)
    odd, even = uniqueness.parity_patterns()
    report = {}
    for axis in axes:
        choice = REPRESENTATIVE[axis]
        system = uniqueness.build_constraints(choice)
        basis = uniqueness.solve_family(system)
        n_rows = len(system.cancellation_rows)
        print(
            f"[{axis}-elimination] theta = {fmt(choice.theta)}, beta = {fmt(choice.beta)}, "
            f"plane {choice.plane}",
            file=out,
        )
        print(f"  cancellation rows: {n_rows}  rank: {system.rank()}", file=out)
        print(f"  nullspace dimension: {basis.shape[1]}", file=out)
        print(f"  residual vs parity family: {uniqueness.family_residual(basis):.3e}", file=out)
        for i, vec in enumerate(basis.T):
            a, b, _ = uniqueness.family_parameters(vec)
            print(f"  basis {i + 1}: a = {fmt(a)} on weight-1/3 outcomes, b = {fmt(b)} on weight-0/2/4", file=out)
        with_sum = system.has_sum_condition
        if with_sum:
            full = uniqueness.solve_family(system, with_sum_condition=True)
            print(
                f"  with the sum(c) = 0 row: rank {system.rank(True)}, nullspace dimension {full.shape[1]}",
                file=out,
            )
        allowed = []
        for label, (a, b) in SAMPLE_GAMES.items():
            c = a * odd + b * even
            rows = system.matrix if with_sum else system.cancellation_rows
            if np.max(np.abs(rows @ c)) < 1e-10:
                cls = uniqueness.classify_game(c)
                allowed.append(cls)
                print(f"  {label}: admissible -> {cls}", file=out)
            else:
                print(f"  {label}: excluded", file=out)
        report[axis] = {
            "rows": n_rows,
            "rank": system.rank(),
            "nullity": basis.shape[1],
            "classes": sorted(set(allowed)),
        }
    return report


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mbell", description=__doc__)
    parser.add_argument("--config", help="flat key=value file; flags override it")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="payoff and violation curves over alpha, written as CSV")
    p.add_argument("--family", choices=sorted(FAMILIES))
    p.add_argument("--steps", type=int, dest="alpha_steps")
    p.add_argument("--out", dest="output_path")

    p = sub.add_parser("optimize", help="best symmetric strategy at one alpha")
    p.add_argument("--family", choices=sorted(FAMILIES))
    p.add_argument("--alpha", type=float)

    p = sub.add_parser("bell", help="Bell polynomial value, maximum and LHV bound at one alpha")
    p.add_argument("--family", choices=sorted(FAMILIES))
    p.add_argument("--alpha", type=float)
    p.add_argument("--plane", type=str.lower, choices=sorted(bell.PLANES))
    p.add_argument("--polynomial", choices=["mabk", "payoff"])

    p = sub.add_parser("uniqueness", help="constraint rank and nullspace per eliminated axis")
    p.add_argument("--axis", type=str.lower, choices=["z", "x", "y"])
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    try:
        file_values = read_config_file(args.config) if args.config else {}
        cfg = build_config(args.command, file_values, flags)
        {"sweep": cmd_sweep, "optimize": cmd_optimize, "bell": cmd_bell, "uniqueness": cmd_uniqueness}[
            cfg.command
        ](cfg)
    except (ValueError, OSError) as exc:
        print(f"mbell: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

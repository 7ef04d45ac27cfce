"""Batch front-end writing CSV tables for the simulation outputs.

    fano <subcommand> [--preset NAME] [--config FILE] [--set key=value]... [--out PATH]

Settings are applied in order: preset, config file, then each --set.
Exit status is 0 on success, 1 for configuration or I/O errors and 2 for
numerical failures.
"""
from __future__ import annotations

import argparse
import ast
import dataclasses
import io
import math
import operator
import sys
from dataclasses import dataclass

import numpy as np

from . import energetics
from .kdq import kdq_series
from .liouville import build_generators, propagator
from .model import TIME_CONVENTIONS, InitialState, SystemParams, pure_state, to_seconds, to_xz

COMMANDS = (
    "evolve",
    "kdq",
    "work",
    "sweep-phases",
    "sweep-populations",
    "efficiency",
    "find-balance",
)

GAMMA = 3.0091e6
D_CENTER = 0.785e9


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str = "work"
    gamma_a: float = GAMMA
    gamma_b: float = GAMMA
    delta: float = 0.1 * GAMMA
    d_center: float = D_CENTER
    nbar: float = 3.0
    p: float = -1.0
    alpha_a: float = math.sqrt(0.3)
    alpha_b: float = math.sqrt(0.3)
    alpha_c: float = math.sqrt(0.4)
    phi_a: float = 0.0
    phi_b: float = math.pi
    phi_c: float = 0.0
    t_max: float = energetics.DEFAULT_T_MAX
    n_times: int = energetics.DEFAULT_N_TIMES
    time_convention: str = "rate"
    phase_fixed: str = "a"
    phase_points: int = energetics.DEFAULT_PHASE_POINTS
    population_points: int = energetics.DEFAULT_POPULATION_POINTS
    phi_b_list: tuple = (0.0, math.pi / 4, math.pi / 2, 3 * math.pi / 4, math.pi)
    out: str | None = None

    @property
    def params(self) -> SystemParams:
        return SystemParams(self.gamma_a, self.gamma_b, self.delta, self.d_center, self.nbar, self.p)

    @property
    def initial_state(self) -> InitialState:
        return InitialState(self.alpha_a, self.alpha_b, self.alpha_c, self.phi_a, self.phi_b, self.phi_c)

    @property
    def tau(self) -> np.ndarray:
        return energetics.default_tau_grid(self.t_max, self.n_times)

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        try:
            self.params
            self.initial_state
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if self.time_convention not in TIME_CONVENTIONS:
            raise ConfigError(f"time_convention must be one of {TIME_CONVENTIONS}")
        if self.n_times < 1 or self.t_max < 0 or not math.isfinite(self.t_max):
            raise ConfigError("time grid needs n_times >= 1 and a finite t_max >= 0")
        if self.phase_fixed not in ("a", "b", "c"):
            raise ConfigError("phase_fixed must be a, b or c")
        if self.phase_points < 1 or self.population_points < 2:
            raise ConfigError("sweep resolutions are too small")
        return self


def _preset_table():
    base = RunConfig()
    table = {}
    for p in (-1.0, -0.75, -0.5, -0.25):
        table[f"certification-p{p:g}"] = dataclasses.replace(base, p=p)
    table["optimal-extraction"] = dataclasses.replace(base, p=-0.5, phi_a=0.0, phi_b=math.pi, phi_c=0.0)
    table["weak-pumping-balance"] = dataclasses.replace(
        base,
        p=-0.5,
        nbar=0.5,
        alpha_a=math.sqrt(0.2),
        alpha_b=math.sqrt(0.2),
        alpha_c=math.sqrt(0.6),
    )
    return table


PRESETS = _preset_table()


def preset(name: str) -> RunConfig:
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(sorted(PRESETS))}") from None


# --- value parsing ---------------------------------------------------------

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_NAMES = {"pi": math.pi}
_FUNCS = {"sqrt": math.sqrt}


def _eval_node(node):
    if isinstance(node, ast.Expression):
        return _eval_node(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return float(node.value)
    if isinstance(node, ast.Name) and node.id in _NAMES:
        return _NAMES[node.id]
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
        v = _eval_node(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval_node(node.left), _eval_node(node.right))
    if (
        isinstance(node, ast.Call)
        and isinstance(node.func, ast.Name)
        and node.func.id in _FUNCS
        and len(node.args) == 1
        and not node.keywords
    ):
        return _FUNCS[node.func.id](_eval_node(node.args[0]))
    raise ConfigError("unsupported expression")


def parse_number(text: str) -> float:
    """Parse a float or a small arithmetic expression such as ``3*pi/4``."""
    try:
        return float(text)
    except ValueError:
        pass
    try:
        value = _eval_node(ast.parse(text.strip(), mode="eval"))
    except (SyntaxError, ZeroDivisionError, OverflowError, ValueError) as exc:
        raise ConfigError(f"cannot parse number {text!r}") from exc
    return float(value)


_FLOAT_KEYS = {
    "gamma_a", "gamma_b", "delta", "d_center", "nbar", "p",
    "alpha_a", "alpha_b", "alpha_c", "phi_a", "phi_b", "phi_c", "t_max",
}
_INT_KEYS = {"n_times", "phase_points", "population_points"}
_STR_KEYS = {"time_convention", "phase_fixed"}
# derived keys that set other fields
_ALIASES = {"gamma", "rho_aa", "rho_bb", "rho_cc", "phi_b_list"}
KNOWN_KEYS = _FLOAT_KEYS | _INT_KEYS | _STR_KEYS | _ALIASES


def apply_setting(config: RunConfig, key: str, raw: str) -> RunConfig:
    key = key.strip()
    raw = raw.strip()
    if key not in KNOWN_KEYS:
        raise ConfigError(f"unknown key {key!r}")
    if key in _FLOAT_KEYS:
        return dataclasses.replace(config, **{key: parse_number(raw)})
    if key in _INT_KEYS:
        value = parse_number(raw)
        if value != int(value):
            raise ConfigError(f"{key} must be an integer")
        return dataclasses.replace(config, **{key: int(value)})
    if key in _STR_KEYS:
        return dataclasses.replace(config, **{key: raw})
    if key == "gamma":
        g = parse_number(raw)
        return dataclasses.replace(config, gamma_a=g, gamma_b=g)
    if key == "phi_b_list":
        values = tuple(parse_number(v) for v in raw.split(",") if v.strip())
        if not values:
            raise ConfigError("phi_b_list is empty")
        return dataclasses.replace(config, phi_b_list=values)
    pop = parse_number(raw)
    if pop < 0:
        raise ConfigError(f"{key} must be nonnegative")
    return dataclasses.replace(config, **{"alpha_" + key[-1]: math.sqrt(pop)})


def parse_config_text(text: str, config: RunConfig) -> RunConfig:
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = line.split("=", 1)
        try:
            config = apply_setting(config, key, value)
        except ConfigError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from None
    return config


# --- CSV -------------------------------------------------------------------


def format_float(x: float) -> str:
    x = float(x)
    if x == 0.0:
        x = 0.0  # no "-0"
    return format(x, ".12g")


def format_csv(header, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(format_float(v) for v in row) + "\n")
    return buf.getvalue()


def parse_csv(text: str) -> tuple[list[str], list[list[float]]]:
    lines = text.split("\n")
    if lines[-1] == "":
        lines.pop()
    header = lines[0].split(",")
    rows = [[float(v) for v in line.split(",")] for line in lines[1:]]
    return header, rows


_LEVELS = "abc"
_PAIRS = [l + j for l in _LEVELS for j in _LEVELS]


def _table_evolve(cfg: RunConfig):
    params = cfg.params
    gen = build_generators(params)
    rho0 = pure_state(cfg.initial_state)
    tau = cfg.tau
    header = ["t_dimless", "rho_aa", "rho_bb", "rho_cc", "re_rho_ab", "im_rho_ab",
              "re_rho_ac", "im_rho_ac", "re_rho_bc", "im_rho_bc"]
    rows = []
    for tk, t in zip(tau, to_seconds(params, tau, cfg.time_convention)):
        rho = propagator(gen, float(t)).apply_hermitian(rho0)
        x, z = to_xz(rho)
        rows.append([tk, *x, *z])
    return header, rows


def _table_kdq(cfg: RunConfig):
    params = cfg.params
    tau = cfg.tau
    series = kdq_series(params, pure_state(cfg.initial_state), to_seconds(params, tau, cfg.time_convention))
    header = ["t_dimless"]
    for tag in ("q", "qdiag", "qcoh"):
        for pair in _PAIRS:
            header += [f"re_{tag}_{pair}", f"im_{tag}_{pair}"]
    header.append("aleph")
    rows = []
    aleph = series.aleph
    for k, tk in enumerate(tau):
        row = [tk]
        for table in (series.q, series.q_diag, series.q_coh):
            for v in table[k].reshape(-1):
                row += [v.real, v.imag]
        row.append(aleph[k])
        rows.append(row)
    return header, rows


def _table_work(cfg: RunConfig):
    params = cfg.params
    traj = energetics.work_trajectory(params, pure_state(cfg.initial_state), cfg.tau,
                                      convention=cfg.time_convention)
    eff = energetics.efficiency_from_work(params, traj)
    header = ["t_dimless", "w_total", "w_diag", "w_coh", "eta"]
    rows = zip(traj.tau, traj.w_total, traj.w_diag, traj.w_coh, eff.eta)
    return header, rows


def _table_efficiency(cfg: RunConfig):
    rep = energetics.efficiency(cfg.params, pure_state(cfg.initial_state), cfg.tau,
                                convention=cfg.time_convention)
    return ["p", "eta_max", "t_tilde_dimless"], [[cfg.p, rep.eta_max, rep.t_tilde]]


def _table_balance(cfg: RunConfig):
    bal = energetics.find_diag_balance(cfg.params, cfg.tau, convention=cfg.time_convention)
    return ["nbar", "rho_cc_balance", "residual"], [[bal.nbar, bal.rho_cc, bal.residual]]


def _long_format(grid: energetics.SweepGrid):
    header = [grid.axis1_name, grid.axis2_name, "value"]
    rows = []
    for i, a1 in enumerate(grid.axis1):
        for j, a2 in enumerate(grid.axis2):
            rows.append([a1, a2, grid.values[i, j]])
    return header, rows


def _table_sweep_phases(cfg: RunConfig):
    grid = energetics.phase_sweep(cfg.params, cfg.initial_state.populations, cfg.phase_fixed,
                                  cfg.phase_points, cfg.tau, convention=cfg.time_convention)
    return _long_format(grid)


def _table_sweep_populations(cfg: RunConfig):
    grid = energetics.population_sweep(cfg.params, cfg.alpha_c**2, cfg.phi_b_list,
                                       cfg.population_points, cfg.tau, convention=cfg.time_convention)
    return _long_format(grid)


_TABLES = {
    "evolve": _table_evolve,
    "kdq": _table_kdq,
    "work": _table_work,
    "efficiency": _table_efficiency,
    "find-balance": _table_balance,
    "sweep-phases": _table_sweep_phases,
    "sweep-populations": _table_sweep_populations,
}


def render(config: RunConfig) -> str:
    """CSV text for a validated configuration."""
    header, rows = _TABLES[config.command](config)
    return format_csv(header, rows)


def run(config: RunConfig) -> int:
    """Execute ``config`` and write its CSV; returns the process exit status."""
    try:
        config.validate()
    except ConfigError as exc:
        print(f"fano: config error: {exc}", file=sys.stderr)
        return 1
    try:
        text = render(config)
    except ArithmeticError as exc:
        print(f"fano: numeric failure: {exc}", file=sys.stderr)
        return 2
    if config.out is None:
        sys.stdout.write(text)
        return 0
    try:
        with open(config.out, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"fano: cannot write {config.out}: {exc}", file=sys.stderr)
        return 1
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_config(argv) -> RunConfig:
    parser = _Parser(prog="fano", description=__doc__.split("\n")[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--preset", help=f"one of: {', '.join(sorted(PRESETS))}")
    parser.add_argument("--config", help="file of 'key = value' lines")
    parser.add_argument("--set", dest="settings", action="append", default=[], metavar="KEY=VALUE")
    parser.add_argument("--out", help="output CSV path (default: stdout)")
    args = parser.parse_args(argv)

    config = preset(args.preset) if args.preset else RunConfig()
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read {args.config}: {exc}") from None
        config = parse_config_text(text, config)
    for item in args.settings:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        config = apply_setting(config, key, value)
    return dataclasses.replace(config, command=args.command, out=args.out)


def main(argv=None) -> int:
    try:
        config = build_config(sys.argv[1:] if argv is None else argv)
    except ConfigError as exc:
        print(f"fano: config error: {exc}", file=sys.stderr)
        return 1
    return run(config)


if __name__ == "__main__":
    sys.exit(main())

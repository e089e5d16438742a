"""Command-line interface: ``qbmtemp <command> [options]``.

Commands: beta, fig1 ... fig5, sweep, oracle-compare.  All inputs are in
the dimensionless units of the figure captions (hbar = omega0 = 1,
energies as E / (hbar omega0 / 2pi)); output is CSV.

Exit status: 0 ok, 2 configuration error, 3 solver error.
"""
import argparse
import io
import math
import os
import sys
import tempfile
from dataclasses import dataclass, replace

import numpy as np

from . import oracle, qbm, thermo
from .errors import InvalidParams, QBMError, SolverError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class SweepConfig:
    vary: str = "gamma"
    min: float = 0.0
    max: float = 10.0
    steps: int = 41
    log_scale: bool = False

    def grid(self):
        if self.log_scale:
            return np.geomspace(self.min, self.max, self.steps)
        return np.linspace(self.min, self.max, self.steps)


@dataclass(frozen=True)
class RunConfig:
    kappa_w0_cubed: float = 5.0
    wD_over_w0: float = 10.0
    gamma_over_w0: float = 0.0
    energy_paper_units: float = 0.2
    sweep: SweepConfig | None = None
    output_path: str | None = None
    n_modes: tuple = (64, 256, 1024)
    scheme: str = "continuum-matched"

    def model(self):
        return qbm.ModelParams.from_paper(self.kappa_w0_cubed, self.wD_over_w0, self.gamma_over_w0)

    def validate(self):
        try:
            self.model()
        except InvalidParams as exc:
            raise ConfigError(str(exc)) from exc
        if not (math.isfinite(self.energy_paper_units) and self.energy_paper_units >= 0):
            raise ConfigError("energy must be a finite number >= 0")
        if self.sweep is not None:
            s = self.sweep
            if s.vary not in thermo.SWEEP_VARIABLES:
                raise ConfigError(f"vary must be one of {thermo.SWEEP_VARIABLES}")
            if s.steps < 2:
                raise ConfigError("steps must be >= 2")
            if not (math.isfinite(s.min) and math.isfinite(s.max)) or s.min > s.max:
                raise ConfigError("need finite min <= max")
            if s.log_scale and s.min <= 0:
                raise ConfigError("log-scaled sweeps need min > 0")
        if not self.n_modes or any(n < 2 for n in self.n_modes):
            raise ConfigError("n_modes needs at least one entry, each >= 2")
        if self.scheme not in oracle.SCHEMES:
            raise ConfigError(f"scheme must be one of {oracle.SCHEMES}")
        return self


_FLOAT_KEYS = {"kappa_w0_cubed", "wD_over_w0", "gamma_over_w0", "energy_paper_units"}
_SWEEP_KEYS = {"vary", "min", "max", "steps", "log_scale"}
_OTHER_KEYS = {"output_path", "n_modes", "scheme"}
CONFIG_KEYS = _FLOAT_KEYS | _SWEEP_KEYS | _OTHER_KEYS


def _parse_bool(text):
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def _parse_float(key, text):
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"{key}: not a number: {text!r}") from None


def _parse_int(key, text):
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"{key}: not an integer: {text!r}") from None


def _parse_modes(text):
    try:
        return tuple(int(t) for t in text.replace(" ", "").split(",") if t)
    except ValueError:
        raise ConfigError(f"n_modes: not a comma-separated integer list: {text!r}") from None


def parse_config_text(text):
    """Flat ``key = value`` text; ``#`` starts a comment; unknown keys are errors."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = value
    return values


def build_config(values, base=None):
    """Apply parsed string values over ``base`` (defaults when None)."""
    cfg = base or RunConfig()
    updates = {}
    for key in _FLOAT_KEYS & values.keys():
        updates[key] = _parse_float(key, values[key])
    if "output_path" in values:
        updates["output_path"] = values["output_path"]
    if "n_modes" in values:
        updates["n_modes"] = _parse_modes(values["n_modes"])
    if "scheme" in values:
        updates["scheme"] = values["scheme"]
    cfg = replace(cfg, **updates)
    sweep_vals = _SWEEP_KEYS & values.keys()
    if sweep_vals:
        s = cfg.sweep or SweepConfig()
        s_updates = {}
        if "vary" in values:
            s_updates["vary"] = values["vary"]
        for key in ("min", "max"):
            if key in values:
                s_updates[key] = _parse_float(key, values[key])
        if "steps" in values:
            s_updates["steps"] = _parse_int("steps", values["steps"])
        if "log_scale" in values:
            s_updates["log_scale"] = _parse_bool(values["log_scale"])
        cfg = replace(cfg, sweep=replace(s, **s_updates))
    return cfg


# -- CSV ------------------------------------------------------------------

def fmt(value):
    """12 significant digits, locale independent; inf/nan spelled out."""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    v = float(value)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return "%.12g" % v


def render_csv(header, rows):
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    return buf.getvalue()


def write_output(text, path, stdout):
    if path is None:
        stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".qbmtemp-", suffix=".csv")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- commands ----------------------------------------------------------------

BETA_HEADER = ["gamma", "E_paper", "beta", "S_over_K", "S_A_over_K", "q2", "residual", "iterations"]


def cmd_beta(cfg):
    p = cfg.model()
    E = float(qbm.energy_from_paper(cfg.energy_paper_units, p))
    pt = thermo.thermo_point(E, p)
    row = [p.gamma, cfg.energy_paper_units, pt.beta, pt.S_over_K, pt.S_A_over_K, pt.q2, pt.residual, pt.iterations]
    return render_csv(BETA_HEADER, [row])


def _label(x):
    return fmt(x)


def _column_sweep(values, params_list, E_list, observable):
    """Evaluate ``observable(ThermoPoint)`` on a grid for several curves.
    Returns the columns and a combined status per row."""
    columns = []
    statuses = [[] for _ in values]
    for p_of, E in zip(params_list, E_list):
        col = []
        for i, v in enumerate(values):
            try:
                q = p_of(v)
                e = E(v) if callable(E) else E
                col.append(observable(q, e))
            except QBMError as exc:
                col.append(float("nan"))
                statuses[i].append(type(exc).__name__)
        columns.append(col)
    status = ["ok" if not s else "error:" + "|".join(s) for s in statuses]
    return columns, status


def _beta_obs(q, e):
    return thermo.beta_of_E(e, q).beta_star


FIG_DEFAULTS = {
    1: dict(vary="gamma", min=0.0, max=10.0, steps=41, log_scale=False),
    2: dict(vary="gamma", min=0.0, max=20.0, steps=41, log_scale=False),
    3: dict(vary="omegaD", min=0.05, max=100.0, steps=41, log_scale=True),
    4: dict(vary="gamma", min=0.0, max=20.0, steps=41, log_scale=False),
    5: dict(vary="gamma", min=0.0, max=10.0, steps=41, log_scale=False),
}
FIG_ENERGY = {1: 0.2, 2: 10.0, 3: 10.0, 4: 0.2, 5: None}
# not given in the figure captions; chosen to straddle the regime change
FIG2_WD_RATIOS = (10.0, 2.0, 1.0, 0.5, 0.1)
FIG3_GAMMAS = (0.5, 1.0, 5.0)
FIG5_ENERGIES = (0.2, 1.0, 10.0)


def fig_config(n, cfg, explicit):
    """Merge figure defaults with user overrides (keys in ``explicit``)."""
    d = dict(FIG_DEFAULTS[n])
    if cfg.sweep is not None:
        for key in ("min", "max", "steps", "log_scale"):
            if key in explicit:
                d[key] = getattr(cfg.sweep, key)
    sweep = SweepConfig(**d)
    energy = cfg.energy_paper_units if "energy_paper_units" in explicit else FIG_ENERGY[n]
    return replace(cfg, sweep=sweep, energy_paper_units=energy if energy is not None else cfg.energy_paper_units)


def cmd_fig(n, cfg, explicit=frozenset()):
    cfg = fig_config(n, cfg, explicit).validate()
    grid = cfg.sweep.grid()
    base = cfg.model()
    e_int = float(qbm.energy_from_paper(cfg.energy_paper_units, base))

    if n == 1:
        cols, status = _column_sweep(grid, [lambda g: base.replace(gamma=g)], [e_int], _beta_obs)
        header = ["gamma", "beta"]
    elif n == 2:
        ratios = (cfg.wD_over_w0,) if "wD_over_w0" in explicit else FIG2_WD_RATIOS
        makers = [(lambda r: (lambda g: base.replace(gamma=g, omegaD=r)))(r) for r in ratios]
        cols, status = _column_sweep(grid, makers, [e_int] * len(makers), _beta_obs)
        header = ["gamma"] + [f"beta_wD_{_label(r)}" for r in ratios]
    elif n == 3:
        gammas = (cfg.gamma_over_w0,) if "gamma_over_w0" in explicit else FIG3_GAMMAS
        makers = [(lambda g: (lambda w: base.replace(gamma=g, omegaD=w)))(g) for g in gammas]
        cols, status = _column_sweep(grid, makers, [e_int] * len(makers), _beta_obs)
        header = ["omegaD"] + [f"beta_gamma_{_label(g)}" for g in gammas]
    elif n == 4:
        cols_full, st1 = _column_sweep(grid, [lambda g: base.replace(gamma=g)], [e_int], _beta_obs)
        cols_fo, st2 = _column_sweep(
            grid, [lambda g: base.replace(gamma=g)], [e_int], lambda q, e: thermo.first_order_beta(e, q)
        )
        cols = cols_full + cols_fo
        status = [a if b == "ok" else (b if a == "ok" else a + "|" + b[6:]) for a, b in zip(st1, st2)]
        header = ["gamma", "full", "first_order"]
    elif n == 5:
        energies = (cfg.energy_paper_units,) if "energy_paper_units" in explicit else FIG5_ENERGIES
        makers = [lambda g: base.replace(gamma=g)] * len(energies)
        e_list = [float(qbm.energy_from_paper(e, base)) for e in energies]
        cols, status = _column_sweep(
            grid, makers, e_list, lambda q, e: thermo.q_squared(thermo.beta_of_E(e, q), q)
        )
        header = ["gamma"] + [f"q2_E_{_label(e)}" for e in energies]
    else:
        raise ConfigError(f"no figure {n}")
    rows = [[v] + [c[i] for c in cols] + [status[i]] for i, v in enumerate(grid)]
    return render_csv(header + ["status"], rows)


SWEEP_HEADER = [
    "index", "gamma", "omegaD", "E_paper", "E", "beta", "S_over_K", "S_A_over_K",
    "F", "E_tilde", "q2", "residual", "iterations", "status",
]


def cmd_sweep(cfg):
    if cfg.sweep is None:
        raise ConfigError("sweep needs --vary/--min/--max/--steps (or config keys)")
    p = cfg.model()
    grid = cfg.sweep.grid()
    vary = cfg.sweep.vary
    if vary == "E":
        values = qbm.energy_from_paper(grid, p)
    else:
        values = grid
    E = float(qbm.energy_from_paper(cfg.energy_paper_units, p))
    points = thermo.sweep(vary, values, p, E=E)
    rows = [
        [i, pt.gamma, pt.omegaD, pt.E_paper, pt.E, pt.beta, pt.S_over_K, pt.S_A_over_K,
         pt.F, pt.E_tilde, pt.q2, pt.residual, pt.iterations, pt.status]
        for i, pt in enumerate(points)
    ]
    return render_csv(SWEEP_HEADER, rows)


ORACLE_HEADER = ["N", "beta_finite", "beta_continuum", "rel_error"]


def cmd_oracle_compare(cfg, n_modes_list=None):
    n_modes_list = cfg.n_modes if n_modes_list is None else tuple(n_modes_list)
    p = cfg.model()
    E = float(qbm.energy_from_paper(cfg.energy_paper_units, p))
    if not E > 0:
        raise ConfigError("oracle-compare needs energy > 0")
    b_inf = thermo.beta_of_E(E, p).beta_star
    rows = []
    for n in n_modes_list:
        if n < 2:
            raise ConfigError("each mode count must be >= 2")
        if n > oracle.MAX_MODES:
            raise ConfigError(f"n_modes is capped at {oracle.MAX_MODES}")
        b_n = oracle.oracle_beta(p, E, n, scheme=cfg.scheme)
        rows.append([n, b_n, b_inf, abs(b_n - b_inf) / b_inf])
    return render_csv(ORACLE_HEADER, rows)


# -- argument parsing --------------------------------------------------------

FLAG_TO_KEY = {
    "gamma": "gamma_over_w0",
    "energy": "energy_paper_units",
    "wd_ratio": "wD_over_w0",
    "kappa": "kappa_w0_cubed",
    "steps": "steps",
    "min": "min",
    "max": "max",
    "log": "log_scale",
    "vary": "vary",
    "out": "output_path",
    "n_modes": "n_modes",
    "scheme": "scheme",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def make_parser():
    parser = _Parser(prog="qbmtemp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    commands = ["beta", "fig1", "fig2", "fig3", "fig4", "fig5", "sweep", "oracle-compare"]
    for name in commands:
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="flat key = value file")
        sp.add_argument("--out", help="output CSV path (default: stdout)")
        sp.add_argument("--gamma", help="gamma / omega0")
        sp.add_argument("--energy", help="E / (hbar omega0 / 2pi)")
        sp.add_argument("--wd-ratio", dest="wd_ratio", help="omegaD / omega0")
        sp.add_argument("--kappa", help="kappa omega0^3")
        sp.add_argument("--steps")
        sp.add_argument("--min")
        sp.add_argument("--max")
        sp.add_argument("--log", action="store_const", const="true", help="log-spaced sweep grid")
        if name == "sweep":
            sp.add_argument("--vary", choices=thermo.SWEEP_VARIABLES)
        if name == "oracle-compare":
            sp.add_argument("--n-modes", dest="n_modes", help="comma-separated mode counts")
            sp.add_argument("--scheme", choices=oracle.SCHEMES)
    return parser


def resolve_config(args):
    """Config file first, command-line flags on top.  Returns (config, explicit keys)."""
    values = {}
    if args.config:
        try:
            with open(args.config) as fh:
                values.update(parse_config_text(fh.read()))
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
    for flag, key in FLAG_TO_KEY.items():
        v = getattr(args, flag, None)
        if v is not None:
            values[key] = v
    return build_config(values), frozenset(values)


def main(argv=None, stdout=None, stderr=None):
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = make_parser().parse_args(argv)
        cfg, explicit = resolve_config(args)
        cmd = args.command
        if cmd == "beta":
            if cfg.sweep is not None:
                raise ConfigError("beta does not take sweep options")
            text = cmd_beta(cfg.validate())
        elif cmd.startswith("fig"):
            text = cmd_fig(int(cmd[3:]), cfg, explicit)
        elif cmd == "sweep":
            text = cmd_sweep(cfg.validate())
        else:
            text = cmd_oracle_compare(cfg.validate())
        write_output(text, cfg.output_path, stdout)
    except ConfigError as exc:
        stderr.write(f"qbmtemp: config error: {exc}\n")
        return EXIT_CONFIG
    except (SolverError, QBMError) as exc:
        stderr.write(f"qbmtemp: solver error: {type(exc).__name__}: {exc}\n")
        return EXIT_SOLVER
    return EXIT_OK


def main_exit():
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_exit()

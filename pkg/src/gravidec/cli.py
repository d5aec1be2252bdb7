"""Command-line frontend: batch computations as tables, JSON, or CSV.

Data goes to stdout (or --out-path), diagnostics to stderr.  Exit codes:
0 success, 2 usage/parse error, 3 numerical failure.  CSV uses '.' decimals,
',' separators and '#' comment lines for metadata; machine formats carry 17
significant digits, tables 4.  An optional JSON config file (--config or the
GRAVIDEC_CONFIG environment variable) supplies defaults; explicit flags win.
"""

from __future__ import annotations

import json
import math
import os
import re
import sys
from dataclasses import dataclass

import click
import numpy as np

from . import __version__
from .bath import OhmicBath
from .decoherence import (
    SCENARIO_NAMES,
    RateResult,
    decoherence_rate,
    rate_from_balls,
    scenario,
)
from .dephasing import (
    DephasingRun,
    FockDensityMatrix,
    analytic_decay_rate,
    analytic_propagate,
    fit_decay_rate,
    numeric_propagate,
)
from .errors import NumericalError
from .kernels import (
    KernelParams,
    dissipation_kernel,
    noise_kernel,
    time_integrated_limit,
    time_integrated_noise,
)
from .matter import (
    BallSuperposition,
    GaussianBall,
    markov_time,
    rest_energy,
    rest_energy_si,
)
from .units import CODATA2018

CONFIG_ENV_VAR = "GRAVIDEC_CONFIG"

_CONFIG_KEYS = ("output", "out_path", "unit_mode", "epsilon", "tol", "n_terms")


@dataclass
class CliConfig:
    output: str = "table"
    out_path: str | None = None
    unit_mode: str = "SI"
    epsilon: float = 1e-3
    tol: float = 1e-8
    n_terms: int = 1 << 22


def _load_config(config_path: str | None) -> dict:
    path = config_path or os.environ.get(CONFIG_ENV_VAR)
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"cannot read config file {path!r}: {exc}")
    if not isinstance(data, dict):
        raise click.UsageError(f"config file {path!r} must hold a JSON object")
    unknown = set(data) - set(_CONFIG_KEYS)
    if unknown:
        raise click.UsageError(
            f"unknown config keys {sorted(unknown)}; expected {_CONFIG_KEYS}"
        )
    return data


def _resolve_config(config_path, output, out_path, unit_mode, **overrides) -> CliConfig:
    cfg = CliConfig()
    file_values = _load_config(config_path)
    merged = {**file_values}
    if output is not None:
        merged["output"] = output
    if out_path is not None:
        merged["out_path"] = out_path
    if unit_mode is not None:
        merged["unit_mode"] = unit_mode
    for key, value in overrides.items():
        if value is not None:
            merged[key] = value
    for key, value in merged.items():
        setattr(cfg, key, value)
    if cfg.output not in ("table", "json", "csv"):
        raise click.UsageError(f"invalid output mode {cfg.output!r}")
    if cfg.unit_mode not in ("SI", "natural"):
        raise click.UsageError(f"invalid unit mode {cfg.unit_mode!r}")
    return cfg


def _common_options(f):
    f = click.option(
        "--output", type=click.Choice(["table", "json", "csv"]), default=None,
        help="Output format (default: table, or the config file's choice).",
    )(f)
    f = click.option("--out-path", default=None, help="Write output to this file instead of stdout.")(f)
    f = click.option("--config", "config_path", default=None, help=f"JSON config file (or ${CONFIG_ENV_VAR}).")(f)
    f = click.option("--unit-mode", type=click.Choice(["SI", "natural"]), default=None,
                     help="Include SI conversions (SI) or natural-unit values only.")(f)
    return f


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _g17(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float) and math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _g4(x) -> str:
    if x is None:
        return "n/a"
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    if isinstance(x, float):
        return format(x, ".4g")
    return str(x)


def _json_text(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _csv_text(meta: list[str], header: list[str], rows: list[list]) -> str:
    lines = [f"# {m}" for m in meta]
    lines.append(",".join(header))
    lines.extend(",".join(_g17(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _table_text(header: list[str], rows: list[list]) -> str:
    cells = [header] + [[_g4(v) for v in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells]
    return "\n".join(lines) + "\n"


def _meta(ctx_args: list[str], cfg: CliConfig) -> list[str]:
    return [
        f"gravidec {__version__}",
        "command: " + " ".join(ctx_args),
        f"tolerances: tol={cfg.tol:g} epsilon={cfg.epsilon:g}",
    ]


_ENERGY_RE = re.compile(r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*(\S+)\s*$")


def _parse_energy(text: str) -> float:
    """Parse '<value><unit>' with unit in {J, eV, GeV} into joules."""
    m = _ENERGY_RE.match(text)
    if not m:
        raise click.UsageError(f"cannot parse energy {text!r}: expected <value><unit>")
    value, unit = float(m.group(1)), m.group(2)
    scale = {"J": 1.0, "eV": CODATA2018.eV, "GeV": 1e9 * CODATA2018.eV}.get(unit)
    if scale is None:
        raise click.UsageError(
            f"cannot parse energy {text!r}: unknown unit {unit!r} (use J, eV or GeV)"
        )
    return value * scale


def _parse_range(text: str, name: str) -> np.ndarray:
    """A single value, or 'start:stop:count' for an inclusive linear range."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return np.array([float(parts[0])])
        if len(parts) == 3:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
            if count < 1:
                raise ValueError
            return np.linspace(start, stop, count)
    except ValueError:
        pass
    raise click.UsageError(
        f"cannot parse --{name} value {text!r}: expected a number or start:stop:count"
    )


def _parse_vector(text: str, name: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise click.UsageError(f"cannot parse --{name} value {text!r}: expected x,y,z")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise click.UsageError(f"cannot parse --{name} value {text!r}: {exc}")


def _parse_state(text: str) -> dict[int, complex]:
    """Parse 'n:amplitude,n:amplitude,...' (amplitudes may be complex)."""
    state: dict[int, complex] = {}
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        n_part, _, amp_part = token.partition(":")
        try:
            n = int(n_part)
            amp = complex(amp_part)
        except ValueError:
            raise click.UsageError(f"cannot parse state token {token!r}: expected n:amplitude")
        if n < 0:
            raise click.UsageError(f"cannot parse state token {token!r}: negative level")
        state[n] = amp
    if not state:
        raise click.UsageError(f"state spec {text!r} is empty")
    return state


@click.group()
@click.version_option(version=__version__, prog_name="gravidec")
def main():
    """Decoherence of stationary matter in a thermal graviton background."""


@main.command("rate")
@click.option("--delta-e", "delta_e_text", required=True,
              help="Superposition energy gap, e.g. 1eV, 2.5GeV, 3e-10J.")
@click.option("--temp", type=float, required=True, help="Environment temperature in K.")
@_common_options
def cmd_rate(delta_e_text, temp, output, out_path, config_path, unit_mode):
    """Decoherence rate for an energy gap at temperature T."""
    cfg = _resolve_config(config_path, output, out_path, unit_mode)
    delta_e = _parse_energy(delta_e_text)
    if temp < 0:
        raise click.UsageError(f"temperature must be non-negative, got {temp}")
    result = decoherence_rate(delta_e, temp)
    _emit(_render_rate(result, cfg, ["rate", f"--delta-e {delta_e_text}", f"--temp {temp}"]), cfg.out_path)


def _render_rate(result: RateResult, cfg: CliConfig, args: list[str]) -> str:
    d = result.to_json_dict()
    if cfg.output == "json":
        return _json_text(d)
    flags = d.pop("flags")
    flat = {**d, **{k: flags[k] for k in ("high_T_ok", "markov_ok", "compton_ok")}}
    if cfg.output == "csv":
        header = list(flat)
        return _csv_text(_meta(args, cfg), header, [[flat[k] for k in header]])
    return _table_text(["quantity", "value"], [[k, v] for k, v in flat.items()])


@main.command("scenario")
@click.option("--name", required=True, help=f"One of {', '.join(SCENARIO_NAMES)}, or 'all'.")
@_common_options
def cmd_scenario(name, output, out_path, config_path, unit_mode):
    """Preset decoherence-rate scenarios with order-of-magnitude checks."""
    cfg = _resolve_config(config_path, output, out_path, unit_mode)
    if name == "all":
        names = list(SCENARIO_NAMES)
    elif name in SCENARIO_NAMES:
        names = [name]
    else:
        raise click.UsageError(
            f"unknown scenario {name!r}; expected one of {', '.join(SCENARIO_NAMES)} or 'all'"
        )
    results = [scenario(n) for n in names]
    dicts = [r.to_json_dict() for r in results]
    if cfg.output == "json":
        text = _json_text(dicts if name == "all" else dicts[0])
    else:
        header = ["name", "delta_E_J", "T_K", "rate_per_s", "expected_order", "within_order"]
        rows = [[d[k] for k in header] for d in dicts]
        if cfg.output == "csv":
            text = _csv_text(_meta(["scenario", f"--name {name}"], cfg), header, rows)
        else:
            text = _table_text(header, rows)
    _emit(text, cfg.out_path)


@main.command("evolve")
@click.option("--nmax", type=int, default=16, show_default=True, help="Fock truncation N_max.")
@click.option("--c", "coupling", type=float, required=True, help="Dimensionless bath coupling C.")
@click.option("--temp", type=float, required=True, help="Bath temperature in K.")
@click.option("--omega0", type=float, required=True, help="System angular frequency, rad/s.")
@click.option("--tmax", type=float, required=True, help="Final time, s.")
@click.option("--steps", type=int, default=100, show_default=True, help="Number of grid times.")
@click.option("--state", "state_text", required=True,
              help="Initial pure state as n:amplitude pairs, e.g. '0:0.7071,2:0.7071'.")
@click.option("--cutoff", type=float, default=None, help="Exponential bath cutoff, rad/s.")
@_common_options
def cmd_evolve(nmax, coupling, temp, omega0, tmax, steps, state_text, cutoff,
               output, out_path, config_path, unit_mode):
    """Propagate a number-basis superposition analytically and numerically."""
    cfg = _resolve_config(config_path, output, out_path, unit_mode)
    if nmax < 1:
        raise click.UsageError(f"--nmax must be at least 1, got {nmax}")
    if steps < 2:
        raise click.UsageError(f"--steps must be at least 2, got {steps}")
    if tmax <= 0:
        raise click.UsageError(f"--tmax must be positive, got {tmax}")
    amplitudes = _parse_state(state_text)
    if max(amplitudes) > nmax:
        raise click.UsageError(
            f"state occupies |{max(amplitudes)}> beyond --nmax {nmax}"
        )
    rho0 = FockDensityMatrix.from_pure(amplitudes, dim=nmax + 1)
    bath = OhmicBath(coupling=coupling, omega0=omega0, cutoff=cutoff)
    t_grid = tuple(np.linspace(0.0, tmax, steps + 1)[1:])
    run = DephasingRun(bath=bath, temperature=temp, omega0=omega0, t_grid=t_grid)

    try:
        numeric = numeric_propagate(rho0, run)
    except NumericalError as exc:
        click.echo(f"gravidec: {exc}", err=True)
        sys.exit(3)
    analytic = [analytic_propagate(rho0, run, t) for t in t_grid]

    pairs = [(i, j) for i in range(rho0.dim) for j in range(rho0.dim)]
    occupied = sorted({n for n in amplitudes})
    fit_pair = None
    for i in occupied:
        for j in occupied:
            if i < j:
                fit_pair = (i, j)
                break
        if fit_pair:
            break

    fitted = {}
    if fit_pair:
        i, j = fit_pair
        t_arr = np.array(t_grid)
        fitted["analytic"] = fit_decay_rate(t_arr, np.array([abs(s.matrix[i, j]) for s in analytic]))
        fitted["numeric"] = fit_decay_rate(t_arr, np.array([abs(s.matrix[i, j]) for s in numeric]))
        fitted["closed_form"] = analytic_decay_rate(run, i, j)

    text = _render_evolve(t_grid, analytic, numeric, pairs, fit_pair, fitted, cfg,
                          ["evolve", f"--state {state_text}"])
    _emit(text, cfg.out_path)


def _evolve_rows(t_grid, states, pairs):
    rows = []
    for t, state in zip(t_grid, states):
        for i, j in pairs:
            z = state.matrix[i, j]
            rows.append([t, i, j, z.real, z.imag, abs(z)])
    return rows


def _render_evolve(t_grid, analytic, numeric, pairs, fit_pair, fitted, cfg, args) -> str:
    header = ["t", "n", "ntilde", "re", "im", "abs"]
    if cfg.output == "json":
        obj = {
            "analytic": [dict(zip(header, row)) for row in _evolve_rows(t_grid, analytic, pairs)],
            "numeric": [dict(zip(header, row)) for row in _evolve_rows(t_grid, numeric, pairs)],
            "fitted_decay_rate_per_s": fitted or None,
        }
        return _json_text(obj)
    if cfg.output == "csv":
        lines = [f"# {m}" for m in _meta(args, cfg)]
        lines.append("# propagation: analytic")
        lines.append(",".join(header))
        lines.extend(",".join(_g17(v) for v in row) for row in _evolve_rows(t_grid, analytic, pairs))
        lines.append("# propagation: numeric")
        lines.extend(",".join(_g17(v) for v in row) for row in _evolve_rows(t_grid, numeric, pairs))
        if fitted:
            lines.append(
                "# fitted_decay_rate_per_s: analytic="
                + _g17(fitted["analytic"])
                + " numeric=" + _g17(fitted["numeric"])
                + " closed_form=" + _g17(fitted["closed_form"])
            )
        return "\n".join(lines) + "\n"
    # table: final-time coherence moduli plus fitted rates
    rows = []
    final_a, final_n = analytic[-1], numeric[-1]
    for i, j in pairs:
        if i <= j:
            rows.append([t_grid[-1], i, j, abs(final_a.matrix[i, j]), abs(final_n.matrix[i, j])])
    text = _table_text(["t_final", "n", "ntilde", "abs_analytic", "abs_numeric"], rows)
    if fitted:
        text += (
            f"fitted decay rate (1/s): analytic {_g4(fitted['analytic'])}, "
            f"numeric {_g4(fitted['numeric'])}, closed form {_g4(fitted['closed_form'])}\n"
        )
    return text


@main.command("kernel")
@click.option("--which", type=click.Choice(["N", "D", "intN"]), required=True,
              help="N: noise kernel, D: dissipation kernel, intN: time-integrated noise.")
@click.option("--r", "r_text", required=True, help="Separation (value or start:stop:count).")
@click.option("--t", "t_text", required=True,
              help="Time lag, or integration endpoint for intN (value or range).")
@click.option("--temp", type=float, default=0.0, show_default=True,
              help="Temperature in natural units (inverse length).")
@click.option("--epsilon", type=float, default=None, help="UV regulator length.")
@click.option("--kappa", type=float, default=4.0, show_default=True,
              help="Coupling in natural units (4 normalizes the prefactor to 1).")
@click.option("--tol", type=float, default=None, help="Absolute tolerance on kernel values.")
@click.option("--n-terms", type=int, default=None, help="Thermal series cap.")
@_common_options
def cmd_kernel(which, r_text, t_text, temp, epsilon, kappa, tol, n_terms,
               output, out_path, config_path, unit_mode):
    """Evaluate field-correlation kernels on a grid (natural units)."""
    cfg = _resolve_config(config_path, output, out_path, unit_mode,
                          epsilon=epsilon, tol=tol, n_terms=n_terms)
    r_values = _parse_range(r_text, "r")
    t_values = _parse_range(t_text, "t")
    try:
        params = KernelParams(kappa=kappa, temperature=temp, epsilon=cfg.epsilon,
                              tol=cfg.tol, n_terms=cfg.n_terms)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    evaluate = {"N": noise_kernel, "D": dissipation_kernel, "intN": time_integrated_noise}[which]
    rows = []
    try:
        for r in r_values:
            for t in t_values:
                kv = evaluate(float(r), float(t), params)
                rows.append([float(r), float(t), kv.value, kv.err_estimate, kv.method])
    except ValueError as exc:
        raise click.UsageError(str(exc))
    except NumericalError as exc:
        click.echo(f"gravidec: {exc}", err=True)
        sys.exit(3)

    header = ["r", "t", "value", "err", "method"]
    meta = _meta(["kernel", f"--which {which}", f"--kappa {kappa}", f"--temp {temp}"], cfg)
    if which == "intN" and temp > 0:
        meta.append(f"long-time limit: {_g17(time_integrated_limit(params))}")
    if cfg.output == "json":
        text = _json_text([dict(zip(header, row)) for row in rows])
    elif cfg.output == "csv":
        text = _csv_text(meta, header, rows)
    else:
        text = _table_text(header, rows)
    _emit(text, cfg.out_path)


_BALL_KEYS = ("phi0", "radius", "r0")


def _parse_pair_spec(text: str, mass: float) -> GaussianBall:
    """Parse 'phi0=..;radius=..[;r0=x,y,z]' into a ball sharing the mass."""
    fields: dict = {}
    for token in text.split(";"):
        token = token.strip()
        if not token:
            continue
        key, _, value = token.partition("=")
        key = key.strip()
        if key not in _BALL_KEYS:
            raise click.UsageError(
                f"cannot parse pair token {token!r}: expected one of {_BALL_KEYS}"
            )
        if key == "r0":
            fields["r0"] = _parse_vector(value, "pair r0")
        else:
            try:
                fields[key] = float(value)
            except ValueError:
                raise click.UsageError(f"cannot parse pair token {token!r}: bad number {value!r}")
    missing = {"phi0", "radius"} - set(fields)
    if missing:
        raise click.UsageError(f"pair spec {text!r} is missing {sorted(missing)}")
    try:
        return GaussianBall(mass=mass, **fields)
    except ValueError as exc:
        raise click.UsageError(str(exc))


@main.command("ball")
@click.option("--m", "mass", type=float, required=True, help="Field mass parameter (inverse length).")
@click.option("--phi0", type=float, required=True, help="Field amplitude.")
@click.option("--radius", type=float, required=True, help="Ball radius.")
@click.option("--r0", "r0_text", default="0,0,0", show_default=True, help="Centre position x,y,z.")
@click.option("--pair", "pair_text", default=None,
              help="Second ball 'phi0=..;radius=..[;r0=x,y,z]' for a superposition rate.")
@click.option("--temp", type=float, default=None, help="Temperature in K (required with --pair).")
@_common_options
def cmd_ball(mass, phi0, radius, r0_text, pair_text, temp,
             output, out_path, config_path, unit_mode):
    """Rest energy of a Gaussian matter ball, or the rate for a ball pair."""
    cfg = _resolve_config(config_path, output, out_path, unit_mode)
    try:
        ball = GaussianBall(phi0=phi0, radius=radius, mass=mass, r0=_parse_vector(r0_text, "r0"))
    except ValueError as exc:
        raise click.UsageError(str(exc))

    if pair_text is None:
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            energy = rest_energy(ball)
            energy_si = rest_energy_si(ball)
        data = {
            "rest_energy_natural": energy,
            "compton_product": ball.compton_product,
            "compton_ok": ball.compton_ok,
        }
        if cfg.unit_mode == "SI":
            data["rest_energy_J"] = energy_si
        text = _render_flat(data, cfg, ["ball", f"--m {mass}"])
        _emit(text, cfg.out_path)
        return

    if temp is None:
        raise click.UsageError("--temp is required together with --pair")
    other = _parse_pair_spec(pair_text, mass)
    try:
        sup = BallSuperposition(ball, other)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        result = rate_from_balls(sup, temp)
        closed = decoherence_rate(result.delta_E, temp)
    agree = (
        result.rate == closed.rate
        or abs(result.rate - closed.rate) <= 1e-12 * max(result.rate, closed.rate)
    )
    data = {
        "delta_E_J": result.delta_E,
        "T_K": temp,
        "rate_per_s": result.rate,
        "closed_form_rate_per_s": closed.rate,
        "rates_agree_1e12": agree,
        "coherence_time_s": result.coherence_time if math.isfinite(result.coherence_time) else "inf",
        "markov_time_s": markov_time(sup),
        "high_T_ok": result.flags.high_T_ok,
        "markov_ok": result.flags.markov_ok,
        "compton_ok": result.flags.compton_ok,
    }
    text = _render_flat(data, cfg, ["ball", "--pair"])
    _emit(text, cfg.out_path)


def _render_flat(data: dict, cfg: CliConfig, args: list[str]) -> str:
    if cfg.output == "json":
        return _json_text(data)
    if cfg.output == "csv":
        header = list(data)
        return _csv_text(_meta(args, cfg), header, [[data[k] for k in header]])
    return _table_text(["quantity", "value"], [[k, v] for k, v in data.items()])


if __name__ == "__main__":
    main()

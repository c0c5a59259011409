"""Command-line interface.

Every command resolves its configuration as ``defaults < --config file <
explicit flags``, validates it, and writes the resolved copy to
``<out>/config.json``. Rerunning with ``--config <out>/config.json``
reproduces the CSV outputs byte for byte.

Exit codes: 0 ok, 2 configuration error, 3 ingestion error, 4 internal
invariant failure.
"""

import argparse
from importlib import resources
import json
import logging
import math
from pathlib import Path
import sys

import numpy as np

from . import analytics, market
from .estimators import HerdingMarket
from .exceptions import (
    ConfigError, DegenerateInputError, DomainError, HerdlabError, IngestionError, InvariantError,
)
from .model import ModelParams
from .resonance import default_a_grid, sweep
from .signal import KINDS, SCALES, load_signal_csv, synth_signal, write_signal_csv

logger = logging.getLogger("herdlab")

EXIT_OK, EXIT_CONFIG, EXIT_INGEST, EXIT_INVARIANT = 0, 2, 3, 4

_MODEL = {"N": 200, "a": 5e-3, "h0": 1e-3, "F": 0.02}
_SIGNAL = {"signal": None, "signal_scale": "auto"}

DEFAULTS = {
    "simulate": {
        **_MODEL, **_SIGNAL, "engine": "gillespie", "seed": 0, "horizon": 5280.0,
        "initial": "random", "dt": 0.01, "boundary": "clamp", "tau_max": 250,
        "max_lag": 1000, "bins": 50, "log_bins": False, "events": False, "stats": True,
    },
    "sweep": {
        "N": 200, "h0": 1e-3, "F": 0.02, **_SIGNAL, "a_min": 1e-4, "a_max": 1e-1,
        "a_points": 25, "seeds": 10, "seed_base": 0, "tau_max": 250, "horizon": 5280.0,
        "engine": "gillespie", "dt": 0.01,
    },
    "analyze": {"prices": None, "max_lag": 1000, "bins": 50, "log_bins": False},
    "stationary": {"N": 200, "a": 5e-3, "h0": 1e-3, "points": 1001, "lo": -0.999, "hi": 0.999},
    "potential": {
        **_MODEL, "i": 0.0, "points": 1001, "lo": -0.999, "hi": 0.999,
    },
    "synth-signal": {"seed": 7, "months": 264, "kind": "uniform", "period": 20, "amplitude": 1.0, "step": 0.2},
}

BUNDLED_SIGNAL = "synthetic_264.csv"


def _add_model(p, with_a=True, with_F=True):
    p.add_argument("--N", type=int)
    if with_a:
        p.add_argument("--a", type=float)
    p.add_argument("--h0", type=float)
    if with_F:
        p.add_argument("--F", type=float)


def _add_signal(p):
    p.add_argument("--signal", help="label,value CSV (default: bundled synthetic 264-month signal)")
    p.add_argument("--signal-scale", dest="signal_scale", choices=SCALES)


def _add_grid(p):
    p.add_argument("--points", type=int)
    p.add_argument("--lo", type=float)
    p.add_argument("--hi", type=float)


def _add_stats(p):
    p.add_argument("--max-lag", dest="max_lag", type=int)
    p.add_argument("--bins", type=int)
    p.add_argument("--log-bins", dest="log_bins", action="store_true")


def build_parser():
    parser = argparse.ArgumentParser(prog="herdlab", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, help_):
        p = sub.add_parser(name, help=help_, argument_default=argparse.SUPPRESS)
        p.add_argument("--config", help="flat JSON config; explicit flags override it")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--force", action="store_true", help="write into a non-empty directory")
        return p

    p = command("simulate", "run one realization and emit daily path and statistics")
    _add_model(p)
    _add_signal(p)
    p.add_argument("--engine", choices=("gillespie", "langevin"))
    p.add_argument("--seed", type=int)
    p.add_argument("--horizon", type=float)
    p.add_argument("--initial", help="'random' or the initial number of optimists")
    p.add_argument("--dt", type=float)
    p.add_argument("--boundary", choices=("clamp", "reflect"))
    p.add_argument("--tau-max", dest="tau_max", type=int)
    p.add_argument("--events", action="store_true", help="also write events.csv")
    p.add_argument("--no-stats", dest="stats", action="store_false")
    _add_stats(p)

    p = command("sweep", "IOC and RMS opinion over a log grid of a")
    _add_model(p, with_a=False)
    _add_signal(p)
    p.add_argument("--a-min", dest="a_min", type=float)
    p.add_argument("--a-max", dest="a_max", type=float)
    p.add_argument("--a-points", dest="a_points", type=int)
    p.add_argument("--seeds", type=int, help="number of seeds per grid point")
    p.add_argument("--seed-base", dest="seed_base", type=int)
    p.add_argument("--tau-max", dest="tau_max", type=int)
    p.add_argument("--horizon", type=float)
    p.add_argument("--engine", choices=("gillespie", "langevin"))
    p.add_argument("--dt", type=float)

    p = command("analyze", "returns, volatility ACF and |r| histogram of a price file")
    p.add_argument("--prices", help="label,close CSV")
    _add_stats(p)

    p = command("stationary", "stationary density of the undriven model on a grid")
    _add_model(p, with_F=False)
    _add_grid(p)

    p = command("potential", "effective potential for a signal value on a grid")
    _add_model(p)
    p.add_argument("--i", type=float, help="signal value in [-1, 1]")
    _add_grid(p)

    p = command("synth-signal", "write a deterministic synthetic signal")
    p.add_argument("--seed", type=int)
    p.add_argument("--months", type=int)
    p.add_argument("--kind", choices=KINDS)
    p.add_argument("--period", type=int)
    p.add_argument("--amplitude", type=float)
    p.add_argument("--step", type=float)
    return parser


def resolve_config(command, explicit, config_path=None):
    """Merge defaults, an optional config file and explicit flags."""
    config = dict(DEFAULTS[command])
    if config_path is not None:
        try:
            with open(config_path, encoding="utf-8") as fh:
                loaded = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {config_path}: {exc.strerror}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {config_path} is not valid JSON: {exc.msg}") from exc
        if not isinstance(loaded, dict):
            raise ConfigError(f"config {config_path} must be a flat JSON object")
        file_cmd = loaded.pop("command", command)
        if file_cmd != command:
            raise ConfigError(f"config {config_path} was written by '{file_cmd}', not '{command}'")
        unknown = sorted(set(loaded) - set(config))
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        config.update(loaded)
    config.update({k: v for k, v in explicit.items() if k in config})
    return config


def _prepare_out(out, force):
    out = Path(out)
    if out.exists():
        if not out.is_dir():
            raise ConfigError(f"output path {out} exists and is not a directory")
        if any(out.iterdir()) and not force:
            raise ConfigError(f"output directory {out} is not empty (use --force)")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_config(out, command, config):
    with open(out / "config.json", "w", encoding="utf-8") as fh:
        json.dump({"command": command, **config}, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _load_signal(config):
    if config["signal"] is None:
        with resources.as_file(resources.files("herdlab") / "data" / BUNDLED_SIGNAL) as path:
            return load_signal_csv(path, "unit")
    path = Path(config["signal"])
    config["signal"] = str(path.resolve()) if path.exists() else str(path)
    return load_signal_csv(config["signal"], config["signal_scale"])


def _initial(value):
    if value == "random":
        return value
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ConfigError(f"initial must be 'random' or an integer, got {value!r}") from None


def _write_stats(out, series_x, max_lag, bins, log_bins):
    ret = market.normalize_returns(market.returns(series_x, 1))
    ret.to_csv(out / "returns.csv")
    lag = min(max_lag, math.ceil(ret.v.size / 2) - 1)
    if lag < 1:
        raise DegenerateInputError(f"series of {ret.v.size} returns too short for a volatility ACF")
    market.write_acf_csv(market.acf(ret.v, lag), out / "acf.csv")
    market.abs_return_histogram(ret.r, bins, log_bins).to_csv(out / "hist.csv")
    return ret


def _write_xy(path, xs, ys):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("x,value\n")
        for x, y in zip(np.asarray(xs).tolist(), np.asarray(ys).tolist()):
            fh.write(f"{x!r},{y!r}\n")


def cmd_simulate(config, out):
    signal = _load_signal(config)
    if config["engine"] == "langevin" and config["initial"] != "random":
        initial = float(config["initial"])
    else:
        initial = _initial(config["initial"])
    est = HerdingMarket(
        N=config["N"], a=config["a"], h0=config["h0"], F=config["F"], horizon=config["horizon"],
        engine=config["engine"], initial=initial, dt=config["dt"], boundary=config["boundary"],
        tau_max=config["tau_max"], random_state=config["seed"],
    )
    est.fit(signal)
    est.daily_.to_csv(out / "daily.csv")
    if config["events"] and est.trajectory_ is not None:
        est.trajectory_.to_csv(out / "events.csv")
    if config["stats"]:
        _write_stats(out, est.daily_.x, config["max_lag"], config["bins"], config["log_bins"])
    parts = [f"events={est.n_events_}", f"rms_x={est.rms_x_:.4f}"]
    if np.ptp(est.daily_.i) > 0:
        parts += [f"ioc={est.ioc_:.4f}", f"tau_star={est.tau_star_}"]
    return "simulate: " + " ".join(parts)


def cmd_sweep(config, out):
    signal = _load_signal(config)
    if config["seeds"] < 1:
        raise ConfigError("--seeds must be >= 1")
    grid = default_a_grid(config["a_min"], config["a_max"], config["a_points"])
    seeds = range(config["seed_base"], config["seed_base"] + config["seeds"])
    base = ModelParams(config["N"], grid[0], config["h0"], config["F"])
    result = sweep(grid, seeds, base, signal, config["tau_max"], config["horizon"],
                   config["engine"], config["dt"])
    result.to_csv(out / "sweep.csv")
    result.aggregates_to_csv(out / "sweep_agg.csv")
    best = max(result.aggregates(), key=lambda g: g.ioc_mean)
    return f"sweep: cells={len(result.rows)} peak_a={best.a:.4g} peak_ioc={best.ioc_mean:.4f}"


def cmd_analyze(config, out):
    if config["prices"] is None:
        raise ConfigError("analyze needs --prices")
    path = Path(config["prices"])
    config["prices"] = str(path.resolve()) if path.exists() else str(path)
    prices = market.load_price_csv(config["prices"])
    if len(prices) < 2:
        raise DegenerateInputError("price file needs at least two rows")
    ret = _write_stats(out, prices, config["max_lag"], config["bins"], config["log_bins"])
    return f"analyze: returns={ret.R.size}"


def cmd_stationary(config, out):
    params = ModelParams(config["N"], config["a"], config["h0"])
    density = analytics.stationary_density(params)
    xs = analytics.grid(config["points"], config["lo"], config["hi"])
    _write_xy(out / "stationary.csv", xs, density.pdf(xs))
    return f"stationary: regime={density.classification} normalization={density.normalization!r}"


def cmd_potential(config, out):
    params = ModelParams(config["N"], config["a"], config["h0"], config["F"]).check()
    if abs(config["i"]) > 1:
        raise ConfigError(f"signal value i={config['i']} outside [-1, 1]")
    xs = analytics.grid(config["points"], config["lo"], config["hi"])
    _write_xy(out / "potential.csv", xs, analytics.effective_potential(xs, params, config["i"]))
    return f"potential: regime={analytics.classify_regime(params)}"


def cmd_synth_signal(config, out):
    signal = synth_signal(config["seed"], config["months"], config["kind"], config["period"],
                          config["amplitude"], config["step"])
    write_signal_csv(signal, out / "signal.csv")
    return f"synth-signal: months={signal.values.size} horizon={signal.end:g}"


COMMANDS = {
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "analyze": cmd_analyze,
    "stationary": cmd_stationary,
    "potential": cmd_potential,
    "synth-signal": cmd_synth_signal,
}


def main(argv=None):
    parser = build_parser()
    args = vars(parser.parse_args(argv))
    logging.basicConfig(level=logging.INFO if args.pop("verbose") else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    command = args.pop("command")
    config_path = args.pop("config", None)
    out_arg = args.pop("out")
    force = args.pop("force", False)
    try:
        config = resolve_config(command, args, config_path)
        if {"N", "a", "h0"} <= set(config):
            # fail before touching the output directory
            ModelParams(config["N"], config["a"], config["h0"], config.get("F", 0.0)).check()
        out = _prepare_out(out_arg, force)
        summary = COMMANDS[command](config, out)
        _write_config(out, command, config)
    except (ConfigError, DomainError) as exc:
        print(f"herdlab: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (IngestionError, DegenerateInputError) as exc:
        print(f"herdlab: input error: {exc}", file=sys.stderr)
        return EXIT_INGEST
    except InvariantError as exc:
        print(f"herdlab: invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except HerdlabError as exc:
        print(f"herdlab: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(summary)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

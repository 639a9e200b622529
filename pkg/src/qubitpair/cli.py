"""Command-line front end.

Subcommands:

* ``evolve``   -- one (beta, t, K) point: prints the 4x4 state and measures.
* ``sweep``    -- run a sweep described by a key=value spec file.
* ``figures``  -- emit the full set of figure-family CSVs plus a manifest.
* ``validate`` -- run the self-validation battery (quick or full).

Exit status: 0 success, 1 validation failure, 2 usage error.  Defaults for
epsilon/gamma/gamma0/threads/format may come from a config file: the path is
``./qubitpair.conf`` when present, overridden by the ``QUBITPAIR_CONFIG``
environment variable; explicit flags always win.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from .config import ConfigError, ConfigView, ENV_CONFIG_PATH, load_config
from .correlations import concurrence_xstate, discord_xstate, entanglement_of_formation
from .errors import DomainError, QubitPairError
from .model import ModelParams
from .propagator import evolve_closed_form
from .sweeps import (
    FORMATS,
    SWEEP_HEADER,
    SweepSpec,
    rows_to_csv,
    rows_to_json,
    run_figures,
    run_sweep,
)
from .thermo import specific_heat_normalized
from .validate import run_validate

USAGE_ERROR = 2


def _load_defaults() -> ConfigView:
    path = os.environ.get(ENV_CONFIG_PATH)
    if path is None and Path("qubitpair.conf").is_file():
        path = "qubitpair.conf"
    if path is None:
        return ConfigView({}, source="<defaults>")
    return ConfigView(load_config(path), source=path)


def _model_params(args, defaults: ConfigView) -> ModelParams:
    def pick(name, fallback):
        flag = getattr(args, name, None)
        if flag is not None:
            return flag
        return defaults.get_float(name, fallback)

    return ModelParams(
        coupling_k=args.K,
        epsilon=pick("epsilon", 0.001),
        gamma=pick("gamma", 10.0),
        gamma0=pick("gamma0", 0.1),
    )


def _cmd_evolve(args, defaults: ConfigView) -> int:
    if args.time < 0:
        raise ConfigError("field 'time': must be >= 0")
    if args.beta < 0:
        raise ConfigError("field 'beta': must be >= 0")
    params = _model_params(args, defaults)
    x = evolve_closed_form(args.beta, args.time, params)
    conc = concurrence_xstate(x)
    eof = entanglement_of_formation(conc)
    breakdown = discord_xstate(x)
    try:
        cs = specific_heat_normalized(args.time, args.beta, params)
    except (DomainError, ValueError):
        cs = float("nan")
    fmt = args.format or defaults.get_enum("format", FORMATS, "text") or "text"
    if fmt in ("csv", "json"):
        row = {name: None for name in SWEEP_HEADER}
        row.update(
            t=args.time, beta=args.beta, K=args.K,
            rho11=x.p00, rho22=x.p10, rho33=x.p01, rho44=x.p11,
            re_rho23=x.coh.real, im_rho23=x.coh.imag,
            eof=eof, qd=breakdown.discord, cc=breakdown.classical_correlation,
            tc=breakdown.total_correlation,
            cs_n=None if cs != cs else cs, quality_flag="",
        )
        text = (rows_to_csv if fmt == "csv" else rows_to_json)([row])
        if args.output:
            out = Path(args.output)
            with open(out, "w", newline="\n") as fh:
                fh.write(text)
            print(f"wrote {out}")
        else:
            sys.stdout.write(text)
        return 0
    kbt = (1.0 / args.beta) if args.beta > 0 else float("inf")
    print(f"state at t={args.time:g}, beta={args.beta:g} (kbT={kbt:g}), K={args.K:g}:")
    with np.printoptions(precision=12, suppress=False, linewidth=120):
        print(x.to_matrix())
    print(f"concurrence = {conc:.12g}")
    print(f"eof         = {eof:.12g}")
    print(f"discord     = {breakdown.discord:.12g}  (tc={breakdown.total_correlation:.12g}, "
          f"cc={breakdown.classical_correlation:.12g})")
    print(f"cs_n        = {cs:.12g}")
    return 0


def _cmd_sweep(args, defaults: ConfigView) -> int:
    spec = SweepSpec.from_file(args.spec)
    overrides = {}
    if args.format:
        overrides["fmt"] = args.format
    if args.output:
        overrides["output"] = Path(args.output)
    if overrides:
        from dataclasses import replace

        spec = replace(spec, **overrides)
    threads = args.threads or defaults.get_int("threads", 1)
    run_sweep(spec, threads=threads)
    return 0


def _cmd_figures(args, defaults: ConfigView) -> int:
    threads = args.threads or defaults.get_int("threads", 1)
    run_figures(args.out, threads=threads)
    return 0


def _cmd_validate(args, defaults: ConfigView) -> int:
    return run_validate(args.level)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qubitpair",
        description="Dissipative qubit-pair dynamics: states, correlations, specific heat.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common_model = argparse.ArgumentParser(add_help=False)
    common_model.add_argument("--epsilon", type=float, default=None, help="level splitting")
    common_model.add_argument("--gamma", type=float, default=None, help="bath half-width")
    common_model.add_argument("--gamma0", type=float, default=None, help="dissipation scale")

    p_evolve = sub.add_parser("evolve", parents=[common_model],
                              help="evaluate one (beta, time, K) point")
    p_evolve.add_argument("--beta", type=float, required=True, help="inverse temperature")
    p_evolve.add_argument("--time", type=float, required=True)
    p_evolve.add_argument("--K", type=float, required=True, help="exchange coupling")
    p_evolve.add_argument("--format", choices=("text",) + FORMATS, default=None)
    p_evolve.add_argument("--output", default=None, help="write the row here instead of stdout")
    p_evolve.set_defaults(func=_cmd_evolve)

    p_sweep = sub.add_parser("sweep", help="run a sweep described by a spec file")
    p_sweep.add_argument("--spec", required=True, help="key=value sweep description")
    p_sweep.add_argument("--format", choices=FORMATS, default=None, help="override spec format")
    p_sweep.add_argument("--output", default=None, help="override spec output path")
    p_sweep.add_argument("--threads", type=int, default=None)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_fig = sub.add_parser("figures", help="emit all figure-family CSVs + manifest")
    p_fig.add_argument("--out", required=True, help="output directory")
    p_fig.add_argument("--threads", type=int, default=None)
    p_fig.set_defaults(func=_cmd_figures)

    p_val = sub.add_parser("validate", help="run the self-validation battery")
    p_val.add_argument("--level", choices=("quick", "full"), default="quick")
    p_val.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        defaults = _load_defaults()
        return args.func(args, defaults)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (ValueError, QubitPairError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except OSError as exc:
        print(f"error: {exc.strerror}: {getattr(exc, 'filename', '')}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())

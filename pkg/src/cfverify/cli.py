"""Command-line entry point ``cfverify``.

Machine-readable output (JSON or CSV) goes to stdout or the requested file;
a short human summary goes to stderr.

Exit codes: 0 pass / success, 1 verification failed, 2 numeric failure,
3 configuration error.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys

import numpy as np

from .errors import CFVerifyError, ConfigError, NumericFailureError, UnboundedQuantileError

EXIT_PASS, EXIT_FAIL, EXIT_NUMERIC, EXIT_CONFIG = 0, 1, 2, 3


def _add_common(p):
    p.add_argument("config", help="problem config (JSON)")
    g = p.add_argument_group("overrides")
    g.add_argument("--ht-step", type=float, help="sinc node spacing h")
    g.add_argument("--ht-terms", type=int, help="sinc half-width M (2M+1 nodes)")
    g.add_argument("--grid-points", type=int, help="frequency grid size N")
    g.add_argument("--cutoff", type=float, help="frequency cutoff t_max")
    g.add_argument("--risk", type=float, help="risk level p")
    g.add_argument("--seed", type=int, help="Monte-Carlo / trial seed")
    g.add_argument("--samples", type=int, help="Monte-Carlo sample count")
    g.add_argument("--threads", type=int, help="cap on BLAS worker threads")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cfverify",
        description="Probabilistic verification of ReLU networks via characteristic functions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check the chance constraint(s)")
    _add_common(p)

    p = sub.add_parser("propagate", help="per-layer CDF curves as CSV")
    _add_common(p)
    p.add_argument("--trace", required=True, help="output CSV path ('-' for stdout)")
    p.add_argument("--components", type=int, nargs="+", help="neuron indices (default: first three)")
    p.add_argument("--x-min", type=float, default=-10.0)
    p.add_argument("--x-max", type=float, default=10.0)
    p.add_argument("--x-points", type=int, default=201)

    p = sub.add_parser("quantile", help="CF-based safe threshold at level p")
    _add_common(p)
    p.add_argument("--p", type=float, dest="level", help="level (default: config risk)")
    p.add_argument("--direction", choices=("GE", "LE"), help="default: first half-space's")
    p.add_argument("--scenario-delta", type=float, default=None,
                   help="also report the scenario baseline with this confidence delta")

    p = sub.add_parser("compare", help="CF estimate vs Monte-Carlo")
    _add_common(p)

    p = sub.add_parser("sweep", help="random-network ensemble over (h, N, M) settings")
    _add_common(p)
    p.add_argument("--setting", action="append", required=True, metavar="h,N,M",
                   help="repeatable, e.g. --setting 0.5,10000,5000")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--out", default="-", help="CSV path ('-' for stdout)")
    return parser


def _config(args):
    from .model_io import load_config

    cfg = load_config(args.config)
    return cfg.with_overrides(
        ht_step=args.ht_step,
        ht_terms=args.ht_terms,
        n_grid=args.grid_points,
        t_max=args.cutoff,
        risk=args.risk,
        seed=args.seed,
        mc_samples=args.samples,
    )


@contextlib.contextmanager
def _open_out(path):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _emit(obj):
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _say(msg):
    print(msg, file=sys.stderr)


def cmd_verify(args) -> int:
    from .verification import verify_polytope

    cfg = _config(args)
    res = verify_polytope(cfg.to_problem())
    if len(res.results) == 1:
        out = res.results[0].to_dict()
    else:
        out = res.to_dict()
    out["params_echo"] = cfg.echo()
    _emit(out)
    _say(f"verdict: {res.verdict} (p_hat lower bound {res.bound:.4f}, threshold {1 - cfg.risk:.4f})")
    return EXIT_PASS if res.verdict == "pass" else EXIT_FAIL


def cmd_propagate(args) -> int:
    import csv

    from .propagation import propagate_network

    cfg = _config(args)
    prob = cfg.to_problem()
    prop = propagate_network(prob.network, prob.inputs, prob.grid, prob.hilbert, trace=True)
    xs = np.linspace(args.x_min, args.x_max, args.x_points)
    rows = prop.trace.cdf_curves(xs, prob.hilbert, args.components)
    with _open_out(args.trace) as fh:
        w = csv.writer(fh)
        w.writerow(["layer", "phase", "component", "x", "cdf"])
        for layer, phase, comp, x, c in rows:
            w.writerow([layer, phase, comp, repr(x), repr(c)])
    if args.trace != "-":
        _emit({"trace": args.trace, "rows": len(rows), "params_echo": cfg.echo()})
    _say(f"wrote {len(rows)} CDF samples for {len(prop.trace)} layers")
    return EXIT_PASS


def cmd_quantile(args) -> int:
    from .propagation import propagate_network
    from .verification import output_cf, quantile, scenario_quantile

    cfg = _config(args)
    prob = cfg.to_problem()
    hs = prob.safety[0]
    level = cfg.risk if args.level is None else args.level
    direction = args.direction or hs.direction
    prop = propagate_network(prob.network, prob.inputs, prob.grid, prob.hilbert)
    r = quantile(output_cf(prop.output, hs.c), level, prob.hilbert, direction)
    out = {"quantile": r, "p": level, "direction": direction, "c": hs.c.tolist(),
           "params_echo": cfg.echo()}
    if args.scenario_delta is not None:
        out["scenario_quantile"] = scenario_quantile(
            prob.network, prob.inputs, level, args.scenario_delta, cfg.seed, hs.c
        )
    _emit(out)
    _say(f"quantile at level {level}: {r:.4f}")
    return EXIT_PASS


def cmd_compare(args) -> int:
    from .oracle import compare
    from .verification import verify_halfspace

    cfg = _config(args)
    prob = cfg.to_problem()
    reports = []
    for hs in prob.safety:
        res = verify_halfspace(prob, hs)
        rep = compare(prob, res, cfg.mc_samples, cfg.seed).to_dict()
        rep["halfspace"] = hs.to_dict()
        reports.append(rep)
    out = reports[0] if len(reports) == 1 else {"reports": reports}
    out["params_echo"] = cfg.echo()
    _emit(out)
    for rep in reports:
        _say(f"CF {rep['p_hat_cf']:.4f}  MC {rep['p_hat_mc']:.4f}  "
             f"delta-delta {rep['delta_delta']:+.4f}")
    return EXIT_PASS


def _parse_setting(text):
    try:
        h, n, m = text.split(",")
        return float(h), int(float(n)), int(float(m))
    except ValueError as exc:
        raise ConfigError(f"bad --setting {text!r}; expected h,N,M") from exc


def cmd_sweep(args) -> int:
    from .oracle import run_sweep, write_sweep_csv

    cfg = _config(args)
    settings = [_parse_setting(s) for s in args.setting]
    if args.trials < 1:
        raise ConfigError("--trials must be >= 1")
    rows = run_sweep(cfg.to_problem(), settings, args.trials, cfg.seed, cfg.mc_samples)
    with _open_out(args.out) as fh:
        write_sweep_csv(rows, fh)
    for r in rows:
        _say(f"h={r.h} N={r.N} M={r.M}: E|dd|={r.mean_abs_delta_delta:.4f} "
             f"t={r.mean_time_seconds:.3f}s")
    return EXIT_PASS


COMMANDS = {
    "verify": cmd_verify,
    "propagate": cmd_propagate,
    "quantile": cmd_quantile,
    "compare": cmd_compare,
    "sweep": cmd_sweep,
}


def _thread_limit(n):
    if n is None:
        return contextlib.nullcontext()
    from threadpoolctl import threadpool_limits

    return threadpool_limits(limits=n)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with _thread_limit(args.threads):
            return COMMANDS[args.command](args)
    except NumericFailureError as exc:
        _say(f"numeric failure: {exc}")
        return EXIT_NUMERIC
    except UnboundedQuantileError as exc:
        _say(f"numeric failure: {exc}")
        return EXIT_NUMERIC
    except (CFVerifyError, KeyError) as exc:
        _say(f"configuration error: {exc}")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

    spinwalk density      --alpha 0.333 --times 2T,4T,6T,8T --outdir out/
    spinwalk observables  --alpha 0.1 --tmax 20T --dt 0.05T
    spinwalk observables  --sweep-alpha 0.01:10:log:40
    spinwalk entropy      --alpha 1 --times 1T,10T,100T,400T
    spinwalk qrw          --steps 200 --compare --alpha 0.02
    spinwalk validate     [--criteria 1,2,3] [--tolerance-scale 0]

Times take a suffix T (Larmor periods 2 pi / omega), F (flight times
sigma / v) or none (raw time units).  Exit codes: 0 success, 1 validation
failure, 2 invalid arguments, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import __version__
from . import asymptotics as asy
from . import density as dens
from . import lattice, observables as obs, validation
from .errors import DomainError, NumericalFailure, SpinwalkError
from .io import atomic_write, write_csv
from .model import PhysicalParams, canonical_spin_state, make_params, params_from_alpha
from .parallel import ordered_map, worker_count

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

DEFAULTS = {
    "outdir": ".",
    "state": "y_plus",
    "j": "1/2",
    "method": "auto",
    "points_per_sigma": 8,
    "coin": "y_plus",
    "quantity": "all",
}


class UsageError(Exception):
    pass


def parse_time(token: str, params: PhysicalParams) -> float:
    tok = token.strip()
    try:
        if tok.endswith("T"):
            if params.omega == 0:
                raise UsageError("times in units of T need omega > 0")
            return float(tok[:-1]) * params.larmor_period
        if tok.endswith("F"):
            return float(tok[:-1]) * params.flight_time
        return float(tok)
    except ValueError:
        raise UsageError(f"cannot parse time {token!r}") from None


def parse_times(spec: str, params: PhysicalParams) -> list:
    times = [parse_time(tok, params) for tok in spec.split(",") if tok.strip()]
    if not times:
        raise UsageError("empty time list")
    if any(t < 0 for t in times):
        raise UsageError("times must be non-negative")
    if any(b < a for a, b in zip(times, times[1:])):
        raise UsageError("times must be sorted")
    return times


def read_config(path: str) -> dict:
    """Flat key=value file; keys mirror long flag names (dashes or underscores)."""
    out = {}
    with open(path) as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{n}: expected key=value")
            k, v = line.split("=", 1)
            out[k.strip().replace("-", "_")] = v.strip()
    return out


def _add_physics(p):
    p.add_argument("--alpha", type=float)
    p.add_argument("--omega", type=float)
    p.add_argument("--v", type=float)
    p.add_argument("--sigma", type=float)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="spinwalk", description="continuous-time quantum walk of a spin-j wave packet")
    ap.add_argument("--version", action="version", version=f"spinwalk {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    d = sub.add_parser("density", help="density profiles P(x, t) as CSV")
    _add_physics(d)
    d.add_argument("--times")
    d.add_argument("--state", choices=["y_plus", "z_plus", "z_minus", "custom"])
    d.add_argument("--coeffs", help="comma-separated complex amplitudes, M = -j..j (custom state)")
    d.add_argument("--j")
    d.add_argument("--method", choices=["auto", "quadrature", "fft", "small_alpha", "large_alpha"])
    d.add_argument("--points-per-sigma", type=int)
    d.add_argument("--outdir")

    o = sub.add_parser("observables", help="eta(t), <x>(t), Delta x(t), V(alpha)")
    _add_physics(o)
    o.add_argument("--tmax")
    o.add_argument("--dt")
    o.add_argument("--quantity", choices=["all", "eta", "mean_x", "delta_x", "V"])
    o.add_argument("--sweep-alpha", help="lo:hi:log|lin:count")
    o.add_argument("--outdir")

    e = sub.add_parser("entropy", help="Shannon entropy S(t) of the y_plus density")
    _add_physics(e)
    e.add_argument("--times")
    e.add_argument("--outdir")

    q = sub.add_parser("qrw", help="discrete Hadamard-coin walk")
    _add_physics(q)
    q.add_argument("--steps", type=int)
    q.add_argument("--coin", choices=sorted(lattice.COIN_STATES))
    q.add_argument("--compare", action="store_true", default=None)
    q.add_argument("--outdir")

    v = sub.add_parser("validate", help="run the acceptance checks")
    v.add_argument("--criteria", help="comma-separated criterion numbers (default all)")
    v.add_argument("--tolerance-scale", type=float, help="multiplies every tolerance; 0 forces failures")
    v.add_argument("--output", help="also write the JSON report here")

    for p in (d, o, e, q, v):
        p.add_argument("--config", help="key=value file; flags take precedence")
    return ap


def resolve(args: argparse.Namespace) -> dict:
    """flags > config file > defaults."""
    cfg = dict(DEFAULTS)
    if getattr(args, "config", None):
        cfg.update(read_config(args.config))
    for k, v in vars(args).items():
        if v is not None:
            cfg[k] = v
    return cfg


def physics(cfg) -> PhysicalParams:
    triple = [cfg.get(k) for k in ("omega", "v", "sigma")]
    have_alpha = cfg.get("alpha") is not None
    have_triple = any(x is not None for x in triple)
    if have_alpha == have_triple:
        raise UsageError("give exactly one of --alpha or the --omega/--v/--sigma triple")
    try:
        if have_alpha:
            return params_from_alpha(float(cfg["alpha"]))
        if any(x is None for x in triple):
            raise UsageError("--omega, --v and --sigma must all be given")
        return make_params(*(float(x) for x in triple))
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def _meta(params, **extra):
    m = {"alpha": params.alpha, "omega": params.omega, "v": params.v, "sigma": params.sigma,
         "version": __version__}
    m.update(extra)
    return m


def _t_over_T(t, params):
    return t / params.larmor_period if params.omega > 0 else None


def _state(cfg):
    label = cfg["state"]
    coeffs = None
    if label == "custom":
        if not cfg.get("coeffs"):
            raise UsageError("--state custom needs --coeffs")
        try:
            coeffs = [complex(c.strip().replace("i", "j")) for c in cfg["coeffs"].split(",")]
        except ValueError:
            raise UsageError("cannot parse --coeffs") from None
    try:
        return canonical_spin_state(label, cfg["j"], coeffs)
    except (DomainError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _density_one(state, t, params, method, pps):
    if method == "auto":
        method = "quadrature" if (state.two_j == 1 and state == canonical_spin_state("y_plus")) else "fft"
    if method == "fft":
        return dens.density_general(state, t, params)
    if state != canonical_spin_state("y_plus"):
        raise UsageError(f"method {method} needs the y_plus spin-1/2 state")
    x = dens.default_x_grid(t, params, points_per_sigma=pps)
    if method == "quadrature":
        return dens.density_symmetric(x, t, params)
    if method == "small_alpha":
        return asy.density_small_alpha(x, t, params)
    return asy.density_large_alpha(x, t, params)


def _fmt_label(t):
    return ("%.6g" % t).replace(".", "p").replace("-", "m").replace("+", "")


def cmd_density(cfg) -> int:
    params = physics(cfg)
    if not cfg.get("times"):
        raise UsageError("density needs --times")
    times = parse_times(cfg["times"], params)
    state = _state(cfg)
    pps = int(cfg["points_per_sigma"])
    profiles = ordered_map(lambda t: _density_one(state, t, params, cfg["method"], pps), times)
    for i, (t, prof) in enumerate(zip(times, profiles)):
        path = os.path.join(cfg["outdir"], f"density_{i:03d}_t{_fmt_label(t)}.csv")
        meta = _meta(params, t=t, t_over_T=_t_over_T(t, params), method=prof.method,
                     norm_residual=prof.norm_residual, state=cfg["state"], j=str(state.j),
                     coeffs=[[c.real, c.imag] for c in state.coeffs])
        write_csv(path, {"x": prof.x_grid, "x_over_sigma": prof.x_grid / params.sigma, "P": prof.values}, meta)
        print(path)
    return EXIT_OK


def _sweep(spec: str):
    try:
        lo, hi, kind, n = spec.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError:
        raise UsageError("--sweep-alpha expects lo:hi:log|lin:count") from None
    if n < 1 or lo < 0 or hi < lo or kind not in ("log", "lin") or (kind == "log" and lo <= 0):
        raise UsageError("--sweep-alpha: bad range")
    return np.geomspace(lo, hi, n) if kind == "log" else np.linspace(lo, hi, n)


def cmd_observables(cfg) -> int:
    out = cfg["outdir"]
    if cfg.get("sweep_alpha"):
        alphas = _sweep(cfg["sweep_alpha"])
        rows = ordered_map(lambda a: (obs.eta_bar(a), obs.spread_velocity(a), obs.spread_rate_y_plus(a)), alphas)
        cols = {"alpha": alphas, "eta_bar": [r[0] for r in rows], "V": [r[1] for r in rows],
                "spread_rate_y_plus": [r[2] for r in rows]}
        path = os.path.join(out, "sweep_alpha.csv")
        write_csv(path, cols, {"sweep": cfg["sweep_alpha"], "version": __version__})
        print(path)
        return EXIT_OK
    params = physics(cfg)
    alpha = params.alpha
    quantity = cfg["quantity"]
    if quantity == "V":
        report = {"alpha": alpha, "V": obs.spread_velocity(alpha),
                  "large_alpha_asymptote": math.sqrt(3) / (8 * alpha * alpha) if alpha > 0 else None,
                  "small_alpha_branch": 0.5 * (1 - 3 * math.sqrt(math.pi / 2) * alpha * alpha),
                  "spread_rate_y_plus": obs.spread_rate_y_plus(alpha),
                  "spread_rate_z_plus": obs.spread_rate_z_plus(alpha)}
        path = os.path.join(out, "spread_velocity.json")
        atomic_write(path, json.dumps(report, sort_keys=True, indent=2) + "\n")
        print(json.dumps(report, sort_keys=True))
        return EXIT_OK
    if not cfg.get("tmax") or not cfg.get("dt"):
        raise UsageError("observables needs --tmax and --dt (or --sweep-alpha / --quantity V)")
    tmax, dt = parse_time(cfg["tmax"], params), parse_time(cfg["dt"], params)
    if dt <= 0 or tmax <= 0:
        raise UsageError("--tmax and --dt must be positive")
    t = np.arange(0.0, tmax + 0.5 * dt, dt)
    meta = _meta(params, tmax=tmax, dt=dt, M=0.5, j="1/2")
    written = []
    if quantity in ("all", "eta"):
        vals = obs.eta(params.omega * t, alpha)
        write_csv(p := os.path.join(out, "eta.csv"),
                  {"t": t, "omega_t": params.omega * t, "eta": vals}, dict(meta, eta_bar=obs.eta_bar(alpha)))
        written.append(p)
    if quantity in ("all", "mean_x"):
        vals = obs.mean_x(t, 0.5, params)
        write_csv(p := os.path.join(out, "mean_x.csv"), {"t": t, "mean_x": vals}, meta)
        written.append(p)
    if quantity in ("all", "delta_x"):
        vals = np.sqrt(ordered_map(lambda tt: obs.variance_x(tt, 0.5, 0.5, params), t))
        write_csv(p := os.path.join(out, "delta_x.csv"), {"t": t, "delta_x": vals}, meta)
        written.append(p)
    for p in written:
        print(p)
    return EXIT_OK


def cmd_entropy(cfg) -> int:
    params = physics(cfg)
    if not cfg.get("times"):
        raise UsageError("entropy needs --times")
    times = parse_times(cfg["times"], params)
    state = canonical_spin_state("y_plus")
    S = ordered_map(lambda t: dens.shannon_entropy(dens.density_general(state, t, params)), times)
    tt = np.asarray(times)
    tau = params.v * tt / params.sigma
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(tau > 1, np.asarray(S) / np.log(np.where(tau > 1, tau, 2.0)), np.nan)
    path = os.path.join(cfg["outdir"], "entropy.csv")
    write_csv(path, {"t": tt, "t_over_T": tt / params.larmor_period if params.omega else tt * np.nan,
                     "S": S, "S_over_ln_t": ratio},
              _meta(params, state="y_plus", ln_t_units="v t / sigma"))
    print(path)
    return EXIT_OK


def cmd_qrw(cfg) -> int:
    steps = cfg.get("steps")
    if steps is None or int(steps) < 1:
        raise UsageError("qrw needs --steps >= 1")
    steps = int(steps)
    coin = cfg["coin"]
    state = lattice.walk(steps, coin)
    n, P = lattice.position_distribution(state)
    keep = P > 0
    path = os.path.join(cfg["outdir"], f"qrw_{steps}.csv")
    write_csv(path, {"n": n[keep], "x": n[keep].astype(float), "P": P[keep]},
              {"steps": steps, "coin_init": coin, "version": __version__})
    print(path)
    if cfg.get("compare") in (True, "1", "true", "True", "yes"):
        params = physics(cfg)
        if coin not in ("y_plus", "plus", "minus", "y_minus"):
            raise UsageError("unknown coin")
        cp, cm = lattice.COIN_STATES[coin]
        report = lattice.continuum_comparison(steps, params, canonical_spin_state("custom", "1/2", [cm, cp]))
        report["coin_init"] = coin
        rpath = os.path.join(cfg["outdir"], f"qrw_{steps}_compare.json")
        atomic_write(rpath, json.dumps(report, sort_keys=True, indent=2) + "\n")
        print(json.dumps(report, sort_keys=True))
    return EXIT_OK


def cmd_validate(cfg) -> int:
    numbers = None
    if cfg.get("criteria"):
        try:
            numbers = [int(x) for x in str(cfg["criteria"]).split(",")]
        except ValueError:
            raise UsageError("--criteria expects comma-separated integers") from None
        bad = [i for i in numbers if i not in validation.CRITERIA]
        if bad:
            raise UsageError(f"unknown criteria {bad}")
    scale = float(cfg.get("tolerance_scale", 1.0))
    results = validation.run(numbers, scale)
    for r in results:
        print(validation.summary_line(r), file=sys.stderr)
    report = {
        "passed": all(r.passed for r in results),
        "failed": [r.number for r in results if not r.passed],
        "tolerance_scale": scale,
        "versions": {"spinwalk": __version__, "numpy": np.__version__, "python": sys.version.split()[0]},
        "grid": {"n_default": 4096, "p_max_sigma": 16.0, "edge_fraction": 0.05, "edge_threshold": 1e-6,
                 "x_points_per_sigma": 8, "threads": worker_count()},
        "criteria": [r.to_dict() for r in results],
    }
    text = json.dumps(report, sort_keys=True, indent=2, default=float)
    if cfg.get("output"):
        atomic_write(cfg["output"], text + "\n")
    print(text)
    return EXIT_OK if report["passed"] else EXIT_FAIL


COMMANDS = {"density": cmd_density, "observables": cmd_observables, "entropy": cmd_entropy,
            "qrw": cmd_qrw, "validate": cmd_validate}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        cfg = resolve(args)
        return COMMANDS[args.command](cfg)
    except (UsageError, DomainError) as exc:
        parser.print_usage(sys.stderr)
        print(f"spinwalk {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalFailure as exc:
        print(f"spinwalk {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except SpinwalkError as exc:
        print(f"spinwalk {args.command}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"spinwalk {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Command line front end: ``python3 -m tia <command> ...`` or ``tia <command> ...``.

Exit codes: 0 success, 1 a law or agreement check failed, 2 unreadable input,
3 bad configuration (flags out of range, mismatched lattices).
Set TIA_LOG to error, info or debug for logging on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CONFIG = 0, 1, 2, 3

log = logging.getLogger("tia")


class ConfigError(Exception):
    pass


class InputError(Exception):
    pass


# --- chain files ---------------------------------------------------------------------------------

def _read_json(path):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: not valid JSON ({e.msg} at line {e.lineno} column {e.colno})") from e


def _is_d(doc) -> bool:
    return isinstance(doc, dict) and isinstance(doc.get("lattice"), list)


def _load_chain(path):
    from .cells import ChainFormatError, chain_from_json
    from .tensor import chaind_from_json
    doc = _read_json(path)
    try:
        return chaind_from_json(doc) if _is_d(doc) else chain_from_json(doc)
    except ChainFormatError as e:
        raise InputError(f"{path}: {e}") from e
    except ValueError as e:
        raise InputError(f"{path}: {e}") from e


def _dump_chain(x, path):
    from .cells import Chain, chain_to_json
    from .tensor import chaind_to_json
    doc = chain_to_json(x) if isinstance(x, Chain) else chaind_to_json(x)
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


# --- commands -----------------------------------------------------------------------------------

def cmd_product(args) -> int:
    from .cells import Chain, LatticeMismatch
    from .tensor import intersect_d
    from .tia1d import intersect
    x, y = _load_chain(args.a), _load_chain(args.b)
    if type(x) is not type(y):
        raise ConfigError("cannot multiply a 1-D chain with a d-dimensional one")
    try:
        z = intersect(x, y) if isinstance(x, Chain) else intersect_d(x, y)
    except LatticeMismatch as e:
        raise ConfigError(f"lattice mismatch: {e}") from e
    _dump_chain(z, args.out)
    return EXIT_OK


def cmd_boundary(args) -> int:
    from .cells import Chain
    from .tensor import boundary_d
    from .tia1d import boundary
    x = _load_chain(args.chain)
    _dump_chain(boundary(x) if isinstance(x, Chain) else boundary_d(x), args.out)
    return EXIT_OK


def _finish(report, banner) -> int:
    for line in report.lines():
        print(line)
    print(banner if report.ok else "FAIL")
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_verify(args) -> int:
    from .verify import sweep_1d, sweep_d
    if not 1 <= args.dims <= 3:
        raise ConfigError("--dims must be 1, 2 or 3")
    if not 0 <= args.dec_bound <= 4:
        raise ConfigError("--dec-bound must lie in 0..4")
    if args.window < 1 or args.window > 5:
        raise ConfigError("--window must lie in 1..5")
    if args.period is not None and args.period < 3:
        raise ConfigError("--period must be at least 3")
    if args.dims == 1:
        rep = sweep_1d(args.dec_bound, args.window, args.period, triples=not args.no_triples,
                       absorption=args.absorption)
    else:
        if args.period is not None:
            raise ConfigError("--period is only supported with --dims 1")
        rep = sweep_d(args.dims, args.dec_bound, args.window, samples=args.samples, seed=args.seed)
    return _finish(rep, "PASS")


def cmd_oracle_check(args) -> int:
    from .verify import oracle_check
    if not 0 <= args.dec_bound <= 4:
        raise ConfigError("--dec-bound must lie in 0..4")
    if args.window < 1 or args.window > 5:
        raise ConfigError("--window must lie in 1..5")
    if args.period is not None and args.period < 3:
        raise ConfigError("--period must be at least 3")
    rep = oracle_check(args.dec_bound, args.window, args.period)
    for line in rep.lines():
        print(line)
    prods, bds = rep.checks
    if rep.ok:
        print(f"AGREE: {prods.checked} products, {bds.checked} boundaries")
        return EXIT_OK
    print("DISAGREE")
    return EXIT_FAIL


def _fluid_setup(args):
    from .fluid import Augmentation
    if args.N < 3:
        raise ConfigError("--N must be at least 3")
    try:
        delta = Fraction(args.delta)
        aug = Augmentation(delta)
    except (ValueError, ZeroDivisionError) as e:
        raise ConfigError(f"--delta: {e}") from e
    return aug


def cmd_fluid_build(args) -> int:
    from .fluid import build_fluid_algebra
    aug = _fluid_setup(args)
    F = build_fluid_algebra(args.N, aug, strict=False)
    text = json.dumps(F.report(), indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return EXIT_OK


def cmd_fluid_run(args) -> int:
    from .fluid import METHODS, MidpointDiverged, build_fluid_algebra, integrate, random_state, write_run
    aug = _fluid_setup(args)
    if args.dt <= 0 or args.steps < 0:
        raise ConfigError("--dt must be positive and --steps non-negative")
    if args.method not in METHODS:
        raise ConfigError(f"--method must be one of {METHODS}")
    F = build_fluid_algebra(args.N, aug, strict=False)
    if F.D is None:
        raise ConfigError(f"metric is singular at N={args.N}, delta={aug.delta}; no dynamics")
    X0 = random_state(F, args.seed)
    try:
        recs = integrate(F, X0, args.dt, args.steps, args.method)
    except MidpointDiverged as e:
        print(str(e), file=sys.stderr)
        return EXIT_FAIL
    meta = {"N": args.N, "delta": str(aug.delta), "dt": args.dt, "steps": args.steps,
            "method": args.method, "seed": args.seed, "dim_V": F.dim}
    write_run(recs, args.csv, args.json, meta)
    e0, h0 = recs[0]["energy"], recs[0]["helicity"]
    de = max(abs(r["energy"] - e0) for r in recs) / abs(e0) if e0 else 0.0
    dh = max(abs(r["helicity"] - h0) for r in recs) / abs(h0) if h0 else 0.0
    print(f"dim V = {F.dim}, steps = {args.steps}, relative energy drift = {de:.3e}, "
          f"relative helicity drift = {dh:.3e}")
    return EXIT_OK


# --- parser -------------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    p = argparse.ArgumentParser(prog="tia", description="Decorated lattice cells: products, boundaries, "
                                "law checks and a small fluid model.", formatter_class=fmt)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("product", help="transverse product of two chain files", formatter_class=fmt)
    s.add_argument("a", help="first chain JSON file ('-' for stdin)")
    s.add_argument("b", help="second chain JSON file")
    s.add_argument("-o", "--out", default="-", help="output file ('-' for stdout)")
    s.set_defaults(func=cmd_product)

    s = sub.add_parser("boundary", help="boundary of a chain file", formatter_class=fmt)
    s.add_argument("chain", help="chain JSON file ('-' for stdin)")
    s.add_argument("-o", "--out", default="-", help="output file ('-' for stdout)")
    s.set_defaults(func=cmd_boundary)

    s = sub.add_parser("verify", help="sweep the algebra laws", formatter_class=fmt)
    s.add_argument("--dims", type=int, default=1, help="dimension d (1..3)")
    s.add_argument("--dec-bound", type=int, default=2, help="largest decoration entry B (0..4)")
    s.add_argument("--window", type=int, default=4, help="number of lattice sites W on the line (1..5)")
    s.add_argument("--period", type=int, default=None, help="use a circle of this many sites instead of a window (d=1)")
    s.add_argument("--samples", type=int, default=2000, help="random pairs and triples drawn when d > 1")
    s.add_argument("--seed", type=int, default=0, help="seed for the random part of d > 1 sweeps")
    s.add_argument("--no-triples", action="store_true", help="skip the associativity sweep over triples (d=1)")
    s.add_argument("--absorption", action="store_true",
                   help="also require the truncation ideal to absorb products with arbitrary generators "
                        "(this fails; see README)")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("oracle-check", help="closed forms against the integration oracle", formatter_class=fmt)
    s.add_argument("--dec-bound", type=int, default=4, help="largest decoration entry B (0..4)")
    s.add_argument("--window", type=int, default=5, help="number of lattice sites W (1..5)")
    s.add_argument("--period", type=int, default=None, help="check on a circle of this many sites")
    s.set_defaults(func=cmd_oracle_check)

    s = sub.add_parser("fluid", help="fluid algebra on a periodic 3-D lattice", formatter_class=fmt)
    fs = s.add_subparsers(dest="fluid_command", required=True)
    for name, func, helptext in (("build", cmd_fluid_build, "assemble and report the structure constants"),
                                 ("run", cmd_fluid_run, "integrate the Euler flow from a seeded state")):
        f = fs.add_parser(name, help=helptext, formatter_class=fmt)
        f.add_argument("--N", type=int, default=3, help="sites per axis (>= 3)")
        f.add_argument("--delta", default="1", help="augmentation parameter in (0, 1], as a rational")
        if name == "build":
            f.add_argument("--out", default=None, help="also write the report JSON here")
        else:
            f.add_argument("--method", default="implicit_midpoint", help="rk4 or implicit_midpoint")
            f.add_argument("--dt", type=float, default=0.1, help="time step")
            f.add_argument("--steps", type=int, default=100, help="number of steps")
            f.add_argument("--seed", type=int, default=0, help="seed of the initial state")
            f.add_argument("--csv", default="fluid_run.csv", help="time series output (step,time,energy,helicity)")
            f.add_argument("--json", default="fluid_run.json", help="final state output")
        f.set_defaults(func=func)
    return p


def main(argv=None) -> int:
    level = os.environ.get("TIA_LOG", "error").lower()
    logging.basicConfig(level={"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}.get(
        level, logging.ERROR), format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INPUT
    try:
        return args.func(args)
    except InputError as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ConfigError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

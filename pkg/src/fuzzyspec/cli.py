"""Command-line entry point: ``formula``, ``eval``, ``verify`` and ``sample``.

Exit status is 0 on success, 1 on invalid input and 2 when a verification
run fails its tolerance.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from .action import PATHS, ActionSpec, evaluate_action
from .clifford import Signature
from .dirac import DiracData, check_dims, random_dirac_data
from .ncpoly import generate_trace_functionals, render_text
from .oracle import DEFAULT_RTOL, verify

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2


class InputError(Exception):
    pass


def _signature(text: str) -> Signature:
    try:
        return Signature.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _action(text: str) -> ActionSpec:
    try:
        return ActionSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {n}")
    return n


def _auto_seed() -> int:
    return int(np.random.SeedSequence().entropy % (2 ** 32))


def load_data(path: str) -> DiracData:
    """Read a DiracData JSON file. For signature (1,3), labels written with
    time index 0 and space indices 1..3 are shifted to 1..4."""
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except FileNotFoundError:
        raise InputError(f"data file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None
    try:
        entries = obj["entries"]
        if tuple(obj["signature"]) == (1, 3) and any("0" in k.split(",") for k in entries):
            obj = dict(obj, entries={",".join(str(int(i) + 1) for i in k.split(",")): v for k, v in entries.items()})
        return DiracData.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: invalid Dirac data ({exc})") from None


def cmd_formula(args) -> int:
    if args.power % 2:
        raise InputError(f"--power must be even, got {args.power}")
    f = generate_trace_functionals(args.signature, args.power // 2)
    if args.format == "json":
        print(json.dumps(f.to_json(), indent=2))
    else:
        print(render_text(f))
    return EXIT_OK


def cmd_eval(args) -> int:
    if args.data:
        data = load_data(args.data)
    else:
        if args.signature is None or args.n is None:
            raise InputError("eval needs --data, or --signature and --n for random data")
        seed = args.seed if args.seed is not None else _auto_seed()
        print(f"seed={seed}")
        data = random_dirac_data(args.signature, args.n, seed)
    check_dims(data.signature, data.N)
    rows = []
    for path in ("auto", *PATHS):
        try:
            res = evaluate_action(args.f, data, path)
        except ValueError as exc:
            rows.append({"path": path, "value": None, "detail": str(exc)})
            continue
        detail = ", ".join(f"m={m}:{p}" for m, (p, _) in sorted(res.terms.items()))
        rows.append({"path": path, "value": res.value, "detail": detail})
    if args.format == "json":
        print(json.dumps(rows, indent=2))
    else:
        print(f"signature {data.signature}  N={data.N}  f={args.f}")
        for r in rows:
            val = "unavailable" if r["value"] is None else f"{r['value']:.15g}"
            print(f"{r['path']:>12}  {val:>24}  {r['detail']}")
    return EXIT_OK


def cmd_verify(args) -> int:
    report = verify(args.signature, args.n, args.tmax, range(args.seed_offset, args.seed_offset + args.seeds),
                    args.tol, workers=args.workers)
    print(report.dumps() if args.format == "json" else report.table())
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_sample(args) -> int:
    from .mcmc import ChainConfig, estimate, run, write_csv

    try:
        config = ChainConfig.load(args.config)
    except FileNotFoundError:
        raise InputError(f"config file not found: {args.config}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{args.config} is not valid JSON: {exc}") from None
    except TypeError as exc:
        raise InputError(f"{args.config}: invalid chain config ({exc})") from None
    if args.seed is not None:
        config.seed = args.seed
    if config.seed is None:
        config.seed = _auto_seed()
    print(f"seed={config.seed}")
    stats = run(config)
    write_csv(stats, args.out)
    print(f"{stats.n_samples} samples written to {args.out}  acceptance {stats.acceptance_rate:.3f}  ({stats.wall_time:.1f} s)")
    for name in ("S", "F", "TrD2"):
        mean, err = estimate(stats, name)
        print(f"  <{name}> = {mean:.6g} +- {err:.2g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fuzzyspec", description="Spectral actions of fuzzy Dirac operators.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("formula", help="print the trace polynomial of Tr D^power")
    p.add_argument("--signature", type=_signature, required=True, metavar="P,Q")
    p.add_argument("--power", type=_positive, required=True, help="even power 2t")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_formula)

    p = sub.add_parser("eval", help="evaluate Tr f(D) on every available path")
    p.add_argument("--data", help="DiracData JSON file")
    p.add_argument("--signature", type=_signature, metavar="P,Q", help="random data of this signature when --data is absent")
    p.add_argument("--n", type=_positive)
    p.add_argument("--seed", type=int)
    p.add_argument("--f", type=_action, required=True, metavar="M:C,...", help="polynomial, e.g. 2:1,4:0.5")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify", help="compare closed forms, generated functionals and the dense oracle")
    p.add_argument("--signature", type=_signature, required=True, metavar="P,Q")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--tmax", type=_positive, required=True)
    p.add_argument("--seeds", type=_positive, default=5, help="number of seeds")
    p.add_argument("--seed-offset", type=int, default=0, help="first seed")
    p.add_argument("--tol", type=float, default=DEFAULT_RTOL)
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sample", help="run a Metropolis chain and write a CSV")
    p.add_argument("--config", required=True, help="ChainConfig JSON file")
    p.add_argument("--out", required=True, help="CSV output path")
    p.add_argument("--seed", type=int, help="overrides the config seed")
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage; 2 is reserved for verification failures
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (InputError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

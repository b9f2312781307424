"""Command-line front end: entropy runs, tables, embedding checks, oracles.

Exit codes: 0 success, 2 validation failure, 3 oracle unavailable,
4 configuration error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .engine import estimate_entropy, estimate_entropy_from_critical
from .kneading import check_embedding, critical_itineraries, entropy_estimate_wordcount
from .maps import (
    AdmissiblePair,
    InvalidMapError,
    LorenzMapSpec,
    load_map_spec,
    validate_lorenz,
)
from .oracles import NotMarkovError, build_markov, parry_reference

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_ORACLE = 3
EXIT_CONFIG = 4


class _ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); config errors are 4
        raise _ConfigError(message)


def _build_parser() -> _Parser:
    p = _Parser(prog="lorenz-entropy", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def add_map_args(sp):
        sp.add_argument("--map", help="JSON map-spec file")
        sp.add_argument(
            "--uniform",
            nargs=2,
            type=float,
            metavar=("A", "P"),
            help="inline uniform map: slope a and critical point p",
        )

    sp = sub.add_parser("entropy", help="run the bisection estimate")
    add_map_args(sp)
    sp.add_argument("--epsilon", type=float, required=True)
    sp.add_argument("--n", type=int, default=1000, help="truncation term (default 1000)")
    sp.add_argument("--format", choices=("table", "json", "csv"), default="table")

    sp = sub.add_parser("table", help="sweep an n-list x epsilon-list grid")
    add_map_args(sp)
    sp.add_argument("--n-list", required=True, help="comma-separated truncation terms")
    sp.add_argument("--eps-list", required=True, help="comma-separated tolerances")
    sp.add_argument("--format", choices=("table", "json", "csv"), default="table")

    sp = sub.add_parser("embed-check", help="embedding verdicts for given slopes")
    add_map_args(sp)
    sp.add_argument("--a-list", required=True, help="comma-separated slopes in (1,2)")
    sp.add_argument("--n", type=int, default=1000)
    sp.add_argument("--format", choices=("table", "json", "csv"), default="table")

    sp = sub.add_parser("oracle", help="independent entropy references")
    add_map_args(sp)
    sp.add_argument(
        "--oracle", choices=("markov", "wordcount", "parry", "auto"), default="auto"
    )
    sp.add_argument("--n", type=int, default=20, help="word length for the wordcount oracle")
    sp.add_argument("--format", choices=("table", "json", "csv"), default="table")

    sp = sub.add_parser("validate", help="check the Lorenz-map conditions")
    add_map_args(sp)
    sp.add_argument("--grid-size", type=int, default=10_000)
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.add_argument("--format", choices=("table", "json"), default="table")
    return p


def _load_map(args):
    if args.uniform is not None and args.map is not None:
        raise _ConfigError("give either --map or --uniform, not both")
    if args.uniform is not None:
        try:
            return AdmissiblePair(args.uniform[0], args.uniform[1])
        except ValueError as e:
            raise _ConfigError(str(e)) from None
    if args.map is None:
        raise _ConfigError("a map is required: --map FILE or --uniform A P")
    try:
        return load_map_spec(args.map)
    except (OSError, ValueError) as e:
        raise _ConfigError(f"cannot load map spec: {e}") from None


def _describe(map_like) -> dict:
    if isinstance(map_like, AdmissiblePair):
        return {"uniform": {"a": map_like.a, "p": map_like.p}}
    return map_like.describe()


def _gate_validation(map_like, out=sys.stderr) -> int | None:
    """Structural failures abort with exit 2; expansivity-only failures warn."""
    if not isinstance(map_like, LorenzMapSpec):
        return None
    report = validate_lorenz(map_like, grid_size=2048)
    if not report.structural_ok:
        print("map fails Lorenz-map validation:", file=out)
        print(report.summary(), file=out)
        return EXIT_VALIDATION
    if not report.ok:
        print(
            "warning: expansivity condition not established "
            f"(estimated constant {report.expansivity_constant:.4g}); proceeding",
            file=out,
        )
    return None


def _emit_json(payload) -> None:
    print(json.dumps(payload, sort_keys=True))


def _cmd_entropy(args) -> int:
    map_like = _load_map(args)
    code = _gate_validation(map_like)
    if code is not None:
        return code
    try:
        result = estimate_entropy(map_like, args.epsilon, args.n)
    except (InvalidMapError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION if isinstance(e, InvalidMapError) else EXIT_CONFIG
    payload = result.as_dict(_describe(map_like))
    if args.format == "json":
        _emit_json(payload)
    elif args.format == "csv":
        print("epsilon,n,log_lo,log_hi,midpoint_log,iterations,undetermined_total")
        print(
            f"{result.epsilon},{result.truncation_n},{result.log_lo!r},"
            f"{result.log_hi!r},{result.midpoint_log!r},{result.iterations},"
            f"{result.undetermined_total}"
        )
    else:
        print(f"h(T) in [{result.log_lo:.10f}, {result.log_hi:.10f}]")
        print(f"ln-midpoint: {result.midpoint_log:.10f}")
        print(
            f"iterations: {result.iterations}   undetermined: {result.undetermined_total}"
            f"   epsilon: {result.epsilon:g}   n: {result.truncation_n}"
        )
    return EXIT_OK


def _parse_list(text, cast, what):
    try:
        vals = [cast(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise _ConfigError(f"malformed {what} list: {text!r}") from None
    if not vals:
        raise _ConfigError(f"empty {what} list")
    return vals


def _cmd_table(args) -> int:
    map_like = _load_map(args)
    code = _gate_validation(map_like)
    if code is not None:
        return code
    n_list = _parse_list(args.n_list, int, "n")
    eps_list = _parse_list(args.eps_list, float, "epsilon")
    cells = {}
    for n in n_list:
        crit = critical_itineraries(map_like, n)
        for eps in eps_list:
            cells[(n, eps)] = estimate_entropy_from_critical(crit, eps, n)
    if args.format == "json":
        _emit_json(
            {
                "map": _describe(map_like),
                "cells": [
                    {
                        "n": n,
                        "epsilon": eps,
                        "midpoint_log": r.midpoint_log,
                        "log_lo": r.log_lo,
                        "log_hi": r.log_hi,
                        "iterations": r.iterations,
                        "undetermined_total": r.undetermined_total,
                    }
                    for (n, eps), r in sorted(cells.items())
                ],
            }
        )
        return EXIT_OK
    header = [""] + [f"eps={eps:g}" for eps in eps_list]
    rows = [
        [f"n = {n}"] + [f"{cells[(n, eps)].midpoint_log:.10f}" for eps in eps_list]
        for n in n_list
    ]
    if args.format == "csv":
        print(",".join(["n"] + header[1:]))
        for n, row in zip(n_list, rows):
            print(",".join([str(n)] + row[1:]))
    else:
        widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
        for r in [header] + rows:
            print("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return EXIT_OK


def _cmd_embed_check(args) -> int:
    map_like = _load_map(args)
    code = _gate_validation(map_like)
    if code is not None:
        return code
    a_list = _parse_list(args.a_list, float, "a")
    for a in a_list:
        if not 1.0 < a < 2.0:
            raise _ConfigError(f"slopes must lie in (1, 2), got {a}")
    crit = critical_itineraries(map_like, args.n)
    reports = [check_embedding(crit, a, args.n) for a in a_list]
    if args.format == "json":
        _emit_json(
            {
                "map": _describe(map_like),
                "n": args.n,
                "results": [
                    {
                        "a": r.a,
                        "status": r.status.value,
                        "t1": None if r.interval is None else r.interval[0],
                        "t2": None if r.interval is None else r.interval[1],
                        "unique_p": r.unique_p,
                        "alpha_clipped": r.alpha_clipped,
                        "beta_clipped": r.beta_clipped,
                    }
                    for r in reports
                ],
            }
        )
        return EXIT_OK
    lines = []
    for r in reports:
        if r.unique_p is not None:
            extra = f"unique p = {r.unique_p:.12g}"
        elif r.interval is not None:
            extra = f"t-interval = ({r.interval[0]:.12g}, {r.interval[1]:.12g})"
            if r.alpha_clipped:
                extra += "  [pi_a(alpha) < 1 - 1/a]"
            if r.beta_clipped:
                extra += "  [pi_a(beta) > 1/a]"
        else:
            extra = ""
        lines.append((f"{r.a:.12g}", r.status.value, extra))
    if args.format == "csv":
        print("a,status,detail")
        for a, status, extra in lines:
            print(f"{a},{status},{extra}")
    else:
        for a, status, extra in lines:
            print(f"a = {a}: {status}" + (f"   {extra}" if extra else ""))
    return EXIT_OK


def _cmd_oracle(args) -> int:
    map_like = _load_map(args)
    code = _gate_validation(map_like)
    if code is not None:
        return code
    choice = args.oracle
    if choice == "auto":
        if isinstance(map_like, AdmissiblePair):
            choice = "parry"
        else:
            try:
                build_markov(map_like)
                choice = "markov"
            except NotMarkovError:
                choice = "wordcount"
    try:
        if choice == "parry":
            if not isinstance(map_like, AdmissiblePair):
                print("error: the Parry oracle needs a uniform map", file=sys.stderr)
                return EXIT_ORACLE
            value = parry_reference(map_like)
            detail = {"oracle": "parry", "value": value}
        elif choice == "markov":
            model = build_markov(map_like)
            value = model.entropy()
            detail = {
                "oracle": "markov",
                "value": value,
                "endpoints": list(model.interval_endpoints),
                "adjacency": model.adjacency.tolist(),
            }
        else:
            crit = critical_itineraries(map_like, max(args.n, 3))
            value = entropy_estimate_wordcount(crit, args.n)
            detail = {
                "oracle": "wordcount",
                "value": value,
                "n": args.n,
                "note": "definition-level estimate; expect ~0.08 slack at n around 20",
            }
    except NotMarkovError as e:
        print(f"oracle unavailable: {e}", file=sys.stderr)
        return EXIT_ORACLE
    except ValueError as e:
        print(f"oracle unavailable: {e}", file=sys.stderr)
        return EXIT_ORACLE
    if args.format == "json":
        _emit_json({"map": _describe(map_like), **detail})
    elif args.format == "csv":
        print("oracle,value")
        print(f"{detail['oracle']},{value!r}")
    else:
        print(f"{detail['oracle']}: {value:.10f}")
        if choice == "markov":
            print(f"endpoints: {detail['endpoints']}")
            print(f"adjacency: {detail['adjacency']}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    map_like = _load_map(args)
    if isinstance(map_like, AdmissiblePair):
        print("uniform map: admissible by construction")
        return EXIT_OK
    report = validate_lorenz(map_like, grid_size=args.grid_size, tol=args.tol)
    if args.format == "json":
        _emit_json(
            {
                "map": _describe(map_like),
                "conditions": report.conditions,
                "expansivity_constant": report.expansivity_constant,
                "expansivity_order": report.expansivity_order,
                "ok": report.ok,
            }
        )
    else:
        print(report.summary())
        print("result:", "valid" if report.ok else "INVALID")
    return EXIT_OK if report.ok else EXIT_VALIDATION


_COMMANDS = {
    "entropy": _cmd_entropy,
    "table": _cmd_table,
    "embed-check": _cmd_embed_check,
    "oracle": _cmd_oracle,
    "validate": _cmd_validate,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except _ConfigError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except InvalidMapError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())

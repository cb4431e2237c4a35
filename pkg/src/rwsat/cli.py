"""Command-line front end.

Exit codes: 0 success, 1 unreadable or malformed CNF, 2 invalid decomposition
file, 3 verification failure (parse tree regeneration or oracle mismatch).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import random
import sys
import time
from dataclasses import asdict, dataclass, field

from . import generators
from .decomposition import (
    DecompositionError,
    exact_decomposition,
    heuristic_decomposition,
    random_decomposition,
    read_decomposition,
    width,
    write_decomposition,
)
from .dp import COUNTING, TROPICAL, count_models, max_sat, run_dp
from .formula import CnfFormula, DimacsError, build_signed_graph, parse_dimacs
from .oracle import OracleTooLarge, brute_force_count, brute_force_max_sat
from .parsetree import build_parse_tree, verify_parse_tree
from .solver import VerificationError, choose_decomposition, prepare

EXIT_PARSE, EXIT_DECOMP, EXIT_VERIFY = 1, 2, 3


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


@dataclass
class RunReport:
    command: str
    vars: int
    clauses: int
    literals: int
    decomposition: str
    t_plus: int
    t_minus: int
    signed_width: int
    index_plus: int = 0
    index_minus: int = 0
    result: int | None = None
    threads: int = 1
    timings: dict[str, float] = field(default_factory=dict)
    schema: int = 1


def _read_formula(path: str) -> CnfFormula:
    try:
        with open(path, "rb") as fh:
            return parse_dimacs(fh.read())
    except OSError as e:
        raise CliError(EXIT_PARSE, f"cannot read {path}: {e}") from e
    except DimacsError as e:
        raise CliError(EXIT_PARSE, f"{path}: {e}") from e


def _read_decomp(path: str | None, g):
    if path is None:
        return None
    try:
        with open(path) as fh:
            return read_decomposition(fh.read(), g)
    except OSError as e:
        raise CliError(EXIT_DECOMP, f"cannot read {path}: {e}") from e
    except DecompositionError as e:
        raise CliError(EXIT_DECOMP, f"{path}: {e}") from e


def _solve_command(args, mode: str) -> int:
    f = _read_formula(args.file)
    g = build_signed_graph(f)
    given = _read_decomp(args.decomp, g)
    timings: dict[str, float] = {}
    if g.num_vertices == 0:
        value = 1 if mode == "count" else 0
        report = RunReport(args.command, 0, 0, 0, "none", 0, 0, 0, result=value, threads=args.threads)
    else:
        try:
            g, d, source, tree = prepare(f, given, args.exact_cap, verify=True, timings=timings)
        except VerificationError as e:
            raise CliError(EXIT_VERIFY, str(e)) from e
        t0 = time.perf_counter()
        res = run_dp(tree, COUNTING if mode == "count" else TROPICAL, f.num_clauses)
        timings["dp"] = time.perf_counter() - t0
        w = width(d, g)
        value = res.value
        report = RunReport(
            args.command, f.num_vars, f.num_clauses, f.num_literals, source,
            tree.t_plus, tree.t_minus, w.signed, *res.index_sizes,
            result=value, threads=args.threads, timings=timings,
        )
    if args.json:
        print(json.dumps(asdict(report), indent=2, sort_keys=True))
    print(value)
    return 0


def cmd_width(args) -> int:
    f = _read_formula(args.file)
    g = build_signed_graph(f)
    if g.num_vertices == 0:
        print("signed 0\nplus 0\nminus 0\nsource none")
        return 0
    d, source = choose_decomposition(g, None, args.exact_cap)
    w = width(d, g)
    if args.json:
        print(json.dumps({"schema": 1, "source": source, "plus": w.plus, "minus": w.minus, "signed": w.signed}))
    else:
        print(f"source {source}\nplus {w.plus}\nminus {w.minus}\nsigned {w.signed}")
    return 0


def cmd_decompose(args) -> int:
    f = _read_formula(args.file)
    g = build_signed_graph(f)
    if g.num_vertices == 0:
        raise CliError(EXIT_DECOMP, "formula has no vertices to decompose")
    d, source = choose_decomposition(g, None, args.exact_cap)
    text = write_decomposition(d, g) + "\n"
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)
    w = width(d, g)
    print(f"{source} decomposition, signed width {w.signed}", file=sys.stderr)
    return 0


def verify_formula(f: CnfFormula, exact_cap: int = 10, seed: int = 0) -> list[str]:
    """Cross-check the DP against brute force under several decompositions."""
    problems = []
    g = build_signed_graph(f)
    if g.num_vertices == 0:
        return problems
    try:
        want = (brute_force_count(f), brute_force_max_sat(f))
    except OracleTooLarge:
        want = None
    decomps = [("heuristic", heuristic_decomposition(g, seed=seed)), ("random", random_decomposition(g, seed))]
    if g.num_vertices <= exact_cap:
        decomps.insert(0, ("exact", exact_decomposition(g, exact_cap)))
    decomps.append(("file", read_decomposition(write_decomposition(decomps[0][1], g), g)))
    results = set()
    for name, d in decomps:
        tree = build_parse_tree(d, g)
        if not verify_parse_tree(tree, g):
            problems.append(f"{name}: parse tree does not regenerate the formula graph")
            continue
        got = (count_models(tree, f), max_sat(tree, f))
        results.add(got)
        if want is not None and got != want:
            problems.append(f"{name}: got count/maxsat {got}, brute force {want}")
    if len(results) > 1:
        problems.append(f"decompositions disagree: {sorted(results)}")
    return problems


def cmd_verify(args) -> int:
    formulas: list[tuple[str, CnfFormula]] = []
    if args.file:
        formulas.append((args.file, _read_formula(args.file)))
    if args.random:
        rng = random.Random(args.seed)
        for i in range(args.random):
            formulas.append((f"random#{i}", generators.random_cnf(rng)))
    if not formulas:
        raise CliError(EXIT_PARSE, "nothing to verify: give a file or --random N")
    failures = 0
    for name, f in formulas:
        problems = verify_formula(f, args.exact_cap, args.seed)
        for p in problems:
            print(f"{name}: {p}")
        failures += bool(problems)
    print(f"verified {len(formulas)} formula(s), {failures} failure(s)")
    return EXIT_VERIFY if failures else 0


def _parse_sizes(text: str) -> list[int]:
    if ".." in text:
        a, b = (int(x) for x in text.split("..", 1))
        if a < 1 or b < a:
            raise argparse.ArgumentTypeError(f"bad size range {text!r}")
        sizes = []
        s = a
        while s <= b:
            sizes.append(s)
            s *= 2
        return sizes
    return [int(x) for x in text.split(",")]


FAMILIES = {
    "chain": generators.chain,
    "clique": generators.clique,
    "random": generators.random_3cnf,
}


def cmd_bench(args) -> int:
    rows = []
    for size in args.sizes:
        f = FAMILIES[args.family](size)
        g = build_signed_graph(f)
        t0 = time.perf_counter()
        d = heuristic_decomposition(g)
        tree = build_parse_tree(d, g)
        t1 = time.perf_counter()
        best = None
        for _ in range(args.repeat):
            s = time.perf_counter()
            value = count_models(tree, f)
            e = time.perf_counter() - s
            best = e if best is None else min(best, e)
        w = width(d, g)
        rows.append({
            "size": size, "vars": f.num_vars, "clauses": f.num_clauses, "literals": f.num_literals,
            "t_plus": w.plus, "t_minus": w.minus, "signed_width": w.signed,
            "prepare_s": round(t1 - t0, 4), "count_s": round(best, 4), "count_bits": value.bit_length(),
        })
    header = list(rows[0])
    print("  ".join(f"{h:>12}" for h in header))
    for r in rows:
        print("  ".join(f"{r[h]:>12}" for h in header))
    if args.csv:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=header)
        writer.writeheader()
        writer.writerows(rows)
        if args.csv == "-":
            sys.stdout.write(buf.getvalue())
        else:
            with open(args.csv, "w", newline="") as fh:
                fh.write(buf.getvalue())
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rwsat", description="#SAT and Max-SAT parameterized by signed rank-width")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, decomp=True):
        sp.add_argument("file")
        if decomp:
            sp.add_argument("--decomp", help="decomposition file to use instead of searching")
        sp.add_argument("--exact-cap", type=int, default=10, help="largest vertex count for exact search")
        sp.add_argument("--threads", type=int, default=1, help="worker cap (currently single-threaded)")

    for name, help_ in (("count", "count satisfying assignments"), ("maxsat", "maximum satisfiable clauses")):
        sp = sub.add_parser(name, help=help_)
        common(sp)
        sp.add_argument("--json", action="store_true", help="print the run report as JSON")

    sp = sub.add_parser("width", help="report decomposition widths")
    common(sp, decomp=False)
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("decompose", help="write a decomposition file")
    common(sp, decomp=False)
    sp.add_argument("-o", "--output", required=True)

    sp = sub.add_parser("verify", help="differential test against brute-force oracles")
    sp.add_argument("file", nargs="?")
    sp.add_argument("--random", type=int, default=0, help="also check N random small formulas")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--exact-cap", type=int, default=10)

    sp = sub.add_parser("bench", help="timing table for a formula family")
    sp.add_argument("--family", choices=sorted(FAMILIES), required=True)
    sp.add_argument("--sizes", type=_parse_sizes, required=True, help="a..b (doubling) or a,b,c")
    sp.add_argument("--repeat", type=int, default=3)
    sp.add_argument("--csv", help="write CSV to this path ('-' for stdout)")
    return p


COMMANDS = {
    "count": lambda a: _solve_command(a, "count"),
    "maxsat": lambda a: _solve_command(a, "maxsat"),
    "width": cmd_width,
    "decompose": cmd_decompose,
    "verify": cmd_verify,
    "bench": cmd_bench,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code


if __name__ == "__main__":
    sys.exit(main())

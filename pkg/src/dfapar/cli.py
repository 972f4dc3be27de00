"""Command-line front end.

Exit codes: 0 success (equivalent / included), 1 counterexample found,
2 error, 3 a minimisation run hit its timeout or memory budget.
Data goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import config
from .automaton import Dfa, Partition, prune_unreachable, quotient, read_dfa, write_dfa
from .bench import (
    ALGO_TAGS,
    CHECK_ALGOS,
    DEFAULT_RUNS,
    DEFAULT_TIMEOUT_S,
    FAMILIES,
    OK,
    Suite,
    SuiteEntry,
    bench_minimize,
    parse_sizes,
    run_suite,
    write_csv,
)
from .equivalence import check_equiv, check_inclusion
from .errors import BudgetTimeout, DfaparError, ResourceError
from .generators import (
    gen_bitsplitter,
    gen_bitsplitter_ext,
    gen_cycle,
    gen_fib,
    gen_memory_forgetful,
    gen_memory_perfect,
    gen_random_dfa,
)
from .lts import complete_to_dfa, determinize, load_aut
from .minimize import ElectionPolicy

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_ERROR, EXIT_BUDGET = 0, 1, 2, 3


class CliError(Exception):
    pass


def _err(msg: str) -> None:
    print(f"dfapar: {msg}", file=sys.stderr)


def _read(path: str) -> Dfa:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}") from None
    try:
        return read_dfa(data)
    except DfaparError as exc:
        raise CliError(f"{path}: {exc}") from None


def _write(path: str | None, data: bytes) -> None:
    if path is None or path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        Path(path).write_bytes(data)


# -- generate ----------------------------------------------------------------


def cmd_generate(args) -> int:
    fam = args.family
    if fam == "fib":
        if args.word_index is None:
            raise CliError("fib needs --word-index")
        dfa = gen_fib(args.word_index)
    elif fam == "random":
        if args.n is None or args.k is None:
            raise CliError("random needs --n and --k")
        dfa = gen_random_dfa(args.n, args.k, args.accept_fraction, args.seed)
    else:
        if args.n is None:
            raise CliError(f"{fam} needs --n")
        builder = {
            "bitsplit": gen_bitsplitter,
            "bitsplit-ext": gen_bitsplitter_ext,
            "cycle": gen_cycle,
            "memory-perfect": gen_memory_perfect,
            "memory-forgetful": gen_memory_forgetful,
        }[fam]
        dfa = builder(args.n)
    _write(args.out, write_dfa(dfa))
    print(f"states {dfa.num_states} alphabet {dfa.alphabet_size}", file=sys.stderr)
    return EXIT_OK


# -- minimize ----------------------------------------------------------------


def _partition_listing(p: Partition) -> bytes:
    body = " ".join(str(b) for b in p.block_of.tolist())
    return f"partition {p.num_states} {p.num_blocks}\nblock_of {body}\n".encode("ascii")


def cmd_minimize(args) -> int:
    dfa = _read(args.input)
    policy = (
        ElectionPolicy.arbitrary(args.seed) if args.policy == "arbitrary" else ElectionPolicy.min_index()
    )
    rec, report = bench_minimize(
        dfa,
        Path(args.input).stem,
        args.algo,
        runs=args.runs,
        timeout_s=args.timeout_s,
        policy=policy,
        mem_budget_mb=args.mem_budget_mb,
    )
    write_csv([rec], sys.stdout)
    if rec.status != OK:
        _err(f"{args.algo}: {rec.status}")
        return EXIT_BUDGET
    if args.emit:
        if dfa.initial is not None:
            minimal, _ = prune_unreachable(quotient(dfa, report.partition))
            _write(args.emit, write_dfa(minimal))
        else:
            _write(args.emit, _partition_listing(report.partition))
    return EXIT_OK


# -- equiv / include ---------------------------------------------------------


def _check(args, inclusion: bool) -> int:
    a, b = _read(args.a), _read(args.b)
    deadline = None if args.timeout_s is None else time.perf_counter() + args.timeout_s
    check = check_inclusion if inclusion else check_equiv
    result = check(
        a,
        b,
        match_names=args.match_names,
        max_states=config.product_state_cap(args.mem_budget_mb),
        deadline=deadline,
    )
    if result.holds:
        print(result.verdict)
    else:
        print(f"counterexample: {result.word_text()}".rstrip())
    if args.stats:
        print(f"explored_states {result.explored_states}")
        print(f"levels {result.levels}")
    return EXIT_OK if result.holds else EXIT_COUNTEREXAMPLE


def cmd_equiv(args) -> int:
    return _check(args, inclusion=False)


def cmd_include(args) -> int:
    return _check(args, inclusion=True)


# -- convert -----------------------------------------------------------------


def cmd_convert(args) -> int:
    try:
        data = Path(args.input).read_bytes()
    except OSError as exc:
        raise CliError(f"{args.input}: {exc.strerror}") from None
    try:
        lts = load_aut(data)
    except DfaparError as exc:
        raise CliError(f"{args.input}: {exc}") from None
    deadline = time.perf_counter() + args.budget_s
    dfa = complete_to_dfa(determinize(lts, max_subsets=args.max_subsets, deadline=deadline))
    _write(args.out, write_dfa(dfa))
    print(f"states {dfa.num_states} alphabet {dfa.alphabet_size}", file=sys.stderr)
    return EXIT_OK


# -- bench -------------------------------------------------------------------


def cmd_bench(args) -> int:
    if args.suite:
        suite = Suite.from_json(Path(args.suite).read_text())
        if args.runs is not None:
            suite.runs = args.runs
        if args.timeout_s is not None:
            suite.timeout_s = args.timeout_s
    else:
        if not (args.family and args.sizes and args.algos):
            raise CliError("bench needs --suite or all of --family, --sizes, --algos")
        suite = Suite(
            [SuiteEntry(args.family, parse_sizes(args.sizes), args.algos.split(","))],
            DEFAULT_RUNS if args.runs is None else args.runs,
            DEFAULT_TIMEOUT_S if args.timeout_s is None else args.timeout_s,
        )
    if args.mem_budget_mb is not None:
        suite.mem_budget_mb = args.mem_budget_mb
    try:
        suite.validate()
    except ValueError as exc:
        raise CliError(str(exc)) from None

    def progress(rec):
        print(f"{rec.name} {rec.algo}: {rec.status}", file=sys.stderr)

    records = list(run_suite(suite, progress if args.verbose else None))
    if args.out and args.out != "-":
        with open(args.out, "w", newline="") as fh:
            write_csv(records, fh)
    else:
        write_csv(records, sys.stdout)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dfapar", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a benchmark DFA")
    g.add_argument("family", choices=sorted(list(FAMILIES)))
    g.add_argument("--word-index", type=int)
    g.add_argument("--n", type=int)
    g.add_argument("--k", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--accept-fraction", type=float, default=0.5)
    g.add_argument("-o", "--out")
    g.set_defaults(func=cmd_generate)

    m = sub.add_parser("minimize", help="minimise a DFA file and report timings")
    m.add_argument("input")
    m.add_argument("--algo", choices=list(ALGO_TAGS), default="naive")
    m.add_argument("--policy", choices=["min_index", "arbitrary"], default="min_index")
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--runs", type=int, default=DEFAULT_RUNS)
    m.add_argument("--timeout-s", type=float, default=DEFAULT_TIMEOUT_S)
    m.add_argument("--mem-budget-mb", type=int)
    m.add_argument("--emit", help="write the minimised DFA (or block listing) here")
    m.set_defaults(func=cmd_minimize)

    for name, func, help_ in (
        ("equiv", cmd_equiv, "check language equivalence"),
        ("include", cmd_include, "check L(A) is included in L(B)"),
    ):
        c = sub.add_parser(name, help=help_)
        c.add_argument("a")
        c.add_argument("b")
        c.add_argument("--stats", action="store_true")
        c.add_argument("--match-names", action="store_true", help="pair letters by name")
        c.add_argument("--timeout-s", type=float)
        c.add_argument("--mem-budget-mb", type=int)
        c.set_defaults(func=func)

    v = sub.add_parser("convert", help="determinise and complete an .aut file")
    v.add_argument("input")
    v.add_argument("-o", "--out")
    v.add_argument("--budget-s", type=float, default=600.0)
    v.add_argument("--max-subsets", type=int, default=10_000_000)
    v.set_defaults(func=cmd_convert)

    b = sub.add_parser("bench", help="run a benchmark suite and emit CSV")
    b.add_argument("--suite", help="JSON suite file")
    b.add_argument("--family", choices=sorted(list(FAMILIES)))
    b.add_argument("--sizes", help="e.g. 10-15 or 10,12")
    b.add_argument("--algos", help=f"comma list of {', '.join(list(ALGO_TAGS) + list(CHECK_ALGOS))}")
    b.add_argument("--runs", type=int)
    b.add_argument("--timeout-s", type=float)
    b.add_argument("--mem-budget-mb", type=int)
    b.add_argument("-o", "--out")
    b.add_argument("-v", "--verbose", action="store_true")
    b.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        _err(str(exc))
    except BudgetTimeout as exc:
        _err(f"timeout: {exc}")
    except ResourceError as exc:
        _err(f"resource budget exceeded: {exc}")
    except (DfaparError, ValueError) as exc:
        _err(str(exc))
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

"""Benchmark records and suite runner producing table-shaped CSV."""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

from . import config
from .automaton import Dfa
from .equivalence import check_equiv, check_inclusion
from .errors import BudgetTimeout, ResourceError
from .generators import (
    gen_bitsplitter,
    gen_bitsplitter_ext,
    gen_cycle,
    gen_fib,
    gen_memory_forgetful,
    gen_memory_perfect,
    gen_random_dfa,
)
from .minimize import ElectionPolicy, RefinementReport, minimize

CSV_HEADER = "name,n,k,algo,output_size,refine_iters,closure_iters,mean_ms,status"

# CLI algorithm names -> minimiser tags
ALGO_TAGS = {
    "moore": "moore",
    "trans": "trans",
    "naive": "naive_pr",
    "naive-fused": "naive_pr_fused",
    "sort": "sort_pr",
    "transpr": "trans_pr",
}
CHECK_ALGOS = ("equiv", "include")

OK, TIMEOUT, OOM = "ok", "timeout", "out-of-memory"

DEFAULT_RUNS = 5
DEFAULT_TIMEOUT_S = 300.0


@dataclass
class BenchRecord:
    name: str
    n: int
    k: int
    algo: str
    output_size: Optional[int] = None
    refine_iters: Optional[int] = None
    closure_iters: Optional[int] = None
    mean_ms: Optional[float] = None
    status: str = OK

    def csv_row(self) -> list[str]:
        def cell(v):
            if v is None:
                return ""
            if isinstance(v, float):
                return f"{v:.3f}"
            return str(v)

        return [
            self.name,
            str(self.n),
            str(self.k),
            self.algo,
            cell(self.output_size),
            cell(self.refine_iters),
            cell(self.closure_iters),
            cell(self.mean_ms),
            self.status,
        ]


def write_csv(records: Iterable[BenchRecord], out) -> None:
    out.write(CSV_HEADER + "\n")
    writer = csv.writer(out, lineterminator="\n")
    for rec in records:
        writer.writerow(rec.csv_row())


def records_to_csv(records: Iterable[BenchRecord]) -> str:
    buf = io.StringIO()
    write_csv(records, buf)
    return buf.getvalue()


def _timed(call: Callable[[Optional[float]], object], runs: int, timeout_s: float):
    """Run ``call(deadline)`` ``runs`` times; return (last result, mean ms)."""
    total = 0.0
    result = None
    for _ in range(runs):
        start = time.perf_counter()
        result = call(start + timeout_s)
        total += time.perf_counter() - start
    return result, 1000.0 * total / runs


def bench_minimize(
    dfa: Dfa,
    name: str,
    algo: str,
    *,
    runs: int = DEFAULT_RUNS,
    timeout_s: float = DEFAULT_TIMEOUT_S,
    policy: Optional[ElectionPolicy] = None,
    mem_budget_mb: Optional[int] = None,
) -> tuple[BenchRecord, Optional[RefinementReport]]:
    tag = ALGO_TAGS[algo]
    kwargs: dict = {}
    if tag in ("naive_pr", "trans_pr") and policy is not None:
        kwargs["policy"] = policy
    if tag == "trans":
        kwargs["max_pair_nodes"] = config.pair_node_cap(mem_budget_mb)
    rec = BenchRecord(name, dfa.num_states, dfa.alphabet_size, algo)
    try:
        report, mean_ms = _timed(
            lambda deadline: minimize(dfa, tag, deadline=deadline, **kwargs), runs, timeout_s
        )
    except BudgetTimeout:
        rec.status = TIMEOUT
        return rec, None
    except (ResourceError, MemoryError):
        rec.status = OOM
        return rec, None
    rec.output_size = report.output_size
    rec.refine_iters = report.refining_iterations
    rec.closure_iters = report.closure_iterations
    rec.mean_ms = mean_ms
    return rec, report


def bench_check(
    a: Dfa,
    b: Dfa,
    name: str,
    algo: str,
    *,
    runs: int = DEFAULT_RUNS,
    timeout_s: float = DEFAULT_TIMEOUT_S,
    mem_budget_mb: Optional[int] = None,
) -> BenchRecord:
    """Time an equivalence/inclusion check; output_size is the explored product size."""
    check = check_equiv if algo == "equiv" else check_inclusion
    cap = config.product_state_cap(mem_budget_mb)
    rec = BenchRecord(name, a.num_states, a.alphabet_size, algo)
    try:
        result, mean_ms = _timed(
            lambda deadline: check(a, b, max_states=cap, deadline=deadline), runs, timeout_s
        )
    except BudgetTimeout:
        rec.status = TIMEOUT
        return rec
    except (ResourceError, MemoryError):
        rec.status = OOM
        return rec
    rec.output_size = result.explored_states
    rec.refine_iters = result.levels
    rec.closure_iters = 0
    rec.mean_ms = mean_ms
    return rec


# family -> (row name, builder); sizes use the row numbering of published tables
FAMILIES: dict[str, tuple[Callable[[int], str], Callable[[int], Dfa]]] = {
    "fib": (lambda k: f"Fib{k}", lambda k: gen_fib(k + 1)),
    "bitsplit": (lambda n: f"B{n}", gen_bitsplitter),
    "bitsplit-ext": (lambda n: f"B{n}'", gen_bitsplitter_ext),
    "cycle": (lambda n: f"C{n}", gen_cycle),
    "memory-perfect": (lambda n: f"memory.{n}", gen_memory_perfect),
    "memory-forgetful": (lambda n: f"memory-forgetful.{n}", gen_memory_forgetful),
    "random": (lambda n: f"random.{n}", lambda n: gen_random_dfa(n, 3, 0.5, seed=n)),
}


def _check_pair(family: str, size: int, dfa: Dfa, algo: str) -> tuple[Dfa, Dfa]:
    if algo == "include" and family in ("memory-perfect", "memory-forgetful"):
        return gen_memory_forgetful(size), gen_memory_perfect(size)
    return dfa, dfa


def parse_sizes(spec) -> list[int]:
    """Accept a list of ints, "10-15", or "10,12,14"."""
    if isinstance(spec, (list, tuple)):
        return [int(x) for x in spec]
    out: list[int] = []
    for part in str(spec).split(","):
        part = part.strip()
        if "-" in part:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


@dataclass
class SuiteEntry:
    family: str
    sizes: list[int]
    algos: list[str]


@dataclass
class Suite:
    entries: list[SuiteEntry]
    runs: int = DEFAULT_RUNS
    timeout_s: float = DEFAULT_TIMEOUT_S
    mem_budget_mb: Optional[int] = None

    @classmethod
    def from_json(cls, text: str) -> "Suite":
        """Parse a suite description.

        Example::

            {"runs": 5, "timeout_s": 300,
             "entries": [{"family": "bitsplit", "sizes": "10-15",
                          "algos": ["naive", "sort", "transpr"]}]}
        """
        raw = json.loads(text)
        entries = [
            SuiteEntry(e["family"], parse_sizes(e["sizes"]), list(e["algos"]))
            for e in raw["entries"]
        ]
        return cls(
            entries,
            int(raw.get("runs", DEFAULT_RUNS)),
            float(raw.get("timeout_s", DEFAULT_TIMEOUT_S)),
            raw.get("mem_budget_mb"),
        )

    def validate(self) -> None:
        for e in self.entries:
            if e.family not in FAMILIES:
                raise ValueError(f"unknown family {e.family!r}")
            for algo in e.algos:
                if algo not in ALGO_TAGS and algo not in CHECK_ALGOS:
                    raise ValueError(f"unknown algorithm {algo!r}")
                if algo in CHECK_ALGOS and e.family == "bitsplit":
                    raise ValueError(f"{algo} needs an initial state; bitsplit has none")


def run_suite(suite: Suite, progress: Optional[Callable[[BenchRecord], None]] = None):
    """Yield one record per (instance, algorithm); failures become status rows."""
    suite.validate()
    for entry in suite.entries:
        naming, build = FAMILIES[entry.family]
        for size in entry.sizes:
            name = naming(size)
            try:
                dfa = build(size)
            except (ResourceError, MemoryError):
                for algo in entry.algos:
                    rec = BenchRecord(name, 0, 0, algo, status=OOM)
                    if progress:
                        progress(rec)
                    yield rec
                continue
            for algo in entry.algos:
                if algo in CHECK_ALGOS:
                    a, b = _check_pair(entry.family, size, dfa, algo)
                    rec = bench_check(
                        a, b, name, algo, runs=suite.runs, timeout_s=suite.timeout_s,
                        mem_budget_mb=suite.mem_budget_mb,
                    )
                else:
                    rec, _ = bench_minimize(
                        dfa, name, algo, runs=suite.runs, timeout_s=suite.timeout_s,
                        mem_budget_mb=suite.mem_budget_mb,
                    )
                if progress:
                    progress(rec)
                yield rec

"""Parallel-style DFA minimisers.

Every minimiser returns a :class:`RefinementReport` whose partition groups
language-equivalent states. The refinement loops follow a bulk-synchronous
contract: within one iteration all comparisons read the partition as it was
when the iteration began, and only the leader-election slots are raced on.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

import numpy as np

from . import config
from ._backend import kernels as _default_kernels
from .automaton import (
    STATE_DTYPE,
    ApartMatrix,
    Dfa,
    Partition,
    ensure_valid,
    partition_from_apart,
)
from .errors import BudgetTimeout, ResourceError

ALGORITHMS = ("moore", "trans", "naive_pr", "naive_pr_fused", "sort_pr", "trans_pr")

Observer = Callable[[Partition], None]


@dataclass(frozen=True)
class ElectionPolicy:
    """Which concurrent writer wins a leader election.

    ``min_index`` always picks the lowest candidate state. ``arbitrary``
    picks a uniformly random candidate per block and iteration, reproducibly
    for a given seed.
    """

    kind: str = "min_index"
    seed: Optional[int] = None

    @classmethod
    def min_index(cls) -> "ElectionPolicy":
        return cls("min_index")

    @classmethod
    def arbitrary(cls, seed: int) -> "ElectionPolicy":
        return cls("arbitrary", int(seed))

    def priorities(self, n: int) -> Iterator[np.ndarray]:
        if self.kind == "min_index":
            fixed = np.arange(n, dtype=np.int64)
            while True:
                yield fixed
        elif self.kind == "arbitrary":
            rng = np.random.default_rng(self.seed)
            while True:
                yield rng.permutation(n).astype(np.int64)
        else:
            raise ValueError(f"unknown election policy {self.kind!r}")


@dataclass(frozen=True)
class RefinementReport:
    partition: Partition
    refining_iterations: int
    algorithm: str
    closure_iterations: int = 0
    apart: Optional[ApartMatrix] = None

    @property
    def output_size(self) -> int:
        return self.partition.num_blocks


def _check_deadline(deadline: Optional[float]) -> None:
    if deadline is not None and time.perf_counter() > deadline:
        raise BudgetTimeout("deadline passed during minimisation")


def _trivial(dfa: Dfa, algorithm: str) -> Optional[RefinementReport]:
    acc = dfa.accepting
    if acc.all() or not acc.any():
        return RefinementReport(Partition.single_block(dfa.num_states), 0, algorithm)
    return None


def moore_minimize(dfa: Dfa, *, deadline: Optional[float] = None) -> RefinementReport:
    """Sequential Moore refinement; the reference every other minimiser must match."""
    ensure_valid(dfa)
    n = dfa.num_states
    delta = dfa.delta.astype(np.int64)
    labels = dfa.accepting.astype(np.int64)
    count = len(np.unique(labels))
    rounds = 0
    while n:
        _check_deadline(deadline)
        # fold (own block, successor blocks...) into dense keys one letter at a time
        key, new_count = labels, count
        for a in range(dfa.alphabet_size):
            distinct, inverse = np.unique(key * count + labels[delta[a]], return_inverse=True)
            key, new_count = inverse.reshape(-1), len(distinct)
        if new_count == count:
            break
        labels, count = key, new_count
        rounds += 1
    return RefinementReport(Partition.from_labels(labels), rounds, "moore")


def _leader_refinement(
    dfa: Dfa,
    step,
    algorithm: str,
    priorities: Optional[Iterator[np.ndarray]],
    deadline: Optional[float],
    observer: Optional[Observer],
) -> RefinementReport:
    ensure_valid(dfa)
    trivial = _trivial(dfa, algorithm)
    if trivial is not None:
        return trivial
    n = dfa.num_states
    acc = dfa.accepting
    q_f = int(np.argmax(acc))
    q_n = int(np.argmax(~acc))
    block = np.where(acc, q_f, q_n).astype(STATE_DTYPE)
    new_leader = np.full(n, -1, dtype=STATE_DTYPE)
    delta = np.ascontiguousarray(dfa.delta, dtype=STATE_DTYPE)
    rounds = 0
    while True:
        _check_deadline(deadline)
        if priorities is None:
            moved = step(delta, block, new_leader)
        else:
            moved = step(delta, block, next(priorities), new_leader)
        if not moved:
            break
        rounds += 1
        if rounds > n - 1:
            raise RuntimeError(f"{algorithm} exceeded n-1 refining iterations")
        if observer is not None:
            observer(Partition.from_labels(block))
    return RefinementReport(Partition.from_labels(block), rounds, algorithm)


def naive_pr(
    dfa: Dfa,
    policy: Optional[ElectionPolicy] = None,
    *,
    deadline: Optional[float] = None,
    observer: Optional[Observer] = None,
    kernels=None,
) -> RefinementReport:
    """Leader-election partition refinement.

    Each block is named by one of its states. In every iteration the states
    that disagree with their leader on some letter split off together under
    a freshly elected leader, so a block splits into at most two pieces.
    """
    policy = policy or ElectionPolicy.min_index()
    k = kernels or _default_kernels
    return _leader_refinement(
        dfa, k.naive_step, "naive_pr", policy.priorities(dfa.num_states), deadline, observer
    )


def naive_pr_fused(
    dfa: Dfa,
    *,
    deadline: Optional[float] = None,
    observer: Optional[Observer] = None,
    kernels=None,
) -> RefinementReport:
    """Leader-election refinement with election and reassignment in one pass.

    The first differing state to claim a block's election slot becomes the
    new leader; slots are cleared after every iteration.
    """
    k = kernels or _default_kernels
    return _leader_refinement(dfa, k.fused_step, "naive_pr_fused", None, deadline, observer)


def sort_pr(
    dfa: Dfa, *, deadline: Optional[float] = None, observer: Optional[Observer] = None
) -> RefinementReport:
    """Signature-sorting refinement; a block may split into many pieces per iteration."""
    ensure_valid(dfa)
    n = dfa.num_states
    block = np.where(dfa.accepting, 0, 1).astype(np.int64)
    num_blocks = len(np.unique(block))
    delta = dfa.delta.astype(np.int64)
    k = dfa.alphabet_size
    rounds = 0
    while n:
        _check_deadline(deadline)
        signature = block[delta]
        # lexsort's last key is primary: block first, then letters in ascending order
        order = np.lexsort(tuple(signature[a] for a in range(k - 1, -1, -1)) + (block,))
        sb = block[order]
        ss = signature[:, order]
        boundary = np.empty(n, dtype=np.int64)
        boundary[0] = 0
        boundary[1:] = (sb[1:] != sb[:-1]) | (ss[:, 1:] != ss[:, :-1]).any(axis=0)
        new_block = np.cumsum(boundary)
        block = np.empty(n, dtype=np.int64)
        block[order] = new_block
        count = int(new_block[-1]) + 1
        if count == num_blocks:
            break
        num_blocks = count
        rounds += 1
        if observer is not None:
            observer(Partition.from_labels(block))
    return RefinementReport(Partition.from_labels(block), rounds, "sort_pr")


def closure_levels(n: int) -> int:
    """floor(log2 n), and 0 for n <= 1."""
    return max(n, 1).bit_length() - 1


def build_transitive_alphabet(
    dfa: Dfa, *, max_transitions: int = config.MAX_CLOSURE_TRANSITIONS
) -> Dfa:
    """Add letters a^(2^i) for every letter a, computed by pointer doubling.

    Letters are ordered a0^1, a0^2, a0^4, ..., a1^1, ...
    """
    ensure_valid(dfa)
    n, k = dfa.num_states, dfa.alphabet_size
    levels = closure_levels(n)
    size = k * (levels + 1)
    if size * n > max_transitions:
        raise ResourceError(
            f"closure alphabet needs {size} letters x {n} states = {size * n} transitions",
            required=size * n,
            limit=max_transitions,
        )
    rows = []
    names = []
    for a in range(k):
        cur = dfa.delta[a]
        base = dfa.letter_name(a)
        for i in range(levels + 1):
            if i:
                cur = cur[cur]
            rows.append(cur)
            names.append(f"{base}^{2**i}")
    delta = np.vstack(rows) if rows else np.zeros((0, n), dtype=STATE_DTYPE)
    return Dfa(delta, dfa.accepting, dfa.initial, tuple(names))


def trans_pr(
    dfa: Dfa,
    policy: Optional[ElectionPolicy] = None,
    *,
    deadline: Optional[float] = None,
    observer: Optional[Observer] = None,
    kernels=None,
    max_transitions: int = config.MAX_CLOSURE_TRANSITIONS,
) -> RefinementReport:
    """naive_pr on the automaton extended with power-of-two letter jumps."""
    closed = build_transitive_alphabet(dfa, max_transitions=max_transitions)
    inner = naive_pr(closed, policy, deadline=deadline, observer=observer, kernels=kernels)
    return RefinementReport(
        inner.partition,
        inner.refining_iterations,
        "trans_pr",
        closure_iterations=closure_levels(dfa.num_states),
    )


def _initial_reach(dfa: Dfa) -> np.ndarray:
    n = dfa.num_states
    v = n * n
    words = (v + 63) // 64
    reach = np.zeros((v, words), dtype=np.uint64)
    src = np.arange(v, dtype=np.int64)
    d = dfa.delta.astype(np.int64)
    for a in range(dfa.alphabet_size):
        tgt = (d[a][:, None] * n + d[a][None, :]).reshape(-1)
        np.bitwise_or.at(
            reach, (src, tgt >> 6), np.left_shift(np.uint64(1), (tgt & 63).astype(np.uint64))
        )
    return reach


def trans_minimize(
    dfa: Dfa,
    max_pair_nodes: int = config.MAX_PAIR_NODES,
    *,
    deadline: Optional[float] = None,
    kernels=None,
) -> RefinementReport:
    """Pair-graph minimisation via transitive closure of the reachability matrix.

    Nodes are state pairs; a pair is apart when it initially disagrees on
    acceptance or can reach such a pair. Each pass squares the packed
    reachability matrix and propagates apartness; passes stop once no new
    pair becomes apart. ``closure_iterations`` counts the passes that
    marked new pairs.
    """
    ensure_valid(dfa)
    k = kernels or _default_kernels
    n = dfa.num_states
    v = n * n
    if v > max_pair_nodes:
        raise ResourceError(
            f"trans needs {v} pair nodes and {v * v // 8} bytes of reachability "
            f"(limit {max_pair_nodes} pair nodes)",
            required=v,
            limit=max_pair_nodes,
        )
    reach = _initial_reach(dfa)
    acc = dfa.accepting
    apart = (acc[:, None] != acc[None, :]).reshape(-1).astype(np.uint8)
    passes = 0
    while v:
        _check_deadline(deadline)
        _, fresh = k.closure_pass(reach, apart)
        if not fresh:
            break
        passes += 1
    matrix = ApartMatrix(apart.reshape(n, n).astype(bool))
    return RefinementReport(
        partition_from_apart(matrix), passes, "trans", closure_iterations=passes, apart=matrix
    )


def minimize(dfa: Dfa, algorithm: str = "naive_pr", **kwargs) -> RefinementReport:
    """Dispatch by algorithm tag."""
    table = {
        "moore": moore_minimize,
        "trans": trans_minimize,
        "naive_pr": naive_pr,
        "naive_pr_fused": naive_pr_fused,
        "sort_pr": sort_pr,
        "trans_pr": trans_pr,
    }
    try:
        fn = table[algorithm]
    except KeyError:
        raise ValueError(f"unknown algorithm {algorithm!r}; choose from {ALGORITHMS}") from None
    return fn(dfa, **kwargs)

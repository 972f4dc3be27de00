"""Benchmark DFA families and a random DFA generator.

Bitstring states are encoded as integers, most significant bit first: the
string ``b_{n-1} ... b_0`` is the state id ``sum(b_i << i)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .automaton import STATE_DTYPE, Dfa
from .errors import ResourceError

MAX_STATES = 2**30


def _guard(n: int, what: str, limit: int = MAX_STATES) -> None:
    if n > limit:
        raise ResourceError(f"{what} needs {n} states (limit {limit})", required=n, limit=limit)


@dataclass(frozen=True)
class FibWord:
    index: int
    bits: str

    def __len__(self):
        return len(self.bits)


def fib_word(m: int, max_length: int = MAX_STATES) -> FibWord:
    """w_0 = "1", w_1 = "0", w_{i+1} = w_i w_{i-1}."""
    if m < 0:
        raise ValueError("word index must be >= 0")
    if m == 0:
        return FibWord(0, "1")
    prev, cur = "1", "0"
    for i in range(1, m):
        _guard(len(cur) + len(prev), f"fib word {i + 1}", max_length)
        prev, cur = cur, cur + prev
    return FibWord(m, cur)


def gen_fib(m: int) -> Dfa:
    """Unary cyclic DFA accepting at the 1-positions of the Fibonacci word w_m."""
    if m < 2:
        raise ValueError("gen_fib needs word index m >= 2")
    word = fib_word(m)
    n = len(word)
    succ = ((np.arange(n, dtype=np.int64) + 1) % n)[None, :]
    accepting = np.frombuffer(word.bits.encode("ascii"), dtype=np.uint8) == ord("1")
    return Dfa(succ, accepting, 0, ("a",))


def gen_bitsplitter(n: int) -> Dfa:
    """Bit-splitter over 2^n bitstrings with letters a_1..a_{n-1} and no initial state.

    Letter a_m looks at the length-(m+1) suffix b sigma: when the leading bit
    of sigma is 1 it moves to (not b) 0^m, otherwise it is a self-loop.
    Accepting states are those whose leading bit is 1.
    """
    if n < 1:
        raise ValueError("gen_bitsplitter needs n >= 1")
    _guard(2**n, f"bit-splitter {n}")
    q = np.arange(2**n, dtype=np.int64)
    rows = []
    for m in range(1, n):
        b = (q >> m) & 1
        lead = (q >> (m - 1)) & 1
        reset = (q & ~((1 << (m + 1)) - 1)) | ((1 - b) << m)
        rows.append(np.where(lead == 1, reset, q))
    delta = np.vstack(rows) if rows else np.zeros((0, 2**n), dtype=np.int64)
    accepting = ((q >> (n - 1)) & 1).astype(bool)
    names = tuple(f"a{m}" for m in range(1, n))
    return Dfa(delta, accepting, None, names)


def bitsplitter_ext_letters(n: int) -> tuple[str, ...]:
    return ("r",) + tuple(f"b{i}" for i in range(1, n + 1)) + tuple(f"a{m}" for m in range(1, n))


def gen_bitsplitter_ext(n: int) -> Dfa:
    """Bit-splitter extended with an initialisation phase and initial state.

    States are pairs (c, sigma); the id is ``c * 2^n + sigma``. While c = 0
    letter b_i sets bit i-1 of sigma from 0 to 1; r switches c to 1; while
    c = 1 the a-letters act as in :func:`gen_bitsplitter`. Accepting states
    have c = 1 and leading bit 1. Letters: r, b_1..b_n, a_1..a_{n-1}.
    """
    if n < 1:
        raise ValueError("gen_bitsplitter_ext needs n >= 1")
    _guard(2 ** (n + 1), f"extended bit-splitter {n}")
    size = 2**n
    q = np.arange(2 * size, dtype=np.int64)
    c = q >> n
    sigma = q & (size - 1)
    rows = [size | sigma]
    for i in range(1, n + 1):
        bit = 1 << (i - 1)
        rows.append(np.where(c == 0, q | bit, q))
    for m in range(1, n):
        b = (sigma >> m) & 1
        lead = (sigma >> (m - 1)) & 1
        reset = (q & ~((1 << (m + 1)) - 1)) | ((1 - b) << m)
        rows.append(np.where((c == 1) & (lead == 1), reset, q))
    accepting = (c == 1) & (((sigma >> (n - 1)) & 1) == 1)
    return Dfa(np.vstack(rows), accepting, 0, bitsplitter_ext_letters(n))


def cycle_fib(n: int) -> int:
    """fib(1) = 1, fib(2) = 2, fib(n) = fib(n-1) + fib(n-2); fib(30) = 1,346,269."""
    if n < 1:
        raise ValueError("cycle_fib needs n >= 1")
    a, b = 1, 2
    for _ in range(n - 1):
        a, b = b, a + b
    return a


def gen_cycle(n: int) -> Dfa:
    """Cycle DFA: letter a_j advances j*100 + 1 positions modulo fib(n)."""
    if n < 2:
        raise ValueError("gen_cycle needs n >= 2")
    size = cycle_fib(n)
    _guard(size, f"cycle {n}")
    m = max(math.ceil(math.log10(size)), 1)
    q = np.arange(size, dtype=np.int64)
    delta = np.vstack([(q + j * 100 + 1) % size for j in range(m + 1)])
    accepting = np.zeros(size, dtype=bool)
    accepting[cycle_fib(n - 1)] = True
    return Dfa(delta, accepting, 0, tuple(f"a{j}" for j in range(m + 1)))


MEMORY_LETTERS = ("f", "t")


def _memory_shift(n: int, q: np.ndarray, bit: int) -> np.ndarray:
    return ((q << 1) | bit) & ((1 << n) - 1)


def gen_memory_perfect(n: int) -> Dfa:
    """Remember the last n bits read; accept when the oldest remembered bit is 1.

    The new bit becomes b_0, older bits shift up and b_{n-1} is discarded.
    """
    if n < 1:
        raise ValueError("gen_memory_perfect needs n >= 1")
    _guard(2**n, f"memory {n}")
    q = np.arange(2**n, dtype=np.int64)
    delta = np.vstack([_memory_shift(n, q, 0), _memory_shift(n, q, 1)])
    accepting = ((q >> (n - 1)) & 1).astype(bool)
    return Dfa(delta, accepting, 0, MEMORY_LETTERS)


def gen_memory_forgetful(n: int) -> Dfa:
    """Like the perfect memory, but states whose two oldest bits read 10 forget.

    Such a state moves as if it were 0^n. Acceptance is unchanged, so the
    language is a subset of the perfect memory's.
    """
    if n < 2:
        raise ValueError("gen_memory_forgetful needs n >= 2")
    _guard(2**n, f"memory {n}")
    q = np.arange(2**n, dtype=np.int64)
    forget = (((q >> (n - 1)) & 1) == 1) & (((q >> (n - 2)) & 1) == 0)
    source = np.where(forget, 0, q)
    delta = np.vstack([_memory_shift(n, source, 0), _memory_shift(n, source, 1)])
    accepting = ((q >> (n - 1)) & 1).astype(bool)
    return Dfa(delta, accepting, 0, MEMORY_LETTERS)


def gen_memory_forgetful_post(n: int) -> Dfa:
    """Alternative reading where the reset applies to the target of a move.

    Kept for calibration: its inclusion products do not match the
    reference counts, so it is not the family used elsewhere.
    """
    if n < 2:
        raise ValueError("gen_memory_forgetful_post needs n >= 2")
    q = np.arange(2**n, dtype=np.int64)
    rows = []
    for bit in (0, 1):
        t = _memory_shift(n, q, bit)
        forget = (((t >> (n - 1)) & 1) == 1) & (((t >> (n - 2)) & 1) == 0)
        rows.append(np.where(forget, 0, t))
    accepting = ((q >> (n - 1)) & 1).astype(bool)
    return Dfa(np.vstack(rows), accepting, 0, MEMORY_LETTERS)


def gen_random_dfa(n: int, k: int, accept_fraction: float = 0.5, seed: int = 0) -> Dfa:
    if n < 1 or k < 1:
        raise ValueError("gen_random_dfa needs n >= 1 and k >= 1")
    if not 0.0 <= accept_fraction <= 1.0:
        raise ValueError("accept_fraction must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    delta = rng.integers(0, n, size=(k, n), dtype=np.int64).astype(STATE_DTYPE)
    accepting = rng.random(n) < accept_fraction
    return Dfa(delta, accepting, 0)

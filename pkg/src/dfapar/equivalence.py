"""Language equivalence and inclusion by exploring the synchronous product.

This is the Hopcroft-Karp check without union-find: the relation is a plain
visited set of state pairs, filled breadth-first one level at a time, so the
first failing pair found yields a shortest witness word.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import config
from ._backend import kernels as _default_kernels
from .automaton import Dfa, ensure_valid
from .errors import AlphabetMismatchError, BudgetTimeout, MissingInitialError, ResourceError

EQUIVALENT = "equivalent"
INCLUDED = "included"
COUNTEREXAMPLE = "counterexample"

_TESTS = {"equiv": 0, "inclusion": 1}


@dataclass(frozen=True)
class ProductResult:
    verdict: str
    explored_states: int
    levels: int
    word: Optional[tuple[int, ...]] = None
    letter_names: Optional[tuple[str, ...]] = field(default=None, repr=False)

    @property
    def holds(self) -> bool:
        return self.verdict != COUNTEREXAMPLE

    def word_text(self) -> str:
        """Witness as space-separated letter names (ids when unnamed); '' for epsilon."""
        if self.word is None:
            return ""
        if self.letter_names is None:
            return " ".join(str(a) for a in self.word)
        return " ".join(self.letter_names[a] for a in self.word)


def _align(a: Dfa, b: Dfa, match_names: bool) -> Dfa:
    ensure_valid(a)
    ensure_valid(b)
    for name, d in (("first", a), ("second", b)):
        if d.initial is None:
            raise MissingInitialError(f"{name} DFA has no initial state")
    if not match_names:
        if a.alphabet_size != b.alphabet_size:
            raise AlphabetMismatchError(
                f"alphabet sizes differ: {a.alphabet_size} vs {b.alphabet_size}"
            )
        return b
    if a.letter_names is None or b.letter_names is None:
        raise AlphabetMismatchError("name-based matching needs letter names on both DFAs")
    if sorted(a.letter_names) != sorted(b.letter_names) or len(set(a.letter_names)) != len(
        a.letter_names
    ):
        raise AlphabetMismatchError("letter name sets differ")
    position = {name: i for i, name in enumerate(b.letter_names)}
    perm = [position[name] for name in a.letter_names]
    return Dfa(b.delta[perm], b.accepting, b.initial, a.letter_names)


def _witness(parent: np.ndarray, letter: np.ndarray, index: int) -> tuple[int, ...]:
    word = []
    while parent[index] >= 0:
        word.append(int(letter[index]))
        index = int(parent[index])
    return tuple(reversed(word))


def explore_product(
    a: Dfa,
    b: Dfa,
    mode: str = "equiv",
    *,
    test: Optional[str] = None,
    match_names: bool = False,
    max_states: Optional[int] = None,
    deadline: Optional[float] = None,
    kernels=None,
) -> ProductResult:
    """Explore the product of ``a`` and ``b``.

    ``mode`` is ``equiv`` or ``inclusion`` (stop at the first failing pair)
    or ``full`` (explore every reachable pair; ``test`` picks which failure
    condition decides the verdict, default ``equiv``).
    """
    if mode not in ("equiv", "inclusion", "full"):
        raise ValueError(f"unknown mode {mode!r}")
    test = test or (mode if mode != "full" else "equiv")
    if test not in _TESTS:
        raise ValueError(f"unknown test {test!r}")
    b = _align(a, b, match_names)
    k = kernels or _default_kernels
    cap = config.product_state_cap() if max_states is None else max_states
    if deadline is not None and time.perf_counter() > deadline:
        raise BudgetTimeout("deadline passed before exploration")
    try:
        fail, pa, pb, parent, letter, levels = k.product_bfs(
            np.ascontiguousarray(a.delta),
            a.accepting.view(np.uint8),
            a.initial,
            np.ascontiguousarray(b.delta),
            b.accepting.view(np.uint8),
            b.initial,
            _TESTS[test],
            mode != "full",
            cap,
            deadline,
        )
    except TimeoutError:
        raise BudgetTimeout("deadline passed during product exploration") from None
    except MemoryError as exc:
        raise ResourceError(
            f"product exploration exceeded {cap} states", required=cap + 1, limit=cap
        ) from exc
    if fail >= 0:
        return ProductResult(
            COUNTEREXAMPLE, len(pa), levels, _witness(parent, letter, fail), a.letter_names
        )
    verdict = EQUIVALENT if test == "equiv" else INCLUDED
    return ProductResult(verdict, len(pa), levels, None, a.letter_names)


def check_equiv(a: Dfa, b: Dfa, **kwargs) -> ProductResult:
    """Decide L(a) = L(b); a counterexample is a shortest word accepted by exactly one side."""
    return explore_product(a, b, "equiv", **kwargs)


def check_inclusion(a: Dfa, b: Dfa, **kwargs) -> ProductResult:
    """Decide L(a) ⊆ L(b); a counterexample is a shortest word in L(a) but not L(b)."""
    return explore_product(a, b, "inclusion", **kwargs)

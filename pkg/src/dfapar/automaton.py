"""Automaton and partition data model.

States and letters are dense integer ids. The transition function is stored
letter-major: ``delta[a, q]`` is the ``a``-successor of ``q``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence
from urllib.parse import quote, unquote

import numpy as np

from .errors import (
    DfaFormatError,
    InvalidPartitionError,
    MissingInitialError,
    NonTransitiveApartError,
)

STATE_DTYPE = np.int32
NO_STATE = -1


def _as_delta(delta, num_states: int, alphabet_size: int) -> np.ndarray:
    arr = np.asarray(delta, dtype=np.int64)
    if arr.size == 0:
        arr = arr.reshape(alphabet_size, num_states)
    if arr.ndim != 2 or arr.shape != (alphabet_size, num_states):
        raise ValueError(
            f"delta must have shape ({alphabet_size}, {num_states}), got {arr.shape}"
        )
    return arr.astype(STATE_DTYPE)


@dataclass(frozen=True, eq=False)
class Dfa:
    """A complete deterministic automaton over states ``0..n-1``.

    ``initial`` may be ``None``; such automata can be minimised but not
    compared against other automata.
    """

    delta: np.ndarray
    accepting: np.ndarray
    initial: Optional[int] = None
    letter_names: Optional[tuple[str, ...]] = None

    @classmethod
    def build(
        cls,
        delta,
        accepting,
        initial: Optional[int] = None,
        letter_names: Optional[Sequence[str]] = None,
        num_states: Optional[int] = None,
    ) -> "Dfa":
        """Coerce plain Python data into a Dfa.

        ``accepting`` is either a boolean mask of length n or an iterable of
        accepting state ids (in which case ``num_states`` or a non-empty
        ``delta`` is needed to fix n).
        """
        acc = np.asarray(accepting)
        if acc.dtype == bool:
            n = acc.shape[0]
            mask = acc.copy()
        else:
            raw = np.asarray(delta)
            if num_states is not None:
                n = num_states
            elif raw.ndim == 2 and raw.shape[0] > 0:
                n = raw.shape[1]
            else:
                raise ValueError("cannot infer num_states")
            mask = np.zeros(n, dtype=bool)
            mask[acc.astype(np.int64)] = True
        raw = np.asarray(delta)
        k = raw.shape[0] if raw.ndim == 2 else 0
        names = None if letter_names is None else tuple(str(x) for x in letter_names)
        return cls(
            _as_delta(raw, n, k),
            mask,
            None if initial is None else int(initial),
            names,
        )

    def __post_init__(self):
        delta = np.array(self.delta, dtype=STATE_DTYPE)
        accepting = np.array(self.accepting, dtype=bool).reshape(-1)
        if delta.size == 0 and delta.ndim != 2:
            delta = delta.reshape(0, accepting.shape[0])
        if delta.ndim != 2 or delta.shape[1] != accepting.shape[0]:
            raise ValueError(
                f"delta shape {delta.shape} does not match {accepting.shape[0]} states"
            )
        delta.setflags(write=False)
        accepting.setflags(write=False)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "accepting", accepting)
        if self.letter_names is not None:
            names = tuple(self.letter_names)
            # a zero-letter alphabet has nothing to name; keep one representation
            object.__setattr__(self, "letter_names", names if names else None)

    @property
    def num_states(self) -> int:
        return int(self.accepting.shape[0])

    @property
    def alphabet_size(self) -> int:
        return int(self.delta.shape[0])

    def step(self, q: int, a: int) -> int:
        return int(self.delta[a, q])

    def run(self, word: Sequence[int], start: Optional[int] = None) -> int:
        """Return the state reached from ``start`` (default: initial) on ``word``."""
        q = self.initial if start is None else start
        if q is None:
            raise MissingInitialError("run() needs an initial state")
        for a in word:
            q = int(self.delta[a, q])
        return q

    def accepts(self, word: Sequence[int]) -> bool:
        return bool(self.accepting[self.run(word)])

    def letter_name(self, a: int) -> str:
        if self.letter_names is None:
            return str(a)
        return self.letter_names[a]

    def __eq__(self, other):
        if not isinstance(other, Dfa):
            return NotImplemented
        return (
            self.initial == other.initial
            and self.letter_names == other.letter_names
            and self.delta.shape == other.delta.shape
            and np.array_equal(self.delta, other.delta)
            and np.array_equal(self.accepting, other.accepting)
        )

    __hash__ = None

    def __repr__(self):
        return (
            f"Dfa(num_states={self.num_states}, alphabet_size={self.alphabet_size}, "
            f"initial={self.initial}, accepting={int(self.accepting.sum())})"
        )


@dataclass(frozen=True, eq=False)
class Partition:
    """A partition of states, stored as a block id per state.

    Block ids are always normalised by first occurrence, so two partitions
    are equal exactly when their block arrays are equal.
    """

    block_of: np.ndarray
    num_blocks: int = field(default=0)

    @classmethod
    def from_labels(cls, labels) -> "Partition":
        labels = np.asarray(labels)
        n = labels.shape[0]
        if n == 0:
            return cls(np.zeros(0, dtype=STATE_DTYPE), 0)
        uniq, first, inverse = np.unique(labels, return_index=True, return_inverse=True)
        rank = np.empty(uniq.shape[0], dtype=np.int64)
        rank[np.argsort(first, kind="stable")] = np.arange(uniq.shape[0])
        block = rank[inverse.reshape(-1)].astype(STATE_DTYPE)
        return cls(block, int(uniq.shape[0]))

    @classmethod
    def identity(cls, n: int) -> "Partition":
        return cls(np.arange(n, dtype=STATE_DTYPE), n)

    @classmethod
    def single_block(cls, n: int) -> "Partition":
        return cls(np.zeros(n, dtype=STATE_DTYPE), 1 if n else 0)

    def __post_init__(self):
        block = np.array(self.block_of, dtype=STATE_DTYPE)
        block.setflags(write=False)
        object.__setattr__(self, "block_of", block)

    @property
    def num_states(self) -> int:
        return int(self.block_of.shape[0])

    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_blocks)]
        for q, b in enumerate(self.block_of.tolist()):
            out[b].append(q)
        return out

    def refines(self, coarser: "Partition") -> bool:
        """True if every block of ``self`` lies inside a block of ``coarser``."""
        if self.num_states != coarser.num_states:
            return False
        first = np.full(self.num_blocks, -1, dtype=np.int64)
        seen_at = np.unique(self.block_of, return_index=True)[1]
        first[self.block_of[seen_at]] = coarser.block_of[seen_at]
        return bool(np.all(first[self.block_of] == coarser.block_of))

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return np.array_equal(self.block_of, other.block_of)

    __hash__ = None

    def __repr__(self):
        return f"Partition(num_states={self.num_states}, num_blocks={self.num_blocks})"


@dataclass(frozen=True, eq=False)
class ApartMatrix:
    """Symmetric boolean matrix marking pairs of inequivalent states."""

    apart: np.ndarray

    @property
    def n(self) -> int:
        return int(self.apart.shape[0])

    def __getitem__(self, pair) -> bool:
        q, r = pair
        return bool(self.apart[q, r])

    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.apart, self.apart.T))

    def is_irreflexive(self) -> bool:
        return not bool(np.diagonal(self.apart).any())

    def complement_is_transitive(self) -> bool:
        eq = ~self.apart
        as_int = eq.astype(np.int32)
        two_step = (as_int @ as_int) > 0
        return not bool((two_step & ~eq).any())


@dataclass(frozen=True)
class Lts:
    """Labelled transition system; transitions may be nondeterministic."""

    num_states: int
    initial: int
    transitions: tuple[tuple[int, str, int], ...]

    def labels(self) -> list[str]:
        """Labels in order of first appearance."""
        return list(dict.fromkeys(lbl for _, lbl, _ in self.transitions))


def validate(dfa: Dfa) -> list[str]:
    """List every invariant violation; an empty list means the DFA is well formed."""
    problems: list[str] = []
    n, k = dfa.num_states, dfa.alphabet_size
    if dfa.delta.shape != (k, n):
        problems.append(f"delta: shape {dfa.delta.shape} != ({k}, {n})")
    else:
        bad = np.argwhere((dfa.delta < 0) | (dfa.delta >= n))
        for a, q in bad.tolist():
            problems.append(
                f"delta[{a}][{q}]: successor {int(dfa.delta[a, q])} out of range [0, {n - 1}]"
            )
    if dfa.accepting.dtype != bool:
        problems.append(f"accepting: dtype {dfa.accepting.dtype} is not bool")
    if dfa.initial is not None and not 0 <= dfa.initial < n:
        problems.append(f"initial: {dfa.initial} out of range [0, {n - 1}]")
    if dfa.letter_names is not None and len(dfa.letter_names) != k:
        problems.append(f"letter_names: {len(dfa.letter_names)} entries for {k} letters")
    return problems


def ensure_valid(dfa: Dfa) -> None:
    """Raise ValueError listing the violations if ``dfa`` is malformed."""
    problems = validate(dfa)
    if problems:
        raise ValueError("malformed DFA: " + "; ".join(problems[:5]))


def quotient(dfa: Dfa, p: Partition) -> Dfa:
    """Collapse each block of ``p`` into one state.

    Raises InvalidPartitionError if ``p`` mixes accepting and rejecting
    states or is not closed under the transition function.
    """
    n = dfa.num_states
    if p.num_states != n:
        raise InvalidPartitionError(f"partition covers {p.num_states} states, DFA has {n}")
    block = p.block_of.astype(np.int64)
    nb = p.num_blocks
    rep = np.full(nb, -1, dtype=np.int64)
    # first member of each block is its representative
    rep[block[::-1]] = np.arange(n - 1, -1, -1)
    mixed = dfa.accepting != dfa.accepting[rep[block]]
    if mixed.any():
        q = int(np.argmax(mixed))
        raise InvalidPartitionError(
            f"block {int(block[q])} mixes accepting and non-accepting states (state {q})"
        )
    succ_blocks = block[dfa.delta]
    open_ = succ_blocks != succ_blocks[:, rep[block]]
    if open_.any():
        a, q = (int(x) for x in np.argwhere(open_)[0])
        raise InvalidPartitionError(
            f"block {int(block[q])} is not closed under letter {a} (state {q})"
        )
    new_delta = succ_blocks[:, rep] if nb else np.zeros((dfa.alphabet_size, 0), np.int64)
    return Dfa(
        new_delta.astype(STATE_DTYPE),
        dfa.accepting[rep].copy(),
        None if dfa.initial is None else int(block[dfa.initial]),
        dfa.letter_names,
    )


def _bfs_order(dfa: Dfa) -> list[int]:
    if dfa.initial is None:
        raise MissingInitialError("operation needs an initial state")
    seen = np.zeros(dfa.num_states, dtype=bool)
    seen[dfa.initial] = True
    order = [dfa.initial]
    queue = deque(order)
    columns = dfa.delta.T.tolist()
    while queue:
        q = queue.popleft()
        for r in columns[q]:
            if not seen[r]:
                seen[r] = True
                order.append(r)
                queue.append(r)
    return order


def _renumber(dfa: Dfa, order: list[int]) -> tuple[Dfa, np.ndarray]:
    mapping = np.full(dfa.num_states, NO_STATE, dtype=np.int64)
    mapping[order] = np.arange(len(order))
    old = np.asarray(order, dtype=np.int64)
    new_delta = mapping[dfa.delta[:, old]] if len(order) else np.zeros((dfa.alphabet_size, 0))
    out = Dfa(
        new_delta.astype(STATE_DTYPE),
        dfa.accepting[old].copy(),
        0,
        dfa.letter_names,
    )
    return out, mapping


def prune_unreachable(dfa: Dfa) -> tuple[Dfa, np.ndarray]:
    """Drop states unreachable from the initial state.

    Survivors are renumbered in BFS discovery order; the returned map sends
    removed states to -1.
    """
    return _renumber(dfa, _bfs_order(dfa))


def canonical_form(dfa: Dfa) -> Dfa:
    order = _bfs_order(dfa)
    if len(order) != dfa.num_states:
        raise ValueError(
            f"canonical_form needs every state reachable ({len(order)} of {dfa.num_states})"
        )
    return _renumber(dfa, order)[0]


def partition_from_apart(m: ApartMatrix) -> Partition:
    n = m.n
    labels = np.full(n, -1, dtype=np.int64)
    for q in range(n):
        if labels[q] >= 0:
            continue
        members = np.flatnonzero(~m.apart[q])
        if (labels[members] >= 0).any():
            raise NonTransitiveApartError(
                f"state {q} is equivalent to a state already placed in another block"
            )
        labels[members] = q
        # every member must agree with q on the whole row
        if not (m.apart[members] == m.apart[q]).all():
            raise NonTransitiveApartError(f"not-apart relation is not transitive around state {q}")
    return Partition.from_labels(labels)


# -- text format -------------------------------------------------------------

_NAME_SAFE = "!\"#$&'()*+,-./:;<=>?@[\\]^_`{|}~"


def _encode_name(name: str) -> str:
    return quote(name, safe=_NAME_SAFE) if name else "%00"


def _decode_name(token: str) -> str:
    return "" if token == "%00" else unquote(token)


def write_dfa(dfa: Dfa) -> bytes:
    lines = [
        "dfa 1",
        f"states {dfa.num_states}",
        f"alphabet {dfa.alphabet_size}",
        f"initial {'-' if dfa.initial is None else dfa.initial}",
    ]
    acc = np.flatnonzero(dfa.accepting).tolist()
    lines.append(" ".join(["accepting", str(len(acc))] + [str(q) for q in acc]))
    if dfa.letter_names is not None:
        for a, name in enumerate(dfa.letter_names):
            lines.append(f"letter {a} {_encode_name(name)}")
    for a in range(dfa.alphabet_size):
        lines.append(" ".join(["trans", str(a)] + [str(q) for q in dfa.delta[a].tolist()]))
    return ("\n".join(lines) + "\n").encode("ascii")


class _Lines:
    def __init__(self, data: bytes):
        try:
            text = data.decode("ascii")
        except UnicodeDecodeError as exc:
            raise DfaFormatError(0, f"not ASCII: {exc}") from None
        self.rows = text.split("\n")
        if self.rows and self.rows[-1] == "":
            self.rows.pop()
        self.pos = 0

    def next(self, keyword: str) -> tuple[int, list[str]]:
        if self.pos >= len(self.rows):
            raise DfaFormatError(self.pos + 1, f"unexpected end of file, expected '{keyword}'")
        lineno = self.pos + 1
        parts = self.rows[self.pos].split()
        self.pos += 1
        if not parts or parts[0] != keyword:
            raise DfaFormatError(lineno, f"expected '{keyword}' line")
        return lineno, parts[1:]

    def peek(self) -> str:
        if self.pos >= len(self.rows):
            return ""
        parts = self.rows[self.pos].split()
        return parts[0] if parts else ""


def _int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise DfaFormatError(lineno, f"{what}: '{tok}' is not an integer") from None


def _single(args: list[str], lineno: int, what: str) -> str:
    if len(args) != 1:
        raise DfaFormatError(lineno, f"{what}: expected one value, got {len(args)}")
    return args[0]


def read_dfa(data: bytes) -> Dfa:
    src = _Lines(data)
    lineno, args = src.next("dfa")
    if args != ["1"]:
        raise DfaFormatError(lineno, f"unsupported version {' '.join(args)!r}")
    lineno, args = src.next("states")
    n = _int(_single(args, lineno, "states"), lineno, "states")
    lineno, args = src.next("alphabet")
    k = _int(_single(args, lineno, "alphabet"), lineno, "alphabet")
    if n < 0 or k < 0:
        raise DfaFormatError(lineno, "negative size")
    lineno, args = src.next("initial")
    tok = _single(args, lineno, "initial")
    initial = None if tok == "-" else _int(tok, lineno, "initial")
    if initial is not None and not 0 <= initial < n:
        raise DfaFormatError(lineno, f"initial state {initial} out of range")

    lineno, args = src.next("accepting")
    if not args:
        raise DfaFormatError(lineno, "accepting: missing count")
    m = _int(args[0], lineno, "accepting count")
    ids = [_int(t, lineno, "accepting id") for t in args[1:]]
    if len(ids) != m:
        raise DfaFormatError(lineno, f"accepting: declared {m} ids, found {len(ids)}")
    if any(b <= a for a, b in zip(ids, ids[1:])):
        raise DfaFormatError(lineno, "accepting ids must be strictly increasing")
    if ids and (ids[0] < 0 or ids[-1] >= n):
        raise DfaFormatError(lineno, "accepting id out of range")
    accepting = np.zeros(n, dtype=bool)
    accepting[ids] = True

    names: Optional[list[str]] = None
    if src.peek() == "letter":
        names = []
        for a in range(k):
            lineno, args = src.next("letter")
            if len(args) != 2 or _int(args[0], lineno, "letter id") != a:
                raise DfaFormatError(lineno, f"expected 'letter {a} <name>'")
            names.append(_decode_name(args[1]))

    delta = np.zeros((k, n), dtype=STATE_DTYPE)
    for a in range(k):
        lineno, args = src.next("trans")
        if not args or _int(args[0], lineno, "trans letter") != a:
            raise DfaFormatError(lineno, f"expected transition row for letter {a}")
        row = args[1:]
        if len(row) != n:
            raise DfaFormatError(lineno, f"transition row has {len(row)} entries, expected {n}")
        vals = [_int(t, lineno, "successor") for t in row]
        if vals and (min(vals) < 0 or max(vals) >= n):
            raise DfaFormatError(lineno, "successor out of range")
        delta[a] = vals
    if src.pos < len(src.rows):
        raise DfaFormatError(src.pos + 1, "trailing content")
    return Dfa(delta, accepting, initial, None if names is None else tuple(names))

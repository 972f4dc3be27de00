"""Aldebaran ``.aut`` loading, subset construction and completion to a DFA."""

from __future__ import annotations

import re
import time
from collections import deque
from typing import Optional

import numpy as np

from .automaton import STATE_DTYPE, Dfa, Lts
from .errors import AutFormatError, BudgetTimeout, ResourceError

_HEADER = re.compile(r"^\s*des\s*\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)\s*$")
_EDGE = re.compile(r"^\s*\(\s*(\d+)\s*,\s*(.*)\s*,\s*(\d+)\s*\)\s*$")


def _label(raw: str, lineno: int) -> str:
    raw = raw.strip()
    if raw.startswith('"'):
        if len(raw) < 2 or not raw.endswith('"'):
            raise AutFormatError(lineno, "unterminated label quote")
        return raw[1:-1]
    if not raw:
        raise AutFormatError(lineno, "empty label")
    return raw


def load_aut(data: bytes) -> Lts:
    text = data.decode("utf-8", errors="strict")
    lines = text.splitlines()
    idx = 0
    while idx < len(lines) and not lines[idx].strip():
        idx += 1
    if idx == len(lines):
        raise AutFormatError(1, "missing 'des' header")
    m = _HEADER.match(lines[idx])
    if m is None:
        raise AutFormatError(idx + 1, "malformed header, expected 'des (<init>, <#trans>, <#states>)'")
    initial, declared, num_states = (int(g) for g in m.groups())
    if num_states < 1 or initial >= num_states:
        raise AutFormatError(idx + 1, f"initial state {initial} out of range for {num_states} states")
    transitions = []
    for lineno in range(idx + 2, len(lines) + 1):
        line = lines[lineno - 1]
        if not line.strip():
            continue
        e = _EDGE.match(line)
        if e is None:
            raise AutFormatError(lineno, "malformed transition, expected '(<from>, \"<label>\", <to>)'")
        src, dst = int(e.group(1)), int(e.group(3))
        if src >= num_states or dst >= num_states:
            raise AutFormatError(lineno, f"state id out of range (num_states {num_states})")
        transitions.append((src, _label(e.group(2), lineno), dst))
    if len(transitions) != declared:
        raise AutFormatError(
            len(lines), f"header declares {declared} transitions, found {len(transitions)}"
        )
    return Lts(num_states, initial, tuple(transitions))


def determinize(
    lts: Lts,
    *,
    max_subsets: int = 10_000_000,
    deadline: Optional[float] = None,
) -> Lts:
    """Subset construction over the subsets reachable from {initial}.

    Subset states are numbered in BFS discovery order, scanning labels in
    their order of first appearance in ``lts``.
    """
    labels = lts.labels()
    label_id = {lbl: i for i, lbl in enumerate(labels)}
    succ: list[list[set[int]]] = [[set() for _ in labels] for _ in range(lts.num_states)]
    for src, lbl, dst in lts.transitions:
        succ[src][label_id[lbl]].add(dst)

    start = frozenset([lts.initial])
    index = {start: 0}
    queue = deque([start])
    out = []
    while queue:
        if deadline is not None and time.perf_counter() > deadline:
            raise BudgetTimeout("determinization deadline passed")
        subset = queue.popleft()
        src = index[subset]
        for a, lbl in enumerate(labels):
            target = set()
            for q in subset:
                target |= succ[q][a]
            if not target:
                continue
            target = frozenset(target)
            if target not in index:
                if len(index) >= max_subsets:
                    raise ResourceError(
                        f"subset construction exceeded {max_subsets} states",
                        required=max_subsets + 1,
                        limit=max_subsets,
                    )
                index[target] = len(index)
                queue.append(target)
            out.append((src, lbl, index[target]))
    return Lts(len(index), 0, tuple(out))


def complete_to_dfa(dlts: Lts) -> Dfa:
    """Make every state accepting and send missing moves to a fresh rejecting sink.

    The sink is the last state id. Letters follow first-appearance order of
    labels in ``dlts``.
    """
    labels = dlts.labels()
    label_id = {lbl: i for i, lbl in enumerate(labels)}
    n = dlts.num_states
    sink = n
    delta = np.full((len(labels), n + 1), sink, dtype=STATE_DTYPE)
    filled = np.zeros((len(labels), n), dtype=bool)
    for src, lbl, dst in dlts.transitions:
        a = label_id[lbl]
        if filled[a, src] and delta[a, src] != dst:
            raise ValueError(f"LTS is not deterministic: state {src} has two '{lbl}' moves")
        filled[a, src] = True
        delta[a, src] = dst
    accepting = np.ones(n + 1, dtype=bool)
    accepting[sink] = False
    return Dfa(delta, accepting, dlts.initial, tuple(labels))

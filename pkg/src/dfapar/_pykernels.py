"""Pure numpy implementations of the hot kernels.

Used when the compiled ``_ckernels`` extension is unavailable or when
``DFAPAR_BACKEND=python`` is set. Every function here has a twin with the
same signature and semantics in ``_ckernels.pyx``.

Conventions shared by both backends:

* ``delta`` is a C-contiguous ``int32`` array of shape ``(k, n)``.
* ``block`` holds leader state ids and is updated in place.
* Packed bit rows are ``uint64`` words, bit ``t`` of a row lives in word
  ``t >> 6`` at position ``t & 63``.
"""

from __future__ import annotations

import time

import numpy as np

NAME = "python"

EQUIV, INCLUSION = 0, 1


def _differs_from_leader(delta: np.ndarray, block: np.ndarray) -> np.ndarray:
    n = block.shape[0]
    diff = np.zeros(n, dtype=bool)
    for row in delta:
        diff |= block[row] != block[row[block]]
    return diff


def naive_step(delta, block, priority, new_leader) -> int:
    """One lock-step iteration of leader-election refinement.

    States that disagree with their leader on some letter move to a new
    block whose leader is the lowest-``priority`` such state. Returns the
    number of states moved.
    """
    diff = _differs_from_leader(delta, block)
    movers = np.flatnonzero(diff)
    if movers.size == 0:
        return 0
    leaders = block[movers]
    order = np.lexsort((priority[movers], leaders))
    ranked = leaders[order]
    head = np.ones(ranked.shape[0], dtype=bool)
    head[1:] = ranked[1:] != ranked[:-1]
    new_leader[ranked[head]] = movers[order][head]
    block[movers] = new_leader[leaders]
    new_leader[ranked[head]] = -1
    return int(movers.size)


def fused_step(delta, block, new_leader) -> int:
    """Single-pass election with compare-and-swap claims.

    Pairs ``(q, a)`` are visited q-major; the first differing state to
    claim ``new_leader[leader]`` wins, so the winner is the smallest
    differing state of each block.
    """
    diff = _differs_from_leader(delta, block)
    movers = np.flatnonzero(diff)
    if movers.size == 0:
        return 0
    leaders = block[movers]
    # movers ascend, so the first occurrence of a leader is its first claimant
    claimed, first = np.unique(leaders, return_index=True)
    new_leader[claimed] = movers[first]
    block[movers] = new_leader[leaders]
    new_leader[claimed] = -1
    return int(movers.size)


def _unpack(rows: np.ndarray, width: int) -> np.ndarray:
    bits = np.unpackbits(rows.view(np.uint8), axis=1, bitorder="little")
    return bits[:, :width].astype(bool)


def _pack(mat: np.ndarray, words: int) -> np.ndarray:
    pad = words * 64 - mat.shape[1]
    if pad:
        mat = np.concatenate([mat, np.zeros((mat.shape[0], pad), dtype=bool)], axis=1)
    return np.ascontiguousarray(np.packbits(mat, axis=1, bitorder="little")).view(np.uint64)


def closure_pass(reach, apart) -> tuple[int, int]:
    """Square the reachability relation once, then propagate apartness.

    ``reach`` (packed ``(V, W)``) and ``apart`` (``uint8`` of length V) are
    updated in place; both phases read pre-pass values. Returns
    ``(reach_bits_added, apart_nodes_added)``.
    """
    v = reach.shape[0]
    if v == 0:
        return 0, 0
    r = _unpack(reach, v).astype(np.float32)
    before = int(r.sum())
    r = (r + r @ r) > 0
    added = int(r.sum()) - before
    reach[:] = _pack(r, reach.shape[1])
    old = apart.astype(bool)
    hits = (r.astype(np.float32) @ old.astype(np.float32)) > 0
    fresh = hits & ~old
    apart[fresh] = 1
    return added, int(fresh.sum())


def product_bfs(da, acc_a, ia, db, acc_b, ib, test, early_exit, max_states, deadline):
    """Level-synchronous exploration of the synchronous product.

    Every pair is checked when first inserted. Returns
    ``(fail_index, pair_a, pair_b, parent, letter, levels)`` where the
    arrays list explored pairs in discovery order and ``fail_index`` is the
    first failing pair (-1 if none).
    """
    k = da.shape[0]
    nb = db.shape[1]
    cols_a = da.T.tolist()
    cols_b = db.T.tolist()
    acc_a = acc_a.tolist()
    acc_b = acc_b.tolist()

    def fails(p, q):
        if test == EQUIV:
            return acc_a[p] != acc_b[q]
        return acc_a[p] and not acc_b[q]

    pa, pb, parent, letter = [ia], [ib], [-1], [-1]
    seen = {ia * nb + ib}
    fail = 0 if fails(ia, ib) else -1
    levels = 1
    lo, hi = 0, 1
    if fail >= 0 and early_exit:
        return _finish(fail, pa, pb, parent, letter, levels)
    while lo < hi:
        if deadline is not None and time.perf_counter() > deadline:
            raise TimeoutError
        for i in range(lo, hi):
            sa, sb = cols_a[pa[i]], cols_b[pb[i]]
            for a in range(k):
                p, q = sa[a], sb[a]
                key = p * nb + q
                if key in seen:
                    continue
                seen.add(key)
                if len(pa) >= max_states:
                    raise MemoryError(len(pa) + 1)
                pa.append(p)
                pb.append(q)
                parent.append(i)
                letter.append(a)
                if fail < 0 and fails(p, q):
                    fail = len(pa) - 1
                    if early_exit:
                        return _finish(fail, pa, pb, parent, letter, levels + 1)
        lo, hi = hi, len(pa)
        if hi > lo:
            levels += 1
    return _finish(fail, pa, pb, parent, letter, levels)


def _finish(fail, pa, pb, parent, letter, levels):
    return (
        fail,
        np.asarray(pa, dtype=np.int32),
        np.asarray(pb, dtype=np.int32),
        np.asarray(parent, dtype=np.int64),
        np.asarray(letter, dtype=np.int32),
        levels,
    )

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels. Semantics match ``_pykernels`` exactly."""

import time

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int32_t, int64_t, uint8_t, uint64_t
from libc.stdlib cimport free, malloc, realloc
from libc.string cimport memcpy, memset

cnp.import_array()

NAME = "cython"

cdef uint64_t EMPTY = 0xFFFFFFFFFFFFFFFFULL
cdef Py_ssize_t WIDE_ALPHABET = 4


cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil
    int __builtin_popcountll(unsigned long long) nogil


cdef int64_t _flag_movers(const int32_t[:, ::1] delta, const int32_t* block,
                         uint8_t* flag, Py_ssize_t n) noexcept nogil:
    # narrow alphabets: per-state early exit wins; wide ones (the doubled
    # alphabet) need letter-major reads to avoid striding across rows
    cdef Py_ssize_t k = delta.shape[0], q, a
    cdef const int32_t* row
    cdef int64_t moved = 0
    cdef int32_t lead
    if k <= WIDE_ALPHABET:
        for q in range(n):
            flag[q] = 0
            lead = block[q]
            for a in range(k):
                if block[delta[a, q]] != block[delta[a, lead]]:
                    flag[q] = 1
                    moved += 1
                    break
        return moved
    memset(flag, 0, n)
    for a in range(k):
        row = &delta[a, 0]
        for q in range(n):
            if not flag[q] and block[row[q]] != block[row[block[q]]]:
                flag[q] = 1
                moved += 1
    return moved


def naive_step(const int32_t[:, ::1] delta, int32_t[::1] block,
               const int64_t[::1] priority, int32_t[::1] new_leader):
    cdef Py_ssize_t n = block.shape[0]
    cdef Py_ssize_t q
    cdef int32_t lead, w
    cdef int64_t moved = 0
    cdef uint8_t* flag = <uint8_t*>malloc(n if n > 0 else 1)
    if flag == NULL:
        raise MemoryError()
    try:
        with nogil:
            if n > 0 and delta.shape[0] > 0:
                moved = _flag_movers(delta, &block[0], flag, n)
            if moved:
                for q in range(n):
                    if flag[q]:
                        lead = block[q]
                        w = new_leader[lead]
                        if w < 0 or priority[q] < priority[w]:
                            new_leader[lead] = <int32_t>q
                for q in range(n):
                    if flag[q]:
                        block[q] = new_leader[block[q]]
                for q in range(n):
                    new_leader[q] = -1
    finally:
        free(flag)
    return moved


def fused_step(const int32_t[:, ::1] delta, int32_t[::1] block, int32_t[::1] new_leader):
    cdef Py_ssize_t n = block.shape[0]
    cdef Py_ssize_t q
    cdef int32_t lead, nb
    cdef int64_t moved = 0
    cdef uint8_t* flag = <uint8_t*>malloc(n if n > 0 else 1)
    if flag == NULL:
        raise MemoryError()
    try:
        with nogil:
            if n > 0 and delta.shape[0] > 0:
                moved = _flag_movers(delta, &block[0], flag, n)
            if moved:
                # claims go in ascending q, so the first claimant is the smallest mover;
                # block[lead] is never rewritten before lead is read (a leader never moves)
                for q in range(n):
                    if flag[q]:
                        lead = block[q]
                        nb = new_leader[lead]
                        if nb == -1:
                            new_leader[lead] = <int32_t>q
                            block[q] = <int32_t>q
                        else:
                            block[q] = nb
                for q in range(n):
                    new_leader[q] = -1
    finally:
        free(flag)
    return moved


def closure_pass(uint64_t[:, ::1] reach, uint8_t[::1] apart):
    cdef Py_ssize_t v = reach.shape[0], words = reach.shape[1]
    cdef Py_ssize_t s, t, w, x, base
    cdef uint64_t bits
    cdef int64_t added_bits = 0, fresh = 0
    if v == 0:
        return 0, 0
    cdef uint64_t* old = <uint64_t*>malloc(sizeof(uint64_t) * v * words)
    cdef uint64_t* apart_bits = <uint64_t*>malloc(sizeof(uint64_t) * words)
    cdef uint8_t* old_apart = <uint8_t*>malloc(v)
    if old == NULL or apart_bits == NULL or old_apart == NULL:
        free(old); free(apart_bits); free(old_apart)
        raise MemoryError()
    try:
        with nogil:
            memcpy(old, &reach[0, 0], sizeof(uint64_t) * v * words)
            memcpy(old_apart, &apart[0], v)
            for s in range(v):
                for w in range(words):
                    bits = old[s * words + w]
                    while bits:
                        t = w * 64 + _ctz(bits)
                        bits &= bits - 1
                        base = t * words
                        for x in range(words):
                            reach[s, x] |= old[base + x]
                for w in range(words):
                    added_bits += _popcount(reach[s, w]) - _popcount(old[s * words + w])
            memset(apart_bits, 0, sizeof(uint64_t) * words)
            for s in range(v):
                if old_apart[s]:
                    apart_bits[s >> 6] |= (<uint64_t>1) << (s & 63)
            for s in range(v):
                if old_apart[s]:
                    continue
                for w in range(words):
                    if reach[s, w] & apart_bits[w]:
                        apart[s] = 1
                        fresh += 1
                        break
    finally:
        free(old)
        free(apart_bits)
        free(old_apart)
    return added_bits, fresh


cdef inline int _ctz(uint64_t x) nogil:
    return __builtin_ctzll(x)


cdef inline int _popcount(uint64_t x) nogil:
    return __builtin_popcountll(x)


cdef struct PairStore:
    int32_t* pa
    int32_t* pb
    int64_t* parent
    int32_t* letter
    Py_ssize_t size
    Py_ssize_t cap


cdef int _store_grow(PairStore* st) nogil:
    cdef Py_ssize_t cap = st.cap * 2 if st.cap else 1024
    cdef void* p
    p = realloc(st.pa, sizeof(int32_t) * cap)
    if p == NULL:
        return -1
    st.pa = <int32_t*>p
    p = realloc(st.pb, sizeof(int32_t) * cap)
    if p == NULL:
        return -1
    st.pb = <int32_t*>p
    p = realloc(st.parent, sizeof(int64_t) * cap)
    if p == NULL:
        return -1
    st.parent = <int64_t*>p
    p = realloc(st.letter, sizeof(int32_t) * cap)
    if p == NULL:
        return -1
    st.letter = <int32_t*>p
    st.cap = cap
    return 0


cdef struct HashSet:
    uint64_t* keys
    Py_ssize_t mask
    Py_ssize_t count


cdef inline uint64_t _mix(uint64_t x) nogil:
    x ^= x >> 33
    x *= 0xff51afd7ed558ccdULL
    x ^= x >> 33
    x *= 0xc4ceb9fe1a85ec53ULL
    x ^= x >> 33
    return x


cdef int _set_init(HashSet* hs, Py_ssize_t cap) nogil:
    hs.keys = <uint64_t*>malloc(sizeof(uint64_t) * cap)
    if hs.keys == NULL:
        return -1
    memset(hs.keys, 0xFF, sizeof(uint64_t) * cap)
    hs.mask = cap - 1
    hs.count = 0
    return 0


cdef int _set_insert(HashSet* hs, uint64_t key) nogil:
    """Return 1 if inserted, 0 if present, -1 on allocation failure."""
    cdef Py_ssize_t i, cap, j
    cdef uint64_t* old
    cdef uint64_t k2
    if (hs.count + 1) * 2 > hs.mask + 1:
        cap = (hs.mask + 1) * 2
        old = hs.keys
        hs.keys = <uint64_t*>malloc(sizeof(uint64_t) * cap)
        if hs.keys == NULL:
            hs.keys = old
            return -1
        memset(hs.keys, 0xFF, sizeof(uint64_t) * cap)
        for j in range(hs.mask + 1):
            k2 = old[j]
            if k2 != EMPTY:
                i = _mix(k2) & (cap - 1)
                while hs.keys[i] != EMPTY:
                    i = (i + 1) & (cap - 1)
                hs.keys[i] = k2
        free(old)
        hs.mask = cap - 1
    i = _mix(key) & hs.mask
    while True:
        if hs.keys[i] == EMPTY:
            hs.keys[i] = key
            hs.count += 1
            return 1
        if hs.keys[i] == key:
            return 0
        i = (i + 1) & hs.mask


def product_bfs(const int32_t[:, ::1] da, const uint8_t[::1] acc_a, int ia,
                const int32_t[:, ::1] db, const uint8_t[::1] acc_b, int ib,
                int test, bint early_exit, int64_t max_states, deadline):
    cdef Py_ssize_t k = da.shape[0]
    cdef uint64_t nb = db.shape[1]
    cdef PairStore st
    cdef HashSet hs
    cdef Py_ssize_t lo = 0, hi = 1, i, a, fail = -1
    cdef int32_t p, q, sa, sb
    cdef int levels = 1, rc, status = 0
    cdef double limit = -1.0 if deadline is None else <double>deadline
    st.pa = NULL; st.pb = NULL; st.parent = NULL; st.letter = NULL
    st.size = 0; st.cap = 0
    hs.keys = NULL
    try:
        if _store_grow(&st) < 0 or _set_init(&hs, 2048) < 0:
            raise MemoryError()
        _set_insert(&hs, <uint64_t>ia * nb + <uint64_t>ib)
        st.pa[0] = ia; st.pb[0] = ib; st.parent[0] = -1; st.letter[0] = -1
        st.size = 1
        if _fails(test, acc_a[ia], acc_b[ib]):
            fail = 0
        if not (fail >= 0 and early_exit):
            while lo < hi and status == 0:
                if limit >= 0 and time.perf_counter() > limit:
                    raise TimeoutError()
                with nogil:
                    for i in range(lo, hi):
                        sa = st.pa[i]
                        sb = st.pb[i]
                        for a in range(k):
                            p = da[a, sa]
                            q = db[a, sb]
                            rc = _set_insert(&hs, <uint64_t>p * nb + <uint64_t>q)
                            if rc == 0:
                                continue
                            if rc < 0:
                                status = 2
                                break
                            if st.size >= max_states:
                                status = 1
                                break
                            if st.size == st.cap and _store_grow(&st) < 0:
                                status = 2
                                break
                            st.pa[st.size] = p
                            st.pb[st.size] = q
                            st.parent[st.size] = i
                            st.letter[st.size] = <int32_t>a
                            st.size += 1
                            if fail < 0 and _fails(test, acc_a[p], acc_b[q]):
                                fail = st.size - 1
                                if early_exit:
                                    status = 3
                                    break
                        if status:
                            break
                if status == 1:
                    raise MemoryError(st.size + 1)
                if status == 2:
                    raise MemoryError()
                if status == 3:
                    levels += 1
                    break
                lo = hi
                hi = st.size
                if hi > lo:
                    levels += 1
        n = st.size
        pa = np.empty(n, dtype=np.int32)
        pb = np.empty(n, dtype=np.int32)
        parent = np.empty(n, dtype=np.int64)
        letter = np.empty(n, dtype=np.int32)
        if n:
            _copy32(pa, st.pa, n)
            _copy32(pb, st.pb, n)
            _copy64(parent, st.parent, n)
            _copy32(letter, st.letter, n)
        return fail, pa, pb, parent, letter, levels
    finally:
        free(st.pa); free(st.pb); free(st.parent); free(st.letter)
        free(hs.keys)


cdef inline bint _fails(int test, uint8_t fa, uint8_t fb) nogil:
    if test == 0:
        return (fa != 0) != (fb != 0)
    return fa != 0 and fb == 0


cdef void _copy32(int32_t[::1] dst, int32_t* src, Py_ssize_t n):
    memcpy(&dst[0], src, sizeof(int32_t) * n)


cdef void _copy64(int64_t[::1] dst, int64_t* src, Py_ssize_t n):
    memcpy(&dst[0], src, sizeof(int64_t) * n)

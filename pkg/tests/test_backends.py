"""The compiled kernels and the numpy fallback must agree bit for bit."""

import os

import numpy as np
import pytest

from dfapar import (
    ElectionPolicy,
    check_equiv,
    check_inclusion,
    explore_product,
    gen_bitsplitter,
    gen_bitsplitter_ext,
    gen_fib,
    gen_memory_forgetful,
    gen_memory_perfect,
    gen_random_dfa,
    naive_pr,
    naive_pr_fused,
    trans_minimize,
    trans_pr,
)
from dfapar import _backend
from dfapar.minimize import _initial_reach

BACKENDS = _backend.available()
needs_both = pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled extension not built")


def test_python_backend_always_available():
    assert "python" in BACKENDS
    assert _backend.get("python").NAME == "python"


@needs_both
@pytest.mark.skipif(
    os.environ.get("DFAPAR_BACKEND", "auto") != "auto", reason="backend forced by environment"
)
def test_default_prefers_compiled():
    assert _backend.kernels.NAME == "cython"


@needs_both
class TestAgreement:
    py = _backend.get("python")
    cy = _backend.get("cython") if len(BACKENDS) > 1 else None

    @pytest.mark.parametrize("k", [1, 3, 7])
    @pytest.mark.parametrize("seed", range(10))
    def test_naive_step(self, seed, k):
        d = gen_random_dfa(150, k, seed=seed)
        rng = np.random.default_rng(seed)
        delta = np.ascontiguousarray(d.delta)
        block = np.where(d.accepting, int(np.argmax(d.accepting)), int(np.argmax(~d.accepting)))
        block = block.astype(np.int32)
        for _ in range(6):
            prio = rng.permutation(150).astype(np.int64)
            outs = []
            for k in (self.py, self.cy):
                b = block.copy()
                nl = np.full(150, -1, np.int32)
                moved = k.naive_step(delta, b, prio, nl)
                outs.append((moved, b, nl))
            assert outs[0][0] == outs[1][0]
            assert np.array_equal(outs[0][1], outs[1][1])
            assert (outs[0][2] == -1).all() and (outs[1][2] == -1).all()
            block = outs[0][1]

    @pytest.mark.parametrize("k", [2, 9])
    @pytest.mark.parametrize("seed", range(10))
    def test_fused_partitions(self, seed, k):
        d = gen_random_dfa(120, k, seed=seed)
        a = naive_pr_fused(d, kernels=self.py)
        b = naive_pr_fused(d, kernels=self.cy)
        assert a.partition == b.partition
        assert a.refining_iterations == b.refining_iterations

    def test_naive_bitsplitter(self):
        d = gen_bitsplitter(11)
        for policy in (ElectionPolicy.min_index(), ElectionPolicy.arbitrary(3)):
            a = naive_pr(d, policy, kernels=self.py)
            b = naive_pr(d, policy, kernels=self.cy)
            assert a.partition == b.partition
            assert a.refining_iterations == b.refining_iterations == 10

    def test_trans_pr_fib(self):
        d = gen_fib(12)
        a = trans_pr(d, kernels=self.py)
        b = trans_pr(d, kernels=self.cy)
        assert a.refining_iterations == b.refining_iterations

    @pytest.mark.parametrize("seed", range(8))
    def test_closure_pass(self, seed):
        d = gen_random_dfa(12, 2, seed=seed)
        n = d.num_states
        apart0 = (d.accepting[:, None] != d.accepting[None, :]).reshape(-1).astype(np.uint8)
        state = []
        for k in (self.py, self.cy):
            reach, apart = _initial_reach(d), apart0.copy()
            log = []
            while True:
                log.append(k.closure_pass(reach, apart))
                if not log[-1][1]:
                    break
            state.append((reach, apart, log))
        assert np.array_equal(state[0][0], state[1][0])
        assert np.array_equal(state[0][1], state[1][1])
        assert state[0][2] == state[1][2]
        assert n > 0

    @pytest.mark.parametrize("m", [5, 6, 7, 8])
    def test_trans_minimize(self, m):
        d = gen_fib(m)
        a = trans_minimize(d, kernels=self.py)
        b = trans_minimize(d, kernels=self.cy)
        assert a.closure_iterations == b.closure_iterations
        assert np.array_equal(a.apart.apart, b.apart.apart)

    @pytest.mark.parametrize(
        "pair,mode",
        [
            ((gen_bitsplitter_ext(7), gen_bitsplitter_ext(7)), "equiv"),
            ((gen_memory_forgetful(7), gen_memory_perfect(7)), "inclusion"),
            ((gen_memory_perfect(5), gen_memory_forgetful(5)), "equiv"),
            ((gen_memory_perfect(5), gen_memory_forgetful(5)), "full"),
        ],
    )
    def test_product(self, pair, mode):
        a, b = pair
        ra = explore_product(a, b, mode, kernels=self.py)
        rb = explore_product(a, b, mode, kernels=self.cy)
        assert ra == rb

    @pytest.mark.parametrize("seed", range(30))
    def test_product_random(self, seed):
        a = gen_random_dfa(40, 2, seed=seed)
        b = gen_random_dfa(40, 2, seed=seed + 1000)
        for check in (check_equiv, check_inclusion):
            assert check(a, b, kernels=self.py) == check(a, b, kernels=self.cy)

    def test_product_limits(self):
        d = gen_bitsplitter_ext(8)
        for k in (self.py, self.cy):
            with pytest.raises(Exception) as exc:
                explore_product(d, d, kernels=k, max_states=10)
            assert type(exc.value).__name__ == "ResourceError"

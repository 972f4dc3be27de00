import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dfapar import (
    AlphabetMismatchError,
    BudgetTimeout,
    Dfa,
    MissingInitialError,
    ResourceError,
    canonical_form,
    check_equiv,
    check_inclusion,
    explore_product,
    gen_bitsplitter,
    gen_bitsplitter_ext,
    gen_memory_forgetful,
    gen_memory_perfect,
    gen_random_dfa,
    moore_minimize,
    prune_unreachable,
    quotient,
    write_dfa,
)
from dfapar.equivalence import COUNTEREXAMPLE, EQUIVALENT, INCLUDED

import oracles


def minimal_bytes(d):
    m, _ = prune_unreachable(quotient(d, moore_minimize(d).partition))
    return write_dfa(canonical_form(m))


class TestEquiv:
    def test_bitsplit_ext_self(self):
        d = gen_bitsplitter_ext(5)
        r = check_equiv(d, d)
        assert r.verdict == EQUIVALENT and r.explored_states == 64

    def test_memory_counterexample_is_shortest(self):
        p, f = gen_memory_perfect(3), gen_memory_forgetful(3)
        r = check_equiv(p, f)
        assert r.verdict == COUNTEREXAMPLE
        assert oracles.accepts(p, r.word) != oracles.accepts(f, r.word)
        for w in oracles.words(2, 8):
            if len(w) >= len(r.word):
                break
            assert oracles.accepts(p, w) == oracles.accepts(f, w)
        assert r.word_text() == "t f t f f"

    def test_epsilon_witness(self):
        a = Dfa.build([[0]], [True], 0)
        b = Dfa.build([[0]], [False], 0)
        r = check_equiv(a, b)
        assert r.word == () and r.word_text() == ""
        assert r.explored_states == 1

    def test_self_product_equals_reachable(self):
        for seed in range(5):
            d = gen_random_dfa(60, 3, seed=seed)
            r = check_equiv(d, d)
            assert r.explored_states == len(oracles.reachable(d))


class TestInclusion:
    def test_memory5(self):
        r = check_inclusion(gen_memory_forgetful(5), gen_memory_perfect(5))
        assert r.verdict == INCLUDED and r.explored_states == 88

    def test_reflexive(self):
        d = gen_random_dfa(40, 2, seed=3)
        assert check_inclusion(d, d).verdict == INCLUDED

    def test_reverse_fails(self):
        p, f = gen_memory_perfect(3), gen_memory_forgetful(3)
        r = check_inclusion(p, f)
        assert r.verdict == COUNTEREXAMPLE
        assert oracles.accepts(p, r.word) and not oracles.accepts(f, r.word)
        assert len(r.word) == oracles.shortest_witness_length(p, f, True, 20)


class TestFullMode:
    def test_perfect2_diagonal(self):
        d = gen_memory_perfect(2)
        assert explore_product(d, d, "full").explored_states == 4

    def test_memory6(self):
        r = explore_product(gen_memory_forgetful(6), gen_memory_perfect(6), "full", test="inclusion")
        assert r.explored_states == 208 and r.verdict == INCLUDED

    def test_bitsplit_ext10(self):
        d = gen_bitsplitter_ext(10)
        assert explore_product(d, d, "full").explored_states == 2048

    def test_full_explores_past_failure(self):
        p, f = gen_memory_perfect(4), gen_memory_forgetful(4)
        early = check_equiv(p, f)
        full = explore_product(p, f, "full")
        assert full.verdict == COUNTEREXAMPLE
        assert full.explored_states >= early.explored_states
        assert len(full.word) == len(early.word)

    def test_bad_mode(self):
        d = gen_memory_perfect(2)
        with pytest.raises(ValueError):
            explore_product(d, d, "bisim")


class TestErrors:
    def test_missing_initial(self):
        d = gen_bitsplitter(3)
        with pytest.raises(MissingInitialError):
            check_equiv(d, d)

    def test_alphabet_mismatch(self):
        with pytest.raises(AlphabetMismatchError):
            check_equiv(gen_random_dfa(4, 2, seed=0), gen_random_dfa(4, 3, seed=0))

    def test_resource_cap(self):
        d = gen_bitsplitter_ext(8)
        with pytest.raises(ResourceError):
            check_equiv(d, d, max_states=100)

    def test_deadline(self):
        d = gen_bitsplitter_ext(8)
        with pytest.raises(BudgetTimeout):
            check_equiv(d, d, deadline=0.0)


class TestNameMatching:
    def test_permuted_letters(self):
        a = Dfa.build([[1, 1], [0, 0]], [False, True], 0, ("x", "y"))
        b = Dfa.build([[0, 0], [1, 1]], [False, True], 0, ("y", "x"))
        assert check_equiv(a, b).verdict == COUNTEREXAMPLE
        r = check_equiv(a, b, match_names=True)
        assert r.verdict == EQUIVALENT

    def test_name_set_mismatch(self):
        a = Dfa.build([[0]], [True], 0, ("x",))
        b = Dfa.build([[0]], [True], 0, ("z",))
        with pytest.raises(AlphabetMismatchError):
            check_equiv(a, b, match_names=True)

    def test_requires_names(self):
        a = Dfa.build([[0]], [True], 0)
        with pytest.raises(AlphabetMismatchError):
            check_equiv(a, a, match_names=True)


@st.composite
def dfa_pairs(draw):
    k = draw(st.integers(1, 3))
    out = []
    for _ in range(2):
        n = draw(st.integers(1, 8))
        delta = draw(st.lists(st.integers(0, n - 1), min_size=n * k, max_size=n * k))
        acc = draw(st.lists(st.booleans(), min_size=n, max_size=n))
        out.append(Dfa.build(np.array(delta).reshape(k, n), acc, 0))
    return tuple(out)


@settings(max_examples=150, deadline=None)
@given(dfa_pairs())
def test_equiv_agrees_with_minimisation(pair):
    a, b = pair
    r = check_equiv(a, b)
    assert r.holds == (minimal_bytes(a) == minimal_bytes(b))
    bound = a.num_states * b.num_states
    assert r.explored_states <= bound
    if not r.holds:
        assert oracles.accepts(a, r.word) != oracles.accepts(b, r.word)
        assert len(r.word) == oracles.shortest_witness_length(a, b, False, bound)


@settings(max_examples=150, deadline=None)
@given(dfa_pairs())
def test_antisymmetry_link(pair):
    a, b = pair
    both = check_inclusion(a, b).holds and check_inclusion(b, a).holds
    assert check_equiv(a, b).holds == both
    r = check_inclusion(a, b)
    if not r.holds:
        assert oracles.accepts(a, r.word) and not oracles.accepts(b, r.word)
        assert len(r.word) == oracles.shortest_witness_length(
            a, b, True, a.num_states * b.num_states
        )


@settings(max_examples=60, deadline=None)
@given(dfa_pairs(), st.integers(0, 1000))
def test_split_state_is_equivalent(pair, seed):
    a, _ = pair
    b = oracles.split_state(a, seed % a.num_states, seed)
    assert check_equiv(a, b).holds

from math import gcd

import pytest
from hypothesis import given, strategies as st

from teichspec import words as W

letters = st.sampled_from([1, -1, 2, -2, 3, -3])
raw_words = st.lists(letters, max_size=14).map(tuple)


def test_parse_fmt_roundtrip():
    assert W.parse("abAB") == (1, 2, -1, -2)
    assert W.fmt((1, 2, -1, -2)) == "abAB"
    assert W.parse("aA") == ()
    assert W.fmt(()) == "1"
    with pytest.raises(ValueError):
        W.parse("abc", rank=2)


@given(raw_words)
def test_free_reduce_is_reduced_and_idempotent(w):
    r = W.free_reduce(w)
    assert all(r[i] != -r[i + 1] for i in range(len(r) - 1))
    assert W.free_reduce(r) == r


@given(raw_words, raw_words)
def test_inverse_of_product(u, v):
    assert W.inverse(W.mul(u, v)) == W.mul(W.inverse(v), W.inverse(u))
    assert W.mul(u, W.inverse(u)) == ()


@given(raw_words)
def test_canonical_cyclic_invariant_under_rotation_and_inversion(w):
    c = W.cyclic_reduce(W.free_reduce(w))[1]
    key = W.canonical_cyclic(c)
    for r in W.rotations(c):
        assert W.canonical_cyclic(r) == key
    assert W.canonical_cyclic(W.inverse(c)) == key


@given(raw_words.filter(lambda w: W.cyclic_reduce(W.free_reduce(w))[1] != ()), st.integers(2, 4))
def test_powers_are_detected(w, n):
    c = W.cyclic_reduce(W.free_reduce(w))[1]
    p = W.power(c, n)
    assert W.is_proper_power(p)
    root, k = W.primitive_root(p)
    assert k % n == 0 and len(root) * k == len(p)


@pytest.mark.parametrize("p,q", [(1, 0), (0, 1), (1, 1), (2, 3), (3, -2), (5, 3)])
def test_christoffel_exponent_sums(p, q):
    w = W.christoffel(p, q)
    assert W.exponent_sums(w, 2) == (p, q)
    assert not W.is_proper_power(w)


def test_christoffel_rejects_non_primitive():
    with pytest.raises(ValueError):
        W.christoffel(2, 4)


@pytest.mark.parametrize("bound", range(1, 9))
def test_farey_count_matches_brute_force(bound):
    brute = set()
    for p in range(-bound, bound + 1):
        for q in range(-bound, bound + 1):
            if (p or q) and abs(p) + abs(q) <= bound and gcd(p, q) == 1:
                brute.add(W.normalize_slope(p, q))
    assert set(W.farey_slopes(bound)) == brute


def test_reduced_words_counts():
    # 2k(2k-1)^(n-1) reduced words of length n in rank k
    counts = {}
    for w in W.reduced_words(2, 4):
        counts[len(w)] = counts.get(len(w), 0) + 1
    assert counts == {0: 1, 1: 4, 2: 12, 3: 36, 4: 108}


def test_substitute():
    images = [W.parse("ab"), W.parse("B")]
    assert W.substitute(W.parse("ab"), images) == W.parse("a")

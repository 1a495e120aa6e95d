from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chgldpc.component import (ComponentCodeError, bdd_decode, component_from_name,
                               make_generic, make_repetition)
from chgldpc.gf2 import BinaryMatrix, save_alist
from oracles import nullspace_gf2, sphere_decode

HAMMING_7_4 = [[1, 0, 1, 0, 1, 0, 1], [0, 1, 1, 0, 0, 1, 1], [0, 0, 0, 1, 1, 1, 1]]


def test_bch_parameters(bch):
    assert (bch.n, bch.m, bch.t) == (31, 10, 2)
    assert bch.rate == Fraction(21, 31)


def test_bch_weight5_codeword_count(bch):
    # oracle: syndrome scan over all C(31,5) supports, frozen
    h = bch.h.to_dense().astype(np.int64)
    cols = [int("".join(map(str, h[:, j])), 2) for j in range(31)]
    count = 0
    for pos in combinations(range(31), 5):
        s = 0
        for j in pos:
            s ^= cols[j]
        count += s == 0
    assert count == 186


def test_bch_codewords_are_multiples_of_generator(bch):
    # m1(x) = x^5+x^2+1, m3(x) = x^5+x^4+x^3+x^2+1, g = m1*m3
    m1 = [1, 0, 1, 0, 0, 1]
    m3 = [1, 0, 1, 1, 1, 1]
    g = np.convolve(m1, m3) % 2
    assert len(g) == 11
    for shift in range(21):
        word = np.zeros(31, dtype=np.uint8)
        word[shift:shift + 11] = g
        assert bch.is_codeword(word)


def test_bdd_zero_word(bch):
    assert bdd_decode(bch, np.zeros(31, dtype=np.uint8)) == frozenset()


def test_bdd_single_error(bch):
    for j in range(31):
        w = np.zeros(31, dtype=np.uint8)
        w[j] = 1
        assert bdd_decode(bch, w) == {j}


def test_bdd_length_mismatch(bch):
    from chgldpc.gf2 import DimensionError
    with pytest.raises(DimensionError):
        bdd_decode(bch, np.zeros(30, dtype=np.uint8))


def test_bdd_recovers_every_error_up_to_t(bch):
    basis = nullspace_gf2(bch.h.to_dense())
    rng = np.random.default_rng(5)
    for trial in range(3):
        cw = (rng.integers(0, 2, len(basis)) @ basis % 2).astype(np.uint8) if trial else np.zeros(31, np.uint8)
        for w in range(3):
            for pos in combinations(range(31), w):
                word = cw.copy()
                word[list(pos)] ^= 1
                assert bdd_decode(bch, word) == frozenset(pos)


def test_bdd_matches_sphere_search(bch):
    h = bch.h.to_dense()
    rng = np.random.default_rng(11)
    for _ in range(2000):
        w = int(rng.integers(0, 6))
        word = np.zeros(31, dtype=np.uint8)
        word[rng.choice(31, w, replace=False)] = 1
        assert bdd_decode(bch, word) == sphere_decode(h, word, 2)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 30), min_size=3, max_size=3, unique=True))
def test_bdd_miscorrection_lands_on_codeword(bch, pos):
    word = np.zeros(31, dtype=np.uint8)
    word[pos] = 1
    flips = bdd_decode(bch, word)
    if flips is not None:
        assert len(flips) <= bch.t
        word[list(flips)] ^= 1
        assert bch.is_codeword(word)


def test_generic_single_parity_rejected():
    with pytest.raises(ComponentCodeError, match="codeword"):
        make_generic(BinaryMatrix.from_dense([[1, 1, 1, 1]]), 1)


def test_generic_hamming_accepted():
    code = make_generic(BinaryMatrix.from_dense(HAMMING_7_4), 1)
    # exhaustive enumeration of the 16 codewords gives distance 3
    basis = nullspace_gf2(HAMMING_7_4)
    words = [(np.array(bits) @ basis) % 2 for bits in np.ndindex(*(2,) * len(basis))]
    assert len(words) == 16
    assert min(int(w.sum()) for w in words if w.any()) == 3
    assert code.rate == Fraction(4, 7)


def test_repetition_code():
    rep = make_repetition(5)
    assert rep.t == 2 and rep.rate == Fraction(1, 5)
    assert bdd_decode(rep, np.array([1, 1, 0, 0, 0], dtype=np.uint8)) == {0, 1}
    assert bdd_decode(rep, np.array([1, 1, 1, 0, 0], dtype=np.uint8)) == {3, 4}


def test_component_from_name(tmp_path):
    assert component_from_name("bch31_21").n == 31
    assert component_from_name("rep5").t == 2
    path = tmp_path / "rep5.alist"
    save_alist(make_repetition(5).h, path)
    assert component_from_name(str(path)).n == 5

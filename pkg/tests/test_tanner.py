import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chgldpc.tanner import (QcLayout, TannerGraph, build_permutation_code, girth, layout_girth,
                            search_shifts)
from oracles import girth_bruteforce

CYCLE8 = [(0, 1), (1, 2), (2, 3), (3, 0)]


def test_girth_of_single_8_cycle():
    assert girth(TannerGraph.from_check_lists(4, CYCLE8)) == 8


def test_girth_of_tree_is_infinite():
    g = TannerGraph.from_check_lists(5, [(0, 1, 2), (2, 3), (3, 4)])
    assert girth(g) == math.inf


def test_two_identical_block_rows_give_4_cycles():
    layout = QcLayout(3, 4, 7, ((1, 2, 3), (1, 2, 3)))
    assert layout_girth(layout) == 4


def test_small_layout_girth_12():
    layout = QcLayout(2, 2, 3, ((1,),))
    g = build_permutation_code(layout)
    assert (g.n_var, g.n_chk) == (6, 6)
    # hand enumeration: the only cycle is the Hamiltonian 12-cycle
    assert girth(g) == 12 == girth_bruteforce(6, g.chk_adj)


def test_all_zero_shifts_give_girth_4():
    assert layout_girth(QcLayout(3, 5, 7, ((0,) * 4, (0,) * 4))) == 4


def test_restricted_girth():
    g = TannerGraph.from_check_lists(4, CYCLE8 + [(0, 2)])
    assert girth(g) == 6
    assert girth(g, restrict_checks=range(4)) == 8


def test_search_girth8_p31():
    layout = search_shifts(3, 5, 31, 8, seed=3)
    assert layout is not None
    assert layout_girth(layout) >= 8
    assert search_shifts(3, 5, 31, 8, seed=3) == layout


def test_search_refuses_girth_above_12():
    assert search_shifts(2, 5, 31, 14, seed=0) is None


def test_search_girth4_trivial():
    layout = search_shifts(3, 4, 5, 4, seed=0, max_tries=10)
    assert layout is not None and layout_girth(layout) >= 4


def test_search_budget_exhausted_returns_none():
    assert search_shifts(3, 5, 5, 12, seed=0, max_tries=50) is None


def test_lower_rows_target(layout3_lower12):
    assert layout_girth(layout3_lower12, [1, 2]) == 12
    assert layout_girth(layout3_lower12) >= 8


def test_layout_validation():
    with pytest.raises(ValueError):
        QcLayout(3, 5, 7, ((0, 1, 2, 3),))
    with pytest.raises(ValueError):
        QcLayout(2, 3, 5, ((1, 9),))


def test_layout_json_round_trip(layout3):
    d = json.loads(layout3.to_json())
    assert set(d) == {"gamma", "rho", "p", "shifts"}
    assert QcLayout.from_json(layout3.to_json()) == layout3


def test_explicit_permutation_layout():
    rng = np.random.default_rng(1)
    perms = tuple(tuple(tuple(int(v) for v in rng.permutation(5)) for _ in range(4)) for _ in range(3))
    layout = QcLayout(3, 4, 5, perms=perms)
    g = build_permutation_code(layout)
    assert g.regular_degrees() == (3, 4)
    assert QcLayout.from_json(layout.to_json()).perms == perms


shift_tables = st.integers(2, 4).flatmap(
    lambda gamma: st.integers(2, 6).flatmap(
        lambda rho: st.integers(2, 11).flatmap(
            lambda p: st.tuples(st.just(gamma), st.just(rho), st.just(p), st.lists(
                st.lists(st.integers(0, p - 1), min_size=rho - 1, max_size=rho - 1),
                min_size=gamma - 1, max_size=gamma - 1)))))


@settings(max_examples=80, deadline=None)
@given(shift_tables)
def test_permutation_code_is_regular_and_symmetric(args):
    gamma, rho, p, shifts = args
    layout = QcLayout(gamma, rho, p, tuple(map(tuple, shifts)))
    g = build_permutation_code(layout)
    assert g.is_symmetric()
    assert g.regular_degrees() == (gamma, rho)
    gi = layout_girth(layout)
    assert gi == math.inf or (gi % 2 == 0 and gi >= 4)


@settings(max_examples=80, deadline=None)
@given(shift_tables)
def test_two_block_rows_girth_divisible_by_4(args):
    gamma, rho, p, shifts = args
    layout = QcLayout(gamma, rho, p, tuple(map(tuple, shifts)))
    gi = layout_girth(layout, [0, gamma - 1])
    assert gi == math.inf or gi % 4 == 0


def test_girth_matches_bruteforce_on_random_graphs():
    rng = np.random.default_rng(2024)
    checked = 0
    while checked < 100:
        n_var = int(rng.integers(3, 16))
        n_chk = int(rng.integers(2, 40 - n_var))
        lists = []
        for _ in range(n_chk):
            k = int(rng.integers(1, min(4, n_var) + 1))
            lists.append(sorted(rng.choice(n_var, k, replace=False).tolist()))
        g = TannerGraph.from_check_lists(n_var, lists)
        assert girth(g) == girth_bruteforce(n_var, g.chk_adj), lists
        checked += 1

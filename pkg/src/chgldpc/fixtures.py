"""Small hand-built subgraphs used as regression cases.

Each fixture is a standalone Tanner graph holding only the variables of
interest and the checks around them, with a chosen set of super checks. The
default component is BCH(31,21); super checks that model the worst case of a
check seeing more than t errors sit on the support of a low-weight codeword,
so bounded-distance decoding lands on that codeword and flips the two correct
variables placed on the remaining support positions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

import numpy as np

from .component import ComponentCode, make_bch_31_21
from .decoders import HybridCode, make_hybrid
from .tanner import TannerGraph
from .trapsets import TrappingSetInstance, ts_from_variables


@dataclass(frozen=True, eq=False)
class Fixture:
    name: str
    graph: TannerGraph
    super_checks: frozenset[int]
    gamma: int
    errors: tuple[int, ...]
    coord_map: dict[int, tuple[int, ...]] = field(default_factory=dict)
    note: str = ""

    def instance(self) -> TrappingSetInstance:
        return ts_from_variables(self.graph, range(self.graph.n_var))

    def code(self, component: ComponentCode | None = None) -> HybridCode:
        component = component or make_bch_31_21()
        return make_hybrid(self.graph, self.super_checks, component, gamma=self.gamma,
                           coord_map=self.coord_map, partial=True)

    def received(self) -> np.ndarray:
        y = np.zeros(self.graph.n_var, dtype=np.uint8)
        y[list(self.errors)] = 1
        return y

    def with_supers(self, name: str, supers, note: str = "") -> Fixture:
        return Fixture(name, self.graph, frozenset(supers), self.gamma, self.errors,
                       dict(self.coord_map), note)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "n_var": self.graph.n_var,
            "checks": [list(c) for c in self.graph.chk_adj],
            "super_checks": sorted(self.super_checks),
            "coord_map": {str(c): list(v) for c, v in sorted(self.coord_map.items())},
            "gamma": self.gamma,
            "errors": list(self.errors),
            "note": self.note,
        }


def _plain(name, n_var, checks, gamma, supers=(), note="") -> Fixture:
    g = TannerGraph.from_check_lists(n_var, checks)
    return Fixture(name, g, frozenset(supers), gamma, tuple(range(n_var)), {}, note)


# ---------------------------------------------------------------------------
# column weight 3

# variables 0, 1, 2 each carry one degree-1 check; 3 and 4 are the hubs
TS53_CHECKS = [(0, 3), (1, 3), (2, 3), (0, 4), (1, 4), (2, 4), (0,), (1,), (2,)]


def ts53(supers=(), name="ts53", note="") -> Fixture:
    return _plain(name, 5, TS53_CHECKS, 3, supers, note or "(5,3) elementary trapping set")


def cycle44(supers=(), name="cycle44", note="") -> Fixture:
    checks = [(0, 1), (1, 2), (2, 3), (0, 3), (0,), (1,), (2,), (3,)]
    return _plain(name, 4, checks, 3, supers, note or "(4,4) set: an 8-cycle with one dangling check per variable")


def theta64() -> Fixture:
    # hubs 0 and 1 joined directly and by two paths 0-2-3-1 and 0-4-5-1
    checks = [(0, 1), (0, 2), (2, 3), (1, 3), (0, 4), (4, 5), (1, 5), (2,), (3,), (4,), (5,)]
    return _plain("theta64", 6, checks, 3, (), "(6,4) set: two hubs joined by three paths")


def theta75() -> Fixture:
    # theta64 with the direct hub edge subdivided by variable 6
    checks = [(0, 6), (1, 6), (0, 2), (2, 3), (1, 3), (0, 4), (4, 5), (1, 5),
              (2,), (3,), (4,), (5,), (6,)]
    return _plain("theta75", 7, checks, 3, (), "(7,5) set: subdivision of theta64")


def ts73(supers=(), name="ts73", note="") -> Fixture:
    # K4 on 0..3 with the triangle 1-2-3 subdivided by 4, 5, 6
    checks = [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5), (2, 4), (2, 6), (3, 5), (3, 6),
              (4,), (5,), (6,)]
    return _plain(name, 7, checks, 3, supers, note or "(7,3) elementary trapping set")


def _k33(super_left: bool, super_right: bool, super_leaves: bool, name: str, note: str) -> Fixture:
    # variables are the nine edges (i, j) of K_{3,3}; each vertex is a degree-3 check
    left = [tuple(3 * i + j for j in range(3)) for i in range(3)]
    right = [tuple(3 * i + j for i in range(3)) for j in range(3)]
    leaves = [(v,) for v in range(9)]
    checks = left + right + leaves
    supers = []
    if super_left:
        supers += range(0, 3)
    if super_right:
        supers += range(3, 6)
    if super_leaves:
        supers += range(6, 15)
    return _plain(name, 9, checks, 3, supers, note)


def k33_fixed_set() -> Fixture:
    return _k33(True, True, False, "k33_fixed_set",
                "each variable on two degree-3 super checks and one degree-1 single check")


def k33_mixed() -> Fixture:
    return _k33(True, False, True, "k33_mixed",
                "same graph with one degree-3 super, one degree-3 single and a degree-1 super per variable")


def k33_gldpc_fixed_set() -> Fixture:
    return _k33(True, True, True, "k33_gldpc_fixed_set", "every check super: a GLDPC fixed set with t=2")


def six_error_c1() -> Fixture:
    """Six errors that defeat a code where every variable sees two super checks.

    Two degree-3 super checks each hold three errors, every error also has a
    private degree-1 super check, and three single checks pair the errors
    across the two groups. The degree-3 super checks cannot decode, the pair
    checks have even parity, so each variable collects one flip and stays.
    """
    checks = [(0, 1, 2), (3, 4, 5), (0,), (1,), (2,), (3,), (4,), (5,), (0, 3), (1, 4), (2, 5)]
    return _plain("six_error_c1", 6, checks, 3, range(8), "six-error failure pattern with two supers per variable")


# ---------------------------------------------------------------------------
# column weight 4


def cw4_triangle36(supers=(), name="cw4_triangle36") -> Fixture:
    checks = [(0, 1), (1, 2), (0, 2), (0,), (0,), (1,), (1,), (2,), (2,)]
    return _plain(name, 3, checks, 4, supers, "(3,6) set in a column-weight-4 code")


def cw4_k4_44(supers=(), name="cw4_k4_44") -> Fixture:
    checks = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0,), (1,), (2,), (3,)]
    return _plain(name, 4, checks, 4, supers, "(4,4) set in a column-weight-4 code")


def cw4_k4minus_46(supers=(), name="cw4_k4minus_46") -> Fixture:
    checks = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (0,), (1,), (2,), (2,), (3,), (3,)]
    return _plain(name, 4, checks, 4, supers, "(4,6) set in a column-weight-4 code")


# ---------------------------------------------------------------------------
# five-error cases with two super checks per variable


@lru_cache(maxsize=None)
def bch_codeword_support(weight: int) -> tuple[int, ...]:
    """Lexicographically first support of a BCH(31,21) codeword of this weight."""
    code = make_bch_31_21()
    syn = [int(s) for s in code.col_syndromes]
    where = {s: j for j, s in enumerate(syn)}
    for head in combinations(range(31), weight - 1):
        s = 0
        for j in head:
            s ^= syn[j]
        j = where.get(s)
        if j is not None and j > head[-1]:
            return head + (j,)
    raise ValueError(f"no codeword of weight {weight}")


class _Builder:
    """Assembles a subgraph where every variable ends with two super checks and
    one single check (private degree-1 checks fill the gaps)."""

    def __init__(self):
        self.n = 0
        self.checks: list[tuple[int, ...]] = []
        self.supers: set[int] = set()
        self.coords: dict[int, tuple[int, ...]] = {}
        self.errors: list[int] = []

    def var(self, corrupt: bool = True) -> int:
        v = self.n
        self.n += 1
        if corrupt:
            self.errors.append(v)
        return v

    def check(self, members, super_=False) -> int:
        self.checks.append(tuple(sorted(members)))
        c = len(self.checks) - 1
        if super_:
            self.supers.add(c)
        return c

    def overloaded_super(self, corrupt) -> list[int]:
        """Super check on k >= 3 errors plus two correct variables that its
        bounded-distance decoder (wrongly) flips."""
        correct = [self.var(False), self.var(False)]
        members = sorted(list(corrupt) + correct)
        support = bch_codeword_support(len(members))
        c = self.check(members, True)
        # corrupt variables take the first k support positions
        order = list(corrupt) + correct
        pos = {v: support[i] for i, v in enumerate(order)}
        self.coords[c] = tuple(pos[v] for v in members)
        return correct

    def complete(self):
        for v in range(self.n):
            mine = [c for c, m in enumerate(self.checks) if v in m]
            n_sup = sum(c in self.supers for c in mine)
            n_single = len(mine) - n_sup
            if n_sup > 2 or n_single > 1:
                raise ValueError(f"variable {v} already has {n_sup} super and {n_single} single checks")
            for _ in range(2 - n_sup):
                self.check((v,), True)
            for _ in range(1 - n_single):
                self.check((v,), False)

    def build(self, name: str, note: str) -> Fixture:
        self.complete()
        g = TannerGraph.from_check_lists(self.n, self.checks)
        return Fixture(name, g, frozenset(self.supers), 3, tuple(self.errors), dict(self.coords), note)


def root5() -> Fixture:
    b = _Builder()
    vs = [b.var() for _ in range(5)]
    b.overloaded_super(vs)
    return b.build("root5", "five errors on one super check")


def root4_plus_single() -> Fixture:
    b = _Builder()
    vs = [b.var() for _ in range(4)]
    b.overloaded_super(vs)
    v5 = b.var()
    b.check((vs[0], v5))
    return b.build("root4_plus_single", "four errors on one super check, a fifth sharing a single check")


def root3(case: str) -> Fixture:
    """Three errors on one super check and two more attached as in ``case``.

    a: v4 on v1's super, v5 on v2's single, v4 and v5 share a super
    b: v4 on v1's super, v5 on v2's super, v4 and v5 share a super
    c: v4 on v1's super, v5 on v2's super, v4 and v5 share a single
    d: v4 on v1's single, v5 on v2's single, v4 and v5 share a super
    e: v4 and v5 both on v1's super
    f: v4 and v5 both on v1's single
    """
    b = _Builder()
    v1, v2, v3 = (b.var() for _ in range(3))
    b.overloaded_super([v1, v2, v3])
    v4, v5 = b.var(), b.var()
    if case == "a":
        b.check((v1, v4), True)
        b.check((v2, v5))
        b.check((v4, v5), True)
    elif case == "b":
        b.check((v1, v4), True)
        b.check((v2, v5), True)
        b.check((v4, v5), True)
    elif case == "c":
        b.check((v1, v4), True)
        b.check((v2, v5), True)
        b.check((v4, v5))
    elif case == "d":
        b.check((v1, v4))
        b.check((v2, v5))
        b.check((v4, v5), True)
    elif case == "e":
        b.overloaded_super([v1, v4, v5])
    elif case == "f":
        b.check((v1, v4, v5))
    else:
        raise ValueError(f"unknown case {case!r}")
    return b.build(f"root3_{case}", _ROOT3_NOTES[case])


_ROOT3_NOTES = {
    "a": "v4 on v1's super, v5 on v2's single, shared super",
    "b": "v4 on v1's super, v5 on v2's super, shared super",
    "c": "v4 on v1's super, v5 on v2's super, shared single",
    "d": "v4 on v1's single, v5 on v2's single, shared super",
    "e": "v4 and v5 on v1's super",
    "f": "v4 and v5 on v1's single",
}


# ---------------------------------------------------------------------------
# registry


def all_fixtures() -> dict[str, Fixture]:
    fx = [
        cycle44(),
        ts53(),
        theta64(),
        theta75(),
        ts73(),
        ts53(range(9), "ts53_all_super", "every check converted"),
        ts53((0, 4), "ts53_split_pair", "two degree-2 super checks sharing no variable"),
        ts53((0, 3), "ts53_shared_outer_pair", "two degree-2 super checks on the same outer variable"),
        ts53((0, 6), "ts53_edge_and_leaf", "a degree-2 and a degree-1 super check on one variable"),
        ts53((6, 7), "ts53_leaf_pair", "two degree-1 super checks"),
        ts53((0, 1), "ts53_shared_hub_pair", "two degree-2 super checks meeting at a hub"),
        ts53((0, 4, 8), "ts53_one_super_each", "every variable on exactly one super check"),
        ts73((0, 5, 8, 10), "ts73_one_super_each", "every variable on exactly one super check"),
        cycle44((4, 5, 6, 7), "cycle44_leaf_supers", "degree-1 checks converted"),
        k33_fixed_set(),
        k33_mixed(),
        k33_gldpc_fixed_set(),
        six_error_c1(),
        cw4_triangle36(),
        cw4_k4_44(),
        cw4_k4minus_46(),
        root5(),
        root4_plus_single(),
    ]
    fx += [root3(c) for c in "abcdef"]
    return {f.name: f for f in fx}

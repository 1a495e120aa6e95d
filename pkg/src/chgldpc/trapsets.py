"""Trapping sets: enumeration, harmfulness on isolated subgraphs, critical
sets, subdivisions and fixed-set conditions.

The isolated model decodes only the subgraph induced by a variable set. Every
variable outside the set is held at 0 and never flips, a check of induced
degree one acts on its single in-set neighbour, and a super check runs BDD on
its in-set values with the remaining coordinates padded with zeros.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import networkx as nx
import numpy as np

from .component import ComponentCode, make_bch_31_21
from .decoders import DEFAULT_MAX_ITERS, HybridCode, decode_batch, make_hybrid, pbf_step
from .errors import InternalError, RefusalError
from .tanner import TannerGraph, girth

MAX_ENUM_A = 10
MAX_CRITICAL_CHECKS = 20


@dataclass(frozen=True, eq=False)
class TrappingSetInstance:
    """A variable set together with its induced checks.

    ``members[i]`` lists the in-set neighbours of ``checks[i]`` and
    ``coords[i]`` their positions in that check's full neighbour list, which
    is what a super check's coordinate map refers to.
    """

    variables: tuple[int, ...]
    checks: tuple[int, ...]
    members: tuple[tuple[int, ...], ...]
    coords: tuple[tuple[int, ...], ...]
    gamma: int

    @property
    def a(self) -> int:
        return len(self.variables)

    @cached_property
    def odd_checks(self) -> tuple[int, ...]:
        return tuple(c for c, m in zip(self.checks, self.members) if len(m) % 2)

    @property
    def b(self) -> int:
        return len(self.odd_checks)

    @property
    def label(self) -> tuple[int, int]:
        return (self.a, self.b)

    @cached_property
    def elementary(self) -> bool:
        return all(len(m) <= 2 for m in self.members)

    def checks_of_degree(self, d: int) -> tuple[int, ...]:
        return tuple(c for c, m in zip(self.checks, self.members) if len(m) == d)

    def to_dict(self) -> dict:
        return {"variables": list(self.variables), "checks": list(self.checks),
                "a": self.a, "b": self.b, "elementary": self.elementary}

    def __repr__(self) -> str:
        return f"TrappingSetInstance{self.label}{list(self.variables)}"


def ts_from_variables(g: TannerGraph, variables: Iterable[int]) -> TrappingSetInstance:
    """Induced subgraph of ``variables`` in ``g``."""
    vs = tuple(sorted(set(int(v) for v in variables)))
    inset = set(vs)
    checks = sorted({c for v in vs for c in g.var_adj[v]})
    members, coords = [], []
    for c in checks:
        nb = g.chk_adj[c]
        members.append(tuple(u for u in nb if u in inset))
        coords.append(tuple(j for j, u in enumerate(nb) if u in inset))
    gamma = max((len(g.var_adj[v]) for v in vs), default=0)
    return TrappingSetInstance(vs, tuple(checks), tuple(members), tuple(coords), gamma)


def standalone_ts(n_var: int, chk_lists: Sequence[Sequence[int]]) -> tuple[TannerGraph, TrappingSetInstance]:
    """Wrap a hand-drawn subgraph (all variables in the set) as an instance."""
    g = TannerGraph.from_check_lists(n_var, chk_lists)
    return g, ts_from_variables(g, range(n_var))


# ---------------------------------------------------------------------------
# enumeration


class _Enumerator:
    """Leafless cores grown from cycles by ears, then hanging trees.

    A connected elementary set with a cycle is its 2-core plus trees whose
    vertices each attach by a single edge. Cores are built from a cycle by
    repeatedly adding a path of new vertices that closes back onto the set;
    every intermediate set is itself a leafless induced subgraph, so the
    search reaches each core. Branches are cut when no superset within the
    size budget can get down to ``b_max`` odd checks.
    """

    def __init__(self, g: TannerGraph, a_max: int, b_max: int, period: int | None = None):
        self.g = g
        self.period = period
        self.shifts = _shift_tables(g.n_var, period) if period else [list(range(g.n_var))]
        self.a_max = a_max
        self.b_max = b_max
        self.nbrs = [[(c, u) for c in g.var_adj[v] for u in g.chk_adj[c] if u != v]
                     for v in range(g.n_var)]
        degs = g.var_degrees() or [0]
        self.dmin, self.dmax = min(degs), max(degs)
        self.triangle_free = girth(g, limit=8) >= 8
        self.cnt = [0] * g.n_chk
        # number of checks of each variable already holding two set members
        self.blocked = [0] * g.n_var
        self.seen: set[int] = set()        # canonical keys of expanded cores
        self.trees_seen: set[int] = set()
        self.found: list[tuple[int, ...]] = []

    # check counters -------------------------------------------------------
    def _addable(self, w: int) -> bool:
        return not self.blocked[w]

    def _edges_into(self, w: int) -> int:
        cnt = self.cnt
        return sum(cnt[c] == 1 for c in self.g.var_adj[w])

    def _add(self, w: int):
        cnt = self.cnt
        for c in self.g.var_adj[w]:
            cnt[c] += 1
            if cnt[c] == 2:
                for u in self.g.chk_adj[c]:
                    self.blocked[u] += 1

    def _remove(self, w: int):
        cnt = self.cnt
        for c in self.g.var_adj[w]:
            if cnt[c] == 2:
                for u in self.g.chk_adj[c]:
                    self.blocked[u] -= 1
            cnt[c] -= 1

    def _hopeless(self, members: list[int], b: int) -> bool:
        """True when every superset with at most ``a_max`` variables has b > b_max.

        Adding r variables of total degree D with E edges back into the set
        and F edges among themselves gives b + D - 2E - 2F. E is at most the
        r largest edge counts of addable outside variables (and at most b,
        since each such edge pairs off an odd check), F is at most the edge
        budget of r vertices and at most (D - E) / 2.
        """
        if b <= self.b_max:
            return False
        r_max = self.a_max - len(members)
        if r_max <= 0:
            return True
        cnt = self.cnt
        k: dict[int, int] = {}
        for v in members:
            for c, w in self.nbrs[v]:
                if cnt[c] == 1:
                    k[w] = k.get(w, 0) + 1
        blocked = self.blocked
        ks = sorted((e for w, e in k.items() if not blocked[w]), reverse=True)
        top = 0
        for r in range(1, r_max + 1):
            if r <= len(ks):
                top += ks[r - 1]
            d = r * self.dmin
            e = min(top, b)
            f = min(self._max_edges(r), (d - e) // 2)
            if b + d - 2 * e - 2 * f <= self.b_max:
                return False
        return True

    def _max_edges(self, r: int) -> int:
        # triangle-free variable graphs (girth >= 8) obey Turan's bound
        return r * r // 4 if self.triangle_free else r * (r - 1) // 2

    def _record(self, members: list[int], b: int):
        if b <= self.b_max:
            self.found.append(tuple(sorted(members)))

    # cores ----------------------------------------------------------------
    def _key(self, members: list[int]) -> int:
        """Canonical mask of the set's orbit under the cyclic shift."""
        return min(sum(1 << t[v] for v in members) for t in self.shifts)

    def run(self) -> list[tuple[int, ...]]:
        # with a cyclic shift, every orbit has a member whose seed cycle is
        # rooted at offset 0 of some block column
        roots = range(0, self.g.n_var, self.period) if self.period else range(self.g.n_var)
        for u in roots:
            self._add(u)
            self._seed_walk(u, u, [], len(self.g.var_adj[u]))
            self._remove(u)
        return self.found

    def _seed_walk(self, root: int, last: int, path: list[int], b: int):
        for c, w in self.nbrs[last]:
            if w <= root or w in path or self.cnt[c] != 1 or not self._addable(w):
                continue
            k = self._edges_into(w)
            nb = b + len(self.g.var_adj[w]) - 2 * k
            self._add(w)
            members = [root] + path + [w]
            if k >= 2:
                if all(self._edges_in_set(v) >= 2 for v in members):
                    key = self._key(members)
                    if key not in self.seen:
                        self.seen.add(key)
                        self._grow_core(members, _mask(members), nb)
            elif len(members) < self.a_max and not self._hopeless(members, nb):
                self._seed_walk(root, w, path + [w], nb)
            self._remove(w)

    def _edges_in_set(self, v: int) -> int:
        cnt = self.cnt
        return sum(cnt[c] == 2 for c in self.g.var_adj[v])

    def _grow_core(self, members: list[int], mask: int, b: int):
        self._record(members, b)
        # a set has a unique core, so tree sets never repeat across cores
        self.trees_seen = set()
        self._grow_trees(members, mask, b)
        if len(members) >= self.a_max or self._hopeless(members, b):
            return
        for u in list(members):
            self._ear_walk(members, mask, u, [], b)

    def _ear_walk(self, members: list[int], mask: int, last: int, path: list[int], b: int):
        for c, w in self.nbrs[last]:
            if (mask >> w) & 1 or w in path or self.cnt[c] != 1 or not self._addable(w):
                continue
            k = self._edges_into(w)
            nb = b + len(self.g.var_adj[w]) - 2 * k
            self._add(w)
            grown = members + path + [w]
            if k >= 2:
                key = self._key(grown)
                if key not in self.seen:
                    self.seen.add(key)
                    self._grow_core(grown, mask | _mask(path + [w]), nb)
            elif len(grown) < self.a_max and not self._hopeless(grown, nb):
                self._ear_walk(members, mask, w, path + [w], nb)
            self._remove(w)

    # trees ----------------------------------------------------------------
    def _grow_trees(self, members: list[int], mask: int, b: int):
        # a tree vertex adds deg - 2 >= 0 odd checks, so b never drops here
        if len(members) >= self.a_max or b + self.dmin - 2 > self.b_max:
            return
        cnt = self.cnt
        cands = set()
        for v in members:
            for c, w in self.nbrs[v]:
                if not (mask >> w) & 1 and cnt[c] == 1:
                    cands.add(w)
        for w in sorted(cands):
            checks = self.g.var_adj[w]
            if sum(cnt[c] == 1 for c in checks) != 1 or self.blocked[w]:
                continue
            nb = b + len(checks) - 2
            m2 = mask | (1 << w)
            if nb > self.b_max or m2 in self.trees_seen:
                continue
            self.trees_seen.add(m2)
            self._add(w)
            grown = members + [w]
            self._record(grown, nb)
            self._grow_trees(grown, m2, nb)
            self._remove(w)


def _mask(vs: Iterable[int]) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def _shift_tables(n: int, period: int) -> list[list[int]]:
    """All powers of the shift v -> (v // p) * p + (v % p + 1) % p."""
    return [[(v // period) * period + (v % period + k) % period for v in range(n)]
            for k in range(period)]


def is_shift_invariant(g: TannerGraph, period: int) -> bool:
    """Whether shifting every block of ``period`` variables by one maps checks to checks."""
    if period <= 0 or g.n_var % period:
        return False
    t = _shift_tables(g.n_var, period)[1 % period]
    checks = {frozenset(c) for c in g.chk_adj}
    return all(frozenset(t[v] for v in c) in checks for c in g.chk_adj)


def _check_enum_args(g: TannerGraph, a_max: int, period: int | None):
    if a_max > MAX_ENUM_A:
        raise RefusalError(f"a_max={a_max} exceeds the enumeration guard {MAX_ENUM_A}")
    if period is not None and not is_shift_invariant(g, period):
        raise ValueError(f"cyclic shift with period {period} is not an automorphism of the graph")


def elementary_orbits(g: TannerGraph, a_max: int = 8, b_max: int = 8,
                      period: int | None = None) -> list[tuple[tuple[int, ...], int]]:
    """One representative per orbit of the cyclic shift, with the orbit size.

    The representative is the lexicographically smallest sorted tuple in the
    orbit. Any property preserved by the shift (harmfulness under a
    placement of whole block rows, for instance) only needs checking on the
    representatives. Without ``period`` every set is its own orbit.
    """
    _check_enum_args(g, a_max, period)
    en = _Enumerator(g, a_max, b_max, period)
    reps = {}
    for vs in en.run():
        orbit = {tuple(sorted(t[v] for v in vs)) for t in en.shifts}
        reps[min(orbit)] = len(orbit)
    return sorted(reps.items(), key=lambda kv: (len(kv[0]), kv[0]))


def iter_elementary_sets(g: TannerGraph, a_max: int = 8, b_max: int = 8,
                         period: int | None = None) -> list[tuple[int, ...]]:
    """Variable sets (sorted tuples) of every connected elementary trapping set
    with a <= a_max, b <= b_max and at least one cycle, ordered by (a, set).

    ``period`` declares that shifting each block of that many consecutive
    variables cyclically is an automorphism (true for circulant layouts with
    block size p). Cores are then expanded once per orbit and the results
    unfolded over the orbit, which divides the work by about p.
    """
    _check_enum_args(g, a_max, period)
    en = _Enumerator(g, a_max, b_max, period)
    found = set(en.run())
    if period:
        found = {tuple(sorted(t[v] for v in vs)) for vs in found for t in en.shifts}
    return sorted(found, key=lambda vs: (len(vs), vs))


def enumerate_elementary_ts(g: TannerGraph, a_max: int = 8, b_max: int = 8,
                            period: int | None = None) -> list[TrappingSetInstance]:
    """Elementary trapping sets as instances, sorted by (a, b, variables).

    Only connected sets are listed; a disconnected set behaves as the
    independent union of its components in the isolated model.
    """
    out = [ts_from_variables(g, vs) for vs in iter_elementary_sets(g, a_max, b_max, period)]
    out.sort(key=lambda t: (t.a, t.b, t.variables))
    return out


# ---------------------------------------------------------------------------
# isolated-model decoding


def _default_component() -> ComponentCode:
    return make_bch_31_21()


def isolated_code(ts: TrappingSetInstance, super_set: Iterable[int] = (),
                  component: ComponentCode | None = None,
                  coord_map: dict | None = None) -> HybridCode:
    """HybridCode for the subgraph induced by ``ts`` with ``super_set`` converted.

    Local variable i is ``ts.variables[i]`` and local check j is
    ``ts.checks[j]``. A converted check keeps its in-set neighbours at their
    coordinates in the full check (through ``coord_map`` when given); the
    other coordinates are zero padding.
    """
    supers = set(super_set)
    if not supers <= set(ts.checks):
        raise ValueError(f"super checks {sorted(supers - set(ts.checks))} are not induced by the set")
    component = component or _default_component()
    local = {v: i for i, v in enumerate(ts.variables)}
    g = TannerGraph.from_check_lists(ts.a, [[local[v] for v in m] for m in ts.members])
    loc_supers, loc_coords = [], {}
    for j, c in enumerate(ts.checks):
        if c not in supers:
            continue
        loc_supers.append(j)
        pos = ts.coords[j]
        if coord_map is not None and c in coord_map:
            pos = tuple(coord_map[c][p] for p in pos)
        loc_coords[j] = pos
    return make_hybrid(g, loc_supers, component, gamma=ts.gamma, coord_map=loc_coords, partial=True)


def _bitplanes(a: int) -> tuple[list[int], int]:
    """Bit k of plane v is bit v of k, for all 2^a patterns k."""
    p = 1 << a
    full = (1 << p) - 1
    planes = []
    for v in range(a):
        half = 1 << v
        block = ((1 << half) - 1) << half
        planes.append(block * (full // ((1 << (2 * half)) - 1)))
    return planes, full


def _pbf_failures_fast(ts: TrappingSetInstance, supers: set[int], max_iters: int) -> int:
    """Bitmask over all 2^a patterns of those PBF fails to clear.

    Every pattern is simulated at once by carrying one big integer per
    variable. Valid when each super check has at most t in-set neighbours,
    so its BDD always decodes to zero and flips exactly the corrupt ones.
    """
    a = ts.a
    x, _ = _bitplanes(a)
    local = {v: i for i, v in enumerate(ts.variables)}
    plan = []
    for c, m in zip(ts.checks, ts.members):
        plan.append((c in supers, [local[v] for v in m]))
    thr = ts.gamma // 2 + 1
    for _ in range(max_iters):
        msgs: list[list[int]] = [[] for _ in range(a)]
        for sup, m in plan:
            if sup or len(m) == 1:
                for i in m:
                    msgs[i].append(x[i])
            else:
                par = 0
                for i in m:
                    par ^= x[i]
                for i in m:
                    msgs[i].append(par)
        moved = 0
        for i in range(a):
            ms = msgs[i]
            if len(ms) < thr:
                continue
            at_least = [-1] + [0] * thr
            for f in ms:
                for k in range(thr, 0, -1):
                    at_least[k] |= at_least[k - 1] & f
            flip = at_least[thr]
            if flip:
                x[i] ^= flip
                moved |= flip
        if not moved:
            break
    fail = 0
    for xi in x:
        fail |= xi
    return fail


def _all_patterns(a: int) -> np.ndarray:
    k = np.arange(1 << a, dtype=np.int64)
    return ((k[:, None] >> np.arange(a)) & 1).astype(np.uint8)


def failing_patterns(ts: TrappingSetInstance, super_set: Iterable[int] = (), decoder: str = "pbf",
                     component: ComponentCode | None = None, max_iters: int = DEFAULT_MAX_ITERS,
                     coord_map: dict | None = None) -> list[int]:
    """Patterns (as integers over local variable bits) that fail in the isolated model."""
    supers = set(super_set)
    if not supers <= set(ts.checks):
        raise ValueError("super checks must be induced checks of the set")
    t = (component or _default_component()).t
    fast = decoder == "pbf" and all(
        len(m) <= t for c, m in zip(ts.checks, ts.members) if c in supers)
    if fast:
        mask = _pbf_failures_fast(ts, supers, max_iters)
        return [k for k in range(1, 1 << ts.a) if (mask >> k) & 1]
    code = isolated_code(ts, supers, component, coord_map)
    res = decode_batch(code, _all_patterns(ts.a), decoder, max_iters)
    return np.flatnonzero(~res.succeeded()).tolist()


def is_harmful(ts: TrappingSetInstance, super_set: Iterable[int] = (), decoder: str = "pbf",
               component: ComponentCode | None = None, max_iters: int = DEFAULT_MAX_ITERS,
               coord_map: dict | None = None) -> bool:
    """Whether some nonzero pattern on ``ts`` is not cleared in the isolated model."""
    return bool(failing_patterns(ts, super_set, decoder, component, max_iters, coord_map))


def critical_number(ts: TrappingSetInstance, super_set: Iterable[int] = (), decoder: str = "pbf",
                    component: ComponentCode | None = None,
                    max_iters: int = DEFAULT_MAX_ITERS) -> float:
    """Smallest failing error weight on ``ts``; ``math.inf`` when harmless."""
    fails = failing_patterns(ts, super_set, decoder, component, max_iters)
    return min((k.bit_count() for k in fails), default=math.inf)


# ---------------------------------------------------------------------------
# critical sets


@dataclass(frozen=True)
class CriticalSet:
    """Converted checks. ``completed`` lists checks added after the reduction
    itself left the set harmful (only the column-weight-4 reduction does this)."""

    checks: tuple[int, ...]
    completed: tuple[int, ...] = ()

    @property
    def size(self) -> int:
        return len(self.checks)


def min_critical_set_size(ts: TrappingSetInstance, decoder: str = "pbf",
                          component: ComponentCode | None = None) -> int:
    """Exact smallest number of degree-2 checks whose conversion makes ``ts`` harmless."""
    cands = ts.checks_of_degree(2)
    if len(cands) > MAX_CRITICAL_CHECKS:
        raise RefusalError(f"{len(cands)} degree-2 checks exceed the guard {MAX_CRITICAL_CHECKS}")
    for k in range(len(cands) + 1):
        for sub in combinations(cands, k):
            if not is_harmful(ts, sub, decoder, component):
                return k
    raise RefusalError("no subset of degree-2 checks eliminates this set")


def minimal_critical_sets(ts: TrappingSetInstance, decoder: str = "pbf",
                          component: ComponentCode | None = None) -> list[tuple[int, ...]]:
    """All critical sets of minimum size."""
    cands = ts.checks_of_degree(2)
    k = min_critical_set_size(ts, decoder, component)
    return [sub for sub in combinations(cands, k) if not is_harmful(ts, sub, decoder, component)]


class _Reducer:
    """Working copy of a trapping set for the cycle-breaking algorithms.

    Each variable carries check stubs; a stub is degree-1 when its check has
    one remaining neighbour or has been converted and split.
    """

    def __init__(self, ts: TrappingSetInstance):
        self.ts = ts
        self.alive = set(ts.variables)
        self.members = {c: set(m) for c, m in zip(ts.checks, ts.members)}
        self.split: set[int] = set()
        self.converted: list[int] = []

    def _stubs(self, v: int) -> tuple[list[int], list[int]]:
        one, two = [], []
        for c, m in self.members.items():
            if v not in m:
                continue
            live = m & self.alive
            if c in self.split or len(live) == 1:
                one.append(c)
            elif len(live) == 2:
                two.append(c)
        return one, two

    def profile(self, v: int) -> tuple[int, int]:
        one, two = self._stubs(v)
        return len(one), len(two)

    def _graph(self) -> nx.Graph:
        h = nx.Graph()
        h.add_nodes_from(self.alive)
        for c, m in self.members.items():
            live = m & self.alive
            if c not in self.split and len(live) == 2:
                u, w = sorted(live)
                h.add_edge(u, w, check=c)
        return h

    def n_converted(self, v: int) -> int:
        return sum(v in self.members[c] for c in self.converted)

    def choose(self, cands: Iterable[int]) -> int | None:
        """Candidate variable with the fewest converted checks, lowest index on ties."""
        return min(cands, key=lambda u: (self.n_converted(u), u), default=None)

    def pick_checks(self, v: int, k: int) -> list[int]:
        """The k degree-2 checks at v to convert.

        Ties are broken so conversions spread out: first by how many converted
        checks the other endpoint already has, then by the number of unbroken
        cycles through the check (more first), then by check index.
        """
        _, two = self._stubs(v)
        h = self._graph()
        score = {c: 0 for c in two}
        for cyc in nx.simple_cycles(h):
            for i in range(len(cyc)):
                c = h.edges[cyc[i], cyc[(i + 1) % len(cyc)]]["check"]
                if c in score:
                    score[c] += 1

        def other(c):
            (u,) = (self.members[c] & self.alive) - {v}
            return self.n_converted(u)

        return sorted(two, key=lambda c: (other(c), -score[c], c))[:k]

    def convert(self, checks: Iterable[int]):
        for c in checks:
            self.split.add(c)
            self.converted.append(c)

    def remove(self, v: int):
        self.alive.discard(v)

    def prune(self):
        changed = True
        while changed:
            changed = False
            for v in sorted(self.alive):
                if self.profile(v)[0] >= 2:
                    self.alive.discard(v)
                    changed = True


def _fallback(red: _Reducer, min_two: int) -> bool:
    v = red.choose(u for u in red.alive if red.profile(u)[1] >= min_two)
    if v is None:
        return False
    red.convert(red.pick_checks(v, 1))
    return True


def find_critical_set_cw3(ts: TrappingSetInstance, decoder: str = "pbf",
                          component: ComponentCode | None = None) -> CriticalSet:
    """Cycle breaking for column weight 3.

    While variables remain: if some variable has one degree-1 and two degree-2
    checks, convert one of those degree-2 checks, split it and drop the
    variable; otherwise convert one degree-2 check of the first variable that
    has one. Then repeatedly drop variables with at least two degree-1 checks.
    """
    if not ts.elementary:
        raise ValueError("critical sets are defined for elementary trapping sets")
    red = _Reducer(ts)
    while red.alive:
        v = red.choose(u for u in red.alive if red.profile(u) == (1, 2))
        if v is not None:
            red.convert(red.pick_checks(v, 1))
            red.remove(v)
        elif not _fallback(red, 1):
            raise InternalError(f"no degree-2 check left to convert in {ts}")
        red.prune()
    return _verified(ts, red.converted, decoder, component)


def find_critical_set_cw4(ts: TrappingSetInstance, decoder: str = "pbf",
                          component: ComponentCode | None = None) -> CriticalSet:
    """Cycle breaking for column weight 4.

    Prefer a variable with two degree-1 and two degree-2 checks (convert one),
    else one with one degree-1 and three degree-2 checks (convert two); the
    variable is dropped after its conversions. When neither exists, one
    degree-2 check of the first variable that has one is converted. Variables
    with at least two degree-1 checks are pruned after each step.
    """
    if not ts.elementary:
        raise ValueError("critical sets are defined for elementary trapping sets")
    red = _Reducer(ts)
    while red.alive:
        alive = sorted(red.alive)
        v = red.choose(u for u in alive if red.profile(u) == (2, 2))
        if v is not None:
            red.convert(red.pick_checks(v, 1))
            red.remove(v)
        else:
            v = red.choose(u for u in alive if red.profile(u) == (1, 3))
            if v is not None:
                red.convert(red.pick_checks(v, 2))
                red.remove(v)
            elif not _fallback(red, 1):
                raise InternalError(f"no degree-2 check left to convert in {ts}")
        red.prune()
    return _completed(ts, red.converted, decoder, component)


def _verified(ts, converted, decoder, component) -> CriticalSet:
    if is_harmful(ts, converted, decoder, component):
        raise InternalError(f"checks {converted} do not eliminate {ts}")
    return CriticalSet(tuple(converted))


def _completed(ts, converted, decoder, component) -> CriticalSet:
    """Verify, and if still harmful add degree-2 checks greedily.

    Pruning a variable with two degree-1 checks assumes two flip messages
    suffice, but with gamma = 4 a variable needs three. A leftover cycle of
    such variables (the triangle left in K4, say) can then stay stuck. Each
    round converts the degree-2 check leaving the fewest failing patterns,
    lowest index on ties.
    """
    chosen = list(converted)
    fails = failing_patterns(ts, chosen, decoder, component)
    extra = []
    while fails:
        cands = [c for c in ts.checks_of_degree(2) if c not in chosen]
        if not cands:
            raise InternalError(f"no degree-2 check left to convert in {ts}")
        scored = [(len(failing_patterns(ts, chosen + [c], decoder, component)), c) for c in cands]
        n_fail, best = min(scored)
        chosen.append(best)
        extra.append(best)
        fails = n_fail
    return CriticalSet(tuple(chosen), tuple(extra))


# ---------------------------------------------------------------------------
# subdivisions


def induced_simple_graph(ts: TrappingSetInstance) -> nx.Graph:
    """Variables joined whenever they share an induced check."""
    h = nx.Graph()
    h.add_nodes_from(ts.variables)
    for m in ts.members:
        for u, w in combinations(m, 2):
            h.add_edge(u, w)
    return h


def _suppressions(h: nx.MultiGraph) -> Iterator[nx.MultiGraph]:
    for w in h.nodes:
        if h.degree(w) != 2:
            continue
        nbrs = [u for _, u in h.edges(w)]
        if w in nbrs:
            continue
        u, v = nbrs
        if u == v:
            continue
        h2 = h.copy()
        h2.remove_node(w)
        h2.add_edge(u, v)
        yield h2


def is_subdivision(ts_big: TrappingSetInstance | nx.Graph, ts_small: TrappingSetInstance | nx.Graph) -> bool:
    """Whether the big set's simple graph is an edge subdivision of the small one's.

    Degree-2 vertices of the big graph are suppressed in every possible order
    until the vertex counts match, then tested for isomorphism.
    """
    big = ts_big if isinstance(ts_big, nx.Graph) else induced_simple_graph(ts_big)
    small = ts_small if isinstance(ts_small, nx.Graph) else induced_simple_graph(ts_small)
    if big.number_of_nodes() > 12:
        raise RefusalError("subdivision test is limited to 12 vertices")
    need = big.number_of_nodes() - small.number_of_nodes()
    if need < 1 or big.number_of_edges() - small.number_of_edges() != need:
        return False
    if nx.number_connected_components(big) != nx.number_connected_components(small):
        return False
    target = nx.MultiGraph(small)
    frontier = [nx.MultiGraph(big)]
    for _ in range(need):
        nxt, keys = [], set()
        for h in frontier:
            for h2 in _suppressions(h):
                key = nx.weisfeiler_lehman_graph_hash(nx.Graph(h2)) + str(sorted(d for _, d in h2.degree()))
                key += str(sorted(map(sorted, h2.edges())))
                if key in keys:
                    continue
                keys.add(key)
                nxt.append(h2)
        frontier = nxt
    return any(nx.is_isomorphic(h, target) for h in frontier)


def subdivide(g: TannerGraph, check: int) -> TannerGraph:
    """Insert a new variable on the degree-2 check ``check``.

    The check is replaced by two degree-2 checks through the new variable,
    which also gets ``gamma - 2`` degree-1 checks so its degree matches.
    """
    if len(g.chk_adj[check]) != 2:
        raise ValueError("only degree-2 checks can be subdivided")
    u, v = g.chk_adj[check]
    w = g.n_var
    gamma = max(g.var_degrees())
    lists = [list(m) for c, m in enumerate(g.chk_adj) if c != check]
    lists += [[u, w], [w, v]] + [[w] for _ in range(gamma - 2)]
    return TannerGraph.from_check_lists(g.n_var + 1, lists)


# ---------------------------------------------------------------------------
# fixed sets

FIXED_SET_KINDS = ("ldpc", "gldpc", "ch_c1", "ch_cw4")


def fixed_set_conditions(kind: str, candidate: Iterable[int], code: HybridCode) -> dict[str, bool]:
    """Structural conditions (a), (b), (c) for the chosen fixed-set result.

    ldpc: (a) each candidate variable has >= ceil(gamma/2) even-degree checks;
    (b) no outside variable touches more than floor(gamma/2) odd-degree
    checks; (c) unused.
    gldpc: (a) induced degrees in {1, t+1}; (b) each variable has ceil(gamma/2)
    checks of degree t+1 and floor(gamma/2) of degree 1; (c) no
    floor(gamma/2)+1 checks of degree t+1 share an outside variable.
    ch_c1 / ch_cw4: (a) induced degrees in {1, 3}; (b) each variable has 2
    (resp. 3) super checks of degree 3 and one check of degree 1; (c) no two
    induced checks share an outside variable.
    """
    if kind not in FIXED_SET_KINDS:
        raise ValueError(f"unknown fixed-set kind {kind!r}")
    cand = sorted(set(int(v) for v in candidate))
    if not cand:
        raise ValueError("candidate must be nonempty")
    g, gamma = code.graph, code.gamma
    t = code.component.t if code.component is not None else 2
    if kind == "ch_c1" and gamma != 3:
        raise ValueError("ch_c1 applies to column weight 3")
    if kind == "ch_cw4" and gamma != 4:
        raise ValueError("ch_cw4 applies to column weight 4")
    if kind == "gldpc" and len(code.super_checks) != g.n_chk:
        raise ValueError("gldpc conditions need every check to be a super check")
    inset = set(cand)
    ideg = {}
    for v in cand:
        for c in g.var_adj[v]:
            ideg[c] = sum(u in inset for u in g.chk_adj[c])
    outside_hits: dict[int, list[int]] = {}
    for c in ideg:
        for u in g.chk_adj[c]:
            if u not in inset:
                outside_hits.setdefault(u, []).append(c)

    half_up, half_down = -(-gamma // 2), gamma // 2
    if kind == "ldpc":
        a = all(sum(ideg[c] % 2 == 0 for c in g.var_adj[v]) >= half_up for v in cand)
        b = all(sum(ideg[c] % 2 for c in cs) <= half_down for cs in outside_hits.values())
        return {"a": a, "b": b, "c": True}
    if kind == "gldpc":
        a = all(d in (1, t + 1) for d in ideg.values())
        b = all(sum(ideg[c] == t + 1 for c in g.var_adj[v]) == half_up
                and sum(ideg[c] == 1 for c in g.var_adj[v]) == half_down for v in cand)
        c = all(sum(ideg[x] == t + 1 for x in cs) <= half_down for cs in outside_hits.values())
        return {"a": a, "b": b, "c": c}
    n_sup = 2 if kind == "ch_c1" else 3
    a = all(d in (1, 3) for d in ideg.values())
    b = all(sum(ideg[c] == 3 and c in code.super_checks for c in g.var_adj[v]) == n_sup
            and sum(ideg[c] == 1 for c in g.var_adj[v]) == 1 for v in cand)
    c = all(len(cs) <= 1 for cs in outside_hits.values())
    return {"a": a, "b": b, "c": c}


def is_pbf_fixed_point(code: HybridCode, support: Iterable[int], iters: int = 3) -> bool:
    """The word with ones on ``support`` is unchanged by ``iters`` PBF iterations."""
    x = np.zeros(code.n, dtype=np.uint8)
    x[list(support)] = 1
    start = x.copy()
    for _ in range(iters):
        x = pbf_step(code, x)
        if not np.array_equal(x, start):
            return False
    return True


def check_fixed_set(kind: str, candidate: Iterable[int], code: HybridCode, iters: int = 3) -> bool:
    """Structural test, confirmed dynamically whenever it passes."""
    cand = sorted(set(candidate))
    ok = all(fixed_set_conditions(kind, cand, code).values())
    if ok and not is_pbf_fixed_point(code, cand, iters):
        raise InternalError(f"{kind} conditions hold for {cand} but PBF moves it")
    return ok

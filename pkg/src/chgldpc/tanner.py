"""Tanner graphs, girth, and permutation/quasi-cyclic parity-check construction."""

from __future__ import annotations

import json
import math
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .gf2 import BinaryMatrix


@dataclass(frozen=True, eq=False)
class TannerGraph:
    """Bipartite variable/check graph with sorted adjacency lists.

    Variables are ``0..n_var-1`` and checks ``0..n_chk-1``. Neighbour lists are
    kept in ascending order; that order defines super-check coordinates.
    """

    n_var: int
    n_chk: int
    var_adj: tuple[tuple[int, ...], ...]
    chk_adj: tuple[tuple[int, ...], ...]

    @classmethod
    def from_check_lists(cls, n_var: int, chk_lists: Iterable[Iterable[int]]) -> TannerGraph:
        chk_adj = tuple(tuple(sorted(set(c))) for c in chk_lists)
        var_sets: list[list[int]] = [[] for _ in range(n_var)]
        for c, vs in enumerate(chk_adj):
            for v in vs:
                if not 0 <= v < n_var:
                    raise ValueError(f"check {c} references variable {v} out of range")
                var_sets[v].append(c)
        return cls(n_var, len(chk_adj), tuple(tuple(vs) for vs in var_sets), chk_adj)

    @classmethod
    def from_matrix(cls, h: BinaryMatrix) -> TannerGraph:
        dense = h.to_dense()
        return cls.from_check_lists(h.cols, (np.flatnonzero(row).tolist() for row in dense))

    def to_matrix(self) -> BinaryMatrix:
        return BinaryMatrix.from_rows(self.chk_adj, self.n_var)

    @property
    def n_edges(self) -> int:
        return sum(len(c) for c in self.chk_adj)

    def var_degrees(self) -> list[int]:
        return [len(a) for a in self.var_adj]

    def chk_degrees(self) -> list[int]:
        return [len(a) for a in self.chk_adj]

    def regular_degrees(self) -> tuple[int, int] | None:
        """``(gamma, rho)`` when the graph is regular, else None."""
        vd, cd = set(self.var_degrees()), set(self.chk_degrees())
        if len(vd) == 1 and len(cd) == 1:
            return vd.pop(), cd.pop()
        return None

    def is_symmetric(self) -> bool:
        for c, vs in enumerate(self.chk_adj):
            if any(c not in self.var_adj[v] for v in vs):
                return False
        return sum(len(a) for a in self.var_adj) == self.n_edges


def girth(g: TannerGraph, restrict_checks: Iterable[int] | None = None,
          roots: Iterable[int] | None = None, limit: float = math.inf) -> float:
    """Length of the shortest cycle, or ``math.inf`` for a forest.

    ``restrict_checks`` keeps only those checks (all variables stay).
    ``roots`` limits the BFS start variables; pass one variable per orbit of
    a known automorphism group (e.g. one per block column of a circulant
    layout). Every cycle contains a variable, so variable roots suffice.
    With ``limit``, the search stops looking for cycles of length >= limit and
    returns ``limit`` (or inf) when none shorter exists.
    """
    n = g.n_var
    allowed = None if restrict_checks is None else set(restrict_checks)
    # node ids: variables 0..n-1, checks n..n+m-1
    adj: list[list[int]] = [[] for _ in range(n + g.n_chk)]
    for c, vs in enumerate(g.chk_adj):
        if allowed is not None and c not in allowed:
            continue
        for v in vs:
            adj[v].append(n + c)
            adj[n + c].append(v)

    best = limit
    start_nodes = range(n) if roots is None else roots
    dist = [-1] * len(adj)
    parent = [-1] * len(adj)
    for root in start_nodes:
        touched = [root]
        dist[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            du = dist[u]
            if 2 * du >= best:
                break
            for w in adj[u]:
                if w == parent[u]:
                    continue
                if dist[w] < 0:
                    dist[w] = du + 1
                    parent[w] = u
                    touched.append(w)
                    queue.append(w)
                else:
                    best = min(best, du + dist[w] + 1)
        for u in touched:
            dist[u] = -1
            parent[u] = -1
    return math.inf if best == limit else best


@dataclass(frozen=True)
class QcLayout:
    """Block layout of a permutation-based parity-check matrix.

    ``shifts`` is the ``(gamma-1) x (rho-1)`` table of circulant offsets for
    block rows/columns 1.. (block row 0 and block column 0 are identities).
    ``perms`` optionally gives explicit permutations instead, as a
    ``gamma x rho x p`` table mapping check r of block (j, l) to variable
    offset ``perms[j][l][r]``.
    """

    gamma: int
    rho: int
    p: int
    shifts: tuple[tuple[int, ...], ...] = ()
    perms: tuple[tuple[tuple[int, ...], ...], ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.perms is None:
            if len(self.shifts) != self.gamma - 1 or any(len(r) != self.rho - 1 for r in self.shifts):
                raise ValueError("shift table must be (gamma-1) x (rho-1)")
            if any(not 0 <= s < self.p for r in self.shifts for s in r):
                raise ValueError("shifts must lie in [0, p)")
        else:
            for row in self.perms:
                for perm in row:
                    if sorted(perm) != list(range(self.p)):
                        raise ValueError("perms entries must be permutations of range(p)")

    @property
    def circulant(self) -> bool:
        return self.perms is None

    def shift(self, j: int, l: int) -> int:
        return 0 if j == 0 or l == 0 else self.shifts[j - 1][l - 1]

    def block_perm(self, j: int, l: int) -> list[int]:
        if self.perms is not None:
            return list(self.perms[j][l])
        s = self.shift(j, l)
        return [(r + s) % self.p for r in range(self.p)]

    def to_json(self) -> str:
        d = {"gamma": self.gamma, "rho": self.rho, "p": self.p,
             "shifts": [list(r) for r in self.shifts]}
        if self.perms is not None:
            d["perms"] = [[list(pm) for pm in row] for row in self.perms]
        return json.dumps(d)

    @classmethod
    def from_dict(cls, d: dict) -> QcLayout:
        perms = d.get("perms")
        if perms is not None:
            perms = tuple(tuple(tuple(pm) for pm in row) for row in perms)
        return cls(d["gamma"], d["rho"], d["p"], tuple(tuple(r) for r in d.get("shifts", ())), perms)

    @classmethod
    def from_json(cls, text: str) -> QcLayout:
        return cls.from_dict(json.loads(text))


def build_permutation_code(layout: QcLayout) -> TannerGraph:
    """Tanner graph with ``gamma*p`` checks and ``rho*p`` variables.

    Check ``j*p + r`` connects to variable ``l*p + perm_{j,l}(r)`` for every
    block column ``l``.
    """
    p = layout.p
    chk_lists = []
    for j in range(layout.gamma):
        perms = [layout.block_perm(j, l) for l in range(layout.rho)]
        for r in range(p):
            chk_lists.append([l * p + perms[l][r] for l in range(layout.rho)])
    return TannerGraph.from_check_lists(layout.rho * p, chk_lists)


def layout_girth(layout: QcLayout, block_rows: Sequence[int] | None = None) -> float:
    """Girth of a layout's graph, optionally restricted to some block rows.

    Circulant layouts are invariant under the simultaneous cyclic shift, so one
    root per block column is enough.
    """
    g = build_permutation_code(layout)
    checks = None
    if block_rows is not None:
        checks = [j * layout.p + r for j in block_rows for r in range(layout.p)]
    roots = [l * layout.p for l in range(layout.rho)] if layout.circulant else None
    return girth(g, checks, roots)


def search_shifts(gamma: int, rho: int, p: int, target_girth: int, seed: int = 0,
                  max_tries: int = 20000, lower_rows_girth: int | None = None) -> QcLayout | None:
    """Seeded randomized search for a circulant layout of girth >= ``target_girth``.

    Block columns are added one at a time; candidate shift columns are tried
    in a seeded random order and rejected while the partial graph has a cycle
    shorter than the target. A column with no admissible candidate restarts
    the draw. Every candidate evaluation counts against ``max_tries``.
    ``lower_rows_girth`` adds a target for the graph restricted to block rows
    ``1..gamma-1``. Returns None when the budget runs out (try a larger ``p``).
    """
    if rho >= 3 and gamma >= 2 and max(target_girth, lower_rows_girth or 0) > 12:
        # circulant arrays with at least 3 block columns never exceed girth 12
        return None
    rng = np.random.default_rng(seed)
    n_cand = p ** (gamma - 1)
    tries = 0
    while tries < max_tries:
        cols: list[list[int]] = []
        for l in range(1, rho):
            order = rng.permutation(n_cand) if n_cand <= 1 << 16 else rng.integers(0, n_cand, 4096)
            chosen = None
            for code in order:
                if tries >= max_tries:
                    return None
                tries += 1
                cand = [(int(code) // p ** k) % p for k in range(gamma - 1)]
                if _column_ok(gamma, p, cols + [cand], target_girth, lower_rows_girth):
                    chosen = cand
                    break
            if chosen is None:
                break
            cols.append(chosen)
        if len(cols) == rho - 1:
            return _partial_layout(gamma, p, cols)
    return None


def _column_ok(gamma, p, cols, target, lower_target) -> bool:
    layout = _partial_layout(gamma, p, cols)
    g = build_permutation_code(layout)
    # any new cycle runs through the last block column, hence through its variable 0
    root = [len(cols) * p]
    if girth(g, roots=root, limit=target) < target:
        return False
    if lower_target:
        checks = range(p, gamma * p)
        if girth(g, checks, roots=root, limit=lower_target) < lower_target:
            return False
    return True


def _partial_layout(gamma: int, p: int, cols: list[list[int]]) -> QcLayout:
    shifts = tuple(tuple(c[j] for c in cols) for j in range(gamma - 1))
    return QcLayout(gamma, len(cols) + 1, p, shifts)

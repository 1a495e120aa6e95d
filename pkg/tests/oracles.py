"""Independent reference implementations used only by the tests.

They favour obviousness over speed and share no code with the package.
"""

from itertools import combinations

import networkx as nx
import numpy as np


def rank_gf2(dense) -> int:
    """Textbook row reduction on a dense 0/1 array."""
    a = np.array(dense, dtype=np.uint8) % 2
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i, c]), None)
        if piv is None:
            continue
        a[[r, piv]] = a[[piv, r]]
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] ^= a[r]
        r += 1
        if r == rows:
            break
    return r


def nullspace_gf2(dense) -> np.ndarray:
    """Basis (rows) of {x : dense @ x = 0 mod 2}."""
    a = np.array(dense, dtype=np.uint8) % 2
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i, c]), None)
        if piv is None:
            continue
        a[[r, piv]] = a[[piv, r]]
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] ^= a[r]
        pivots.append(c)
        r += 1
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        x = np.zeros(cols, dtype=np.uint8)
        x[f] = 1
        for i, pc in enumerate(pivots):
            x[pc] = a[i, f]
        basis.append(x)
    return np.array(basis, dtype=np.uint8).reshape(len(basis), cols)


def girth_bruteforce(n_var: int, chk_lists) -> float:
    """Shortest cycle by listing simple cycles of the bipartite graph."""
    h = nx.Graph()
    h.add_nodes_from(("v", v) for v in range(n_var))
    for c, vs in enumerate(chk_lists):
        h.add_node(("c", c))
        for v in vs:
            h.add_edge(("v", v), ("c", c))
    # smallest length bound admitting any simple cycle
    for length in range(4, h.number_of_nodes() + 1, 2):
        if next(iter(nx.simple_cycles(h, length_bound=length)), None) is not None:
            return length
    return float("inf")


def elementary_sets_scan(chk_lists, n_var: int, a_max: int, b_max: int) -> set:
    """Every connected variable subset with induced check degrees in {1, 2},
    at most b_max degree-1 checks and at least as many edges as vertices
    (so it holds a cycle), found by brute-force subset scan."""
    m = len(chk_lists)
    inc = np.zeros((m, n_var), dtype=np.int64)
    for c, vs in enumerate(chk_lists):
        inc[c, list(vs)] = 1
    adj = ((inc.T @ inc) > 0).astype(np.int64)
    np.fill_diagonal(adj, 0)
    out = set()
    for a in range(1, a_max + 1):
        subsets = np.array(list(combinations(range(n_var), a)), dtype=np.int64).reshape(-1, a)
        for lo in range(0, len(subsets), 50000):
            sub = subsets[lo:lo + 50000]
            ind = np.zeros((len(sub), n_var), dtype=np.int64)
            np.put_along_axis(ind, sub, 1, axis=1)
            deg = ind @ inc.T
            ok = deg.max(axis=1) <= 2
            b = (deg == 1).sum(axis=1)
            edges = (deg == 2).sum(axis=1)
            ok &= (b <= b_max) & (edges >= a)
            # connectivity: grow from the first member inside the subset
            reach = np.zeros_like(ind)
            reach[np.arange(len(sub)), sub[:, 0]] = 1
            for _ in range(a):
                reach = (((reach @ adj) > 0) | (reach > 0)).astype(np.int64) * ind
            ok &= reach.sum(axis=1) == a
            for row in sub[ok]:
                out.add(tuple(int(v) for v in row))
    return out


def sphere_decode(h_dense: np.ndarray, word: np.ndarray, t: int):
    """Nearest codeword within radius t by trying every error of weight <= t."""
    n = h_dense.shape[1]
    for w in range(t + 1):
        for pos in combinations(range(n), w):
            e = np.zeros(n, dtype=np.uint8)
            e[list(pos)] = 1
            if not ((h_dense @ (word ^ e)) % 2).any():
                return frozenset(pos)
    return None


def pbf_reference(chk_lists, supers, coords, comp_h, t, gamma, y, max_iters):
    """Direct transcription of parallel bit flipping, one word at a time.

    Returns (converged, iterations, output). A super check decodes by sphere
    search over its component coordinates.
    """
    x = np.array(y, dtype=np.uint8)
    n_comp = comp_h.shape[1]

    def word_of(c):
        w = np.zeros(n_comp, dtype=np.uint8)
        for v, k in zip(chk_lists[c], coords.get(c, range(len(chk_lists[c])))):
            w[k] = x[v]
        return w

    def satisfied():
        for c, vs in enumerate(chk_lists):
            if c in supers:
                if ((comp_h @ word_of(c)) % 2).any():
                    return False
            elif x[list(vs)].sum() % 2:
                return False
        return True

    if satisfied():
        return True, 0, x
    for it in range(1, max_iters + 1):
        votes = np.zeros(len(x), dtype=np.int64)
        for c, vs in enumerate(chk_lists):
            if c in supers:
                flips = sphere_decode(comp_h, word_of(c), t)
                if flips is None:
                    continue
                cmap = list(coords.get(c, range(len(vs))))
                for v, k in zip(vs, cmap):
                    if k in flips:
                        votes[v] += 1
            elif x[list(vs)].sum() % 2:
                votes[list(vs)] += 1
        flip = 2 * votes > gamma
        if not flip.any():
            return False, max_iters, x
        x = x ^ flip.astype(np.uint8)
        if satisfied():
            return True, it, x
    return False, max_iters, x


def sphere_decode_table(h_dense: np.ndarray, t: int):
    """Same search as :func:`sphere_decode` with the candidate errors precomputed.

    Returns a function word -> frozenset | None; errors are tried in order of
    weight, then lexicographically, and the first one giving a zero syndrome wins.
    """
    n = h_dense.shape[1]
    errs = [()]
    for w in range(1, t + 1):
        errs += list(combinations(range(n), w))
    e = np.zeros((len(errs), n), dtype=np.int64)
    for i, pos in enumerate(errs):
        e[i, list(pos)] = 1
    h = np.asarray(h_dense, dtype=np.int64)

    def search(word):
        syn = ((np.asarray(word, dtype=np.int64)[None, :] ^ e) @ h.T) % 2
        hit = np.flatnonzero(~syn.any(axis=1))
        return frozenset(errs[hit[0]]) if hit.size else None

    return search

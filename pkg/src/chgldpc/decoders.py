"""Hard-decision decoders for check-hybrid GLDPC codes.

Both decoders run on a batch of received words at once (rows of a 2-D array)
so that exhaustive pattern scans stay cheap. Each frame stops updating as soon
as its decision satisfies every check.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .component import ComponentCode
from .gf2 import DimensionError
from .tanner import TannerGraph

DEFAULT_MAX_ITERS = 50


@dataclass(frozen=True, eq=False)
class HybridCode:
    """A Tanner graph whose checks in ``super_checks`` enforce a component code.

    ``coord_map[c][j]`` is the component coordinate fed by the j-th neighbour
    (ascending order) of super check ``c``. With ``partial=True`` a super check
    may have fewer neighbours than the component length; the unmapped
    coordinates are held at zero. That is how isolated trapping-set subgraphs
    are decoded. ``gamma`` is the column weight used by the flip threshold.
    """

    graph: TannerGraph
    super_checks: frozenset[int]
    component: ComponentCode | None
    coord_map: Mapping[int, tuple[int, ...]]
    gamma: int
    partial: bool = False

    @property
    def n(self) -> int:
        return self.graph.n_var

    @property
    def kappa(self) -> int:
        return len(self.super_checks)

    def super_counts(self) -> list[int]:
        """Number of super-check neighbours of each variable."""
        return [sum(c in self.super_checks for c in adj) for adj in self.graph.var_adj]

    @cached_property
    def _plan(self) -> _Plan:
        return _Plan(self)

    def satisfied(self, x) -> np.ndarray:
        """Per-row flag: every single check has even parity and every super
        check sees a component codeword."""
        x = np.atleast_2d(np.asarray(x, dtype=np.uint8))
        return self._plan.satisfied(x)


def make_hybrid(graph: TannerGraph, super_checks: Iterable[int] = (),
                component: ComponentCode | None = None, gamma: int | None = None,
                coord_map: Mapping[int, Iterable[int]] | None = None,
                partial: bool = False) -> HybridCode:
    """Build and validate a :class:`HybridCode`.

    The default coordinate map sends the j-th neighbour of a super check to
    component coordinate j.
    """
    supers = frozenset(int(c) for c in super_checks)
    if supers and component is None:
        raise ValueError("super checks need a component code")
    if any(not 0 <= c < graph.n_chk for c in supers):
        raise ValueError("super check index out of range")
    coord_map = dict(coord_map or {})
    resolved = {}
    for c in sorted(supers):
        deg = len(graph.chk_adj[c])
        coords = tuple(coord_map.get(c, range(deg)))
        if len(coords) != deg:
            raise DimensionError(f"coord_map for check {c} has {len(coords)} entries, degree {deg}")
        if partial:
            if deg > component.n:
                raise DimensionError(f"check {c} degree {deg} exceeds component length {component.n}")
        elif deg != component.n:
            raise DimensionError(f"check {c} degree {deg} != component length {component.n}")
        if len(set(coords)) != deg or any(not 0 <= k < component.n for k in coords):
            raise ValueError(f"coord_map for check {c} is not injective into the component")
        resolved[c] = coords
    if gamma is None:
        gamma = max(graph.var_degrees(), default=0)
    return HybridCode(graph, supers, component, resolved, gamma, partial)


@dataclass
class BatchResult:
    output: np.ndarray      # (B, N) decisions at termination
    converged: np.ndarray   # (B,) all checks satisfied
    iterations: np.ndarray  # (B,) iterations used (max_iters when not converged)

    def succeeded(self) -> np.ndarray:
        """Converged to the all-zero word."""
        return self.converged & ~self.output.any(axis=1)


@dataclass
class DecodeResult:
    converged: bool
    iterations_used: int
    output: np.ndarray
    residual_support: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "converged": self.converged,
            "iterations_used": self.iterations_used,
            "output": self.output.tolist(),
            "residual_support": list(self.residual_support),
        }


class _Plan:
    """Dense incidence arrays for vectorized message passing."""

    def __init__(self, code: HybridCode):
        g = code.graph
        n = g.n_var
        self.n = n
        self.gamma = code.gamma
        self.comp = code.component
        self.singles = [c for c in range(g.n_chk) if c not in code.super_checks]
        self.supers = sorted(code.super_checks)
        self.h_single = np.zeros((len(self.singles), n), dtype=np.float32)
        for i, c in enumerate(self.singles):
            self.h_single[i, list(g.chk_adj[c])] = 1
        clen = self.comp.n if self.comp is not None else 0
        # variable index per (super check, component coordinate); n = padding zero
        self.sup_var = np.full((len(self.supers), clen), n, dtype=np.intp)
        for k, c in enumerate(self.supers):
            for v, coord in zip(g.chk_adj[c], code.coord_map[c]):
                self.sup_var[k, coord] = v
        self.sup_scatter = np.zeros((len(self.supers) * clen, n + 1), dtype=np.float32)
        self.sup_scatter[np.arange(self.sup_var.size), self.sup_var.ravel()] = 1
        self.sup_scatter = self.sup_scatter[:, :n]

        # edge bookkeeping for message passing
        e_var, e_chk = [], []
        for c, vs in enumerate(g.chk_adj):
            for v in vs:
                e_var.append(v)
                e_chk.append(c)
        self.e_var = np.asarray(e_var, dtype=np.intp)
        self.e_chk = np.asarray(e_chk, dtype=np.intp)
        n_e = len(e_var)
        self.deg = np.asarray(g.var_degrees(), dtype=np.int32)
        self.var_inc = np.zeros((n_e, n), dtype=np.float32)
        self.var_inc[np.arange(n_e), self.e_var] = 1
        is_super = np.isin(self.e_chk, self.supers)
        self.single_edges = np.flatnonzero(~is_super)
        single_pos = {c: i for i, c in enumerate(self.singles)}
        self.single_edge_chk = np.asarray([single_pos[c] for c in self.e_chk[self.single_edges]],
                                          dtype=np.intp)
        self.single_edge_inc = np.zeros((len(self.single_edges), len(self.singles)), dtype=np.float32)
        self.single_edge_inc[np.arange(len(self.single_edges)), self.single_edge_chk] = 1
        edge_of = {(int(c), int(v)): e for e, (v, c) in enumerate(zip(e_var, e_chk))}
        self.sup_edge = np.full((len(self.supers), clen), n_e, dtype=np.intp)
        for k, c in enumerate(self.supers):
            for v, coord in zip(g.chk_adj[c], code.coord_map[c]):
                self.sup_edge[k, coord] = edge_of[(c, v)]
        self.sup_edge_mask = self.sup_edge < n_e

    def _super_words(self, x: np.ndarray) -> np.ndarray:
        xp = np.concatenate([x, np.zeros((x.shape[0], 1), dtype=np.uint8)], axis=1)
        return xp[:, self.sup_var]

    def satisfied(self, x: np.ndarray) -> np.ndarray:
        ok = np.ones(x.shape[0], dtype=bool)
        if self.singles:
            par = (x.astype(np.float32) @ self.h_single.T) % 2
            ok &= ~par.any(axis=1)
        if self.supers:
            syn = self.comp.syndrome_ints(self._super_words(x))
            ok &= ~(syn != 0).any(axis=1)
        return ok

    def flip_counts(self, x: np.ndarray) -> np.ndarray:
        counts = np.zeros(x.shape, dtype=np.float32)
        if self.singles:
            par = (x.astype(np.float32) @ self.h_single.T) % 2
            counts += par @ self.h_single
        if self.supers:
            syn = self.comp.syndrome_ints(self._super_words(x))
            # failed BDD sends nothing; the leader table holds zeros there
            leaders = self.comp.leaders[syn] * self.comp.correctable[syn][..., None]
            counts += leaders.reshape(x.shape[0], -1).astype(np.float32) @ self.sup_scatter
        return counts


def _as_batch(code: HybridCode, y) -> np.ndarray:
    y = np.asarray(y, dtype=np.uint8)
    if y.ndim == 1:
        y = y[None, :]
    if y.ndim != 2 or y.shape[1] != code.n:
        raise DimensionError(f"received words must have length {code.n}, got shape {y.shape}")
    return y


def pbf_decode_batch(code: HybridCode, y, max_iters: int = DEFAULT_MAX_ITERS) -> BatchResult:
    """Parallel bit flipping on every row of ``y``.

    Per iteration, from one snapshot of the variable values: a super check runs
    BDD on its neighbours and sends a flip to each neighbour differing from the
    decoded codeword (nothing on failure); a single check with odd parity sends
    a flip to all neighbours. A variable flips on strictly more than gamma/2
    flip messages.
    """
    plan = code._plan
    x = _as_batch(code, y).copy()
    b = x.shape[0]
    iters = np.full(b, max_iters, dtype=np.int64)
    conv = plan.satisfied(x)
    iters[conv] = 0
    active = np.flatnonzero(~conv)
    for it in range(1, max_iters + 1):
        if active.size == 0:
            break
        xa = x[active]
        flips = 2 * plan.flip_counts(xa) > code.gamma
        moved = flips.any(axis=1)
        xa ^= flips.astype(np.uint8)
        x[active] = xa
        sat = plan.satisfied(xa)
        conv[active[sat]] = True
        iters[active[sat]] = it
        # an unsatisfied word that produced no flips is a fixed point
        active = active[~sat & moved]
    return BatchResult(x, conv, iters)


def gallager_b_decode_batch(code: HybridCode, y, max_iters: int = DEFAULT_MAX_ITERS) -> BatchResult:
    """Gallager B with bounded-distance decoding at super checks.

    Check rules: a super check that decodes sends each neighbour its value in
    the decoded codeword, otherwise it echoes each neighbour's own message; a
    single check sends the parity of the other incoming messages. Variable
    rule: the majority of the other incoming check messages, or the channel
    value on a tie. The decision at a variable is the majority of all check
    messages plus the channel value, ties going to the channel value.
    """
    plan = code._plan
    y = _as_batch(code, y)
    b = y.shape[0]
    out = y.copy()
    iters = np.full(b, max_iters, dtype=np.int64)
    conv = plan.satisfied(y)
    iters[conv] = 0
    active = np.flatnonzero(~conv)
    ya = y[active]
    m_vc = ya[:, plan.e_var]
    deg_e = plan.deg[plan.e_var]
    for it in range(1, max_iters + 1):
        if active.size == 0:
            break
        m_cv = np.zeros_like(m_vc)
        if plan.singles:
            sv = m_vc[:, plan.single_edges]
            tot = (sv.astype(np.float32) @ plan.single_edge_inc) % 2
            m_cv[:, plan.single_edges] = tot[:, plan.single_edge_chk].astype(np.uint8) ^ sv
        if plan.supers:
            padded = np.concatenate([m_vc, np.zeros((m_vc.shape[0], 1), dtype=np.uint8)], axis=1)
            words = padded[:, plan.sup_edge]
            syn = plan.comp.syndrome_ints(words)
            ok = plan.comp.correctable[syn]
            decoded = np.where(ok[..., None], words ^ plan.comp.leaders[syn], words)
            m_cv[:, plan.sup_edge[plan.sup_edge_mask]] = decoded[:, plan.sup_edge_mask]
        ones = m_cv.astype(np.float32) @ plan.var_inc
        ext = 2 * (ones[:, plan.e_var] - m_cv) - (deg_e - 1)
        ch_e = ya[:, plan.e_var]
        new_vc = np.where(ext > 0, 1, np.where(ext < 0, 0, ch_e)).astype(np.uint8)
        vote = 2 * (ones + ya) - (plan.deg + 1)
        dec = np.where(vote > 0, 1, np.where(vote < 0, 0, ya)).astype(np.uint8)
        out[active] = dec
        sat = plan.satisfied(dec)
        conv[active[sat]] = True
        iters[active[sat]] = it
        # unchanged messages mean the frame repeats forever
        keep = ~sat & (new_vc != m_vc).any(axis=1)
        active, ya, m_vc = active[keep], ya[keep], new_vc[keep]
    return BatchResult(out, conv, iters)


DECODERS = {"pbf": pbf_decode_batch, "galb": gallager_b_decode_batch}


def decode_batch(code: HybridCode, y, alg: str = "pbf", max_iters: int = DEFAULT_MAX_ITERS) -> BatchResult:
    try:
        fn = DECODERS[alg]
    except KeyError:
        raise ValueError(f"unknown decoder {alg!r}; expected one of {sorted(DECODERS)}") from None
    return fn(code, y, max_iters)


def _single(res: BatchResult) -> DecodeResult:
    out = res.output[0].copy()
    return DecodeResult(bool(res.converged[0]), int(res.iterations[0]), out,
                        tuple(np.flatnonzero(out).tolist()))


def pbf_decode(code: HybridCode, y, max_iters: int = DEFAULT_MAX_ITERS) -> DecodeResult:
    y = np.asarray(y, dtype=np.uint8)
    if y.shape != (code.n,):
        raise DimensionError(f"received word must have length {code.n}")
    return _single(pbf_decode_batch(code, y, max_iters))


def gallager_b_decode(code: HybridCode, y, max_iters: int = DEFAULT_MAX_ITERS) -> DecodeResult:
    y = np.asarray(y, dtype=np.uint8)
    if y.shape != (code.n,):
        raise DimensionError(f"received word must have length {code.n}")
    return _single(gallager_b_decode_batch(code, y, max_iters))


def decode(code: HybridCode, y, alg: str = "pbf", max_iters: int = DEFAULT_MAX_ITERS) -> DecodeResult:
    return _single(decode_batch(code, np.asarray(y, dtype=np.uint8)[None, :], alg, max_iters))


def pbf_step(code: HybridCode, x) -> np.ndarray:
    """One parallel bit-flipping iteration applied to ``x`` (no stopping rule)."""
    x = _as_batch(code, x).copy()
    flips = 2 * code._plan.flip_counts(x) > code.gamma
    x ^= flips.astype(np.uint8)
    return x[0] if np.ndim(x) == 2 and x.shape[0] == 1 else x

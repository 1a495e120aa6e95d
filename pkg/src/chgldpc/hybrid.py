"""Super-check placement and rate accounting for check-hybrid codes."""

from __future__ import annotations

import json
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .component import ComponentCode, component_from_name
from .decoders import HybridCode, make_hybrid
from .errors import RefusalError
from .gf2 import BinaryMatrix, gf2_rank
from .tanner import QcLayout, TannerGraph, build_permutation_code, layout_girth
from .trapsets import (CriticalSet, TrappingSetInstance, enumerate_elementary_ts,
                       find_critical_set_cw3, find_critical_set_cw4, is_harmful)


@dataclass(frozen=True)
class PlacementPlan:
    strategy: str                     # "rows_alpha" or "ts_guided"
    alpha: int | None
    converted: tuple[int, ...]
    unresolved: tuple[TrappingSetInstance, ...] = field(default=(), compare=False)

    @property
    def kappa(self) -> int:
        return len(self.converted)

    def to_dict(self) -> dict:
        return {"strategy": self.strategy, "alpha": self.alpha, "kappa": self.kappa,
                "converted": list(self.converted),
                "unresolved": [ts.to_dict() for ts in self.unresolved]}


def array_layout(gamma: int, rho: int, p: int) -> QcLayout:
    """Array-code layout: block (j, l) is the identity shifted by j*l mod p."""
    if gamma > p or rho > p:
        raise ValueError("array layouts need gamma, rho <= p")
    shifts = tuple(tuple((j * l) % p for l in range(1, rho)) for j in range(1, gamma))
    return QcLayout(gamma, rho, p, shifts)


def _default_coords(graph: TannerGraph, checks: Iterable[int]) -> dict[int, tuple[int, ...]]:
    # chk_adj is sorted, so neighbour j (ascending) feeds coordinate j
    return {c: tuple(range(len(graph.chk_adj[c]))) for c in checks}


def place_rows(layout: QcLayout, alpha: int, component: ComponentCode) -> HybridCode:
    """Convert block rows ``0..alpha-1`` to super checks.

    Every variable meets each block row exactly once, so it ends up with
    exactly ``alpha`` super-check neighbours.
    """
    if not 0 <= alpha <= layout.gamma:
        raise RefusalError(f"alpha={alpha} outside [0, {layout.gamma}]")
    if alpha and component.n != layout.rho:
        raise RefusalError(f"component length {component.n} != row weight {layout.rho}")
    graph = build_permutation_code(layout)
    supers = range(alpha * layout.p)
    return make_hybrid(graph, supers, component if alpha else None, layout.gamma,
                       _default_coords(graph, supers))


def plan_rows(layout: QcLayout, alpha: int) -> PlacementPlan:
    return PlacementPlan("rows_alpha", alpha, tuple(range(alpha * layout.p)))


def _restrict(code: HybridCode, ts: TrappingSetInstance) -> set[int]:
    return set(ts.checks) & code.super_checks


def harmful_instances(code: HybridCode, instances: Iterable[TrappingSetInstance],
                      decoder: str = "pbf") -> list[TrappingSetInstance]:
    """Instances that stay harmful in the isolated model under the code's super checks."""
    out = []
    for ts in instances:
        if is_harmful(ts, _restrict(code, ts), decoder, code.component, coord_map=code.coord_map):
            out.append(ts)
    return out


def critical_set_for(ts: TrappingSetInstance, decoder: str = "pbf",
                     component: ComponentCode | None = None) -> CriticalSet:
    """Run the cycle-breaking routine matching the set's column weight."""
    if ts.gamma == 3:
        return find_critical_set_cw3(ts, decoder, component)
    if ts.gamma == 4:
        return find_critical_set_cw4(ts, decoder, component)
    raise RefusalError(f"no critical-set routine for column weight {ts.gamma}")


def place_ts_guided(graph: TannerGraph, ts_list: Sequence[TrappingSetInstance],
                    critical_sets: Sequence[CriticalSet | Iterable[int]],
                    component: ComponentCode, gamma: int | None = None,
                    decoder: str = "pbf") -> tuple[HybridCode, PlacementPlan]:
    """Convert the union of per-instance critical sets, then re-check every instance.

    Instances still harmful under the union are listed in
    ``plan.unresolved`` instead of being patched.
    """
    if len(ts_list) != len(critical_sets):
        raise ValueError("one critical set per instance is required")
    union: set[int] = set()
    for cs in critical_sets:
        union.update(cs.checks if isinstance(cs, CriticalSet) else cs)
    code = make_hybrid(graph, union, component if union else None, gamma,
                       _default_coords(graph, union))
    bad = harmful_instances(code, ts_list, decoder)
    return code, PlacementPlan("ts_guided", None, tuple(sorted(union)), tuple(bad))


def splitting_upper_bound(graph: TannerGraph, component: ComponentCode, labels: Iterable[tuple[int, int]],
                          a_max: int = 8, b_max: int = 8, period: int | None = None,
                          decoder: str = "pbf") -> tuple[HybridCode, PlacementPlan, list[TrappingSetInstance]]:
    """Eliminate every enumerated instance with a label in ``labels``.

    The union of per-instance critical sets bounds the splitting number of
    the whole matrix from above; no global minimisation is attempted.
    """
    wanted = set(labels)
    sets = [ts for ts in enumerate_elementary_ts(graph, a_max, b_max, period) if ts.label in wanted]
    crit = [critical_set_for(ts, decoder, component) for ts in sets]
    gamma = max(graph.var_degrees(), default=0)
    code, plan = place_ts_guided(graph, sets, crit, component, gamma, decoder)
    return code, plan, sets


# ---------------------------------------------------------------------------
# rates


@dataclass(frozen=True)
class RateReport:
    actual_rate: Fraction
    lower_bound: Fraction
    gamma: int
    rho: int
    n: int
    kappa: int
    r: Fraction

    @property
    def lam(self) -> Fraction:
        return Fraction(self.rho, self.n)

    def to_dict(self) -> dict:
        return {"actual_rate": str(self.actual_rate), "actual_rate_float": float(self.actual_rate),
                "lower_bound": str(self.lower_bound), "lower_bound_float": float(self.lower_bound),
                "gamma": self.gamma, "rho": self.rho, "N": self.n, "kappa": self.kappa,
                "lambda": str(self.lam), "r": str(self.r)}


def rate_lower_bound(gamma: int, rho: int, n: int, kappa: int, r) -> Fraction:
    """1 - gamma/rho - kappa * (rho/N) * (1 - r), exactly."""
    r = Fraction(r)
    return 1 - Fraction(gamma, rho) - kappa * Fraction(rho, n) * (1 - r)


def expanded_matrix(code: HybridCode) -> BinaryMatrix:
    """Parity-check matrix with each super check replaced by the component's
    rows placed through its coordinate map."""
    g = code.graph
    rows = []
    comp = code.component.h.to_dense() if code.super_checks else None
    for c, adj in enumerate(g.chk_adj):
        if c not in code.super_checks:
            row = np.zeros(g.n_var, dtype=np.uint8)
            row[list(adj)] = 1
            rows.append(row[None, :])
            continue
        block = np.zeros((comp.shape[0], g.n_var), dtype=np.uint8)
        block[:, list(adj)] = comp[:, list(code.coord_map[c])]
        rows.append(block)
    if not rows:
        return BinaryMatrix.from_dense(np.zeros((0, g.n_var), dtype=np.uint8))
    return BinaryMatrix.from_dense(np.vstack(rows))


def rate_report(code: HybridCode) -> RateReport:
    if code.partial:
        raise RefusalError("rates are defined for complete codes, not isolated subgraphs")
    degs = code.graph.chk_degrees()
    rho = max(degs, default=0)
    if code.super_checks:
        r = code.component.rate
        if not 0 < r < 1:
            raise RefusalError(f"component rate {r} outside (0, 1)")
    else:
        r = Fraction(1)
    n = code.n
    actual = Fraction(n - gf2_rank(expanded_matrix(code)), n)
    bound = rate_lower_bound(code.gamma, rho, n, code.kappa, r)
    return RateReport(actual, bound, code.gamma, rho, n, code.kappa, r)


# ---------------------------------------------------------------------------
# preconditions for single-row placement

LOWER_ROWS_THRESHOLDS = {"cw3_44": (3, 12), "cw4_36": (4, 8)}


def lower_rows_girth(layout: QcLayout) -> float:
    """Girth of the graph keeping only block rows 1..gamma-1."""
    return layout_girth(layout, range(1, layout.gamma))


def check_lower_rows_girth(layout: QcLayout, which: str) -> bool:
    """Whether block rows 1.. have the girth that makes a single super row enough.

    ``cw3_44`` asks for girth 12 on a column-weight-3 layout (no harmful
    (4,4) set survives); ``cw4_36`` asks for girth >= 8 on a column-weight-4
    layout (no harmful (3,6) set survives).
    """
    if which not in LOWER_ROWS_THRESHOLDS:
        raise ValueError(f"unknown precondition {which!r}")
    gamma, need = LOWER_ROWS_THRESHOLDS[which]
    if layout.gamma != gamma:
        raise RefusalError(f"{which} applies to column weight {gamma}, layout has {layout.gamma}")
    return lower_rows_girth(layout) >= need


# ---------------------------------------------------------------------------
# serialization


def code_to_dict(code: HybridCode, layout: QcLayout | None = None) -> dict:
    """JSON-ready description. Codes without a layout carry their check lists."""
    d: dict = {}
    if layout is not None:
        d["layout"] = json.loads(layout.to_json())
    else:
        d["n_var"] = code.n
        d["checks"] = [list(a) for a in code.graph.chk_adj]
    d["gamma"] = code.gamma
    d["super_checks"] = sorted(code.super_checks)
    d["component"] = code.component.name if code.component is not None else None
    d["coord_map"] = {str(c): list(v) for c, v in sorted(code.coord_map.items())}
    if code.partial:
        d["partial"] = True
    return d


def code_from_dict(d: dict) -> tuple[HybridCode, QcLayout | None]:
    """Inverse of :func:`code_to_dict`; a bare layout dict gives the plain code."""
    if "layout" not in d and "checks" not in d and "shifts" in d:
        d = {"layout": d}
    layout = None
    if "layout" in d:
        layout = QcLayout.from_dict(d["layout"])
        graph = build_permutation_code(layout)
        gamma = d.get("gamma", layout.gamma)
    else:
        graph = TannerGraph.from_check_lists(d["n_var"], d["checks"])
        gamma = d.get("gamma")
    supers = d.get("super_checks", [])
    comp = component_from_name(d["component"]) if d.get("component") else None
    coords = {int(c): tuple(v) for c, v in d.get("coord_map", {}).items()}
    code = make_hybrid(graph, supers, comp, gamma, coords, d.get("partial", False))
    return code, layout

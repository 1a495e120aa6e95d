"""Guaranteed error correction: exhaustive and sampled pattern searches."""

from __future__ import annotations

import json
import os
from collections.abc import Iterator, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from math import comb

import numpy as np

from .decoders import DEFAULT_MAX_ITERS, HybridCode, decode, decode_batch
from .errors import RefusalError
from .tanner import girth

MAX_EXHAUSTIVE = 10**9
FAILURE_CAP = 16


# ---------------------------------------------------------------------------
# colexicographic combinations


def colex_rank(combo: Sequence[int]) -> int:
    return sum(comb(c, i + 1) for i, c in enumerate(combo))


def colex_unrank(index: int, k: int) -> tuple[int, ...]:
    """The k-subset with colex rank ``index`` (combinatorial number system)."""
    out = []
    for i in range(k, 0, -1):
        c = i - 1
        while comb(c + 1, i) <= index:
            c += 1
        out.append(c)
        index -= comb(c, i)
    return tuple(reversed(out))


def colex_combinations(n: int, k: int, start: int = 0, stop: int | None = None) -> Iterator[tuple[int, ...]]:
    """k-subsets of range(n) in colex order, ranks in [start, stop)."""
    total = comb(n, k)
    stop = total if stop is None else min(stop, total)
    if start >= stop:
        return
    if k == 0:
        yield ()
        return
    c = list(colex_unrank(start, k))
    for _ in range(stop - start):
        yield tuple(c)
        i = 0
        while i < k - 1 and c[i] + 1 == c[i + 1]:
            i += 1
        c[i] += 1
        c[:i] = range(i)


def _words(n: int, supports: Sequence[Sequence[int]], w: int) -> np.ndarray:
    x = np.zeros((len(supports), n), dtype=np.uint8)
    if w and len(supports):
        idx = np.asarray(supports, dtype=np.int64).reshape(len(supports), w)
        np.put_along_axis(x, idx, 1, axis=1)
    return x


# ---------------------------------------------------------------------------
# reports


@dataclass
class GecReport:
    target_weight: int
    mode: str
    decoder: str
    n: int
    girth: float
    n_samples: int = 0
    seed: int | None = None
    patterns_tested: int = 0
    failure_count: int = 0
    failures: list[list[int]] = field(default_factory=list)
    per_weight: dict[int, int] = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "pass" if self.failure_count == 0 else "fail"

    @property
    def first_failure(self) -> list[int] | None:
        return self.failures[0] if self.failures else None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["girth"] = None if self.girth == float("inf") else int(self.girth)
        d["per_weight"] = {str(k): v for k, v in sorted(self.per_weight.items())}
        d["verdict"] = self.verdict
        d["first_failure"] = self.first_failure
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def exhaustive_count(n: int, target_weight: int) -> int:
    """Nonzero patterns of weight <= target; the zero word needs no decoding."""
    return sum(comb(n, w) for w in range(1, target_weight + 1))


def _fail_mask(code: HybridCode, x: np.ndarray, decoder: str, max_iters: int) -> np.ndarray:
    return ~decode_batch(code, x, decoder, max_iters).succeeded()


def _scan_range(code, decoder, max_iters, w, lo, hi) -> list[tuple[int, ...]]:
    combos = list(colex_combinations(code.n, w, lo, hi))
    bad = _fail_mask(code, _words(code.n, combos, w), decoder, max_iters)
    return [combos[i] for i in np.flatnonzero(bad)]


def _load_checkpoint(path, fingerprint) -> dict | None:
    if path is None or not os.path.exists(path):
        return None
    with open(path) as fh:
        state = json.load(fh)
    if state.get("fingerprint") != fingerprint:
        raise RefusalError(f"checkpoint {path} belongs to a different run")
    return state


def _save_checkpoint(path, state) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        json.dump(state, fh, sort_keys=True)
    os.replace(tmp, path)


def verify_gec(code: HybridCode, decoder: str = "pbf", target_weight: int = 1,
               mode: str = "exhaustive", n_samples: int = 0, seed: int = 0,
               weights: Sequence[int] | None = None, max_iters: int = DEFAULT_MAX_ITERS,
               checkpoint: str | None = None, batch: int = 8192, workers: int = 1,
               max_failures: int = FAILURE_CAP) -> GecReport:
    """Decode every (exhaustive) or a seeded sample of (sampled) error patterns.

    Exhaustive mode walks weights 1..target in colex order, so a checkpoint
    (the next rank per weight) makes a run resumable. Sampled mode draws
    ``n_samples`` uniform supports for each weight in ``weights`` (default:
    just ``target_weight``); the draw depends only on (seed, weight).
    Failures are kept in scan order, the first ``max_failures`` of them.
    """
    n = code.n
    g = girth(code.graph)
    report = GecReport(target_weight, mode, decoder, n, g)
    if mode == "exhaustive":
        total = exhaustive_count(n, target_weight)
        if total > MAX_EXHAUSTIVE:
            raise RefusalError(f"{total} patterns exceed the exhaustive budget of {MAX_EXHAUSTIVE}")
        fingerprint = [n, decoder, target_weight, max_iters, sorted(code.super_checks)]
        state = _load_checkpoint(checkpoint, fingerprint) or {
            "fingerprint": fingerprint, "weight": 1, "index": 0,
            "tested": 0, "failure_count": 0, "failures": [], "per_weight": {}}
        pool = ThreadPoolExecutor(workers) if workers > 1 else None
        try:
            for w in range(state["weight"], target_weight + 1):
                size = comb(n, w)
                lo = state["index"] if w == state["weight"] else 0
                while lo < size:
                    bounds = [(s, min(s + batch, size)) for s in range(lo, size, batch)][:max(workers, 1)]
                    jobs = [(code, decoder, max_iters, w, s, e) for s, e in bounds]
                    results = pool.map(lambda a: _scan_range(*a), jobs) if pool else map(lambda a: _scan_range(*a), jobs)
                    for found in results:
                        state["failure_count"] += len(found)
                        room = max_failures - len(state["failures"])
                        state["failures"].extend(list(f) for f in found[:max(room, 0)])
                    hi = bounds[-1][1]
                    state["tested"] += hi - lo
                    state["per_weight"][str(w)] = state["per_weight"].get(str(w), 0) + hi - lo
                    lo = hi
                    state["weight"], state["index"] = (w, lo) if lo < size else (w + 1, 0)
                    if checkpoint:
                        _save_checkpoint(checkpoint, state)
        finally:
            if pool:
                pool.shutdown()
        report.patterns_tested = state["tested"]
        report.failure_count = state["failure_count"]
        report.failures = state["failures"]
        report.per_weight = {int(k): v for k, v in state["per_weight"].items()}
        return report
    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    weights = list(weights) if weights is not None else [target_weight]
    if any(not 0 <= w <= n for w in weights):
        raise RefusalError(f"sample weights must lie in [0, {n}]")
    report.n_samples, report.seed = n_samples, seed
    for w in weights:
        rng = np.random.default_rng([seed, w])
        done = 0
        while done < n_samples:
            m = min(batch, n_samples - done)
            # the w smallest of N uniform keys form a uniform w-subset
            supports = np.sort(np.argsort(rng.random((m, n)), axis=1)[:, :w], axis=1)
            bad = _fail_mask(code, _words(n, supports, w), decoder, max_iters)
            for i in np.flatnonzero(bad):
                report.failure_count += 1
                if len(report.failures) < max_failures:
                    report.failures.append(supports[i].tolist())
            done += m
        report.patterns_tested += n_samples
        report.per_weight[w] = n_samples
    return report


# ---------------------------------------------------------------------------
# smallest failures


@dataclass
class MinFailure:
    support: tuple[int, ...] | None
    weights_covered: list[int]
    tested: int

    def to_dict(self) -> dict:
        return {"support": None if self.support is None else list(self.support),
                "weights_covered": self.weights_covered, "tested": self.tested}


def find_min_failure(code: HybridCode, decoder: str = "pbf", start_weight: int = 1,
                     budget: int = 10**6, max_iters: int = DEFAULT_MAX_ITERS,
                     batch: int = 8192) -> MinFailure:
    """First failing support (lowest weight, then colex) from ``start_weight`` up.

    Gives up after ``budget`` patterns; ``weights_covered`` then lists the
    weights that were scanned completely.
    """
    tested, covered = 0, []
    for w in range(max(start_weight, 1), code.n + 1):
        size = comb(code.n, w)
        for lo in range(0, size, batch):
            hi = min(lo + batch, size, lo + budget - tested)
            if hi <= lo:
                return MinFailure(None, covered, tested)
            found = _scan_range(code, decoder, max_iters, w, lo, hi)
            tested += hi - lo
            if found:
                return MinFailure(found[0], covered, tested)
        covered.append(w)
    return MinFailure(None, covered, tested)


def check_six_error_pattern(decoder: str = "pbf", max_iters: int = DEFAULT_MAX_ITERS) -> bool:
    """True when the canned six-error pattern (every variable on two super
    checks) defeats ``decoder``."""
    from .fixtures import six_error_c1

    fx = six_error_c1()
    res = decode(fx.code(), fx.received(), decoder, max_iters)
    return not (res.converged and not res.output.any())

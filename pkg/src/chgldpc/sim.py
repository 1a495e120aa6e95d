"""Monte Carlo frame/bit error rates over the binary symmetric channel."""

from __future__ import annotations

import csv
import io
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .decoders import DEFAULT_MAX_ITERS, HybridCode, decode_batch

CSV_HEADER = ["alpha", "frames", "frame_errors", "bit_errors", "fer", "ber", "mean_iters"]
BLOCK = 1024    # frames decoded together; does not affect the frame stream


@dataclass
class SimConfig:
    code: HybridCode
    decoder: str = "pbf"
    alphas: Sequence[float] = (0.01,)
    max_frames: int = 10_000
    max_errors: int = 100
    max_iters: int = DEFAULT_MAX_ITERS
    seed: int = 0

    def __post_init__(self):
        for a in self.alphas:
            if not 0 <= a < 0.5:
                raise ValueError(f"crossover probability {a} outside [0, 0.5)")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass
class SimRow:
    alpha: float
    frames: int
    frame_errors: int
    bit_errors: int
    total_iters: int
    n: int

    @property
    def fer(self) -> float:
        return self.frame_errors / self.frames if self.frames else 0.0

    @property
    def ber(self) -> float:
        return self.bit_errors / (self.frames * self.n) if self.frames else 0.0

    @property
    def mean_iters(self) -> float:
        return self.total_iters / self.frames if self.frames else 0.0


@dataclass
class SimResult:
    rows: list[SimRow] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.rows:
            w.writerow([repr(r.alpha), r.frames, r.frame_errors, r.bit_errors,
                        f"{r.fer:.6e}", f"{r.ber:.6e}", f"{r.mean_iters:.4f}"])
        return buf.getvalue()


def frame_noise(seed: int, alpha_index: int, frame: int, n: int, alpha: float) -> np.ndarray:
    """Error bits of one frame; a function of (seed, alpha index, frame index) only."""
    bg = np.random.Philox(key=[seed, alpha_index], counter=[0, 0, frame, 0])
    return (np.random.Generator(bg).random(n) < alpha).astype(np.uint8)


def _noise_block(cfg: SimConfig, ai: int, start: int, stop: int) -> np.ndarray:
    n, alpha = cfg.code.n, cfg.alphas[ai]
    return np.stack([frame_noise(cfg.seed, ai, f, n, alpha) for f in range(start, stop)])


def _run_block(cfg: SimConfig, ai: int, start: int, stop: int):
    e = _noise_block(cfg, ai, start, stop)
    res = decode_batch(cfg.code, e, cfg.decoder, cfg.max_iters)
    frame_err = ~res.succeeded()
    bit_err = res.output.sum(axis=1, dtype=np.int64)
    return frame_err, bit_err, res.iterations


def run_sim(cfg: SimConfig, workers: int = 1) -> SimResult:
    """Decode the zero codeword through the BSC for each crossover probability.

    Stops at ``max_frames`` or at the frame that brings the error count to
    ``max_errors``. Frames are drawn independently from their index, and
    blocks are reduced in frame order, so any worker count gives the same
    result.
    """
    out = SimResult()
    pool = ThreadPoolExecutor(workers) if workers > 1 else None
    try:
        for ai, alpha in enumerate(cfg.alphas):
            row = SimRow(float(alpha), 0, 0, 0, 0, cfg.code.n)
            start = 0
            while start < cfg.max_frames and row.frame_errors < cfg.max_errors:
                spans = []
                for _ in range(max(workers, 1)):
                    if start >= cfg.max_frames:
                        break
                    stop = min(start + BLOCK, cfg.max_frames)
                    spans.append((start, stop))
                    start = stop
                args = [(cfg, ai, s, e) for s, e in spans]
                results = pool.map(lambda a: _run_block(*a), args) if pool else map(lambda a: _run_block(*a), args)
                for frame_err, bit_err, iters in results:
                    if row.frame_errors >= cfg.max_errors:
                        break
                    take = len(frame_err)
                    cum = np.cumsum(frame_err)
                    need = cfg.max_errors - row.frame_errors
                    if cum[-1] >= need:
                        take = int(np.searchsorted(cum, need)) + 1
                    row.frames += take
                    row.frame_errors += int(frame_err[:take].sum())
                    row.bit_errors += int(bit_err[:take].sum())
                    row.total_iters += int(iters[:take].sum())
            out.rows.append(row)
    finally:
        if pool:
            pool.shutdown()
    return out

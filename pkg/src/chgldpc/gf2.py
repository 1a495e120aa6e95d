"""Bit-packed GF(2) matrices, rank, GLDPC row expansion and alist I/O."""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

WORD = 64


class DimensionError(ValueError):
    """Raised when matrix or vector shapes are inconsistent."""


def _pack(dense: np.ndarray) -> np.ndarray:
    rows, cols = dense.shape
    n_words = max(1, -(-cols // WORD))
    padded = np.zeros((rows, n_words * WORD), dtype=np.uint8)
    padded[:, :cols] = dense
    bits = padded.reshape(rows, n_words, WORD).astype(np.uint64)
    weights = np.left_shift(np.uint64(1), np.arange(WORD, dtype=np.uint64))
    return (bits * weights).sum(axis=2, dtype=np.uint64)


def _unpack(words: np.ndarray, cols: int) -> np.ndarray:
    rows, n_words = words.shape
    shifts = np.arange(WORD, dtype=np.uint64)
    bits = (words[:, :, None] >> shifts) & np.uint64(1)
    return bits.reshape(rows, n_words * WORD)[:, :cols].astype(np.uint8)


class BinaryMatrix:
    """Immutable binary matrix stored as row-major 64-bit words.

    Bit ``j`` of row ``i`` lives in word ``j // 64`` at position ``j % 64``.
    """

    __slots__ = ("rows", "cols", "words")

    def __init__(self, rows: int, cols: int, words: np.ndarray):
        words = np.ascontiguousarray(words, dtype=np.uint64)
        if words.shape != (rows, max(1, -(-cols // WORD))):
            raise DimensionError(f"word array {words.shape} does not fit {rows}x{cols}")
        words.setflags(write=False)
        self.rows = rows
        self.cols = cols
        self.words = words

    @classmethod
    def from_dense(cls, arr) -> BinaryMatrix:
        dense = np.asarray(arr)
        if dense.ndim != 2:
            raise DimensionError("expected a 2-D array")
        if dense.size and not np.isin(dense, (0, 1)).all():
            raise ValueError("entries must be 0 or 1")
        dense = dense.astype(np.uint8)
        return cls(dense.shape[0], dense.shape[1], _pack(dense))

    @classmethod
    def from_rows(cls, supports: Iterable[Iterable[int]], cols: int) -> BinaryMatrix:
        supports = [list(s) for s in supports]
        dense = np.zeros((len(supports), cols), dtype=np.uint8)
        for i, s in enumerate(supports):
            dense[i, s] = 1
        return cls.from_dense(dense)

    @classmethod
    def identity(cls, n: int) -> BinaryMatrix:
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def to_dense(self) -> np.ndarray:
        return _unpack(self.words, self.cols)

    def row_support(self, i: int) -> list[int]:
        return np.flatnonzero(_unpack(self.words[i : i + 1], self.cols)[0]).tolist()

    def row_weights(self) -> np.ndarray:
        return self.to_dense().sum(axis=1)

    def row_subset(self, indices: Sequence[int]) -> BinaryMatrix:
        idx = np.asarray(list(indices), dtype=np.intp)
        return BinaryMatrix(len(idx), self.cols, self.words[idx])

    def vstack(self, other: BinaryMatrix) -> BinaryMatrix:
        if other.cols != self.cols:
            raise DimensionError("column counts differ")
        return BinaryMatrix(self.rows + other.rows, self.cols, np.vstack([self.words, other.words]))

    def syndrome(self, x) -> np.ndarray:
        """Return ``H x`` over GF(2) for a length-``cols`` bit vector."""
        x = np.asarray(x, dtype=np.uint8)
        if x.shape != (self.cols,):
            raise DimensionError(f"vector length {x.shape} != {self.cols}")
        return (self.to_dense().astype(np.int64) @ x.astype(np.int64) % 2).astype(np.uint8)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinaryMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.words, other.words)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.words.tobytes()))

    def __repr__(self) -> str:
        return f"BinaryMatrix({self.rows}x{self.cols})"


def gf2_rank(m: BinaryMatrix) -> int:
    """Rank over GF(2) by forward elimination on the packed rows."""
    a = m.words.copy()
    pivot = 0
    for col in range(m.cols):
        if pivot == m.rows:
            break
        w, mask = col // WORD, np.uint64(1) << np.uint64(col % WORD)
        hits = np.flatnonzero(a[pivot:, w] & mask)
        if hits.size == 0:
            continue
        first = pivot + hits[0]
        if first != pivot:
            a[[pivot, first]] = a[[first, pivot]]
        below = pivot + hits[1:]
        if below.size:
            a[below] ^= a[pivot]
        pivot += 1
    return pivot


def expand_gldpc_matrix(h_global: BinaryMatrix, super_rows, h_component: BinaryMatrix) -> BinaryMatrix:
    """Replace each row in ``super_rows`` by ``h_component.rows`` rows.

    The j-th one of a super row (scanning columns left to right) is replaced by
    column j of the component matrix; zeros become zero columns. Other rows are
    copied. Output rows keep the original row order, with each super row
    expanded in place.
    """
    super_rows = set(super_rows)
    dense = h_global.to_dense()
    comp = h_component.to_dense()
    m, n = comp.shape
    blocks = []
    for i in range(h_global.rows):
        if i not in super_rows:
            blocks.append(dense[i : i + 1])
            continue
        support = np.flatnonzero(dense[i])
        if support.size != n:
            raise DimensionError(f"row {i} has weight {support.size}, component length is {n}")
        block = np.zeros((m, h_global.cols), dtype=np.uint8)
        block[:, support] = comp
        blocks.append(block)
    if not blocks:
        return BinaryMatrix.from_dense(np.zeros((0, h_global.cols), dtype=np.uint8))
    return BinaryMatrix.from_dense(np.vstack(blocks))


def write_alist(m: BinaryMatrix) -> str:
    """Serialise to alist text (columns first, 1-based, zero-padded lists)."""
    dense = m.to_dense()
    col_sets = [np.flatnonzero(dense[:, j]) + 1 for j in range(m.cols)]
    row_sets = [np.flatnonzero(dense[i]) + 1 for i in range(m.rows)]
    max_col = max((len(c) for c in col_sets), default=0)
    max_row = max((len(r) for r in row_sets), default=0)

    def padded(values, width):
        vals = list(map(int, values)) + [0] * (width - len(values))
        return " ".join(map(str, vals))

    lines = [
        f"{m.cols} {m.rows}",
        f"{max_col} {max_row}",
        " ".join(str(len(c)) for c in col_sets),
        " ".join(str(len(r)) for r in row_sets),
    ]
    # an all-zero matrix still writes one (zero) entry per list line
    lines += [padded(c, max(max_col, 1)) for c in col_sets]
    lines += [padded(r, max(max_row, 1)) for r in row_sets]
    return "\n".join(lines) + "\n"


def read_alist(text: str) -> BinaryMatrix:
    """Parse alist text. Zero padding in the neighbour lists is optional."""
    lines = [ln.split() for ln in text.strip().splitlines()]
    n_cols, n_rows = map(int, lines[0])
    col_deg = list(map(int, lines[2])) if n_cols else []
    row_deg = list(map(int, lines[3])) if n_rows else []
    if len(col_deg) != n_cols or len(row_deg) != n_rows:
        raise DimensionError("degree lists do not match header")
    body = lines[4:] if (n_cols and n_rows) else []
    if len(body) < n_cols + n_rows:
        raise DimensionError("alist body truncated")
    dense = np.zeros((n_rows, n_cols), dtype=np.uint8)
    for j in range(n_cols):
        rows = [int(v) for v in body[j] if int(v) > 0]
        if len(rows) != col_deg[j]:
            raise DimensionError(f"column {j + 1} degree mismatch")
        dense[np.asarray(rows, dtype=np.intp) - 1, j] = 1
    for i in range(n_rows):
        cols = [int(v) for v in body[n_cols + i] if int(v) > 0]
        if len(cols) != row_deg[i]:
            raise DimensionError(f"row {i + 1} degree mismatch")
        if set(np.flatnonzero(dense[i]) + 1) != set(cols):
            raise DimensionError(f"row {i + 1} disagrees with column lists")
    return BinaryMatrix.from_dense(dense)


def load_alist(path) -> BinaryMatrix:
    with open(path, encoding="utf-8") as f:
        return read_alist(f.read())


def save_alist(m: BinaryMatrix, path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(write_alist(m))

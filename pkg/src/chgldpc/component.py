"""Short t-error-correcting component codes with bounded-distance decoding."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import numpy as np

from .gf2 import BinaryMatrix, DimensionError, gf2_rank

MAX_SYNDROME_BITS = 20


class ComponentCodeError(ValueError):
    """Raised when a component code cannot guarantee its correction radius."""


@dataclass(frozen=True, eq=False)
class ComponentCode:
    """Binary linear code with a precomputed coset-leader table.

    ``leaders[s]`` is the unique error pattern of weight <= t with syndrome
    ``s`` (as a little-endian integer over the rows of ``h``), and
    ``correctable[s]`` says whether such a pattern exists.
    """

    h: BinaryMatrix
    t: int
    name: str = "generic"
    col_syndromes: np.ndarray = field(init=False, repr=False)
    leaders: np.ndarray = field(init=False, repr=False)
    correctable: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        m, n = self.h.shape
        if m > MAX_SYNDROME_BITS:
            raise ComponentCodeError(f"{m} parity rows exceed the syndrome-table limit")
        dense = self.h.to_dense().astype(np.int64)
        col_syn = (dense * (1 << np.arange(m, dtype=np.int64))[:, None]).sum(axis=0)
        leaders = np.zeros((1 << m, n), dtype=np.uint8)
        ok = np.zeros(1 << m, dtype=bool)
        owner: dict[int, tuple[int, ...]] = {0: ()}
        ok[0] = True
        for w in range(1, self.t + 1):
            for pos in combinations(range(n), w):
                s = 0
                for j in pos:
                    s ^= int(col_syn[j])
                if s in owner:
                    low = sorted(set(owner[s]) ^ set(pos))
                    raise ComponentCodeError(
                        f"minimum distance < {2 * self.t + 1}: codeword with support {low}")
                owner[s] = pos
                leaders[s, list(pos)] = 1
                ok[s] = True
        for name, val in (("col_syndromes", col_syn), ("leaders", leaders), ("correctable", ok)):
            val.setflags(write=False)
            object.__setattr__(self, name, val)

    @property
    def n(self) -> int:
        return self.h.cols

    @property
    def m(self) -> int:
        return self.h.rows

    @property
    def rate(self) -> Fraction:
        return Fraction(self.n - gf2_rank(self.h), self.n)

    def syndrome_ints(self, words: np.ndarray) -> np.ndarray:
        """Syndromes of ``words[..., n]`` packed as integers."""
        words = np.asarray(words)
        if words.shape[-1] != self.n:
            raise DimensionError(f"word length {words.shape[-1]} != {self.n}")
        out = np.zeros(words.shape[:-1], dtype=np.int64)
        for j in range(self.n):
            out ^= words[..., j].astype(np.int64) * int(self.col_syndromes[j])
        return out

    def is_codeword(self, word) -> bool:
        return int(self.syndrome_ints(np.asarray(word, dtype=np.uint8))) == 0


def bdd_decode(code: ComponentCode, word) -> frozenset[int] | None:
    """Bounded-distance decode one word.

    Returns the positions to flip to reach the unique codeword within distance
    ``t`` (empty when ``word`` is already a codeword), or None when no codeword
    lies within that radius.
    """
    word = np.asarray(word, dtype=np.uint8)
    if word.shape != (code.n,):
        raise DimensionError(f"word length {word.shape} != {code.n}")
    s = int(code.syndrome_ints(word))
    if not code.correctable[s]:
        return None
    return frozenset(np.flatnonzero(code.leaders[s]).tolist())


def make_generic(h: BinaryMatrix, t: int, name: str = "generic") -> ComponentCode:
    """Validate that ``h`` defines a code of distance >= 2t+1 and build its table."""
    if t < 0:
        raise ValueError("t must be non-negative")
    return ComponentCode(h, t, name)


def _gf32_powers(prim: int = 0b100101) -> list[int]:
    # x^5 + x^2 + 1
    powers, a = [], 1
    for _ in range(31):
        powers.append(a)
        a <<= 1
        if a & 0b100000:
            a ^= prim
    return powers


@lru_cache(maxsize=None)
def make_bch_31_21() -> ComponentCode:
    """Narrow-sense double-error-correcting BCH(31,21).

    GF(32) is generated by x^5+x^2+1 with primitive element alpha. Column i of
    the parity-check matrix stacks the 5-bit images of alpha^i and alpha^(3i),
    so codewords are exactly the polynomials with roots alpha and alpha^3,
    i.e. multiples of the generator m_1(x) m_3(x).
    """
    pw = _gf32_powers()
    cols = []
    for i in range(31):
        a1, a3 = pw[i], pw[(3 * i) % 31]
        cols.append([(a1 >> b) & 1 for b in range(5)] + [(a3 >> b) & 1 for b in range(5)])
    h = BinaryMatrix.from_dense(np.array(cols, dtype=np.uint8).T)
    return ComponentCode(h, 2, "bch31_21")


def repetition_parity(n: int) -> BinaryMatrix:
    """Parity-check matrix of the length-n repetition code (distance n)."""
    dense = np.zeros((n - 1, n), dtype=np.uint8)
    dense[:, 0] = 1
    dense[np.arange(n - 1), np.arange(1, n)] = 1
    return BinaryMatrix.from_dense(dense)


def make_repetition(n: int, t: int | None = None) -> ComponentCode:
    t = (n - 1) // 2 if t is None else t
    return ComponentCode(repetition_parity(n), t, f"rep{n}")


def component_from_name(name: str) -> ComponentCode:
    """Resolve ``bch31_21``, ``repN`` or a path to an alist file (t=2)."""
    if name == "bch31_21":
        return make_bch_31_21()
    if name.startswith("rep") and name[3:].isdigit():
        return make_repetition(int(name[3:]), 2)
    from .gf2 import load_alist
    return make_generic(load_alist(name), 2, name)

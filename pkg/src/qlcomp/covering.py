"""Covering codes over {+1,-1}^k0 and covering designs.

Covering radii are always computed by exhaustive scan over the 2^k0 cube
(vectorized popcounts), never taken on faith: code objects cache the radius
that the scan produced.  Greedy builders for codes and designs use
lowest-bitmask / lexicographic tie-breaking so outputs are reproducible
byte for byte.  The Erdos-Spencer style size bound
[1 + ln C(t,l)] * C(n,l) / C(t,l) is evaluated in the log domain so large
arguments do not overflow.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .core import BudgetError, SignVector

MAX_RADIUS_BITS = 20
MAX_GREEDY_CODE_BITS = 16
MAX_DESIGN_POINTS = 16


def _popcounts(values: np.ndarray) -> np.ndarray:
    return np.bitwise_count(values.astype(np.uint64))


@dataclass(frozen=True)
class CoveringCode:
    """Code over {+1,-1}^k0 with its exhaustively computed covering radius."""

    k0: int
    codewords: tuple  # SignVectors sorted by bitmask
    radius: int

    def __post_init__(self) -> None:
        if not self.codewords:
            raise ValueError("covering code must be nonempty")
        if any(c.length != self.k0 for c in self.codewords):
            raise ValueError("codeword length mismatch")
        if len(set(c.bits for c in self.codewords)) != len(self.codewords):
            raise ValueError("codewords must be distinct")

    @classmethod
    def from_codewords(cls, codewords: Iterable[SignVector]) -> "CoveringCode":
        words = sorted(set(codewords), key=lambda c: c.bits)
        if not words:
            raise ValueError("covering code must be nonempty")
        k0 = words[0].length
        return cls(k0, tuple(words), covering_radius(words))

    def contains(self, w: SignVector) -> bool:
        return any(c.bits == w.bits for c in self.codewords)

    def nearest(self, bits: int) -> SignVector:
        """Closest codeword in Hamming distance; ties to the smallest bitmask."""
        best, best_d = None, self.k0 + 1
        for c in self.codewords:  # sorted ascending, so strict < keeps ties low
            d = (bits ^ c.bits).bit_count()
            if d < best_d:
                best, best_d = c, d
        return best


def covering_radius(codewords: Sequence[SignVector]) -> int:
    """max over all w in the cube of the min Hamming distance to the code."""
    words = list(codewords)
    if not words:
        raise ValueError("covering radius of an empty code is undefined")
    k0 = words[0].length
    if any(c.length != k0 for c in words):
        raise ValueError("codeword length mismatch")
    if k0 > MAX_RADIUS_BITS:
        raise BudgetError(f"k0={k0} exceeds the exhaustive radius budget {MAX_RADIUS_BITS}")
    cube = np.arange(1 << k0, dtype=np.uint64)
    best = np.full(1 << k0, k0 + 1, dtype=np.uint64)
    for c in words:
        np.minimum(best, _popcounts(cube ^ np.uint64(c.bits)), out=best)
    return int(best.max())


def full_cube(k0: int) -> CoveringCode:
    """The whole cube as a code; radius 0."""
    words = tuple(SignVector(k0, b) for b in range(1 << k0))
    return CoveringCode(k0, words, 0)


def repetition_pair(k0: int) -> CoveringCode:
    """{all-ones, all-minus-ones}; radius floor(k0/2)."""
    words = (SignVector(k0, 0), SignVector(k0, (1 << k0) - 1))
    return CoveringCode(k0, words, k0 // 2)


def greedy_covering_code(k0: int, r: int) -> CoveringCode:
    """Complement-closed code with covering radius <= r, grown greedily.

    Each step adds the antipodal pair {w, -w} covering the most uncovered
    points (ties: lowest bitmask), so |half| = |code| / 2 by construction.
    """
    if k0 > MAX_GREEDY_CODE_BITS:
        raise BudgetError(f"k0={k0} exceeds the greedy-code budget {MAX_GREEDY_CODE_BITS}")
    if not 0 <= r <= k0:
        raise ValueError("need 0 <= r <= k0")
    if r == 0:
        return full_cube(k0)  # every point must be a codeword
    size = 1 << k0
    mask = np.uint64(size - 1)
    cube = np.arange(size, dtype=np.uint64)
    covered = np.zeros(size, dtype=bool)
    chosen: list[int] = []
    while not covered.all():
        best_bits, best_gain = -1, -1
        for bits in range(size // 2):  # pair representative: smaller bitmask
            d1 = _popcounts(cube ^ np.uint64(bits))
            d2 = _popcounts(cube ^ (np.uint64(bits) ^ mask))
            gain = int(np.count_nonzero(~covered & ((d1 <= r) | (d2 <= r))))
            if gain > best_gain:
                best_bits, best_gain = bits, gain
        bits = best_bits
        d1 = _popcounts(cube ^ np.uint64(bits))
        d2 = _popcounts(cube ^ (np.uint64(bits) ^ mask))
        covered |= (d1 <= r) | (d2 <= r)
        chosen += [bits, bits ^ (size - 1)]
    words = [SignVector(k0, b) for b in sorted(chosen)]
    return CoveringCode(k0, tuple(words), covering_radius(words))


@dataclass(frozen=True)
class AntipodalHalf:
    """One representative per {c, -c} pair of a code; |half| is c-hat."""

    parent: CoveringCode
    half: tuple  # SignVectors sorted by bitmask
    size: int

    def locate(self, c: SignVector) -> tuple[int, int]:
        """(column index, sigma) with sigma * half[index] == c."""
        for i, h in enumerate(self.half):
            if h.bits == c.bits:
                return i, 1
        neg = c.negated()
        for i, h in enumerate(self.half):
            if h.bits == neg.bits:
                return i, -1
        raise KeyError(c)


def antipodal_half(code: CoveringCode) -> AntipodalHalf:
    """Keep, from each antipodal pair present in the code, the smaller bitmask."""
    present = {c.bits for c in code.codewords}
    mask = (1 << code.k0) - 1
    kept = []
    for c in code.codewords:
        comp = c.bits ^ mask
        if comp in present and comp < c.bits:
            continue  # the partner represents this pair
        kept.append(c)
    kept.sort(key=lambda c: c.bits)
    return AntipodalHalf(code, tuple(kept), len(kept))


def save_code(code: CoveringCode, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for c in code.codewords:
            fh.write(c.to_string() + "\n")


def load_code(path) -> CoveringCode:
    with open(path, "r", encoding="utf-8") as fh:
        words = [SignVector.from_string(line) for line in fh if line.strip()]
    return CoveringCode.from_codewords(words)


# ---------------------------------------------------------------------------
# covering designs


@dataclass(frozen=True)
class CoveringDesign:
    """Family of t-subsets of [n] containing every l-subset at least once."""

    n: int
    t: int
    ell: int
    blocks: tuple  # sorted tuples of 0-based indices

    def __post_init__(self) -> None:
        if not 0 < self.ell <= self.t <= self.n:
            raise ValueError("need 0 < ell <= t <= n")
        for b in self.blocks:
            if len(b) != self.t or any(not 0 <= i < self.n for i in b):
                raise ValueError(f"bad block {b!r}")

    @property
    def size(self) -> int:
        return len(self.blocks)


def is_covering_design(design: CoveringDesign) -> bool:
    """Exhaustive check that every l-subset lies in some block."""
    block_sets = [frozenset(b) for b in design.blocks]
    for sub in itertools.combinations(range(design.n), design.ell):
        s = frozenset(sub)
        if not any(s <= b for b in block_sets):
            return False
    return True


def greedy_covering_design(n: int, t: int, ell: int) -> CoveringDesign:
    """Greedy design: each new t-block covers the most uncovered l-subsets.

    Ties go to the lexicographically smallest block; validity is checked
    exhaustively before returning.
    """
    if not 0 < ell <= t <= n:
        raise ValueError("need 0 < ell <= t <= n")
    if n > MAX_DESIGN_POINTS or math.comb(n, ell) > 2_000_000:
        raise BudgetError(f"(n={n}, ell={ell}) exceeds the design enumeration budget")
    uncovered = set(itertools.combinations(range(n), ell))
    candidates = list(itertools.combinations(range(n), t))
    blocks = []
    while uncovered:
        best_block, best_gain = None, -1
        for cand in candidates:
            gain = sum(1 for sub in itertools.combinations(cand, ell) if sub in uncovered)
            if gain > best_gain:
                best_block, best_gain = cand, gain
        blocks.append(best_block)
        for sub in itertools.combinations(best_block, ell):
            uncovered.discard(sub)
    design = CoveringDesign(n, t, ell, tuple(blocks))
    if not is_covering_design(design):
        raise AssertionError("greedy covering design failed its own cover check")
    return design


def _ln_comb(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def erdos_spencer_bound(n: int, t: int, ell: int, log2: bool = False) -> float:
    """Size bound [1 + ln C(t,l)] * C(n,l) / C(t,l) for covering designs.

    Evaluated in the log domain; with ``log2=True`` the base-2 logarithm of
    the bound is returned, the usable form when the ratio itself overflows.
    """
    if not 0 < ell <= t <= n:
        raise ValueError("need 0 < ell <= t <= n")
    log2_value = (math.log(1 + _ln_comb(t, ell)) + _ln_comb(n, ell) - _ln_comb(t, ell)) / math.log(2)
    if log2:
        return log2_value
    return 2.0**log2_value


def save_design(design: CoveringDesign, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for block in design.blocks:
            fh.write(" ".join(str(i) for i in block) + "\n")


def load_design(path, n: int, t: int, ell: int) -> CoveringDesign:
    with open(path, "r", encoding="utf-8") as fh:
        blocks = tuple(tuple(int(tok) for tok in line.split()) for line in fh if line.strip())
    design = CoveringDesign(n, t, ell, blocks)
    if not is_covering_design(design):
        raise ValueError(f"file {path} is not a valid ({n},{t},{ell}) covering design")
    return design

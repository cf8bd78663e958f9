"""Protocol constructions: parity scheme, covering-code blocks, custom blocks.

Every builder returns either a full ``Protocol`` or a ``BlockSpec`` (one
k0-sized block of a block construction); ``expand_blocks`` turns a block
spec into the m-block protocol with encoder I_m (x) M.  Decoder tables are
stored with exact rational coefficients whenever the block matrix is
integral, so downstream verification reports a residual of exactly zero.

Tie-breaking everywhere is deterministic: nearest codewords by smallest
bitmask, column subsets in lexicographic order, corrected indices lowest
first.  Rebuilding a table therefore reproduces it byte for byte.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    BudgetError,
    Protocol,
    SignVector,
    SparseCombination,
    as_matrix,
    enumerate_sign_vectors,
    span_contains,
)
from .covering import CoveringCode, antipodal_half

# 5x6 block matrix: all ones with -3 on the superdiagonal.  Every length-5
# sign vector lies in the span of at most two of its columns, giving the
# rate point (6/5, 2/5).
BLOCK_5X6 = np.array(
    [
        [1, -3, 1, 1, 1, 1],
        [1, 1, -3, 1, 1, 1],
        [1, 1, 1, -3, 1, 1],
        [1, 1, 1, 1, -3, 1],
        [1, 1, 1, 1, 1, -3],
    ],
    dtype=float,
)
BLOCK_5X6.flags.writeable = False


class BlockConstructionError(ValueError):
    """A candidate block matrix cannot decode every sign vector."""

    def __init__(self, message: str, witness: Optional[SignVector] = None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class RatePoint:
    """(redundancy ratio nu = n/k, access ratio lam = ell/k)."""

    nu: float
    lam: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.nu) and math.isfinite(self.lam)):
            raise ValueError("rate point must be finite")
        if self.nu <= 0 or self.lam <= 0:
            raise ValueError("rate point must be positive")


@dataclass(frozen=True)
class BlockSpec:
    """One block of a block construction: matrix M plus its decoder table.

    ``table[bits]`` is the sparse combination decoding the sign vector with
    that bitmask; builders guarantee support size <= ell0 and (for the exact
    constructions) exact reconstruction.
    """

    k0: int
    n0: int
    ell0: int
    matrix: np.ndarray
    table: tuple  # SparseCombination, indexed by bitmask

    def __post_init__(self) -> None:
        m = as_matrix(self.matrix)
        if m.shape != (self.k0, self.n0):
            raise ValueError(f"matrix shape {m.shape} != ({self.k0}, {self.n0})")
        if len(self.table) != 1 << self.k0:
            raise ValueError("decoder table must have 2^k0 entries")
        for comb in self.table:
            if comb.access > self.ell0:
                raise ValueError("table entry exceeds the access cap ell0")
            if comb.support and comb.support[-1] >= self.n0:
                raise ValueError("table entry indexes past n0")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    def decode(self, w: SignVector) -> SparseCombination:
        if w.length != self.k0:
            raise ValueError("length mismatch")
        return self.table[w.bits]


def rate_point(obj) -> RatePoint:
    """Induced (nu, lam) of a Protocol, BlockSpec, or approximation wrapper."""
    if hasattr(obj, "protocol") and isinstance(getattr(obj, "protocol"), Protocol):
        obj = obj.protocol
    if isinstance(obj, Protocol):
        return RatePoint(obj.n / obj.k, obj.ell / obj.k)
    if isinstance(obj, BlockSpec):
        return RatePoint(obj.n0 / obj.k0, obj.ell0 / obj.k0)
    raise TypeError(f"no rate point for {type(obj).__name__}")


# ---------------------------------------------------------------------------
# constructions


def trivial_protocol(k: int) -> Protocol:
    """Systematic storage plus one parity node; access at most floor(k/2)+1.

    The decoder writes w as (majority sign) * all-ones plus corrections of
    2*w_j on the minority-sign coordinates, so it queries the parity node
    with coefficient +-1 and at most floor(k/2) systematic nodes with
    coefficients +-2.  The induced rate pair tends to (1, 1/2).
    """
    if k < 1 or k > 20:
        raise BudgetError(f"k={k} outside the trivial-protocol budget 1..20")
    encoder = np.hstack([np.eye(k), np.ones((k, 1))])

    def decode(w: SignVector) -> SparseCombination:
        minus = [i for i in range(k) if not (w.bits >> i) & 1]
        plus = [i for i in range(k) if (w.bits >> i) & 1]
        # ties prefer the parity-node sign +1 (correct the minus side)
        if len(minus) <= len(plus):
            support = tuple(minus) + (k,)
            coeffs = (-2,) * len(minus) + (1,)
        else:
            support = tuple(plus) + (k,)
            coeffs = (2,) * len(plus) + (-1,)
        return SparseCombination(support, coeffs)

    return Protocol(k=k, n=k + 1, ell=k // 2 + 1, encoder=encoder, decoder=decode)


def nonsystematic_block(k0: int) -> BlockSpec:
    """M's columns are the 2^(k0-1) antipodal classes; every w decodes with
    access 1 and coefficient +-1.  Rate point (2^(k0-1)/k0, 1/k0)."""
    if not 1 <= k0 <= 12:
        raise BudgetError(f"k0={k0} outside the non-systematic budget 1..12")
    n0 = 1 << (k0 - 1)
    # the smaller-bitmask member of each pair is exactly bits < 2^(k0-1)
    matrix = np.column_stack([SignVector(k0, b).to_array() for b in range(n0)])
    table: list[SparseCombination] = []
    for bits in range(1 << k0):
        if bits < n0:
            table.append(SparseCombination((bits,), (1,)))
        else:
            table.append(SparseCombination(((bits ^ ((1 << k0) - 1)),), (-1,)))
    return BlockSpec(k0=k0, n0=n0, ell0=1, matrix=matrix, table=tuple(table))


def covering_code_block(code: CoveringCode) -> BlockSpec:
    """Systematic covering-code block: M = (I | B) with B the antipodal half.

    Each w is decoded from the nearest codeword's column (coefficient +-1)
    plus one +-2 systematic correction per differing coordinate; access is
    at most radius+1 and the rate point is ((k0 + c-hat)/k0, (r+1)/k0).
    """
    k0 = code.k0
    if k0 > 14:
        raise BudgetError(f"k0={k0} outside the covering-construction budget <= 14")
    half = antipodal_half(code)
    matrix = np.hstack([np.eye(k0), np.column_stack([h.to_array() for h in half.half])])
    table: list[SparseCombination] = []
    for bits in range(1 << k0):
        c = code.nearest(bits)
        col, sigma = half.locate(c)
        support: list[int] = []
        coeffs: list[int] = []
        for j in range(k0):
            wj = 1 if (bits >> j) & 1 else -1
            cj = 1 if (c.bits >> j) & 1 else -1
            if wj != cj:
                support.append(j)
                coeffs.append(wj - cj)  # +-2
        support.append(k0 + col)
        coeffs.append(sigma)
        table.append(SparseCombination(tuple(support), tuple(coeffs)))
    return BlockSpec(
        k0=k0, n0=k0 + half.size, ell0=code.radius + 1, matrix=matrix, table=tuple(table)
    )


def custom_block(matrix, ell0: int) -> BlockSpec:
    """Block spec for an arbitrary matrix: per w, the smallest column subset
    (lexicographic tie-break) whose span contains w, with exact coefficients.

    Raises BlockConstructionError naming a witness w if some sign vector
    needs more than ell0 columns.
    """
    m = as_matrix(matrix)
    k0, n0 = m.shape
    if ell0 < 1 or ell0 > n0:
        raise ValueError("need 1 <= ell0 <= n0")
    work = (1 << k0) * sum(math.comb(n0, j) for j in range(1, ell0 + 1))
    if work > 50_000_000:
        raise BudgetError(f"search size {work} exceeds the custom-block budget")
    table: list[SparseCombination] = []
    for w in enumerate_sign_vectors(k0):
        found = None
        for size in range(1, ell0 + 1):
            for subset in itertools.combinations(range(n0), size):
                coeffs = span_contains(m[:, subset], w)
                if coeffs is not None:
                    kept = [(j, c) for j, c in zip(subset, coeffs) if c != 0]
                    found = SparseCombination(
                        tuple(j for j, _ in kept), tuple(c for _, c in kept)
                    )
                    break
            if found is not None:
                break
        if found is None:
            raise BlockConstructionError(
                f"not a valid block construction at ell0={ell0}: "
                f"w={w.to_string()} is not in the span of any <= {ell0} columns",
                witness=w,
            )
        table.append(found)
    return BlockSpec(k0=k0, n0=n0, ell0=ell0, matrix=m, table=tuple(table))


def block_5x6_spec() -> BlockSpec:
    """The shipped 5x6 construction at ell0 = 2."""
    return custom_block(BLOCK_5X6, 2)


def expand_blocks(spec: BlockSpec, m: int) -> Protocol:
    """Protocol with encoder I_m (x) M; per-block decoders with index offsets.

    k = m*k0, n = m*n0, ell = m*ell0; the decoder stays implicit (computed
    per w), so m is not capped here - exhaustive verification has its own
    budget.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    k0, n0 = spec.k0, spec.n0
    encoder = np.kron(np.eye(m), spec.matrix)
    mask = (1 << k0) - 1

    def decode(w: SignVector) -> SparseCombination:
        support: list[int] = []
        coeffs: list = []
        for i in range(m):
            comb = spec.table[(w.bits >> (i * k0)) & mask]
            support.extend(j + i * n0 for j in comb.support)
            coeffs.extend(comb.coeffs)
        return SparseCombination(tuple(support), tuple(coeffs))

    return Protocol(k=m * k0, n=m * n0, ell=m * spec.ell0, encoder=encoder, decoder=decode)


# ---------------------------------------------------------------------------
# protocol JSON files


def _round12(x: float) -> float:
    return float(f"{float(x):.12g}")


def protocol_to_json_dict(protocol: Protocol, include_table: Optional[bool] = None) -> dict:
    """JSON-ready dict: k, n, ell, encoder rows, and (by default for
    k <= 16) the materialized decoder table."""
    if include_table is None:
        include_table = protocol.k <= 16
    out = {
        "k": protocol.k,
        "n": protocol.n,
        "ell": protocol.ell,
        "encoder": [[_round12(v) for v in row] for row in protocol.encoder],
    }
    if include_table:
        if protocol.k > 20:
            raise BudgetError("decoder table materialization capped at k <= 20")
        rows = []
        for w in enumerate_sign_vectors(protocol.k):
            comb = protocol.decode(w)
            rows.append(
                {
                    "w": w.to_string(),
                    "support": list(comb.support),
                    "coeffs": [_round12(c) for c in comb.coeffs],
                }
            )
        out["decoder"] = rows
    return out


def protocol_from_json_dict(data: dict) -> Protocol:
    k, n, ell = int(data["k"]), int(data["n"]), int(data["ell"])
    encoder = as_matrix(data["encoder"])
    if "decoder" not in data:
        raise ValueError("protocol file has no decoder table; cannot rebuild the decoder")
    table: dict[int, SparseCombination] = {}
    for row in data["decoder"]:
        w = SignVector.from_string(row["w"])
        coeffs = tuple(int(c) if float(c).is_integer() else float(c) for c in row["coeffs"])
        table[w.bits] = SparseCombination(tuple(int(j) for j in row["support"]), coeffs)
    if len(table) != 1 << k:
        raise ValueError(f"decoder table has {len(table)} entries, expected 2^{k}")

    def decode(w: SignVector) -> SparseCombination:
        return table[w.bits]

    return Protocol(k=k, n=n, ell=ell, encoder=encoder, decoder=decode)


def save_protocol(protocol: Protocol, path, include_table: Optional[bool] = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(protocol_to_json_dict(protocol, include_table), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_protocol(path) -> Protocol:
    with open(path, "r", encoding="utf-8") as fh:
        return protocol_from_json_dict(json.load(fh))

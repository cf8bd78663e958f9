"""Approximate-recovery protocols: relaxed covering schemes, block
discarding, and K-SVD dictionary learning with OMP sparse coding.

An approximation protocol answers with z such that |w^T x - z|^2 <= eps * k
for unit data; the sufficient condition implemented and measured throughout
is that every column residual w - D a has squared norm at most eps * k.
``measure_epsilon`` evaluates the worst case exhaustively, per block when a
block structure is available (so discarding schemes with large k stay
measurable exactly).

The relaxed covering scheme queries the nearest-codeword node with a fixed
coefficient alpha and corrects only r-b of the differing coordinates with
coefficient beta = alpha + 1; alpha = (k0-r-b)/(k0-r+b) minimizes the
worst-case residual and yields eps <= 4 b (k0-r) / (k0 (k0-r+b)).  The
code-only variant stores nothing but the c-hat code nodes and scales by
alpha = (k0-2r)/k0, with eps <= 4 r (k0-r) / k0^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .core import (
    BudgetError,
    Protocol,
    SignVector,
    SparseCombination,
    as_matrix,
    combine_columns,
    enumerate_sign_vectors,
)
from .construct import BlockSpec, expand_blocks
from .covering import CoveringCode, antipodal_half

MAX_MEASURE_BITS = 16


@dataclass(frozen=True)
class ApproxProtocol:
    """A protocol whose decoder reconstructs w only approximately.

    ``epsilon_bound`` is the analytic guarantee on max_w ||w - Da||^2 / k;
    ``epsilon_measured`` (when present) is the exhaustively measured value
    and may not exceed the bound beyond rounding.  Block-structured schemes
    carry their per-block spec so the measurement decomposes block-wise;
    ``discarded`` trailing blocks decode to zero.
    """

    protocol: Protocol
    epsilon_bound: float
    epsilon_measured: Optional[float] = None
    block: Optional[BlockSpec] = None
    m: int = 1
    discarded: int = 0

    def __post_init__(self) -> None:
        if self.epsilon_bound < 0:
            raise ValueError("epsilon_bound must be nonnegative")
        if self.epsilon_measured is not None and self.epsilon_measured > self.epsilon_bound + 1e-9:
            raise ValueError("measured epsilon exceeds the analytic bound")
        if self.block is not None and self.m < 1:
            raise ValueError("m must be >= 1")
        if not 0 <= self.discarded <= self.m:
            raise ValueError("discarded blocks out of range")


def _strip_zeros(support, coeffs) -> SparseCombination:
    kept = [(j, c) for j, c in zip(support, coeffs) if c != 0]
    return SparseCombination(tuple(j for j, _ in kept), tuple(c for _, c in kept))


def _residual_sq(matrix: np.ndarray, comb: SparseCombination, bits: int):
    """Squared reconstruction error ||M a - w||^2; Fraction on the exact path."""
    recon = combine_columns(matrix, comb)
    if isinstance(recon, list):
        total = Fraction(0)
        for i, r in enumerate(recon):
            total += (r - (1 if (bits >> i) & 1 else -1)) ** 2
        return total
    k0 = matrix.shape[0]
    w = np.array([1.0 if (bits >> i) & 1 else -1.0 for i in range(k0)])
    return float(np.sum((recon - w) ** 2))


def _block_max_residual_sq(spec: BlockSpec):
    return max(_residual_sq(spec.matrix, spec.table[bits], bits) for bits in range(1 << spec.k0))


def measure_epsilon(obj, tol_bits: int = MAX_MEASURE_BITS) -> float:
    """Exhaustive worst-case epsilon: max_w ||w - D a_w||^2 / k.

    Accepts an ApproxProtocol (block decomposition used when available), a
    BlockSpec, or a plain Protocol (k capped at the exhaustive budget).
    """
    if isinstance(obj, ApproxProtocol):
        if obj.block is not None:
            blk = _block_max_residual_sq(obj.block)
            kept = obj.m - obj.discarded
            k0 = obj.block.k0
            total = kept * blk + obj.discarded * k0  # a discarded block loses ||w_i||^2 = k0
            if isinstance(total, Fraction):
                return float(total / (obj.m * k0))
            return float(total) / (obj.m * k0)
        return measure_epsilon(obj.protocol, tol_bits)
    if isinstance(obj, BlockSpec):
        blk = _block_max_residual_sq(obj)
        return float(blk / obj.k0) if isinstance(blk, Fraction) else blk / obj.k0
    if isinstance(obj, Protocol):
        if obj.k > tol_bits:
            raise BudgetError(f"k={obj.k} exceeds the measurement budget {tol_bits}")
        worst = None
        for w in enumerate_sign_vectors(obj.k):
            r = _residual_sq(obj.encoder, obj.decode(w), w.bits)
            if worst is None or r > worst:
                worst = r
        return float(worst / obj.k) if isinstance(worst, Fraction) else worst / obj.k
    raise TypeError(f"cannot measure {type(obj).__name__}")


# ---------------------------------------------------------------------------
# relaxed covering-code schemes


def approx_covering(code: CoveringCode, b: int) -> ApproxProtocol:
    """Relaxed systematic covering scheme: leave up to b differences uncorrected.

    Per block, the decoder queries the nearest-codeword node with coefficient
    sigma*alpha plus the r-b lowest differing systematic nodes with
    coefficient beta*w_j, beta = alpha + 1.  Access <= r - b + 1, rate point
    ((k0 + c-hat)/k0, (r-b+1)/k0), eps <= 4 b (k0-r) / (k0 (k0-r+b)).
    """
    r, k0 = code.radius, code.k0
    if r < 1:
        raise ValueError("the relaxed covering scheme needs radius >= 1")
    if not 0 <= b <= r - 1:
        raise ValueError(f"need 0 <= b <= r-1 = {r - 1}")
    if b * r > (k0 - r) ** 2:
        # with the fixed worst-case alpha, a codeword itself (distance 0,
        # residual k0 (1-alpha)^2) would then exceed the claimed bound
        raise ValueError("need b*r <= (k0-r)^2 for the error bound to hold")
    half = antipodal_half(code)
    matrix = np.hstack([np.eye(k0), np.column_stack([h.to_array() for h in half.half])])
    # b = 0 corrects everything and is the exact scheme (the general formula
    # gives (k0-r)/(k0-r) = 1 wherever it is defined)
    alpha = Fraction(1) if b == 0 else Fraction(k0 - r - b, k0 - r + b)
    beta = alpha + 1
    table: list[SparseCombination] = []
    for bits in range(1 << k0):
        c = code.nearest(bits)
        col, sigma = half.locate(c)
        differing = [j for j in range(k0) if ((bits >> j) ^ (c.bits >> j)) & 1]
        corrected = differing[: r - b]
        support = list(corrected) + [k0 + col]
        coeffs = [beta * (1 if (bits >> j) & 1 else -1) for j in corrected] + [sigma * alpha]
        table.append(_strip_zeros(support, coeffs))
    spec = BlockSpec(k0=k0, n0=k0 + half.size, ell0=r - b + 1, matrix=matrix, table=tuple(table))
    eps = 0.0 if b == 0 else 4 * b * (k0 - r) / (k0 * (k0 - r + b))
    return ApproxProtocol(
        protocol=expand_blocks(spec, 1), epsilon_bound=eps, block=spec, m=1
    )


def approx_covering_codeonly(code: CoveringCode) -> ApproxProtocol:
    """Store only the c-hat code nodes; decode with one scaled query.

    alpha = (k0 - 2r)/k0 minimizes the single-coefficient residual; access
    is 1, the rate point (c-hat/k0, 1/k0), and eps <= 4 r (k0-r) / k0^2.
    The full cube (r = 0) degenerates to the exact access-1 scheme.
    """
    r, k0 = code.radius, code.k0
    if k0 < 2 * r:
        raise ValueError("need k0 >= 2*radius for the error bound to hold")
    half = antipodal_half(code)
    matrix = np.column_stack([h.to_array() for h in half.half])
    alpha = Fraction(k0 - 2 * r, k0)
    table: list[SparseCombination] = []
    for bits in range(1 << k0):
        c = code.nearest(bits)
        col, sigma = half.locate(c)
        table.append(_strip_zeros([col], [sigma * alpha]))
    spec = BlockSpec(k0=k0, n0=half.size, ell0=1, matrix=matrix, table=tuple(table))
    eps = 4 * r * (k0 - r) / (k0 * k0)
    return ApproxProtocol(
        protocol=expand_blocks(spec, 1), epsilon_bound=eps, block=spec, m=1
    )


def discard_blocks(spec: BlockSpec, eps: float, m: int) -> ApproxProtocol:
    """Drop the trailing floor(eps*m) blocks of an m-block construction.

    Discarded blocks are neither stored nor queried and decode to zero, each
    contributing ||w_i||^2 = k0 of squared error; the rate point converges
    to ((1-eps) nu, (1-eps) lam) and the realized epsilon is floor(eps*m)/m.
    """
    if not 0 < eps < 1:
        raise ValueError("need 0 < eps < 1")
    if m < 1:
        raise ValueError("m must be >= 1")
    if _block_max_residual_sq(spec) != 0:
        # the floor(eps*m)/m bound accounts only for dropped blocks, so the
        # kept ones must reconstruct exactly
        raise ValueError("discard_blocks requires an exactly decoding block spec")
    d = math.floor(eps * m)
    kept = m - d
    if kept < 1:
        raise ValueError("discarding would drop every block")
    k0, n0 = spec.k0, spec.n0
    encoder = np.vstack([np.kron(np.eye(kept), spec.matrix), np.zeros((d * k0, kept * n0))])
    mask = (1 << k0) - 1

    def decode(w: SignVector) -> SparseCombination:
        support: list[int] = []
        coeffs: list = []
        for i in range(kept):
            comb = spec.table[(w.bits >> (i * k0)) & mask]
            support.extend(j + i * n0 for j in comb.support)
            coeffs.extend(comb.coeffs)
        return SparseCombination(tuple(support), tuple(coeffs))

    protocol = Protocol(
        k=m * k0, n=kept * n0, ell=kept * spec.ell0, encoder=encoder, decoder=decode
    )
    return ApproxProtocol(
        protocol=protocol, epsilon_bound=d / m, block=spec, m=m, discarded=d
    )


# ---------------------------------------------------------------------------
# OMP and K-SVD


def omp(dictionary, w: SignVector, ell: int, tol: float = 1e-9) -> SparseCombination:
    """Orthogonal matching pursuit against the columns of ``dictionary``.

    Greedily selects the column with the largest absolute inner product with
    the residual (ties to the lowest index, columns used at most once),
    re-solves least squares on the chosen support, and stops after ell atoms
    or once the residual 2-norm is within tol.
    """
    d = as_matrix(dictionary)
    k, n = d.shape
    if w.length != k:
        raise ValueError("dictionary row count must match w")
    if not 1 <= ell <= n:
        raise ValueError("need 1 <= ell <= n")
    if np.any(np.linalg.norm(d, axis=0) == 0):
        raise ValueError("dictionary contains a zero column")
    target = w.to_array()
    residual = target.copy()
    selected: list[int] = []
    coeffs = np.zeros(0)
    while len(selected) < ell and np.linalg.norm(residual) > tol:
        corr = np.abs(d.T @ residual)
        corr[selected] = -1.0
        j = int(np.argmax(corr))
        if corr[j] <= 0.0:
            break
        selected.append(j)
        support = sorted(selected)
        coeffs, *_ = np.linalg.lstsq(d[:, support], target, rcond=None)
        residual = target - d[:, support] @ coeffs
    support = sorted(selected)
    order = {j: i for i, j in enumerate(support)}
    return _strip_zeros(support, [float(coeffs[order[j]]) for j in support])


def _rank1(residual: np.ndarray, start: np.ndarray, iters: int = 200, tol: float = 1e-12):
    """Dominant rank-1 factorization d g^T of ``residual`` by power iteration.

    Along the iteration ||residual^T d|| never decreases, so substituting the
    result for an atom cannot increase the K-SVD objective.
    """
    d = start.astype(float).copy()
    nrm = np.linalg.norm(d)
    if nrm == 0:
        col = int(np.argmax(np.linalg.norm(residual, axis=0)))
        d = residual[:, col].copy()
        nrm = np.linalg.norm(d)
        if nrm == 0:
            return start, np.zeros(residual.shape[1])
    d /= nrm
    for _ in range(iters):
        step = residual @ (residual.T @ d)
        nrm = np.linalg.norm(step)
        if nrm == 0:
            break
        step /= nrm
        if np.linalg.norm(step - d) < tol:
            d = step
            break
        d = step
    return d, residual.T @ d


@dataclass(frozen=True)
class KsvdResult:
    """Learned dictionary, per-w decoder table, worst-case epsilon, and the
    (after sparse coding, after dictionary update) objective trace."""

    dictionary: np.ndarray
    table: tuple  # SparseCombination per bitmask
    epsilon_measured: float
    objective_history: tuple


def ksvd(
    k: int,
    n: int,
    ell: int,
    iterations: int,
    seed: int,
    init_dictionary=None,
) -> KsvdResult:
    """K-SVD on the full sign matrix W (columns = all of {+1,-1}^k).

    Alternates OMP sparse coding of every column with atom-by-atom rank-1
    dictionary updates; unused atoms are re-seeded with the currently
    worst-approximated column of W.  Stops early once the objective improves
    by less than 1e-10.  By default the dictionary starts from n distinct
    columns of W drawn with the seeded generator; pass ``init_dictionary``
    to control the start (e.g. one representative per antipodal class).
    """
    if k > 12:
        raise BudgetError(f"k={k} exceeds the K-SVD budget 12 (W has 2^k columns)")
    if not 1 <= n < (1 << k):
        raise ValueError("need 1 <= n < 2^k")
    if not 1 <= ell <= n:
        raise ValueError("need 1 <= ell <= n")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    s = 1 << k
    W = np.column_stack([SignVector(k, b).to_array() for b in range(s)])
    if init_dictionary is None:
        rng = np.random.default_rng(seed)
        cols = rng.choice(s, size=n, replace=False)
        D = W[:, cols].astype(float).copy()
    else:
        D = as_matrix(init_dictionary).copy()
        if D.shape != (k, n):
            raise ValueError(f"init dictionary shape {D.shape} != ({k}, {n})")

    def sparse_code() -> np.ndarray:
        A = np.zeros((n, s))
        for bits in range(s):
            comb = omp(D, SignVector(k, bits), ell, tol=1e-12)
            for j, c in zip(comb.support, comb.coeffs):
                A[j, bits] = c
        return A

    history = []
    prev_obj = math.inf
    for _ in range(iterations):
        A = sparse_code()
        obj_coding = float(np.sum((W - D @ A) ** 2))
        reseeded: set[int] = set()
        for j in range(n):
            used = np.nonzero(A[j])[0]
            if used.size == 0:
                errs = np.sum((W - D @ A) ** 2, axis=0)
                for c in sorted(reseeded):
                    errs[c] = -1.0
                worst = int(np.argmax(errs))
                D[:, j] = W[:, worst]
                reseeded.add(worst)
                continue
            E = W[:, used] - D @ A[:, used] + np.outer(D[:, j], A[j, used])
            d, g = _rank1(E, D[:, j])
            D[:, j] = d
            A[j, used] = g
        obj_update = float(np.sum((W - D @ A) ** 2))
        history.append((obj_coding, obj_update))
        if prev_obj - obj_update < 1e-10:
            break
        prev_obj = obj_update
    final_table = []
    worst_eps = 0.0
    for bits in range(s):
        comb = omp(D, SignVector(k, bits), ell, tol=1e-12)
        final_table.append(comb)
        worst_eps = max(worst_eps, _residual_sq(D, comb, bits) / k)
    return KsvdResult(
        dictionary=D,
        table=tuple(final_table),
        epsilon_measured=float(worst_eps),
        objective_history=tuple(history),
    )


def ksvd_approx_protocol(result: KsvdResult, ell: int) -> ApproxProtocol:
    """Wrap a K-SVD result as an ApproxProtocol (bound := measured value)."""
    k, n = result.dictionary.shape
    table = result.table

    def decode(w: SignVector) -> SparseCombination:
        return table[w.bits]

    protocol = Protocol(k=k, n=n, ell=ell, encoder=result.dictionary, decoder=decode)
    return ApproxProtocol(
        protocol=protocol,
        epsilon_bound=result.epsilon_measured,
        epsilon_measured=result.epsilon_measured,
    )

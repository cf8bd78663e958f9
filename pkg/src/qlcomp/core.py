"""Sign vectors, small exact/tolerant linear algebra, and the protocol type.

The whole package works over three small objects: ``SignVector`` (an element
of {+1,-1}^k packed into a bitmask), dense numpy arrays for encoders and
block matrices, and ``SparseCombination`` (one sparse column of a decoding
matrix).  A ``Protocol`` bundles a k-by-n encoder with a decoder map and is
the unit that gets built, verified, serialized and measured.

Two arithmetic paths coexist.  Integer-valued matrices are handled exactly
(rational Gaussian elimination, so membership tests and decoder coefficients
carry no rounding error); everything else falls back to floating point with
an absolute residual tolerance, which is benign at the tiny dimensions used
here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterator, Optional, Sequence

import numpy as np

DEFAULT_TOL = 1e-9

# Exhaustive enumerations are capped at desk scale; the limits below are the
# contract, not tuning knobs.
MAX_ENUM_BITS = 30
MAX_COUNT_BITS = 20


class BudgetError(RuntimeError):
    """An exhaustive computation would exceed the desk-scale budget."""


@dataclass(frozen=True)
class SignVector:
    """Element of {+1,-1}^length; bit i set means entry i equals +1."""

    length: int
    bits: int

    def __post_init__(self) -> None:
        if self.length < 1:
            raise ValueError("SignVector length must be >= 1")
        if self.bits < 0 or self.bits >> self.length:
            raise ValueError("bitmask has a set bit at position >= length")

    @classmethod
    def from_entries(cls, entries: Sequence[float]) -> "SignVector":
        bits = 0
        for i, e in enumerate(entries):
            if e == 1:
                bits |= 1 << i
            elif e != -1:
                raise ValueError(f"entry {e!r} is not +1 or -1")
        return cls(len(entries), bits)

    @classmethod
    def from_string(cls, s: str) -> "SignVector":
        """Parse a '+'/'-' string, index 0 leftmost ('−' accepted too)."""
        bits = 0
        for i, ch in enumerate(s.strip()):
            if ch == "+":
                bits |= 1 << i
            elif ch not in ("-", "−"):
                raise ValueError(f"bad sign character {ch!r}")
        if not s.strip():
            raise ValueError("empty sign string")
        return cls(len(s.strip()), bits)

    def entry(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return 1 if (self.bits >> i) & 1 else -1

    def to_array(self) -> np.ndarray:
        out = np.full(self.length, -1.0)
        for i in range(self.length):
            if (self.bits >> i) & 1:
                out[i] = 1.0
        return out

    def to_string(self) -> str:
        return "".join("+" if (self.bits >> i) & 1 else "-" for i in range(self.length))

    def negated(self) -> "SignVector":
        mask = (1 << self.length) - 1
        return SignVector(self.length, self.bits ^ mask)

    def hamming_distance(self, other: "SignVector") -> int:
        if self.length != other.length:
            raise ValueError("length mismatch")
        return (self.bits ^ other.bits).bit_count()

    def __neg__(self) -> "SignVector":
        return self.negated()

    def __len__(self) -> int:
        return self.length

    def __repr__(self) -> str:
        return f"SignVector({self.to_string()!r})"


def enumerate_sign_vectors(k: int) -> Iterator[SignVector]:
    """Yield all 2^k sign vectors of length k in increasing bitmask order."""
    if not 1 <= k <= MAX_ENUM_BITS:
        raise BudgetError(f"k={k} outside enumeration budget 1..{MAX_ENUM_BITS}")
    for bits in range(1 << k):
        yield SignVector(k, bits)


# ---------------------------------------------------------------------------
# dense matrices


def as_matrix(entries) -> np.ndarray:
    """Validate and return a 2-D float array with finite entries."""
    m = np.asarray(entries, dtype=float)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError("matrix must be 2-D and nonempty")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def is_integral(matrix: np.ndarray) -> bool:
    """True iff every entry is an integer (enables the exact paths)."""
    return bool(np.all(matrix == np.round(matrix)))


def matrix_to_text(matrix: np.ndarray) -> str:
    """Serialize: first line "rows cols", then one line per row."""
    m = as_matrix(matrix)
    lines = [f"{m.shape[0]} {m.shape[1]}"]
    integral = is_integral(m)
    for row in m:
        if integral:
            lines.append(" ".join(str(int(x)) for x in row))
        else:
            lines.append(" ".join(f"{x:.12g}" for x in row))
    return "\n".join(lines) + "\n"


def matrix_from_text(text: str) -> np.ndarray:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix text")
    try:
        rows, cols = (int(tok) for tok in lines[0].split())
    except Exception as exc:
        raise ValueError(f"bad matrix header {lines[0]!r}") from exc
    if len(lines) - 1 != rows:
        raise ValueError(f"expected {rows} rows, found {len(lines) - 1}")
    data = [[float(tok) for tok in ln.split()] for ln in lines[1:]]
    m = as_matrix(data)
    if m.shape != (rows, cols):
        raise ValueError(f"matrix body {m.shape} does not match header ({rows}, {cols})")
    return m


# ---------------------------------------------------------------------------
# sparse decoding combinations


def _is_exact_number(x) -> bool:
    return isinstance(x, Rational)  # int and Fraction, but not float


@dataclass(frozen=True)
class SparseCombination:
    """Sparse coefficient column: strictly increasing support, no zeros.

    Coefficients are ints/Fractions on the exact path and floats otherwise;
    ``len(support)`` is the access count charged to this combination.
    """

    support: tuple
    coeffs: tuple

    def __post_init__(self) -> None:
        if len(self.support) != len(self.coeffs):
            raise ValueError("support and coeffs must have equal length")
        if any(self.support[i] >= self.support[i + 1] for i in range(len(self.support) - 1)):
            raise ValueError("support must be strictly increasing")
        if any(s < 0 for s in self.support):
            raise ValueError("support indices must be nonnegative")
        if any(c == 0 for c in self.coeffs):
            raise ValueError("zero coefficients must not be stored")

    @property
    def access(self) -> int:
        return len(self.support)

    @property
    def exact(self) -> bool:
        return all(_is_exact_number(c) for c in self.coeffs)

    def vector(self, n: int) -> np.ndarray:
        """Dense length-n float column."""
        out = np.zeros(n)
        for j, c in zip(self.support, self.coeffs):
            if j >= n:
                raise ValueError(f"support index {j} >= n={n}")
            out[j] = float(c)
        return out


def combine_columns(matrix: np.ndarray, comb: SparseCombination):
    """Evaluate matrix @ comb over the support.

    Returns a list of Fractions when both the matrix and the coefficients
    are exact, else a float array.  This is the single reconstruction
    routine shared by verification and error measurement.
    """
    if comb.support and comb.support[-1] >= matrix.shape[1]:
        raise ValueError("support index out of range for matrix")
    if comb.exact and is_integral(matrix):
        out = [Fraction(0)] * matrix.shape[0]
        for j, c in zip(comb.support, comb.coeffs):
            cf = Fraction(c)
            for i in range(matrix.shape[0]):
                out[i] += cf * int(round(matrix[i, j]))
        return out
    if not comb.support:
        return np.zeros(matrix.shape[0])
    cols = matrix[:, list(comb.support)]
    return cols @ np.array([float(c) for c in comb.coeffs])


# ---------------------------------------------------------------------------
# exact rational elimination and span membership


def _solve_rational(matrix_int, target_int) -> Optional[list]:
    """Solve A c = target over the rationals; None iff target not in span(A).

    Plain Gauss-Jordan over Fractions: rank(A) = rank([A | target]) holds
    exactly when no zeroed-out row is left with a nonzero right-hand side.
    Free variables are set to zero.
    """
    k = len(matrix_int)
    ncols = len(matrix_int[0]) if k else 0
    aug = [[Fraction(x) for x in row] + [Fraction(t)] for row, t in zip(matrix_int, target_int)]
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, k) if aug[i][c] != 0), None)
        if pivot_row is None:
            continue
        aug[r], aug[pivot_row] = aug[pivot_row], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(k):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == k:
            break
    for i in range(r, k):
        if aug[i][ncols] != 0:
            return None
    sol = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        sol[c] = aug[i][ncols]
    return sol


def _nullspace_rational(matrix_int) -> list:
    """Basis of {y : A^T y = 0} over the rationals, entries scaled to ints."""
    rows = len(matrix_int)  # = number of matrix columns after transpose below
    ncols = len(matrix_int[0]) if rows else 0
    work = [[Fraction(x) for x in row] for row in matrix_int]
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, rows) if work[i][c] != 0), None)
        if pivot_row is None:
            continue
        work[r], work[pivot_row] = work[pivot_row], work[r]
        pv = work[r][c]
        work[r] = [x / pv for x in work[r]]
        for i in range(rows):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    basis = []
    pivot_set = set(pivots)
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for i, c in enumerate(pivots):
            vec[c] = -work[i][free]
        lcm = 1
        for x in vec:
            lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
        basis.append([int(x * lcm) for x in vec])
    return basis


def span_contains(
    columns,
    w: SignVector,
    tol: float = DEFAULT_TOL,
    exact: Optional[bool] = None,
) -> Optional[list]:
    """Coefficients c with columns @ c == w, or None if w is not in the span.

    Membership is decided by the rank test rank(columns) == rank([columns|w]).
    On integral input (or ``exact=True``) the test runs in exact rational
    arithmetic and ``tol`` is ignored; coefficients come back as Fractions.
    The float path returns least-squares coefficients and additionally
    requires the residual to be within ``tol`` in the max norm.
    """
    cols = as_matrix(columns)
    if cols.shape[0] != w.length:
        raise ValueError(f"matrix has {cols.shape[0]} rows but w has length {w.length}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if exact is None:
        exact = is_integral(cols)
    if exact:
        mat = [[int(round(x)) for x in row] for row in cols]
        return _solve_rational(mat, [w.entry(i) for i in range(w.length)])
    warr = w.to_array()
    rank_a = np.linalg.matrix_rank(cols)
    rank_aug = np.linalg.matrix_rank(np.column_stack([cols, warr]))
    if rank_a != rank_aug:
        return None
    coeffs, *_ = np.linalg.lstsq(cols, warr, rcond=None)
    if np.max(np.abs(cols @ coeffs - warr)) > tol:
        return None
    return [float(c) for c in coeffs]


def count_pm1_in_span(columns, k: int, tol: float = DEFAULT_TOL) -> int:
    """Exact number of w in {+1,-1}^k lying in the column span.

    For integral matrices the span test is rephrased as orthogonality to an
    exact rational basis of the left null space, which is equivalent to the
    per-w rank test but runs vectorized over all 2^k candidates.
    """
    cols = as_matrix(columns)
    if cols.shape[0] != k:
        raise ValueError("matrix row count must equal k")
    if k > MAX_COUNT_BITS:
        raise BudgetError(f"k={k} exceeds the exhaustive budget {MAX_COUNT_BITS}")
    if is_integral(cols):
        mat = [[int(round(x)) for x in row] for row in cols]
        basis = _nullspace_rational([list(r) for r in zip(*mat)])  # null(A^T)
        if not basis:
            return 1 << k
        biggest = max(abs(x) for vec in basis for x in vec)
        if biggest * k < 2**52:
            # integer dot products stay exactly representable in float64
            basis_t = np.array(basis, dtype=float).T
            count = 0
            for start in range(0, 1 << k, 1 << 16):  # chunked to bound memory
                idx = np.arange(start, min(start + (1 << 16), 1 << k))
                signs = np.ones((idx.size, k))
                for i in range(k):
                    signs[(idx >> i) & 1 == 0, i] = -1.0
                dots = signs @ basis_t
                count += int(np.count_nonzero(np.all(dots == 0.0, axis=1)))
            return count
        count = 0
        for bits in range(1 << k):
            entries = [1 if (bits >> i) & 1 else -1 for i in range(k)]
            if all(sum(b * e for b, e in zip(vec, entries)) == 0 for vec in basis):
                count += 1
        return count
    return sum(1 for w in enumerate_sign_vectors(k) if span_contains(cols, w, tol) is not None)


# ---------------------------------------------------------------------------
# protocols


@dataclass(frozen=True)
class Protocol:
    """Encoder D (k x n) plus a per-w sparse decoder with access cap ell.

    For every w in {+1,-1}^k the decoder must return a combination a with
    |support(a)| <= ell and D a == w; ``qlcomp.verify`` checks this
    exhaustively.
    """

    k: int
    n: int
    ell: int
    encoder: np.ndarray
    decoder: Callable[[SignVector], SparseCombination]

    def __post_init__(self) -> None:
        if self.k < 1 or self.n < 1 or self.ell < 1:
            raise ValueError("k, n, ell must be positive")
        # k <= n holds for every exact construction; approximate schemes may
        # store fewer than k symbols, so only ell <= n is enforced here.
        if self.ell > self.n:
            raise ValueError("protocols require ell <= n")
        enc = as_matrix(self.encoder)
        if enc.shape != (self.k, self.n):
            raise ValueError(f"encoder shape {enc.shape} != ({self.k}, {self.n})")
        enc = enc.copy()
        enc.flags.writeable = False
        object.__setattr__(self, "encoder", enc)

    def decode(self, w: SignVector) -> SparseCombination:
        if w.length != self.k:
            raise ValueError(f"w has length {w.length}, protocol expects {self.k}")
        return self.decoder(w)

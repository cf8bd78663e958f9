"""Exhaustive protocol verification - the brute-force oracle for the repo.

``verify_protocol`` re-derives nothing from the construction that produced a
protocol: it simply walks all 2^k sign vectors, recomputes encoder @ a over
the stored support, and aggregates the worst access count and residual.
``min_access_for_M`` and ``subspace_cap_audit`` are the matching oracles for
block matrices and for the (at most 2^l sign vectors per l-dim subspace)
fact that the impossibility results rest on.

A decoder may use fewer than ell accesses; verification treats <= ell as
passing and never requires padding to exactly ell.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    DEFAULT_TOL,
    BudgetError,
    Protocol,
    SignVector,
    as_matrix,
    combine_columns,
    count_pm1_in_span,
    enumerate_sign_vectors,
    span_contains,
)

MAX_VERIFY_BITS = 20


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    checked: int
    max_access: int
    max_residual: float
    witness: Optional[SignVector] = None

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "checked": self.checked,
            "max_access": self.max_access,
            "max_residual": self.max_residual,
            "witness": None if self.witness is None else self.witness.to_string(),
        }


def verify_protocol(protocol: Protocol, tol: float = DEFAULT_TOL) -> VerificationReport:
    """Check exact reconstruction and sparsity <= ell for every w.

    Failures are reported, not raised; the witness is the first failing w in
    bitmask order.  Integral encoders with exact coefficients go through
    rational arithmetic, so max_residual is exactly 0.0 for the shipped
    constructions.
    """
    if protocol.k > MAX_VERIFY_BITS:
        raise BudgetError(f"k={protocol.k} exceeds the verification budget {MAX_VERIFY_BITS}")
    max_access = 0
    max_residual = 0.0
    witness: Optional[SignVector] = None
    checked = 0
    for w in enumerate_sign_vectors(protocol.k):
        comb = protocol.decode(w)
        checked += 1
        recon = combine_columns(protocol.encoder, comb)
        if isinstance(recon, list):  # exact path
            residual = float(max(abs(r - w.entry(i)) for i, r in enumerate(recon)))
        else:
            residual = float(np.max(np.abs(recon - w.to_array())))
        max_access = max(max_access, comb.access)
        max_residual = max(max_residual, residual)
        if (comb.access > protocol.ell or residual > tol) and witness is None:
            witness = w
    return VerificationReport(
        ok=witness is None,
        checked=checked,
        max_access=max_access,
        max_residual=max_residual,
        witness=witness,
    )


def min_access_for_M(matrix, max_work: int = 50_000_000) -> int:
    """Smallest ell0 such that every w in {+1,-1}^k0 lies in the span of
    some <= ell0 columns; found by increasing subset size per w.

    Negation symmetry halves the scan (w and -w share their minimum).
    Raises if some w is outside the full column span, or if the subset
    enumeration exceeds the work budget.
    """
    m = as_matrix(matrix)
    k0, n0 = m.shape
    worst = 0
    work = 0
    for w in enumerate_sign_vectors(k0):
        if w.bits > w.negated().bits:
            continue
        best = None
        for size in range(1, n0 + 1):
            work += math.comb(n0, size)
            if work > max_work:
                raise BudgetError("min_access_for_M exceeded its search budget")
            for subset in itertools.combinations(range(n0), size):
                if span_contains(m[:, subset], w) is not None:
                    best = size
                    break
            if best is not None:
                break
        if best is None:
            raise ValueError(
                f"w={w.to_string()} is not in the column span; no access level works"
            )
        worst = max(worst, best)
    return worst


@dataclass(frozen=True)
class SubspaceCapReport:
    k: int
    ell: int
    trials: int
    seed: int
    bound: int
    max_count: int
    ok: bool


def subspace_cap_audit(k: int, ell: int, trials: int, seed: int) -> SubspaceCapReport:
    """Audit count_pm1_in_span <= 2^ell over random integer k x ell matrices.

    Entries are drawn uniformly from [-3, 3] with a deterministic generator.
    A violation would indicate a span_contains bug, not new mathematics.
    """
    if k > 12:
        raise BudgetError(f"k={k} exceeds the audit budget 12")
    rng = np.random.default_rng(seed)
    bound = 1 << ell
    max_count = 0
    for _ in range(trials):
        matrix = rng.integers(-3, 4, size=(k, ell)).astype(float)
        max_count = max(max_count, count_pm1_in_span(matrix, k))
    return SubspaceCapReport(
        k=k, ell=ell, trials=trials, seed=seed, bound=bound,
        max_count=max_count, ok=max_count <= bound,
    )

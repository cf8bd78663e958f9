"""Numerical evaluation of the impossibility results and region curves.

All binomial and exponential quantities are handled in the log2 domain via
the log-gamma function, so nothing overflows even for k in the hundreds.
Inequalities are tested with a relative slack of 1e-9: the corner points
that satisfy a bound with equality (for example the non-systematic family
against the block bound) must classify as admissible rather than flip on
rounding.

"Admissible" throughout means "not ruled out by the bound in question".

The three finite-parameter tests:

* ``thm1_admissible``   - C(n,l) 2^l >= 2^k.
* ``thm2_admissible``   - 2^k <= [1 + ln C(t,l)] C(n,l)/C(t,l) 2^t for every
  t in {l, ..., n}; at t = l it reduces exactly to the first test, so it is
  never weaker.
* ``block_bound_admissible`` - 2 l0 + log C(n0,l0) - log C(2 l0,l0) >= k0
  for block constructions, under the hypothesis 2 l0 <= n0.

The asymptotic forms live in ``asymptotic_lhs`` (nu H(lam/nu) - r lam H(1/r)
+ r lam, with the best constant at r = 2) and ``cor1_lambda_min`` (smallest
lam with H(lam/nu) >= 1/nu).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.special import gammaln

from .construct import RatePoint

_LOG2 = math.log(2)
_REL_SLACK = 1e-9


def binary_entropy(p: float) -> float:
    """H(p) = -p log2 p - (1-p) log2 (1-p), with H(0) = H(1) = 0."""
    if p < 0 or p > 1:
        raise ValueError(f"entropy argument {p} outside [0, 1]")
    if p == 0 or p == 1:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def log2_comb(n: float, k: float) -> float:
    """log2 C(n, k) via log-gamma; -inf outside 0 <= k <= n."""
    if k < 0 or k > n:
        return float("-inf")
    return (math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)) / _LOG2


def _holds(lhs: float, rhs: float) -> bool:
    """lhs >= rhs up to relative slack, so boundary equalities pass."""
    return lhs >= rhs - _REL_SLACK * max(1.0, abs(lhs), abs(rhs))


def thm1_admissible(k: int, n: int, ell: int) -> bool:
    """True iff log2 C(n,l) + l >= k."""
    if ell < 0 or ell > n:
        raise ValueError("need 0 <= ell <= n")
    return _holds(log2_comb(n, ell) + ell, k)


def thm2_admissible(k: int, n: int, ell: int) -> tuple[bool, int]:
    """Covering-design test over all t in {l, ..., n}.

    Returns (admissible, best_t) where best_t minimizes the right-hand side
    log2(1 + ln C(t,l)) + log2 C(n,l) - log2 C(t,l) + t; the parameters are
    admissible iff even that strongest test is satisfied.
    """
    if ell < 0 or ell > n:
        raise ValueError("need 0 <= ell <= n")
    t = np.arange(ell, n + 1, dtype=float)
    ln_comb_t = gammaln(t + 1) - gammaln(ell + 1) - gammaln(t - ell + 1)
    rhs = np.log1p(ln_comb_t) / _LOG2 + log2_comb(n, ell) - ln_comb_t / _LOG2 + t
    i = int(np.argmin(rhs))
    return _holds(float(rhs[i]), float(k)), int(t[i])


def asymptotic_lhs(nu: float, lam: float, r: float) -> float:
    """nu H(lam/nu) - r lam H(1/r) + r lam.

    The asymptotic form of the covering-design bound with t ~ r*l; the
    requirement on feasible pairs is that this is >= 1.  The penalty term
    r(1 - H(1/r)) vanishes exactly at r = 2.
    """
    if lam <= 0 or nu <= 0:
        raise ValueError("nu and lam must be positive")
    if lam > nu:
        raise ValueError("need lam <= nu")
    if r < 1:
        raise ValueError("need r >= 1")
    return nu * binary_entropy(lam / nu) - r * lam * binary_entropy(1 / r) + r * lam


def _entropy_deficit(u: float) -> float:
    """1 - H(1/2 - u), computed without cancellation for small u.

    Direct evaluation of H loses the root of H(x) = 1 in a ~1e-9 plateau
    around x = 1/2 (H is flat there and float64 rounds it to 1.0); this
    rearrangement is exact at u = 0 and accurate down to u ~ 1e-12.
    """
    if not 0 <= u <= 0.5:
        raise ValueError("deficit argument outside [0, 1/2]")
    if u == 0.5:
        return 1.0
    sym = 0.5 * (math.log1p(-2 * u) + math.log1p(2 * u))
    skew = u * (math.log1p(2 * u) - math.log1p(-2 * u))
    return (sym + skew) / _LOG2


def asymptotic_lambda_min(nu: float, r: float, tol: float = 1e-12) -> float:
    """Smallest lam in (0, nu/2] with asymptotic_lhs(nu, lam, r) >= 1.

    The left-hand side is strictly increasing in lam on that interval, so
    bisection to absolute tolerance ``tol`` suffices.  At r = 2 the
    condition reduces to H(lam/nu) >= 1/nu, which is solved through the
    entropy deficit so the root stays accurate where H flattens (at nu = 1
    the result is exactly nu/2).
    """
    if nu < 1:
        raise ValueError("need nu >= 1")
    if r == 2:
        # largest u with 1 - H(1/2 - u) <= 1 - 1/nu, then lam = nu (1/2 - u)
        target = 1.0 - 1.0 / nu
        lo, hi = 0.0, 0.5
        while hi - lo > tol / nu:
            mid = (lo + hi) / 2
            if _entropy_deficit(mid) <= target:
                lo = mid
            else:
                hi = mid
        return nu * (0.5 - lo)
    lo, hi = 0.0, nu / 2
    if asymptotic_lhs(nu, hi, r) < 1:
        raise ValueError(f"no admissible lam <= nu/2 at nu={nu}, r={r}")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if mid <= 0:
            break
        if asymptotic_lhs(nu, mid, r) >= 1:
            hi = mid
        else:
            lo = mid
    return hi


def cor1_lambda_min(nu: float) -> float:
    """Smallest lam with H(lam/nu) >= 1/nu (the r = 2 asymptotic bound).

    Equals 1/2 exactly at nu = 1, matching the parity construction, and
    decreases strictly in nu.
    """
    return asymptotic_lambda_min(nu, 2.0)


def block_bound_constrained(k0: int, n0: int, ell0: int) -> bool:
    """Whether the block bound's hypothesis 2*ell0 <= n0 applies at all."""
    return 2 * ell0 <= n0


def block_bound_admissible(k0: int, n0: int, ell0: int) -> bool:
    """Block-construction test 2 l0 + log2 C(n0,l0) - log2 C(2 l0,l0) >= k0.

    Parameters outside the hypothesis 2*l0 <= n0 are not constrained by the
    theorem and return True; use ``block_bound_constrained`` to tell the two
    cases apart.
    """
    if k0 < 1 or ell0 < 1 or n0 < ell0:
        raise ValueError("need k0 >= 1 and 1 <= ell0 <= n0")
    if not block_bound_constrained(k0, n0, ell0):
        return True
    lhs = 2 * ell0 + log2_comb(n0, ell0) - log2_comb(2 * ell0, ell0)
    return _holds(lhs, k0)


@dataclass(frozen=True)
class BoundCurve:
    """Labeled (nu, lam) samples of one bound, sorted by nu."""

    label: str
    points: tuple  # RatePoints

    def __post_init__(self) -> None:
        nus = [p.nu for p in self.points]
        if any(b < a for a, b in zip(nus, nus[1:])):
            raise ValueError("curve points must be sorted by nu")


def block_bound_curve(k0: int, n0_max: int) -> BoundCurve:
    """For each l0 <= k0/2, the smallest admissible n0 <= n0_max.

    The scan starts at n0 = 2*l0 where the hypothesis holds; the result is
    the dotted step curve of minimal block constructions for this k0.
    """
    points = []
    for ell0 in range(1, k0 // 2 + 1):
        for n0 in range(2 * ell0, n0_max + 1):
            if block_bound_admissible(k0, n0, ell0):
                points.append(RatePoint(n0 / k0, ell0 / k0))
                break
    points.sort(key=lambda p: (p.nu, p.lam))
    return BoundCurve(label=f"block_k0={k0}", points=tuple(points))


def sampled_curve(label: str, nu_values: Sequence[float], r: float) -> BoundCurve:
    """Asymptotic lower-bound curve lam_min(nu) on a nu grid."""
    pts = tuple(RatePoint(nu, asymptotic_lambda_min(nu, r)) for nu in nu_values)
    return BoundCurve(label=label, points=pts)


def cor1_curve(nu_values: Sequence[float]) -> BoundCurve:
    return sampled_curve("cor1", nu_values, 2.0)


def thm1_curve(nu_values: Sequence[float]) -> BoundCurve:
    """Asymptotic form of the union-bound test (r = 1)."""
    return sampled_curve("thm1", nu_values, 1.0)


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def region_export(
    curves: Iterable[BoundCurve],
    construction_points: Iterable[tuple[str, RatePoint]] = (),
    path=None,
) -> str:
    """Serialize curves and labeled points as CSV ``label,nu,lambda``.

    Row order is deterministic: curves in the given order (each sorted by
    nu), then the labeled points.  Returns the CSV text; writes it to
    ``path`` when given.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["label", "nu", "lambda"])
    for curve in curves:
        for p in curve.points:
            writer.writerow([curve.label, _fmt(p.nu), _fmt(p.lam)])
    for label, p in construction_points:
        writer.writerow([label, _fmt(p.nu), _fmt(p.lam)])
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text


def read_region_csv(source) -> list[tuple[str, float, float]]:
    """Parse a region CSV back into (label, nu, lambda) rows."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != ["label", "nu", "lambda"]:
        raise ValueError("missing or malformed region CSV header")
    return [(label, float(nu), float(lam)) for label, nu, lam in rows[1:]]

#!/usr/bin/env python3
"""Numerical evaluation of the impossibility results.

Shows the union-bound test, the covering-design improvement (including a
parameter point that only the stronger test rules out), the asymptotic
lambda_min curves, the block-construction bound with its corner equalities,
and writes the full region CSV that a plotting tool can consume.
"""

from qlcomp import (
    block_bound_admissible,
    block_bound_curve,
    cor1_lambda_min,
    thm1_admissible,
    thm2_admissible,
)
from qlcomp.bounds import asymptotic_lambda_min, cor1_curve, log2_comb, region_export, thm1_curve
from qlcomp.construct import RatePoint

print("Finite tests: is (k, n, ell) ruled out?")
for k, n, ell in [(5, 6, 2), (5, 5, 1), (40, 48, 10)]:
    ok1 = thm1_admissible(k, n, ell)
    ok2, best_t = thm2_admissible(k, n, ell)
    print(f"  (k={k:2d}, n={n:2d}, ell={ell:2d})  union-bound: {str(ok1):5s}  "
          f"covering-design: {str(ok2):5s} (strongest t={best_t})")
print("  -> (40, 48, 10) survives the union bound but not the covering-design test.")

print("\nAsymptotic curves lambda_min(nu): the r=2 bound dominates r=1.")
print("  nu     r=1 curve   r=2 curve (cor1)")
for nu in (1.0, 1.2, 4 / 3, 1.5, 2.0, 2.5):
    print(f"  {nu:4.2f}   {asymptotic_lambda_min(nu, 1):9.6f}   {cor1_lambda_min(nu):9.6f}")
print("  at nu=1 the bound meets the parity construction at lambda = 1/2 exactly.")

print("\nBlock-construction bound: minimal admissible n0 per ell0 (dots of the step curve).")
for k0 in (4, 5, 6):
    pts = ", ".join(f"({p.nu:.3f}, {p.lam:.3f})" for p in block_bound_curve(k0, 64).points)
    print(f"  k0={k0}: {pts}")
print("  non-systematic corners satisfy the bound with equality:")
for k0 in (2, 4, 6, 8):
    n0 = 2 ** (k0 - 1)
    lhs = 2 + log2_comb(n0, 1) - log2_comb(2, 1)
    print(f"    k0={k0}: bound lhs = {lhs:.12f} vs k0 = {k0}  "
          f"(admissible: {block_bound_admissible(k0, n0, 1)})")

print("\nConstruction points sit above the exact-scheme bound:")
for label, rp in [
    ("parity limit", RatePoint(1.0, 0.5)),
    ("5x6 block", RatePoint(1.2, 0.4)),
    ("non-systematic k0=3", RatePoint(4 / 3, 1 / 3)),
    ("non-systematic k0=4", RatePoint(2.0, 0.25)),
]:
    print(f"  {label:22s} lambda={rp.lam:.4f} >= bound {cor1_lambda_min(rp.nu):.4f}")

grid = [round(1.0 + 0.05 * i, 10) for i in range(41)]
out = "region.csv"
region_export(
    [cor1_curve(grid), thm1_curve(grid)]
    + [block_bound_curve(k0, 64) for k0 in (4, 5, 6)],
    [
        ("trivial", RatePoint(1.0, 0.5)),
        ("block_5x6", RatePoint(1.2, 0.4)),
        ("nonsystematic_k0=3", RatePoint(4 / 3, 1 / 3)),
        ("nonsystematic_k0=4", RatePoint(2.0, 0.25)),
    ],
    path=out,
)
print(f"\nwrote the full region data to {out} (schema: label,nu,lambda)")

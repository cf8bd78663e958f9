#!/usr/bin/env python3
"""Covering codes and covering designs: the combinatorial workhorses.

Everything here is exhaustive or greedy-with-certificates: radii come from
full-cube scans and designs are validated subset by subset.
"""

from qlcomp import (
    antipodal_half,
    count_pm1_in_span,
    covering_radius,
    erdos_spencer_bound,
    full_cube,
    greedy_covering_code,
    greedy_covering_design,
    repetition_pair,
)
from qlcomp.verify import subspace_cap_audit

print("Covering radii (exhaustive over the cube):")
for k0 in (3, 5, 8):
    print(f"  full cube  k0={k0}: r={covering_radius(full_cube(k0).codewords)}")
    print(f"  repetition k0={k0}: r={covering_radius(repetition_pair(k0).codewords)}")

print("\nGreedy complement-closed codes (radius target -> |code|):")
for k0, r in [(4, 1), (5, 1), (5, 2), (6, 2), (8, 3)]:
    code = greedy_covering_code(k0, r)
    half = antipodal_half(code)
    print(f"  k0={k0} target r<={r}: |code|={len(code.codewords):3d}  "
          f"verified r={code.radius}  c-hat={half.size}")

print("\nGreedy covering designs vs the probabilistic size bound:")
print("  (n, t, l)   greedy  bound")
for n, t, ell in [(4, 3, 2), (6, 4, 2), (8, 4, 2), (10, 5, 3), (10, 6, 3)]:
    design = greedy_covering_design(n, t, ell)
    bound = erdos_spencer_bound(n, t, ell)
    print(f"  ({n:2d},{t:2d},{ell:2d})   {design.size:4d}   {bound:6.2f}")

print("\nSubspace cap: an l-dim span holds at most 2^l sign vectors.")
import numpy as np

print(f"  identity 3x3 spans the whole cube: {count_pm1_in_span(np.eye(3), 3)} = 2^3")
for k, ell in [(8, 2), (10, 4)]:
    report = subspace_cap_audit(k, ell, trials=100, seed=1)
    print(f"  {report.trials} random {k}x{ell} integer matrices: "
          f"max count {report.max_count} <= {report.bound}")

"""
Classifying the (beta, alpha) parameter square
==============================================

Every system in this package is indexed by two exponents: beta sets the
strength of the elastic-thermal coupling A^beta, alpha the strength of the
thermal dissipation A^alpha. Where the pair lands in the unit square decides
how smooth and how stable the undelayed baseline semigroup is, and whether
the delayed variants fall inside the stability window Q given by
2*beta - alpha <= 1.
"""

from thermosemi.core import classify_region, region_grid

# A handful of landmark points. The S classes describe the analyticity
# ladder of the baseline; the R classes refine it by decay behavior.
points = [
    (0.5, 0.5),   # balanced coupling: analytic, exponentially stable
    (0.1, 0.9),   # strong dissipation, weak coupling
    (0.9, 0.5),   # coupling too strong: outside Q
    (0.0, 0.75),  # decoupled segment on the beta = 0 edge
    (0.75, 0.75),
]
for beta, alpha in points:
    lab = classify_region(beta, alpha)
    print(
        "(beta, alpha) = (%.2f, %.2f): %s / %-13s in Q: %-5s %s"
        % (beta, alpha, lab.s_class, lab.r_class, lab.in_q, lab.expected_regularity)
    )

# The full map on a coarse grid, summarized by class counts. The CLI command
# `thermosemi region --grid 101 --plot` writes the same data as CSV and SVG.
counts = {}
for lab in region_grid(41):
    counts[lab.r_class] = counts.get(lab.r_class, 0) + 1
print()
print("41 x 41 grid:")
for name in sorted(counts):
    print("  %-13s %4d points" % (name, counts[name]))

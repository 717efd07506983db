"""
Spectra of a Ritt move
======================

Two cubic-times-square maps that are tied together by ``z -> z^3`` share
their multiplier spectra on the odd levels and differ on the even ones.
"""

from multispec import Poly, build_ritt_pair, spectrum_level, verify_progression

z = Poly.z()

# P = z^2 (z^3 + 1) and Q = z^2 (z + 1)^3 satisfy Q(z^3) = P(z)^3
pair = build_ritt_pair(2, 3, z + 1)
print("P =", pair.P.poly)
print("Q =", pair.Q.poly)

# level 1: both maps have the same fixed-point multipliers
s1p, s1q = spectrum_level(pair.P, 1), spectrum_level(pair.Q, 1)
print("S_1 equal:", s1p == s1q, [str(s) for s in s1p.sigmas[:3]], "...")

# level 2 is not a good level for r = 2, k = 3 (2^2 - 1 = 3 shares a factor with 3)
print("S_2 equal:", spectrum_level(pair.P, 2) == spectrum_level(pair.Q, 2))

# the progression c1 + N d = 1, 3, 5, ... and a scan of every level up to 3
report = verify_progression(pair, terms=2)
print("c1, d =", report.params.c1, report.params.d)
for check in report.checks:
    tag = "progression" if check.in_progression else "scan"
    print(f"  level {check.level}: equal={check.equal} good={check.good} ({tag})")
print("status:", report.status)

"""
Critical values, exceptional maps and genera
============================================

A tour of the classification helpers on small examples.
"""

from fractions import Fraction

from multispec import (
    Poly,
    chebyshev,
    distinct_critical_values_count,
    generalized_lattes_form,
    genus_hF,
    gl_cubic_family,
    is_exceptional,
    is_presimple,
    ramification_portrait,
)

z = Poly.z()

# Chebyshev maps have two critical values however large the degree is
for m in range(3, 7):
    T = chebyshev(m)
    print(f"T_{m}: {distinct_critical_values_count(T)} critical values, "
          f"exceptional tag {is_exceptional(T).tag}")

# a generic quartic is pre-simple, and its curve (F(x) - F(y))/(x - y) has genus 1
F = z ** 4 + z ** 3 - 2 * z + 1
print("pre-simple:", is_presimple(F))
for cls in ramification_portrait(F).classes:
    print("  values", cls.values, "profile", cls.profiles[0])
print("genus:", genus_hF(F))

# the cubic family with a generalized Lattes normal form
G = gl_cubic_family(2, Fraction(1, 3), -1)
print("cubic:", G.poly)
print("form:", generalized_lattes_form(G))

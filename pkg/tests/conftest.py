import random
import sys
from fractions import Fraction

import pytest
import sympy as sp

from multispec.exactalg import Poly

Z = sp.Symbol("z")


def to_sympy(p: Poly) -> sp.Poly:
    return sp.Poly([sp.Rational(c.numerator, c.denominator) for c in reversed(p.coeffs)] or [0], Z, domain="QQ")


def from_sympy(q) -> Poly:
    q = sp.Poly(q, Z, domain="QQ")
    return Poly([Fraction(int(c.p), int(c.q)) for c in reversed(q.all_coeffs())])


def rand_frac(rng: random.Random, lo=-5, hi=5, dens=(1, 1, 2, 3)) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.choice(dens))


def rand_poly(rng: random.Random, deg: int, monic=False, **kw) -> Poly:
    c = [rand_frac(rng, **kw) for _ in range(deg)]
    lead = Fraction(1) if monic else rand_frac(rng, **kw) or Fraction(1)
    return Poly(c + [lead])


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.format_line(k, mod.RESULTS[k]))

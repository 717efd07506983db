from fractions import Fraction

import numpy as np
import pytest

from conftest import rand_frac, rand_poly
from multispec.dynmaps import AffineMap, conjugate
from multispec.exactalg import Poly, charpoly_mod, iterate
from multispec.spectrum import (
    LevelTooLarge,
    compare_iterates,
    length_spectrum_numeric,
    multiplier_charpoly,
    numeric_multipliers,
    size_cap,
    spectra_equal_up_to,
    spectrum_containment,
    spectrum_level,
    superattracting_cycle_count,
)

z = Poly.z()
F = Fraction
P23 = z ** 2 * (z ** 3 + 1)
Q23 = z ** 2 * (z + 1) ** 3


# --- multiplier polynomials ---------------------------------------------------

def test_multiplier_charpoly_examples():
    assert multiplier_charpoly(z ** 2, 1).charpoly == z ** 2 - 2 * z
    c = F(-7, 3)
    assert multiplier_charpoly(z ** 2 + c, 1).charpoly == z ** 2 - 2 * z + 4 * c
    m = multiplier_charpoly(z ** 2, 2)
    assert m.charpoly == z * (z - 4) ** 3
    assert m.includes_infinity and m.degree == 4


def test_multiplier_charpoly_errors(monkeypatch):
    with pytest.raises(LevelTooLarge, match="level too large"):
        multiplier_charpoly(z ** 2, 11)
    with pytest.raises(ValueError):
        multiplier_charpoly(z + 1, 1)
    monkeypatch.setenv("MULTISPEC_SIZE_CAP", "8")
    assert size_cap() == 8
    with pytest.raises(LevelTooLarge):
        multiplier_charpoly(z ** 2, 4)
    assert multiplier_charpoly(z ** 2, 4, cap=16).degree == 16


def test_spectrum_level_examples():
    c = F(5, 2)
    assert spectrum_level(z ** 2 + c, 1).sigmas == (2, 4 * c, 0)
    assert spectrum_level(z ** 2, 2).sigmas == (12, 48, 64, 0, 0)
    assert spectrum_level(P23, 1) == spectrum_level(Q23, 1)


def test_spectrum_roundtrip_and_width(rng):
    for _ in range(20):
        f = rand_poly(rng, rng.randint(2, 4))
        n = rng.randint(1, 2)
        mp = multiplier_charpoly(f, n)
        s = mp.to_spectrum()
        assert len(s) == f.degree ** n + 1
        assert s.sigmas[-1] == 0
        assert s.to_charpoly() == mp.charpoly
        assert mp.charpoly.lc == 1 and mp.degree == f.degree ** n


def test_multiplier_charpoly_matches_definition(rng):
    """Oracle: charpoly of (f^n)' modulo f^n(z) - z via the Hessenberg kernel."""
    for _ in range(25):
        f = rand_poly(rng, rng.randint(2, 3))
        n = rng.randint(1, 3 if f.degree == 2 else 2)
        Fn = iterate(f, n)
        want = charpoly_mod(Fn.derivative(), Fn - z, method="hessenberg")
        assert multiplier_charpoly(f, n).charpoly == want
        assert multiplier_charpoly(f, n, method="direct").charpoly == want


@pytest.mark.parametrize("c", [F(-3, 4), F(1, 4), F(-5, 4), F(-1), F(0), F(-2)])
def test_dynatomic_route_on_bifurcation_parameters(c):
    """Parameters with parabolic or degenerate cycles exercise the fallback."""
    f = z ** 2 + c
    for n in range(1, 5):
        assert multiplier_charpoly(f, n).charpoly == multiplier_charpoly(f, n, method="direct").charpoly


def test_multipliers_numeric_roots(rng):
    """Oracle: roots of the exact polynomial vs numerically isolated multipliers."""
    for _ in range(20):
        f = rand_poly(rng, 2)
        exact = multiplier_charpoly(f, 2).charpoly
        num = numeric_multipliers(f, 2)
        for m in num:
            assert abs(exact.eval_complex(complex(m))) <= 1e-6 * max(1.0, abs(m)) ** exact.degree


def test_conjugacy_invariance(rng):
    for _ in range(40):
        f = rand_poly(rng, rng.randint(2, 4))
        a = rand_frac(rng, lo=1, hi=4) * rng.choice([1, -1])
        g = conjugate(f, AffineMap(a, rand_frac(rng)))
        for n in range(1, 3 if f.degree > 2 else 4):
            assert spectrum_level(f, n) == spectrum_level(g, n)


# --- comparisons -------------------------------------------------------------

def test_spectra_equal_up_to_examples():
    assert spectra_equal_up_to(P23, Q23, 4) == (False, 2)
    f = Poly([1, -1, 0, 2])
    g = conjugate(f, AffineMap(F(2, 3), F(1, 5)))
    assert spectra_equal_up_to(f, g, 3) == (True, None)
    assert spectra_equal_up_to(z ** 2, z ** 2 - 2, 1) == (False, 1)
    with pytest.raises(ValueError, match="degree mismatch"):
        spectra_equal_up_to(z ** 2, z ** 3, 1)


def test_compare_iterates_examples():
    P = z * (z ** 2 + 1)
    Q = -z * (z ** 2 + 1)
    assert iterate(P, 2) == iterate(Q, 2)
    assert compare_iterates(P, Q, 2, 2).equal
    f = Poly([1, 0, 2])
    assert compare_iterates(f, f, 1, 3).equal
    assert compare_iterates(z ** 2, z ** 2 - 1, 1, 1) == (False, 1)
    assert spectrum_level(z ** 2 - 1, 1).sigmas == (2, -4, 0)
    with pytest.raises(LevelTooLarge):
        compare_iterates(z ** 2, z ** 2, 6, 2)


def test_equal_spectra_is_an_equivalence(rng):
    base = [rand_poly(rng, 3) for _ in range(3)]
    maps = []
    for f in base:
        maps.append(f)
        maps.append(conjugate(f, AffineMap(rand_frac(rng, lo=1, hi=3), rand_frac(rng))).poly)
    rel = [[spectra_equal_up_to(f, g, 2).equal for g in maps] for f in maps]
    k = len(maps)
    for i in range(k):
        assert rel[i][i]
        for j in range(k):
            assert rel[i][j] == rel[j][i]
            for l in range(k):
                if rel[i][j] and rel[j][l]:
                    assert rel[i][l]


def test_spectrum_containment_examples():
    assert spectrum_containment(P23, Q23, 2)
    assert not spectra_equal_up_to(P23, Q23, 2).equal
    f = Poly([2, 1, 1])
    assert spectrum_containment(f, f, 2)
    assert not spectrum_containment(z ** 2, z ** 2 - 2, 1)


# --- superattracting cycles ------------------------------------------------------

def test_sac_examples():
    r = superattracting_cycle_count(z ** 2, 5)
    assert r.count == 1 and r.per_period == ((1, 1),) and r.certified_complete
    r = superattracting_cycle_count(z ** 2 - 1, 5)
    assert r.count == 1 and r.per_period == ((2, 1),) and r.certified_complete
    r = superattracting_cycle_count(z ** 2 + 1, 10)
    assert r.count == 0 and r.certified_complete
    with pytest.raises(ValueError):
        superattracting_cycle_count(z ** 2, 0)


def test_sac_uncertified_when_undecided():
    # the critical orbit of z^2 + 1/4 converges to a parabolic point
    r = superattracting_cycle_count(z ** 2 + F(1, 4), 6)
    assert r.count == 0 and not r.certified_complete and r.unresolved


def test_sac_preperiodic_and_mixed():
    # z^2 - 2: 0 -> -2 -> 2 -> 2, strictly preperiodic
    r = superattracting_cycle_count(z ** 2 - 2, 6)
    assert r.count == 0 and r.certified_complete
    # T_3 has both critical points preperiodic
    r = superattracting_cycle_count(z ** 3 - 3 * z, 6)
    assert r.count == 0 and r.certified_complete


def test_sac_irrational_cycle():
    # critical points +-sqrt(2) are both fixed
    f = -z ** 3 / 4 + F(3, 2) * z
    r = superattracting_cycle_count(f, 4)
    assert r.count == 2 and r.per_period == ((1, 2),) and r.certified_complete


def numeric_sac(f: Poly, bound: int) -> int:
    c = np.array([float(x) for x in reversed(f.coeffs)])
    crit = np.roots(np.polyder(c)) if f.degree > 1 else []
    cycles = set()
    for x0 in crit:
        x = x0
        orbit = [x]
        for n in range(1, bound + 1):
            x = np.polyval(c, x)
            if abs(x) > 1e6:
                break
            if abs(x - x0) < 1e-7:
                cycles.add(tuple(sorted((round(p.real, 5), round(p.imag, 5)) for p in orbit)))
                break
            orbit.append(x)
    return len(cycles)


def test_sac_numeric_oracle(rng):
    checked = 0
    for _ in range(300):
        d = rng.randint(2, 4)
        f = Poly([rng.randint(-2, 2) for _ in range(d)] + [rng.choice([1, -1])])
        r = superattracting_cycle_count(f, 4)
        assert r.count <= f.degree - 1
        assert sum(c for _, c in r.per_period) == r.count
        assert r.count == numeric_sac(f, 4)
        checked += r.count > 0
    assert checked > 10


# --- numeric length spectrum --------------------------------------------------------

def test_length_spectrum_examples():
    assert np.allclose(length_spectrum_numeric(z ** 2, 1), [0, 0, 2])
    assert np.allclose(length_spectrum_numeric(z ** 2 - 2, 1), [0, 2, 4])
    assert np.allclose(length_spectrum_numeric(z ** 2 + 1, 1, 1e-9), [0, 2, 2])


def test_numeric_multipliers_repeated_fixed_points():
    f = Poly([0, 1, 1, -1])  # 0 is a double fixed point with multiplier 1
    for n in (1, 2, 3):
        mult = numeric_multipliers(f, n)
        ex = multiplier_charpoly(f, n).charpoly
        got = np.poly(mult)
        want = np.array([float(x) for x in reversed(ex.coeffs)])
        assert np.allclose(got, want, rtol=1e-6, atol=1e-6)

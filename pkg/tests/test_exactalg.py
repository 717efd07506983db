import math
import random
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from conftest import Z, from_sympy, rand_frac, rand_poly, to_sympy
from multispec.exactalg import (
    Poly,
    charpoly_images,
    charpoly_mod,
    compose,
    coprime_basis,
    gcd,
    interpolate,
    iterate,
    radical,
    radical_divides,
    resultant,
    squarefree,
)
from multispec.exactalg import modular as M

z = Poly.z()
fracs = st.fractions(min_value=-20, max_value=20, max_denominator=6)
polys = st.lists(fracs, min_size=1, max_size=6).map(Poly)


def sylvester_resultant(a: Poly, b: Poly) -> Fraction:
    """Res(a, b) as the Sylvester determinant (independent of the PRS code)."""
    m, n = a.degree, b.degree
    if m == 0:
        return a.lc ** n
    if n == 0:
        return b.lc ** m
    size = m + n
    rows = []
    ac = list(reversed(a.coeffs))
    bc = list(reversed(b.coeffs))
    for i in range(n):
        rows.append([0] * i + ac + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + bc + [0] * (size - n - 1 - i))
    mat = sp.Matrix([[sp.Rational(x.numerator, x.denominator) if isinstance(x, Fraction) else x for x in r]
                     for r in rows])
    d = mat.det()
    return Fraction(int(d.p), int(d.q))


# --- spec examples ---------------------------------------------------------

def test_compose_examples():
    assert compose(z ** 2, z + 1) == Poly([1, 2, 1])
    T2, T3 = Poly([-2, 0, 1]), Poly([0, -3, 0, 1])
    assert compose(T2, T3) == compose(T3, T2)
    assert compose(z ** 3, z ** 2) == z ** 6


def test_iterate_examples():
    c = Fraction(3, 7)
    f = z ** 2 + c
    assert iterate(f, 2) == (z ** 2 + c) ** 2 + c
    assert iterate(f, 0) == z
    a, b = Fraction(-2, 3), Fraction(5, 4)
    g = z ** 3 + a * z + b
    for k in range(1, 5):
        F = iterate(g, k)
        assert F.coeff(3 ** k - 1) == 0
        assert F.coeff(3 ** k - 2) == 3 ** (k - 1) * a


def test_resultant_examples():
    assert resultant(z ** 2 - 1, z - 2) == 3
    assert resultant(2 * z, z ** 2) == 0
    assert resultant(z ** 2 - 2, z ** 2 - 3) == 1
    with pytest.raises(ValueError, match="undefined resultant"):
        resultant(Poly(), Poly())


def test_resultant_convention_with_constants():
    # Res(A, c) = c^deg A; Res(c, B) = c^deg B
    assert resultant(z ** 3 + 1, Poly([2])) == 8
    assert resultant(Poly([3]), z ** 2 + z) == 9


def test_squarefree_examples():
    d = squarefree((z - 1) ** 2 * (z + 2))
    assert set(d.factors) == {(z + 2, 1), (z - 1, 2)}
    assert squarefree(z ** 5).factors == ((z, 5),)
    d3 = squarefree(Poly([-3, 0, 3]))  # T3' = 3z^2 - 3
    assert d3.factors == ((z ** 2 - 1, 1),)
    assert d3.unit == 3
    with pytest.raises(ValueError):
        squarefree(Poly())


def test_charpoly_examples():
    assert charpoly_mod(z, z ** 2 - 1) == z ** 2 - 1
    assert charpoly_mod(z + 1, z ** 2) == (z - 1) ** 2
    assert charpoly_mod(2 * z, z ** 2 - z) == z ** 2 - 2 * z
    with pytest.raises(ValueError):
        charpoly_mod(z, Poly([5]))


def test_radical_divides_examples():
    assert radical_divides((z - 1) ** 3, z ** 2 - 1)
    assert not radical_divides(z ** 2 - 1, (z - 1) ** 3)
    assert radical_divides(z ** 2 + 1, z ** 4 - 1)
    with pytest.raises(ValueError):
        radical_divides(Poly(), z)


def test_coprime_basis_examples():
    assert set(coprime_basis([(z - 1) * (z - 2), (z - 2) * (z - 3)])) == {z - 1, z - 2, z - 3}
    assert coprime_basis([z ** 2 + 1]) == [z ** 2 + 1]
    assert set(coprime_basis([z ** 2 - 1, z - 1])) == {z - 1, z + 1}
    with pytest.raises(ValueError):
        coprime_basis([Poly()])


# --- Poly basics -----------------------------------------------------------

def test_zero_polynomial_is_canonical():
    assert Poly([0, 0]) == Poly()
    assert Poly().degree == -1 or Poly().is_zero()
    assert Poly([1, 0, 0]).degree == 0


def test_division_identity(rng):
    for _ in range(100):
        a = rand_poly(rng, rng.randint(0, 12))
        b = rand_poly(rng, rng.randint(0, 6))
        q, r = divmod(a, b)
        assert q * b + r == a
        assert r.degree < b.degree


def test_interpolation_roundtrip(rng):
    for _ in range(20):
        p = rand_poly(rng, rng.randint(0, 8))
        xs = list(range(-3, -3 + p.degree + 1))
        assert interpolate(xs, [p(x) for x in xs]) == p


# --- oracles: sympy -------------------------------------------------------

@settings(max_examples=150, deadline=None)
@given(polys, polys)
def test_compose_matches_sympy(f, g):
    expect = to_sympy(f).compose(to_sympy(g))
    assert compose(f, g) == from_sympy(expect)


@settings(max_examples=150, deadline=None)
@given(polys, polys, polys)
def test_compose_associative(f, g, h):
    assert compose(compose(f, g), h) == compose(f, compose(g, h))


@settings(max_examples=40, deadline=None)
@given(st.lists(fracs, min_size=2, max_size=4).map(Poly), st.integers(0, 3), st.integers(0, 3))
def test_iterate_additive(f, a, b):
    assert iterate(f, a + b) == compose(iterate(f, a), iterate(f, b))


def test_gcd_matches_sympy(rng):
    for _ in range(150):
        c = rand_poly(rng, rng.randint(0, 4), monic=True)
        a = c * rand_poly(rng, rng.randint(0, 6))
        b = c * rand_poly(rng, rng.randint(0, 6))
        g = gcd(a, b)
        expect = sp.gcd(to_sympy(a), to_sympy(b))
        assert g == from_sympy(expect).monic() if not expect.is_zero else g.is_zero()


def test_gcd_large_modular_path(rng):
    # beyond the PRS size limits, the modular gcd kicks in
    for _ in range(5):
        c = rand_poly(rng, 6, monic=True, lo=-50, hi=50)
        a = c * rand_poly(rng, 14, lo=-99, hi=99)
        b = c * rand_poly(rng, 13, lo=-99, hi=99)
        expect = from_sympy(sp.gcd(to_sympy(a), to_sympy(b))).monic()
        assert gcd(a, b) == expect


def test_resultant_matches_sylvester(rng):
    for _ in range(150):
        a = rand_poly(rng, rng.randint(0, 6))
        b = rand_poly(rng, rng.randint(0, 6))
        assert resultant(a, b) == sylvester_resultant(a, b)


def test_resultant_vanishes_iff_common_factor(rng):
    for i in range(100):
        a = rand_poly(rng, rng.randint(1, 5))
        b = rand_poly(rng, rng.randint(1, 5))
        if i % 2:
            c = rand_poly(rng, rng.randint(1, 3))
            a, b = a * c, b * c
        assert (resultant(a, b) == 0) == (gcd(a, b).degree >= 1)


def test_squarefree_reassembly_planted(rng):
    for _ in range(1000):
        parts = [rand_poly(rng, rng.randint(1, 2), lo=-4, hi=4) for _ in range(rng.randint(1, 3))]
        a = Poly([rand_frac(rng) or 1])
        for p in parts:
            a = a * p ** rng.randint(1, 3)
        d = squarefree(a)
        assert d.expand() == a
        assert sum(m * f.degree for f, m in d.factors) == a.degree
        assert d.radical() == radical(a)
        for i, (f, _) in enumerate(d.factors):
            assert gcd(f, f.derivative()).degree == 0
            for g, _ in d.factors[i + 1:]:
                assert gcd(f, g).degree == 0


def test_squarefree_matches_sympy(rng):
    for _ in range(50):
        a = Poly([1])
        for _ in range(3):
            a = a * rand_poly(rng, rng.randint(1, 3), monic=True) ** rng.randint(1, 3)
        ours = {(f, m) for f, m in squarefree(a).factors}
        _, theirs = sp.sqf_list(to_sympy(a))
        # sympy may split a multiplicity class into several coprime pieces
        merged = {}
        for f, m in theirs:
            merged[m] = merged.get(m, Poly([1])) * from_sympy(f).monic()
        assert ours == {(f, m) for m, f in merged.items()}


def test_coprime_basis_property(rng):
    for _ in range(50):
        roots = [rand_frac(rng) for _ in range(6)]
        inputs = []
        for _ in range(3):
            sub = rng.sample(roots, rng.randint(1, 4))
            p = Poly([1])
            for r in set(sub):
                p = p * (z - r)
            inputs.append(p)
        basis = coprime_basis(inputs)
        for i, u in enumerate(basis):
            for v in basis[i + 1:]:
                assert gcd(u, v).degree == 0
        for p in inputs:
            q = p.monic()
            for b in basis:
                if (q % b).is_zero():
                    q = q.exact_div(b)
            assert q.degree == 0


def test_radical_divides_random(rng):
    for _ in range(50):
        a = rand_poly(rng, rng.randint(1, 3))
        b = rand_poly(rng, rng.randint(1, 3))
        assert radical_divides(a ** 2, a * b)
        assert radical_divides(a * b, a ** 3) == radical_divides(b, a)


# --- charpoly ---------------------------------------------------------------

def numeric_charpoly(b: Poly, a: Poly) -> np.ndarray:
    ac = np.array([float(x) for x in reversed(a.coeffs)])
    roots = np.roots(ac)
    vals = np.array([b.eval_complex(r) for r in roots])
    return np.poly(vals)


def test_charpoly_numeric_oracle(rng):
    for _ in range(60):
        n = rng.randint(1, 12)
        a = rand_poly(rng, n, lo=-3, hi=3)
        b = rand_poly(rng, rng.randint(0, n + 2), lo=-3, hi=3)
        exact = charpoly_mod(b, a)
        assert exact.degree == n and exact.lc == 1
        got = np.array([float(x) for x in reversed(exact.coeffs)])
        want = numeric_charpoly(b, a).real
        scale = max(1.0, np.max(np.abs(want)))
        assert np.max(np.abs(got - want)) <= 1e-9 * scale * 10 ** (n // 4)


def test_charpoly_matches_sympy_resultant(rng):
    w = sp.Symbol("w")
    for _ in range(25):
        n = rng.randint(1, 6)
        a = rand_poly(rng, n, monic=True, lo=-4, hi=4)
        b = rand_poly(rng, rng.randint(0, 4), lo=-4, hi=4)
        # for monic a, Res_z(a, w - b) is prod (w - b(z_i)) up to sign
        res = sp.resultant(to_sympy(a).as_expr(), w - to_sympy(b).as_expr(), Z)
        expect = sp.Poly(sp.expand(res), w).monic()
        got = sp.Poly([sp.Rational(c.numerator, c.denominator) for c in reversed(charpoly_mod(b, a).coeffs)], w)
        assert sp.expand(got.as_expr() - expect.as_expr()) == 0


def test_charpoly_disjoint_prime_sets_agree(rng):
    for _ in range(15):
        n = rng.randint(2, 10)
        a = rand_poly(rng, n)
        b = rand_poly(rng, rng.randint(1, n))
        p1 = charpoly_mod(b, a, certified=True)
        p2 = charpoly_mod(b, a, certified=True, skip_primes=400)
        assert p1 == p2


def test_charpoly_kernels_identical_images(rng):
    for _ in range(10):
        n = rng.randint(2, 30)
        a = rand_poly(rng, n)
        b = rand_poly(rng, rng.randint(1, n))
        proj = charpoly_images(b, a, 3, method="projection")
        hess = charpoly_images(b, a, 3, method="hessenberg")
        for (p, x), (q, y) in zip(proj, hess):
            assert p == q and np.array_equal(x, y)


def test_charpoly_methods_agree_exactly(rng):
    for _ in range(10):
        n = rng.randint(2, 12)
        a = rand_poly(rng, n)
        b = rand_poly(rng, rng.randint(1, n))
        assert charpoly_mod(b, a) == charpoly_mod(b, a, method="hessenberg")


def test_charpoly_root_extraction():
    # b = z^2 on roots of z^4 - 2: every value is +/- sqrt 2 twice
    a = z ** 4 - 2
    full = charpoly_mod(z ** 2, a)
    root = charpoly_mod(z ** 2, a, root=2)
    assert root ** 2 == full
    with pytest.raises(ValueError):
        charpoly_mod(z, z ** 3 - 1, root=2)


def test_charpoly_certified_matches_adaptive(rng):
    for _ in range(10):
        a = rand_poly(rng, 8, monic=True, lo=-9, hi=9).primitive_int()
        a = Poly(a)
        b = Poly([rng.randint(-9, 9) for _ in range(6)])
        assert charpoly_mod(b, a) == charpoly_mod(b, a, certified=True)


def test_charpoly_with_multiple_roots():
    a = (z - 1) ** 3 * (z + 2)
    assert charpoly_mod(z ** 2, a) == (z - 1) ** 3 * (z - 4)


# --- modular helpers ---------------------------------------------------------

def test_rational_reconstruction():
    p = M.primes_below(31).__next__()
    q = 2 ** 31 - 1
    m = p * q
    for num, den in [(3, 7), (-22, 5), (1, 1), (0, 1), (-1, 9)]:
        u = num * pow(den, -1, m) % m
        assert M.rational_reconstruct(u, m) == (num, den)
        assert M.rational_reconstruct_mq(u, m, margin_bits=8) == (num, den)


def test_maximal_quotient_reconstruction_unbalanced(rng):
    """Lopsided fractions that the balanced bound cannot reach."""
    primes = list(M._prime_table(31, 40))
    m = 1
    for p in primes:
        m *= p
    bits = m.bit_length()
    hits = 0
    for _ in range(200):
        nb = rng.randint(1, bits - 80)
        db = rng.randint(1, bits - 60 - nb)
        num = rng.getrandbits(nb) * rng.choice([1, -1])
        den = rng.getrandbits(db) | 1
        g = math.gcd(num, den)
        num, den = num // g, den // g
        u = num * pow(den, -1, m) % m
        assert M.rational_reconstruct_mq(u, m) == (num, den)
        hits += max(abs(num), den) ** 2 * 2 > m
    assert hits > 50
    assert M.rational_reconstruct_mq(rng.getrandbits(bits - 1), m) is None


def test_power_traces_match_direct():
    p = 1000003
    a = np.array([5, 0, 3, 1], dtype=np.int64)  # z^3 + 3z^2 + 5
    b = np.array([1, 2], dtype=np.int64)        # 1 + 2z
    tr = M.power_traces_p(b, a, p, 7)
    mt = M.mult_matrix_p(b, a, p)
    acc = np.eye(3, dtype=object)
    for j in range(7):
        assert tr[j] == int(np.trace(acc)) % p
        acc = acc.dot(mt.astype(object)) % p


def test_primes_are_prime():
    ps = []
    for q in M.primes_below(20):
        ps.append(q)
        if len(ps) == 50:
            break
    assert all(sp.isprime(q) for q in ps)
    assert ps == sorted(ps, reverse=True)

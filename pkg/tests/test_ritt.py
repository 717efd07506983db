import math
import random
from fractions import Fraction

import pytest

from conftest import rand_frac
from multispec.exactalg import Poly, compose
from multispec.ritt import (
    ProgressionFailure,
    RittPair,
    build_ritt_pair,
    good_level,
    multiplier_congruence_check,
    normalize_pair,
    progression_params,
    semiconjugacy_check,
    verify_progression,
)
from multispec.dynmaps import PolyMap
from multispec.spectrum import spectrum_containment, spectrum_level

z = Poly.z()


def rand_R(rng: random.Random, max_deg: int) -> Poly:
    dR = rng.randint(0, max_deg)
    R = Poly([rand_frac(rng, lo=-3, hi=3) for _ in range(dR)] + [rng.choice([1, -1, 2, Fraction(1, 2)])])
    return R


def rand_pair(rng: random.Random, rmax=4, kmax=4, dmax=3, max_degree=None) -> RittPair:
    while True:
        r, k = rng.randint(1, rmax), rng.randint(1, kmax)
        R = rand_R(rng, dmax)
        if r + k * R.degree < 2:
            continue
        if max_degree and r + k * R.degree > max_degree:
            continue
        return build_ritt_pair(r, k, R)


# --- construction -------------------------------------------------------------

def test_build_examples():
    p = build_ritt_pair(2, 3, z + 1)
    assert p.P.poly == z ** 5 + z ** 2
    assert p.Q.poly == z ** 2 * (z + 1) ** 3
    p = build_ritt_pair(1, 2, z - 3)
    assert p.P.poly == z * (z ** 2 - 3) and p.Q.poly == z * (z - 3) ** 2
    R = Poly([1, -2, 3])
    p = build_ritt_pair(3, 1, R)
    assert p.P == p.Q and p.degree == 5


def test_build_errors():
    with pytest.raises(ValueError):
        build_ritt_pair(2, 3, Poly())
    with pytest.raises(ValueError):
        build_ritt_pair(1, 3, Poly([5]))
    with pytest.raises(ValueError):
        build_ritt_pair(0, 3, z)


def test_normalize_examples():
    p = build_ritt_pair(2, 3, z ** 2 + z)
    n = normalize_pair(p)
    assert (n.r, n.k, n.R) == (5, 3, z + 1)
    assert n.P == p.P and n.Q == p.Q
    p = build_ritt_pair(2, 3, z + 1)
    assert normalize_pair(p) == p
    n = normalize_pair(build_ritt_pair(1, 2, z ** 3))
    assert (n.r, n.k, n.R) == (7, 2, Poly([1])) and n.P.poly == z ** 7


def test_normalize_preserves_maps(rng):
    for _ in range(100):
        p = rand_pair(rng)
        l = rng.randint(0, 2)
        p = build_ritt_pair(p.r, p.k, p.R * z ** l)
        n = normalize_pair(p)
        assert n.R.coeff(0) != 0
        assert build_ritt_pair(n.r, n.k, n.R).P == p.P
        assert build_ritt_pair(n.r, n.k, n.R).Q == p.Q


# --- progression parameters ------------------------------------------------------

def test_progression_examples():
    pp = progression_params(2, 3)
    assert pp.valid and (pp.c1, pp.d) == (1, 2)
    assert pp.levels(3) == [1, 3, 5]
    assert not progression_params(3, 4).valid
    # k = 1 must still satisfy c1 < d, so d is raised to 2
    for r in range(2, 6):
        pp = progression_params(r, 1)
        assert pp.valid and pp.c1 == 1 and pp.d == 2
    assert not progression_params(1, 3).valid


def brute_params(r, k):
    """Minimal c1 with gcd(r (r^c1 - 1), k) = 1 and the order of r mod k."""
    if math.gcd(r, k) != 1:
        return None
    order = next(d for d in range(1, k + 1) if pow(r, d, k) == 1 % k)
    for c in range(1, 4 * k + 2):
        if math.gcd(r * (r ** c - 1), k) == 1:
            return c, order
    return None


def test_progression_grid():
    for r in range(2, 13):
        for k in range(1, 13):
            pp = progression_params(r, k)
            ref = brute_params(r, k)
            assert pp.valid == (ref is not None)
            if pp.valid:
                c1, order = ref
                assert pp.c1 == c1 and pp.c1 < pp.d
                assert pp.d % order == 0
                if k > 1:
                    assert pp.d == order
                for n in pp.levels(4):
                    assert good_level(r, k, n)


def test_good_level_examples():
    assert good_level(2, 3, 1) and not good_level(2, 3, 2) and good_level(2, 3, 5)
    assert all(good_level(r, 1, n) for r in range(2, 5) for n in range(1, 6))


# --- identities -----------------------------------------------------------------

def test_semiconjugacy_examples():
    p = build_ritt_pair(2, 3, z + 1)
    assert semiconjugacy_check(p, 1) and semiconjugacy_check(p, 3)
    bad = RittPair(p.r, p.k, p.R, p.P, PolyMap(p.Q.poly + 1))
    assert not semiconjugacy_check(bad, 1)


def test_congruence_examples():
    p = build_ritt_pair(2, 3, z + 1)
    assert multiplier_congruence_check(p, 1) and multiplier_congruence_check(p, 2)
    assert multiplier_congruence_check(build_ritt_pair(1, 2, z - 3), 1)


def test_identities_random(rng):
    for _ in range(200):
        p = rand_pair(rng, max_degree=8)
        n = rng.randint(1, 3 if p.degree <= 4 else 2)
        assert semiconjugacy_check(p, n)
        assert multiplier_congruence_check(p, n)
        assert compose(p.Q.poly, z ** p.k) == p.P.poly ** p.k


def test_containment_random(rng):
    done = 0
    while done < 12:
        p = normalize_pair(rand_pair(rng, max_degree=6))
        if p.r < 2 or p.R.coeff(0) == 0 or p.k == 1:
            continue
        for n in range(1, 4 if p.degree <= 4 else 3):
            assert spectrum_containment(p.P, p.Q, n)
        done += 1


# --- progression verification --------------------------------------------------------

def test_verify_progression_23move():
    rep = verify_progression(build_ritt_pair(2, 3, z + 1), 2)
    assert rep.status == "verified"
    eq = {c.level: c.equal for c in rep.checks}
    assert eq == {1: True, 2: False, 3: True}
    assert [c.level for c in rep.checks if c.in_progression] == [1, 3]
    assert rep.progression_levels_equal


def test_verify_progression_conjugate_pair():
    rep = verify_progression(build_ritt_pair(1, 2, z - 3), 3)
    assert rep.status == "hypothesis not satisfied"
    assert all(c.equal for c in rep.checks) and len(rep.checks) == 3


def test_verify_progression_trivial_move():
    rep = verify_progression(build_ritt_pair(2, 1, z - 2), 3)
    assert rep.status == "verified" and all(c.equal for c in rep.checks)


def test_verify_progression_truncation():
    rep = verify_progression(build_ritt_pair(2, 3, z + 1), 3, cap=200)
    assert rep.status == "verified (truncated)" and rep.truncated_at == 4
    with pytest.raises(ValueError):
        verify_progression(build_ritt_pair(2, 3, z + 1), 0)


def test_progression_failure_is_raised(monkeypatch):
    import multispec.ritt as ritt

    monkeypatch.setattr(ritt, "_level_equal", lambda f, g, n, cap: n != 1)
    with pytest.raises(ProgressionFailure) as info:
        verify_progression(build_ritt_pair(2, 3, z + 1), 1)
    assert info.value.level == 1 and info.value.report.status == "failure"


def test_good_levels_agree_small(rng):
    """Small-degree version of the good-level agreement check."""
    done = 0
    while done < 15:
        p = rand_pair(rng, rmax=4, kmax=5, dmax=2, max_degree=7)
        n = normalize_pair(p)
        pp = progression_params(n.r, n.k)
        if not pp.valid:
            continue
        for lvl in range(1, 4):
            if good_level(n.r, n.k, lvl) and p.degree ** lvl <= 400:
                assert spectrum_level(p.P, lvl) == spectrum_level(p.Q, lvl)
        done += 1

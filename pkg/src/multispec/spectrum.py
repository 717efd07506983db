"""Multiplier spectra of polynomial maps.

The level-``n`` spectrum of a degree-``d`` polynomial ``f`` is the multiset of
multipliers ``(f^n)'(z)`` over the ``d^n`` finite fixed points of ``f^n`` plus
the fixed point at infinity, whose multiplier is 0.  It is stored exactly as
the monic polynomial

    M_n(w) = prod (w - (f^n)'(z_i))  over  f^n(z_i) = z_i,

computed as a characteristic polynomial modulo ``f^n(z) - z``.
"""

from __future__ import annotations

import math
import os
from functools import lru_cache
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .dynmaps import MapLike, PolyMap, as_map, escape_radius
from .exactalg import (
    Poly,
    charpoly_images,
    charpoly_mod,
    compose,
    gcd,
    iterate,
    lcm,
    radical,
    radical_divides,
    squarefree,
)
from .exactalg.modular import poly_gcd_p, primes_below

__all__ = [
    "DEFAULT_SIZE_CAP",
    "size_cap",
    "LevelTooLarge",
    "MultiplierPoly",
    "SpectrumLevel",
    "Comparison",
    "SacReport",
    "multiplier_charpoly",
    "spectrum_level",
    "spectra_equal_up_to",
    "compare_iterates",
    "spectrum_containment",
    "superattracting_cycle_count",
    "numeric_multipliers",
    "length_spectrum_numeric",
]

DEFAULT_SIZE_CAP = 2000


def size_cap() -> int:
    """Largest admissible ``d**n``; ``MULTISPEC_SIZE_CAP`` overrides the default."""
    raw = os.environ.get("MULTISPEC_SIZE_CAP")
    if raw is None:
        return DEFAULT_SIZE_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"MULTISPEC_SIZE_CAP must be an integer, got {raw!r}") from None
    if cap < 1:
        raise ValueError("MULTISPEC_SIZE_CAP must be positive")
    return cap


class LevelTooLarge(ValueError):
    """Raised when ``d**n`` exceeds the size cap."""


def _check_level(f: PolyMap, n: int, cap: int | None) -> int:
    if n < 1:
        raise ValueError("level must be a positive integer")
    f.require_dynamic()
    cap = size_cap() if cap is None else cap
    N = f.degree ** n
    if N > cap:
        raise LevelTooLarge(f"level too large: {f.degree}^{n} = {N} exceeds the size cap {cap}")
    return N


def _derivative_bound_log2(f: PolyMap, n: int) -> float:
    """log2 of a bound on ``|(f^n)'|`` at periodic points.

    Periodic points stay in the disk of radius R from ``escape_radius``, and
    so do their orbits, hence ``|(f^n)'| <= (max_{|z|<=R} |f'|)^n``.
    """
    R = float(escape_radius(f))
    m = sum(j * abs(float(c)) * R ** (j - 1) for j, c in enumerate(f.poly.coeffs) if j)
    return n * math.log2(max(m, 1.0))


def _level_pair(f: PolyMap, n: int) -> tuple[Poly, Poly]:
    F = iterate(f.poly, n)
    return F.derivative(), F - Poly.z()


@dataclass(frozen=True)
class MultiplierPoly:
    """Finite part of the level-``n`` multiplier multiset as a monic polynomial.

    ``includes_infinity`` records the extra multiplier 0 at infinity, which
    is not a root of ``charpoly``.
    """

    level: int
    charpoly: Poly
    includes_infinity: bool = True

    @property
    def degree(self) -> int:
        return self.charpoly.degree

    def to_spectrum(self) -> "SpectrumLevel":
        return SpectrumLevel.from_charpoly(self.level, self.charpoly)


@dataclass(frozen=True)
class SpectrumLevel:
    """``sigmas[j-1]`` is the ``j``-th elementary symmetric function of the
    full multiplier multiset (``d**n + 1`` entries, the last always 0)."""

    level: int
    sigmas: tuple[Fraction, ...]

    @classmethod
    def from_charpoly(cls, level: int, charpoly: Poly) -> "SpectrumLevel":
        N = charpoly.degree
        c = charpoly.coeffs
        sig = tuple((-1) ** k * c[N - k] for k in range(1, N + 1)) + (Fraction(0),)
        return cls(level, sig)

    def to_charpoly(self) -> Poly:
        N = len(self.sigmas) - 1
        c = [Fraction(0)] * (N + 1)
        c[N] = Fraction(1)
        for k in range(1, N + 1):
            c[N - k] = (-1) ** k * self.sigmas[k - 1]
        return Poly(c)

    def __len__(self) -> int:
        return len(self.sigmas)


def _divisors(n: int) -> list[int]:
    return [e for e in range(1, n + 1) if n % e == 0]


def _mobius(n: int) -> int:
    mu, q = 1, 2
    while q * q <= n:
        if n % q == 0:
            n //= q
            if n % q == 0:
                return 0
            mu = -mu
        q += 1
    return -mu if n > 1 else mu


def _dynatomic(f: Poly, m: int) -> Poly:
    """``prod_{e | m} (f^e(z) - z)^{mu(m/e)}``; the product over ``m | n``
    of these is ``f^n(z) - z``."""
    num, den = Poly.constant(1), Poly.constant(1)
    for e in _divisors(m):
        mu = _mobius(m // e)
        if mu:
            fe = iterate(f, e) - Poly.z()
            if mu > 0:
                num = num * fe
            else:
                den = den * fe
    return num.exact_div(den)


def _coprime_mod_p(a: Poly, b: Poly, tries: int = 3) -> bool:
    """True if ``gcd(a, b) = 1`` is certified by a gcd over some F_p.

    Modulo a prime dividing neither leading coefficient nor any denominator,
    a common factor over Q would survive with its degree; a trivial gcd mod
    ``p`` therefore proves coprimality.  False means "not certified".
    """
    an, ad = a.int_form()
    bn, bd = b.int_form()
    bad = an[-1] * bn[-1] * ad * bd
    seen = 0
    for p in primes_below(30):
        if bad % p == 0:
            continue
        g = poly_gcd_p(a.mod_p(p), b.mod_p(p), p)
        if g.size == 1:
            return True
        seen += 1
        if seen >= tries:
            return False
    return False  # pragma: no cover


@lru_cache(maxsize=128)
def _cycle_poly(f: PolyMap, m: int, certified: bool) -> tuple[Poly, int]:
    """``(psi, e)`` with ``psi^e`` the multiplier polynomial of the points of
    formal period ``m``.

    When no point of formal period ``m`` has a smaller exact period (checked
    by coprimality with every ``f^e(z) - z``, ``e | m``, ``e < m``), the
    points split into whole ``m``-cycles, all of whose points share one
    multiplier and one multiplicity.  The characteristic polynomial is then
    an ``m``-th power and only its root is reconstructed.
    """
    p = f.poly
    phi = _dynatomic(p, m)
    Fm = iterate(p, m)
    root = 1
    if m > 1 and all(_coprime_mod_p(phi, iterate(p, e) - Poly.z()) for e in _divisors(m)[:-1]):
        root = m
    psi = charpoly_mod(Fm.derivative(), phi, value_bound=_derivative_bound_log2(f, m),
                       certified=certified, root=root)
    return psi, root


def _power_transform(psi: Poly, e: int, lval: float) -> Poly:
    """``prod (w - rho^e)`` over the roots ``rho`` of ``psi``."""
    if e == 1:
        return psi
    return charpoly_mod(Poly.monomial(e), psi, value_bound=e * lval)


def multiplier_charpoly(f: MapLike, n: int, *, cap: int | None = None,
                        certified: bool = False, method: str = "dynatomic") -> MultiplierPoly:
    """Exact multiplier polynomial of the finite fixed points of ``f^n``.

    Parameters
    ----------
    f : map-like
    n : int
        Level, with ``deg(f)**n`` within the size cap.
    certified : bool
        Forwarded to :func:`charpoly_mod`.
    method : {"dynatomic", "direct"}
        ``"direct"`` takes the characteristic polynomial of ``(f^n)'`` modulo
        ``f^n(z) - z`` in one piece.  ``"dynatomic"`` splits the fixed points
        by formal period ``m | n``; a point of formal period ``m`` has
        ``(f^n)' = ((f^m)')^(n/m)``, so each piece contributes a power
        transform of its own multiplier polynomial, and pieces made of whole
        cycles are reconstructed from their ``m``-th root.  Both return the
        same polynomial; the second needs far fewer primes at deep levels.
    """
    f = as_map(f)
    _check_level(f, n, cap)
    if method == "direct":
        B, A = _level_pair(f, n)
        cp = charpoly_mod(B, A, value_bound=_derivative_bound_log2(f, n), certified=certified)
        return MultiplierPoly(n, cp)
    if method != "dynatomic":
        raise ValueError(f"unknown method {method!r}")
    cp = Poly.constant(1)
    for m in _divisors(n):
        psi, root = _cycle_poly(f, m, certified)
        piece = _power_transform(psi, n // m, _derivative_bound_log2(f, m))
        cp = cp * piece ** root
    return MultiplierPoly(n, cp)


def spectrum_level(f: MapLike, n: int, *, cap: int | None = None) -> SpectrumLevel:
    """Level-``n`` multiplier spectrum ``(sigma_1, ..., sigma_{d^n+1})``."""
    return multiplier_charpoly(f, n, cap=cap).to_spectrum()


class Comparison(NamedTuple):
    equal: bool
    first_diff: int | None


def _images_differ(f: PolyMap, g: PolyMap, n: int, primes: int = 2) -> bool:
    """True when the level-``n`` multiplier polynomials provably differ.

    Images are compared only at primes that are good for both maps, where
    they are the reductions of the exact polynomials; one disagreement is a
    proof of inequality.  Agreement proves nothing.
    """
    Bf, Af = _level_pair(f, n)
    Bg, Ag = _level_pair(g, n)
    imf = dict(charpoly_images(Bf, Af, primes + 4))
    img = dict(charpoly_images(Bg, Ag, primes + 4))
    shared = [p for p in imf if p in img][:primes]
    return any(not np.array_equal(imf[p], img[p]) for p in shared)


def _level_equal(f: PolyMap, g: PolyMap, n: int, cap: int | None) -> bool:
    _check_level(f, n, cap)
    if f.poly == g.poly:
        return True
    if _images_differ(f, g, n):
        return False
    return multiplier_charpoly(f, n, cap=cap).charpoly == multiplier_charpoly(g, n, cap=cap).charpoly


def spectra_equal_up_to(f: MapLike, g: MapLike, m: int, *, cap: int | None = None) -> Comparison:
    """Compare ``S_1, ..., S_m`` of two maps of equal degree exactly."""
    f, g = as_map(f), as_map(g)
    if f.degree != g.degree:
        raise ValueError(f"degree mismatch: {f.degree} vs {g.degree}")
    if m < 1:
        raise ValueError("m must be positive")
    for n in range(1, m + 1):
        if not _level_equal(f, g, n, cap):
            return Comparison(False, n)
    return Comparison(True, None)


def compare_iterates(f: MapLike, g: MapLike, k: int, m: int, *, cap: int | None = None) -> Comparison:
    """``spectra_equal_up_to(f^k, g^k, m)``."""
    if k < 1:
        raise ValueError("k must be positive")
    f, g = as_map(f), as_map(g)
    return spectra_equal_up_to(f.iterate(k), g.iterate(k), m, cap=cap)


def spectrum_containment(f: MapLike, g: MapLike, n: int, *, cap: int | None = None) -> bool:
    """Every level-``n`` multiplier of ``f`` is a level-``n`` multiplier of ``g``."""
    f, g = as_map(f), as_map(g)
    if f.degree != g.degree:
        raise ValueError(f"degree mismatch: {f.degree} vs {g.degree}")
    mf = multiplier_charpoly(f, n, cap=cap).charpoly
    mg = multiplier_charpoly(g, n, cap=cap).charpoly
    return radical_divides(mf, mg)


# ---------------------------------------------------------------------------
# superattracting cycles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SacReport:
    count: int
    per_period: tuple[tuple[int, int], ...]
    certified_complete: bool
    bound: int
    unresolved: tuple[Poly, ...] = ()


def _schur_stable(q: list[Fraction]) -> bool:
    """All roots of ``sum q[k] w^k`` lie in the open unit disk (Schur-Cohn)."""
    q = list(q)
    while len(q) > 1:
        if abs(q[0]) >= abs(q[-1]):
            return False
        m = len(q) - 1
        # (q_m * Q(w) - q_0 * Q*(w)) / w, with Q* the reversed polynomial
        nxt = [q[-1] * q[k] - q[0] * q[m - k] for k in range(m + 1)]
        q = nxt[1:]
    return True


def _roots_outside(p: Poly, R: Fraction) -> bool:
    """All roots of ``p`` have modulus strictly greater than ``R``."""
    if p.coeff(0) == 0:
        return False
    m = p.degree
    # roots of w^m p(R/w) are R/root
    return _schur_stable([p.coeff(m - k) * R ** (m - k) for k in range(m + 1)])


def superattracting_cycle_count(f: MapLike, bound: int) -> SacReport:
    """Count superattracting cycles of ``f`` in C, exactly.

    Critical points whose period divides ``n`` are the roots of
    ``gcd(rad f', f^n(z) - z)``; the cycles through them are counted from
    the distinct roots of the characteristic polynomials of ``f^i`` modulo the
    exact-period factor.  Critical points that are not periodic with period
    ``<= bound`` are then checked to be preperiodic (exact congruences of
    iterates) or escaping (an exact Schur-Cohn test against the escape
    radius).  Anything left makes ``certified_complete`` false.
    """
    f = as_map(f).require_dynamic()
    if bound < 1:
        raise ValueError("bound must be at least 1")
    F = f.poly
    g = radical(F.derivative())
    z = Poly.z()
    if g.degree == 0:  # pragma: no cover - degree >= 2 always has a critical point
        return SacReport(0, (), True, bound)
    hs = [z % g]
    per_level: dict[int, Poly] = {}
    for n in range(1, bound + 1):
        hs.append(compose(F, hs[-1]) % g)
        per_level[n] = gcd(g, hs[-1] - z)
    per_period = []
    total = 0
    periodic = Poly([1])
    for n in range(1, bound + 1):
        lower = Poly([1])
        for m in range(1, n):
            if n % m == 0:
                lower = lcm(lower, per_level[m])
        q = per_level[n].exact_div(gcd(per_level[n], lower))
        if q.degree < 1:
            continue
        periodic = periodic * q
        points = Poly([1])
        for i in range(n):
            points = points * charpoly_mod(hs[i] % q, q)
        npts = radical(points).degree
        if npts % n:
            raise ArithmeticError("cycle point count not divisible by the period")
        per_period.append((n, npts // n))
        total += npts // n
    rest = g.exact_div(gcd(g, periodic))
    unresolved = _classify_rest(F, rest, hs, bound, escape_radius(f)) if rest.degree > 0 else []
    return SacReport(total, tuple(per_period), not unresolved, bound, tuple(unresolved))


def _classify_rest(F: Poly, rest: Poly, hs: list[Poly], bound: int, R: Fraction) -> list[Poly]:
    # strip preperiodic critical points: f^i(c) == f^j(c) for some i < j <= bound
    pending = [rest]
    for j in range(1, bound + 1):
        for i in range(j):
            nxt = []
            for v in pending:
                u = gcd(v, (hs[j] - hs[i]) % v)
                if u.degree > 0:
                    v = v.exact_div(u)
                if v.degree > 0:
                    nxt.append(v)
            pending = nxt
            if not pending:
                return []
    # escaping factors: all roots of the orbit polynomial beyond R at some step
    left = []
    for v in pending:
        for i in range(bound + 1):
            vals = charpoly_mod(hs[i] % v, v)
            if _roots_outside(vals, R):
                break
        else:
            left.append(v)
    return left


# ---------------------------------------------------------------------------
# numeric multipliers (oracle only)
# ---------------------------------------------------------------------------

def _aberth(evaluate, N: int, radius: float, tol: float, maxiter: int = 500):
    k = np.arange(N)
    zs = radius * np.exp(2j * np.pi * (k + 0.25) / N + 0.4j)
    for _ in range(maxiter):
        p, dp = evaluate(zs)
        if not (np.all(np.isfinite(p)) and np.all(np.isfinite(dp))):
            raise ArithmeticError("precision exhausted")
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(p == 0, 0, p / dp)
            diff = zs[:, None] - zs[None, :]
            np.fill_diagonal(diff, 1)
            inv = 1 / diff
            np.fill_diagonal(inv, 0)
            s = inv.sum(axis=1)
            step = ratio / (1 - ratio * s)
        if not np.all(np.isfinite(step)):
            raise ArithmeticError("precision exhausted")
        zs = zs - step
        if np.all(np.abs(step) <= 1e-3 * tol * np.maximum(1, np.abs(zs))):
            break
    return zs


def _certified_roots(evaluate, N: int, radius: float, tol: float) -> np.ndarray:
    """Aberth roots, each with an inclusion disk of radius ``N |p/p'|`` below
    ``tol`` (relative) and disjoint from the others."""
    zs = _aberth(evaluate, N, radius, tol)
    p, dp = evaluate(zs)
    with np.errstate(divide="ignore", invalid="ignore"):
        rad = N * np.abs(np.where(p == 0, 0, p / dp))
    if not np.all(rad <= tol * np.maximum(1, np.abs(zs))):
        raise ArithmeticError("precision exhausted")
    gap = np.abs(zs[:, None] - zs[None, :]) - (rad[:, None] + rad[None, :])
    np.fill_diagonal(gap, 1)
    if N > 1 and not np.all(gap > 0):
        raise ArithmeticError("precision exhausted")
    return zs


def _coeff_evaluator(p: Poly):
    c = np.array([float(x) for x in p.coeffs[::-1]])
    dc = np.polyder(c)
    return lambda zs: (np.polyval(c, zs), np.polyval(dc, zs))


def _factor_evaluator(evaluate, q: Poly, m: int, rest: Poly):
    """Evaluator whose Newton ratio is ``q/q'`` for ``F = q^m * rest``.

    Low-degree ``q`` is evaluated from its coefficients.  Otherwise ``q^m`` is
    taken as ``F / rest`` with ``F`` evaluated by iteration, which avoids the
    ill-conditioned expanded coefficients of a high-degree factor.
    """
    if q.degree <= rest.degree:
        return _coeff_evaluator(q)
    rev = _coeff_evaluator(rest)

    def ev(zs):
        Fv, dFv = evaluate(zs)
        rv, drv = rev(zs)
        g = Fv / rv
        return g, (dFv - g * drv) / rv / m

    return ev


def numeric_multipliers(f: MapLike, n: int, tol: float = 1e-9, *, cap: int | None = None) -> np.ndarray:
    """Multipliers of the finite fixed points of ``f^n`` in floating point.

    The fixed points are found by simultaneous (Aberth) iteration on
    ``f^n(z) - z`` evaluated by iterating ``f``; each root is accepted only if
    its inclusion disk is within ``tol`` (relative) and disjoint from the
    others, which guarantees a distinct true root nearby.  Repeated fixed
    points defeat that test; the distinct roots of each exact squarefree
    factor are then isolated instead and repeated with their multiplicity.
    Multipliers follow from the chain rule along the orbit.
    """
    f = as_map(f)
    N = _check_level(f, n, cap)
    c = np.array([float(x) for x in f.poly.coeffs[::-1]])
    dc = np.polyder(c)

    def evaluate(zs):
        w = zs.copy()
        d = np.ones_like(zs)
        for _ in range(n):
            d = d * np.polyval(dc, w)
            w = np.polyval(c, w)
        return w - zs, d - 1

    radius = float(escape_radius(f)) * 0.9
    try:
        groups = [(_certified_roots(evaluate, N, radius, tol), 1)]
    except ArithmeticError:
        F = iterate(f.poly, n) - Poly.z()
        groups = []
        for q, m in squarefree(F).factors:
            rest = F.exact_div(q ** m)
            groups.append((_certified_roots(_factor_evaluator(evaluate, q, m, rest), q.degree, radius, tol), m))
    out = [np.repeat(evaluate(zs)[1] + 1, m) for zs, m in groups]
    return np.concatenate(out)


def length_spectrum_numeric(f: MapLike, n: int, tol: float = 1e-9, *, cap: int | None = None) -> list[float]:
    """Sorted moduli of the level-``n`` multipliers, infinity's 0 included."""
    mult = numeric_multipliers(f, n, tol, cap=cap)
    return sorted([0.0] + [float(abs(x)) for x in mult])

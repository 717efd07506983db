"""Characteristic polynomials of multiplication maps ``Q[z]/(A) -> Q[z]/(A)``.

``charpoly_mod(B, A)`` is the monic polynomial ``prod (w - B(z_i))`` over the
roots ``z_i`` of ``A`` counted with multiplicity.  It is assembled from images
modulo many word-size primes.  When ``A`` has a unit leading coefficient over
Z and ``B`` has integer coefficients the answer is integral and is lifted by
Garner's CRT; otherwise coefficients are recovered by rational reconstruction
and confirmed on fresh primes.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterator

import numpy as np

from . import modular as _mod
from .poly import Poly

__all__ = ["charpoly_mod", "charpoly_images", "root_bound_log2", "value_bound_log2"]


def _log2_abs(x: Fraction) -> float:
    return math.log2(abs(x.numerator)) - math.log2(x.denominator)


def root_bound_log2(a: Poly) -> float:
    """log2 of Fujiwara's bound on the moduli of the roots of ``a``."""
    n = a.degree
    la = _log2_abs(a.lc)
    best = -math.inf
    for k in range(n):
        c = a.coeff(k)
        if c == 0:
            continue
        lc = _log2_abs(c) - la
        if k == 0:
            lc -= 1.0
        best = max(best, lc / (n - k))
    if best == -math.inf:
        return 0.0
    return 1.0 + best


def value_bound_log2(b: Poly, a: Poly) -> float:
    """log2 of a bound on ``|b(z)|`` over the roots ``z`` of ``a``."""
    r = root_bound_log2(a)
    terms = [_log2_abs(c) + j * r for j, c in enumerate(b.coeffs) if c != 0]
    if not terms:
        return 0.0
    top = max(terms)
    return top + math.log2(sum(2.0 ** (t - top) for t in terms))


def _coeff_bits(n: int, lval: float) -> float:
    """log2 bound on ``max_j C(n, j) L^j``."""
    best = 0.0
    lf = math.lgamma(n + 1)
    for j in range(n + 1):
        v = (lf - math.lgamma(j + 1) - math.lgamma(n - j + 1)) / math.log(2) + j * max(lval, 0.0)
        best = max(best, v)
    return best


class _Images:
    """Reduction of the pair ``(B, A)`` modulo a stream of good primes."""

    def __init__(self, b: Poly, a: Poly, method: str, root: int = 1, skip: int = 0):
        self.n = a.degree
        self.skip = skip
        self.root = root
        self.out = self.n // root
        self.a_int = a.primitive_int()
        bnum, bden = b.int_form()
        self.b_num, self.b_den = bnum, bden
        self.bad = self.a_int[-1] * bden
        self.method = method
        self.bits = _mod.prime_bits_for(self.n)
        # b_den^j * lc(a)^(j*deg b) clears the denominator of the j-th coefficient
        self.den_bits = self.out * (math.log2(bden) + max(b.degree, 0) * math.log2(abs(self.a_int[-1])))

    def primes(self) -> Iterator[int]:
        for p in _mod.primes_below(self.bits, self.skip):
            if self.bad % p and p > self.n:
                yield p

    def image(self, p: int) -> np.ndarray:
        am = np.array([c % p for c in self.a_int], dtype=np.int64)
        am = am * pow(int(am[-1]), -1, p) % p
        inv = pow(self.b_den % p, -1, p)
        bm = np.array([c * inv % p for c in self.b_num], dtype=np.int64)
        bm = _mod.poly_rem_p(bm, am, p) if len(bm) > self.n else bm
        if self.method == "hessenberg":
            return _mod.charpoly_hessenberg_p(bm, am, p)
        return _mod.charpoly_projection_p(bm, am, p, self.root)


def charpoly_images(b: Poly, a: Poly, count: int, method: str = "projection",
                    skip: int = 0) -> list[tuple[int, np.ndarray]]:
    """``count`` images ``(p, charpoly mod p)`` of ``charpoly_mod(b, a)``."""
    if a.degree < 1:
        raise ValueError("charpoly_mod needs a nonconstant modulus")
    imgs = _Images(b, a, method)
    out = []
    for i, p in enumerate(imgs.primes()):
        if i < skip:
            continue
        out.append((p, imgs.image(p)))
        if len(out) == count:
            break
    return out


def charpoly_mod(b: Poly, a: Poly, *, value_bound: float | None = None,
                 method: str = "projection", certified: bool = False,
                 root: int = 1, skip_primes: int = 0) -> Poly:
    """Monic ``prod_{a(z)=0} (w - b(z))`` as a :class:`Poly` in ``w``.

    Parameters
    ----------
    b, a : Poly
        ``a`` must be nonconstant.
    value_bound : float, optional
        log2 of an upper bound on ``|b(z)|`` over the roots of ``a``.  A
        Fujiwara-type bound is used when omitted; callers with a sharper
        dynamical bound should pass it.
    method : {"projection", "hessenberg"}
        Prime-field kernel.  Both give identical images.
    certified : bool
        For integral outputs, keep lifting until the modulus clears twice the
        coefficient bound instead of stopping after two stable primes.
    root : int
        The caller asserts that the characteristic polynomial is a perfect
        ``root``-th power; its monic ``root``-th root is returned.  Only the
        projection kernel supports this, and it needs about ``1/root`` as
        many primes.
    skip_primes : int
        Start the prime stream this far down the list, so that two calls can
        be made to use disjoint sets of primes.
    """
    if a.degree < 1:
        raise ValueError("charpoly_mod needs a nonconstant modulus")
    if method not in ("projection", "hessenberg"):
        raise ValueError(f"unknown charpoly method {method!r}")
    n = a.degree
    if root < 1 or n % root:
        raise ValueError("root must be a positive divisor of deg a")
    if root > 1 and method != "projection":
        raise ValueError("root extraction needs the projection kernel")
    if b.degree > n - 1 and b.degree > 0:
        b = b % a
    if b.degree <= 0:
        c = b.coeff(0)
        return Poly([-c, 1]) ** (n // root)
    lval = value_bound if value_bound is not None else value_bound_log2(b, a)
    cbits = _coeff_bits(n // root, lval)
    imgs = _Images(b, a, method, root, skip_primes)
    if abs(imgs.a_int[-1]) == 1 and imgs.b_den == 1:
        return _lift_integral(imgs, cbits, certified)
    return _lift_rational(imgs, cbits)


def _lift_integral(imgs: _Images, cbits: float, certified: bool) -> Poly:
    n = imgs.out
    x = [0] * (n + 1)
    m = 1
    stable = 0
    need = cbits + 2
    for p in imgs.primes():
        x, same = _mod.crt_pair(x, m, imgs.image(p), p)
        m *= p
        if m.bit_length() > need:
            break
        stable = stable + 1 if same else 0
        if stable >= 2 and not certified:
            break
    return Poly.from_ints(x)


def _lift_rational(imgs: _Images, cbits: float) -> Poly:
    n = imgs.out
    u = [0] * (n + 1)
    m = 1
    checkpoint = 2
    count = 0
    primes = imgs.primes()
    # past this modulus size reconstruction is guaranteed to have succeeded
    limit = 2 * (cbits + imgs.den_bits) + 64
    for p in primes:
        u = _crt_nonneg(u, m, imgs.image(p), p)
        m *= p
        count += 1
        if count < checkpoint:
            continue
        checkpoint = max(checkpoint + 1, int(checkpoint * 1.15))
        cand = _reconstruct(u, m)
        if cand is not None and any(c and _height(c) > cbits + 2 for c in cand):
            cand = None
        if cand is None:
            if m.bit_length() > limit + 64:
                raise ArithmeticError("rational reconstruction did not converge")
            continue
        ok = True
        for _ in range(2):
            q = next(primes)
            img = imgs.image(q)
            u = _crt_nonneg(u, m, img, q)
            m *= q
            count += 1
            if any((c.numerator * pow(c.denominator % q, -1, q) - int(r)) % q
                   for c, r in zip(cand, img.tolist())):
                ok = False
                break
        if ok:
            return Poly(cand)
    raise ArithmeticError("ran out of primes")  # pragma: no cover


def _height(c: Fraction) -> float:
    return math.log2(abs(c.numerator)) - math.log2(c.denominator)


def _crt_nonneg(u: list[int], m: int, r: np.ndarray, p: int) -> list[int]:
    minv = pow(m % p, -1, p)
    return [ui + m * ((ri - ui) * minv % p) for ui, ri in zip(u, r.tolist())]


def _reconstruct(u: list[int], m: int) -> list[Fraction] | None:
    out = []
    den = 1
    for ui in u:
        # scaling by the running denominator keeps later reconstructions short
        rr = _mod.rational_reconstruct_mq(ui * den % m, m)
        if rr is None:
            return None
        num, d = rr
        v = Fraction(num, d * den)
        out.append(v)
        den = den * v.denominator // math.gcd(den, v.denominator)
    return out

"""Polynomial maps as dynamical systems.

Affine conjugation, exact conjugacy testing, a few named families, and the
finite groups of affine symmetries of a map and of its iterates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

from .exactalg import Poly, compose, iterate as _iterate

__all__ = [
    "PolyMap",
    "RootCertificate",
    "AffineMap",
    "SymmetryElement",
    "SymmetryGroup",
    "Orbit",
    "as_map",
    "conjugate",
    "conjugacy_test",
    "chebyshev",
    "build_Pca",
    "cyclotomic",
    "sigma_group",
    "commuting_linear",
    "escape_radius",
    "orbit",
]


@dataclass(frozen=True)
class PolyMap:
    """A polynomial of degree at least one viewed as a self-map of C."""

    poly: Poly

    def __post_init__(self):
        if not isinstance(self.poly, Poly):
            object.__setattr__(self, "poly", Poly(self.poly))
        if self.poly.degree < 1:
            raise ValueError("a polynomial map needs degree >= 1")

    @property
    def degree(self) -> int:
        return self.poly.degree

    def require_dynamic(self) -> "PolyMap":
        if self.degree < 2:
            raise ValueError(f"degree {self.degree} < 2: not a dynamical polynomial map")
        return self

    def iterate(self, n: int) -> "PolyMap":
        return PolyMap(_iterate(self.poly, n))

    def __call__(self, x):
        return self.poly(x)

    def __str__(self) -> str:
        return str(self.poly)


MapLike = Union[PolyMap, Poly]


def as_map(f: MapLike) -> PolyMap:
    return f if isinstance(f, PolyMap) else PolyMap(f)


# ---------------------------------------------------------------------------
# affine maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RootCertificate:
    """An algebraic number ``alpha`` pinned down by ``alpha**g == rho``.

    ``checks`` records the verified relations ``alpha**e == value`` that made
    ``alpha`` a valid conjugating scale.  Any ``g``-th root of ``rho`` works.
    """

    g: int
    rho: Fraction
    checks: tuple[tuple[int, Fraction], ...] = ()

    def __str__(self) -> str:
        return f"({self.rho})^(1/{self.g})"


Scale = Union[Fraction, RootCertificate]


@dataclass(frozen=True)
class AffineMap:
    """``z -> scale * (z + pre_shift) + shift``.

    With a rational scale the map is kept normalized with ``pre_shift == 0``.
    """

    scale: Scale
    shift: Fraction = Fraction(0)
    pre_shift: Fraction = Fraction(0)

    def __post_init__(self):
        if not isinstance(self.scale, RootCertificate):
            s = Fraction(self.scale)
            if s == 0:
                raise ValueError("affine map with zero scale")
            object.__setattr__(self, "scale", s)
            object.__setattr__(self, "shift", Fraction(self.shift) + s * Fraction(self.pre_shift))
            object.__setattr__(self, "pre_shift", Fraction(0))
        else:
            object.__setattr__(self, "shift", Fraction(self.shift))
            object.__setattr__(self, "pre_shift", Fraction(self.pre_shift))

    @classmethod
    def identity(cls) -> "AffineMap":
        return cls(Fraction(1))

    @classmethod
    def translation(cls, b) -> "AffineMap":
        return cls(Fraction(1), Fraction(b))

    @property
    def is_rational(self) -> bool:
        return not isinstance(self.scale, RootCertificate)

    def _need_rational(self):
        if not self.is_rational:
            raise ValueError("symbolic scale not evaluable")

    def as_poly(self) -> Poly:
        self._need_rational()
        return Poly([self.shift, self.scale])

    def inverse(self) -> "AffineMap":
        self._need_rational()
        return AffineMap(1 / self.scale, -self.shift / self.scale)

    def compose(self, other: "AffineMap") -> "AffineMap":
        """``self o other``."""
        self._need_rational()
        other._need_rational()
        return AffineMap(self.scale * other.scale, self.scale * other.shift + self.shift)

    def __call__(self, x):
        self._need_rational()
        return self.scale * x + self.shift

    def __str__(self) -> str:
        if self.is_rational:
            return str(self.as_poly())
        inner = "z" if self.pre_shift == 0 else f"(z + {self.pre_shift})"
        tail = "" if self.shift == 0 else f" + {self.shift}"
        return f"{self.scale}*{inner}{tail}"


def conjugate(f: MapLike, sigma: AffineMap) -> PolyMap:
    """``sigma o f o sigma^{-1}``."""
    f = as_map(f)
    sigma._need_rational()
    inv = sigma.inverse().as_poly()
    return PolyMap(compose(sigma.as_poly(), compose(f.poly, inv)))


def _center_shift(p: Poly) -> Fraction:
    d = p.degree
    return p.coeff(d - 1) / (d * p.lc)


def _centered(p: Poly, s: Fraction) -> Poly:
    # tau(z) = z + s, return tau o p o tau^{-1}
    return compose(p, Poly([-s, 1])) + s


def _int_root(n: int, k: int) -> int | None:
    """Exact ``k``-th root of a nonnegative integer, if any."""
    if n < 0:
        return None
    if n < 2:
        return n
    r = round(n ** (1.0 / k)) if n.bit_length() < 1000 else _int_root_newton(n, k)
    for c in (r - 1, r, r + 1):
        if c >= 0 and c ** k == n:
            return c
    r = _int_root_newton(n, k)
    return r if r ** k == n else None


def _int_root_newton(n: int, k: int) -> int:
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def _rational_root(q: Fraction, k: int) -> Fraction | None:
    sign = 1
    if q < 0:
        if k % 2 == 0:
            return None
        sign, q = -1, -q
    a = _int_root(q.numerator, k)
    b = _int_root(q.denominator, k)
    if a is None or b is None:
        return None
    return sign * Fraction(a, b)


def _ext_gcd_combination(values: Sequence[int]) -> tuple[int, list[int]]:
    """``g, coeffs`` with ``sum(c*v) == g == gcd(values)`` (``g > 0``)."""
    g, coeffs = 0, []
    for v in values:
        if g == 0:
            g, coeffs = abs(v), [1 if v > 0 else -1]
            continue
        # extended Euclid on (g, v)
        r0, r1, s0, s1, t0, t1 = g, v, 1, 0, 0, 1
        while r1:
            q = r0 // r1
            r0, r1 = r1, r0 - q * r1
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if r0 < 0:
            r0, s0, t0 = -r0, -s0, -t0
        coeffs = [c * s0 for c in coeffs] + [t0]
        g = r0
    return g, coeffs


def conjugacy_test(f: MapLike, g: MapLike) -> AffineMap | None:
    """Find an affine ``sigma`` with ``g == sigma o f o sigma^{-1}``.

    Both maps are centered (their subleading coefficient removed by a rational
    translation).  What is left is a scaling ``z -> alpha*z``, under which the
    coefficient of ``z^j`` picks up ``alpha^(1-j)``.  Writing ``beta = 1/alpha``
    the conditions read ``beta^(j-1) == g_j / f_j``; they are consistent
    exactly when they all follow from the single relation ``beta^g0 == rho``
    with ``g0`` the gcd of the exponents.

    Returns ``None`` when no affine conjugacy exists.  The witness has a
    :class:`RootCertificate` scale when ``alpha`` is irrational.
    """
    f, g = as_map(f), as_map(g)
    if f.degree != g.degree:
        raise ValueError(f"degree mismatch: {f.degree} vs {g.degree}")
    f.require_dynamic()
    d = f.degree
    sf, sg = _center_shift(f.poly), _center_shift(g.poly)
    fc, gc = _centered(f.poly, sf), _centered(g.poly, sg)
    exps, ratios = [], []
    for j in range(d + 1):
        a, b = fc.coeff(j), gc.coeff(j)
        if (a == 0) != (b == 0):
            return None
        if a == 0:
            continue
        if j == 1:
            if a != b:
                return None
            continue
        exps.append(j - 1)
        ratios.append(b / a)
    g0, comb = _ext_gcd_combination(exps)
    rho = Fraction(1)
    for c, q in zip(comb, ratios):
        rho *= q ** c
    checks = []
    for e, q in zip(exps, ratios):
        if rho ** (e // g0) != q:
            return None
        checks.append((e, q))
    # alpha = 1/beta with beta^g0 = rho
    beta = rho if g0 == 1 else _rational_root(rho, g0)
    if beta is not None:
        alpha = 1 / beta
        return AffineMap(alpha, alpha * sf - sg)
    cert_checks = tuple((-e, 1 / q) for e, q in checks)
    return AffineMap(RootCertificate(g0, 1 / rho, cert_checks), -sg, sf)


# ---------------------------------------------------------------------------
# named families
# ---------------------------------------------------------------------------

def chebyshev(d: int) -> PolyMap:
    """Monic Chebyshev polynomial ``T_d`` with ``T_d(z + 1/z) = z^d + z^-d``."""
    if d < 1:
        raise ValueError("Chebyshev degree must be positive")
    z = Poly.z()
    prev, cur = Poly([2]), z
    for _ in range(d - 1):
        prev, cur = cur, z * cur - prev
    return PolyMap(cur)


def _elementary_symmetric(values: Sequence[Fraction]) -> list[Fraction]:
    e = [Fraction(1)]
    for v in values:
        e = [Fraction(1)] + [e[i] + v * e[i - 1] for i in range(1, len(e))] + [v * e[-1]]
    return e


def build_Pca(c: Sequence, a, d: int) -> PolyMap:
    """Critically marked polynomial with finite critical points ``0, c_1, .., c_{d-2}``.

    ``P'(z) = z * prod(z - c_i)`` and ``P(0) = a**d``.
    """
    if d < 2:
        raise ValueError("d must be at least 2")
    c = [Fraction(x) for x in c]
    if len(c) != d - 2:
        raise ValueError(f"expected {d - 2} critical points, got {len(c)}")
    e = _elementary_symmetric(c)
    coeffs = [Fraction(0)] * (d + 1)
    coeffs[0] = Fraction(a) ** d
    coeffs[d] = Fraction(1, d)
    for j in range(2, d):
        coeffs[j] = (-1) ** (d - j) * e[d - j] / j
    return PolyMap(Poly(coeffs))


# ---------------------------------------------------------------------------
# symmetry groups
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def cyclotomic(e: int) -> Poly:
    """``Phi_e`` from ``x^e - 1 = prod_{m | e} Phi_m``."""
    if e < 1:
        raise ValueError("cyclotomic index must be positive")
    p = Poly.monomial(e) - 1
    for m in range(1, e):
        if e % m == 0:
            p = p.exact_div(cyclotomic(m))
    return p


def _divisors(n: int) -> list[int]:
    small = [i for i in range(1, math.isqrt(n) + 1) if n % i == 0]
    return sorted(set(small + [n // i for i in small]))


def _totient(n: int) -> int:
    return cyclotomic(n).degree


@dataclass(frozen=True)
class SymmetryElement:
    """The ``phi(e)`` affine maps ``z -> zeta*z + b(zeta)`` for primitive
    ``e``-th roots of unity ``zeta``; ``shift`` lists the coefficients of ``b``
    in powers of ``zeta``."""

    e: int
    shift: tuple[Fraction, ...] = ()

    @property
    def count(self) -> int:
        return _totient(self.e)

    def __str__(self) -> str:
        b = Poly(self.shift).to_str("zeta")
        root = "z" if self.e == 1 else f"zeta_{self.e}*z"
        return root if b == "0" else f"{root} + ({b})"


@dataclass(frozen=True)
class SymmetryGroup:
    """A finite group of affine maps, as classes of conjugate roots of unity."""

    elements: tuple[SymmetryElement, ...]
    level: int | None = None
    note: str = ""

    @property
    def order(self) -> int:
        return sum(x.count for x in self.elements)

    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(x.e for x in self.elements)

    def is_closed(self) -> bool:
        """Subgroup check on the descriptions.

        The rotation parts form a subgroup of the roots of unity iff the set of
        orders is closed under divisors and lcm; the shifts must follow one
        common rule ``b = c*(zeta - 1)`` for the composite maps to stay inside.
        """
        es = set(self.orders)
        if 1 not in es:
            return False
        for e in es:
            if any(m not in es for m in _divisors(e)):
                return False
            for f in es:
                if e * f // math.gcd(e, f) not in es:
                    return False
        cs = set()
        for x in self.elements:
            b = Poly(x.shift)
            if x.e == 1:
                if not b.is_zero():
                    return False
                continue
            # b must be a rational multiple of (zeta - 1) modulo Phi_e
            c = (b % cyclotomic(x.e)).coeff(1) if x.e > 2 else -b.coeff(0) / 2
            if (b - Poly([-c, c])) % cyclotomic(x.e) != Poly():
                return False
            cs.add(c)
        return len(cs) <= 1

    def __str__(self) -> str:
        return "{" + ", ".join(str(x) for x in self.elements) + "}"


def _ring_poly_affine(F: Poly, a: Poly, b: Poly, mod: Poly) -> list[Poly]:
    """Coefficients of ``F(a*z + b)`` over ``Q[x]/(mod)``."""
    coeffs = F.coeffs
    acc = [Poly([coeffs[-1]])]
    for c in reversed(coeffs[:-1]):
        nxt = [Poly()] * (len(acc) + 1)
        for i, v in enumerate(acc):
            if v.is_zero():
                continue
            nxt[i + 1] = nxt[i + 1] + (a * v) % mod
            nxt[i] = nxt[i] + (b * v) % mod
        nxt[0] = nxt[0] + c
        acc = nxt
    return acc


def _solve_affine(F: Poly, target_scale: bool, D: int, exps: list[int]) -> list[SymmetryElement]:
    out = []
    lc = F.lc
    sub = F.coeff(F.degree - 1)
    x = Poly.z()
    for e in exps:
        mod = cyclotomic(e)
        a = x % mod
        b = (Poly([-sub, sub]) / (lc * D)) % mod  # sub*(x - 1)/(lc*D)
        lhs = _ring_poly_affine(F, a, b, mod)
        if target_scale:
            # a*F + b must equal F(a z + b)
            rhs = [((a * Poly([c])) % mod) for c in F.coeffs]
            rhs[0] = rhs[0] + b
        else:
            rhs = [Poly([c]) for c in F.coeffs]
        if all(l == r for l, r in zip(lhs, rhs)):
            out.append(SymmetryElement(e, b.coeffs))
    return out


def sigma_group(f: MapLike, iterate_bound: int) -> list[SymmetryGroup]:
    """Affine ``sigma`` with ``F o sigma == F`` for ``F = f^k``, ``k = 1..iterate_bound``.

    A symmetry ``z -> a z + b`` of a degree-``D`` polynomial has ``a^D = 1``
    and ``b`` fixed by the subleading coefficient, so each candidate order
    ``e | D`` is decided by one exact identity in ``Q(zeta_e)``.  The list only
    certifies the levels computed; it says nothing about later iterates.
    """
    f = as_map(f).require_dynamic()
    if iterate_bound < 1:
        raise ValueError("iterate_bound must be positive")
    out = []
    F = f.poly
    for k in range(1, iterate_bound + 1):
        if k > 1:
            F = compose(f.poly, F)
        D = F.degree
        elems = _solve_affine(F, False, D, _divisors(D))
        out.append(SymmetryGroup(tuple(elems), level=k, note="bounded evidence"))
    return out


def commuting_linear(f: MapLike) -> SymmetryGroup:
    """Affine ``sigma`` with ``sigma o f == f o sigma``.

    Here ``a^(d-1) = 1`` and ``b = a_{d-1} (a - 1) / (d a_d)``.
    """
    f = as_map(f).require_dynamic()
    d = f.degree
    elems = _solve_affine(f.poly, True, d, _divisors(d - 1))
    return SymmetryGroup(tuple(elems), level=1)


# ---------------------------------------------------------------------------
# orbits
# ---------------------------------------------------------------------------

def escape_radius(f: MapLike) -> Fraction:
    """Rational ``R >= 1`` with ``|f(t)| > |t|`` whenever ``|t| > R``."""
    p = as_map(f).poly
    d = p.degree
    low = sum((abs(c) for c in p.coeffs[:d]), Fraction(0))
    return 1 + (low + 1) / abs(p.lc)


@dataclass(frozen=True)
class Orbit:
    values: tuple[Fraction, ...]
    escaped: bool
    escape_index: int | None
    radius: Fraction

    def __iter__(self):
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]


def orbit(f: MapLike, x, n: int) -> Orbit:
    """``x, f(x), ..., f^n(x)`` with an escape flag.

    Once an iterate leaves the disk of radius :func:`escape_radius` the orbit
    is strictly increasing in modulus, so ``x`` cannot be periodic.
    """
    f = as_map(f)
    if n < 0:
        raise ValueError("orbit length must be nonnegative")
    R = escape_radius(f)
    vals = [Fraction(x)]
    esc = None
    if abs(vals[0]) > R:
        esc = 0
    for i in range(1, n + 1):
        vals.append(f.poly(vals[-1]))
        if esc is None and abs(vals[-1]) > R:
            esc = i
    return Orbit(tuple(vals), esc is not None, esc, R)

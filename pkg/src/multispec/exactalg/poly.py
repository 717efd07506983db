"""Dense univariate polynomials over the rationals.

Coefficients are stored ascending as :class:`fractions.Fraction`.  Heavy
products go through an integer form (common denominator plus integer
numerators) and Kronecker substitution, which leans on CPython's big-integer
multiplication.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

from . import modular as _mod

__all__ = [
    "Poly",
    "SquarefreeDecomposition",
    "compose",
    "iterate",
    "gcd",
    "lcm",
    "resultant",
    "squarefree",
    "radical",
    "radical_divides",
    "coprime_basis",
    "interpolate",
]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"exact rational coefficient expected, got {type(x).__name__}")


def _lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b


# ---------------------------------------------------------------------------
# integer-vector kernels
# ---------------------------------------------------------------------------

def _kron_pack(v: Sequence[int], nbytes: int) -> int:
    pos = b"".join((x if x > 0 else 0).to_bytes(nbytes, "little") for x in v)
    neg = b"".join((-x if x < 0 else 0).to_bytes(nbytes, "little") for x in v)
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def _kron_unpack(value: int, count: int, nbytes: int) -> list[int]:
    width = 8 * nbytes
    half = 1 << (width - 1)
    full = 1 << width
    raw = value.to_bytes((count + 1) * nbytes, "little", signed=True)
    out = []
    carry = 0
    for i in range(count):
        d = int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") + carry
        if d >= half:
            d -= full
            carry = 1
        else:
            carry = 0
        out.append(d)
    return out


def _imul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    if min(len(a), len(b)) <= 6:
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return out
    ma = max(abs(x) for x in a)
    mb = max(abs(x) for x in b)
    bits = ma.bit_length() + mb.bit_length() + min(len(a), len(b)).bit_length() + 2
    nbytes = -(-bits // 8)
    prod = _kron_pack(a, nbytes) * _kron_pack(b, nbytes)
    return _kron_unpack(prod, len(a) + len(b) - 1, nbytes)


def _istrip(v: list[int]) -> list[int]:
    while v and v[-1] == 0:
        v.pop()
    return v


def _icontent(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = math.gcd(g, x)
        if g == 1:
            break
    return g


def _iprimitive(v: Sequence[int]) -> list[int]:
    g = _icontent(v)
    if g == 0:
        return []
    if v[-1] < 0:
        g = -g
    return [x // g for x in v]


def _iprem(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """Pseudo-remainder ``lc(b)^(deg a - deg b + 1) * a mod b`` over Z."""
    db = len(b) - 1
    lb = b[-1]
    r = list(a)
    for i in range(len(a) - 1, db - 1, -1):
        c = r[i]
        r = [x * lb for x in r[:i]]
        if c:
            base = i - db
            for j in range(db):
                r[base + j] -= c * b[j]
    return _istrip(r)


# ---------------------------------------------------------------------------
# Poly
# ---------------------------------------------------------------------------

class Poly:
    """Immutable dense polynomial with rational coefficients (ascending)."""

    __slots__ = ("_c", "_iform")

    def __init__(self, coeffs: Iterable = ()):
        if isinstance(coeffs, Poly):
            self._c = coeffs._c
        else:
            c = [_frac(x) for x in coeffs]
            while c and c[-1] == 0:
                c.pop()
            self._c = tuple(c)
        self._iform = None

    @classmethod
    def _raw(cls, c: tuple) -> "Poly":
        obj = cls.__new__(cls)
        obj._c = c
        obj._iform = None
        return obj

    @classmethod
    def from_ints(cls, nums: Sequence[int], den: int = 1) -> "Poly":
        nums = _istrip(list(nums))
        if den == 1:
            obj = cls._raw(tuple(Fraction(x) for x in nums))
            obj._iform = (tuple(nums), 1)
            return obj
        return cls._raw(tuple(Fraction(x, den) for x in nums))

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def monomial(cls, deg: int, c=1) -> "Poly":
        return cls([0] * deg + [c])

    @classmethod
    def z(cls) -> "Poly":
        return cls([0, 1])

    # --- basic accessors ---------------------------------------------------
    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._c

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self._c) - 1

    @property
    def lc(self) -> Fraction:
        return self._c[-1] if self._c else Fraction(0)

    def is_zero(self) -> bool:
        return not self._c

    def is_constant(self) -> bool:
        return len(self._c) <= 1

    def coeff(self, k: int) -> Fraction:
        return self._c[k] if 0 <= k < len(self._c) else Fraction(0)

    def int_form(self) -> tuple[tuple[int, ...], int]:
        """``(nums, den)`` with ``self == Poly(nums) / den`` and ``den`` the lcm
        of the coefficient denominators."""
        if self._iform is None:
            den = 1
            for x in self._c:
                den = _lcm(den, x.denominator)
            nums = tuple(x.numerator * (den // x.denominator) for x in self._c)
            self._iform = (nums, den)
        return self._iform

    def primitive_int(self) -> list[int]:
        """Primitive integer polynomial with the same roots, positive leading
        coefficient."""
        return _iprimitive(self.int_form()[0])

    def is_integral(self) -> bool:
        return self.int_form()[1] == 1

    # --- arithmetic --------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self._c == other._c
        if isinstance(other, (int, Rational)):
            return self._c == Poly([other])._c
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._c)

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly([other])

    def __add__(self, other) -> "Poly":
        if not isinstance(other, (Poly, int, Rational)):
            return NotImplemented
        o = self._coerce(other)._c
        a = self._c
        if len(a) < len(o):
            a, o = o, a
        c = list(a)
        for i, x in enumerate(o):
            c[i] += x
        return Poly(c)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw(tuple(-x for x in self._c))

    def __sub__(self, other) -> "Poly":
        if not isinstance(other, (Poly, int, Rational)):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def scale(self, c) -> "Poly":
        c = _frac(c)
        if c == 0:
            return Poly()
        return Poly._raw(tuple(x * c for x in self._c))

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Rational)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        if not self._c or not other._c:
            return Poly()
        na, da = self.int_form()
        nb, db = other.int_form()
        return Poly.from_ints(_imul(na, nb), da * db)

    def __rmul__(self, other) -> "Poly":
        if isinstance(other, (int, Rational)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other) -> "Poly":
        if isinstance(other, (int, Rational)):
            return self.scale(Fraction(1) / _frac(other))
        return NotImplemented

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise ValueError("negative exponent")
        result = Poly([1])
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __call__(self, x):
        if isinstance(x, Poly):
            return compose(self, x)
        acc = 0 * x if not isinstance(x, (int, Rational)) else Fraction(0)
        for c in reversed(self._c):
            acc = acc * x + c
        return acc

    def eval_complex(self, x: complex) -> complex:
        acc = 0j
        for c in reversed(self._c):
            acc = acc * x + float(c)
        return acc

    def derivative(self) -> "Poly":
        return Poly._raw(tuple(i * c for i, c in enumerate(self._c) if i > 0))

    def monic(self) -> "Poly":
        if not self._c:
            return self
        inv = 1 / self.lc
        return Poly._raw(tuple(x * inv for x in self._c))

    def __divmod__(self, other: "Poly"):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        db = other.degree
        if self.degree < db:
            return Poly(), self
        nb, _ = other.int_form()
        na, da = self.int_form()
        if nb[-1] in (1, -1) and da == 1 and other.is_integral():
            q, r = _idivmod_monic(na, nb)
            return Poly.from_ints(q), Poly.from_ints(r)
        r = list(self._c)
        b = other._c
        inv = 1 / b[-1]
        q = [Fraction(0)] * (self.degree - db + 1)
        for i in range(self.degree - db, -1, -1):
            c = r[i + db] * inv
            q[i] = c
            if c:
                for j in range(db):
                    r[i + j] -= c * b[j]
        return Poly(q), Poly(r[:db])

    def __floordiv__(self, other) -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Poly":
        return divmod(self, other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("division is not exact")
        return q

    def shift(self, s) -> "Poly":
        """Return ``self(z + s)``."""
        return compose(self, Poly([s, 1]))

    def mod_p(self, p: int) -> np.ndarray:
        """Coefficients reduced modulo ``p`` (ascending, int64); the caller
        guarantees ``p`` divides no denominator."""
        nums, den = self.int_form()
        inv = pow(den % p, -1, p) if den != 1 else 1
        return np.array([x * inv % p for x in nums], dtype=np.int64)

    # --- display -----------------------------------------------------------
    def to_str(self, var: str = "z") -> str:
        if not self._c:
            return "0"
        parts = []
        for k in range(len(self._c) - 1, -1, -1):
            c = self._c[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if k == 0:
                body = str(a)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                body = mono if a == 1 else f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self) -> str:
        return self.to_str()

    def __repr__(self) -> str:
        return f"Poly({self.to_str()!r})"


def _idivmod_monic(a: Sequence[int], b: Sequence[int]) -> tuple[list[int], list[int]]:
    db = len(b) - 1
    lb = b[-1]
    r = list(a)
    q = [0] * (len(a) - db)
    for i in range(len(a) - 1 - db, -1, -1):
        c = r[i + db] * lb  # lb is +-1, so this is c / lb
        q[i] = c
        if c:
            for j in range(db):
                r[i + j] -= c * b[j]
    return q, r[:db]


# ---------------------------------------------------------------------------
# composition
# ---------------------------------------------------------------------------

def compose(f: Poly, g: Poly) -> Poly:
    """``f(g(z))``."""
    if f.is_zero():
        return Poly()
    if g.is_constant():
        return Poly([f(g.coeff(0))])
    nf, df = f.int_form()
    ng, dg = g.int_form()
    n = len(nf) - 1
    acc = [nf[n]]
    dpow = 1
    for i in range(n - 1, -1, -1):
        dpow *= dg
        acc = _imul(acc, ng)
        acc[0] += nf[i] * dpow
    return Poly.from_ints(acc, df * dg ** n)


def iterate(f: Poly, n: int) -> Poly:
    """``f`` composed with itself ``n`` times; ``n = 0`` gives ``z``."""
    if n < 0:
        raise ValueError("iterate count must be nonnegative")
    out = Poly.z()
    for _ in range(n):
        out = compose(f, out)
    return out


# ---------------------------------------------------------------------------
# gcd, resultant, squarefree
# ---------------------------------------------------------------------------

def _prs_gcd(a: list[int], b: list[int]) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _iprem(a, b)
        a, b = b, _iprimitive(r)
    return _iprimitive(a)


def _int_trial_divides(h: list[int], a: Sequence[int]) -> bool:
    # exact divisibility over Q of a by h
    pa, ph = Poly.from_ints(a), Poly.from_ints(h)
    return divmod(pa, ph)[1].is_zero()


def _modular_gcd(a: list[int], b: list[int]) -> list[int]:
    """Monic-gcd recovery by CRT over word-size primes, verified by trial division."""
    lc_g = math.gcd(a[-1], b[-1])
    bits = 31
    best_deg = None
    x: list[int] = []
    m = 1
    stable = 0
    for p in _mod.primes_below(bits):
        if a[-1] % p == 0 or b[-1] % p == 0:
            continue
        ap = np.array([c % p for c in a], dtype=np.int64)
        bp = np.array([c % p for c in b], dtype=np.int64)
        gp = _mod.poly_gcd_p(ap, bp, p)
        dg = len(gp) - 1
        if dg == 0:
            return [1]
        if best_deg is None or dg < best_deg:
            best_deg, x, m, stable = dg, [0] * (dg + 1), 1, 0
        elif dg > best_deg:
            continue  # unlucky prime
        img = (gp * (lc_g % p)) % p
        x, same = _mod.crt_pair(x, m, img, p)
        m *= p
        stable = stable + 1 if same else 0
        if stable >= 2:
            h = _iprimitive(x)
            if _int_trial_divides(h, a) and _int_trial_divides(h, b):
                return h
            stable = 0
    raise ArithmeticError("modular gcd did not converge")


def gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor (zero only when both inputs are zero)."""
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.degree == 0 or b.degree == 0:
        return Poly([1])
    ai, bi = a.primitive_int(), b.primitive_int()
    size = max(max(abs(x) for x in ai).bit_length(), max(abs(x) for x in bi).bit_length())
    if max(a.degree, b.degree) <= 10 and size <= 64:
        g = _prs_gcd(ai, bi)
    else:
        g = _modular_gcd(ai, bi)
    return Poly.from_ints(g).monic()


def lcm(a: Poly, b: Poly) -> Poly:
    if a.is_zero() or b.is_zero():
        return Poly()
    return (a * b).exact_div(gcd(a, b)).monic()


def resultant(a: Poly, b: Poly) -> Fraction:
    """``Res(a, b) = lc(a)^deg(b) * prod_{a(r)=0} b(r)``, via the subresultant PRS
    on the integer forms."""
    if a.is_zero() and b.is_zero():
        raise ValueError("undefined resultant")
    if a.is_zero() or b.is_zero():
        other = b if a.is_zero() else a
        return Fraction(1) if other.degree == 0 else Fraction(0)
    na, da = a.int_form()
    nb, db = b.int_form()
    r = _iresultant(list(na), list(nb))
    return Fraction(r, da ** b.degree * db ** a.degree)


def _iresultant(a: list[int], b: list[int]) -> int:
    dega, degb = len(a) - 1, len(b) - 1
    if dega == 0:
        return a[0] ** degb
    if degb == 0:
        return b[0] ** dega
    ca, cb = _icontent(a), _icontent(b)
    if a[-1] < 0:
        ca = -ca
    if b[-1] < 0:
        cb = -cb
    a = [x // ca for x in a]
    b = [x // cb for x in b]
    t = ca ** degb * cb ** dega
    s = 1
    if dega < degb:
        a, b = b, a
        if dega % 2 and degb % 2:
            s = -1
    g = h = 1
    while True:
        da_, db_ = len(a) - 1, len(b) - 1
        delta = da_ - db_
        if da_ % 2 and db_ % 2:
            s = -s
        r = _iprem(a, b)
        a = b
        div = g * h ** delta
        b = [x // div for x in r]
        g = a[-1]
        h = g ** delta // h ** (delta - 1) if delta else h
        if not b:
            return 0
        if len(b) - 1 == 0:
            break
    dega = len(a) - 1
    lb = b[-1]
    h = lb ** dega // h ** (dega - 1) if dega >= 1 else h
    return s * t * h


@dataclass(frozen=True)
class SquarefreeDecomposition:
    """``unit * prod(f**m for f, m in factors)``; factors monic, squarefree and
    pairwise coprime."""

    unit: Fraction
    factors: tuple[tuple[Poly, int], ...]

    def expand(self) -> Poly:
        out = Poly([self.unit])
        for f, m in self.factors:
            out = out * f ** m
        return out

    def radical(self) -> Poly:
        out = Poly([1])
        for f, _ in self.factors:
            out = out * f
        return out


def squarefree(a: Poly) -> SquarefreeDecomposition:
    """Yun's squarefree decomposition over Q."""
    if a.is_zero():
        raise ValueError("squarefree decomposition of the zero polynomial")
    unit = a.lc
    f = a.monic()
    if f.degree == 0:
        return SquarefreeDecomposition(unit, ())
    df = f.derivative()
    c = gcd(f, df)
    w = f.exact_div(c)
    y = df.exact_div(c)
    z = y - w.derivative()
    out = []
    i = 1
    while w.degree > 0:
        g = gcd(w, z)
        w = w.exact_div(g)
        y = z.exact_div(g)
        z = y - w.derivative()
        if g.degree > 0:
            out.append((g, i))
        i += 1
    return SquarefreeDecomposition(unit, tuple(out))


def radical(a: Poly) -> Poly:
    """Monic squarefree part."""
    if a.is_zero():
        raise ValueError("radical of the zero polynomial")
    if a.degree <= 0:
        return Poly([1])
    return a.monic().exact_div(gcd(a, a.derivative()))


def radical_divides(a: Poly, b: Poly) -> bool:
    """True iff every root of ``a`` is a root of ``b``."""
    if a.is_zero() or b.is_zero():
        raise ValueError("radical_divides needs nonzero inputs")
    ra = radical(a)
    return gcd(ra, b).degree == ra.degree


def _sort_key(p: Poly):
    return (p.degree, p.coeffs)


def coprime_basis(polys: Sequence[Poly]) -> list[Poly]:
    """Pairwise-coprime monic refinement of a list of squarefree polynomials."""
    items: list[Poly] = []
    for p in polys:
        if p.is_zero():
            raise ValueError("coprime_basis needs nonzero inputs")
        if p.degree > 0:
            m = p.monic()
            if m not in items:
                items.append(m)
    changed = True
    while changed:
        changed = False
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                u, v = items[i], items[j]
                g = gcd(u, v)
                if g.degree > 0:
                    rest = [x for k, x in enumerate(items) if k not in (i, j)]
                    for piece in (u.exact_div(g), g, v.exact_div(g)):
                        if piece.degree > 0:
                            piece = piece.monic()
                            if piece not in rest:
                                rest.append(piece)
                    items = rest
                    changed = True
                    break
            if changed:
                break
    return sorted(items, key=_sort_key)


def interpolate(xs: Sequence, ys: Sequence) -> Poly:
    """Exact Newton interpolation through ``(xs[i], ys[i])``."""
    xs = [_frac(x) for x in xs]
    coef = [_frac(y) for y in ys]
    n = len(xs)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    out = Poly([coef[-1]])
    for i in range(n - 2, -1, -1):
        out = out * Poly([-xs[i], 1]) + coef[i]
    return out

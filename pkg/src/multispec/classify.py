"""Critical values, exceptional maps, generalized Lattes forms and genera.

Everything is decided over Q without factoring.  Root sets are carried by
squarefree polynomials and split by gcds whenever different roots behave
differently, so each reported class is uniform across its roots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .dynmaps import AffineMap, MapLike, PolyMap, as_map, chebyshev, conjugacy_test
from .exactalg import (
    Poly,
    charpoly_mod,
    coprime_basis,
    gcd,
    interpolate,
    radical,
    resultant,
    squarefree,
)

__all__ = [
    "ExceptionalVerdict",
    "GLForm",
    "RamificationClass",
    "RamificationPortrait",
    "critical_value_polynomial",
    "distinct_critical_values_count",
    "is_presimple",
    "is_exceptional",
    "generalized_lattes_form",
    "gl_cubic_family",
    "ramification_portrait",
    "genus_hFH",
    "genus_hF",
]


def critical_value_polynomial(F: MapLike) -> Poly:
    """``Res_z(F'(z), F(z) - t)`` as a polynomial in ``t``.

    It has degree ``deg F - 1`` in ``t``, so that many plus one exact
    evaluations determine it.
    """
    F = as_map(F).require_dynamic()
    p = F.poly
    dp = p.derivative()
    m = p.degree
    ts = list(range(m))
    vals = [resultant(dp, p - t) for t in ts]
    return interpolate(ts, vals)


def distinct_critical_values_count(F: MapLike) -> int:
    return radical(critical_value_polynomial(F)).degree


def is_presimple(F: MapLike) -> bool:
    """Exactly ``deg F - 1`` distinct finite critical values."""
    F = as_map(F)
    return distinct_critical_values_count(F) == F.degree - 1


@dataclass(frozen=True)
class ExceptionalVerdict:
    value: bool
    tag: str
    witness: AffineMap | None = None

    def __bool__(self) -> bool:
        return self.value


def is_exceptional(F: MapLike) -> ExceptionalVerdict:
    """Affine conjugacy to ``z^d``, ``T_d`` or ``-T_d``."""
    F = as_map(F).require_dynamic()
    d = F.degree
    T = chebyshev(d).poly
    for tag, model in (("power", Poly.monomial(d)), ("chebyshev_plus", T), ("chebyshev_minus", -T)):
        w = conjugacy_test(model, F)
        if w is not None:
            return ExceptionalVerdict(True, tag, w)
    return ExceptionalVerdict(False, "none")


@dataclass(frozen=True)
class GLForm:
    """``F`` is conjugate to ``z^r R(z)^n`` by a translation moving ``witness``
    to 0.

    ``witness`` is a rational fixed point, or a squarefree polynomial all of
    whose roots are witnesses.  Exceptional maps carry ``source ==
    "exceptional"`` and no ``(r, n)``.
    """

    r: int | None
    n: int | None
    witness: Fraction | Poly | None
    source: str = "fixed point"


def _root_order_split(u: Poly, V: Poly, cap: int) -> list[tuple[Poly, int]]:
    """Split squarefree ``u`` by the order of vanishing of ``V`` at its roots
    (orders above ``cap`` are lumped together)."""
    out = []
    cur = u
    D = V
    level = 0
    while cur.degree > 0 and level <= cap:
        g = gcd(cur, D % cur) if not D.is_zero() else cur
        keep = cur.exact_div(g)
        if keep.degree > 0:
            out.append((keep, level))
        cur = g
        D = D.derivative()
        level += 1
    if cur.degree > 0:
        out.append((cur, level))
    return out


def _refine(pieces: list[tuple[Poly, tuple]], V: Poly, cap: int) -> list[tuple[Poly, tuple]]:
    out = []
    for u, tag in pieces:
        for v, o in _root_order_split(u, V, cap):
            out.append((v, tag + (o,)))
    return out


def _critical_data(p: Poly) -> list[tuple[int, Poly, Poly]]:
    """``(e, q_e, V_e)``: ``q_e`` the squarefree factor of ``F'`` of
    multiplicity ``e`` and ``V_e(t) = prod (t - F(x))`` over its roots."""
    out = []
    for q, e in squarefree(p.derivative()).factors:
        out.append((e, q, charpoly_mod(p % q, q)))
    return out


def generalized_lattes_form(F: MapLike) -> GLForm | None:
    """Search the fixed points of ``F`` for a generalized Lattes normal form.

    At a fixed point ``p`` the fibre ``F^{-1}(p)`` consists of ``p`` with local
    degree ``r = 1 + ord_p F'`` and other points of local degree ``e + 1``
    (critical, multiplicity ``e`` in ``F'``) or 1.  The map has the form
    ``z^r R(z)^n`` around ``p`` iff every other fibre point is critical and
    ``n >= 2`` divides all their local degrees with ``gcd(r, n) = 1``.  All
    quantities are read off exactly from gcds, splitting the fixed-point
    polynomial where its roots disagree.
    """
    F = as_map(F).require_dynamic()
    if is_exceptional(F):
        return GLForm(None, None, None, "exceptional")
    p = F.poly
    m = p.degree
    crit = _critical_data(p)
    fixed = radical(p - Poly.z())
    pieces: list[tuple[Poly, tuple]] = [(fixed, ())]
    for e, q, V in crit:
        pieces = _refine(pieces, q, 1)       # is p itself a root of q_e ?
        pieces = _refine(pieces, V, m)       # how many roots of q_e map to p
    best = None
    for u, tag in pieces:
        r = 1
        used = 0
        g = 0
        for i, (e, _, _) in enumerate(crit):
            at_p, count = tag[2 * i], tag[2 * i + 1]
            if at_p:
                r += e
                count -= 1
            if count > 0:
                used += count * (e + 1)
                g = math.gcd(g, e + 1)
        if used + r != m or g == 0:
            continue
        n = max((x for x in range(2, g + 1) if g % x == 0 and math.gcd(x, r) == 1), default=None)
        if n is None:
            continue
        witness = -u.coeff(0) if u.degree == 1 else u
        cand = GLForm(r, n, witness)
        if u.degree == 1:
            return cand
        best = best or cand
    return best


def gl_cubic_family(lam, b, mu) -> PolyMap:
    """Cubic conjugate to ``w (a w + b)^2``; ``-mu/lam`` is the fixed point
    sent to ``w = 0``."""
    lam, b, mu = Fraction(lam), Fraction(b), Fraction(mu)
    if lam == 0 or b == 0:
        raise ValueError("lambda and b must be nonzero")
    return PolyMap(Poly([
        mu / lam * (mu * mu + 2 * mu * b + b * b - 1),
        (mu + b) * (3 * mu + b),
        lam * (3 * mu + 2 * b),
        lam * lam,
    ]))


# ---------------------------------------------------------------------------
# ramification portraits and genus formulas
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RamificationClass:
    """A set of critical values (roots of ``values``) sharing one profile per map."""

    values: Poly
    profiles: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return self.values.degree


@dataclass(frozen=True)
class RamificationPortrait:
    degrees: tuple[int, ...]
    classes: tuple[RamificationClass, ...]

    @property
    def value_count(self) -> int:
        return sum(c.size for c in self.classes)

    def check(self) -> bool:
        """Riemann-Hurwitz over C: ``sum (part - 1)`` weighted by class size
        is ``deg - 1`` for each map; each profile sums to the degree."""
        for i, m in enumerate(self.degrees):
            total = 0
            for c in self.classes:
                prof = c.profiles[i]
                if sum(prof) != m:
                    return False
                total += c.size * sum(x - 1 for x in prof)
            if total != m - 1:
                return False
        return True


def _value_data(p: Poly) -> list[tuple[int, Poly]]:
    """``(local degree, V)`` with ``V`` the critical-value polynomial of the
    critical points of that local degree."""
    if p.degree < 2:
        return []
    return [(e + 1, V) for e, _, V in _critical_data(p)]


def ramification_portrait(*maps: MapLike) -> RamificationPortrait:
    """Joint ramification portrait of one or two maps.

    Critical values are grouped into classes on which every map has the same
    fibre profile: the class polynomials are a coprime basis of the
    squarefree parts of all critical-value polynomials, so the multiplicity of
    a class in each of them is constant over its roots.
    """
    if not 1 <= len(maps) <= 2:
        raise ValueError("ramification_portrait takes one or two maps")
    ms = [as_map(f) for f in maps]
    if all(f.degree < 2 for f in ms):
        raise ValueError("at least one map must have degree >= 2")
    data = [_value_data(f.poly) for f in ms]
    pieces = []
    for vd in data:
        for _, V in vd:
            pieces.extend(q for q, _ in squarefree(V).factors)
    basis = coprime_basis(pieces)
    classes = []
    for c in basis:
        profiles = []
        for f, vd in zip(ms, data):
            parts = []
            for local, V in vd:
                mult = 0
                W = V
                while True:
                    q, rem = divmod(W, c)
                    if not rem.is_zero():
                        break
                    mult += 1
                    W = q
                parts.extend([local] * mult)
            parts.extend([1] * (f.degree - sum(parts)))
            profiles.append(tuple(sorted(parts, reverse=True)))
        classes.append(RamificationClass(c, tuple(profiles)))
    portrait = RamificationPortrait(tuple(f.degree for f in ms), tuple(classes))
    if not portrait.check():
        raise ArithmeticError("ambiguous value class, refine factorization")
    return portrait


def _pair_gcd_sum(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(math.gcd(x, y) for x in a for y in b)


def genus_hFH(F: MapLike, H: MapLike) -> int:
    """Genus of the curve ``F(x) = H(y)`` from the joint portrait.

    ``2 - 2g = gcd(m, n) - (r - 1) m n + sum over critical values of
    sum gcd(a_i, b_j)``, with ``a``, ``b`` the fibre profiles of ``F`` and
    ``H`` and ``r`` the number of distinct critical values.  The value is
    returned as computed, also for reducible curves where it is not a genus.
    """
    F, H = as_map(F), as_map(H)
    m, n = F.degree, H.degree
    if m < 2 and n < 2:
        r, gsum = 0, 0
    else:
        portrait = ramification_portrait(F, H)
        r = portrait.value_count
        gsum = sum(c.size * _pair_gcd_sum(*c.profiles) for c in portrait.classes)
    chi = math.gcd(m, n) - (r - 1) * m * n + gsum
    if chi % 2:
        raise ArithmeticError("odd Euler characteristic; portrait inconsistent")
    return (2 - chi) // 2


def genus_hF(F: MapLike) -> int:
    """Genus of ``(F(x) - F(y)) / (x - y) = 0``:
    ``4 - 2g = m - (r - 1) m^2 + sum over critical values of sum gcd(a_i, a_j)``."""
    F = as_map(F).require_dynamic()
    m = F.degree
    portrait = ramification_portrait(F)
    r = portrait.value_count
    gsum = sum(c.size * _pair_gcd_sum(c.profiles[0], c.profiles[0]) for c in portrait.classes)
    chi = m - (r - 1) * m * m + gsum
    if chi % 2:
        raise ArithmeticError("odd Euler characteristic; portrait inconsistent")
    return (4 - chi) // 2

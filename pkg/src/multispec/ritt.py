"""Ritt moves ``z^r R(z^k)  <->  z^r R(z)^k`` and their spectra.

The two maps are semiconjugate by ``z^k``.  On levels ``n`` with
``gcd(r^n - 1, k) = 1`` the semiconjugacy matches fixed points one-to-one
with equal multipliers, so the level-``n`` spectra agree; those levels form
an arithmetic progression, which :func:`verify_progression` checks end to end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .dynmaps import PolyMap
from .exactalg import Poly, compose, iterate
from .spectrum import LevelTooLarge, _level_equal, size_cap

__all__ = [
    "RittPair",
    "ProgressionParams",
    "LevelCheck",
    "ProgressionReport",
    "ProgressionFailure",
    "build_ritt_pair",
    "normalize_pair",
    "progression_params",
    "good_level",
    "semiconjugacy_check",
    "multiplier_congruence_check",
    "verify_progression",
]


@dataclass(frozen=True)
class RittPair:
    r: int
    k: int
    R: Poly
    P: PolyMap
    Q: PolyMap

    @property
    def degree(self) -> int:
        return self.P.degree


def _pair_maps(r: int, k: int, R: Poly) -> tuple[Poly, Poly]:
    zr = Poly.monomial(r)
    return zr * compose(R, Poly.monomial(k)), zr * R ** k


def build_ritt_pair(r: int, k: int, R: Poly) -> RittPair:
    """``P = z^r R(z^k)`` and ``Q = z^r R(z)^k``; checks ``Q(z^k) == P(z)^k``."""
    if r < 1 or k < 1:
        raise ValueError("r and k must be positive integers")
    R = Poly(R)
    if R.is_zero():
        raise ValueError("R must be nonzero")
    if r + k * R.degree < 2:
        raise ValueError("the pair must have degree at least 2")
    P, Q = _pair_maps(r, k, R)
    pair = RittPair(r, k, R, PolyMap(P), PolyMap(Q))
    if not semiconjugacy_check(pair, 1):
        raise ArithmeticError("semiconjugacy failed at construction")  # pragma: no cover
    return pair


def normalize_pair(pair: RittPair) -> RittPair:
    """Move the power of ``z`` dividing ``R`` into ``r``; ``P`` and ``Q`` are unchanged."""
    c = pair.R.coeffs
    l = next(i for i, x in enumerate(c) if x != 0)
    if l == 0:
        return pair
    R0 = Poly(c[l:])
    return RittPair(pair.r + l * pair.k, pair.k, R0, pair.P, pair.Q)


def _mult_order(r: int, k: int) -> int | None:
    if math.gcd(r, k) != 1:
        return None
    if k == 1:
        return 1
    x, n = r % k, 1
    while x != 1:
        x = x * r % k
        n += 1
    return n


@dataclass(frozen=True)
class ProgressionParams:
    """Levels ``c1 + N*d`` (``N >= 0``) on which the two spectra must agree.

    ``c1`` is the first ``n`` with ``gcd(r (r^n - 1), k) = 1`` and ``d`` the
    smallest multiple of the order of ``r`` mod ``k`` exceeding ``c1``; the
    multiple only matters for ``k = 1``, where both are otherwise 1.
    ``valid`` is false when no such ``n`` exists or ``r < 2``.
    """

    c1: int | None
    d: int | None
    valid: bool
    reason: str = ""

    def levels(self, terms: int) -> list[int]:
        if not self.valid:
            return []
        return [self.c1 + i * self.d for i in range(terms)]


def progression_params(r: int, k: int) -> ProgressionParams:
    if k < 1:
        raise ValueError("k must be positive")
    if r < 2:
        return ProgressionParams(None, None, False, "r < 2")
    order = _mult_order(r, k)
    if order is None:
        return ProgressionParams(None, None, False, f"gcd(r, k) = {math.gcd(r, k)} > 1")
    for n in range(1, order + 1):
        if math.gcd(pow(r, n) - 1, k) == 1:
            d = order * (n // order + 1)
            return ProgressionParams(n, d, True)
    return ProgressionParams(None, order, False, "gcd(r^n - 1, k) > 1 for every n")


def good_level(r: int, k: int, n: int) -> bool:
    """``gcd(r^n - 1, k) == 1``."""
    return math.gcd(pow(r, n) - 1, k) == 1


def semiconjugacy_check(pair: RittPair, n: int) -> bool:
    """``Q^n(z^k) == (P^n(z))^k`` as polynomials."""
    zk = Poly.monomial(pair.k)
    Pn, Qn = iterate(pair.P.poly, n), iterate(pair.Q.poly, n)
    return compose(Qn, zk) == Pn ** pair.k


def multiplier_congruence_check(pair: RittPair, n: int) -> bool:
    """``((Q^n)'(z^k) - (P^n)'(z)) z^(k-1) == 0  mod  P^n(z) - z``.

    Differentiating the semiconjugacy gives
    ``(Q^n)'(z^k) z^(k-1) = P^n(z)^(k-1) (P^n)'(z)``, and ``P^n(z) = z`` on
    the fixed points; the congruence is that identity reduced modulo them.
    """
    k = pair.k
    Pn, Qn = iterate(pair.P.poly, n), iterate(pair.Q.poly, n)
    A = Pn - Poly.z()
    lhs = (compose(Qn.derivative(), Poly.monomial(k)) - Pn.derivative()) * Poly.monomial(k - 1)
    return (lhs % A).is_zero()


@dataclass(frozen=True)
class LevelCheck:
    level: int
    equal: bool
    good: bool
    in_progression: bool


@dataclass(frozen=True)
class ProgressionReport:
    pair: RittPair
    params: ProgressionParams
    checks: tuple[LevelCheck, ...]
    truncated_at: int | None
    status: str

    @property
    def progression_levels_equal(self) -> bool:
        return all(c.equal for c in self.checks if c.in_progression)


class ProgressionFailure(AssertionError):
    """Spectra differ at a level where the semiconjugacy forces equality."""

    def __init__(self, report: ProgressionReport, level: int):
        super().__init__(f"spectra differ at good level {level}")
        self.report = report
        self.level = level


def verify_progression(pair: RittPair, terms: int, *, cap: int | None = None) -> ProgressionReport:
    """Compute both spectra at every level up to ``c1 + (terms-1) d``.

    Levels beyond the size cap are not computed; the first such level is
    reported in ``truncated_at``.  An inequality at a level with
    ``gcd(r^n - 1, k) = 1`` raises :class:`ProgressionFailure`.
    """
    if terms < 1:
        raise ValueError("terms must be positive")
    npair = normalize_pair(pair)
    params = progression_params(npair.r, npair.k)
    cap = size_cap() if cap is None else cap
    if params.valid:
        targets = params.levels(terms)
        top = targets[-1]
    else:
        targets = []
        top = terms
    checks = []
    truncated = None
    coprime = math.gcd(npair.r, npair.k) == 1 and npair.r >= 2
    for n in range(1, top + 1):
        if pair.degree ** n > cap:
            truncated = n
            break
        eq = _level_equal(pair.P, pair.Q, n, cap)
        good = coprime and good_level(npair.r, npair.k, n)
        checks.append(LevelCheck(n, eq, good, n in targets))
        if good and not eq:
            report = ProgressionReport(pair, params, tuple(checks), None, "failure")
            raise ProgressionFailure(report, n)
    if not params.valid:
        status = "hypothesis not satisfied"
    elif truncated is not None:
        status = "verified (truncated)"
    else:
        status = "verified"
    return ProgressionReport(pair, params, tuple(checks), truncated, status)

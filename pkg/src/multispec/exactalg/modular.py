"""Prime-field kernels and reconstruction helpers.

Everything here works on plain Python ints or on numpy ``int64`` arrays whose
entries lie in ``[0, p)``.  Prime sizes are chosen so that a length-``n`` dot
product of reduced residues cannot overflow ``int64``.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

__all__ = [
    "is_prime",
    "prime_bits_for",
    "primes_below",
    "poly_rem_p",
    "poly_gcd_p",
    "power_sums_p",
    "coeffs_from_power_sums_p",
    "mult_matrix_p",
    "power_traces_p",
    "charpoly_projection_p",
    "charpoly_hessenberg_p",
    "symmetric_mod",
    "rational_reconstruct",
    "rational_reconstruct_mq",
    "crt_pair",
]

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for ``n < 3.3e24``."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_bits_for(n: int) -> int:
    """Largest prime bit size whose ``n``-term dot products fit in int64."""
    return max(8, min(31, (62 - max(1, n + 1).bit_length()) // 2))


@lru_cache(maxsize=None)
def _prime_table(bits: int, count: int) -> tuple[int, ...]:
    out = []
    q = (1 << bits) - 1
    while len(out) < count and q > 2:
        if is_prime(q):
            out.append(q)
        q -= 2
    return tuple(out)


def primes_below(bits: int, skip: int = 0) -> Iterator[int]:
    """Yield primes below ``2**bits`` in decreasing order, deterministically."""
    chunk = 256
    start = skip
    while True:
        table = _prime_table(bits, start + chunk)
        if len(table) <= start:
            raise ArithmeticError(f"ran out of {bits}-bit primes")
        for q in table[start:]:
            yield q
        start = len(table)
        chunk *= 2


# ---------------------------------------------------------------------------
# polynomials over F_p (ascending int64 arrays)
# ---------------------------------------------------------------------------

def _strip(a: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(a)
    return a[: nz[-1] + 1] if nz.size else a[:0]


def poly_rem_p(a: np.ndarray, m: np.ndarray, p: int) -> np.ndarray:
    """Remainder of ``a`` modulo the *monic* polynomial ``m`` over F_p."""
    dm = len(m) - 1
    r = np.array(a, dtype=np.int64) % p
    if len(r) <= dm:
        return r
    tail = m[:dm]
    for i in range(len(r) - 1, dm - 1, -1):
        c = r[i]
        if c:
            seg = r[i - dm:i]
            seg -= (c * tail) % p
            seg %= p
        r[i] = 0
    return r[:dm]


def _monic_p(a: np.ndarray, p: int) -> np.ndarray:
    inv = pow(int(a[-1]), -1, p)
    return (a * inv) % p


def poly_gcd_p(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Monic gcd over F_p; the zero polynomial is returned as an empty array."""
    a = _strip(np.asarray(a, dtype=np.int64) % p)
    b = _strip(np.asarray(b, dtype=np.int64) % p)
    while b.size:
        b = _monic_p(b, p)
        a, b = b, _strip(poly_rem_p(a, b, p))
    return _monic_p(a, p) if a.size else a


# ---------------------------------------------------------------------------
# characteristic polynomial of multiplication in F_p[z]/(a)
# ---------------------------------------------------------------------------

def power_sums_p(a: np.ndarray, count: int, p: int) -> np.ndarray:
    """Power sums ``s_0..s_{count-1}`` of the roots of monic ``a`` over F_p."""
    n = len(a) - 1
    if count > n + 1:
        raise ValueError("power sums beyond the degree are not needed here")
    rev = a[::-1].copy()  # rev[i] = coefficient of z^{n-i}
    s = np.zeros(count, dtype=np.int64)
    s[0] = n % p
    for k in range(1, count):
        acc = k * int(rev[k])
        if k > 1:
            acc += int(np.dot(rev[1:k], s[k - 1:0:-1]))
        s[k] = (-acc) % p
    return s


def coeffs_from_power_sums_p(ps: np.ndarray, n: int, p: int) -> np.ndarray:
    """Monic degree-``n`` polynomial (ascending) with power sums ``ps[1..n]``.

    Requires ``p > n`` for the divisions by ``k``.
    """
    c = np.zeros(n + 1, dtype=np.int64)  # c[k] = coefficient of w^{n-k}
    c[0] = 1
    for k in range(1, n + 1):
        acc = int(ps[k])
        if k > 1:
            acc += int(np.dot(c[1:k], ps[k - 1:0:-1]))
        c[k] = (-acc * pow(k, -1, p)) % p
    return c[::-1].copy()


def mult_matrix_p(b: np.ndarray, a: np.ndarray, p: int) -> np.ndarray:
    """Transposed multiplication matrix: row ``k`` holds ``b*z^k mod a``."""
    n = len(a) - 1
    tail = a[:n]
    out = np.empty((n, n), dtype=np.int64)
    col = np.zeros(n, dtype=np.int64)
    col[: len(b)] = b
    for k in range(n):
        out[k] = col
        top = col[-1]
        nxt = np.empty_like(col)
        nxt[0] = 0
        nxt[1:] = col[:-1]
        if top:
            nxt -= (top * tail) % p
            nxt %= p
        col = nxt
    return out


def power_traces_p(b: np.ndarray, a: np.ndarray, p: int, count: int) -> np.ndarray:
    """``Tr(b^j)`` on F_p[z]/(a) for ``j = 0..count-1``.

    ``a`` is monic of degree ``n``, ``b`` reduced modulo ``a``.  Baby steps
    give the coefficient vectors of ``b^i`` for ``i < baby``; giant steps push
    the trace functional (the power sums of the roots of ``a``) through
    multiplication by ``b^baby``; every trace is then one dot product.
    """
    n = len(a) - 1
    s = power_sums_p(a, n, p)
    mt = np.ascontiguousarray(mult_matrix_p(b, a, p).T)  # column k = b*z^k mod a
    baby = math.isqrt(count - 1) + 1
    giant = -(-count // baby)
    v = np.zeros((baby, n), dtype=np.int64)
    v[0, 0] = 1
    for i in range(1, baby):
        v[i] = (mt @ v[i - 1]) % p
    if giant > 1:
        g = (mt @ v[baby - 1]) % p
        gt = mult_matrix_p(g, a, p)  # row k = g*z^k mod a: transposed action
    r = np.empty((giant, n), dtype=np.int64)
    r[0] = s
    for t in range(1, giant):
        r[t] = (gt @ r[t - 1]) % p
    traces = (r @ v.T) % p
    return traces.reshape(-1)[:count]


def charpoly_projection_p(b: np.ndarray, a: np.ndarray, p: int, root: int = 1) -> np.ndarray:
    """Charpoly of multiplication by ``b`` on F_p[z]/(a) via power projection.

    Traces are turned into coefficients by Newton's identities, so ``p`` must
    exceed ``n``.  With ``root > 1`` the characteristic polynomial is assumed
    to be a perfect ``root``-th power and that root (degree ``n/root``) is
    returned; only ``n/root + 1`` traces are needed then.
    """
    n = len(a) - 1
    if n == 0:
        return np.ones(1, dtype=np.int64)
    k = n // root
    ps = power_traces_p(b, a, p, k + 1)
    if root > 1:
        ps = ps * pow(root, -1, p) % p
    return coeffs_from_power_sums_p(ps, k, p)


def charpoly_hessenberg_p(b: np.ndarray, a: np.ndarray, p: int) -> np.ndarray:
    """Same contract as :func:`charpoly_projection_p`, by Hessenberg reduction.

    O(n^3); used as an independent cross-check and for tiny primes.
    """
    n = len(a) - 1
    if n == 0:
        return np.ones(1, dtype=np.int64)
    h = mult_matrix_p(b, a, p).T.copy()
    for m in range(1, n - 1):
        piv = m + int(np.flatnonzero(h[m:, m - 1])[0]) if np.any(h[m:, m - 1]) else -1
        if piv < 0:
            continue
        if piv != m:
            h[[piv, m], :] = h[[m, piv], :]
            h[:, [piv, m]] = h[:, [m, piv]]
        inv = pow(int(h[m, m - 1]), -1, p)
        u = (h[m + 1:, m - 1] * inv) % p
        if not np.any(u):
            continue
        # row_i -= u_i * row_m ; col_m += sum_i u_i * col_i
        h[m + 1:, :] = (h[m + 1:, :] - (u[:, None] * h[m, :][None, :]) % p) % p
        h[:, m] = (h[:, m] + (h[:, m + 1:] @ u) % p) % p
    # charpoly recurrence on the upper Hessenberg matrix
    polys = [np.ones(1, dtype=np.int64)]
    for k in range(1, n + 1):
        prev = polys[-1]
        cur = np.zeros(k + 1, dtype=np.int64)
        cur[1:] = prev
        cur[: k] = (cur[: k] - h[k - 1, k - 1] * prev) % p
        t = 1
        for i in range(k - 1, 0, -1):
            t = t * int(h[i, i - 1]) % p
            if t == 0:
                break
            coef = t * int(h[i - 1, k - 1]) % p
            if coef:
                q = polys[i - 1]
                cur[: len(q)] = (cur[: len(q)] - coef * q) % p
        polys.append(cur)
    return polys[-1]


# ---------------------------------------------------------------------------
# reconstruction
# ---------------------------------------------------------------------------

def symmetric_mod(x: int, m: int) -> int:
    x %= m
    return x - m if 2 * x > m else x


def rational_reconstruct(u: int, m: int) -> tuple[int, int] | None:
    """Wang's rational reconstruction: ``n/d == u (mod m)`` with
    ``|n|, d <= sqrt(m/2)``; ``None`` when no such pair exists."""
    u %= m
    bound = math.isqrt(m // 2)
    r0, r1 = m, u
    t0, t1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound:
        return None
    if t1 < 0:
        r1, t1 = -r1, -t1
    if math.gcd(r1, t1) != 1:
        return None
    return r1, t1


def rational_reconstruct_mq(u: int, m: int, margin_bits: int = 32) -> tuple[int, int] | None:
    """Maximal-quotient rational reconstruction.

    Among the remainder pairs ``(r_i, t_i)`` of the extended Euclidean
    algorithm on ``(m, u)`` it picks the one followed by the largest quotient
    ``q``; then ``|r_i t_i| < m / q``.  The pair is accepted when ``q`` exceeds
    ``2**margin_bits``.  Unlike the balanced version this succeeds as soon as
    ``log2 |n| + log2 d`` is about ``log2 m - margin_bits``, whatever the
    split between numerator and denominator.
    """
    u %= m
    if u == 0:
        return 0, 1
    r0, r1 = m, u
    t0, t1 = 0, 1
    best_q, best = 0, None
    while r1:
        q = r0 // r1
        if q > best_q:
            best_q, best = q, (r1, t1)
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if best is None or best_q.bit_length() <= margin_bits:
        return None
    num, den = best
    if den < 0:
        num, den = -num, -den
    if math.gcd(num, den) != 1:
        return None
    return num, den


def crt_pair(x: Sequence[int], m: int, r: np.ndarray, p: int) -> tuple[list[int], bool]:
    """Garner step on a vector: lift symmetric residues ``x`` mod ``m`` by
    residues ``r`` mod ``p``.  Returns the new vector and whether it was
    unchanged (every correction term zero)."""
    minv = pow(m % p, -1, p)
    out = []
    same = True
    half = p // 2
    for xi, ri in zip(x, r.tolist()):
        t = (ri - xi) * minv % p
        if t:
            same = False
            if t > half:
                t -= p
            xi = xi + m * t
        out.append(xi)
    return out, same

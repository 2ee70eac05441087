"""Exact emptiness formation probabilities on the free-fermion line.

At ``Delta = 0`` the probability F(N; r, s) admits an s-fold contour-integral
representation around the origin,

    F = (-1)^(s(s+1)/2) / (s! (1+tau)^(s(N-s)) (2 pi i)^s)
        * contour integral of  prod_{j<k} (w_j - w_k)^2
          * prod_j (1 + tau w_j)^(N-s) (w_j - 1)^(-s) w_j^(-r)  dw_1..dw_s.

Reduction to a Hankel determinant (Andreief / Heine identity): expanding the
squared Vandermonde as a product of two determinants and integrating term by
term turns the s-fold integral into s! times the determinant of the moment
matrix, so

    F = (-1)^(s(s+1)/2) (1+tau)^(-s(N-s)) det[ M_(j+k-2) ]_{1<=j,k<=s},

where the moments are single residues at the origin,

    M_n = coefficient of w^(r-1-n) in (1 + tau w)^(N-s) (w - 1)^(-s)
        = (-1)^s sum_m  C(N-s, r-1-n-m) tau^(r-1-n-m) C(m+s-1, s-1).

In particular M_n = 0 for n >= r (no residue), which reproduces the
combinatorial vanishing F = 0 for s > r.  The overall sign is pinned by the
N = 2 case, where the determinant is the single moment M_0 = -1 at tau = 1
and F(2; 1, 1) = 1/2.

The companion contour identity, the same integral taken instead around the
simple pole at w = 1 (with reversed orientation), equals exactly 1 for all
1 <= r, s <= N.  Shifting the variable by 1 turns it into a Hankel
determinant whose entries vanish above degree 0, i.e. for j + k > s + 1,
leaving only the antidiagonal product of (1+tau)^(N-s) factors; the value 1
follows.  Both reductions are evaluated here in exact rational arithmetic
(arbitrary-precision integers, fraction-free Bareiss elimination), since the
alternating-sign Hankel determinants cancel catastrophically in floats.

``tau`` must be rational in this module; irrational slopes are served by the
asymptotics and the Monte Carlo sampler.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, lcm


def as_tau(tau) -> Fraction:
    """Coerce a tau value (int, Fraction, or "p/q" string) to an exact
    positive rational."""
    t = Fraction(tau)
    if t <= 0:
        raise ValueError(f"tau must be positive, got {tau!r}")
    return t


def generating_closed(n: int, tau, z) -> Fraction:
    """Closed form of the boundary generating polynomial at Delta = 0:
    ((1 + tau z) / (1 + tau))^(n-1), exact for rational arguments."""
    if n < 1:
        raise ValueError(f"lattice size must be >= 1, got {n}")
    t = as_tau(tau)
    zq = Fraction(z)
    return ((1 + t * zq) / (1 + t)) ** (n - 1)


def generating_coeffs_exact(n: int, tau) -> list:
    """Exact expansion coefficients of ``generating_closed``: entry k is
    C(n-1, k) tau^k / (1+tau)^(n-1) for k = 0..n-1."""
    if n < 1:
        raise ValueError(f"lattice size must be >= 1, got {n}")
    t = as_tau(tau)
    denom = (1 + t) ** (n - 1)
    return [comb(n - 1, k) * t**k / denom for k in range(n)]


def _moment(n: int, big_n: int, r: int, s: int, tau: Fraction) -> Fraction:
    p = r - 1 - n
    if p < 0:
        return Fraction(0)
    total = Fraction(0)
    for m in range(max(0, p - (big_n - s)), p + 1):
        total += comb(big_n - s, p - m) * tau ** (p - m) * comb(m + s - 1, s - 1)
    return -total if s % 2 else total


def moment(n: int, big_n: int, r: int, s: int, tau) -> Fraction:
    """Moment M_n: residue at the origin of w^n (1+tau w)^(N-s) (w-1)^(-s) w^(-r).

    Exact rational; zero whenever n >= r.  Indices follow the determinant
    contract: 0 <= n <= 2s-2 and 1 <= s <= r <= N.
    """
    t = as_tau(tau)
    if not 1 <= s <= r <= big_n:
        raise ValueError(f"indices must satisfy 1 <= s <= r <= N, got s={s} r={r} N={big_n}")
    if not 0 <= n <= 2 * s - 2:
        raise ValueError(f"moment order {n} out of range 0..{2 * s - 2}")
    return _moment(n, big_n, r, s, t)


def moment_sequence(big_n: int, r: int, s: int, tau) -> list:
    """Moments M_0 .. M_(2s-2) feeding the s x s Hankel matrix."""
    t = as_tau(tau)
    if not (1 <= s <= big_n and 0 <= r <= big_n):
        raise ValueError(f"indices out of range: N={big_n} r={r} s={s}")
    return [_moment(n, big_n, r, s, t) for n in range(2 * s - 1)]


def _det_bareiss(m: list) -> int:
    """Determinant of an integer matrix by fraction-free Bareiss elimination.

    All intermediate divisions are exact, so the result is the exact integer
    determinant regardless of entry size."""
    n = len(m)
    if n == 0:
        return 1
    m = [row[:] for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if pivot is None:
                return 0
            m[k], m[pivot] = m[pivot], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def det_fraction_free(rows: list) -> Fraction:
    """Exact determinant of a matrix of rationals.

    Entries are scaled to integers by the least common denominator and the
    integer determinant is computed by Bareiss elimination."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    denom = 1
    for row in rows:
        for entry in row:
            denom = lcm(denom, Fraction(entry).denominator)
    scaled = [[int(Fraction(entry) * denom) for entry in row] for row in rows]
    return Fraction(_det_bareiss(scaled), denom**n)


def efp_exact(big_n: int, r: int, s: int, tau) -> Fraction:
    """Exact F(N; r, s) on the free-fermion line as a rational number.

    Evaluates the signed Hankel determinant of moments described in the
    module docstring.  Boundary conventions r = 0 -> 0 and r = N -> 1 come
    out of the same formula.  The result always lies in [0, 1].
    """
    if not 1 <= s <= big_n:
        raise ValueError(f"depth {s} out of range 1..{big_n}")
    if not 0 <= r <= big_n:
        raise ValueError(f"cut index {r} out of range 0..{big_n}")
    t = as_tau(tau)
    moments = [_moment(n, big_n, r, s, t) for n in range(2 * s - 1)]
    rows = [[moments[j + k] for k in range(s)] for j in range(s)]
    det = det_fraction_free(rows)
    sign = -1 if (s * (s + 1) // 2) % 2 else 1
    return sign * det / (1 + t) ** (s * (big_n - s))


def _identity_coeffs(big_n: int, r: int, s: int, tau: Fraction) -> list:
    """Power-series coefficients c_0..c_(s-1) of (1+tau+tau*w)^(N-s) (1+w)^(-r)."""
    coeffs = []
    for p in range(s):
        total = Fraction(0)
        for m in range(0, p + 1):
            k = p - m
            if k > big_n - s:
                continue
            term = comb(big_n - s, k) * (1 + tau) ** (big_n - s - k) * tau**k
            term *= (-1) ** m * comb(m + r - 1, r - 1)
            total += term
        coeffs.append(total)
    return coeffs


def identity_matrix(big_n: int, r: int, s: int, tau) -> list:
    """The s x s Hankel matrix of the contour identity.

    Entry (j, k), both 1-based, is the coefficient of w^(s+1-j-k) in
    (1+tau+tau*w)^(N-s) (1+w)^(-r); entries with j + k > s + 1 vanish and
    the antidiagonal j + k = s + 1 is constant (1+tau)^(N-s).
    """
    t = as_tau(tau)
    if not (1 <= r <= big_n and 1 <= s <= big_n):
        raise ValueError(f"indices out of range: N={big_n} r={r} s={s}")
    coeffs = _identity_coeffs(big_n, r, s, t)
    zero = Fraction(0)
    return [
        [coeffs[s + 1 - j - k] if 0 <= s + 1 - j - k < s else zero for k in range(1, s + 1)]
        for j in range(1, s + 1)
    ]


def contour_identity(big_n: int, r: int, s: int, tau) -> Fraction:
    """The normalized determinant of ``identity_matrix``; exactly 1.

    Computed from scratch (signed determinant over the antidiagonal-struct
    matrix divided by (1+tau)^(s(N-s))) rather than assumed, so it doubles
    as a self-test of the moment extraction.
    """
    t = as_tau(tau)
    rows = identity_matrix(big_n, r, s, t)
    det = det_fraction_free(rows)
    sign = -1 if (s * (s - 1) // 2) % 2 else 1
    return sign * det / (1 + t) ** (s * (big_n - s))

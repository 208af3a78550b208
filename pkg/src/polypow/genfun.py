"""Exact power-series prefixes of the closed generating functions.

Both closed forms share one shape: a polynomial head plus lacunary sums of
z^(c*p^i), all over a product of cyclotomic-style factors.  Division by
(1-z) is a prefix sum and by (1-z^s) a stride-s prefix sum, so a degree-N
prefix costs O(N) exact integer additions.

The residual checker measures how far a series is from satisfying the
self-similarity equation r(z) g(z) = r(z^p) g(z^p) + b(z) with polynomial b.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fpoly import check_prime


class InconclusiveError(RuntimeError):
    """Raised when a series prefix is too short to certify any residual bound."""


def _divide_one_minus_z_power(coeffs: list[int], stride: int) -> None:
    """In place: multiply the series by 1/(1 - z^stride)."""
    for n in range(stride, len(coeffs)):
        coeffs[n] += coeffs[n - stride]


def series_1px(p: int, n_terms: int) -> list[int]:
    """First n_terms+1 line-complexity values of 1+x mod p, from the closed form.

    Numerator: 1 + (p-3)z + (p^2-3p+3)z^2
               + z^2 * (p-1)^2/2 * sum_i (p z^(p^i) - 2(p-1) z^(2p^i) + (p-2) z^(3p^i)),
    over (1-z)^3.  Stated for p >= 3; the p=2 specialization is exact as well
    (it telescopes to (1 - z + z^2 + z^3)/(1-z)^3, matching n^2 - n + 2).
    """
    check_prime(p)
    if n_terms < 0:
        raise ValueError("series length must be >= 0")
    num = [0] * (n_terms + 1)
    head = (1, p - 3, p * p - 3 * p + 3)
    for e, c in enumerate(head):
        if e <= n_terms:
            num[e] += c
    half_sq = (p - 1) * (p - 1)  # applied as /2 below; all weights stay integral
    weights = ((1, half_sq * p // 2), (2, -half_sq * (p - 1)), (3, half_sq * (p - 2) // 2))
    for mult, w in weights:
        q = 1
        while 2 + mult * q <= n_terms:
            num[2 + mult * q] += w
            q *= p
    for _ in range(3):
        _divide_one_minus_z_power(num, 1)
    return num


def series_1xx2(n_terms: int) -> list[int]:
    """First n_terms+1 line-complexity values of 1+x+x^2 mod 2.

    Numerator: 1 + 2z^3 + 2z^5 - z^6 + z^3 * sum_i (z^(2^i) - z^(3*2^i)),
    over (1-z^2)(1-z)^2.  The z^3 prefactor on the sum is required to
    reproduce the sequence (cross-checked against the inferred recursion);
    without it the expansion already fails at the second coefficient.
    """
    if n_terms < 0:
        raise ValueError("series length must be >= 0")
    num = [0] * (n_terms + 1)
    for e, c in ((0, 1), (3, 2), (5, 2), (6, -1)):
        if e <= n_terms:
            num[e] += c
    for mult, w in ((1, 1), (3, -1)):
        q = 1
        while 3 + mult * q <= n_terms:
            num[3 + mult * q] += w
            q *= 2
    _divide_one_minus_z_power(num, 1)
    _divide_one_minus_z_power(num, 1)
    _divide_one_minus_z_power(num, 2)
    return num


@dataclass(frozen=True)
class ResidualReport:
    """Residual polynomial prefix of r(z)g(z) - r(z^p)g(z^p) and its certification.

    residual holds coefficients up to the last nonzero one; degree_bound is
    that degree when it is small enough to certify (at most the top of the
    prefix's self-similar half), else None.
    """

    residual: tuple[int, ...]
    degree_bound: int | None
    checked_to: int


def functional_residual(series: list[int], r_poly: list[int], p: int) -> ResidualReport:
    """Exact residual of the base-p self-similarity equation on a series prefix.

    A degree bound D is certified only when every computed coefficient above D
    vanishes and D <= N//p, i.e. the vanishing has been observed across a full
    p-fold window.  A prefix shorter than p*(deg r + 1) cannot certify
    anything and raises InconclusiveError.
    """
    check_prime(p)
    if not r_poly or r_poly[-1] == 0:
        raise ValueError("r(z) must have a nonzero leading coefficient")
    n = len(series) - 1
    if n < p * len(r_poly):
        raise InconclusiveError(
            f"series prefix of degree {n} cannot certify a residual for deg r = {len(r_poly) - 1}")
    rs = [0] * (n + 1)
    for i, ri in enumerate(r_poly):
        if ri:
            for j in range(0, n + 1 - i):
                rs[i + j] += ri * series[j]
    b = list(rs)
    for m in range(0, n // p + 1):
        b[p * m] -= rs[m]
    last = max((i for i, v in enumerate(b) if v), default=None)
    if last is None:
        return ResidualReport((0,), 0, n)
    bound = last if last <= n // p else None
    return ResidualReport(tuple(b[:last + 1]), bound, n)


def series_to_csv(series: list[int]) -> str:
    lines = ["n,a_n"]
    lines.extend(f"{i},{v}" for i, v in enumerate(series))
    return "\n".join(lines) + "\n"

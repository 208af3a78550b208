"""Dense polynomials over Z/p and the coefficient rows of their powers.

Coefficients are stored low degree first; the zero polynomial is the empty
tuple.  Row k is the digit string of f(x)^k reduced mod p, again low degree
first.  Counting helpers tally how often each nonzero residue occurs in a row
and cumulatively over rows 0..n-1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

# Sentinel accepted by the counting functions in place of a residue.
TOTAL = "total"

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for anything below 3.3e24."""
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
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


def check_prime(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"modulus must be prime, got {p!r}")
    return p


@dataclass(frozen=True)
class FpPoly:
    """Polynomial over Z/p, coefficients low degree first, trailing zeros trimmed."""

    p: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        check_prime(self.p)
        if self.coeffs and (self.coeffs[-1] == 0 or any(
                not (0 <= c < self.p) for c in self.coeffs)):
            raise ValueError("coefficients must be reduced and trimmed; use FpPoly.make")

    @staticmethod
    def make(p: int, coeffs) -> "FpPoly":
        check_prime(p)
        cs = [int(c) % p for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        return FpPoly(p, tuple(cs))

    @staticmethod
    def one(p: int) -> "FpPoly":
        return FpPoly.make(p, [1])

    @property
    def degree(self) -> int:
        # degree of the zero polynomial is reported as -1
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "FpPoly") -> "FpPoly":
        self._check_same_field(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        for i, c in enumerate(other.coeffs):
            a[i] = (a[i] + c) % self.p
        return FpPoly.make(self.p, a)

    def __mul__(self, other: "FpPoly") -> "FpPoly":
        self._check_same_field(other)
        if self.is_zero() or other.is_zero():
            return FpPoly(self.p, ())
        return FpPoly.make(self.p, _convolve_mod(self.coeffs, other.coeffs, self.p))

    def inflate(self, c: int) -> "FpPoly":
        """Substitute x -> x^c."""
        if c < 1:
            raise ValueError("inflation factor must be >= 1")
        if self.is_zero() or c == 1:
            return self
        out = [0] * (self.degree * c + 1)
        for i, a in enumerate(self.coeffs):
            out[i * c] = a
        return FpPoly(self.p, tuple(out))

    def reverse(self) -> "FpPoly":
        """x^deg * f(1/x); the zero polynomial reverses to itself."""
        return FpPoly.make(self.p, self.coeffs[::-1])

    def _check_same_field(self, other: "FpPoly"):
        if self.p != other.p:
            raise ValueError("mixed moduli")


def _convolve_mod(a, b, p: int) -> list[int]:
    """Exact convolution mod p; numpy int64 is safe while (p-1)^2*len fits."""
    if min(len(a), len(b)) * (p - 1) ** 2 < 2**62:
        out = np.convolve(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        return (out % p).tolist()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def poly_pow(f: FpPoly, k: int) -> FpPoly:
    """f^k mod p, using f(x)^(mp^e) = (f^m)(x^(p^e)) to shortcut p-divisible powers."""
    if k < 0:
        raise ValueError("exponent must be >= 0")
    if k == 0:
        return FpPoly.one(f.p)
    if f.is_zero():
        return f
    e = 0
    while k % f.p == 0:
        k //= f.p
        e += 1
    g = _pow_binary(f, k)
    for _ in range(e):
        g = g.inflate(f.p)
    return g


def _pow_binary(f: FpPoly, k: int) -> FpPoly:
    result = FpPoly.one(f.p)
    base = f
    while k:
        if k & 1:
            result = result * base
        k >>= 1
        if k:
            base = base * base
    return result


@dataclass(frozen=True)
class Row:
    """Coefficient digit string of f^k, low degree first."""

    k: int
    digits: tuple[int, ...]

    @property
    def text(self) -> str:
        return digits_to_text(self.digits)


def digits_to_text(digits) -> str:
    digits = list(digits)
    # single characters are unambiguous for p <= 10; beyond that use commas
    if all(d < 10 for d in digits):
        return "".join(str(d) for d in digits)
    return ",".join(str(d) for d in digits)


def row_digits(f: FpPoly, k: int) -> Row:
    """Digit string of row k.  Row 0 is "1"."""
    g = poly_pow(f, k)
    return Row(k, g.coeffs if g.coeffs else (0,))


def iter_rows(f: FpPoly, n: int):
    """Yield rows 0..n-1 of f as numpy uint8 arrays (incremental convolution)."""
    if f.is_zero():
        raise ValueError("rows of the zero polynomial are not defined")
    base = np.asarray(f.coeffs, dtype=np.int64)
    row = np.asarray([1], dtype=np.int64)
    for _ in range(n):
        yield row.astype(np.uint8)
        row = np.convolve(row, base) % f.p


def count_coeff(f: FpPoly, k: int, alpha) -> int:
    """Occurrences of residue alpha in row k, or of any nonzero digit for TOTAL."""
    row = poly_pow(f, k).coeffs
    if alpha == TOTAL:
        return sum(1 for d in row if d)
    _check_residue(f.p, alpha)
    return sum(1 for d in row if d == alpha)


def cumulative_count(f: FpPoly, n: int, alpha) -> int:
    """Sum of count_coeff over rows 0..n-1."""
    if n < 0:
        raise ValueError("row count must be >= 0")
    if alpha != TOTAL:
        _check_residue(f.p, alpha)
    total = 0
    for row in iter_rows(f, n):
        if alpha == TOTAL:
            total += int(np.count_nonzero(row))
        else:
            total += int(np.count_nonzero(row == alpha))
    return total


def _check_residue(p: int, alpha):
    if not isinstance(alpha, int) or not (1 <= alpha < p):
        raise ValueError(f"residue must be in 1..{p - 1} or TOTAL, got {alpha!r}")


_TERM_RE = None  # compiled lazily so the module imports without the re cost


def parse_poly(text: str, p: int) -> FpPoly:
    """Parse either a comma list of coefficients or a symbolic sum of terms.

    "1,1,0,1" reads low degree first; "1+x+x^3" means the same polynomial.
    Coefficients are reduced mod p, so "3+x" with p=2 parses as 1+x.  A token
    that fits neither form raises ValueError naming it.
    """
    global _TERM_RE
    import re

    if _TERM_RE is None:
        _TERM_RE = re.compile(r"^(\d+)?\s*\*?\s*(x(?:\^(\d+))?)?$")
    check_prime(p)
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial text")
    if "," in text:
        coeffs = []
        for tok in text.split(","):
            tok = tok.strip()
            try:
                coeffs.append(int(tok) % p)
            except ValueError:
                raise ValueError(f"bad coefficient {tok!r}") from None
        return FpPoly.make(p, coeffs)
    coeffs = {}
    for i, tok in enumerate(text.replace("-", "+-").split("+")):
        tok = tok.strip()
        if not tok:
            if i == 0:  # leading minus leaves an empty first chunk
                continue
            raise ValueError("empty term (doubled sign?)")
        neg = tok.startswith("-")
        m = _TERM_RE.match(tok[1:].strip() if neg else tok)
        if not m or (m.group(1) is None and m.group(2) is None):
            raise ValueError(f"bad term {tok!r}")
        c = int(m.group(1)) if m.group(1) is not None else 1
        if neg:
            c = -c
        e = 0 if m.group(2) is None else int(m.group(3) or 1)
        coeffs[e] = (coeffs.get(e, 0) + c) % p
    out = [0] * (max(coeffs) + 1 if coeffs else 0)
    for e, c in coeffs.items():
        out[e] = c
    return FpPoly.make(p, out)


def format_poly(f: FpPoly) -> str:
    """Symbolic rendering, low degree first; inverse of parse_poly up to layout."""
    if f.is_zero():
        return "0"
    terms = []
    for e, c in enumerate(f.coeffs):
        if c == 0:
            continue
        if e == 0:
            terms.append(str(c))
        else:
            head = "" if c == 1 else str(c)
            terms.append(f"{head}x" if e == 1 else f"{head}x^{e}")
    return "+".join(terms)


@dataclass(frozen=True)
class CountTable:
    """Per-row and cumulative nonzero-digit counts for rows 0..n-1.

    q[(k, alpha)] counts residue alpha in row k, q_total[k] counts all nonzero
    digits, and r_cumulative[k] = sum of q_total over rows 0..k-1.
    """

    f: FpPoly
    n: int
    q: dict
    q_total: dict
    r_cumulative: dict

    @staticmethod
    def from_rows(f: FpPoly, n: int) -> "CountTable":
        q, q_total, r_cum = {}, {}, {}
        running = 0
        for k, row in enumerate(iter_rows(f, n)):
            r_cum[k] = running
            counts = np.bincount(row, minlength=f.p)
            for alpha in range(1, f.p):
                q[(k, alpha)] = int(counts[alpha])
            q_total[k] = int(len(row) - counts[0])
            running += q_total[k]
        r_cum[n] = running
        return CountTable(f, n, q, q_total, r_cum)

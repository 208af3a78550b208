"""Transfer matrices for the nonzero-coefficient counts of f^k mod 2.

A state is a length d+1 window of a coefficient row.  Doubling the row index
and choosing one of two child anchors gives four self-maps of the state set;
summing the two anchor choices per child parity yields matrices B0, B1 whose
total B satisfies u.B^k.v = r(2^k), the number of nonzero coefficients in rows
0..2^k-1.  The dominant growth rate lambda (so the fractal dimension log2
lambda) is the largest real root of the exact characteristic polynomial of the
trimmed matrix, isolated by rational bisection, with the minimal polynomial
recovered by integer factorization when it finishes within budget.

Polynomials that differ by the similarity moves (shifts by x^c, reversal,
substitution x -> x^c, c-th powers) share lambda, so the survey runs over
canonical representatives only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property

import numpy as np

from ._zzpoly import (
    charpoly,
    factor_int_poly,
    isolate_root,
    sign_at,
    squarefree_part,
)
from .fpoly import TOTAL, CountTable, FpPoly, format_poly

PENDING = "PENDING"


class SpectralMismatchError(ArithmeticError):
    """Exact eigenvalue and empirical count growth disagree."""


@dataclass(frozen=True)
class CountMismatch:
    """Falsy record of the first count identity that failed."""

    kind: str  # "cumulative" (power index k) or "row" (row index m)
    index: int
    got: int
    want: int

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class TransferSystem:
    """Window-transfer realization of the count identity for f^k mod 2.

    states lists every nonzero window bitmask (bit j = digit a_{t+j}, so bit 0
    is the window's first digit); maps[2*eps+delta] sends each mask to its
    child window, 0 included as the absorbing zero window.  b0, b1, u, v live
    over all of states; trimmed is the sub-multiset that carries every
    supp(v) -> supp(u) path, and the trimmed_* views restrict to it.
    """

    f: FpPoly
    window: int
    states: tuple[int, ...]
    maps: tuple[tuple[int, ...], ...]
    b0: tuple[tuple[int, ...], ...]
    b1: tuple[tuple[int, ...], ...]
    u: tuple[int, ...]
    v: tuple[int, ...]
    trimmed: tuple[int, ...]

    @cached_property
    def b(self) -> tuple[tuple[int, ...], ...]:
        return tuple(
            tuple(x + y for x, y in zip(r0, r1)) for r0, r1 in zip(self.b0, self.b1)
        )

    def state_string(self, mask: int) -> str:
        return "".join("1" if mask >> j & 1 else "0" for j in range(self.window))

    def _restrict(self, matrix):
        idx = [self.states.index(s) for s in self.trimmed]
        return tuple(tuple(matrix[i][j] for j in idx) for i in idx)

    @cached_property
    def trimmed_b0(self):
        return self._restrict(self.b0)

    @cached_property
    def trimmed_b1(self):
        return self._restrict(self.b1)

    @cached_property
    def trimmed_b(self):
        return self._restrict(self.b)

    @cached_property
    def trimmed_u(self) -> tuple[int, ...]:
        return tuple(1 if s & 1 else 0 for s in self.trimmed)

    @cached_property
    def trimmed_v(self) -> tuple[int, ...]:
        return tuple(self.v[self.states.index(s)] for s in self.trimmed)


def build_transfer(f: FpPoly) -> TransferSystem:
    """Construct the four window maps and the count matrices for f mod 2."""
    if f.p != 2:
        raise ValueError(f"transfer construction requires p=2, got p={f.p}")
    if f.is_zero() or f.coeffs[0] != 1:
        raise ValueError("constant term must be 1 (canonicalize first)")
    d = f.degree
    lwin = d + 1
    coeff_rows = ((1,), f.coeffs)  # child row parity 2m+eps picks row of 1 or of f
    size = 1 << lwin
    maps = []
    for eps in (0, 1):
        for delta in (0, 1):
            # Contribution of parent digit j to the child window, as a bitmask
            # over child positions r; XOR of single-digit masks by linearity.
            digit_masks = []
            for j in range(lwin):
                m = 0
                for r in range(lwin):
                    idx = d - 1 + delta + r - 2 * j
                    if 0 <= idx < len(coeff_rows[eps]) and coeff_rows[eps][idx]:
                        m |= 1 << r
                digit_masks.append(m)
            table = [0] * size
            for s in range(1, size):
                low = (s & -s).bit_length() - 1
                table[s] = table[s & (s - 1)] ^ digit_masks[low]
            maps.append(tuple(table))

    n = size - 1
    b0 = [[0] * n for _ in range(n)]
    b1 = [[0] * n for _ in range(n)]
    for s in range(1, size):
        for half, pair in ((b0, maps[0:2]), (b1, maps[2:4])):
            for table in pair:
                t = table[s]
                if t:
                    half[t - 1][s - 1] += 1

    u = tuple(1 if s & 1 else 0 for s in range(1, size))
    v = tuple(1 if s & (s - 1) == 0 else 0 for s in range(1, size))

    forward = {s for s in range(1, size) if s & (s - 1) == 0}
    queue = list(forward)
    while queue:
        s = queue.pop()
        for table in maps:
            t = table[s]
            if t and t not in forward:
                forward.add(t)
                queue.append(t)
    parents = {s: set() for s in range(1, size)}
    for s in range(1, size):
        for table in maps:
            t = table[s]
            if t:
                parents[t].add(s)
    backward = {s for s in range(1, size) if s & 1}
    queue = list(backward)
    while queue:
        s = queue.pop()
        for q in parents[s]:
            if q not in backward:
                backward.add(q)
                queue.append(q)

    return TransferSystem(
        f=f,
        window=lwin,
        states=tuple(range(1, size)),
        maps=tuple(maps),
        b0=tuple(tuple(row) for row in b0),
        b1=tuple(tuple(row) for row in b1),
        u=u,
        v=v,
        trimmed=tuple(sorted(forward & backward)),
    )


def verify_counts(sys: TransferSystem, depth: int):
    """Check the count identities against brute-force row expansion.

    Returns True when u.B^k.v matches the cumulative nonzero count r(2^k) for
    all k <= depth and the per-row digit products match every row count q(m)
    for m < 2^depth; otherwise returns a falsy CountMismatch for the first
    failure.
    """
    table = CountTable.from_rows(sys.f, 1 << depth)
    nt = len(sys.trimmed)
    bt = np.array(sys.trimmed_b, dtype=np.int64)
    b_eps = (
        np.array(sys.trimmed_b0, dtype=np.int64),
        np.array(sys.trimmed_b1, dtype=np.int64),
    )
    ut = np.array(sys.trimmed_u, dtype=np.int64)
    vt = np.array(sys.trimmed_v, dtype=np.int64)

    w = vt
    for k in range(depth + 1):
        got = int(ut @ w)
        want = table.r_cumulative[1 << k]
        if got != want:
            return CountMismatch("cumulative", k, got, want)
        w = bt @ w

    vecs = np.empty((1 << depth, nt), dtype=np.int64)
    vecs[0] = vt
    for m in range(1, 1 << depth):
        vecs[m] = b_eps[m & 1] @ vecs[m >> 1]
    for m in range(1 << depth):
        got = int(ut @ vecs[m])
        want = table.q_total[m]
        if got != want:
            return CountMismatch("row", m, got, want)
    return True


@dataclass(frozen=True)
class SpectralResult:
    """Dominant eigenvalue data of a trimmed transfer matrix."""

    lam: float
    interval: tuple[Fraction, Fraction]
    charpoly: tuple[int, ...]
    dimension: float
    minpoly: object = PENDING
    degree: object = PENDING


def _counts_through(sys: TransferSystem, k_max: int) -> list[int]:
    # exact bigint iteration; numpy would overflow past k ~ 38
    bt = sys.trimmed_b
    w = list(sys.trimmed_v)
    out = [sum(a * b for a, b in zip(sys.trimmed_u, w))]
    for _ in range(k_max):
        w = [sum(r[j] * w[j] for j in range(len(w)) if w[j]) for r in bt]
        out.append(sum(a * b for a, b in zip(sys.trimmed_u, w)))
    return out


def _ratio_check(sys: TransferSystem, lam: float):
    counts = _counts_through(sys, 50)
    ratio = (counts[50] / counts[40]) ** (1 / 10)
    if abs(ratio - lam) <= 0.02 * lam:
        return
    # Reducible trimmed matrices can drag a polynomial factor along the
    # dominant growth; push the anchor deep enough to squeeze it out.
    counts = _counts_through(sys, 250)
    ratio = (counts[250] / counts[200]) ** (1 / 50)
    if abs(ratio - lam) <= 0.01 * lam:
        return
    raise SpectralMismatchError(
        f"root {lam} vs count growth {ratio} for {format_poly(sys.f)}"
    )


def perron(sys: TransferSystem) -> SpectralResult:
    """Largest real root of the exact trimmed charpoly, ratio cross-checked."""
    bt = sys.trimmed_b
    if not bt:
        raise ValueError("trimmed system is empty")
    cp = charpoly([list(row) for row in bt])
    guide = float(max(x.real for x in np.linalg.eigvals(np.array(bt, dtype=float))))
    lo, hi = isolate_root(squarefree_part(list(cp)), guide)
    lam = float((lo + hi) / 2)
    _ratio_check(sys, lam)
    return SpectralResult(
        lam=lam,
        interval=(lo, hi),
        charpoly=tuple(cp),
        dimension=math.log2(lam),
    )


def minpoly_of_lambda(res: SpectralResult, budget: float | None = 10.0) -> SpectralResult:
    """Fill minpoly/degree when integer factorization finishes within budget.

    On timeout the result is returned unchanged, degree still PENDING, with
    the isolating interval retained.
    """
    sf = squarefree_part(list(res.charpoly))
    factors = factor_int_poly(sf, budget)
    if factors is None:
        return res
    lo, hi = res.interval
    while True:
        if lo == hi:
            matches = [f for f in factors if sign_at(f, lo) == 0]
        else:
            matches = [
                f for f in factors if sign_at(f, lo) * sign_at(f, hi) <= 0
            ]
        if len(matches) <= 1:
            break
        # Two factors straddle the interval only if it is still too wide;
        # bisect on the squarefree part until one root remains inside.
        slo = sign_at(sf, lo)
        for _ in range(32):
            mid = (lo + hi) / 2
            sm = sign_at(sf, mid)
            if sm == 0:
                lo = hi = mid
                break
            if sm == slo:
                lo = mid
            else:
                hi = mid
    if len(matches) != 1:
        raise ArithmeticError("could not attribute the dominant root to a factor")
    m = matches[0]
    if m[-1] < 0:
        m = [-c for c in m]
    return replace(res, minpoly=tuple(m), degree=len(m) - 1)


# ---------------------------------------------------------------------------
# Similarity classes over F2


def _f2_divmod(a: int, b: int) -> tuple[int, int]:
    db = b.bit_length() - 1
    q = 0
    while a and a.bit_length() - 1 >= db:
        shift = a.bit_length() - 1 - db
        q |= 1 << shift
        a ^= b << shift
    return q, a


def _f2_mul(a: int, b: int) -> int:
    out = 0
    while b:
        low = b & -b
        out ^= a << (low.bit_length() - 1)
        b ^= low
    return out


def _f2_factor(mask: int) -> dict[int, int]:
    """Irreducible factorization of a nonzero F2 polynomial by trial division."""
    factors: dict[int, int] = {}
    cand = 2
    while cand.bit_length() <= (mask.bit_length() + 1) // 2:
        q, r = _f2_divmod(mask, cand)
        while r == 0 and mask.bit_length() > 1:
            factors[cand] = factors.get(cand, 0) + 1
            mask = q
            q, r = _f2_divmod(mask, cand)
        cand += 1
    if mask.bit_length() > 1:
        factors[mask] = factors.get(mask, 0) + 1
    return factors


def _exponents(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def _strip(mask: int) -> int:
    while mask and not mask & 1:
        mask >>= 1
    return mask


def _root(mask: int) -> int:
    factors = _f2_factor(mask)
    if not factors:
        return mask
    g = math.gcd(*factors.values()) if len(factors) > 1 else next(iter(factors.values()))
    if g <= 1:
        return mask
    out = 1
    for f, mult in factors.items():
        for _ in range(mult // g):
            out = _f2_mul(out, f)
    return out


def _desubstitute(mask: int) -> int:
    exps = [e for e in _exponents(mask) if e]
    if not exps:
        return mask
    g = math.gcd(*exps) if len(exps) > 1 else exps[0]
    if g <= 1:
        return mask
    out = 0
    for e in _exponents(mask):
        out |= 1 << (e // g)
    return out


def _reverse(mask: int) -> int:
    out = 0
    top = mask.bit_length() - 1
    for e in _exponents(mask):
        out |= 1 << (top - e)
    return out


_REDUCTIONS = (
    ("strip", _strip),
    ("root", _root),
    ("desubstitute", _desubstitute),
    ("reverse", _reverse),
)


@dataclass(frozen=True)
class SimilarityClass:
    canonical: FpPoly
    witnesses: tuple[str, ...]


def canonicalize(f: FpPoly) -> SimilarityClass:
    """Reduce f to the least fixpoint of the degree-nonincreasing moves.

    The whole reduction closure is searched; among the polynomials no move
    can shrink, the one whose sorted exponent tuple is smallest wins.  The
    witnesses name the moves along one path from f to it.
    """
    if f.p != 2:
        raise ValueError(f"canonicalization is defined for p=2, got p={f.p}")
    if f.is_zero():
        raise ValueError("cannot canonicalize the zero polynomial")
    start = 0
    for e, c in enumerate(f.coeffs):
        if c:
            start |= 1 << e
    seen = {start: ()}
    queue = [start]
    while queue:
        mask = queue.pop(0)
        for label, move in _REDUCTIONS:
            nxt = move(mask)
            if nxt != mask and nxt not in seen:
                seen[nxt] = seen[mask] + (label,)
                queue.append(nxt)
    fixpoints = [
        m for m in seen if all(move(m) == m for _, move in _REDUCTIONS[:3])
    ]
    best = min(fixpoints, key=_exponents)
    coeffs = [1 if best >> i & 1 else 0 for i in range(best.bit_length())]
    return SimilarityClass(FpPoly.make(2, coeffs), seen[best])


def enumerate_classes(max_deg: int) -> list[SimilarityClass]:
    """All canonical representatives of degree 1..max_deg, deduplicated."""
    if max_deg < 1:
        raise ValueError("max_deg must be >= 1")
    found: dict[tuple[int, ...], SimilarityClass] = {}
    for deg in range(1, max_deg + 1):
        base = (1 << deg) | 1
        for middle in range(1 << max(deg - 1, 0)):
            mask = base | (middle << 1)
            cls = canonicalize(FpPoly.make(2, [mask >> i & 1 for i in range(deg + 1)]))
            found.setdefault(cls.canonical.coeffs, SimilarityClass(cls.canonical, ()))
    return sorted(
        found.values(),
        key=lambda c: (c.canonical.degree, _exponents(sum(1 << e for e, x in enumerate(c.canonical.coeffs) if x))),
    )


# ---------------------------------------------------------------------------
# Survey


def eigen_bound(deg_f: int) -> float:
    """Upper bound 4(1 - 1/2^(k+2))^(1/(k+1)) with k = ceil(log2 deg_f)."""
    if deg_f < 1:
        raise ValueError("deg_f must be >= 1")
    k = (deg_f - 1).bit_length()
    return 4.0 * (1.0 - 1.0 / (1 << (k + 2))) ** (1.0 / (k + 1))


@dataclass(frozen=True)
class SurveyRow:
    poly: FpPoly
    result: SpectralResult
    bound: float
    bound_ok: bool


@dataclass(frozen=True)
class SurveyResult:
    rows: tuple[SurveyRow, ...]
    lambda_max: tuple[tuple[int, float], ...]  # (k, max lambda over deg <= k)
    collisions: tuple[tuple[str, str], ...]


def survey(max_deg: int, depth: int = 10, minpoly_budget: float | None = 8.0) -> SurveyResult:
    """Spectral survey of every similarity class of degree <= max_deg.

    depth > 0 re-verifies the count identities per class (and raises on any
    mismatch, since those are exact).  Factorization timeouts leave degree
    PENDING for that row.
    """
    rows = []
    for cls in enumerate_classes(max_deg):
        system = build_transfer(cls.canonical)
        if depth > 0:
            ok = verify_counts(system, depth)
            if ok is not True:
                raise SpectralMismatchError(
                    f"count identity failed for {format_poly(cls.canonical)}: {ok}"
                )
        res = minpoly_of_lambda(perron(system), budget=minpoly_budget)
        bound = eigen_bound(cls.canonical.degree)
        rows.append(
            SurveyRow(
                poly=cls.canonical,
                result=res,
                bound=bound,
                bound_ok=res.lam <= bound + 1e-9,
            )
        )
    lambda_max = []
    best = 0.0
    for k in range(1, max_deg + 1):
        for row in rows:
            if row.poly.degree <= k:
                best = max(best, row.result.lam)
        lambda_max.append((k, best))
    collisions = []
    for i, a in enumerate(rows):
        for b in rows[i + 1 :]:
            if abs(a.result.lam - b.result.lam) <= 1e-9:
                collisions.append((format_poly(a.poly), format_poly(b.poly)))
    return SurveyResult(tuple(rows), tuple(lambda_max), tuple(collisions))


def survey_tsv(result: SurveyResult) -> str:
    lines = ["poly\tlambda\tdegree\tdimension\tbound_ok"]
    for row in result.rows:
        res = row.result
        degree = res.degree if res.degree == PENDING else str(res.degree)
        lines.append(
            "\t".join(
                (
                    format_poly(row.poly),
                    f"{res.lam:.6f}",
                    degree,
                    f"{res.dimension:.6f}",
                    "true" if row.bound_ok else "false",
                )
            )
        )
    return "\n".join(lines) + "\n"

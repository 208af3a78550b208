"""Accessible blocks and line complexity of the row family of f^k mod p.

A length-n block is accessible if it occurs as a window of some row embedded
in a bi-infinite zero background.  a(n) counts distinct accessible n-blocks;
a(0) = 1 for the empty block.  Alongside the finite-horizon row scanner this
module holds an exact closure engine for a(n), the closed recursion for
f = 1 + x, a generic base-p recursion engine, and an exact solver that infers
such recursions from computed data.

The closure engine rests on f^(pm+r) = f(x^p)^m * f^r mod p: every n-window
of row pm+r is the image of a short window of row m under one of p*p local
maps (dilate by p, convolve with row r, slice at one of p phases).  The
accessible sets are the least fixpoint of those maps over the windows of the
first p rows, so counts are exact at every length with no row horizon or
stabilization heuristic.  Discoveries in a plain scan recur near rows p*k+r
for earlier discovery rows k, which makes any bounded-lookahead stopping rule
unsound; the fixpoint sidesteps that entirely.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .fpoly import FpPoly, check_prime, digits_to_text, iter_rows

SCAN_CAP = 2**14


class StabilizationError(RuntimeError):
    """Kept for API compatibility; the exact closure engine has no row cap."""


class InferenceError(RuntimeError):
    """Raised when computed data admits no unique recursion of the template."""


@dataclass(frozen=True)
class BlockSet:
    """Distinct accessible n-blocks, each a digit string."""

    n: int
    members: frozenset[str]

    def __len__(self) -> int:
        return len(self.members)

    def serialize(self) -> str:
        return "\n".join(sorted(self.members))


def _window_codes(row: np.ndarray, n: int, p: int, weights) -> np.ndarray:
    padded = np.concatenate([np.zeros(n, dtype=np.int64), row, np.zeros(n, dtype=np.int64)])
    conv = np.convolve(padded, weights)
    return conv[n - 1:len(padded)]


def _decode(code: int, n: int, p: int) -> str:
    # codes weight position u by p^u, so divmod yields digits in window order
    digits = []
    for _ in range(n):
        code, d = divmod(code, p)
        digits.append(d)
    return digits_to_text(digits)


def scan_accessible(f: FpPoly, n: int, max_row: int = SCAN_CAP) -> BlockSet:
    """All n-blocks seen in rows 0..max_row (a finite-horizon view)."""
    if n < 0:
        raise ValueError("block length must be >= 0")
    if n == 0:
        return BlockSet(0, frozenset({""}))
    p = f.p
    if p**n < 2**62:
        weights = np.asarray([p**i for i in range(n - 1, -1, -1)], dtype=np.int64)
        seen: set[int] = set()
        for row in iter_rows(f, max_row + 1):
            arr = np.asarray(row, dtype=np.int64)
            seen.update(np.unique(_window_codes(arr, n, p, weights)).tolist())
        return BlockSet(n, frozenset(_decode(c, n, p) for c in seen))
    void = np.dtype((np.void, n))
    seen_b: set[bytes] = set()
    for row in iter_rows(f, max_row + 1):
        padded = np.concatenate([np.zeros(n, np.uint8), row, np.zeros(n, np.uint8)])
        win = np.ascontiguousarray(sliding_window_view(padded, n))
        seen_b.update(np.unique(win.view(void).ravel()).tolist())
    return BlockSet(n, frozenset(digits_to_text(b) for b in seen_b))


# ------------------------------------------------------------- closure ----

class _Closure:
    """Exact accessible-block sets of one polynomial, level by level.

    Level m holds the m-blocks as raw digit bytes.  Levels at or below the
    self-referencing length lc come from the least fixpoint; each larger
    level is a single application of the maps to its source level.
    """

    def __init__(self, f: FpPoly):
        if f.is_zero():
            raise ValueError("accessible blocks of the zero polynomial are not defined")
        self.p = f.p
        self.d = len(f.coeffs) - 1
        self.rows = list(iter_rows(f, f.p))
        self.sets: dict[int, set[bytes]] = {}

    def _source_len(self, m: int) -> int:
        # longest row-m' patch a length-m window of row p*m'+r can touch
        return (m + self.d * (self.p - 1) + self.p - 2) // self.p + 1

    def _apply_maps(self, src: set[bytes], n: int) -> set[bytes]:
        if not src:
            return set()
        width = len(next(iter(src)))
        mat = np.frombuffer(b"".join(src), dtype=np.uint8)
        mat = mat.reshape(-1, width).astype(np.int64)
        span = self.p * (width - 1) + 1
        void = np.dtype((np.void, n))
        out: set[bytes] = set()
        for rr in self.rows:
            dr = len(rr) - 1
            e = np.zeros((mat.shape[0], span + dr + self.p), dtype=np.int64)
            for y, coef in enumerate(rr.tolist()):
                if coef:
                    e[:, y:y + span:self.p] += coef * mat
            e %= self.p
            e8 = e.astype(np.uint8)
            # offsets dr..dr+p-1 realize every alignment of a true window
            # while staying inside the patch the source block determines
            for o in range(dr, dr + self.p):
                win = np.ascontiguousarray(e8[:, o:o + n])
                out.update(np.unique(win.view(void).ravel()).tolist())
        return out

    def _seed(self, n: int) -> set[bytes]:
        out: set[bytes] = set()
        for rr in self.rows:
            padded = np.concatenate([np.zeros(n, np.uint8), rr, np.zeros(n, np.uint8)])
            out.update(padded[i:i + n].tobytes() for i in range(len(padded) - n + 1))
        return out

    def ensure(self, n_max: int) -> None:
        if not self.sets:
            lc, m = 1, 2
            while self._source_len(m) >= m:
                lc, m = m, m + 1
            assert self._source_len(lc) == lc
            fix = self._seed(lc)
            while True:
                new = self._apply_maps(fix, lc) - fix
                if not new:
                    break
                fix |= new
            self.sets[lc] = fix
            for short in range(1, lc):
                self.sets[short] = {b[:short] for b in fix}
        for m in range(max(self.sets) + 1, n_max + 1):
            self.sets[m] = self._apply_maps(self.sets[self._source_len(m)], m)

    def count(self, n: int) -> int:
        if n == 0:
            return 1
        self.ensure(n)
        return len(self.sets[n])


_CLOSURES: dict[tuple, _Closure] = {}


def _closure_for(f: FpPoly) -> _Closure:
    return _CLOSURES.setdefault((f.p, f.coeffs), _Closure(f))


def _exact_blocks(f: FpPoly, n: int) -> frozenset[bytes]:
    """Test hook: the exact accessible n-block set as digit bytes."""
    closure = _closure_for(f)
    closure.ensure(n)
    return frozenset(closure.sets[n]) if n else frozenset({b""})


def line_complexity(f: FpPoly, n: int) -> int:
    """a(n): exact count of accessible n-blocks via the self-similar closure."""
    if n < 0:
        raise ValueError("block length must be >= 0")
    return _closure_for(f).count(n)


def line_complexity_range(f: FpPoly, n_max: int) -> list[int]:
    """[a(0), ..., a(n_max)] computed in one shared closure pass."""
    if n_max < 0:
        raise ValueError("block length must be >= 0")
    closure = _closure_for(f)
    closure.ensure(n_max)
    return [closure.count(n) for n in range(n_max + 1)]


# ---------------------------------------------------------------- 1 + x ----

def _coeff_rows_1px(p: int) -> tuple[tuple[int, ...], ...]:
    # a(pn+k) = A_k a(n) + B_k a(n+1) + C_k a(n+2) - (2p-1)(2p-2)
    rows = []
    for k in range(p):
        a = (p - k) * (p - k + 1) // 2
        b = k * p + k - k * k + (p * p - p) // 2
        c = (k * k - k) // 2
        rows.append((a, b, c) if c else ((a, b) if b else (a,)))
    return tuple(rows)


@lru_cache(maxsize=None)
def _a_1px(p: int, n: int) -> int:
    if n <= 2:
        return (1, p, p * p)[n]
    m, k = divmod(n, p)
    const = (2 * p - 1) * (2 * p - 2)
    total = -const
    for j, c in enumerate(_coeff_rows_1px(p)[k]):
        if c:
            total += c * _a_1px(p, m + j)
    return total


def a_1px(p: int, n: int) -> int:
    """Line complexity of 1+x mod p via its closed base-p recursion."""
    check_prime(p)
    if n < 0:
        raise ValueError("index must be >= 0")
    return _a_1px(p, n)


def ab_first_mismatch(p: int, n_max: int) -> int | None:
    """First index where the difference-form recursion disagrees with a_1px."""
    check_prime(p)
    b = [1, p, p * p, (p**3 + 4 * p * p - 5 * p + 2) // 2]
    for m in range(3, n_max):
        n, k = divmod(m, p)
        b.append(b[m] + (p - k) * (b[n + 1] - b[n]) + k * (b[n + 2] - b[n + 1]))
    for i in range(min(n_max, len(b) - 1) + 1):
        if b[i] != a_1px(p, i):
            return i
    return None


def verify_ab_equivalence(p: int, n_max: int) -> bool:
    """True iff the difference form generates the same sequence as a_1px up to n_max."""
    if n_max < 4:
        raise ValueError("comparison window must reach past the starting values (>= 4)")
    return ab_first_mismatch(p, n_max) is None


# ------------------------------------------------- generic recursion spec ----

@dataclass(frozen=True)
class RecursionSpec:
    """Base-p recursion a(pn+k) = sum_j rows[k][j] * a(n+j) - constant.

    Valid for indices >= threshold; initials supply a(0..len-1) and must be
    reproduced by the recursion wherever both apply.
    """

    p: int
    rows: tuple[tuple[int, ...], ...]
    constant: int
    initials: tuple[int, ...]
    threshold: int

    def __post_init__(self):
        check_prime(self.p)
        if len(self.rows) != self.p:
            raise ValueError("need one coefficient row per residue class")
        if not (0 < self.threshold <= len(self.initials)):
            raise ValueError("threshold must be covered by initials")
        if self.threshold < max((len(r) for r in self.rows), default=0):
            raise ValueError("threshold below the recursion's forward reach")
        for k, row in enumerate(self.rows):
            m = self.threshold
            while m % self.p != k:
                m += 1
            # descent: every referenced index must sit strictly below m
            for j, c in enumerate(row):
                if c and m // self.p + j >= m:
                    raise ValueError(f"row {k} references a(n+{j}) at or above m={m}")
        for m in range(self.threshold, len(self.initials)):
            # apply the rule directly: _eval_spec would short-circuit to the
            # very initials being checked
            q, k = divmod(m, self.p)
            total = -self.constant
            for j, c in enumerate(self.rows[k]):
                if c:
                    total += c * self.initials[q + j]
            if total != self.initials[m]:
                raise ValueError(f"recursion contradicts supplied value at {m}")


@lru_cache(maxsize=None)
def _eval_spec(rec: RecursionSpec, n: int) -> int:
    if n < len(rec.initials):
        return rec.initials[n]
    m, k = divmod(n, rec.p)
    total = -rec.constant
    for j, c in enumerate(rec.rows[k]):
        if c:
            total += c * _eval_spec(rec, m + j)
    return total


def a_from_recursion(rec: RecursionSpec, n: int) -> int:
    if n < 0:
        raise ValueError("index must be >= 0")
    return _eval_spec(rec, n)


def recursion_1px(p: int) -> RecursionSpec:
    """The 1+x recursion packaged as a RecursionSpec."""
    check_prime(p)
    return RecursionSpec(
        p=p,
        rows=_coeff_rows_1px(p),
        constant=(2 * p - 1) * (2 * p - 2),
        initials=(1, p, p * p, (p**3 + 4 * p * p - 5 * p + 2) // 2),
        threshold=3,
    )


@lru_cache(maxsize=None)
def recursion_1xx2_mod2() -> RecursionSpec:
    """Inferred recursion for 1+x+x^2 mod 2 (cached; source data is a scan)."""
    return infer_recursion(FpPoly.make(2, [1, 1, 1]))


# ------------------------------------------------------------- inference ----

def _solve_exact(aug: list[list[Fraction]], n_unknowns: int):
    """Gauss-Jordan over Fraction.  Returns (kind, solution-or-None)."""
    rows = [r[:] for r in aug]
    pivots = []
    r = 0
    for c in range(n_unknowns):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][c]
        rows[r] = [v / inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    for i in range(r, len(rows)):
        if rows[i][n_unknowns] != 0:
            return "inconsistent", None
    if len(pivots) < n_unknowns:
        return "underdetermined", None
    sol = [Fraction(0)] * n_unknowns
    for i, c in enumerate(pivots):
        sol[c] = rows[i][n_unknowns]
    return "unique", sol


def _try_template(data: list[int], p: int, t0: int, shifts: int):
    n_unknowns = shifts * p + 1
    aug = []
    for m in range(t0, len(data)):
        n = m // p
        if n + shifts - 1 >= len(data):
            break
        k = m % p
        row = [Fraction(0)] * n_unknowns + [Fraction(data[m])]
        for j in range(shifts):
            row[k * shifts + j] = Fraction(data[n + j])
        row[n_unknowns - 1] = Fraction(-1)  # shared subtracted constant
        aug.append(row)
    if len(aug) < n_unknowns + 2:
        return "short", None
    return _solve_exact(aug, n_unknowns)


def infer_recursion(f: FpPoly, window: int | None = None) -> RecursionSpec:
    """Fit a(pn+k) = sum_j c_{k,j} a(n+j) - K exactly to scanned data.

    The solve runs over every scanned index at or above a trial threshold and
    is accepted only when the full overdetermined system pins a unique
    integral solution; the threshold reported is the smallest that works.
    `window` fixes how many values are scanned (default grows as needed).
    """
    p = f.p
    n_data = window if window is not None else 4 * p + max(14, 3 * p)
    while True:
        data = line_complexity_range(f, n_data)
        for t0 in range(3, 2 * p + 6):
            for shifts in (4, 3, 2):
                kind, sol = _try_template(data, p, t0, shifts)
                if kind == "unique":
                    if any(v.denominator != 1 for v in sol):
                        continue
                    rows = []
                    for k in range(p):
                        row = [int(v) for v in sol[k * shifts:(k + 1) * shifts]]
                        while row and row[-1] == 0:
                            row.pop()
                        rows.append(tuple(row))
                    for threshold in range(t0, t0 + 4 * p):
                        try:
                            return RecursionSpec(
                                p=p,
                                rows=tuple(rows),
                                constant=int(sol[-1]),
                                initials=tuple(data[:threshold]),
                                threshold=threshold,
                            )
                        except ValueError:
                            continue  # descent not yet valid at this threshold
                if kind == "inconsistent":
                    break  # smaller templates are subsets; try next threshold
        if window is not None or n_data >= 60:
            raise InferenceError(
                f"no consistent recursion within template for {f.coeffs} mod {p}")
        n_data += 8

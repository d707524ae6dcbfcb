"""Exact dense linear algebra over prime fields GF(p).

All matrices are immutable; entries are machine ints reduced mod p.
Row reduction is fully deterministic (first nonzero pivot, no row
scaling ambiguity), so reduced forms are canonical and reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

DEFAULT_PRIME_LIMIT = 2**31


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class PrimeModulus:
    """A verified prime p, the characteristic of the scalar field."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or self.p < 2:
            raise ValueError(f"modulus must be an integer >= 2, got {self.p!r}")
        if self.p > DEFAULT_PRIME_LIMIT:
            raise ValueError(f"modulus {self.p} exceeds limit {DEFAULT_PRIME_LIMIT}")
        if not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0 mod p")
        return pow(a, self.p - 2, self.p)


@dataclass(frozen=True)
class FpMatrix:
    """Dense matrix over GF(p), stored as a tuple of row tuples."""

    modulus: PrimeModulus
    entries: tuple  # tuple of tuples of ints in [0, p)

    @staticmethod
    def from_rows(rows: Iterable[Sequence[int]], p: int | PrimeModulus,
                  cols: int | None = None) -> "FpMatrix":
        mod = p if isinstance(p, PrimeModulus) else PrimeModulus(p)
        ent = tuple(tuple(x % mod.p for x in row) for row in rows)
        if ent:
            cols = len(ent[0])
            for row in ent:
                if len(row) != cols:
                    raise ValueError("ragged rows")
        elif cols is None:
            cols = 0
        m = FpMatrix(mod, ent)
        object.__setattr__(m, "_cols", cols)
        return m

    @staticmethod
    def zero(rows: int, cols: int, p: int | PrimeModulus) -> "FpMatrix":
        return FpMatrix.from_rows([[0] * cols for _ in range(rows)], p, cols=cols)

    @staticmethod
    def identity(n: int, p: int | PrimeModulus) -> "FpMatrix":
        return FpMatrix.from_rows(
            [[1 if i == j else 0 for j in range(n)] for i in range(n)], p)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        if self.entries:
            return len(self.entries[0])
        return getattr(self, "_cols", 0)

    @property
    def p(self) -> int:
        return self.modulus.p

    def row(self, i: int) -> tuple:
        return self.entries[i]

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.entries)

    def transpose(self) -> "FpMatrix":
        return FpMatrix.from_rows(
            [self.column(j) for j in range(self.cols)], self.modulus,
            cols=self.rows)

    def select_columns(self, idx: Sequence[int]) -> "FpMatrix":
        return FpMatrix.from_rows(
            [[row[j] for j in idx] for row in self.entries], self.modulus,
            cols=len(idx))

    def stack(self, other: "FpMatrix") -> "FpMatrix":
        if other.modulus != self.modulus or (self.rows and other.rows and
                                             other.cols != self.cols):
            raise ValueError("stack: incompatible matrices")
        cols = self.cols if self.rows else other.cols
        return FpMatrix.from_rows(list(self.entries) + list(other.entries),
                                  self.modulus, cols=cols)

    def is_zero(self) -> bool:
        return all(all(x == 0 for x in row) for row in self.entries)

    def to_text(self) -> str:
        """Matrix text format: first line "p rows cols", then row-major ints."""
        head = f"{self.p} {self.rows} {self.cols}"
        body = " ".join(str(x) for row in self.entries for x in row)
        return head + "\n" + body + ("\n" if body else "")

    @staticmethod
    def from_text(text: str) -> "FpMatrix":
        toks = text.split()
        if len(toks) < 3:
            raise ValueError("matrix text needs a 'p rows cols' header")
        p, r, c = int(toks[0]), int(toks[1]), int(toks[2])
        vals = [int(t) for t in toks[3:]]
        if len(vals) != r * c:
            raise ValueError(f"expected {r * c} entries, got {len(vals)}")
        return FpMatrix.from_rows([vals[i * c:(i + 1) * c] for i in range(r)],
                                  p, cols=c)


def _rref_rows(rows: list[list[int]], p: int) -> tuple[list[list[int]], list[int]]:
    """In-place Gauss-Jordan on a list of row lists. Returns (rows, pivots)."""
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        sel = -1
        for i in range(r, len(rows)):
            if rows[i][c] % p:
                sel = i
                break
        if sel < 0:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        inv = pow(rows[r][c] % p, p - 2, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] % p:
                f = rows[i][c] % p
                ri, rr = rows[i], rows[r]
                rows[i] = [(ri[j] - f * rr[j]) % p for j in range(ncols)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rref(m: FpMatrix) -> tuple[FpMatrix, list[int], int]:
    """Reduced row-echelon form. Returns (reduced, pivot_columns, rank)."""
    rows = [list(row) for row in m.entries]
    rows, pivots = _rref_rows(rows, m.p)
    red = FpMatrix.from_rows(rows, m.modulus, cols=m.cols)
    return red, pivots, len(pivots)


def rank(m: FpMatrix) -> int:
    return rref(m)[2]


def rank_of_rows(rows: Iterable[Sequence[int]], p: int) -> int:
    """Rank of a list of coordinate vectors over GF(p), no matrix wrapping.

    Hot path for randomized verification; keeps elimination allocation-light.
    """
    work = [list(r) for r in rows]
    if not work:
        return 0
    n = len(work[0])
    rk = 0
    for c in range(n):
        sel = -1
        for i in range(rk, len(work)):
            if work[i][c] % p:
                sel = i
                break
        if sel < 0:
            continue
        work[rk], work[sel] = work[sel], work[rk]
        piv = work[rk]
        inv = pow(piv[c] % p, p - 2, p)
        if inv != 1:
            piv = [(x * inv) % p for x in piv]
            work[rk] = piv
        for i in range(rk + 1, len(work)):
            f = work[i][c] % p
            if f:
                wi = work[i]
                work[i] = [(wi[j] - f * piv[j]) % p for j in range(c, n)]
                work[i][:0] = [0] * c
        rk += 1
        if rk == len(work):
            break
    return rk


def kernel(m: FpMatrix) -> FpMatrix:
    """Basis of the right null space of m, one basis vector per row.

    Row count equals cols(m) - rank(m); rows come out in canonical order
    (one per non-pivot column of the RREF).
    """
    red, pivots, rk = rref(m)
    p = m.p
    n = m.cols
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * n
        v[fc] = 1
        for r_i, pc in enumerate(pivots):
            v[pc] = (-red.entries[r_i][fc]) % p
        basis.append(v)
    return FpMatrix.from_rows(basis, m.modulus, cols=n)


def solve(m: FpMatrix, b: Sequence[int]):
    """One solution x of m x = b over GF(p), or None.

    Deterministic: the RREF particular solution with free variables zero.
    """
    p = m.p
    if len(b) != m.rows:
        raise ValueError("solve: dimension mismatch")
    aug = [list(row) + [b[i] % p] for i, row in enumerate(m.entries)]
    aug, pivots = _rref_rows(aug, p)
    n = m.cols
    x = [0] * n
    for r_i, pc in enumerate(pivots):
        if pc == n:  # pivot in the augmented column: inconsistent system
            return None
        x[pc] = aug[r_i][n]
    return x


def matmul(a: FpMatrix, b: FpMatrix) -> FpMatrix:
    if a.modulus != b.modulus:
        raise ValueError("matmul: modulus mismatch")
    if a.cols != b.rows:
        raise ValueError(f"matmul: {a.rows}x{a.cols} times {b.rows}x{b.cols}")
    p = a.p
    bt = [b.column(j) for j in range(b.cols)]
    out = []
    for row in a.entries:
        out.append([sum(x * y for x, y in zip(row, col)) % p for col in bt])
    return FpMatrix.from_rows(out, a.modulus, cols=b.cols)


def matvec(a: FpMatrix, v: Sequence[int]) -> list[int]:
    if a.cols != len(v):
        raise ValueError("matvec: dimension mismatch")
    p = a.p
    return [sum(x * y for x, y in zip(row, v)) % p for row in a.entries]

"""Subspace lattice of GF(p)^d: entropy measures, projections, complements.

A subspace is carried by the canonical RREF basis of its row space, so
equal subspaces compare equal structurally.  Entropy of a set of
subspaces is the dimension of their sum; mutual information is the
dimension of the intersection.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .ffla import FpMatrix, PrimeModulus, kernel, rank_of_rows, rref, solve


@dataclass(frozen=True)
class Subspace:
    """Subspace of GF(p)^d with a canonical RREF basis (rows = dim)."""

    ambient_dim: int
    modulus: PrimeModulus
    basis: FpMatrix  # RREF, full row rank

    @property
    def dim(self) -> int:
        return self.basis.rows

    @property
    def p(self) -> int:
        return self.modulus.p

    def vectors(self) -> tuple:
        return self.basis.entries

    def contains(self, v: Sequence[int]) -> bool:
        return rank_of_rows(list(self.basis.entries) + [list(v)], self.p) == self.dim

    def contains_subspace(self, other: "Subspace") -> bool:
        self._check_compatible(other)
        rows = list(self.basis.entries) + list(other.basis.entries)
        return rank_of_rows(rows, self.p) == self.dim

    def _check_compatible(self, other: "Subspace"):
        if other.ambient_dim != self.ambient_dim or other.modulus != self.modulus:
            raise ValueError("subspaces live in different ambient spaces")

    def to_text(self) -> str:
        return self.basis.to_text() if self.dim else \
            f"{self.p} 0 {self.ambient_dim}\n"

    @staticmethod
    def from_text(text: str) -> "Subspace":
        m = FpMatrix.from_text(text)
        return span(m.entries, m.cols, m.p)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, p={self.p})"


def span(vectors: Iterable[Sequence[int]], d: int, p: int | PrimeModulus) -> Subspace:
    """Canonical subspace of GF(p)^d spanned by the given vectors."""
    mod = p if isinstance(p, PrimeModulus) else PrimeModulus(p)
    vecs = [list(v) for v in vectors]
    for v in vecs:
        if len(v) != d:
            raise ValueError(f"vector of length {len(v)} in ambient dim {d}")
    m = FpMatrix.from_rows(vecs, mod, cols=d)
    red, pivots, rk = rref(m)
    basis = FpMatrix.from_rows(red.entries[:rk], mod, cols=d)
    return Subspace(d, mod, basis)


def zero_subspace(d: int, p: int | PrimeModulus) -> Subspace:
    return span([], d, p)


def full_space(d: int, p: int | PrimeModulus) -> Subspace:
    return span(FpMatrix.identity(d, p).entries, d, p)


def sum_spaces(a: Subspace, b: Subspace) -> Subspace:
    a._check_compatible(b)
    return span(list(a.basis.entries) + list(b.basis.entries), a.ambient_dim, a.modulus)


def sum_all(spaces: Sequence[Subspace], d: int | None = None,
            p: int | PrimeModulus | None = None) -> Subspace:
    if not spaces:
        if d is None or p is None:
            raise ValueError("sum of no subspaces needs explicit ambient")
        return zero_subspace(d, p)
    rows: list = []
    for s in spaces:
        spaces[0]._check_compatible(s)
        rows.extend(s.basis.entries)
    return span(rows, spaces[0].ambient_dim, spaces[0].modulus)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """Intersection via the left null space of the stacked generators.

    Coefficient vectors (alpha, beta) with alpha*A = beta*B are read off the
    kernel of the transposed stack; this avoids orthogonal complements and
    their characteristic-2 pitfalls.
    """
    a._check_compatible(b)
    if a.dim == 0 or b.dim == 0:
        return zero_subspace(a.ambient_dim, a.modulus)
    stacked = a.basis.stack(FpMatrix.from_rows(
        [[(-x) % a.p for x in row] for row in b.basis.entries],
        a.modulus, cols=a.ambient_dim))
    null = kernel(stacked.transpose())  # rows: (alpha, beta) coefficient pairs
    gens = []
    for coeff in null.entries:
        alpha = coeff[:a.dim]
        v = [0] * a.ambient_dim
        for c, row in zip(alpha, a.basis.entries):
            if c:
                v = [(x + c * y) % a.p for x, y in zip(v, row)]
        gens.append(v)
    return span(gens, a.ambient_dim, a.modulus)


@dataclass(frozen=True)
class SubspaceFamily:
    """Named subspaces of one ambient space; the carrier of all measures."""

    variables: tuple
    assignment: dict = field(compare=False)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if set(self.variables) != set(self.assignment):
            raise ValueError("variables and assignment keys differ")
        spaces = list(self.assignment.values())
        for s in spaces:
            spaces[0]._check_compatible(s)
        object.__setattr__(self, "_cache", {})

    @property
    def ambient_dim(self) -> int:
        return next(iter(self.assignment.values())).ambient_dim

    @property
    def modulus(self) -> PrimeModulus:
        return next(iter(self.assignment.values())).modulus

    def __getitem__(self, name) -> Subspace:
        return self.assignment[name]

    def entropy(self, subset: Iterable) -> int:
        """H of the named subspaces: dimension of their sum. H(empty) = 0."""
        names = frozenset(subset)
        unknown = names - set(self.variables)
        if unknown:
            raise KeyError(f"unknown variables: {sorted(map(str, unknown))}")
        cache = getattr(self, "_cache")
        got = cache.get(names)
        if got is not None:
            return got
        rows = []
        for n in names:
            rows.extend(self.assignment[n].basis.entries)
        h = rank_of_rows(rows, self.modulus.p) if rows else 0
        cache[names] = h
        return h

    def conditional_entropy(self, x: Iterable, y: Iterable) -> int:
        x, y = set(x), set(y)
        return self.entropy(x | y) - self.entropy(y)

    def mutual_info(self, x: Iterable, y: Iterable) -> int:
        x, y = set(x), set(y)
        return self.entropy(x) + self.entropy(y) - self.entropy(x | y)

    def cond_mutual_info(self, x: Iterable, y: Iterable, z: Iterable) -> int:
        x, y, z = set(x), set(y), set(z)
        return (self.entropy(x | z) + self.entropy(y | z)
                - self.entropy(x | y | z) - self.entropy(z))


@dataclass(frozen=True)
class DirectSumDecomposition:
    """Mutually complementary parts summing to an ambient subspace."""

    parts: tuple
    ambient: Subspace

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        total = sum_all(list(self.parts), self.ambient.ambient_dim,
                        self.ambient.modulus)
        if total != self.ambient or \
                sum(s.dim for s in self.parts) != self.ambient.dim:
            raise ValueError("parts are not mutually complementary in ambient")

    def coordinates(self, v: Sequence[int]) -> list[list[int]]:
        """Split v = sum of part components; unique by complementarity."""
        rows = []
        for part in self.parts:
            rows.extend(part.basis.entries)
        m = FpMatrix.from_rows(rows, self.ambient.modulus,
                               cols=self.ambient.ambient_dim).transpose()
        coeff = solve(m, list(v))
        if coeff is None:
            raise ValueError("vector not contained in the decomposed ambient")
        comps = []
        k = 0
        for part in self.parts:
            comp = [0] * self.ambient.ambient_dim
            for c, row in zip(coeff[k:k + part.dim], part.basis.entries):
                if c:
                    comp = [(x + c * y) % part.p for x, y in zip(comp, row)]
            comps.append(comp)
            k += part.dim
        return comps


def project(dec: DirectSumDecomposition, s: Iterable[int], x: Subspace) -> Subspace:
    """Image of x under the projection onto the parts indexed by s."""
    s = set(s)
    for i in s:
        if not 0 <= i < len(dec.parts):
            raise IndexError(f"part index {i} out of range")
    if not dec.ambient.contains_subspace(x):
        raise ValueError("subspace not contained in the decomposed ambient")
    gens = []
    for v in x.basis.entries:
        comps = dec.coordinates(v)
        img = [0] * x.ambient_dim
        for i in s:
            img = [(a + b) % x.p for a, b in zip(img, comps[i])]
        gens.append(img)
    return span(gens, x.ambient_dim, x.modulus)


def complement_in(b: Subspace, a: Subspace) -> Subspace:
    """Deterministic W with b + W = a (direct). Requires b <= a.

    Extends the basis of b by the earliest independent RREF basis vectors
    of a, so the result is reproducible.
    """
    b._check_compatible(a)
    if not a.contains_subspace(b):
        raise ValueError("complement_in: b is not contained in a")
    current = [list(v) for v in b.basis.entries]
    rk = len(current)
    picked = []
    for v in a.basis.entries:
        if rank_of_rows(current + [list(v)], a.p) > rk:
            current.append(list(v))
            picked.append(v)
            rk += 1
    return span(picked, a.ambient_dim, a.modulus)


def complement_within(b: Subspace, a: Subspace, c: Subspace):
    """W <= c with b + W = a (direct), or None when no such W exists.

    Existence is exactly the codimension equality
    codim_{a&c}(b&c) = codim_a(b); when it holds, any complement of b&c
    inside a&c works, and we take the canonical one.
    """
    b._check_compatible(a)
    if not a.contains_subspace(b):
        raise ValueError("complement_within: b is not contained in a")
    ac = intersect(a, c)
    bc = intersect(b, c)
    if ac.dim - bc.dim != a.dim - b.dim:
        return None
    return complement_in(bc, ac)


def codim(b: Subspace, a: Subspace) -> int:
    """codim_a(b) for b <= a."""
    if not a.contains_subspace(b):
        raise ValueError("codim: b is not contained in a")
    return a.dim - b.dim


def build_construction(a_parts: Sequence[Subspace], c: Subspace):
    """Repair (A_1..A_{n+1}, C) into a mutually complementary tuple.

    Returns (a_primes, c_bar, report).  a_primes are mutually complementary
    with sum equal to the sum of a_parts; c_bar <= c meets the sum of any
    n of the a_primes trivially.  The report certifies, per part k, that
    codim_{A_k}(A'_k) equals the mutual information of A_{[k-1]} and A_k,
    and that codim_C(c_bar) stays under the invariant upper bound
    H(C|A_all) + sum_i I(A_all - A_i ; C).
    """
    if not a_parts:
        raise ValueError("need at least one part")
    for s in a_parts:
        a_parts[0]._check_compatible(s)
    c._check_compatible(a_parts[0])
    d, mod = a_parts[0].ambient_dim, a_parts[0].modulus

    a_primes = [a_parts[0]]
    running = a_parts[0]  # sum of the first k parts
    codim_values = [0]
    for k in range(1, len(a_parts)):
        ak = a_parts[k]
        total = sum_spaces(running, ak)
        w = complement_within(running, total, ak)
        assert w is not None  # a complement inside A_k always exists here
        a_primes.append(w)
        i_k = running.dim + ak.dim - total.dim  # I(A_[k-1]; A_k)
        codim_values.append(ak.dim - w.dim)
        assert codim_values[-1] == i_k
        running = total

    # carve C down until it is in general position w.r.t. the primes
    c_cur = intersect(c, running)
    for k in range(len(a_primes)):
        others = sum_all([a_primes[i] for i in range(len(a_primes)) if i != k],
                         d, mod)
        total = sum_spaces(c_cur, others)
        nxt = complement_within(others, total, c_cur)
        assert nxt is not None
        c_cur = nxt
    c_bar = c_cur

    bound = (c.dim - intersect(c, running).dim)
    for i in range(len(a_parts)):
        others = sum_all([a_parts[j] for j in range(len(a_parts)) if j != i],
                         d, mod)
        bound += intersect(others, c).dim
    report = {
        "codim_parts": codim_values,
        "codim_c": c.dim - c_bar.dim,
        "codim_c_bound": bound,
        "bound_holds": c.dim - c_bar.dim <= bound,
    }
    return a_primes, c_bar, report


def random_subspace(d: int, p: int | PrimeModulus, rng: random.Random,
                    max_dim: int | None = None) -> Subspace:
    """Row space of a uniformly random matrix with uniform row count.

    The row count is uniform in [0, max_dim or d]; the resulting dimension
    may come out lower and is recorded as-is (rejection-free).
    """
    top = d if max_dim is None else max_dim
    k = rng.randint(0, top)
    vecs = [[rng.randrange(p if isinstance(p, int) else p.p) for _ in range(d)]
            for _ in range(k)]
    return span(vecs, d, p)


def random_decomposition(n_parts: int, m: int, p: int,
                         rng: random.Random) -> DirectSumDecomposition:
    """Random direct-sum decomposition of GF(p)^{n_parts*m}, parts of dim m."""
    d = n_parts * m
    while True:
        rows = [[rng.randrange(p) for _ in range(d)] for _ in range(d)]
        if rank_of_rows(rows, p) == d:
            break
    parts = [span(rows[i * m:(i + 1) * m], d, p) for i in range(n_parts)]
    return DirectSumDecomposition(tuple(parts), full_space(d, p))


def random_general_position_line(dec: DirectSumDecomposition,
                                 rng: random.Random) -> Subspace:
    """A 1-dim C with all part components nonzero: C + (sum of any n parts)
    stays direct, the admissible shape for the projection dichotomy."""
    p = dec.ambient.p
    v = [0] * dec.ambient.ambient_dim
    for part in dec.parts:
        coeffs = [rng.randrange(p) for _ in range(part.dim)]
        if all(x == 0 for x in coeffs):
            coeffs[rng.randrange(part.dim)] = 1 + rng.randrange(p - 1)
        for cf, row in zip(coeffs, part.basis.entries):
            if cf:
                v = [(x + cf * y) % p for x, y in zip(v, row)]
    return span([v], dec.ambient.ambient_dim, dec.ambient.modulus)

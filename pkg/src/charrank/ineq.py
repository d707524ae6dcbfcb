"""Characteristic-dependent linear rank inequalities.

An inequality is stored fully expanded as a signed rational combination
of joint entropies with relation >= 0; the conditional/mutual measure
forms are a construction front-end only, so there is a single
evaluation path.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .ffla import rank_of_rows
from .matroid import ln_matrix
from .subspace import (Subspace, SubspaceFamily, random_decomposition,
                       random_general_position_line, random_subspace, span,
                       sum_all, project, zero_subspace)

# ---------------------------------------------------------------------------
# measures and canonicalization

def H(x: Iterable, given: Iterable = ()) -> tuple:
    """Measure H(X) or H(X|Y)."""
    return ("H", frozenset(x), frozenset(given))


def I(x: Iterable, y: Iterable, given: Iterable = ()) -> tuple:
    """Measure I(X;Y) or I(X;Y|Z)."""
    return ("I", frozenset(x), frozenset(y), frozenset(given))


def _expand(measure: tuple) -> dict:
    """Expansion into joint entropies: frozenset -> signed unit coefficient."""
    out: dict = {}

    def add(s, c):
        if s:
            out[s] = out.get(s, 0) + c

    if measure[0] == "H":
        _, x, y = measure
        add(x | y, 1)
        add(y, -1)
    elif measure[0] == "I":
        _, x, y, z = measure
        add(x | z, 1)
        add(y | z, 1)
        add(x | y | z, -1)
        add(z, -1)
    else:
        raise ValueError(f"malformed measure: {measure!r}")
    return out


@dataclass(frozen=True)
class RankExpression:
    """Sum of coeff * H(subset) with relation >= 0, in canonical form."""

    variables: tuple
    coeffs: dict = field(compare=False)  # frozenset of names -> Fraction

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        for s in self.coeffs:
            unknown = s - set(self.variables)
            if unknown:
                raise ValueError(f"unknown variables {sorted(map(str, unknown))}")

    def __eq__(self, other):
        return (isinstance(other, RankExpression)
                and self.variables == other.variables
                and self.coeffs == other.coeffs)

    def rename(self, mapping: dict) -> "RankExpression":
        return RankExpression(
            tuple(mapping[v] for v in self.variables),
            {frozenset(mapping[v] for v in s): c for s, c in self.coeffs.items()})

    def to_json(self) -> dict:
        terms = sorted(
            ({"subset": sorted(map(str, s)), "coeff": str(c)}
             for s, c in self.coeffs.items()),
            key=lambda t: (len(t["subset"]), t["subset"]))
        return {"variables": [str(v) for v in self.variables], "terms": terms}

    @staticmethod
    def from_json(obj: dict) -> "RankExpression":
        coeffs = {frozenset(t["subset"]): Fraction(t["coeff"])
                  for t in obj["terms"]}
        return RankExpression(tuple(obj["variables"]), coeffs)

    def to_text(self) -> str:
        parts = []
        for s, c in sorted(self.coeffs.items(),
                           key=lambda kv: (len(kv[0]), sorted(map(str, kv[0])))):
            names = ",".join(sorted(map(str, s)))
            sign = "-" if c < 0 else "+"
            parts.append(f"{sign} {abs(c)} * H({names})")
        body = " ".join(parts) if parts else "0"
        return f"{body} >= 0"


def canonicalize(terms: Sequence[tuple], variables: Sequence) -> RankExpression:
    """Expand (rational coeff, measure) terms over the declared variables."""
    varset = set(variables)
    coeffs: dict = {}
    for coeff, measure in terms:
        for part in measure[1:]:
            unknown = set(part) - varset
            if unknown:
                raise ValueError(
                    f"unknown variables {sorted(map(str, unknown))}")
        for s, unit in _expand(measure).items():
            coeffs[s] = coeffs.get(s, Fraction(0)) + Fraction(coeff) * unit
    coeffs = {s: c for s, c in coeffs.items() if c != 0}
    return RankExpression(tuple(variables), coeffs)


def evaluate(e: RankExpression, f: SubspaceFamily) -> Fraction:
    missing = set(e.variables) - set(f.variables)
    if missing:
        raise KeyError(f"family misses variables {sorted(map(str, missing))}")
    total = Fraction(0)
    for s, c in e.coeffs.items():
        total += c * f.entropy(s)
    return total


# ---------------------------------------------------------------------------
# the paper's inequality builders

def _names(n: int):
    a = [f"A{i}" for i in range(1, n + 2)]
    b = [f"B{i}" for i in range(1, n + 2)]
    return a, b


def thm_div(n: int) -> RankExpression:
    """The inequality valid over fields whose characteristic divides n.

    Encoded as RHS - H(B_[n+1]) >= 0 over A_1..A_{n+1}, B_1..B_{n+1}, C.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    a, b = _names(n)
    c = "C"
    terms = [(Fraction(n), I(a, [c]))]
    for i in range(n + 1):
        rest = a[:i] + a[i + 1:]
        terms.append((Fraction(1), H([b[i]], rest)))
        terms.append((Fraction(1), H([b[i]], [a[i], c])))
        terms.append((Fraction(n + 1), I(rest, [c])))
    for i in range(2, n + 1):  # i = 2..n
        terms.append((Fraction(n), I(a[:i - 1], [a[i - 1]])))
    terms.append((Fraction(n + 1), I(a[:n], [a[n]])))
    terms.append((Fraction(n + 1), H([c], a)))
    terms.append((Fraction(-1), H(b)))
    return canonicalize(terms, tuple(a + b + [c]))


def thm_nondiv(n: int) -> RankExpression:
    """The inequality valid when the characteristic does not divide n.

    Encoded as RHS - H(C) >= 0 over A_1..A_{n+1}, B_1..B_{n+1}, C.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    a, b = _names(n)
    c = "C"
    terms = [(Fraction(1, n + 1), H(b)), (Fraction(1), H([c], a))]
    for i in range(n + 1):
        rest = a[:i] + a[i + 1:]
        terms.append((Fraction(1), I(rest, [c])))
        terms.append((Fraction(1), H([c], [a[i], b[i]])))
        terms.append((Fraction(1), H([b[i]], rest)))
    for i in range(2, n + 1):
        terms.append((Fraction(n), I(a[:i - 1], [a[i - 1]])))
    terms.append((Fraction(n + 1), I(a[:n], [a[n]])))
    terms.append((Fraction(-1), H([c])))
    return canonicalize(terms, tuple(a + b + [c]))


def tight_div(n: int) -> RankExpression:
    """Tight form with the extra variable P, characteristic dividing n."""
    if n < 2:
        raise ValueError("n must be >= 2")
    a, b = _names(n)
    c, p = "C", "P"
    terms = []
    # right-hand side
    for i in range(n + 1):
        rest = a[:i] + a[i + 1:]
        terms.append((Fraction(n + 1), I(rest, [c], [p])))
        terms.append((Fraction(1), H([b[i]], rest + [p])))
        terms.append((Fraction(1), H([b[i]], [a[i], c, p])))
    terms.append((Fraction(n), I(a, [c], [p])))
    for i in range(2, n + 1):
        terms.append((Fraction(n), I(a[:i - 1], [a[i - 1]], [p])))
    terms.append((Fraction(n + 1), I(a[:n], [a[n]], [p])))
    terms.append((Fraction(n + 1), H([c], a + [p])))
    # minus left-hand side
    terms.append((Fraction(-1), H(b, [p])))
    for i in range(n + 1):
        brest = b[:i] + b[i + 1:]
        terms.append((Fraction(-1), H([b[i]], a + brest + [c, p])))
    terms.append((Fraction(-(n + 1)), H([c], a + b + [p])))
    return canonicalize(terms, tuple(a + b + [c, p]))


def tight_nondiv(n: int) -> RankExpression:
    """Tight form with the extra variable P, characteristic not dividing n."""
    if n < 2:
        raise ValueError("n must be >= 2")
    a, b = _names(n)
    c, p = "C", "P"
    terms = [(Fraction(1, n + 1), H(b, [p])), (Fraction(1), H([c], a + [p]))]
    for i in range(n + 1):
        rest = a[:i] + a[i + 1:]
        terms.append((Fraction(1), I(rest, [c], [p])))
        terms.append((Fraction(1), H([c], [a[i], b[i], p])))
        terms.append((Fraction(1), H([b[i]], rest + [p])))
    for i in range(2, n + 1):
        terms.append((Fraction(n), I(a[:i - 1], [a[i - 1]], [p])))
    terms.append((Fraction(n + 1), I(a[:n], [a[n]], [p])))
    # minus left-hand side
    terms.append((Fraction(-1), H([c], [p])))
    terms.append((Fraction(-(n + 1)), H([c], a + b + [p])))
    for i in range(n + 1):
        brest = b[:i] + b[i + 1:]
        terms.append((Fraction(-(n + 2), n + 1),
                      H([b[i]], a + brest + [c, p])))
    return canonicalize(terms, tuple(a + b + [c, p]))


def ln_family(n: int, p: int, include_p: bool = False) -> SubspaceFamily:
    """Column spans of the guide matrix in GF(p)^{n+1}: the known violator.

    A_i = <e_i>, B_k = <all-ones - e_k>, C = <all-ones>; with include_p the
    extra variable P is assigned the zero subspace.
    """
    m = ln_matrix(n, p)
    a, b = _names(n)
    names = a + b + ["C"]
    assignment = {}
    for j, name in enumerate(names):
        assignment[name] = span([m.column(j)], n + 1, p)
    if include_p:
        names = names + ["P"]
        assignment["P"] = zero_subspace(n + 1, p)
    return SubspaceFamily(tuple(names), assignment)


# ---------------------------------------------------------------------------
# randomized and exhaustive verification

@dataclass
class VerificationReport:
    trials: int
    violations: list  # (SubspaceFamily, Fraction lhs value)
    modulus: int
    seed: int | None
    ambient_dim: int | None = None

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "trials": self.trials,
            "modulus": self.modulus,
            "seed": self.seed,
            "ambient_dim": self.ambient_dim,
            "violation_count": len(self.violations),
            "violations": [
                {"value": str(v),
                 "family": {str(name): list(map(list, f[name].vectors()))
                            for name in f.variables}}
                for f, v in self.violations[:16]],
        }


def verify(e: RankExpression, p: int, ambient_dim: int, trials: int,
           seed: int = 0, inject: Sequence[SubspaceFamily] = ()) -> VerificationReport:
    """Evaluate e on sampled families over GF(p)^ambient_dim.

    Families in `inject` are evaluated first (inside the trial budget), so
    a known counterexample is never missed by bad sampling luck.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = random.Random(seed)
    violations = []
    done = 0
    for fam in inject:
        if done >= trials:
            break
        val = evaluate(e, fam)
        if val < 0:
            violations.append((fam, val))
        done += 1
    while done < trials:
        assignment = {v: random_subspace(ambient_dim, p, rng)
                      for v in e.variables}
        fam = SubspaceFamily(tuple(e.variables), assignment)
        val = evaluate(e, fam)
        if val < 0:
            violations.append((fam, val))
        done += 1
    return VerificationReport(trials, violations, p, seed, ambient_dim)


def bounded_dim_check(which: str, n: int, p: int, trials: int,
                      seed: int = 0, ambient_dim: int | None = None) -> VerificationReport:
    """Check the bounded-dimension propositions: ambient dim <= n, any field."""
    d = n if ambient_dim is None else ambient_dim
    if d > n:
        raise ValueError("ambient dimension must be at most n")
    e = thm_div(n) if which == "div" else thm_nondiv(n)
    return verify(e, p, d, trials, seed=seed)


def lemma3_check(n: int, p: int, trials: int, seed: int = 0,
                 m: int = 1) -> VerificationReport:
    """Projection-entropy dichotomy on sampled decompositions.

    Samples direct-sum decompositions of GF(p)^{(n+1)m} into n+1 parts of
    dimension m and an admissible line C; the joint entropy of the n+1
    projections of C must equal n*H(C) when p | n, else (n+1)*H(C), and
    H(C) <= 1 throughout.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    rng = random.Random(seed)
    expected_factor = n if n % p == 0 else n + 1
    violations = []
    for _ in range(trials):
        dec = random_decomposition(n + 1, m, p, rng)
        c = random_general_position_line(dec, rng)
        if c.dim > 1:
            violations.append((None, Fraction(c.dim)))
            continue
        projs = [project(dec, set(range(n + 1)) - {i}, c)
                 for i in range(n + 1)]
        total = sum_all(projs, dec.ambient.ambient_dim, dec.ambient.modulus)
        if total.dim != expected_factor * c.dim:
            fam = SubspaceFamily(
                tuple(f"A{i+1}" for i in range(n + 1)) + ("C",),
                {**{f"A{i+1}": dec.parts[i] for i in range(n + 1)}, "C": c})
            violations.append((fam, Fraction(total.dim - expected_factor * c.dim)))
    return VerificationReport(trials, violations, p, seed, (n + 1) * m)


def exhaustive_unit_check(e: RankExpression, p: int, d: int) -> dict:
    """Brute-force e over every family of <=1-dimensional subspaces of GF(p)^d.

    Independent oracle for small instances: entropies come from a
    precomputed rank table over the projective lines, not from the
    Subspace machinery.
    """
    # canonical generator per line of GF(p)^d (first nonzero coordinate 1)
    lines = []
    seen = set()
    for vec in itertools.product(range(p), repeat=d):
        if all(x == 0 for x in vec):
            continue
        lead = next(x for x in vec if x)
        inv = pow(lead, p - 2, p)
        canon = tuple((x * inv) % p for x in vec)
        if canon not in seen:
            seen.add(canon)
            lines.append(canon)
    nlines = len(lines)
    # rank of every set of lines, keyed by bitmask over the line list
    rank_table = [0] * (1 << nlines)
    for mask in range(1, 1 << nlines):
        rows = [lines[i] for i in range(nlines) if mask >> i & 1]
        rank_table[mask] = rank_of_rows(rows, p)

    nvars = len(e.variables)
    var_index = {v: i for i, v in enumerate(e.variables)}
    denom = 1
    for c in e.coeffs.values():
        denom = denom * c.denominator // _gcd(denom, c.denominator)
    compiled = [(int(c * denom), tuple(var_index[v] for v in s))
                for s, c in e.coeffs.items()]

    # variable values: 0 = zero subspace, 1..nlines = that line
    masks = [0] + [1 << i for i in range(nlines)]
    violations = 0
    total = 0
    worst = 0
    for choice in itertools.product(range(nlines + 1), repeat=nvars):
        total += 1
        val = 0
        for coeff, idxs in compiled:
            m = 0
            for i in idxs:
                m |= masks[choice[i]]
            val += coeff * rank_table[m]
        if val < 0:
            violations += 1
            worst = min(worst, val)
    return {"families": total, "violations": violations,
            "worst": Fraction(worst, denom), "p": p, "ambient_dim": d}


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


# ---------------------------------------------------------------------------
# text front-end for the measure grammar

def parse_terms(text: str) -> list:
    """Parse '<rational> * <measure>' terms joined by +/-.

    Measures: H(X), H(X|Y), I(X;Y), I(X;Y|Z) with comma-separated names.
    Returns a list of (Fraction, measure) suitable for canonicalize.
    """
    text = text.strip()
    if text.endswith(">= 0"):
        text = text[:-4].strip()
    tokens = _split_signed(text)
    terms = []
    for sign, chunk in tokens:
        if "*" in chunk:
            coeff_s, meas_s = chunk.split("*", 1)
            coeff = Fraction(coeff_s.strip())
        else:
            coeff, meas_s = Fraction(1), chunk
        terms.append((sign * coeff, _parse_measure(meas_s.strip())))
    return terms


def _split_signed(text: str):
    out = []
    sign = 1
    depth = 0
    cur = []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in "+-" and cur and cur[-1] not in "*/":
            out.append((sign, "".join(cur).strip()))
            sign = 1 if ch == "+" else -1
            cur = []
        else:
            cur.append(ch)
    if "".join(cur).strip():
        out.append((sign, "".join(cur).strip()))
    return out


def _parse_measure(s: str) -> tuple:
    if not s or s[1] != "(" or not s.endswith(")"):
        raise ValueError(f"malformed measure: {s!r}")
    kind, body = s[0], s[1:].strip()[1:-1]
    given: frozenset = frozenset()
    if "|" in body:
        body, given_s = body.split("|", 1)
        given = frozenset(x.strip() for x in given_s.split(",") if x.strip())
    if kind == "H":
        return ("H", frozenset(x.strip() for x in body.split(",")), given)
    if kind == "I":
        x_s, y_s = body.split(";")
        return ("I", frozenset(t.strip() for t in x_s.split(",")),
                frozenset(t.strip() for t in y_s.split(",")), given)
    raise ValueError(f"malformed measure: {s!r}")


def report_tightness(e: RankExpression) -> dict:
    """Informational only: the coefficient sum that a 'tight' form fixes."""
    total = sum(e.coeffs.values(), Fraction(0))
    return {"coefficient_sum": str(total), "term_count": len(e.coeffs)}


def expression_to_json_str(e: RankExpression) -> str:
    return json.dumps(e.to_json(), indent=2)

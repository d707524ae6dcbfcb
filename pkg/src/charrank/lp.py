"""Exact rational LP over subset-indexed variables z_Y, Y subset of sources.

The objective is always min z_empty.  Solving goes through the dual:
this LP has few variables (2^|S|) and thousands of rows, so the dual's
simplex basis stays at 2^|S| and the row constraints become cheap sparse
columns.  Pivoting uses Bland's rule over exact rationals; no floating
point anywhere.  The final assignment is re-verified against every row
before it is returned.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

try:
    from gmpy2 import mpq as _Q  # exact rational, much faster than Fraction
except ImportError:  # pragma: no cover
    _Q = Fraction

from .matroid import ln_matroid
from .netcode import IndexCodingNetwork, LinearIndexCode
from .ffla import rank_of_rows

DEFAULT_SOURCE_CAP = 10
NONDIV_PROBE_PRIMES = (2, 3, 5, 7, 11, 13)


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(int(x.numerator), int(x.denominator)) \
        if hasattr(x, "numerator") else Fraction(x)


@dataclass(frozen=True)
class Row:
    """Sparse constraint: sum coeffs[mask] * z_mask  <rel>  rhs."""

    coeffs: dict  # int bitmask -> Fraction
    rel: str      # "<=", ">=", "=="
    rhs: Fraction
    tag: str = ""

    def __post_init__(self):
        if self.rel not in ("<=", ">=", "=="):
            raise ValueError(f"bad relation {self.rel!r}")
        object.__setattr__(self, "coeffs",
                           {m: Fraction(c) for m, c in self.coeffs.items()
                            if c != 0})
        object.__setattr__(self, "rhs", Fraction(self.rhs))

    def check(self, assignment: dict) -> bool:
        lhs = sum((c * assignment.get(m, Fraction(0))
                   for m, c in self.coeffs.items()), Fraction(0))
        if self.rel == "<=":
            return lhs <= self.rhs
        if self.rel == ">=":
            return lhs >= self.rhs
        return lhs == self.rhs


@dataclass
class LPProblem:
    sources: tuple
    rows: list = field(default_factory=list)
    cap: int = DEFAULT_SOURCE_CAP

    def __post_init__(self):
        self.sources = tuple(self.sources)
        if len(self.sources) > self.cap:
            raise ValueError(
                f"{len(self.sources)} sources exceed cap {self.cap}")
        self._index = {s: i for i, s in enumerate(self.sources)}

    @property
    def n_vars(self) -> int:
        return 1 << len(self.sources)

    def mask(self, names) -> int:
        m = 0
        for n in names:
            m |= 1 << self._index[n]
        return m

    def subset_of(self, mask: int) -> tuple:
        return tuple(s for i, s in enumerate(self.sources) if mask >> i & 1)

    def add(self, coeffs: dict, rel: str, rhs, tag: str = ""):
        self.rows.append(Row(coeffs, rel, Fraction(rhs), tag))

    def dump(self) -> str:
        lines = [f"sources: {' '.join(map(str, self.sources))}",
                 "objective: min z_{}"]
        for row in self.rows:
            terms = " + ".join(
                f"{c}*z_{{{','.join(map(str, self.subset_of(m)))}}}"
                for m, c in sorted(row.coeffs.items()))
            lines.append(f"{terms} {row.rel} {row.rhs}  # {row.tag}")
        return "\n".join(lines) + "\n"


@dataclass
class LPSolution:
    status: str  # "optimal" | "infeasible" | "unbounded"
    optimum: Fraction | None
    assignment: dict  # mask -> Fraction
    iterations: int = 0

    def to_json(self, lp: LPProblem | None = None) -> dict:
        out = {"status": self.status,
               "b": str(self.optimum) if self.optimum is not None else None,
               "iterations": self.iterations}
        if self.status == "optimal":
            out["B"] = "inf" if self.optimum == 0 else str(1 / self.optimum)
            if lp is not None:
                out["assignment"] = {
                    ",".join(map(str, lp.subset_of(m))): str(v)
                    for m, v in sorted(self.assignment.items())}
        return out


# ---------------------------------------------------------------------------
# constraint generators

def shannon_constraints(sources) -> list:
    """Elemental Shannon rows: monotonicity and pairwise submodularity.

    These generate the full submodularity cone over the z variables while
    keeping the row count polynomial in 2^|S|.
    """
    sources = tuple(sources)
    ns = len(sources)
    rows = []
    for i in range(ns):
        bit = 1 << i
        for y in range(1 << ns):
            if y & bit:
                continue
            rows.append(Row({y | bit: Fraction(1), y: Fraction(-1)}, ">=",
                            Fraction(0), tag=f"mono:{i}"))
    for i, j in itertools.combinations(range(ns), 2):
        bi, bj = 1 << i, 1 << j
        for y in range(1 << ns):
            if y & (bi | bj):
                continue
            rows.append(Row({y | bi: Fraction(1), y | bj: Fraction(1),
                             y | bi | bj: Fraction(-1), y: Fraction(-1)},
                            ">=", Fraction(0), tag=f"submod:{i},{j}"))
    return rows


def flow_constraints(netw: IndexCodingNetwork) -> list:
    """z_S = |S| plus z_Y - z_Z <= |Y - cl(Z)| for every Z subset of Y,
    with the one-step closure."""
    sources = tuple(netw.sources)
    ns = len(sources)
    full = (1 << ns) - 1
    rows = [Row({full: Fraction(1)}, "==", Fraction(ns), tag="flow:zS")]
    closures = []
    for z in range(1 << ns):
        zs = frozenset(s for i, s in enumerate(sources) if z >> i & 1)
        cl = netw.closure(zs)
        clmask = 0
        for i, s in enumerate(sources):
            if s in cl:
                clmask |= 1 << i
        closures.append(clmask)
    for z in range(1 << ns):
        rest = full & ~z
        y = rest
        # iterate supersets of z: y = z | t for t subset of rest
        t = rest
        while True:
            y = z | t
            slack = bin(y & ~closures[z]).count("1")
            if y != z:
                rows.append(Row({y: Fraction(1), z: Fraction(-1)}, "<=",
                                Fraction(slack), tag=f"flow:{z}<={y}"))
            if t == 0:
                break
            t = (t - 1) & rest
    return rows


def matroid_side_constraints(netw: IndexCodingNetwork, n: int,
                             matroid_class: str) -> list:
    """Dependence rows read from the guide matroids of one characteristic
    class: dependent-in-each Y gives z_Y <= z_empty + r(Y); independent-
    in-each Y gives |Y| + n + 2 <= z_Y <= |Y| + z_empty.  Emitted rows are
    tagged "paper-asserted": the derivation lives in prose, not here."""
    sources = tuple(netw.sources)
    expected = set(f"A{i}" for i in range(1, n + 2)) \
        | set(f"B{i}" for i in range(1, n + 2)) | {"C"}
    if set(sources) != expected:
        raise ValueError("side constraints need the guide-matrix source set")
    if matroid_class == "div":
        probes = [p for p in NONDIV_PROBE_PRIMES if n % p == 0]
    elif matroid_class == "nondiv":
        probes = [p for p in NONDIV_PROBE_PRIMES if n % p != 0][:3]
    else:
        raise ValueError("matroid_class must be 'div' or 'nondiv'")
    if not probes:
        raise ValueError(f"no probe primes for class {matroid_class} at n={n}")
    matroids = [ln_matroid(n, p) for p in probes]
    ns = len(sources)
    rows = []
    for mask in range(1, 1 << ns):
        subset = [s for i, s in enumerate(sources) if mask >> i & 1]
        ranks = [m.rank(subset) for m in matroids]
        size = len(subset)
        if all(r < size for r in ranks):  # dependent in each
            rows.append(Row({mask: Fraction(1), 0: Fraction(-1)}, "<=",
                            Fraction(min(ranks)),
                            tag=f"paper-asserted:dep:{mask}"))
        elif all(r == size for r in ranks):  # independent in each
            rows.append(Row({mask: Fraction(1)}, ">=", Fraction(size + n + 2),
                            tag=f"paper-asserted:ind-lo:{mask}"))
            rows.append(Row({mask: Fraction(1), 0: Fraction(-1)}, "<=",
                            Fraction(size),
                            tag=f"paper-asserted:ind-hi:{mask}"))
    return rows


def _role_subsets(n: int, role_map: dict):
    a = [role_map[f"A{i}"] for i in range(1, n + 2)]
    b = [role_map[f"B{i}"] for i in range(1, n + 2)]
    c = role_map["C"]
    return a, b, c


def default_role_map(n: int) -> dict:
    names = [f"A{i}" for i in range(1, n + 2)] \
        + [f"B{i}" for i in range(1, n + 2)] + ["C"]
    return {x: x for x in names}


def role_map_permutations(n: int):
    """All (n+1)! joint index permutations of the A_i/B_i roles."""
    idx = list(range(1, n + 2))
    for perm in itertools.permutations(idx):
        m = {"C": "C"}
        for old, new in zip(idx, perm):
            m[f"A{old}"] = f"A{new}"
            m[f"B{old}"] = f"B{new}"
        yield m


def scheme_constraint_div(lp: LPProblem, n: int, role_map: dict | None = None) -> Row:
    """The z-row carried by the scheme LP for characteristic dividing n,
    encoded exactly as printed (RHS - LHS >= 0)."""
    role_map = role_map or default_role_map(n)
    if len(set(role_map.values())) != len(role_map):
        raise ValueError("role map must be injective")
    a, b, c = _role_subsets(n, role_map)
    co: dict = {}

    def add(names, coeff):
        m = lp.mask(names)
        co[m] = co.get(m, Fraction(0)) + Fraction(coeff)

    # left-hand side, negated
    add([], -(2 * n**2 + 3 * n + 1))
    add(a + b + [c], -2 * (n + 1))
    add(b, -1)
    for i in range(n + 1):
        rest = a[:i] + a[i + 1:]
        add([a[i], c], -1)
        add(rest + [c], -(n + 1))
    add(a, -(n + 2))
    # right-hand side
    add(a + [c], 1)
    for i in range(n):  # sums run to n, not n+1
        add([a[i]], n)
        add(a[:i] + a[i + 1:], n)
    add([c], n**2 + 3 * n + 1)
    add(a[:n], n + 1)
    add(a + b, n + 1)
    add([a[n]], n + 1)
    for i in range(n + 1):
        add(a + b[:i] + b[i + 1:] + [c], 1)
        add(a[:i] + a[i + 1:] + [b[i]], 1)
        add([a[i], b[i], c], 1)
    return Row(co, ">=", Fraction(0), tag="scheme:div")


def scheme_constraint_nondiv(lp: LPProblem, n: int,
                             role_map: dict | None = None) -> Row:
    """The z-row carried by the scheme LP for characteristic not dividing n,
    encoded exactly as printed (RHS - LHS >= 0)."""
    role_map = role_map or default_role_map(n)
    if len(set(role_map.values())) != len(role_map):
        raise ValueError("role map must be injective")
    a, b, c = _role_subsets(n, role_map)
    co: dict = {}

    def add(names, coeff):
        m = lp.mask(names)
        co[m] = co.get(m, Fraction(0)) + Fraction(coeff)

    # left-hand side, negated
    add(a + b + [c], -(2 * n + 3))
    for i in range(n + 1):
        add(a[:i] + a[i + 1:] + [c], -1)
        add([a[i], b[i]], -1)
    add(a, -(n + 2))
    add([], Fraction(-(n**3 + 2 * n**2 + 2 * n + 2), n + 1))
    # right-hand side
    add(b, Fraction(1, n + 1))
    add(a + [c], 1)
    add(a + b, n + 1)
    for i in range(n + 1):
        add(a + b[:i] + b[i + 1:] + [c], Fraction(n + 2, n + 1))
        add([a[i], b[i], c], 1)
        add(a[:i] + a[i + 1:] + [b[i]], 1)
    add(a[:n], 1)
    for i in range(n):
        add([a[i]], n)
    add([a[n]], n + 1)
    add([c], n)
    return Row(co, ">=", Fraction(0), tag="scheme:nondiv")


# ---------------------------------------------------------------------------
# exact simplex (revised, on the dual, Bland's rule)

def solve_min(lp: LPProblem) -> LPSolution:
    """Exact optimum of min z_empty subject to lp.rows and z >= 0.

    The dual (max b y, A^T y <= c, y >= 0) starts from the all-slack basis,
    which is feasible because the objective vector is non-negative.  Pricing
    is Dantzig (most negative reduced cost) for speed, switching to Bland's
    rule during degenerate stalls so termination is guaranteed.  The returned
    assignment is re-verified against every row, and optimality is certified
    by non-negative reduced costs, all in exact arithmetic.
    """
    nvars = lp.n_vars
    # normalize rows to  a . z >= rhs
    norm: list[tuple[dict, object]] = []
    for row in lp.rows:
        if not row.coeffs and row.rel != "==":
            # constant row: check consistency, no dual column needed
            ok = row.check({})
            if not ok:
                return LPSolution("infeasible", None, {})
            continue
        pairs = [(row.coeffs, row.rhs)] if row.rel == ">=" else []
        if row.rel == "<=":
            pairs = [({m: -c for m, c in row.coeffs.items()}, -row.rhs)]
        elif row.rel == "==":
            pairs = [(row.coeffs, row.rhs),
                     ({m: -c for m, c in row.coeffs.items()}, -row.rhs)]
        for coeffs, rhs in pairs:
            norm.append(({m: _Q(c.numerator, c.denominator)
                          for m, c in coeffs.items()},
                         _Q(rhs.numerator, rhs.denominator)))

    m_rows = len(norm)
    zero, one = _Q(0), _Q(1)
    c_obj = [zero] * nvars
    c_obj[0] = one  # min z_empty

    # dual standard form: min ctilde . w, [A^T | I] w = c_obj, w >= 0
    # variable j < m_rows: y_j with column {mask: coeff}, cost -b_j
    # variable m_rows + t: slack on row t with cost 0
    ctilde = [-rhs for _, rhs in norm] + [zero] * nvars

    basis = list(range(m_rows, m_rows + nvars))  # all slacks
    in_basis = [False] * (m_rows + nvars)
    for j in basis:
        in_basis[j] = True
    xb = list(c_obj)
    binv = [[one if i == j else zero for j in range(nvars)]
            for i in range(nvars)]

    cols = [list(co.items()) for co, _ in norm]
    iterations = 0
    stall = 0
    stall_limit = 4 * nvars
    while True:
        iterations += 1
        # simplex multipliers pi = ctilde_B . Binv
        pi = [zero] * nvars
        for i, bi in enumerate(basis):
            cb = ctilde[bi]
            if cb != 0:
                row = binv[i]
                for j in range(nvars):
                    if row[j] != 0:
                        pi[j] += cb * row[j]
        bland = stall >= stall_limit
        enter = -1
        best_d = zero
        for j in range(m_rows + nvars):
            if in_basis[j]:
                continue
            if j < m_rows:
                d = ctilde[j]
                for mask, coeff in cols[j]:
                    if pi[mask] != 0:
                        d -= pi[mask] * coeff
            else:
                d = -pi[j - m_rows]
            if d < 0:
                if bland:
                    enter = j
                    break
                if d < best_d:
                    best_d = d
                    enter = j
        if enter < 0:
            break  # optimal
        # direction u = Binv . column(enter)
        if enter < m_rows:
            u = [zero] * nvars
            for mask, coeff in cols[enter]:
                for i in range(nvars):
                    if binv[i][mask] != 0:
                        u[i] += binv[i][mask] * coeff
        else:
            t = enter - m_rows
            u = [binv[i][t] for i in range(nvars)]
        # ratio test, smallest basic index on ties
        leave = -1
        best = None
        for i in range(nvars):
            if u[i] > 0:
                ratio = xb[i] / u[i]
                if best is None or ratio < best or \
                        (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            # dual unbounded -> primal infeasible
            return LPSolution("infeasible", None, {}, iterations)
        stall = stall + 1 if best == 0 else 0
        # pivot
        piv = u[leave]
        binv[leave] = [x / piv for x in binv[leave]]
        xb[leave] = xb[leave] / piv
        for i in range(nvars):
            if i != leave and u[i] != 0:
                f = u[i]
                rl = binv[leave]
                ri = binv[i]
                binv[i] = [ri[j] - f * rl[j] for j in range(nvars)]
                xb[i] -= f * xb[leave]
        in_basis[basis[leave]] = False
        in_basis[enter] = True
        basis[leave] = enter

    # primal solution z = -pi; certify and return
    z = [-v for v in pi]
    assignment = {mask: _frac(z[mask]) for mask in range(nvars)}
    for mask, v in assignment.items():
        if v < 0:
            return LPSolution("infeasible", None, {}, iterations)
    for row in lp.rows:
        if not row.check(assignment):
            raise AssertionError(f"solver returned an infeasible point "
                                 f"(row {row.tag!r})")
    optimum = assignment[0]
    return LPSolution("optimal", optimum, assignment, iterations)


# ---------------------------------------------------------------------------
# assembled bounds

def build_problem(netw: IndexCodingNetwork, scheme=None,
                  permute_roles: bool = False,
                  cap: int = DEFAULT_SOURCE_CAP) -> LPProblem:
    """Shannon + flow rows, plus the scheme row and the matroid side rows
    when a scheme ('div'|'nondiv', n) is requested.  The side rows always
    come from the matroid class opposite to the scheme row: the scheme
    inequality constrains the characteristics where the network is NOT
    solvable, while the side rows describe the representations where it is.
    """
    lp = LPProblem(tuple(netw.sources), cap=cap)
    lp.rows.extend(shannon_constraints(lp.sources))
    lp.rows.extend(flow_constraints(netw))
    if scheme is not None:
        kind, n = scheme
        side_class = "div" if kind == "nondiv" else "nondiv"
        lp.rows.extend(matroid_side_constraints(netw, n, side_class))
        builder = scheme_constraint_div if kind == "div" \
            else scheme_constraint_nondiv
        if permute_roles:
            for rm in role_map_permutations(n):
                lp.rows.append(builder(lp, n, rm))
        else:
            lp.rows.append(builder(lp, n))
    return lp


def bound(netw: IndexCodingNetwork, scheme=None, permute_roles: bool = False,
          cap: int = DEFAULT_SOURCE_CAP):
    """(b, B) for the assembled LP; B = 1/b, infinite when b = 0."""
    lp = build_problem(netw, scheme=scheme, permute_roles=permute_roles,
                       cap=cap)
    sol = solve_min(lp)
    if sol.status != "optimal":
        return sol, None, None
    b = sol.optimum
    big = None if b == 0 else Fraction(1) / b
    return sol, b, big


# ---------------------------------------------------------------------------
# entropy points of verified codes

def code_entropy_point(code: LinearIndexCode, lp: LPProblem) -> dict:
    """z_Y = H(X_Y, P)/k for the code's broadcast P: the rank of the
    selected message rows stacked on the encoder rows."""
    enc_rows = [list(r) for r in code.encoder.entries]
    point = {}
    for mask in range(lp.n_vars):
        rows = list(enc_rows)
        for s in lp.subset_of(mask):
            for col in code.symbol_columns(s):
                e = [0] * code.encoder.cols
                e[col] = 1
                rows.append(e)
        point[mask] = Fraction(rank_of_rows(rows, code.p), code.k)
    return point


def check_feasible(lp: LPProblem, assignment: dict) -> list:
    """Rows violated by the assignment (empty list = feasible), exact."""
    return [row for row in lp.rows if not row.check(assignment)]

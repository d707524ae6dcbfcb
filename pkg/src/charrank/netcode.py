"""Index-coding networks, lexicographic products, and linear index codes.

A network lives entirely in its (sources, demands) form: each demand is
a pair (wanted source, side-information set).  Codes are linear maps
over GF(p); decoding correctness is checked by simulation, exhaustive
when the message space is small and sampled otherwise.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .ffla import FpMatrix, PrimeModulus, kernel, rank_of_rows, solve
from .matroid import CircuitSet, VectorMatroid

SIMULATION_CAP = 10**6


@dataclass(frozen=True)
class IndexCodingNetwork:
    """Sources plus demands (wanted source, side-info set of sources)."""

    sources: tuple
    demands: tuple  # of (source, frozenset of sources)

    def __post_init__(self):
        object.__setattr__(self, "sources", tuple(self.sources))
        dem = []
        seen = set()
        for want, given in self.demands:
            given = frozenset(given)
            if want in given:
                raise ValueError(f"demand {want!r} lists itself as side info")
            if want not in self.sources or not given <= set(self.sources):
                raise ValueError(f"demand ({want!r}, ...) outside sources")
            key = (want, given)
            if key not in seen:
                seen.add(key)
                dem.append(key)
        if not self.sources:
            raise ValueError("sources must be non-empty")
        object.__setattr__(self, "demands", tuple(dem))

    def closure(self, z) -> frozenset:
        """One-step closure: z plus sources decodable with side info in z."""
        z = frozenset(z)
        unknown = z - set(self.sources)
        if unknown:
            raise KeyError(f"unknown sources: {sorted(map(str, unknown))}")
        extra = {want for want, given in self.demands if given <= z}
        return z | extra

    def iterated_closure(self, z) -> frozenset:
        cur = frozenset(z)
        while True:
            nxt = self.closure(cur)
            if nxt == cur:
                return cur
            cur = nxt

    def r_cl(self) -> int:
        """min |T| with iterated closure(T) = all sources (brute force)."""
        full = set(self.sources)
        for size in range(len(self.sources) + 1):
            for combo in itertools.combinations(self.sources, size):
                if self.iterated_closure(combo) == full:
                    return size
        return len(self.sources)

    def to_json(self) -> dict:
        return {
            "sources": [_name_json(s) for s in self.sources],
            "demands": [{"want": _name_json(w),
                         "given": sorted(_name_json(g) for g in given)}
                        for w, given in self.demands],
        }

    @staticmethod
    def from_json(obj: dict) -> "IndexCodingNetwork":
        return IndexCodingNetwork(
            tuple(_name_load(s) for s in obj["sources"]),
            tuple((_name_load(d["want"]),
                   frozenset(_name_load(g) for g in d["given"]))
                  for d in obj["demands"]))


def _name_json(name):
    return list(map(_name_json, name)) if isinstance(name, tuple) else name


def _name_load(name):
    return tuple(map(_name_load, name)) if isinstance(name, list) else name


def network_from_circuits(labels, circuit_set: CircuitSet) -> IndexCodingNetwork:
    """One demand (s, C - s) per circuit C and element s of C."""
    labels = tuple(labels)
    demands = []
    for c in sorted(circuit_set, key=lambda c: sorted(map(str, c))):
        if not c <= set(labels):
            raise ValueError(f"circuit {sorted(map(str, c))} outside labels")
        for s in sorted(c, key=str):
            demands.append((s, frozenset(c) - {s}))
    return IndexCodingNetwork(labels, tuple(demands))


def lex_product(n1: IndexCodingNetwork,
                n2: IndexCodingNetwork) -> IndexCodingNetwork:
    """Lexicographic product: sources S1 x S2; each demand pair combines as
    ((s1,s2), (Y1 x S2) | ({s1} x Y2))."""
    sources = tuple((s1, s2) for s1 in n1.sources for s2 in n2.sources)
    demands = []
    for s1, y1 in n1.demands:
        for s2, y2 in n2.demands:
            given = {(t1, t2) for t1 in y1 for t2 in n2.sources}
            given |= {(s1, t2) for t2 in y2}
            demands.append(((s1, s2), frozenset(given)))
    return IndexCodingNetwork(sources, tuple(demands))


def lex_power(n: IndexCodingNetwork, k: int) -> IndexCodingNetwork:
    """Left-fold power N^(. k) = N . N^(. k-1), sources as length-k tuples."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return n
    return lex_product(n, lex_power(n, k - 1))


# ---------------------------------------------------------------------------
# linear codes

@dataclass(frozen=True)
class LinearIndexCode:
    """Linear broadcast code: encoder E maps the stacked k-symbol message
    blocks (in `sources` order) to n_broadcast symbols; decoders, where
    present, map (broadcast, side-info symbols) back to a wanted block."""

    modulus: PrimeModulus
    sources: tuple
    k: int
    encoder: FpMatrix  # n_broadcast x (k * |sources|)
    decoders: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "sources", tuple(self.sources))
        if self.encoder.cols != self.k * len(self.sources):
            raise ValueError("encoder width != k * number of sources")
        if self.encoder.modulus != self.modulus:
            raise ValueError("encoder modulus mismatch")

    @property
    def n_broadcast(self) -> int:
        return self.encoder.rows

    @property
    def p(self) -> int:
        return self.modulus.p

    def symbol_columns(self, source) -> range:
        i = self.sources.index(source)
        return range(i * self.k, (i + 1) * self.k)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "k": self.k,
            "n_broadcast": self.n_broadcast,
            "sources": [_name_json(s) for s in self.sources],
            "encoder": [list(r) for r in self.encoder.entries],
            "decoders": [
                {"want": _name_json(w),
                 "given": sorted(_name_json(g) for g in given),
                 "matrix": [list(r) for r in d.entries]}
                for (w, given), d in self.decoders.items()],
        }

    @staticmethod
    def from_json(obj: dict) -> "LinearIndexCode":
        mod = PrimeModulus(obj["p"])
        sources = tuple(_name_load(s) for s in obj["sources"])
        k = obj["k"]
        enc = FpMatrix.from_rows(obj["encoder"], mod,
                                 cols=k * len(sources))
        decoders = {}
        for d in obj.get("decoders", []):
            key = (_name_load(d["want"]),
                   frozenset(_name_load(g) for g in d["given"]))
            decoders[key] = FpMatrix.from_rows(d["matrix"], mod)
        return LinearIndexCode(mod, sources, k, enc, decoders)


def synthesize_decoder(code: LinearIndexCode, want, given: frozenset):
    """Linear decoder for one demand, or None when the demand is not
    decodable from (broadcast, side info).  Deterministic: the RREF
    particular solution with free coefficients set to zero."""
    given_sorted = sorted(given, key=str)
    rows = list(code.encoder.entries)
    for g in given_sorted:
        for col in code.symbol_columns(g):
            e = [0] * code.encoder.cols
            e[col] = 1
            rows.append(e)
    m = FpMatrix.from_rows(rows, code.modulus, cols=code.encoder.cols)
    mt = m.transpose()
    dec_rows = []
    for col in code.symbol_columns(want):
        target = [1 if j == col else 0 for j in range(code.encoder.cols)]
        x = solve(mt, target)
        if x is None:
            return None
        dec_rows.append(x)
    return FpMatrix.from_rows(dec_rows, code.modulus, cols=m.rows)


def fit_decoders(code: LinearIndexCode, netw: IndexCodingNetwork) -> LinearIndexCode:
    """Attach a decoder for every demand of netw; raises if one is missing."""
    if tuple(netw.sources) != code.sources:
        raise ValueError("code and network sources differ")
    decoders = dict(code.decoders)
    for want, given in netw.demands:
        if (want, given) in decoders:
            continue
        d = synthesize_decoder(code, want, given)
        if d is None:
            raise ValueError(f"demand ({want!r}) not decodable by this code")
        decoders[(want, given)] = d
    return LinearIndexCode(code.modulus, code.sources, code.k, code.encoder,
                           decoders)


def solution_from_representation(m: VectorMatroid,
                                 netw: IndexCodingNetwork) -> LinearIndexCode:
    """(1, |S| - r)-code from a representation: broadcast the parity-check
    symbols of the column matrix; circuits make every demand decodable."""
    if tuple(netw.sources) != tuple(m.labels):
        raise ValueError("network sources must match the matroid ground set")
    parity = kernel(m.matrix)
    code = LinearIndexCode(m.matrix.modulus, tuple(m.labels), 1, parity)
    return fit_decoders(code, netw)


def extend_with_message(code: LinearIndexCode, source) -> LinearIndexCode:
    """Append one source's message block to the broadcast (n_broadcast += k).

    Decoders are dropped; they are re-synthesized against whichever network
    the extended code is asked to solve.
    """
    if source not in code.sources:
        raise KeyError(f"unknown source {source!r}")
    rows = list(code.encoder.entries)
    for col in code.symbol_columns(source):
        e = [0] * code.encoder.cols
        e[col] = 1
        rows.append(e)
    enc = FpMatrix.from_rows(rows, code.modulus, cols=code.encoder.cols)
    return LinearIndexCode(code.modulus, code.sources, code.k, enc)


def repeat_code(code: LinearIndexCode, m: int) -> LinearIndexCode:
    """(k,n)-code applied slice-wise m times: an (mk, mn)-code for the same
    network, message blocks interleaved slice-major within each source."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if m == 1:
        return LinearIndexCode(code.modulus, code.sources, code.k, code.encoder)
    k, n = code.k, code.n_broadcast
    ns = len(code.sources)
    width = m * k * ns
    rows = []
    for j in range(m):
        for r in range(n):
            row = [0] * width
            for s in range(ns):
                for t in range(k):
                    row[s * m * k + j * k + t] = code.encoder.entries[r][s * k + t]
            rows.append(row)
    enc = FpMatrix.from_rows(rows, code.modulus, cols=width)
    return LinearIndexCode(code.modulus, code.sources, m * k, enc)


def compose_lex(code1: LinearIndexCode, net1: IndexCodingNetwork,
                code2: LinearIndexCode, net2: IndexCodingNetwork) -> LinearIndexCode:
    """Composite code for net1 . net2 from an (n_sym, m)-code of net1 and a
    (k, n_sym)-code of net2: the outer encoder is applied to the per-source
    inner broadcasts."""
    if code1.modulus != code2.modulus:
        raise ValueError("codes use different moduli")
    if code1.k != code2.n_broadcast:
        raise ValueError("inner broadcast length must equal outer block size")
    if tuple(net1.sources) != code1.sources or tuple(net2.sources) != code2.sources:
        raise ValueError("codes and networks mismatched")
    prod_sources = tuple((s1, s2) for s1 in net1.sources for s2 in net2.sources)
    k = code2.k
    n1s, n2s = len(net1.sources), len(net2.sources)
    width = k * n1s * n2s
    # inner stage: per s1-slice of the product message, code2's broadcast
    inner = np.zeros((code2.n_broadcast * n1s, width), dtype=np.int64)
    e2 = np.array([list(r) for r in code2.encoder.entries], dtype=np.int64)
    for i in range(n1s):
        inner[i * code2.n_broadcast:(i + 1) * code2.n_broadcast,
              i * k * n2s:(i + 1) * k * n2s] = e2
    e1 = np.array([list(r) for r in code1.encoder.entries], dtype=np.int64)
    combined = (e1 @ inner) % code1.p
    enc = FpMatrix.from_rows(combined.tolist(), code1.modulus, cols=width)
    return LinearIndexCode(code1.modulus, prod_sources, k, enc)


def power_code(code: LinearIndexCode, netw: IndexCodingNetwork,
               k: int) -> LinearIndexCode:
    """(1, n^k)-code for the k-fold lexicographic power of netw, built by
    composing the repeated base code with the (k-1)-power code."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if code.k != 1:
        raise ValueError("power_code needs a (1, n) base code")
    cur_code, cur_net = code, netw
    for _ in range(k - 1):
        rep = repeat_code(code, cur_code.n_broadcast)
        cur_code = compose_lex(rep, netw, cur_code, cur_net)
        cur_net = lex_product(netw, cur_net)
    return cur_code


# ---------------------------------------------------------------------------
# simulation

@dataclass
class SimulationVerdict:
    passed: bool
    mode: str  # "exhaustive" | "sampled"
    tuples_checked: int
    demands_checked: int
    failure: dict | None = None

    def to_json(self) -> dict:
        out = {"passed": self.passed, "mode": self.mode,
               "tuples": self.tuples_checked, "demands": self.demands_checked}
        if self.failure:
            out["failure"] = self.failure
        return out


def simulate(code: LinearIndexCode, netw: IndexCodingNetwork,
             trials: int = 10**4, seed: int = 0,
             cap: int = SIMULATION_CAP) -> SimulationVerdict:
    """Check every demand on message tuples: exhaustive when p^(k|S|) <= cap,
    otherwise on `trials` seeded uniform samples.  Failures are verdict
    data, never exceptions."""
    if tuple(netw.sources) != code.sources:
        return SimulationVerdict(False, "none", 0, 0,
                                 {"reason": "source mismatch"})
    p, kk = code.p, code.k
    width = code.encoder.cols
    space = p ** width
    if space <= cap:
        mode = "exhaustive"
        count = space
        idx = np.arange(count, dtype=np.int64)
        x = np.empty((count, width), dtype=np.int64)
        for j in range(width):
            x[:, j] = (idx // (p ** (width - 1 - j))) % p
    else:
        mode = "sampled"
        count = trials
        rng = np.random.default_rng(seed)
        x = rng.integers(0, p, size=(count, width), dtype=np.int64)

    enc = np.array([list(r) for r in code.encoder.entries],
                   dtype=np.int64).reshape(code.n_broadcast, width)
    bcast = x @ enc.T % p

    decoders = dict(code.decoders)
    for want, given in netw.demands:
        if (want, given) not in decoders:
            d = synthesize_decoder(code, want, given)
            if d is None:
                return SimulationVerdict(
                    False, mode, 0, 0,
                    {"reason": "undecodable demand",
                     "want": _name_json(want),
                     "given": sorted(map(str, given))})
            decoders[(want, given)] = d

    for want, given in netw.demands:
        d = decoders[(want, given)]
        given_cols = []
        for g in sorted(given, key=str):
            given_cols.extend(code.symbol_columns(g))
        dmat = np.array([list(r) for r in d.entries],
                        dtype=np.int64).reshape(kk, code.n_broadcast + len(given_cols))
        inputs = np.concatenate([bcast, x[:, given_cols]], axis=1) \
            if given_cols else bcast
        decoded = inputs @ dmat.T % p
        truth = x[:, list(code.symbol_columns(want))]
        bad = np.nonzero((decoded != truth).any(axis=1))[0]
        if bad.size:
            i = int(bad[0])
            return SimulationVerdict(
                False, mode, count, len(netw.demands),
                {"want": _name_json(want),
                 "given": sorted(map(str, given)),
                 "message": x[i].tolist(),
                 "decoded": decoded[i].tolist(),
                 "expected": truth[i].tolist()})
    return SimulationVerdict(True, mode, count, len(netw.demands))


# ---------------------------------------------------------------------------
# reported capacity formulas

def capacity_report(n: int, k: int) -> dict:
    """Exact rationals for the separation theorem's printed bounds at (n, k),
    plus the subnetwork broadcast bound 1/(|S| - r).  Pure formula
    evaluation; nothing here runs a solver or a simulation."""
    if n < 2 or k < 1:
        raise ValueError("need n >= 2 and k >= 1")
    lower = Fraction(n + 2, n + 3) ** k
    upper_div_solvable = Fraction(5 * n**3 + 22 * n**2 + 31 * n + 14,
                                  5 * n**3 + 22 * n**2 + 31 * n + 15) ** k
    upper_nondiv_solvable = Fraction(n**3 + 8 * n**2 + 19 * n + 14,
                                     n**3 + 8 * n**2 + 19 * n + 15) ** k
    return {
        "n": n,
        "k": k,
        "formula_only": True,
        "lower_bound": lower,
        "upper_bound_case_i": upper_div_solvable,
        "upper_bound_case_ii": upper_nondiv_solvable,
        "base_broadcast_bound": Fraction(1, n + 2),
        "routing_capacity_prime_set": Fraction(n + 2, 2 * n + 3) ** k,
        "routing_capacity_mixed": Fraction(n**2 + 2 * n + 4,
                                           4 * n**2 + 12 * n + 9) ** k,
    }

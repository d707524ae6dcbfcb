"""Command line front end.

Subcommands: verify, circuits, network, bound, simulate, report.
Exit codes: 0 when the run matches the expected pattern, 1 when the
computation succeeds but the outcome is unexpected (a violated
inequality, a failed simulation), 2 for configuration errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from . import ineq, matroid, netcode, lp


def _emit(args, payload: dict) -> None:
    payload = dict(payload)
    payload["version"] = __version__
    text = json.dumps(payload, indent=2, sort_keys=True)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    if getattr(args, "json", False) or not getattr(args, "out", None):
        print(text)


def _expression(name: str, n: int):
    builders = {"div": ineq.thm_div, "nondiv": ineq.thm_nondiv,
                "tight-div": ineq.tight_div, "tight-nondiv": ineq.tight_nondiv}
    if name not in builders:
        raise SystemExit(2)
    return builders[name](n)


def cmd_verify(args) -> int:
    try:
        expr = _expression(args.ineq, args.n)
    except SystemExit:
        print(f"unknown inequality {args.ineq!r}", file=sys.stderr)
        return 2
    inject_prime = args.inject_ln
    expect_violation = args.expect_violation
    if args.counterexample:
        inject_prime = args.prime
        expect_violation = True
    inject = []
    if inject_prime is not None:
        inject.append(ineq.ln_family(args.n, inject_prime,
                                     include_p="tight" in args.ineq))
    ambient = args.ambient_dim or (args.n + 1)
    report = ineq.verify(expr, args.prime, ambient, trials=args.trials,
                         seed=args.seed, inject=inject)
    payload = report.to_json()
    payload["config"] = {"ineq": args.ineq, "n": args.n,
                         "prime": args.prime, "trials": args.trials,
                         "seed": args.seed, "ambient_dim": ambient}
    _emit(args, payload)
    return 0 if report.ok == (not expect_violation) else 1


def cmd_circuits(args) -> int:
    if args.primes:
        primes = [int(x) for x in args.primes.split(",")]
    elif args.prime:
        primes = [args.prime]
    else:
        print("need --prime or --primes", file=sys.stderr)
        return 2
    rep = matroid.verify_classes(args.n, primes)
    payload = {"n": args.n,
               "primes": {str(p): info for p, info in rep["primes"].items()}}
    _emit(args, payload)
    ok = all(info["class_subset_of_circuits"]
             for info in rep["primes"].values())
    return 0 if ok else 1


def _build_network(args) -> netcode.IndexCodingNetwork:
    m = matroid.ln_matroid(args.n, args.prime)
    cls = matroid.class_a(args.n) if args.network == "A" \
        else matroid.class_b(args.n)
    return netcode.network_from_circuits(m.labels, cls)


def cmd_network(args) -> int:
    netw = _build_network(args)
    payload = netw.to_json()
    payload["r_cl"] = netw.r_cl()
    payload["config"] = {"network": args.network, "n": args.n,
                         "prime": args.prime}
    _emit(args, payload)
    return 0


def cmd_bound(args) -> int:
    netw = _build_network(args)
    scheme = None
    if args.scheme != "none":
        scheme = (args.scheme, args.n)
    try:
        sol, b, big = lp.bound(netw, scheme=scheme,
                               permute_roles=args.permute_roles,
                               cap=args.cap_sources)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    payload = sol.to_json()
    payload["config"] = {"network": args.network, "n": args.n,
                         "prime": args.prime, "scheme": args.scheme,
                         "permute_roles": args.permute_roles}
    _emit(args, payload)
    if sol.status != "optimal":
        return 1
    if args.expect is not None:
        return 0 if b >= Fraction(args.expect) else 1
    return 0


def cmd_simulate(args) -> int:
    netw = _build_network(args)
    code = netcode.solution_from_representation(
        matroid.ln_matroid(args.n, args.prime), netw)
    if args.power > 1:
        code = netcode.power_code(code, netw, args.power)
        netw = netcode.lex_power(netw, args.power)
    verdict = netcode.simulate(code, netw, trials=args.trials,
                               seed=args.seed, cap=args.cap_states)
    payload = verdict.to_json()
    payload["config"] = {"network": args.network, "n": args.n,
                         "prime": args.prime, "power": args.power,
                         "trials": args.trials, "seed": args.seed}
    _emit(args, payload)
    return 0 if verdict.passed else 1


def cmd_report(args) -> int:
    rep = netcode.capacity_report(args.n, args.k)
    payload = {key: str(val) if isinstance(val, Fraction) else val
               for key, val in rep.items()}
    payload["config"] = {"n": args.n, "k": args.k}
    _emit(args, payload)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="charrank")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true",
                       help="print the JSON report to stdout")
        p.add_argument("--out", help="write the JSON report to a file")

    p = sub.add_parser("verify", help="randomized inequality verification")
    p.add_argument("--ineq", required=True,
                   choices=["div", "nondiv", "tight-div", "tight-nondiv"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ambient-dim", type=int, default=None)
    p.add_argument("--inject-ln", type=int, default=None, metavar="PRIME",
                   help="inject the guide-matrix family over this prime")
    p.add_argument("--expect-violation", action="store_true")
    p.add_argument("--counterexample", action="store_true",
                   help="inject the guide family for this prime and expect "
                        "a violation")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("circuits", help="guide matroid circuit census")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--prime", type=int, default=None)
    p.add_argument("--primes", default=None,
                   help="comma-separated list, e.g. 2,3,5")
    common(p)
    p.set_defaults(func=cmd_circuits)

    for name, fn, extra in (
            ("network", cmd_network, ()),
            ("bound", cmd_bound, ("scheme",)),
            ("simulate", cmd_simulate, ("sim",))):
        p = sub.add_parser(name)
        p.add_argument("--network", choices=["A", "B"], required=True)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--prime", type=int, required=True)
        if "scheme" in extra:
            p.add_argument("--scheme", choices=["none", "div", "nondiv"],
                           default="none")
            p.add_argument("--permute-roles", action="store_true")
            p.add_argument("--cap-sources", type=int,
                           default=lp.DEFAULT_SOURCE_CAP)
            p.add_argument("--expect", default=None,
                           help="exit 1 unless the bound reaches this value")
        if "sim" in extra:
            p.add_argument("--power", type=int, default=1)
            p.add_argument("--trials", type=int, default=10000)
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--cap-states", type=int, default=10**6)
        common(p)
        p.set_defaults(func=fn)

    p = sub.add_parser("report", help="capacity bound summary")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())

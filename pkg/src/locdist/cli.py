"""Command-line driver.

Exit codes: 0 success, 1 negative verdict (states not orthogonal, required
measurement infeasible, measurement not orthogonality-preserving), 2 input
errors.
"""
from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import __version__
from .cases import CASES
from .io import (
    DocumentError,
    dumps,
    ghz_params_from_doc,
    loads,
    measurement_from_doc,
    measurement_to_doc,
    report_doc,
    stateset_from_doc,
    stateset_to_doc,
)
from .ntop import (
    InfeasibleError,
    NotOrthogonalError,
    construct_ntop_povm,
    ntop_check,
    ntop_check_all,
    verify_orthogonality_preserving,
)
from .operators import DEFAULT_TOL
from .protocol import (
    ProtocolDefect,
    alice_rank_one_coefficients,
    ghz_family_verdict,
    one_way_protocol_2xn,
    second_round_report,
    simulate_protocol,
)
from .statespace import check_mutual_orthogonality

TOL_ENV = "LOCDIST_TOL"


class InputError(Exception):
    pass


def _default_tol() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return DEFAULT_TOL
    try:
        return float(raw)
    except ValueError:
        raise InputError(f"invalid {TOL_ENV} value {raw!r}") from None


def _read_json(path: str):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    return loads(text)


def _load_states(path: str):
    return stateset_from_doc(_read_json(path))


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _fmt_matrix(m: np.ndarray) -> str:
    def c(z):
        z = complex(z)
        if abs(z.imag) < 1e-12:
            return f"{z.real: .6f}"
        return f"{z.real: .6f}{z.imag:+.6f}i"
    return "\n".join("    [" + ", ".join(c(z) for z in row) + "]" for row in m)


def _require_orthogonal(states, tol) -> bool:
    rep = check_mutual_orthogonality(states, tol)
    if not rep.ok:
        i, j = rep.worst_pair
        print(f"not mutually orthogonal: |<{states.names[i]}|{states.names[j]}>| = "
              f"{rep.worst_overlap:.3e}")
    return rep.ok


def cmd_check(args) -> int:
    states = _load_states(args.file)
    if not _require_orthogonal(states, args.tol):
        return 1
    check = ntop_check_all(states, args.tol)
    print(f"{len(states)} states on dims {list(states.dims)}, tol {args.tol:g}")
    for r in check.reports:
        print("  " + r.summary_line())
    if check.feasible_parties:
        print(f"summary: {check.conclusion.value} "
              f"(parties able to go first: {list(check.feasible_parties)})")
    else:
        print(f"summary: {check.conclusion.value} (no observer can make an NTOP measurement)")
    if args.json:
        _write(args.json, dumps(report_doc(states, check, args.tol)))
    return 0


def cmd_construct_povm(args) -> int:
    states = _load_states(args.file)
    if not _require_orthogonal(states, args.tol):
        return 1
    report = ntop_check(states, _party(args.party, states), args.tol)
    print(report.summary_line())
    if not report.feasible:
        print(f"infeasible: the {report.t} independent Gamma/Delta operators span all "
              f"{report.d ** 2 - 1} SU({report.d}) generators, so every "
              f"orthogonality-preserving measurement is trivial")
        return 1
    meas = construct_ntop_povm(report)
    pres = verify_orthogonality_preserving(meas, states, args.tol)
    for k, e in enumerate(meas.elements):
        print(f"  element {k}:")
        print(_fmt_matrix(e))
    print(f"  completeness residual {meas.completeness_residual():.3e}, "
          f"max overlap {pres.worst_overlap:.3e}, trivial={pres.trivial}")
    if args.json:
        _write(args.json, dumps(measurement_to_doc(meas)))
    return 0


def cmd_one_way(args) -> int:
    states = _load_states(args.file)
    if not _require_orthogonal(states, args.tol):
        return 1
    try:
        proto = one_way_protocol_2xn(states, args.tol)
    except InfeasibleError as exc:
        print(f"no one-way protocol: {exc}")
        return 1
    print(f"Alice = party {proto.alice_party} (qubit), Bob = party {proto.bob_party}")
    bs = alice_rank_one_coefficients(proto)
    for k, (e, b) in enumerate(zip(proto.alice.elements, bs)):
        print(f"  Alice projector {k} (sum b^2 = {float(np.sum(b ** 2)):.12f}):")
        print(_fmt_matrix(e))
    for k, br in enumerate(proto.bob_branches):
        labels = [states.names[i] if i is not None else "impossible" for i in br.outcome_map]
        print(f"  after Alice outcome {k}, Bob's outcomes identify: {labels}")
    failed = False
    for i in range(len(states)):
        sim = simulate_protocol(proto, states, i, args.tol)
        failed |= not sim.success
        branches = ", ".join(f"({b.alice_outcome},{b.bob_outcome}) p={b.probability:.6f}"
                             for b in sim.branches if b.reachable)
        print(f"  {states.names[i]}: success probability {sim.success_probability:.1f} "
              f"[{branches}]")
    return 1 if failed else 0


def cmd_second_round(args) -> int:
    states = _load_states(args.file)
    if not _require_orthogonal(states, args.tol):
        return 1
    party = _party(args.party, states)
    meas = measurement_from_doc(_read_json(args.measurement), party)
    if meas.d != states.dims[party]:
        raise InputError(f"dimension mismatch: measurement is {meas.d}-dimensional, "
                         f"party {party} has d = {states.dims[party]}")
    pres = verify_orthogonality_preserving(meas, states, args.tol)
    if not pres.ok:
        print(f"measurement is not orthogonality-preserving (overlap {pres.worst_overlap:.3e})")
        return 1
    if pres.trivial:
        print("note: measurement is trivial")
    rounds = second_round_report(states, party, meas, args.tol)
    for rd in rounds:
        zero = [states.names[i] for i, z in enumerate(rd.outcome.zero_flags) if z]
        print(f"outcome {rd.outcome.index}: annihilated states {zero or 'none'}")
        for p in sorted(rd.reports):
            print("  " + rd.reports[p].summary_line())
        if rd.blocked:
            print("  no other observer can go next: this first measurement is inappropriate")
    return 0


def cmd_ghz_verdict(args) -> int:
    params = ghz_params_from_doc(_read_json(args.params))
    v = ghz_family_verdict(params, args.tol, n_samples=args.samples, seed=args.seed)
    print(f"conclusion: {v.conclusion.value}, case ({v.case})")
    print(f"  {v.evidence['label']}")
    for line in v.evidence["reports"]:
        print("  " + line)
    if "falsification" in v.evidence:
        f = v.evidence["falsification"]
        print(f"  sampled Alice measurements obstructed: {f['n_obstructed']}/{f['n_samples']}")
    if args.json:
        doc = {"format_version": 1, "tool_version": __version__, "tolerance": args.tol,
               "conclusion": v.conclusion.value, "case": v.case,
               "evidence": {k: val for k, val in v.evidence.items()}}
        doc["evidence"]["t"] = {str(k): val for k, val in doc["evidence"]["t"].items()}
        _write(args.json, dumps(doc))
    return 0


def cmd_examples(args) -> int:
    if args.name not in CASES:
        raise InputError(f"unknown example {args.name!r}; choose from {', '.join(CASES)}")
    sys.stdout.write(dumps(stateset_to_doc(CASES[args.name]())))
    return 0


def _party(p: int, states) -> int:
    if not 0 <= p < states.n_parties:
        raise InputError(f"party {p} out of range for {states.n_parties} parties")
    return p


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="locdist", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("--tol", type=float, default=None,
                    help=f"numerical tolerance (default {DEFAULT_TOL:g} or ${TOL_ENV})")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="per-party NTOP report and summary verdict")
    p.add_argument("file", help="state-set JSON, '-' for stdin")
    p.add_argument("--json", metavar="OUT", help="write a report document ('-' for stdout)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("construct-povm", help="two-outcome NTOP measurement for a party")
    p.add_argument("file")
    p.add_argument("--party", type=int, required=True)
    p.add_argument("--json", metavar="OUT", help="write the measurement document")
    p.set_defaults(func=cmd_construct_povm)

    p = sub.add_parser("one-way", help="synthesize and simulate a 2 x n one-way protocol")
    p.add_argument("file")
    p.set_defaults(func=cmd_one_way)

    p = sub.add_parser("second-round", help="NTOP reports after a first measurement")
    p.add_argument("file")
    p.add_argument("--party", type=int, required=True, help="party performing the measurement")
    p.add_argument("--measurement", required=True, help="measurement JSON")
    p.set_defaults(func=cmd_second_round)

    p = sub.add_parser("ghz-verdict", help="verdict for the three-qubit GHZ family")
    p.add_argument("--params", required=True, help="parameter JSON")
    p.add_argument("--samples", type=int, default=40)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", metavar="OUT")
    p.set_defaults(func=cmd_ghz_verdict)

    p = sub.add_parser("examples", help="emit a built-in state set as JSON")
    p.add_argument("name", help=", ".join(CASES))
    p.set_defaults(func=cmd_examples)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.tol is None:
            args.tol = _default_tol()
        if not args.tol > 0:
            raise InputError("--tol must be positive")
        return args.func(args)
    except (InputError, DocumentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NotOrthogonalError as exc:
        print(f"not mutually orthogonal: {exc}")
        return 1
    except ProtocolDefect as exc:
        print(f"protocol defect: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

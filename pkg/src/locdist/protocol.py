"""What happens after the first local measurement.

Residual sets, the qubit-first one-way protocol for ``2 x n`` systems, its
branch-by-branch simulation, and the verdict for the three-qubit GHZ family.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .cases import GHZ_X_BITS, GhzFamilyParams, case_ghz3
from .ntop import (
    Conclusion,
    InfeasibleError,
    LocalMeasurement,
    NtopReport,
    is_rank_one,
    ntop_check,
    ntop_check_all,
    projective_ntop_qubit,
    verify_orthogonality_preserving,
)
from .operators import DEFAULT_TOL, as_matrix
from .statespace import StateSet, apply_local


class ProtocolDefect(RuntimeError):
    """An internal consistency check of a synthesized protocol failed."""


@dataclass(frozen=True)
class ResidualOutcome:
    index: int
    residual: StateSet
    zero_flags: tuple


def apply_local_kraus(states: StateSet, party: int, kraus, tol: float = DEFAULT_TOL,
                      index: int = 0) -> ResidualOutcome:
    """Unnormalized post-measurement states ``(M on party) |phi_i>``."""
    party = states.check_party(party)
    m = as_matrix(kraus, states.dims[party])
    out = apply_local(states, party, m)
    residual = StateSet(states.dims, out, states.names)
    scale = np.maximum(1.0, states.norms())
    zero = tuple(bool(z) for z in residual.norms() <= tol * scale)
    return ResidualOutcome(index, residual, zero)


@dataclass(frozen=True)
class SecondRoundOutcome:
    outcome: ResidualOutcome
    reports: dict  # party -> NtopReport

    @property
    def blocked(self) -> bool:
        """No party other than the first performer can make an NTOP
        measurement on this residual set."""
        return not any(r.feasible for r in self.reports.values())


def second_round_report(states: StateSet, first_party: int, meas: LocalMeasurement,
                        tol: float = DEFAULT_TOL) -> list[SecondRoundOutcome]:
    """NTOP reports of every other party, for each outcome of ``meas``."""
    first_party = states.check_party(first_party)
    if meas.party != first_party:
        raise ValueError(f"measurement acts on party {meas.party}, not {first_party}")
    pres = verify_orthogonality_preserving(meas, states, tol)
    if not pres.ok:
        raise ValueError(
            f"measurement is not orthogonality-preserving (overlap {pres.worst_overlap:.3e})")
    results = []
    for m, k in enumerate(meas.kraus_operators()):
        res = apply_local_kraus(states, first_party, k, tol, index=m)
        reports = {p: ntop_check(res.residual, p, tol)
                   for p in range(states.n_parties) if p != first_party}
        results.append(SecondRoundOutcome(res, reports))
    return results


# ---------------------------------------------------------------- one-way 2 x n


@dataclass(frozen=True)
class BobBranch:
    measurement: LocalMeasurement
    outcome_map: tuple  # projector index -> state index, None for the remainder


@dataclass(frozen=True)
class OneWayProtocol:
    dims: tuple
    alice_party: int
    bob_party: int
    alice: LocalMeasurement
    alice_vectors: tuple = field(repr=False)
    bob_branches: tuple
    alice_report: NtopReport = field(repr=False)


def _conditional(states: StateSet, alice_party: int, alpha: np.ndarray) -> np.ndarray:
    """Rows ``(<alpha| x I) |phi_i>`` on Bob's side."""
    out = []
    for i in range(len(states)):
        mat = states.tensor(i)
        out.append(alpha.conj() @ mat if alice_party == 0 else mat @ alpha.conj())
    return np.array(out)


def one_way_protocol_2xn(states: StateSet, tol: float = DEFAULT_TOL) -> OneWayProtocol:
    """Alice (the qubit) measures a rank-one projective NTOP measurement,
    Bob then projects onto the conditional states he is left with."""
    if states.n_parties != 2:
        raise ValueError("one-way protocol needs exactly two parties")
    candidates = [p for p in (0, 1) if states.dims[p] == 2]
    if not candidates:
        raise ValueError(f"one party must be a qubit, dims are {states.dims}")
    tried = [ntop_check(states, p, tol) for p in candidates]
    feasible = [r for r in tried if r.feasible]
    if not feasible:
        detail = ", ".join(f"party {r.party} has t = {r.t}" for r in tried)
        raise InfeasibleError(f"no qubit party can go first ({detail} = d^2-1)")
    report = feasible[0]
    alice_party = report.party
    bob_party = 1 - alice_party
    alice = projective_ntop_qubit(report)
    n = states.dims[bob_party]
    norms = states.norms()
    vectors, branches = [], []
    for k, proj in enumerate(alice.elements):
        w, v = np.linalg.eigh(proj)
        alpha = v[:, -1]
        vectors.append(alpha)
        cond = _conditional(states, alice_party, alpha)
        keep = [i for i in range(len(states))
                if np.linalg.norm(cond[i]) > tol * max(1.0, norms[i])]
        for a in range(len(keep)):
            for b in range(a + 1, len(keep)):
                i, j = keep[a], keep[b]
                ov = abs(np.vdot(cond[i], cond[j]))
                if ov > tol * max(1.0, np.linalg.norm(cond[i]) * np.linalg.norm(cond[j])):
                    raise ProtocolDefect(
                        f"conditional states {i}, {j} not orthogonal after Alice outcome {k} "
                        f"(overlap {ov:.3e})")
        projectors, omap = [], []
        for i in keep:
            u = cond[i] / np.linalg.norm(cond[i])
            projectors.append(np.outer(u, u.conj()))
            omap.append(i)
        rest = np.eye(n, dtype=complex) - sum(projectors, np.zeros((n, n), dtype=complex))
        if np.linalg.norm(rest) > 1e-9:
            projectors.append(rest)
            omap.append(None)
        meas = LocalMeasurement(bob_party, tuple(projectors), tuple(projectors))
        branches.append(BobBranch(meas, tuple(omap)))
    return OneWayProtocol(states.dims, alice_party, bob_party, alice, tuple(vectors),
                          tuple(branches), report)


def alice_rank_one_coefficients(protocol: OneWayProtocol) -> list[np.ndarray]:
    """Coefficients ``b`` with ``E = I/2 + 1/2 sum b_n lambda_n`` for each
    Alice element, expanded in her complement generators."""
    comp = protocol.alice_report.complement
    out = []
    for e in protocol.alice.elements:
        out.append(np.array([np.real(np.trace(e @ lam)) for lam in comp]))
    return out


def alice_elements_rank_one(protocol: OneWayProtocol, tol: float = 1e-8) -> bool:
    comp = protocol.alice_report.complement
    return all(is_rank_one(b, comp, 2, tol) for b in alice_rank_one_coefficients(protocol))


class Branch(NamedTuple):
    alice_outcome: int
    bob_outcome: int
    probability: float
    identified: int | None
    reachable: bool


class SimulationResult(NamedTuple):
    state_index: int
    branches: list
    success: bool
    success_probability: float
    total_probability: float


def simulate_protocol(protocol: OneWayProtocol, states: StateSet, state_index: int,
                      tol: float = DEFAULT_TOL) -> SimulationResult:
    """Enumerate every (Alice, Bob) outcome pair with its exact probability."""
    if tuple(states.dims) != tuple(protocol.dims):
        raise ValueError(f"protocol dims {protocol.dims} do not match set dims {states.dims}")
    if not 0 <= state_index < len(states):
        raise IndexError(f"state index {state_index} out of range")
    single = StateSet(states.dims, states.states[state_index:state_index + 1])
    norm2 = float(np.vdot(single.states[0], single.states[0]).real)
    if norm2 == 0:
        raise ValueError("cannot simulate a zero state")
    branches = []
    for k, pa in enumerate(protocol.alice.elements):
        after_a = StateSet(states.dims, apply_local(single, protocol.alice_party, pa))
        bob = protocol.bob_branches[k]
        for l, qb in enumerate(bob.measurement.elements):
            v = apply_local(after_a, protocol.bob_party, qb)[0]
            prob = float(np.vdot(v, v).real) / norm2
            branches.append(Branch(k, l, prob, bob.outcome_map[l], prob > tol))
    success = all(b.identified == state_index for b in branches if b.reachable)
    p_ok = sum(b.probability for b in branches if b.identified == state_index)
    total = sum(b.probability for b in branches)
    return SimulationResult(state_index, branches, success, p_ok, total)


# ---------------------------------------------------------------- GHZ family


@dataclass(frozen=True)
class Verdict:
    conclusion: Conclusion
    case: str | None
    evidence: dict


def bob_condition_residual(x, element: np.ndarray) -> float:
    """Residual of ``x3 p + x6 <0|E|1> = x4 p + x5 <1|E|0> = 0``; Bob can go
    second after Alice's outcome ``E`` only when this vanishes."""
    p = np.real(np.trace(element)) / 2
    return float(max(abs(x[2] * p + x[5] * element[0, 1]),
                     abs(x[3] * p + x[4] * element[1, 0])))


def charlie_condition_residual(x, element: np.ndarray) -> float:
    """Residual of ``x3 <1|E|0> + x6 p = x4 <0|E|1> + x5 p = 0`` (Charlie)."""
    p = np.real(np.trace(element)) / 2
    return float(max(abs(x[2] * element[1, 0] + x[5] * p),
                     abs(x[3] * element[0, 1] + x[4] * p)))


def _frame_bits(party: int) -> list[str]:
    """Alice's pivot order ``x3, x4, x5, x6`` mapped into ``party``'s frame by
    exchanging the bits of party 0 and ``party``."""
    order = ["010", "101", "001", "110"]
    if party == 0:
        return order
    out = []
    for bits in order:
        b = list(bits)
        b[0], b[party] = b[party], b[0]
        out.append("".join(b))
    return out


def _flip(bits: str, party: int) -> str:
    b = list(bits)
    b[party] = "1" if b[party] == "0" else "0"
    return "".join(b)


def ghz_subcase(params: GhzFamilyParams, party: int, tol: float = DEFAULT_TOL) -> dict:
    """Case (B) or (C) seen from a first party whose odd pair vanishes.

    The pivot is the first nonzero coefficient in the party's frame; its
    partner differs from it only in the first party's bit.  A zero partner
    gives case (B), otherwise (C).
    """
    for bits in _frame_bits(party):
        if abs(params.coefficient(bits)) > tol:
            partner = _flip(bits, party)
            case = "B" if abs(params.coefficient(partner)) <= tol else "C"
            return {"party": party, "case": case, "pivot": bits, "partner": partner}
    raise ValueError("no nonzero coefficient outside the odd pair")


def sample_alice_element(rng: np.random.Generator, x, targeted: bool) -> np.ndarray:
    p = rng.uniform(0.2, 0.8)
    room = min(p, 1 - p)
    o01 = None
    if targeted:
        # try to satisfy one scalar equation of the Bob or Charlie condition exactly
        eqs = []
        if abs(x[5]) > 0:
            eqs.append(-x[2] * p / x[5])
        if abs(x[4]) > 0:
            eqs.append(np.conj(-x[3] * p / x[4]))
        if abs(x[2]) > 0:
            eqs.append(np.conj(-x[5] * p / x[2]))
        if abs(x[3]) > 0:
            eqs.append(-x[4] * p / x[3])
        eqs = [o for o in eqs if 0 < abs(o) < room]
        if eqs:
            o01 = eqs[rng.integers(len(eqs))]
    if o01 is None:
        o01 = room * rng.uniform(0.05, 0.95) * np.exp(1j * rng.uniform(0, 2 * np.pi))
    return np.array([[p, o01], [np.conj(o01), p]], dtype=complex)


def ghz_falsification_sample(params: GhzFamilyParams, n_samples: int = 40, seed: int = 0,
                             tol: float = DEFAULT_TOL) -> dict:
    """Sample two-outcome NTOP measurements for Alice and run the second round.

    A sample is obstructed when some outcome leaves neither Bob nor Charlie
    able to go next.  Also records whether the engine's Bob/Charlie verdicts
    agree with the Bob and Charlie condition residuals.
    """
    states = case_ghz3(params)
    x = params.x
    rng = np.random.default_rng(seed)
    obstructed = consistent = 0
    rows = []
    for n in range(n_samples):
        e = sample_alice_element(rng, x, targeted=(n % 2 == 1))
        meas = LocalMeasurement(0, (e, np.eye(2) - e))
        rounds = second_round_report(states, 0, meas, tol)
        ok = True
        outcomes = []
        for elem, rd in zip(meas.elements, rounds):
            rb, rc = bob_condition_residual(x, elem), charlie_condition_residual(x, elem)
            bob, charlie = rd.reports[1].feasible, rd.reports[2].feasible
            ok &= (bob == (rb <= 1e-8)) and (charlie == (rc <= 1e-8))
            outcomes.append({"bob_feasible": bob, "charlie_feasible": charlie,
                             "bob_condition_residual": rb, "charlie_condition_residual": rc})
        blocked = any(rd.blocked for rd in rounds)
        obstructed += blocked
        consistent += ok
        rows.append({"obstructed": blocked, "outcomes": outcomes})
    return {"n_samples": n_samples, "seed": seed, "n_obstructed": obstructed,
            "n_consistent_with_conditions": consistent, "samples": rows}


def ghz_family_verdict(params: GhzFamilyParams, tol: float = DEFAULT_TOL,
                       n_samples: int = 40, seed: int = 0) -> Verdict:
    """LOCC verdict for the GHZ family with an evidence trace.

    (A) ``x1 != 0`` or ``x2 != 0``: Alice cannot go first (t_A = 3).
    (B) ``x1 = x2 = 0`` and the pivot's partner is zero: some outcome of any
        nontrivial Alice measurement blocks both Bob and Charlie.
    (C) ``x1 = x2 = 0`` and the partner is nonzero: continuing after every
        outcome would force all off-diagonals ``<0|E_m|1>`` to share one
        phase, which completeness forbids.

    (B) and (C) are analytic; the evidence carries sampled Alice
    measurements as corroboration, not proof.  A sampled measurement that
    is not obstructed would contradict the analysis and downgrades the
    conclusion to ``Inconclusive``.
    """
    states = case_ghz3(params)
    check = ntop_check_all(states, tol)
    t_values = {r.party: r.t for r in check.reports}
    evidence = {
        "t": t_values,
        "feasible_parties": list(check.feasible_parties),
        "reports": [r.summary_line() for r in check.reports],
    }
    x = params.x
    conclusion = Conclusion.LOCC_INDISTINGUISHABLE
    if abs(x[0]) > tol or abs(x[1]) > tol:
        case = "A"
        evidence["label"] = "Alice cannot go first"
        evidence["t_A"] = t_values[0]
        # the same argument with Bob or Charlie in Alice's role
        evidence["other_first_parties"] = [ghz_subcase(params, p, tol)
                                           for p in check.feasible_parties if p != 0]
        if t_values[0] != 3:
            conclusion = Conclusion.INCONCLUSIVE
            evidence["defect"] = "t_A != 3 although x1 or x2 is nonzero"
    else:
        sub = ghz_subcase(params, 0, tol)
        case = sub["case"]
        evidence.update(sub)
        evidence["label"] = ("some Alice outcome blocks Bob and Charlie" if case == "B"
                             else "continuing after every outcome contradicts completeness")
        sample = ghz_falsification_sample(params, n_samples, seed, tol)
        evidence["falsification"] = {k: v for k, v in sample.items() if k != "samples"}
        if sample["n_obstructed"] != sample["n_samples"]:
            conclusion = Conclusion.INCONCLUSIVE
            evidence["defect"] = "a sampled Alice measurement was not obstructed"
    return Verdict(conclusion, case, evidence)


def random_ghz_params(rng: np.random.Generator, case: str) -> GhzFamilyParams:
    """Random family member in case ``'A'``, ``'B'`` or ``'C'`` (Alice frame)."""
    st = rng.normal(size=2) + 1j * rng.normal(size=2)
    st /= np.linalg.norm(st)
    x = np.zeros(6, dtype=complex)
    if case == "A":
        x[:] = rng.normal(size=6) + 1j * rng.normal(size=6)
        if rng.uniform() < 0.5:
            x[rng.integers(2)] = 0
    elif case == "B":
        # pivot x3, partner x6 zero; x4/x5 free
        x[2:5] = rng.normal(size=3) + 1j * rng.normal(size=3)
    elif case == "C":
        x[2:6] = rng.normal(size=4) + 1j * rng.normal(size=4)
    else:
        raise ValueError(f"unknown case {case!r}")
    x /= np.linalg.norm(x)
    return GhzFamilyParams(st[0], st[1], tuple(x))

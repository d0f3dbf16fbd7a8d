"""Acceptance suite: one test per criterion, each reported as a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py`` (the lines appear in the
terminal summary) or directly as ``python tests/test_acceptance.py``.
"""
import itertools
import sys
from functools import lru_cache

import numpy as np

from conftest import record
from helpers import crandn, random_orthogonal_set, random_two_state_2xn
from locdist import (
    Conclusion,
    GhzFamilyParams,
    LocalMeasurement,
    StateSet,
    case_bells,
    case_bennett9,
    case_ghz3,
    case_upb4,
    case_upb4_variation,
    construct_ntop_povm,
    gamma_delta,
    ghz_family_verdict,
    ntop_check,
    ntop_check_all,
    ntop_oracle,
    one_way_protocol_2xn,
    second_round_report,
    simulate_protocol,
)
from locdist.protocol import alice_rank_one_coefficients

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]])
SZ = np.diag([1.0, -1.0]).astype(complex)
R2 = np.sqrt(2)


def _close(a, b, tol):
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)))) <= tol


def _unit(v):
    v = np.asarray(v, dtype=complex)
    return v / np.linalg.norm(v)


def _params(rng, x):
    st = _unit(crandn(rng, 2))
    return GhzFamilyParams(st[0], st[1], tuple(_unit(x)))


# -- instance generators (deterministic, shared with criterion 9)


@lru_cache(maxsize=None)
def ghz_draws():
    """100 parameter draws: generic, x1 or x2 alone vanishing, near-threshold
    x1 or x2, and x1 = x2 = 0 exactly."""
    rng = np.random.default_rng(3003)
    out = []
    for k in range(100):
        x = crandn(rng, 6)
        kind = k % 5
        if kind == 1:
            x[rng.integers(2)] = 0
        elif kind == 2:
            x = _unit(x)
            x[0], x[1] = 0, 0
            x[rng.integers(2)] = 1e-5 * np.exp(2j * np.pi * rng.uniform())
        elif kind >= 3:
            x[0] = x[1] = 0
            if rng.uniform() < 0.4:
                x[rng.choice([2, 3, 4, 5], size=2, replace=False)] = 0
        out.append(_params(rng, x))
    return out


def _bob_residual(x, e):
    p = np.real(np.trace(e)) / 2
    return max(abs(x[2] * p + x[5] * e[0, 1]), abs(x[3] * p + x[4] * e[1, 0]))


def _charlie_residual(x, e):
    p = np.real(np.trace(e)) / 2
    return max(abs(x[2] * e[1, 0] + x[5] * p), abs(x[3] * e[0, 1] + x[4] * p))


@lru_cache(maxsize=None)
def second_round_samples():
    """100 (params, Alice element) pairs with x1 = x2 = 0.  A third of them are
    built so that Bob's condition holds exactly, a third so that Charlie's
    does, the rest are generic."""
    rng = np.random.default_rng(4004)
    out = []
    for k in range(100):
        p = rng.uniform(0.2, 0.8)
        room = min(p, 1 - p)
        o01 = room * rng.uniform(0.05, 0.95) * np.exp(2j * np.pi * rng.uniform())
        e = np.array([[p, o01], [np.conj(o01), p]])
        x = np.zeros(6, dtype=complex)
        x[2:6] = crandn(rng, 4)
        if k % 3 == 1:
            x[5] = -x[2] * p / o01
            x[4] = -x[3] * p / np.conj(o01)
        elif k % 3 == 2:
            x[5] = -x[2] * np.conj(o01) / p
            x[4] = -x[3] * o01 / p
        if k % 7 == 0:
            x[5] = 0
        out.append((_params(rng, x), e))
    return out


@lru_cache(maxsize=None)
def verdict_draws():
    """50 draws with known case label: (A) x1 or x2 nonzero, (B) x1 = x2 = 0
    and x6 = 0 with x3 != 0, (C) x1 = x2 = 0 with x3, x6 != 0."""
    rng = np.random.default_rng(5005)
    out = []
    for k in range(50):
        case = "ABC"[k % 3]
        x = crandn(rng, 6)
        if case == "A" and k % 2:
            x[rng.integers(2)] = 0
        if case in "BC":
            x[0] = x[1] = 0
            if rng.uniform() < 0.3:
                x[rng.choice([3, 4])] = 0
        if case == "B":
            x[5] = 0
        out.append((case, _params(rng, x)))
    return out


@lru_cache(maxsize=None)
def random_sets():
    rng = np.random.default_rng(8008)
    return [random_orthogonal_set(rng) for _ in range(500)]


def feasible_instances():
    """(label, states, party) for every feasible party met in criteria 3-8."""
    inst = []
    for k, params in enumerate(ghz_draws()):
        s = case_ghz3(params)
        for p in range(3):
            if ntop_check(s, p).feasible:
                inst.append((f"ghz draw {k}", s, p))
    for k, (params, e) in enumerate(second_round_samples()):
        rounds = second_round_report(case_ghz3(params), 0,
                                     LocalMeasurement(0, (e, np.eye(2) - e)))
        for m, rd in enumerate(rounds):
            res = rd.outcome.residual
            for p in (1, 2):
                if rd.reports[p].feasible:
                    inst.append((f"second round {k}/{m}", res, p))
    for k, (_, params) in enumerate(verdict_draws()):
        s = case_ghz3(params)
        for p in range(3):
            if ntop_check(s, p).feasible:
                inst.append((f"verdict draw {k}", s, p))
    for pair in itertools.combinations(range(4), 2):
        s = StateSet((2, 2), case_bells(4).states[list(pair)])
        for p in range(2):
            if ntop_check(s, p).feasible:
                inst.append((f"bells {pair}", s, p))
    for p in range(2):
        if ntop_check(case_bennett9(), p).feasible:
            inst.append(("bennett9", case_bennett9(), p))
    for k, s in enumerate(random_sets()):
        for p in range(s.n_parties):
            if ntop_check(s, p).feasible:
                inst.append((f"random set {k}", s, p))
    return inst


# -- criteria


def test_criterion_01_upb4():
    s = case_upb4()
    res = ntop_check_all(s)
    fam = gamma_delta(s, 0)
    g12, d12 = fam.pair(0, 1)
    g34, _ = fam.pair(2, 3)
    checks = {
        "t": [r.t for r in res.reports] == [3, 3, 3],
        "infeasible": not any(r.feasible for r in res.reports),
        "conclusion": res.conclusion is Conclusion.LOCC_INDISTINGUISHABLE,
        "G12a": _close(g12, SX / 2, 1e-9),
        "D12a": _close(d12, -SY / 2, 1e-9),
        "G34a": _close(g34, -SZ / 2, 1e-9),
    }
    bad = [k for k, v in checks.items() if not v]
    record(1, not bad, f"four-state UPB t={[r.t for r in res.reports]}, "
           f"{res.conclusion.value}" + (f"; failed {bad}" if bad else ""))
    assert not bad


def test_criterion_02_variation():
    s = case_upb4_variation()
    res = ntop_check_all(s)
    fa, fb, fc = (gamma_delta(s, p) for p in range(3))
    checks = {
        "t": [r.t for r in res.reports] == [3, 3, 3],
        "conclusion": res.conclusion is Conclusion.LOCC_INDISTINGUISHABLE,
        "G12a": _close(fa.pair(0, 1)[0], SX / R2, 1e-9),
        "D12a": _close(fa.pair(0, 1)[1], -SY / R2, 1e-9),
        "G34a": _close(fa.pair(2, 3)[0], SZ / R2, 1e-9),
        "G24b": _close(fb.pair(1, 3)[0], 2 * R2 * SX + SZ / 2, 1e-9),
        "G12c": _close(fc.pair(0, 1)[0], -SZ / 2, 1e-9),
        "G23c": _close(fc.pair(1, 2)[0], SX / R2, 1e-9),
    }
    bad = [k for k, v in checks.items() if not v]
    record(2, not bad, f"entangled variation t={[r.t for r in res.reports]}, "
           f"{res.conclusion.value}, 6 operator values" + (f"; failed {bad}" if bad else ""))
    assert not bad


def test_criterion_03_ghz_t_values():
    bad = []
    n_zero = 0
    for k, params in enumerate(ghz_draws()):
        x = params.x
        t_a = ntop_check(case_ghz3(params), 0).t
        if abs(x[0]) > 1e-6 or abs(x[1]) > 1e-6:
            want = 3
        elif x[0] == 0 and x[1] == 0:
            want = 1
            n_zero += 1
        else:
            continue
        if t_a != want:
            bad.append((k, t_a, want))
    record(3, not bad, f"100 GHZ draws ({n_zero} with x1=x2=0), "
           f"{len(bad)} t_A mismatches")
    assert not bad


def test_criterion_04_second_round():
    bad = []
    hits = [0, 0]
    for k, (params, e) in enumerate(second_round_samples()):
        x = params.x
        assert x[0] == 0 and x[1] == 0
        assert np.linalg.eigvalsh(e).min() >= 0
        rounds = second_round_report(case_ghz3(params), 0,
                                     LocalMeasurement(0, (e, np.eye(2) - e)))
        rd = rounds[0]
        bob = _bob_residual(x, e) <= 1e-8
        charlie = _charlie_residual(x, e) <= 1e-8
        hits[0] += bob
        hits[1] += charlie
        if rd.reports[1].feasible != bob or rd.reports[2].feasible != charlie:
            bad.append(k)
    record(4, not bad, f"100 Alice elements with x1=x2=0, {len(bad)} mismatches "
           f"(Bob condition met {hits[0]}x, Charlie {hits[1]}x)")
    assert not bad


def test_criterion_05_verdicts():
    bad = []
    seen = set()
    for k, (case, params) in enumerate(verdict_draws()):
        v = ghz_family_verdict(params, n_samples=10, seed=k)
        seen.add(case)
        if v.conclusion is not Conclusion.LOCC_INDISTINGUISHABLE or v.case != case:
            bad.append((k, case, v.case, v.conclusion.value))
    ok = not bad and seen == {"A", "B", "C"}
    record(5, ok, f"50 verdicts over cases {sorted(seen)}, {len(bad)} wrong")
    assert ok, bad


def test_criterion_06_bells():
    three = StateSet((2, 2), case_bells(4).states[:3])
    res = ntop_check_all(three)
    ok3 = [r.t for r in res.reports] == [3, 3] and \
        res.conclusion is Conclusion.LOCC_INDISTINGUISHABLE
    probs = []
    for pair in itertools.combinations(range(4), 2):
        s = StateSet((2, 2), case_bells(4).states[list(pair)])
        proto = one_way_protocol_2xn(s)
        for i in range(2):
            sim = simulate_protocol(proto, s, i)
            probs.append(sim.success_probability if sim.success else 0.0)
    ok2 = all(abs(p - 1) <= 1e-9 for p in probs)
    record(6, ok3 and ok2, f"three Bell states t={[r.t for r in res.reports]}; "
           f"all 6 Bell pairs, worst success {min(probs):.12f}")
    assert ok3 and ok2


def test_criterion_07_bennett():
    res = ntop_check_all(case_bennett9())
    ok = [r.t for r in res.reports] == [8, 8] and \
        res.conclusion is Conclusion.LOCC_INDISTINGUISHABLE
    record(7, ok, f"Bennett nine states t={[r.t for r in res.reports]}, {res.conclusion.value}")
    assert ok


def test_criterion_08_oracle():
    mismatches = []
    n_feasible = n_checks = 0
    for k, s in enumerate(random_sets()):
        for p in range(s.n_parties):
            f = ntop_check(s, p).feasible
            n_checks += 1
            n_feasible += f
            if f != ntop_oracle(s, p):
                mismatches.append((k, p))
    record(8, not mismatches, f"500 random sets, {n_checks} party checks "
           f"({n_feasible} feasible), {len(mismatches)} oracle mismatches")
    assert not mismatches


def _embed(op, dims, party):
    mats = [np.eye(d) for d in dims]
    mats[party] = op
    out = np.array([[1.0 + 0j]])
    for m in mats:
        out = np.kron(out, m)
    return out


def test_criterion_09_povm_contract():
    rng = np.random.default_rng(9009)
    worst = {"complete": 0.0, "mineig": np.inf, "preserve": 0.0, "distance": np.inf}
    inst = feasible_instances()
    for _, s, p in inst:
        rep = ntop_check(s, p)
        for direction in (None, rng.normal(size=rep.r)):
            meas = construct_ntop_povm(rep, direction)
            total = sum(meas.elements)
            worst["complete"] = max(worst["complete"],
                                    float(np.linalg.norm(total - np.eye(rep.d), 2)))
            for e in meas.elements:
                worst["mineig"] = min(worst["mineig"], float(np.linalg.eigvalsh(e).min()))
                off = e - np.trace(e) / rep.d * np.eye(rep.d)
                worst["distance"] = min(worst["distance"], float(np.linalg.norm(off)))
                g = s.states.conj() @ _embed(e, s.dims, p) @ s.states.T
                np.fill_diagonal(g, 0)
                worst["preserve"] = max(worst["preserve"], float(np.abs(g).max()))
    ok = (bool(inst) and worst["complete"] <= 1e-9 and worst["mineig"] >= -1e-9
          and worst["preserve"] <= 1e-9 and worst["distance"] >= 1e-3)
    record(9, ok, f"{len(inst)} feasible instances: completeness {worst['complete']:.1e}, "
           f"min eig {worst['mineig']:.1e}, preservation {worst['preserve']:.1e}, "
           f"distance from I {worst['distance']:.3f}")
    assert ok, worst


def test_criterion_10_one_way():
    rng = np.random.default_rng(1010)
    bad = []
    worst_b = 0.0
    for k in range(200):
        n = int(rng.integers(1, 5))
        s = random_two_state_2xn(rng, n)
        try:
            proto = one_way_protocol_2xn(s)
        except Exception as exc:  # any failure to synthesize counts
            bad.append((k, n, repr(exc)))
            continue
        for b in alice_rank_one_coefficients(proto):
            worst_b = max(worst_b, abs(float(np.sum(b ** 2)) - 1))
        for i in range(2):
            sim = simulate_protocol(proto, s, i)
            if not sim.success or abs(sim.success_probability - 1) > 1e-9:
                bad.append((k, n, i))
    ok = not bad and worst_b <= 1e-9
    record(10, ok, f"200 two-state 2xn sets, {len(bad)} failures, "
           f"worst |sum b^2 - 1| {worst_b:.1e}")
    assert ok, bad[:5]


if __name__ == "__main__":
    import pytest

    sys.exit(pytest.main([__file__, "-q"]))

"""Nontrivial orthogonality-preserving (NTOP) local measurements.

A party of local dimension ``d`` can measure first without destroying
orthogonality, and without the measurement being trivial, exactly when the
real span ``t`` of its Gamma/Delta family is smaller than ``d**2 - 1``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .operators import (
    DEFAULT_TOL,
    as_matrix,
    complete_to_generator_basis,
    distance_from_identity_span,
    gram_schmidt_hs,
    hermitian,
    min_eigenvalue,
    psd_sqrt,
)
from .statespace import StateSet, apply_local, check_mutual_orthogonality, gamma_delta

PSD_TOL = 1e-9
COMPLETENESS_TOL = 1e-9
IDEMPOTENCE_TOL = 1e-8
TRIVIALITY_TOL = 1e-9


class NotOrthogonalError(ValueError):
    """The candidate states are not mutually orthogonal."""


class InfeasibleError(ValueError):
    """No NTOP measurement exists for the requested party."""


class Conclusion(str, enum.Enum):
    LOCC_INDISTINGUISHABLE = "LoccIndistinguishable"
    ONE_WAY_DISTINGUISHABLE = "OneWayDistinguishable"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class NtopReport:
    party: int
    d: int
    t: int
    r: int
    feasible: bool
    lambda_basis: tuple = field(repr=False)
    complement: tuple = field(repr=False)

    def summary_line(self) -> str:
        verdict = "NTOP feasible" if self.feasible else "cannot go first"
        return (f"party {self.party}: d={self.d}, t={self.t}, d^2-1={self.d ** 2 - 1}, "
                f"r={self.r} -> {verdict}")


@dataclass(frozen=True)
class LocalMeasurement:
    """POVM on one party, optionally with Kraus operators.

    Construction enforces completeness and positive semidefiniteness.
    """

    party: int
    elements: tuple
    kraus: tuple | None = None

    def __post_init__(self):
        if not self.elements:
            raise ValueError("a measurement needs at least one element")
        elems = tuple(hermitian(e, 1e-9) for e in self.elements)
        d = elems[0].shape[0]
        for e in elems:
            if e.shape != (d, d):
                raise ValueError("POVM elements have inconsistent dimensions")
            lo = min_eigenvalue(e)
            if lo < -PSD_TOL:
                raise ValueError(f"POVM element is not positive (min eigenvalue {lo:.3e})")
        resid = float(np.max(np.abs(sum(elems) - np.eye(d))))
        if resid > COMPLETENESS_TOL:
            raise ValueError(f"POVM elements do not sum to identity (residual {resid:.3e})")
        kraus = self.kraus
        if kraus is not None:
            kraus = tuple(as_matrix(k, d) for k in kraus)
            if len(kraus) != len(elems):
                raise ValueError("need one Kraus operator per element")
            for k, e in zip(kraus, elems):
                if np.max(np.abs(k.conj().T @ k - e)) > 1e-8:
                    raise ValueError("Kraus operator does not reproduce its element")
        object.__setattr__(self, "elements", elems)
        object.__setattr__(self, "kraus", kraus)

    @property
    def d(self) -> int:
        return self.elements[0].shape[0]

    def kraus_operators(self) -> tuple:
        """Kraus operators; principal square roots when none were given."""
        if self.kraus is not None:
            return self.kraus
        return tuple(psd_sqrt(e) for e in self.elements)

    def completeness_residual(self) -> float:
        return float(np.max(np.abs(sum(self.elements) - np.eye(self.d))))


def _require_orthogonal(states: StateSet, tol: float) -> None:
    rep = check_mutual_orthogonality(states, tol)
    if not rep.ok:
        i, j = rep.worst_pair
        raise NotOrthogonalError(
            f"states {i} and {j} are not mutually orthogonal "
            f"(|overlap| = {rep.worst_overlap:.3e})")


def ntop_check(states: StateSet, party: int, tol: float = DEFAULT_TOL) -> NtopReport:
    """Count independent Gamma/Delta operators for ``party`` and decide
    whether an NTOP measurement exists there."""
    party = states.check_party(party)
    _require_orthogonal(states, tol)
    d = states.dims[party]
    lam = gram_schmidt_hs(gamma_delta(states, party).operators(), tol)
    t = len(lam)
    comp = complete_to_generator_basis(lam, d, tol)
    return NtopReport(party, d, t, d * d - 1 - t, t < d * d - 1, tuple(lam), tuple(comp))


class CheckResult(NamedTuple):
    reports: list
    conclusion: Conclusion
    feasible_parties: tuple


def ntop_check_all(states: StateSet, tol: float = DEFAULT_TOL) -> CheckResult:
    """Per-party reports.  If nobody can go first the set is LOCC
    indistinguishable; otherwise the check says nothing."""
    reports = [ntop_check(states, p, tol) for p in range(states.n_parties)]
    feasible = tuple(r.party for r in reports if r.feasible)
    conclusion = Conclusion.INCONCLUSIVE if feasible else Conclusion.LOCC_INDISTINGUISHABLE
    return CheckResult(reports, conclusion, feasible)


def ntop_povm_elements(report: NtopReport, coefficients: Sequence[float]) -> tuple:
    """Raw two-element family ``(d/2) (I/d +- 1/2 sum c_n lambda_n)``.

    No positivity check; see :func:`construct_ntop_povm` for the validated
    version.
    """
    c = np.asarray(coefficients, dtype=float)
    if c.shape != (report.r,):
        raise ValueError(f"need {report.r} coefficients, got shape {c.shape}")
    d = report.d
    x = sum((cn * lam for cn, lam in zip(c, report.complement)),
            np.zeros((d, d), dtype=complex)) / 2
    ident = np.eye(d, dtype=complex) / d
    return (d / 2) * (ident + x), (d / 2) * (ident - x)


def max_coefficient_norm(d: int) -> float:
    """Largest ``|c|`` keeping both two-element POVM members positive for
    every direction: ``sqrt(2 / (d**2 - d))``."""
    return float(np.sqrt(2.0 / (d * d - d)))


def construct_ntop_povm(report: NtopReport, direction: Sequence[float] | None = None) -> LocalMeasurement:
    """Two-outcome NTOP measurement along ``direction`` in the complement.

    ``direction`` defaults to the first complement generator and is
    rescaled to the positivity bound ``sqrt(2 / (d**2 - d))``.
    """
    if not report.feasible or report.r < 1:
        raise InfeasibleError(
            f"party {report.party} has t = {report.t} = d^2-1; no NTOP measurement")
    if direction is None:
        u = np.zeros(report.r)
        u[0] = 1.0
    else:
        u = np.asarray(direction, dtype=float)
        if u.shape != (report.r,):
            raise ValueError(f"direction must have length r = {report.r}")
        nrm = np.linalg.norm(u)
        if nrm == 0 or not np.isfinite(nrm):
            raise ValueError("direction must be a nonzero finite vector")
        u = u / nrm
    elems = ntop_povm_elements(report, max_coefficient_norm(report.d) * u)
    return LocalMeasurement(report.party, elems, tuple(psd_sqrt(e) for e in elems))


def is_rank_one(b: Sequence[float], complement: Sequence, d: int,
                tol: float = IDEMPOTENCE_TOL) -> bool:
    """Whether ``I/d + 1/2 sum b_n lambda_n`` is idempotent (a rank-one
    projector, its trace being one)."""
    b = np.asarray(b, dtype=float)
    if b.ndim != 1 or len(b) != len(complement):
        raise ValueError("coefficient and generator counts differ")
    rho = np.eye(d, dtype=complex) / d
    for bn, lam in zip(b, complement):
        rho = rho + 0.5 * bn * as_matrix(lam, d)
    return float(np.max(np.abs(rho @ rho - rho))) <= tol


def projective_ntop_qubit(report: NtopReport) -> LocalMeasurement:
    """Rank-one projective NTOP measurement for a qubit party:
    ``I/2 +- lambda_1 / 2``."""
    if report.d != 2:
        raise ValueError(f"projective construction needs a qubit, got d = {report.d}")
    if not report.feasible:
        raise InfeasibleError(f"party {report.party} cannot go first (t = 3)")
    lam = report.complement[0]
    ident = np.eye(2, dtype=complex)
    p_plus = (ident + lam) / 2
    p_minus = (ident - lam) / 2
    return LocalMeasurement(report.party, (p_plus, p_minus), (p_plus, p_minus))


class PreservationReport(NamedTuple):
    ok: bool
    worst_overlap: float
    worst: tuple | None  # (element, i, j)
    trivial: bool


def verify_orthogonality_preserving(meas: LocalMeasurement, states: StateSet,
                                    tol: float = DEFAULT_TOL) -> PreservationReport:
    """Check ``<phi_i| E |phi_j> = 0`` for every element ``E`` and ``i != j``."""
    party = states.check_party(meas.party)
    if states.dims[party] != meas.d:
        raise ValueError("measurement dimension does not match the party")
    worst, worst_ov = None, 0.0
    n = len(states)
    for m, e in enumerate(meas.elements):
        moved = apply_local(states, party, e)
        g = states.states.conj() @ moved.T
        for i in range(n):
            for j in range(n):
                if i != j and abs(g[i, j]) > worst_ov:
                    worst, worst_ov = (m, i, j), float(abs(g[i, j]))
    trivial = all(distance_from_identity_span(e) <= TRIVIALITY_TOL for e in meas.elements)
    return PreservationReport(worst_ov <= tol, worst_ov, worst, trivial)


def _hermitian_coordinate_basis(d: int) -> list[np.ndarray]:
    """Unnormalized real basis of d x d Hermitian matrices: diagonal units,
    then ``E_jk + E_kj`` and ``i (E_jk - E_kj)``."""
    out = []
    for j in range(d):
        e = np.zeros((d, d), dtype=complex)
        e[j, j] = 1
        out.append(e)
    for j in range(d):
        for k in range(j + 1, d):
            e = np.zeros((d, d), dtype=complex)
            e[j, k] = e[k, j] = 1
            out.append(e)
            e = np.zeros((d, d), dtype=complex)
            e[j, k] = 1j
            e[k, j] = -1j
            out.append(e)
    return out


def row_reduce_rank(a: np.ndarray, tol: float) -> int:
    """Rank by Gaussian elimination with partial pivoting.

    A pivot counts when its magnitude exceeds ``tol * max(1, max|a|)``.
    """
    m = np.array(a, dtype=float)
    if m.size == 0:
        return 0
    thresh = tol * max(1.0, float(np.max(np.abs(m))))
    rows, cols = m.shape
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        p = rank + int(np.argmax(np.abs(m[rank:, c])))
        if abs(m[p, c]) <= thresh:
            continue
        m[[rank, p]] = m[[p, rank]]
        m[rank + 1:] -= np.outer(m[rank + 1:, c] / m[rank, c], m[rank])
        rank += 1
    return rank


def ntop_oracle(states: StateSet, party: int, tol: float = DEFAULT_TOL) -> bool:
    """Independent feasibility check.

    Solves the real linear system ``Tr(X Gamma_ij) = Tr(X Delta_ij) = 0``
    for Hermitian ``X`` in ``d**2`` real coordinates and reports whether its
    solution space contains something besides multiples of the identity.
    """
    party = states.check_party(party)
    _require_orthogonal(states, tol)
    d = states.dims[party]
    coords = _hermitian_coordinate_basis(d)
    rows = []
    for _, _, g, dl in gamma_delta(states, party).pairs:
        for op in (g, dl):
            # Tr(B_k op) with op Hermitian is real
            rows.append([np.real(np.trace(b @ op)) for b in coords])
    rank = row_reduce_rank(np.array(rows).reshape(-1, d * d), tol)
    return d * d - rank >= 2

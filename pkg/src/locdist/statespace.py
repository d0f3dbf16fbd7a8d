"""Multipartite pure-state sets and the Gamma/Delta operator families.

Amplitudes are stored flat in row-major order with party 0 as the most
significant index, i.e. ``|i0 i1 ... ik>`` lives at
``np.ravel_multi_index((i0, ..., ik), dims)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .operators import DEFAULT_TOL


def amplitude_index(multi_index: Sequence[int], dims: Sequence[int]) -> int:
    """Flat index of a product basis vector (party 0 most significant)."""
    if len(multi_index) != len(dims):
        raise ValueError(f"need {len(dims)} local indices, got {len(multi_index)}")
    for i, d in zip(multi_index, dims):
        if not 0 <= i < d:
            raise ValueError(f"local index {i} out of range for dimension {d}")
    return int(np.ravel_multi_index(tuple(multi_index), tuple(dims)))


@dataclass(frozen=True)
class StateSet:
    """A list of (possibly unnormalized) pure states on ``prod(dims)``.

    Zero vectors are allowed; they show up as residual states after a local
    measurement annihilates a candidate.
    """

    dims: tuple
    states: np.ndarray
    names: tuple = field(default=())

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError(f"invalid party dimensions {self.dims!r}")
        states = np.array(self.states, dtype=complex)
        if states.ndim == 1:
            states = states[None, :]
        if states.ndim != 2 or states.shape[0] < 1:
            raise ValueError("a state set needs at least one state")
        total = int(np.prod(dims))
        if states.shape[1] != total:
            raise ValueError(
                f"state length {states.shape[1]} does not match prod(dims) = {total}")
        if not np.all(np.isfinite(states)):
            raise ValueError("state amplitudes must be finite")
        names = tuple(str(n) for n in self.names) if self.names else tuple(
            f"phi{i + 1}" for i in range(states.shape[0]))
        if len(names) != states.shape[0]:
            raise ValueError("number of names does not match number of states")
        states.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "names", names)

    def __len__(self) -> int:
        return self.states.shape[0]

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.states, axis=1)

    def tensor(self, i: int) -> np.ndarray:
        """State ``i`` reshaped to one axis per party."""
        return self.states[i].reshape(self.dims)

    def check_party(self, party: int) -> int:
        if not 0 <= party < self.n_parties:
            raise ValueError(f"party {party} out of range for {self.n_parties} parties")
        return int(party)


class OrthogonalityReport(NamedTuple):
    ok: bool
    worst_pair: tuple | None
    worst_overlap: float


def check_mutual_orthogonality(states: StateSet, tol: float = DEFAULT_TOL) -> OrthogonalityReport:
    """Check ``|<phi_i|phi_j>| <= tol * max(1, |phi_i| |phi_j|)`` for all ``i != j``.

    ``worst_pair`` is the pair with the largest relative overlap and
    ``worst_overlap`` its absolute overlap.
    """
    gram = states.states.conj() @ states.states.T
    norms = states.norms()
    ok = True
    worst, worst_rel, worst_abs = None, -1.0, 0.0
    n = len(states)
    for i in range(n):
        for j in range(i + 1, n):
            scale = max(1.0, norms[i] * norms[j])
            ov = abs(gram[i, j])
            if ov > tol * scale:
                ok = False
            if ov / scale > worst_rel:
                worst, worst_rel, worst_abs = (i, j), ov / scale, float(ov)
    return OrthogonalityReport(ok, worst, worst_abs)


def _party_first(states: StateSet, i: int, party: int) -> np.ndarray:
    t = np.moveaxis(states.tensor(i), party, 0)
    return t.reshape(states.dims[party], -1)


def reduced_cross(states: StateSet, m: int, n: int, party: int) -> np.ndarray:
    """``Tr_{all but party}(|phi_m><phi_n|)`` as a ``d x d`` matrix."""
    party = states.check_party(party)
    for k in (m, n):
        if not 0 <= k < len(states):
            raise IndexError(f"state index {k} out of range")
    a = _party_first(states, m, party)
    b = _party_first(states, n, party)
    return a @ b.conj().T


@dataclass(frozen=True)
class GammaDeltaFamily:
    """``Gamma_ij = R + R^dag`` and ``Delta_ij = i R - i R^dag`` with
    ``R = reduced_cross(i, j)``, for every pair ``i < j``."""

    party: int
    dim: int
    pairs: tuple  # of (i, j, gamma, delta)

    def operators(self) -> list[np.ndarray]:
        ops = []
        for _, _, g, dl in self.pairs:
            ops.extend((g, dl))
        return ops

    def pair(self, i: int, j: int) -> tuple[np.ndarray, np.ndarray]:
        for a, b, g, dl in self.pairs:
            if (a, b) == (i, j):
                return g, dl
        raise KeyError((i, j))


def gamma_delta(states: StateSet, party: int) -> GammaDeltaFamily:
    party = states.check_party(party)
    n = len(states)
    # (d, n, rest) slab: one reshape instead of n separate moveaxis calls
    full = states.states.reshape((n,) + states.dims)
    slab = np.moveaxis(full, party + 1, 0).reshape(states.dims[party], n, -1)
    pairs = []
    for i in range(n):
        for j in range(i + 1, n):
            r = slab[:, i, :] @ slab[:, j, :].conj().T
            rh = r.conj().T
            pairs.append((i, j, r + rh, 1j * r - 1j * rh))
    return GammaDeltaFamily(party, states.dims[party], tuple(pairs))


def apply_local(states: StateSet, party: int, op: np.ndarray) -> np.ndarray:
    """Apply ``op`` on ``party`` (identity elsewhere) to every state; returns
    the new ``(n, prod(dims))`` amplitude array."""
    party = states.check_party(party)
    d = states.dims[party]
    op = np.asarray(op, dtype=complex)
    if op.shape != (d, d):
        raise ValueError(f"operator shape {op.shape} does not match party dimension {d}")
    n = len(states)
    full = states.states.reshape((n,) + states.dims)
    out = np.tensordot(op, full, axes=([1], [party + 1]))
    out = np.moveaxis(out, 0, party + 1)
    return out.reshape(n, -1)

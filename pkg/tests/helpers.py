"""Random instance generators shared by the test modules."""
import numpy as np

from locdist import StateSet
from locdist.cases import GhzFamilyParams


def crandn(rng, *shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def random_unitary(rng, d):
    q, r = np.linalg.qr(crandn(rng, d, d))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def kron_all(vectors):
    out = np.array([1.0 + 0j])
    for v in vectors:
        out = np.kron(out, v)
    return out


def random_orthogonal_set(rng, dims=None, n_states=None):
    """Mix of generic (Haar, QR-orthogonalized) sets and rotated product
    bases with occasional in-pair mixing, so that both feasible and
    infeasible parties show up."""
    if dims is None:
        dims = tuple(int(d) for d in rng.choice([2, 3], size=rng.integers(2, 5)))
    if n_states is None:
        n_states = int(rng.integers(2, 5))
    total = int(np.prod(dims))
    if rng.uniform() < 0.4:
        q, _ = np.linalg.qr(crandn(rng, total, n_states))
        vecs = q.T.copy()
        # random norms: unnormalized inputs must work too
        vecs *= rng.uniform(0.5, 2.0, size=(n_states, 1))
        return StateSet(dims, vecs)
    us = [random_unitary(rng, d) for d in dims]
    seen = set()
    while len(seen) < n_states:
        seen.add(tuple(int(rng.integers(d)) for d in dims))
    vecs = [kron_all([u[:, i] for u, i in zip(us, idx)]) for idx in sorted(seen)]
    vecs = np.array(vecs)
    if n_states >= 2 and rng.uniform() < 0.5:
        a, b = rng.choice(n_states, size=2, replace=False)
        w = random_unitary(rng, 2)
        va, vb = vecs[a].copy(), vecs[b].copy()
        vecs[a] = w[0, 0] * va + w[0, 1] * vb
        vecs[b] = w[1, 0] * va + w[1, 1] * vb
    if rng.uniform() < 0.1:
        vecs = np.vstack([vecs, np.zeros(total)])
    return StateSet(dims, vecs)


def random_two_state_2xn(rng, n):
    q, _ = np.linalg.qr(crandn(rng, 2 * n, 2))
    return StateSet((2, n), q.T.copy())


def random_params(rng, x):
    st = crandn(rng, 2)
    st /= np.linalg.norm(st)
    x = np.asarray(x, dtype=complex)
    return GhzFamilyParams(st[0], st[1], tuple(x / np.linalg.norm(x)))

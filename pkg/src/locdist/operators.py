"""Small dense Hermitian-operator toolkit.

Operators are plain ``numpy`` complex arrays of shape ``(d, d)``.  Everything
here treats the Hermitian matrices as a *real* vector space with the
Hilbert-Schmidt inner product ``<A, B> = Tr(A B)``; bases are normalized so
that ``Tr(G_m G_n) = 2 delta_mn`` (the Pauli convention).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

DEFAULT_TOL = 1e-9
HERMITIAN_TOL = 1e-10

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


def as_matrix(a, dim: int | None = None) -> np.ndarray:
    """Coerce ``a`` to a finite square complex matrix."""
    m = np.array(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if dim is not None and m.shape[0] != dim:
        raise ValueError(f"expected a {dim}x{dim} matrix, got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def hermitian(a, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate ``a`` as Hermitian and return its exactly symmetrized copy.

    The check is relative: ``max|A - A^dag| <= tol * max(1, max|A|)``.
    """
    m = as_matrix(a)
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    dev = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
    if dev > tol * scale:
        raise ValueError(f"matrix is not Hermitian (deviation {dev:.3e})")
    return (m + m.conj().T) / 2


def is_hermitian(a, tol: float = HERMITIAN_TOL) -> bool:
    try:
        hermitian(a, tol)
    except ValueError:
        return False
    return True


def hs_inner(a: np.ndarray, b: np.ndarray) -> float:
    """Hilbert-Schmidt inner product ``Tr(A B)`` of two Hermitian operators.

    Returns the real part; for Hermitian arguments the imaginary part is
    rounding noise.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.ndim != 2:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    # Tr(A B) = sum_jk A_jk B_kj
    return float(np.real(np.sum(a * b.T)))


def hs_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


def gram_schmidt_hs(ops: Iterable, tol: float = DEFAULT_TOL) -> list[np.ndarray]:
    """Orthonormalize Hermitian operators under the Hilbert-Schmidt product.

    Modified Gram-Schmidt with one re-orthogonalization pass.  An input whose
    residual norm is at most ``tol * max(1, ||input||)`` is treated as
    linearly dependent and dropped, so the output length is the numerical
    rank of the input family.  Output operators satisfy
    ``Tr(L_m L_n) = 2 delta_mn``.

    Parameters
    ----------
    ops : iterable of (d, d) arrays
        Hermitian operators, all of the same dimension.
    tol : float
        Relative rank tolerance, must be positive.

    Returns
    -------
    list of ndarray
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    out: list[np.ndarray] = []
    dim = None
    for op in ops:
        x = as_matrix(op)
        if dim is None:
            dim = x.shape[0]
        elif x.shape[0] != dim:
            raise ValueError(f"dimension mismatch: {x.shape[0]} vs {dim}")
        x = (x + x.conj().T) / 2
        norm0 = hs_norm(x)
        res = x.copy()
        for _ in range(2):
            for q in out:
                res = res - (hs_inner(q, res) / 2.0) * q
        norm = hs_norm(res)
        if norm <= tol * max(1.0, norm0):
            continue
        q = res * (np.sqrt(2.0) / norm)
        out.append((q + q.conj().T) / 2)
    return out


@dataclass(frozen=True)
class GeneratorBasis:
    """An ordered orthogonal set of ``d**2 - 1`` traceless Hermitian generators."""

    dim: int
    ops: tuple

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)

    def __getitem__(self, i):
        return self.ops[i]

    def check(self, tol: float = DEFAULT_TOL) -> None:
        check_generator_family(self.ops, self.dim, tol, complete=True)


def check_generator_family(ops: Sequence, dim: int, tol: float = DEFAULT_TOL,
                           complete: bool = False) -> None:
    """Raise ``ValueError`` unless ``ops`` are traceless, Hermitian and satisfy
    ``Tr(G_m G_n) = 2 delta_mn``.  With ``complete=True`` also require
    ``len(ops) == dim**2 - 1``."""
    if complete and len(ops) != dim * dim - 1:
        raise ValueError(f"expected {dim * dim - 1} generators, got {len(ops)}")
    for k, g in enumerate(ops):
        g = as_matrix(g, dim)
        if not is_hermitian(g, tol):
            raise ValueError(f"operator {k} is not Hermitian")
        if abs(np.trace(g)) > tol:
            raise ValueError(f"operator {k} is not traceless")
    for m, a in enumerate(ops):
        for n in range(m, len(ops)):
            want = 2.0 if m == n else 0.0
            got = hs_inner(a, ops[n])
            if abs(got - want) > tol:
                raise ValueError(f"Tr(G_{m} G_{n}) = {got!r}, expected {want}")


def gell_mann_basis(d: int) -> GeneratorBasis:
    """Generalized Gell-Mann matrices for SU(d).

    Ordering: symmetric ``E_jk + E_kj`` for ``j < k`` in ascending ``(j, k)``,
    then antisymmetric ``-i (E_jk - E_kj)`` in the same order, then the
    ``d - 1`` diagonal generators.  For ``d = 2`` this is
    ``[sigma_x, sigma_y, sigma_z]``.
    """
    if int(d) != d or d < 2:
        raise ValueError(f"generator basis needs d >= 2, got {d}")
    d = int(d)
    pairs = [(j, k) for j in range(d) for k in range(j + 1, d)]
    sym, anti, diag = [], [], []
    for j, k in pairs:
        g = np.zeros((d, d), dtype=complex)
        g[j, k] = g[k, j] = 1
        sym.append(g)
        g = np.zeros((d, d), dtype=complex)
        g[j, k] = -1j
        g[k, j] = 1j
        anti.append(g)
    for l in range(1, d):
        entries = np.zeros(d)
        entries[:l] = 1
        entries[l] = -l
        diag.append(np.diag(entries * np.sqrt(2.0 / (l * (l + 1)))).astype(complex))
    return GeneratorBasis(d, tuple(sym + anti + diag))


def complete_to_generator_basis(partial: Sequence, d: int,
                                tol: float = DEFAULT_TOL) -> list[np.ndarray]:
    """Extend an orthonormal traceless family to a full SU(d) generator set.

    Returns the ``r = d**2 - 1 - len(partial)`` new operators, obtained by
    Gram-Schmidting the Gell-Mann basis against ``partial``.  Each is
    Hermitian, traceless, HS-orthogonal to ``partial`` and to the others,
    with ``Tr(l_n**2) = 2``.
    """
    partial = [as_matrix(p, d) for p in partial]
    check_generator_family(partial, d, 10 * tol)
    target = d * d - 1 - len(partial)
    if target < 0:
        raise ValueError("partial family has more than d**2 - 1 operators")
    full = gram_schmidt_hs(list(partial) + list(gell_mann_basis(d)), tol)
    # every Gell-Mann element is dropped or kept; the partial prefix survives intact
    complement = full[len(partial):]
    if len(complement) != target:
        raise ArithmeticError(
            f"completion produced {len(complement)} generators, expected {target}")
    return complement


def distance_from_identity_span(a: np.ndarray) -> float:
    """HS distance from ``a`` to ``span{I}``; zero iff ``a`` is trivial."""
    a = np.asarray(a)
    d = a.shape[0]
    return hs_norm(a - (np.trace(a) / d) * np.eye(d))


def psd_sqrt(a: np.ndarray) -> np.ndarray:
    """Principal (positive) square root of a positive semidefinite matrix."""
    w, v = np.linalg.eigh(hermitian(a, 1e-8))
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def min_eigenvalue(a: np.ndarray) -> float:
    return float(np.linalg.eigvalsh((np.asarray(a) + np.asarray(a).conj().T) / 2)[0])

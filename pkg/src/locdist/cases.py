"""Built-in state sets."""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .statespace import StateSet

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)
PLUS = (KET0 + KET1) / np.sqrt(2)
MINUS = (KET0 - KET1) / np.sqrt(2)

# basis strings (party a, b, c) carrying x1..x6 in the GHZ family
GHZ_X_BITS = ("100", "011", "010", "101", "001", "110")


def kron(*vectors) -> np.ndarray:
    return reduce(np.kron, vectors)


def _ket(d: int, i: int) -> np.ndarray:
    v = np.zeros(d, dtype=complex)
    v[i] = 1
    return v


def case_bennett9() -> StateSet:
    """Nine-state product basis of a 3x3 system ("domino" states).

    ``|1>|1>``, ``|0>|0+-1>``, ``|2>|1+-2>``, ``|1+-2>|0>``, ``|0+-1>|2>``,
    with ``|i+-j> = (|i> +- |j>)/sqrt(2)``.
    """
    k = [_ket(3, i) for i in range(3)]

    def pm(i, j, sign):
        return (k[i] + sign * k[j]) / np.sqrt(2)

    states = [
        kron(k[1], k[1]),
        kron(k[0], pm(0, 1, 1)), kron(k[0], pm(0, 1, -1)),
        kron(k[2], pm(1, 2, 1)), kron(k[2], pm(1, 2, -1)),
        kron(pm(1, 2, 1), k[0]), kron(pm(1, 2, -1), k[0]),
        kron(pm(0, 1, 1), k[2]), kron(pm(0, 1, -1), k[2]),
    ]
    names = ["11", "0(0+1)", "0(0-1)", "2(1+2)", "2(1-2)",
             "(1+2)0", "(1-2)0", "(0+1)2", "(0-1)2"]
    return StateSet((3, 3), states, names)


def _upb4_vectors():
    return (kron(KET0, KET1, PLUS), kron(KET1, PLUS, KET0),
            kron(PLUS, KET0, KET1), kron(MINUS, MINUS, MINUS))


def case_upb4() -> StateSet:
    """Four-state unextendible product basis on three qubits:
    ``|0,1,+>``, ``|1,+,0>``, ``|+,0,1>``, ``|-,-,->``."""
    return StateSet((2, 2, 2), _upb4_vectors(), ("phi1", "phi2", "phi3", "phi4"))


def case_upb4_variation() -> StateSet:
    """Entangled, unnormalized variant of :func:`case_upb4`:
    ``phi2 -> sqrt2 phi2 + phi4`` and ``phi4 -> phi2 - sqrt2 phi4``."""
    f1, f2, f3, f4 = _upb4_vectors()
    r2 = np.sqrt(2)
    return StateSet((2, 2, 2), (f1, r2 * f2 + f4, f3, f2 - r2 * f4),
                    ("phi1", "phi2bar", "phi3", "phi4bar"))


@dataclass(frozen=True)
class GhzFamilyParams:
    """Parameters of the three-qubit family

    ``|phi1> = s|000> + t|111>``, ``|phi2> = t*|000> - s*|111>``,
    ``|phi3> = x1|100> + x2|011> + x3|010> + x4|101> + x5|001> + x6|110>``.
    """

    s: complex
    t: complex
    x: tuple

    def __post_init__(self):
        s, t = complex(self.s), complex(self.t)
        x = tuple(complex(v) for v in self.x)
        if len(x) != 6:
            raise ValueError(f"need six x coefficients, got {len(x)}")
        if not all(np.isfinite(v) for v in (s, t) + x):
            raise ValueError("parameters must be finite")
        if abs(abs(s) ** 2 + abs(t) ** 2 - 1) > 1e-12:
            raise ValueError("|s|^2 + |t|^2 must equal 1")
        if s * t == 0:
            raise ValueError("s and t must both be nonzero")
        if abs(sum(abs(v) ** 2 for v in x) - 1) > 1e-12:
            raise ValueError("sum |x_i|^2 must equal 1")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "x", x)

    def coefficient(self, bits: str) -> complex:
        return self.x[GHZ_X_BITS.index(bits)]


def case_ghz3(params: GhzFamilyParams) -> StateSet:
    """Two GHZ-like states plus one state from their complement."""
    def basis(bits):
        return kron(*(KET1 if b == "1" else KET0 for b in bits))

    s, t = params.s, params.t
    f1 = s * basis("000") + t * basis("111")
    f2 = np.conj(t) * basis("000") - np.conj(s) * basis("111")
    f3 = sum(x * basis(bits) for x, bits in zip(params.x, GHZ_X_BITS))
    return StateSet((2, 2, 2), (f1, f2, f3), ("phi1", "phi2", "phi3"))


def case_bells(k: int = 4) -> StateSet:
    """First ``k`` Bell states in the order Phi+, Phi-, Psi+, Psi-."""
    if k not in (2, 3, 4):
        raise ValueError(f"k must be 2, 3 or 4, got {k}")
    r = 1 / np.sqrt(2)
    bells = [
        ("Phi+", r * (kron(KET0, KET0) + kron(KET1, KET1))),
        ("Phi-", r * (kron(KET0, KET0) - kron(KET1, KET1))),
        ("Psi+", r * (kron(KET0, KET1) + kron(KET1, KET0))),
        ("Psi-", r * (kron(KET0, KET1) - kron(KET1, KET0))),
    ][:k]
    return StateSet((2, 2), [v for _, v in bells], [n for n, _ in bells])


def _default_ghz():
    r = 1 / np.sqrt(2)
    return case_ghz3(GhzFamilyParams(r, r, (0, 0, 1, 0, 0, 0)))


CASES = {
    "bennett9": case_bennett9,
    "upb4": case_upb4,
    "upb4-variation": case_upb4_variation,
    "ghz3": _default_ghz,
    "bells2": lambda: case_bells(2),
    "bells3": lambda: case_bells(3),
    "bells4": lambda: case_bells(4),
}

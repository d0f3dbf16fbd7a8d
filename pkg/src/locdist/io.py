"""JSON documents: state sets, measurements, GHZ parameters and reports.

Complex numbers are always ``[re, im]`` pairs.  Python's float repr is
round-trip exact, so emitted documents parse back bit-for-bit.
"""
from __future__ import annotations

import json
from typing import Any

import numpy as np

from . import __version__
from .cases import GhzFamilyParams
from .ntop import CheckResult, LocalMeasurement
from .statespace import StateSet

FORMAT_VERSION = 1


class DocumentError(ValueError):
    """A JSON document is malformed or inconsistent."""


def _pair(z: complex) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _complex(v, where: str) -> complex:
    if (not isinstance(v, (list, tuple)) or len(v) != 2
            or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in v)):
        raise DocumentError(f"{where}: expected an [re, im] pair, got {v!r}")
    return complex(float(v[0]), float(v[1]))


def _matrix_doc(m: np.ndarray) -> list:
    return [[_pair(z) for z in row] for row in np.asarray(m)]


def _parse_matrix(doc, where: str) -> np.ndarray:
    if not isinstance(doc, list) or not doc:
        raise DocumentError(f"{where}: expected a non-empty list of rows")
    rows = []
    for i, row in enumerate(doc):
        if not isinstance(row, list):
            raise DocumentError(f"{where}[{i}]: expected a row list")
        rows.append([_complex(v, f"{where}[{i}]") for v in row])
    if any(len(r) != len(rows) for r in rows):
        raise DocumentError(f"{where}: matrix is not square")
    return np.array(rows, dtype=complex)


def _check_version(doc: dict, kind: str) -> None:
    if not isinstance(doc, dict):
        raise DocumentError(f"{kind}: top level must be a JSON object")
    v = doc.get("format_version", FORMAT_VERSION)
    if v != FORMAT_VERSION:
        raise DocumentError(f"{kind}: unsupported format_version {v!r}")


# -- state sets


def stateset_to_doc(states: StateSet) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "dims": list(states.dims),
        "states": [{"name": name, "amplitudes": [_pair(z) for z in vec]}
                   for name, vec in zip(states.names, states.states)],
    }


def stateset_from_doc(doc: Any) -> StateSet:
    _check_version(doc, "state set")
    dims = doc.get("dims")
    if (not isinstance(dims, list) or not dims
            or not all(isinstance(d, int) and not isinstance(d, bool) and d >= 1 for d in dims)):
        raise DocumentError(f"state set: 'dims' must be a list of positive integers, got {dims!r}")
    entries = doc.get("states")
    if not isinstance(entries, list) or not entries:
        raise DocumentError("state set: 'states' must be a non-empty list")
    total = int(np.prod(dims))
    names, vecs = [], []
    for i, entry in enumerate(entries):
        if not isinstance(entry, dict) or "amplitudes" not in entry:
            raise DocumentError(f"state set: states[{i}] needs an 'amplitudes' list")
        amps = entry["amplitudes"]
        if not isinstance(amps, list):
            raise DocumentError(f"state set: states[{i}].amplitudes must be a list")
        if len(amps) != total:
            raise DocumentError(
                f"dimension mismatch: states[{i}] has {len(amps)} amplitudes, "
                f"dims {dims} need {total}")
        vecs.append([_complex(a, f"states[{i}].amplitudes") for a in amps])
        names.append(str(entry.get("name", f"phi{i + 1}")))
    try:
        return StateSet(tuple(dims), np.array(vecs, dtype=complex), tuple(names))
    except ValueError as exc:
        raise DocumentError(f"state set: {exc}") from exc


# -- measurements


def measurement_to_doc(meas: LocalMeasurement) -> dict:
    doc = {
        "format_version": FORMAT_VERSION,
        "party": meas.party,
        "elements": [_matrix_doc(e) for e in meas.elements],
    }
    if meas.kraus is not None:
        doc["kraus"] = [_matrix_doc(k) for k in meas.kraus]
    return doc


def measurement_from_doc(doc: Any, party: int | None = None) -> LocalMeasurement:
    _check_version(doc, "measurement")
    p = doc.get("party", party)
    if p is None:
        raise DocumentError("measurement: no party given")
    if party is not None and p != party:
        raise DocumentError(f"measurement: document party {p} differs from requested {party}")
    if "elements" not in doc or not isinstance(doc["elements"], list):
        raise DocumentError("measurement: 'elements' must be a list of matrices")
    elems = [_parse_matrix(e, f"elements[{i}]") for i, e in enumerate(doc["elements"])]
    kraus = None
    if doc.get("kraus") is not None:
        kraus = [_parse_matrix(k, f"kraus[{i}]") for i, k in enumerate(doc["kraus"])]
    try:
        return LocalMeasurement(int(p), tuple(elems), None if kraus is None else tuple(kraus))
    except ValueError as exc:
        raise DocumentError(f"measurement: {exc}") from exc


# -- GHZ parameters


def ghz_params_to_doc(params: GhzFamilyParams) -> dict:
    return {"format_version": FORMAT_VERSION, "s": _pair(params.s), "t": _pair(params.t),
            "x": [_pair(v) for v in params.x]}


def ghz_params_from_doc(doc: Any) -> GhzFamilyParams:
    _check_version(doc, "ghz params")
    try:
        s = _complex(doc["s"], "s")
        t = _complex(doc["t"], "t")
        x = [_complex(v, f"x[{i}]") for i, v in enumerate(doc["x"])]
    except KeyError as exc:
        raise DocumentError(f"ghz params: missing field {exc}") from exc
    except TypeError as exc:
        raise DocumentError(f"ghz params: {exc}") from exc
    try:
        return GhzFamilyParams(s, t, tuple(x))
    except ValueError as exc:
        raise DocumentError(f"normalization violation: {exc}") from exc


# -- reports


def report_doc(states: StateSet, check: CheckResult, tol: float,
               measurement: LocalMeasurement | None = None,
               protocol: dict | None = None) -> dict:
    doc = {
        "format_version": FORMAT_VERSION,
        "tool_version": __version__,
        "tolerance": tol,
        "dims": list(states.dims),
        "n_states": len(states),
        "parties": [{"party": r.party, "d": r.d, "t": r.t, "r": r.r, "feasible": r.feasible}
                    for r in sorted(check.reports, key=lambda r: r.party)],
        "summary": {"conclusion": check.conclusion.value,
                    "feasible_parties": list(check.feasible_parties)},
    }
    if measurement is not None:
        doc["measurement"] = measurement_to_doc(measurement)
    if protocol is not None:
        doc["protocol"] = protocol
    return doc


def dumps(doc: dict) -> str:
    """Deterministic serialization: fixed key order, full float precision."""
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"malformed JSON: {exc}") from exc

"""JSON formats for matrices, states, channels, POVMs and ensembles.

A matrix is ``{"dims": [d], "entries": [[re, im], ...]}`` with the entries
in row-major order; rectangular matrices (Kraus operators) carry an extra
``"shape": [rows, cols]``.  A multipartite state uses the same layout with
``"dims"`` listing the tensor factors.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from . import linalg
from .channels import Ensemble, KrausChannel, Povm
from .errors import InvariantError, ShapeMismatch
from .reports import _plain
from .tensor import MultipartiteState


class FormatError(InvariantError):
    """A JSON document does not have the expected layout."""


def _entries(M: np.ndarray) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(M, dtype=complex).ravel()]


def matrix_to_json(M, dims=None) -> dict:
    M = linalg.as_matrix(M)
    if M.shape[0] == M.shape[1]:
        return {"dims": list(dims) if dims is not None else [M.shape[0]], "entries": _entries(M)}
    return {"dims": [M.shape[0]], "shape": list(M.shape), "entries": _entries(M)}


def _require(doc, *keys):
    if not isinstance(doc, dict):
        raise FormatError(f"expected a JSON object, got {type(doc).__name__}")
    missing = [k for k in keys if k not in doc]
    if missing:
        raise FormatError(f"missing field(s) {missing}")


def matrix_from_json(doc) -> np.ndarray:
    _require(doc, "dims", "entries")
    dims = [int(d) for d in doc["dims"]]
    if "shape" in doc:
        rows, cols = (int(x) for x in doc["shape"])
    else:
        rows = cols = math.prod(dims)
    try:
        flat = np.array([complex(re, im) for re, im in doc["entries"]])
    except (TypeError, ValueError) as exc:
        raise FormatError(f"entries must be [re, im] pairs: {exc}") from None
    if flat.size != rows * cols:
        raise ShapeMismatch(f"{flat.size} entries for a {rows}x{cols} matrix")
    return flat.reshape(rows, cols)


def hermitian_from_json(doc) -> np.ndarray:
    return linalg.hermitian(matrix_from_json(doc))


def state_to_json(s) -> dict:
    if isinstance(s, MultipartiteState):
        return matrix_to_json(s.rho, s.dims)
    return matrix_to_json(s)


def state_from_json(doc) -> MultipartiteState:
    M = matrix_from_json(doc)
    return MultipartiteState(M, tuple(int(d) for d in doc["dims"]))


def channel_to_json(phi: KrausChannel) -> dict:
    return {
        "in_dim": phi.in_dim,
        "out_dim": phi.out_dim,
        "kraus": [matrix_to_json(F) for F in phi.kraus],
    }


def channel_from_json(doc) -> KrausChannel:
    _require(doc, "in_dim", "out_dim", "kraus")
    return KrausChannel(tuple(matrix_from_json(F) for F in doc["kraus"]),
                        int(doc["in_dim"]), int(doc["out_dim"]))


def povm_to_json(M: Povm) -> dict:
    return {"elements": [matrix_to_json(E) for E in M.elements]}


def povm_from_json(doc) -> Povm:
    _require(doc, "elements")
    return Povm(tuple(matrix_from_json(E) for E in doc["elements"]))


def ensemble_to_json(E: Ensemble) -> dict:
    return {"probs": list(E.weights), "states": [matrix_to_json(r) for r in E.states]}


def ensemble_from_json(doc) -> Ensemble:
    _require(doc, "probs", "states")
    return Ensemble(tuple(float(p) for p in doc["probs"]),
                    tuple(matrix_from_json(r) for r in doc["states"]))


def dumps(doc) -> str:
    """Deterministic JSON text.  Floats use Python's shortest round-trip
    repr, so re-parsing recovers every value exactly."""
    return json.dumps(_plain(doc), indent=2, sort_keys=False, allow_nan=False) + "\n"


def load(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: malformed JSON ({exc})") from None

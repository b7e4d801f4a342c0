"""JSON file formats for states and channels.

State:   {"dim": n, "factor_dims": [...], "matrix": [[[re, im], ...], ...]}
Pure:    {"dim": n, "factor_dims": [...], "vector": [[re, im], ...]}
Channel: {"kraus": [matrix, ...], "class": "gio"}
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .qcore import DensityOperator, KrausChannel, PureState, ValidationError

_TAG_TO_FILE = {"genuinely_incoherent": "gio"}
_FILE_TO_TAG = {v: k for k, v in _TAG_TO_FILE.items()}


class StateFileError(ValidationError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _first_bad_entry(obj, path: str, depth: int) -> str:
    """Path of the first element that is not a well-formed [re, im] pair."""
    if depth == 0:
        ok = (isinstance(obj, list) and len(obj) == 2
              and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj))
        return "" if ok else path
    if not isinstance(obj, list):
        return path
    for i, item in enumerate(obj):
        bad = _first_bad_entry(item, f"{path}[{i}]", depth - 1)
        if bad:
            return bad
    return ""


def _complex_array(obj, path: str, ndim: int) -> np.ndarray:
    try:
        a = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise StateFileError(_first_bad_entry(obj, path, ndim) or path,
                             "entries must be [re, im] number pairs") from exc
    if a.ndim != ndim + 1 or a.shape[-1] != 2:
        raise StateFileError(path, f"expected {ndim}-d array of [re, im] pairs, got shape {a.shape}")
    return a[..., 0] + 1j * a[..., 1]


def _encode(a: np.ndarray) -> list:
    a = np.asarray(a, dtype=complex)
    return np.stack([a.real, a.imag], axis=-1).tolist()


def state_from_dict(d: dict):
    if not isinstance(d, dict):
        raise StateFileError("$", "top level must be an object")
    fd = d.get("factor_dims")
    if fd is not None and (not isinstance(fd, list) or not all(isinstance(x, int) for x in fd)):
        raise StateFileError("$.factor_dims", "must be a list of integers")
    if "matrix" in d:
        m = _complex_array(d["matrix"], "$.matrix", 2)
        if "dim" in d and d["dim"] != m.shape[0]:
            raise StateFileError("$.dim", f"declares {d['dim']} but matrix is {m.shape[0]}x{m.shape[1]}")
        try:
            return DensityOperator(m, fd)
        except ValueError as exc:
            raise StateFileError("$.matrix", str(exc)) from exc
    if "vector" in d:
        v = _complex_array(d["vector"], "$.vector", 1)
        if "dim" in d and d["dim"] != v.size:
            raise StateFileError("$.dim", f"declares {d['dim']} but vector has {v.size} entries")
        try:
            return PureState(v, fd)
        except ValueError as exc:
            raise StateFileError("$.vector", str(exc)) from exc
    raise StateFileError("$", "needs a 'matrix' or 'vector' field")


def state_to_dict(state) -> dict:
    out = {"dim": state.dim}
    if state.factor_dims is not None:
        out["factor_dims"] = list(state.factor_dims)
    if isinstance(state, PureState):
        out["vector"] = _encode(state.vector)
    else:
        out["matrix"] = _encode(state.matrix)
    return out


def load_state(path):
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise StateFileError("$", f"invalid JSON ({exc})") from exc
    return state_from_dict(data)


def save_state(state, path) -> None:
    Path(path).write_text(json.dumps(state_to_dict(state)))


def channel_to_dict(ch: KrausChannel) -> dict:
    return {"kraus": [_encode(k) for k in ch.operators], "class": _TAG_TO_FILE.get(ch.class_tag, ch.class_tag)}


def channel_from_dict(d: dict) -> KrausChannel:
    if not isinstance(d, dict) or "kraus" not in d:
        raise StateFileError("$", "needs a 'kraus' field")
    ops = [_complex_array(k, f"$.kraus[{i}]", 2) for i, k in enumerate(d["kraus"])]
    tag = d.get("class", "general")
    try:
        return KrausChannel(tuple(ops), _FILE_TO_TAG.get(tag, tag))
    except ValueError as exc:
        raise StateFileError("$.kraus", str(exc)) from exc

"""Versioned on-disk artifacts with a deterministic byte layout.

Artifacts are pickled envelopes: a format tag, an artifact kind, an integer
schema version, and a payload.  Payloads must be canonical before pickling,
meaning plain dicts with sorted string keys, lists, scalars, and numpy
arrays; sets and other unordered containers are rejected so that rebuilding
the same artifact yields byte-identical files.
"""

from __future__ import annotations

import pickle
from pathlib import Path

import numpy as np

_FORMAT = "screenseek-artifact"
_PROTOCOL = 4

_SCALARS = (str, int, float, bool, bytes, type(None))


class StorageError(ValueError):
    """Unreadable, foreign, or incompatible artifact file."""


def canonical(obj: object) -> object:
    """Normalize a payload to a deterministic structure, rejecting sets."""
    # np.float64 subclasses float, so numpy scalars must be checked first.
    if isinstance(obj, (np.integer, np.floating)):
        return obj.item()
    if isinstance(obj, _SCALARS):
        return obj
    if isinstance(obj, np.ndarray):
        return np.ascontiguousarray(obj)
    if isinstance(obj, dict):
        out = {}
        for key in sorted(obj, key=lambda k: (str(type(k)), k)):
            if not isinstance(key, (str, int)):
                raise TypeError(f"artifact keys must be str or int, got {type(key).__name__}")
            out[key] = canonical(obj[key])
        return out
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        raise TypeError("artifact payloads must not contain sets; sort them first")
    raise TypeError(f"unsupported artifact value type {type(obj).__name__}")


def save_artifact(path: str | Path, kind: str, payload: dict, version: int = 1) -> None:
    envelope = {
        "format": _FORMAT,
        "kind": kind,
        "version": version,
        "payload": canonical(payload),
    }
    Path(path).write_bytes(pickle.dumps(envelope, protocol=_PROTOCOL))


def load_artifact(path: str | Path, kind: str, versions: tuple[int, ...] = (1,)) -> dict:
    p = Path(path)
    try:
        raw = p.read_bytes()
    except OSError as exc:
        raise StorageError(f"{p}: unreadable ({exc})") from exc
    try:
        envelope = pickle.loads(raw)
    except Exception as exc:
        raise StorageError(f"{p}: not a screenseek artifact ({exc})") from exc
    if not isinstance(envelope, dict) or envelope.get("format") != _FORMAT:
        raise StorageError(f"{p}: not a screenseek artifact")
    if envelope.get("kind") != kind:
        raise StorageError(f"{p}: artifact kind {envelope.get('kind')!r}, expected {kind!r}")
    if envelope.get("version") not in versions:
        raise StorageError(
            f"{p}: artifact version {envelope.get('version')!r}, "
            f"supported: {', '.join(map(str, versions))}"
        )
    return envelope["payload"]

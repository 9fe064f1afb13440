"""Matrix Market interchange, JSON manifests and analysis reports."""

from __future__ import annotations

import hashlib
import io as _io
import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import scipy.io

from .tolerances import DEFAULT, Tolerances, from_env

SCHEMA_VERSION = 1
PRECISION = 17


def write_matrix(path, M: np.ndarray, comment: str = "") -> None:
    """Write a dense complex matrix in Matrix Market array format with 17 significant digits."""
    M = np.asarray(M, dtype=complex)
    scipy.io.mmwrite(str(path), M, comment=comment, field="complex", precision=PRECISION)


def read_matrix(path) -> np.ndarray:
    M = scipy.io.mmread(str(path))
    if hasattr(M, "toarray"):
        M = M.toarray()
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"{path}: expected a square matrix, got shape {M.shape}")
    return M


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass(frozen=True)
class Manifest:
    path: Path
    J: Path
    A: Path
    V: Path | None = None
    tolerances: dict[str, float] = field(default_factory=dict)
    output: Path | None = None
    seeds: tuple[int, ...] = ()

    @classmethod
    def load(cls, path) -> "Manifest":
        path = Path(path)
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ValueError("manifest must be a JSON object")
        base = path.parent
        missing = [k for k in ("J", "A") if k not in data]
        if missing:
            raise ValueError(f"manifest lacks {missing}")

        def resolve(key):
            p = data.get(key)
            if p is None:
                return None
            q = (base / p) if not os.path.isabs(p) else Path(p)
            if not q.exists():
                raise FileNotFoundError(f"manifest entry {key!r} points to missing file {q}")
            return q

        seeds = data.get("seeds", [])
        return cls(
            path=path,
            J=resolve("J"),
            A=resolve("A"),
            V=resolve("V"),
            tolerances=dict(data.get("tolerances", {})),
            output=(base / data["output"]) if data.get("output") else None,
            seeds=tuple(int(s) for s in (seeds if isinstance(seeds, list) else [seeds])),
        )

    def matrices(self) -> dict[str, np.ndarray]:
        out = {"J": read_matrix(self.J), "A": read_matrix(self.A)}
        if self.V is not None:
            out["V"] = read_matrix(self.V)
        n = out["J"].shape[0]
        bad = {k: v.shape for k, v in out.items() if v.shape != (n, n)}
        if bad:
            raise ValueError(f"dimension mismatch: J is {n}x{n}, got {bad}")
        return out

    def digests(self) -> dict[str, str]:
        out = {"J": sha256_file(self.J), "A": sha256_file(self.A)}
        if self.V is not None:
            out["V"] = sha256_file(self.V)
        return out

    def resolved_tolerances(self, cli_overrides: dict[str, float] | None = None) -> Tolerances:
        """Environment overrides first, then the manifest, then command-line flags."""
        return from_env(DEFAULT).merged(self.tolerances).merged(cli_overrides or {})


def write_manifest(path, roles: dict[str, str], tolerances=None, seeds=None, extra=None) -> None:
    data: dict[str, Any] = dict(roles)
    if tolerances:
        data["tolerances"] = tolerances
    if seeds is not None:
        data["seeds"] = list(seeds)
    if extra:
        data.update(extra)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")


# -- JSON encoding ---------------------------------------------------------------------------


def to_jsonable(obj: Any) -> Any:
    """Convert numpy values, complex numbers and enums into plain JSON types.

    Complex numbers become ``[re, im]`` pairs; non-finite floats become strings.
    """
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [to_jsonable(float(obj.real)), to_jsonable(float(obj.imag))]
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        if math.isfinite(f):
            return f
        return "inf" if f > 0 else ("-inf" if f < 0 else "nan")
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def dumps_report(report: dict[str, Any]) -> str:
    return json.dumps(to_jsonable(report), indent=2, sort_keys=True) + "\n"


def write_csv(path, header: list[str], rows, comment: str | None = None) -> None:
    buf = _io.StringIO()
    if comment:
        buf.write(comment + "\n")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(v if isinstance(v, str) else repr(float(v)) for v in row) + "\n")
    Path(path).write_text(buf.getvalue(), encoding="utf-8")

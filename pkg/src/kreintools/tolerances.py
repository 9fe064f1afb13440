"""Tolerance bundle shared by every checker.

All structural tolerances are relative: the absolute slack used for an input
of norm ``s`` is ``rel * (1 + s)``.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields, replace
from typing import Any, Mapping

ENV_OVERRIDE = "KREIN_TOL_OVERRIDE"


@dataclass(frozen=True)
class Tolerances:
    struct: float = 1e-10
    """Relative slack for J*J = I, J = J*, JA Hermitian and similar identities."""
    sign: float = 1e-9
    """Gram-definiteness threshold (relative to the Gram scale)."""
    proj: float = 1e-8
    """Idempotency / sum-to-identity slack for spectral projections."""
    cluster: float = 1e-7
    """Relative eigenvalue clustering radius."""
    tau: float = 1e-7
    """Relative agreement required between the two routes for the induced symmetry."""
    margin_factor: float = 10.0
    """Enclosure verdict margin band, in units of the clustering radius."""
    rank_factor: float = 1e3
    """Numerical-rank slack: singular values below n * eps * s1 * rank_factor are zero."""

    def struct_abs(self, scale: float) -> float:
        return self.struct * (1.0 + scale)

    def cluster_abs(self, scale: float) -> float:
        return self.cluster * (1.0 + scale)

    def sign_abs(self, scale: float) -> float:
        return self.sign * (1.0 + scale)

    def margin_abs(self, scale: float) -> float:
        return self.margin_factor * self.cluster_abs(scale)

    def merged(self, overrides: Mapping[str, Any] | None) -> "Tolerances":
        if not overrides:
            return self
        known = {f.name for f in fields(self)}
        unknown = set(overrides) - known
        if unknown:
            raise ValueError(f"unknown tolerance keys: {sorted(unknown)}")
        return replace(self, **{k: float(v) for k, v in overrides.items()})

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


DEFAULT = Tolerances()


def from_env(base: Tolerances = DEFAULT) -> Tolerances:
    """Apply ``KREIN_TOL_OVERRIDE`` (a JSON object) on top of ``base``."""
    raw = os.environ.get(ENV_OVERRIDE)
    if not raw:
        return base
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{ENV_OVERRIDE} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ValueError(f"{ENV_OVERRIDE} must be a JSON object")
    return base.merged(data)

"""Compact enclosure sets K and open neighbourhoods U.

Two shapes are supported: capsules (points within distance ``r`` of a real
segment ``[p, q]``) and ball unions ``K = U_{t in [-g, g]} B(t, sqrt(c0 + c1 t^2))``.
Membership is exact; signed distances are computed by the region kernels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from ._backend import kernels as _k


def _split(z) -> tuple[np.ndarray, np.ndarray, bool]:
    arr = np.asarray(z, dtype=complex)
    scalar = arr.ndim == 0
    arr = np.ascontiguousarray(arr.reshape(-1))
    return np.ascontiguousarray(arr.real), np.ascontiguousarray(arr.imag), scalar


def _ret(values: np.ndarray, scalar: bool):
    return values[0].item() if scalar else values


@dataclass(frozen=True)
class Capsule:
    p: float
    q: float
    r: float

    variant = "Capsule"

    def __post_init__(self):
        if self.p > self.q:
            raise ValueError(f"capsule needs p <= q, got [{self.p}, {self.q}]")
        if self.r < 0:
            raise ValueError(f"capsule radius must be >= 0, got {self.r}")

    def signed_distance(self, z):
        zr, zi, scalar = _split(z)
        return _ret(_k.capsule_signed_distance(zr, zi, float(self.p), float(self.q), float(self.r)), scalar)

    def contains(self, z):
        zr, zi, scalar = _split(z)
        d = _k.capsule_signed_distance(zr, zi, float(self.p), float(self.q), float(self.r))
        return _ret(d <= 0.0, scalar)

    def nearest_center(self, z):
        zr, _, scalar = _split(z)
        return _ret(np.clip(zr, self.p, self.q), scalar)

    def dilate(self, factor: float) -> "Capsule":
        _check_factor(factor)
        return Capsule(self.p, self.q, self.r * factor)

    @property
    def params(self) -> dict[str, float]:
        return {"p": float(self.p), "q": float(self.q), "r": float(self.r)}

    @property
    def extent(self) -> float:
        """Largest modulus of a point of K."""
        return max(abs(self.p), abs(self.q)) + self.r

    @property
    def diameter(self) -> float:
        return (self.q - self.p) + 2.0 * self.r

    def _pieces(self):
        p, q, r = self.p, self.q, self.r
        return [
            ("arc", (q, r, -math.pi / 2, math.pi / 2)),
            ("seg", (complex(q, r), complex(p, r))),
            ("arc", (p, r, math.pi / 2, 3 * math.pi / 2)),
            ("seg", (complex(p, -r), complex(q, -r))),
        ]


@dataclass(frozen=True)
class BallUnion:
    gamma: float
    c0: float
    c1: float

    variant = "BallUnion"

    def __post_init__(self):
        if self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        if self.c0 < 0 or self.c1 < 0:
            raise ValueError("radius coefficients must be non-negative")

    def radius(self, t):
        return np.sqrt(self.c0 + self.c1 * np.asarray(t, dtype=float) ** 2)

    def signed_distance(self, z):
        zr, zi, scalar = _split(z)
        d, _ = _k.ballunion_signed_distance(zr, zi, float(self.gamma), float(self.c0), float(self.c1))
        return _ret(d, scalar)

    def qmin(self, z):
        """``min_t |z - t|^2 - (c0 + c1 t^2)`` over ``t`` in ``[-gamma, gamma]``."""
        zr, zi, scalar = _split(z)
        return _ret(_k.ballunion_qmin(zr, zi, float(self.gamma), float(self.c0), float(self.c1)), scalar)

    def contains(self, z):
        zr, zi, scalar = _split(z)
        q = _k.ballunion_qmin(zr, zi, float(self.gamma), float(self.c0), float(self.c1))
        return _ret(q <= 0.0, scalar)

    def nearest_center(self, z):
        zr, zi, scalar = _split(z)
        _, t = _k.ballunion_signed_distance(zr, zi, float(self.gamma), float(self.c0), float(self.c1))
        return _ret(t, scalar)

    def dilate(self, factor: float) -> "BallUnion":
        _check_factor(factor)
        return BallUnion(self.gamma * factor, self.c0 * factor**2, self.c1)

    @property
    def params(self) -> dict[str, float]:
        return {"gamma": float(self.gamma), "c0": float(self.c0), "c1": float(self.c1)}

    @property
    def extent(self) -> float:
        return self.gamma + float(self.radius(self.gamma))

    @property
    def diameter(self) -> float:
        return 2.0 * self.extent

    def _pieces(self):
        g, c0, c1 = self.gamma, self.c0, self.c1
        rg = float(self.radius(g))
        if g == 0.0:
            return [("arc", (0.0, rg, 0.0, 2 * math.pi))]
        if c1 >= 1.0:
            if rg < g:
                raise ValueError("ball union with c1 >= 1 and disjoint end balls has no single boundary loop")
            # minima sit at the endpoints: K is the union of the two end balls
            phi = math.acos(min(1.0, g / rg))
            return [
                ("arc", (g, rg, -(math.pi - phi), math.pi - phi)),
                ("arc", (-g, rg, phi, 2 * math.pi - phi)),
            ]
        Y = math.sqrt(c0 + c1 * (1.0 - c1) * g * g)
        phi = math.atan2(Y, -c1 * g)
        return [
            ("arc", (g, rg, -phi, phi)),
            ("env", (g, -g, 1.0)),
            ("arc", (-g, rg, math.pi - phi, math.pi + phi)),
            ("env", (-g, g, -1.0)),
        ]

    def _envelope(self, t, sign):
        c1 = self.c1
        y = np.sqrt(np.maximum(self.c0 + c1 * (1.0 - c1) * t * t, 0.0))
        return t * (1.0 - c1) + 1j * sign * y


@dataclass(frozen=True)
class Empty:
    variant = "Empty"

    def signed_distance(self, z):
        zr, _, scalar = _split(z)
        return _ret(np.full(zr.shape, math.inf), scalar)

    def contains(self, z):
        zr, _, scalar = _split(z)
        return _ret(np.zeros(zr.shape, dtype=bool), scalar)

    def dilate(self, factor: float) -> "Empty":
        _check_factor(factor)
        return self

    @property
    def params(self) -> dict[str, float]:
        return {}

    @property
    def extent(self) -> float:
        return 0.0

    @property
    def diameter(self) -> float:
        return 0.0


EnclosureRegion = Union[Capsule, BallUnion, Empty]


def _check_factor(factor: float) -> None:
    if factor < 1.0:
        raise ValueError(f"dilation factor must be >= 1, got {factor}")


def contains(K: EnclosureRegion, z):
    return K.contains(z)


def dilate(K: EnclosureRegion, factor: float) -> EnclosureRegion:
    return K.dilate(factor)


def _piece_points(K, kind, args, s):
    """Exact boundary points of one piece at local parameters ``s`` in [0, 1]."""
    if kind == "arc":
        c, r, a0, a1 = args
        th = a0 + (a1 - a0) * s
        return c + r * np.exp(1j * th)
    if kind == "seg":
        z0, z1 = args
        return z0 + (z1 - z0) * s
    t0, t1, sign = args
    return K._envelope(t0 + (t1 - t0) * s, sign)


def boundary_samples(K: EnclosureRegion, count: int) -> np.ndarray:
    """``count`` points on the boundary, counterclockwise, equally spaced in arc length.

    The returned loop is closed: the last point repeats the first.
    """
    if count < 8:
        raise ValueError("count must be >= 8")
    if isinstance(K, Empty):
        raise ValueError("the empty region has no boundary")
    pieces = K._pieces()
    dense = 4001
    s = np.linspace(0.0, 1.0, dense)
    cum_lengths = []
    total = 0.0
    for kind, args in pieces:
        pts = _piece_points(K, kind, args, s)
        seg = np.concatenate([[0.0], np.cumsum(np.abs(np.diff(pts)))])
        cum_lengths.append(total + seg)
        total += seg[-1]
    if total == 0.0:
        return np.full(count, complex(pieces[0][1][0]) if pieces[0][0] == "arc" else 0j)
    targets = np.linspace(0.0, total, count)
    out = np.empty(count, dtype=complex)
    for i, L in enumerate(targets):
        for (kind, args), cum in zip(pieces, cum_lengths):
            if L <= cum[-1] or (kind, args) == pieces[-1]:
                loc = float(np.interp(L, cum, s))
                out[i] = _piece_points(K, kind, args, np.array(loc))
                break
    out[-1] = out[0]
    return out


def describe(K: EnclosureRegion) -> str:
    params = ",".join(f"{k}={v!r}" for k, v in K.params.items())
    return f"# region={K.variant} params={params}"


def export_csv(K: EnclosureRegion, path, count: int = 256) -> None:
    pts = boundary_samples(K, count)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(describe(K) + "\n")
        fh.write("re,im\n")
        for z in pts:
            fh.write(f"{float(z.real)!r},{float(z.imag)!r}\n")


def region_from_dict(d: dict) -> EnclosureRegion:
    variant = d.get("variant")
    if variant == "Capsule":
        return Capsule(float(d["p"]), float(d["q"]), float(d["r"]))
    if variant == "BallUnion":
        return BallUnion(float(d["gamma"]), float(d["c0"]), float(d["c1"]))
    if variant == "Empty":
        return Empty()
    raise ValueError(f"unknown region variant {variant!r}")


def region_to_dict(K: EnclosureRegion) -> dict:
    return {"variant": K.variant, **K.params}


def parse_region(spec: str) -> EnclosureRegion:
    """Parse ``capsule:p,q,r``, ``ballunion:gamma,c0,c1`` or ``empty``."""
    name, _, rest = spec.partition(":")
    name = name.strip().lower()
    if name == "empty":
        return Empty()
    vals = [float(v) for v in rest.split(",")] if rest else []
    if name == "capsule" and len(vals) == 3:
        return Capsule(*vals)
    if name == "ballunion" and len(vals) == 3:
        return BallUnion(*vals)
    raise ValueError(f"cannot parse region {spec!r}")


# -- open neighbourhoods -----------------------------------------------------------------


@dataclass(frozen=True)
class Thickened:
    """Open set ``{z : signed_distance_K(z) < pad}`` around a region ``K``."""

    base: EnclosureRegion
    pad: float

    def signed_distance(self, z):
        return np.asarray(self.base.signed_distance(z)) - self.pad

    def contains(self, z):
        return np.asarray(self.signed_distance(z)) < 0.0


@dataclass(frozen=True)
class DiscUnion:
    discs: tuple[tuple[complex, float], ...]

    def signed_distance(self, z):
        z = np.asarray(z, dtype=complex)
        if not self.discs:
            return np.full(z.shape, math.inf)
        return np.min([np.abs(z - c) - r for c, r in self.discs], axis=0)

    def contains(self, z):
        return np.asarray(self.signed_distance(z)) < 0.0


@dataclass(frozen=True)
class RectUnion:
    rects: tuple[tuple[float, float, float, float], ...]
    """Each rectangle is ``(xmin, xmax, ymin, ymax)``."""

    def signed_distance(self, z):
        z = np.asarray(z, dtype=complex)
        if not self.rects:
            return np.full(z.shape, math.inf)
        out = []
        for x0, x1, y0, y1 in self.rects:
            dx = np.maximum(x0 - z.real, z.real - x1)
            dy = np.maximum(y0 - z.imag, z.imag - y1)
            outside = np.hypot(np.maximum(dx, 0.0), np.maximum(dy, 0.0))
            inside = np.minimum(np.maximum(dx, dy), 0.0)
            out.append(outside + inside)
        return np.min(out, axis=0)

    def contains(self, z):
        return np.asarray(self.signed_distance(z)) < 0.0


Neighborhood = Union[Thickened, DiscUnion, RectUnion]


def membership_grid(extent: float, points: int = 100) -> np.ndarray:
    """Square ``points x points`` grid covering ``[-extent, extent]^2``."""
    xs = np.linspace(-extent, extent, points)
    X, Y = np.meshgrid(xs, xs)
    return (X + 1j * Y).ravel()


def grid_subset(inner: EnclosureRegion, outer: EnclosureRegion, grid: Iterable[complex]) -> tuple[bool, int]:
    """Check ``inner`` subset of ``outer`` on grid points; returns (ok, number of offenders)."""
    g = np.asarray(list(grid) if not isinstance(grid, np.ndarray) else grid)
    bad = np.asarray(inner.contains(g)) & ~np.asarray(outer.contains(g))
    return (not bool(bad.any())), int(bad.sum())

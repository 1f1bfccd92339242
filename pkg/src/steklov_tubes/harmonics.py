"""Core types and closed-form spectra of the transverse model manifolds.

An excision scenario records an ambient dimension m, the first nonzero
Neumann eigenvalue of the ambient manifold, and a list of submanifolds
N_j of dimension n_j <= m - 2.  Removing a tube of radius eps around N_j
creates a boundary component N_j x S^{d_j}, d_j = m - n_j - 1, and the
model problems separate into modes indexed by a transverse eigenvalue
lambda_k of N_j and a spherical harmonic cluster q on S^{d_j}.

Sphere spectra are i(i+d-1) with the usual multiplicity

    mult(d, i) = C(d+i, d) - C(d+i-2, d),

and cluster_index inverts the cumulative multiplicity count: it maps a
0-based position p in the eigenvalue sequence (repeated by multiplicity)
to the cluster q it belongs to.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

from .errors import ConfigurationError

# Relative tolerance for grouping numerically equal transverse eigenvalues.
GROUP_RTOL = 1e-12


# ---------------------------------------------------------------------------
# round sphere S^d


def sphere_eigenvalue(d: int, i: int) -> float:
    """i-th distinct Laplace eigenvalue of the unit round sphere S^d."""
    if d < 1 or i < 0:
        raise ValueError(f"need d >= 1 and i >= 0, got d={d}, i={i}")
    return float(i * (i + d - 1))


def sphere_multiplicity(d: int, i: int) -> int:
    """Multiplicity of the i-th distinct eigenvalue of S^d."""
    if d < 1 or i < 0:
        raise ValueError(f"need d >= 1 and i >= 0, got d={d}, i={i}")
    if i == 0:
        return 1
    return math.comb(d + i, d) - math.comb(d + i - 2, d)


def cluster_index(d: int, p: int) -> int:
    """Cluster q containing position p of the multiplicity-repeated spectrum.

    Positions are 0-based: on S^2 the sequence of clusters is
    0, 1, 1, 1, 2, 2, 2, 2, 2, ... so cluster_index(2, 3) == 1 and
    cluster_index(2, 4) == 2.
    """
    if p < 0:
        raise ValueError(f"position must be >= 0, got {p}")
    total = 0
    q = 0
    while True:
        total += sphere_multiplicity(d, q)
        if p < total:
            return q
        q += 1


def sphere_volume(d: int) -> float:
    """Riemannian volume of the unit round sphere S^d."""
    if d < 0:
        raise ValueError(f"need d >= 0, got d={d}")
    return 2.0 * math.pi ** ((d + 1) / 2.0) / math.gamma((d + 1) / 2.0)


# ---------------------------------------------------------------------------
# transverse manifolds N_j


@dataclass(frozen=True)
class Point:
    """A single point (n = 0); its only transverse eigenvalue is 0."""


@dataclass(frozen=True)
class Circle:
    length: float


@dataclass(frozen=True)
class RoundSphere:
    dim: int
    radius: float


@dataclass(frozen=True)
class FlatTorus:
    sides: tuple[float, ...]


SpectrumKind = Point | Circle | RoundSphere | FlatTorus


def _kind_dim(kind: SpectrumKind) -> int:
    if isinstance(kind, Point):
        return 0
    if isinstance(kind, Circle):
        return 1
    if isinstance(kind, RoundSphere):
        return kind.dim
    if isinstance(kind, FlatTorus):
        return len(kind.sides)
    raise TypeError(f"unknown spectrum kind {kind!r}")


def _torus_spectrum(sides: tuple[float, ...], count: int) -> list[tuple[float, int]]:
    # Enumerate 4 pi^2 sum (k_i / L_i)^2 over integer vectors, growing the
    # search box until the count-th distinct value is certified smaller than
    # anything outside the box.
    lmax = max(sides)
    box = 4
    while True:
        values = sorted(
            sum((2.0 * math.pi * k / L) ** 2 for k, L in zip(vec, sides))
            for vec in itertools.product(range(-box, box + 1), repeat=len(sides))
        )
        grouped: list[tuple[float, int]] = []
        for v in values:
            if grouped and v <= grouped[-1][0] * (1 + GROUP_RTOL) + GROUP_RTOL:
                grouped[-1] = (grouped[-1][0], grouped[-1][1] + 1)
            else:
                grouped.append((v, 1))
        outside = (2.0 * math.pi * (box + 1) / lmax) ** 2
        if len(grouped) >= count and grouped[count - 1][0] < outside:
            return grouped[:count]
        box *= 2


def transverse_spectrum(kind: SpectrumKind, count: int) -> list[tuple[float, int]]:
    """First `count` distinct Laplace eigenvalues of N with multiplicities.

    Returns [(lambda_0, mult_0), ...] in ascending order, starting from
    lambda_0 = 0.  A point has the single eigenvalue 0.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    if isinstance(kind, Point):
        return [(0.0, 1)][:count]
    if isinstance(kind, Circle):
        if kind.length <= 0:
            raise ConfigurationError(f"circle length must be > 0, got {kind.length}")
        out = [(0.0, 1)]
        for k in range(1, count):
            out.append(((2.0 * math.pi * k / kind.length) ** 2, 2))
        return out[:count]
    if isinstance(kind, RoundSphere):
        if kind.dim < 1 or kind.radius <= 0:
            raise ConfigurationError(f"bad round sphere {kind!r}")
        r2 = kind.radius ** 2
        return [
            (sphere_eigenvalue(kind.dim, i) / r2, sphere_multiplicity(kind.dim, i))
            for i in range(count)
        ]
    if isinstance(kind, FlatTorus):
        if len(kind.sides) < 1 or any(s <= 0 for s in kind.sides):
            raise ConfigurationError(f"bad flat torus {kind!r}")
        return _torus_spectrum(kind.sides, count)
    raise TypeError(f"unknown spectrum kind {kind!r}")


# ---------------------------------------------------------------------------
# scenarios


@dataclass(frozen=True)
class SubmanifoldSpec:
    """One excised submanifold: intrinsic dimension, volume, and spectrum."""

    dim: int
    volume: float
    kind: SpectrumKind

    def __post_init__(self):
        if self.dim < 0:
            raise ConfigurationError(f"dim must be >= 0, got {self.dim}")
        if self.volume <= 0:
            raise ConfigurationError(f"volume must be > 0, got {self.volume}")
        kd = _kind_dim(self.kind)
        if kd != self.dim:
            raise ConfigurationError(
                f"kind {self.kind!r} has dimension {kd}, spec says {self.dim}"
            )


@dataclass(frozen=True)
class ExcisionScenario:
    """Ambient dimension, ambient spectral gap, and the excised submanifolds."""

    m: int
    lambda1_M: float
    submanifolds: tuple[SubmanifoldSpec, ...]

    def __post_init__(self):
        if self.m < 2:
            raise ConfigurationError(f"ambient dimension must be >= 2, got {self.m}")
        if self.lambda1_M <= 0:
            raise ConfigurationError(
                f"lambda1_M must be > 0, got {self.lambda1_M}"
            )
        if len(self.submanifolds) < 1:
            raise ConfigurationError("need at least one submanifold")
        for s in self.submanifolds:
            if s.dim > self.m - 2:
                raise ConfigurationError(
                    f"submanifold dim {s.dim} exceeds m - 2 = {self.m - 2}"
                )

    @property
    def b(self) -> int:
        return len(self.submanifolds)

    def sphere_dim(self, j: int) -> int:
        """Dimension d_j of the normal sphere around submanifold j."""
        return self.m - self.submanifolds[j].dim - 1


@dataclass(frozen=True)
class ModeEigenvalue:
    """One eigenvalue of a model problem, tagged by its separated mode.

    j is the submanifold index, k the transverse eigenvalue index, q the
    spherical cluster.  multiplicity is mult(lambda_k) * mult(q).
    """

    value: float
    j: int
    k: int
    q: int
    multiplicity: int
    family: str = field(default="Steklov")

    def __post_init__(self):
        if self.family not in ("SN", "SD", "Steklov"):
            raise ConfigurationError(f"unknown family {self.family!r}")


# ---------------------------------------------------------------------------
# JSON serialization


def _kind_to_json(kind: SpectrumKind) -> dict:
    if isinstance(kind, Point):
        return {"type": "point"}
    if isinstance(kind, Circle):
        return {"type": "circle", "length": kind.length}
    if isinstance(kind, RoundSphere):
        return {"type": "round_sphere", "dim": kind.dim, "radius": kind.radius}
    if isinstance(kind, FlatTorus):
        return {"type": "flat_torus", "sides": list(kind.sides)}
    raise TypeError(f"unknown spectrum kind {kind!r}")


def _kind_from_json(obj: dict) -> SpectrumKind:
    try:
        t = obj["type"]
        if t == "point":
            return Point()
        if t == "circle":
            return Circle(length=float(obj["length"]))
        if t == "round_sphere":
            return RoundSphere(dim=int(obj["dim"]), radius=float(obj["radius"]))
        if t == "flat_torus":
            return FlatTorus(sides=tuple(float(s) for s in obj["sides"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigurationError(f"malformed kind object {obj!r}") from exc
    raise ConfigurationError(f"unknown kind type {t!r}")


def scenario_to_json(scenario: ExcisionScenario) -> dict:
    return {
        "m": scenario.m,
        "lambda1_M": scenario.lambda1_M,
        "submanifolds": [
            {"dim": s.dim, "volume": s.volume, "kind": _kind_to_json(s.kind)}
            for s in scenario.submanifolds
        ],
    }


def scenario_from_json(obj: dict) -> ExcisionScenario:
    try:
        subs = tuple(
            SubmanifoldSpec(
                dim=int(s["dim"]),
                volume=float(s["volume"]),
                kind=_kind_from_json(s["kind"]),
            )
            for s in obj["submanifolds"]
        )
        return ExcisionScenario(
            m=int(obj["m"]),
            lambda1_M=float(obj["lambda1_M"]),
            submanifolds=subs,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigurationError(f"malformed scenario object: {exc}") from exc


def load_scenario(path: str) -> ExcisionScenario:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"scenario file {path} is not valid JSON") from exc
    return scenario_from_json(obj)


def save_scenario(scenario: ExcisionScenario, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(scenario_to_json(scenario), fh, indent=2)
        fh.write("\n")

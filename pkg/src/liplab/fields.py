"""Catalog of unit Lipschitz vector fields and scalar test functions.

Unit fields are built through a scalar phase: in 2D, v = (cos phi, sin phi);
for higher dimensions the first coordinate pair is rotated by phi and the
remaining coordinates stay zero.  The chord of the unit circle is bounded by
arc length, so the Lipschitz constant of the phase is a valid Lipschitz
constant for the field.  Every catalog member therefore carries an
analytically known constant K, which downstream contraction arguments rely on.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field as dataclass_field
from typing import Callable

import numpy as np

Array = np.ndarray


def as_points(x, dimension: int | None = None) -> Array:
    """Normalize scalar-free point input to a (m, n) float array.

    Accepts a single point (length-n sequence) or a batch (m, n).  Raises on
    non-finite coordinates or dimension mismatch.
    """
    pts = np.asarray(x, dtype=float)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.ndim != 2 or pts.shape[1] < 1:
        raise ValueError(f"points must be a (m, n) array with n >= 1, got shape {pts.shape}")
    if dimension is not None and pts.shape[1] != dimension:
        raise ValueError(f"expected dimension {dimension}, got {pts.shape[1]}")
    if not np.all(np.isfinite(pts)):
        raise ValueError("point coordinates must be finite")
    return pts


def _float_text(x: float) -> str:
    # repr round-trips doubles bit-exactly in Python 3
    return repr(float(x))


@dataclass(frozen=True)
class FieldDescriptor:
    """Construction record for a unit field: family name plus numeric parameters."""

    family: str
    dimension: int
    params: tuple[tuple[str, float], ...] = ()

    def param(self, name: str) -> float:
        for key, value in self.params:
            if key == name:
                return value
        raise KeyError(name)

    def to_text(self) -> str:
        parts = [f"dim={self.dimension}"]
        parts += [f"{k}={_float_text(v)}" for k, v in self.params]
        return f"{self.family}:" + ",".join(parts)

    @staticmethod
    def parse(text: str) -> "FieldDescriptor":
        m = re.fullmatch(r"([a-z_]+)(?::(.*))?", text.strip())
        if m is None:
            raise ValueError(f"malformed field descriptor: {text!r}")
        family, body = m.group(1), m.group(2) or ""
        dimension = 2
        params: list[tuple[str, float]] = []
        for item in filter(None, (p.strip() for p in body.split(","))):
            if "=" not in item:
                raise ValueError(f"malformed descriptor parameter: {item!r}")
            key, _, value = item.partition("=")
            key = key.strip()
            if key == "dim":
                dimension = int(value)
            else:
                params.append((key, float(value)))
        return FieldDescriptor(family, dimension, tuple(params))


@dataclass(frozen=True)
class UnitVectorField:
    """Evaluable unit vector field with a declared Lipschitz constant.

    ``eval_fn`` maps a (m, n) batch to (m, n) unit vectors; ``lipschitz_k`` is
    a declared upper bound for the field's Lipschitz constant.
    """

    dimension: int
    lipschitz_k: float
    descriptor: FieldDescriptor
    eval_fn: Callable[[Array], Array] = dataclass_field(repr=False)

    def __post_init__(self):
        if self.dimension < 2:
            raise ValueError("unit fields require dimension >= 2")
        if self.lipschitz_k < 0:
            raise ValueError("lipschitz_k must be nonnegative")

    def __call__(self, points) -> Array:
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            return self.eval_fn(pts[None, :])[0]
        return self.eval_fn(pts)


def make_phase_field(
    dimension: int,
    phase: Callable[[Array], Array],
    phase_lipschitz: float,
    descriptor: FieldDescriptor | None = None,
) -> UnitVectorField:
    """Build the unit field obtained by rotating e1 by ``phase`` in the (e1, e2) plane.

    ``phase`` maps a (m, n) batch to (m,) angles.  Since
    ``|v(X) - v(Y)| = 2 |sin((phase(X) - phase(Y)) / 2)| <= |phase(X) - phase(Y)|``,
    any Lipschitz bound for the phase is one for the field.
    """
    if dimension <= 0:
        raise ValueError("dimension must be positive")
    if dimension < 2:
        raise ValueError("phase construction needs two coordinates to rotate in")
    if descriptor is None:
        descriptor = FieldDescriptor("custom", dimension)

    def eval_fn(pts: Array) -> Array:
        angle = np.asarray(phase(pts), dtype=float)
        out = np.zeros_like(pts)
        out[:, 0] = np.cos(angle)
        out[:, 1] = np.sin(angle)
        return out

    return UnitVectorField(dimension, float(phase_lipschitz), descriptor, eval_fn)


def constant_field(dimension: int = 2, phase: float = 0.0) -> UnitVectorField:
    """Constant unit field, K = 0.  ``phase`` picks the direction in the (e1, e2) plane."""
    desc = FieldDescriptor("constant", dimension, (("phase", float(phase)),))
    return make_phase_field(dimension, lambda pts: np.full(len(pts), float(phase)), 0.0, desc)


def shear_field(a: float = 1.0, dimension: int = 2) -> UnitVectorField:
    """Shear family: phase = a * x1, so K = a."""
    desc = FieldDescriptor("shear", dimension, (("a", float(a)),))
    return make_phase_field(dimension, lambda pts: float(a) * pts[:, 0], abs(float(a)), desc)


def sinusoid_field(a: float = 0.5, b: float = 1.0, c: float = 1.0, dimension: int = 2) -> UnitVectorField:
    """Sinusoidal family: phase = a * sin(b x1 + c x2), so K = a * sqrt(b^2 + c^2)."""
    a, b, c = float(a), float(b), float(c)
    desc = FieldDescriptor("sinusoid", dimension, (("a", a), ("b", b), ("c", c)))
    k = abs(a) * math.hypot(b, c)
    return make_phase_field(dimension, lambda pts: a * np.sin(b * pts[:, 0] + c * pts[:, 1]), k, desc)


_FAMILIES: dict[str, Callable[..., UnitVectorField]] = {
    "constant": lambda dim, p: constant_field(dim, p.get("phase", 0.0)),
    "shear": lambda dim, p: shear_field(p.get("a", 1.0), dim),
    "sinusoid": lambda dim, p: sinusoid_field(p.get("a", 0.5), p.get("b", 1.0), p.get("c", 1.0), dim),
}


def field_from_descriptor(descriptor: FieldDescriptor | str, dimension: int | None = None) -> UnitVectorField:
    """Reconstruct a catalog field from its descriptor (text or parsed form)."""
    if isinstance(descriptor, str):
        descriptor = FieldDescriptor.parse(descriptor)
    if dimension is not None and dimension != descriptor.dimension:
        descriptor = FieldDescriptor(descriptor.family, dimension, descriptor.params)
    if descriptor.family not in _FAMILIES:
        raise ValueError(f"unknown field family: {descriptor.family!r} (known: {sorted(_FAMILIES)})")
    return _FAMILIES[descriptor.family](descriptor.dimension, dict(descriptor.params))


def catalog_unit_fields(dimension: int = 2) -> list[UnitVectorField]:
    """The default field suite: constant (K=0), shear a=1 (K=1), sinusoid (K=sqrt(2)/2)."""
    return [
        constant_field(dimension),
        shear_field(1.0, dimension),
        sinusoid_field(0.5, 1.0, 1.0, dimension),
    ]


# --------------------------------------------------------------------------
# scalar test functions
# --------------------------------------------------------------------------

REGULARITIES = ("continuous_compact_support", "indicator", "truncated_singularity", "smooth")


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Scalar test function with declared regularity, support box, and known norms.

    ``eval_fn`` maps (m, n) points to (m,) values; evaluation through
    ``__call__`` zeroes everything outside ``support_box`` so the support
    contract is exact by construction.  ``lp_norms`` maps an exponent p to
    ``(value, provenance)``.  ``mask_to_box`` may be disabled by constructors
    whose ``eval_fn`` already vanishes outside the box; ``nonnegative``
    declares F >= 0 so modulus paths can skip the absolute value.
    """

    name: str
    dimension: int
    regularity: str
    support_box: Array
    eval_fn: Callable[[Array], Array] = dataclass_field(repr=False)
    lp_norms: dict = dataclass_field(default_factory=dict)
    lipschitz: float | None = None
    params: dict = dataclass_field(default_factory=dict)
    mask_to_box: bool = True
    nonnegative: bool = False

    def __post_init__(self):
        if self.regularity not in REGULARITIES:
            raise ValueError(f"unknown regularity tag: {self.regularity!r}")
        box = np.asarray(self.support_box, dtype=float)
        if box.shape != (self.dimension, 2) or np.any(box[:, 0] >= box[:, 1]):
            raise ValueError("support_box must be a nondegenerate (n, 2) array of (lo, hi) rows")
        object.__setattr__(self, "support_box", box)
        if self.regularity == "truncated_singularity":
            gamma = self.params.get("gamma")
            if gamma is None:
                raise ValueError("truncated_singularity requires a gamma parameter")
            for p in self.lp_norms:
                if gamma * p >= self.dimension:
                    raise ValueError(f"gamma*p = {gamma * p} must stay below the dimension {self.dimension}")

    def __call__(self, points) -> Array | float:
        pts = np.asarray(points, dtype=float)
        single = pts.ndim == 1
        if single:
            pts = pts[None, :]
        values = self.eval_fn(pts)
        if self.mask_to_box:
            box = self.support_box
            inside = (pts[:, 0] >= box[0, 0]) & (pts[:, 0] <= box[0, 1])
            for axis in range(1, self.dimension):
                inside &= (pts[:, axis] >= box[axis, 0]) & (pts[:, axis] <= box[axis, 1])
            values = np.where(inside, values, 0.0)
        return float(values[0]) if single else values

    def support_distance(self, points: Array) -> Array:
        """Euclidean distance from each point to the support box (0 inside)."""
        box = self.support_box
        total = np.zeros(len(points))
        for axis in range(self.dimension):
            gap = np.maximum(box[axis, 0] - points[:, axis], points[:, axis] - box[axis, 1])
            total += np.square(np.maximum(gap, 0.0))
        return np.sqrt(total)

    def l1_norm(self) -> float:
        if 1 not in self.lp_norms:
            raise ValueError(f"scalar field {self.name!r} declares no L1 norm")
        return self.lp_norms[1][0]

    @staticmethod
    def from_callable(
        fn: Callable[[Array], Array],
        dimension: int,
        support_box,
        regularity: str = "smooth",
        name: str = "custom",
        lp_norms: dict | None = None,
        lipschitz: float | None = None,
    ) -> "ScalarField":
        box = np.asarray(support_box, dtype=float)
        return ScalarField(name, dimension, regularity, box, fn, lp_norms or {}, lipschitz, {})


def _ball_surface(n: int) -> float:
    # surface measure of the unit sphere S^(n-1)
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


def unit_ball_volume(n: int) -> float:
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)


def gaussian_bump(dimension: int = 2, sigma: float = 0.5) -> ScalarField:
    """Gaussian bump exp(-|X|^2/sigma^2) cut at |X| = 4*sigma, normalized to unit mass.

    Normalization uses the closed-form untruncated integral (sigma*sqrt(pi))^n;
    the mass removed by truncation is below 1e-6 of the total, so the declared
    L1 norm 1 is an upper bound accurate to that tolerance.
    """
    sigma = float(sigma)
    mass = (sigma * math.sqrt(math.pi)) ** dimension
    radius = 4.0 * sigma
    box = np.array([[-radius, radius]] * dimension)

    def eval_fn(pts: Array) -> Array:
        r2 = np.einsum("ij,ij->i", pts, pts)
        return np.where(r2 <= radius * radius, np.exp(-r2 / (sigma * sigma)) / mass, 0.0)

    lip = math.sqrt(2.0) / sigma * math.exp(-0.5) / mass
    return ScalarField(
        "bump",
        dimension,
        "smooth",
        box,
        eval_fn,
        {1: (1.0, "closed-form gaussian integral; truncation below 1e-6 of mass")},
        lipschitz=lip,
        params={"sigma": sigma, "cut_radius": radius},
        mask_to_box=False,  # the radius cut already vanishes outside the box
        nonnegative=True,
    )


def box_indicator(dimension: int = 2, lo: float = 0.0, hi: float = 1.0) -> ScalarField:
    """Indicator of the axis-aligned box [lo, hi]^n, normalized to unit mass."""
    lo, hi = float(lo), float(hi)
    box = np.array([[lo, hi]] * dimension)
    volume = (hi - lo) ** dimension

    def eval_fn(pts: Array) -> Array:
        inside = (pts[:, 0] >= lo) & (pts[:, 0] <= hi)
        for axis in range(1, dimension):
            inside &= (pts[:, axis] >= lo) & (pts[:, axis] <= hi)
        return inside * (1.0 / volume)

    return ScalarField(
        "indicator",
        dimension,
        "indicator",
        box,
        eval_fn,
        {1: (1.0, "box volume")},
        params={"lo": lo, "hi": hi},
        mask_to_box=False,
        nonnegative=True,
    )


def truncated_singularity(dimension: int = 2, gamma: float = 1.0, radius: float = 1.0) -> ScalarField:
    """|X|^(-gamma) on the ball |X| <= radius, normalized to unit mass.

    The polar integral gives mass = surf(S^(n-1)) * radius^(n-gamma) / (n-gamma);
    in 2D with gamma = 1, radius = 1 this is 2*pi.
    """
    gamma, radius = float(gamma), float(radius)
    if gamma >= dimension:
        raise ValueError("gamma must stay below the dimension for an integrable singularity")
    mass = _ball_surface(dimension) * radius ** (dimension - gamma) / (dimension - gamma)
    box = np.array([[-radius, radius]] * dimension)

    def eval_fn(pts: Array) -> Array:
        r = np.sqrt(np.einsum("ij,ij->i", pts, pts))
        with np.errstate(divide="ignore"):
            return np.where(r <= radius, r ** (-gamma) / mass, 0.0)

    return ScalarField(
        "singularity",
        dimension,
        "truncated_singularity",
        box,
        eval_fn,
        {1: (1.0, "polar closed form surf * R^(n-gamma)/(n-gamma)")},
        params={"gamma": gamma, "radius": radius},
        mask_to_box=False,
        nonnegative=True,
    )


def tent_function(dimension: int = 2) -> ScalarField:
    """Product tent prod_i max(0, 1 - |x_i|); each 1D factor has unit mass."""
    box = np.array([[-1.0, 1.0]] * dimension)

    def eval_fn(pts: Array) -> Array:
        return np.prod(np.maximum(0.0, 1.0 - np.abs(pts)), axis=1)

    return ScalarField(
        "tent",
        dimension,
        "continuous_compact_support",
        box,
        eval_fn,
        {1: (1.0, "product of unit-mass 1D tents")},
        lipschitz=math.sqrt(dimension),
        mask_to_box=False,
        nonnegative=True,
    )


def catalog_scalar_fields(dimension: int = 2) -> list[ScalarField]:
    """Finite stand-in for a dense family in the L1 unit ball; all members have L1 norm 1."""
    if dimension < 1:
        raise ValueError("dimension must be at least 1")
    return [
        gaussian_bump(dimension),
        box_indicator(dimension),
        truncated_singularity(dimension),
        tent_function(dimension),
    ]


def scalar_from_name(name: str, dimension: int = 2) -> ScalarField:
    for f in catalog_scalar_fields(dimension):
        if f.name == name:
            return f
    raise ValueError(f"unknown scalar field {name!r} (catalog: bump, indicator, singularity, tent)")


# --------------------------------------------------------------------------
# empirical Lipschitz estimation
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class PairSampler:
    """Random pair generator over a bounded box.

    A ``local_fraction`` of pairs places the second point at a log-uniform
    distance from the first (down to ``min_scale``), which is what drives the
    empirical ratio toward the true constant; the remainder are independent
    uniform pairs.
    """

    box: Array
    count: int = 100_000
    local_fraction: float = 0.5
    min_scale: float = 1e-4

    def draw(self, rng: np.random.Generator) -> tuple[Array, Array]:
        box = np.asarray(self.box, dtype=float)
        n = box.shape[0]
        lo, hi = box[:, 0], box[:, 1]
        x = rng.uniform(lo, hi, size=(self.count, n))
        y = rng.uniform(lo, hi, size=(self.count, n))
        k = int(self.count * self.local_fraction)
        if k > 0:
            diameter = float(np.linalg.norm(hi - lo))
            scale = np.exp(rng.uniform(math.log(self.min_scale), math.log(diameter), size=k))
            direction = rng.standard_normal((k, n))
            direction /= np.linalg.norm(direction, axis=1, keepdims=True)
            y[:k] = np.clip(x[:k] + scale[:, None] * direction, lo, hi)
        return x, y


def estimate_lipschitz(field: UnitVectorField, sampler: PairSampler, seed: int = 0) -> float:
    """Empirical lower bound on the Lipschitz constant: max ratio over sampled pairs.

    Degenerate pairs (X == Y) are skipped.  For catalog fields the result never
    exceeds the declared constant beyond rounding.
    """
    rng = np.random.default_rng([int(seed), 0x11B])
    x, y = sampler.draw(rng)
    dist = np.linalg.norm(x - y, axis=1)
    keep = dist > 0.0
    if not np.any(keep):
        return 0.0
    vx = field(x[keep])
    vy = field(y[keep])
    ratios = np.linalg.norm(vx - vy, axis=1) / dist[keep]
    return float(np.max(ratios))

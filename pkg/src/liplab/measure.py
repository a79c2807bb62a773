"""Lebesgue measure estimation on grids, distortion checks, and interval covering.

Image measures go through the pullback: a grid cell center Z lies in S_s(A)
iff S_s^{-1}(Z) lies in A, which uses the certified inverse and avoids the
gaps and overlaps of forward-warped cells.  Error bounds come from corner
disagreement: a cell is flagged as boundary when its corners do not agree on
membership, a conservative bound that needs no smoothness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product as _iter_product
from typing import Callable, Iterator, Sequence

import numpy as np

from .averaging import MaximalSpec, QuadratureSpec, maximal_batch
from .fields import Array, ScalarField, unit_ball_volume
from .perturb import PerturbationMap, invert_batch

_Z99 = 2.5758293035489004  # two-sided 99% normal quantile


class GridError(ValueError):
    """Raised when a grid cannot hold the set it is asked to measure."""


@dataclass(frozen=True)
class GridSpec:
    """Axis-aligned evaluation lattice; ``mask_radius`` restricts to the ball |X| <= N."""

    box: Array
    resolution: int
    mask_radius: float | None = None

    def __post_init__(self):
        box = np.atleast_2d(np.asarray(self.box, dtype=float))
        if box.shape[1] != 2 or np.any(box[:, 0] >= box[:, 1]):
            raise ValueError("box must be an (n, 2) array of nondegenerate (lo, hi) rows")
        object.__setattr__(self, "box", box)
        if self.resolution < 16:
            raise ValueError("grid resolution must be at least 16 cells per axis")

    @property
    def dimension(self) -> int:
        return self.box.shape[0]

    @property
    def cell_widths(self) -> Array:
        return (self.box[:, 1] - self.box[:, 0]) / self.resolution

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.cell_widths))

    def axis_coords(self, kind: str) -> list[Array]:
        lo = self.box[:, 0]
        h = self.cell_widths
        if kind == "centers":
            return [lo[k] + (np.arange(self.resolution) + 0.5) * h[k] for k in range(self.dimension)]
        if kind == "corners":
            return [lo[k] + np.arange(self.resolution + 1) * h[k] for k in range(self.dimension)]
        raise ValueError(f"unknown lattice kind {kind!r}")

    def lattice_shape(self, kind: str) -> tuple[int, ...]:
        size = self.resolution if kind == "centers" else self.resolution + 1
        return (size,) * self.dimension

    def iter_lattice(self, kind: str, chunk_target: int = 1 << 20) -> Iterator[tuple[Array, int]]:
        """Yield (points, flat_offset) chunks of the lattice in C order."""
        axes = self.axis_coords(kind)
        shape = self.lattice_shape(kind)
        per_row = int(np.prod(shape[1:], dtype=np.int64))
        rows = max(1, chunk_target // max(per_row, 1))
        for i0 in range(0, shape[0], rows):
            sub = axes[0][i0:i0 + rows]
            mesh = np.meshgrid(sub, *axes[1:], indexing="ij")
            pts = np.stack([m.reshape(-1) for m in mesh], axis=1)
            yield pts, i0 * per_row

    def mask(self, points: Array) -> Array:
        if self.mask_radius is None:
            return np.ones(len(points), dtype=bool)
        return np.sum(points * points, axis=1) <= self.mask_radius ** 2


@dataclass(frozen=True)
class MeasureEstimate:
    """Set-measure estimate with its method tag and a conservative error bound."""

    value: float
    method: str
    error_bound: float
    samples_or_cells: int

    def __post_init__(self):
        if self.value < 0 or self.error_bound < 0:
            raise ValueError("measure estimates and error bounds are nonnegative")


def _boundary_cells(corner_values: Array, resolution: int, dimension: int) -> int:
    """Count cells whose 2^n corners disagree on membership."""
    all_true = None
    all_false = None
    for offsets in _iter_product((0, 1), repeat=dimension):
        view = corner_values[tuple(slice(o, o + resolution) for o in offsets)]
        all_true = view.copy() if all_true is None else (all_true & view)
        all_false = ~view if all_false is None else (all_false & ~view)
    return int(np.count_nonzero(~(all_true | all_false)))


def _lattice_eval(predicate: Callable[[Array], Array], grid: GridSpec, kind: str) -> Array:
    shape = grid.lattice_shape(kind)
    out = np.empty(int(np.prod(shape, dtype=np.int64)), dtype=bool)
    for pts, offset in grid.iter_lattice(kind):
        out[offset:offset + len(pts)] = predicate(pts)
    return out.reshape(shape)


def measure_set(indicator: Callable[[Array], Array], grid: GridSpec) -> MeasureEstimate:
    """Grid-count estimate: cell volume times the number of member cell centers.

    The indicator must be total on the grid box and vectorized over (m, n)
    batches.  A mask radius on the grid restricts membership to the ball.
    """
    if grid.mask_radius is not None:
        base = indicator
        predicate = lambda pts: np.asarray(base(pts), dtype=bool) & grid.mask(pts)
    else:
        predicate = lambda pts: np.asarray(indicator(pts), dtype=bool)
    centers = _lattice_eval(predicate, grid, "centers")
    corners = _lattice_eval(predicate, grid, "corners")
    inside = int(np.count_nonzero(centers))
    boundary = _boundary_cells(corners, grid.resolution, grid.dimension)
    vol = grid.cell_volume
    return MeasureEstimate(vol * inside, "grid_count", vol * boundary, grid.resolution ** grid.dimension)


def measure_set_monte_carlo(indicator: Callable[[Array], Array], box, samples: int, seed: int = 0) -> MeasureEstimate:
    """Monte Carlo estimate over a box; the error bound is a 99% confidence half-width."""
    box = np.atleast_2d(np.asarray(box, dtype=float))
    rng = np.random.default_rng([int(seed), 0x3C])
    pts = rng.uniform(box[:, 0], box[:, 1], size=(samples, box.shape[0]))
    hits = int(np.count_nonzero(np.asarray(indicator(pts), dtype=bool)))
    volume = float(np.prod(box[:, 1] - box[:, 0]))
    p = hits / samples
    half_width = volume * (_Z99 * math.sqrt(p * (1.0 - p) / samples) + 1.0 / samples)
    return MeasureEstimate(volume * p, "monte_carlo", half_width, samples)


def measure_image(
    indicator: Callable[[Array], Array],
    pmap: PerturbationMap,
    grid: GridSpec,
    a_box=None,
) -> MeasureEstimate:
    """Estimate mu(S_s(A)) by pulling grid points back through the certified inverse.

    When ``a_box`` (a bounding box of A) is supplied, the grid box is checked
    to contain A inflated by |s|, which contains the image.
    """
    if a_box is not None:
        need = np.atleast_2d(np.asarray(a_box, dtype=float))
        lo_ok = np.all(grid.box[:, 0] <= need[:, 0] - abs(pmap.s))
        hi_ok = np.all(grid.box[:, 1] >= need[:, 1] + abs(pmap.s))
        if not (lo_ok and hi_ok):
            raise GridError(
                "grid box does not contain the image: inflate the set's box by |s| "
                f"(need margin {abs(pmap.s):g})"
            )

    def pulled_back(pts: Array) -> Array:
        return np.asarray(indicator(invert_batch(pmap, pts)), dtype=bool)

    return measure_set(pulled_back, grid)


def distortion_factors(dimension: int, s: float, lipschitz_k: float) -> tuple[float, float]:
    """Constants (c_n, C_n) with c_n * mu(S_s(A)) <= mu(A) <= C_n * mu(S_s(A)).

    Derived by repeating the planar cube/diameter argument in n dimensions with
    the bound mu(B) <= omega_n * diam(B)^n: a cube of side r has diameter
    r*sqrt(n), giving the factor omega_n * n^(n/2).  At n = 2 this reproduces
    the planar constants 2*pi*(1 +/- |s|K)^2 exactly.
    """
    q = abs(s) * lipschitz_k
    base = unit_ball_volume(dimension) * dimension ** (dimension / 2.0)
    return 1.0 / (base * (1.0 + q) ** dimension), base / (1.0 - q) ** dimension


@dataclass(frozen=True)
class DistortionReport:
    mu_set: MeasureEstimate
    mu_image: MeasureEstimate
    lower_factor: float
    upper_factor: float
    slack: float
    lower_ok: bool
    upper_ok: bool

    @property
    def passed(self) -> bool:
        return self.lower_ok and self.upper_ok


def check_distortion(
    indicator: Callable[[Array], Array],
    pmap: PerturbationMap,
    grid: GridSpec,
    a_box=None,
) -> DistortionReport:
    """Verify the measure-distortion sandwich for one set on one grid.

    Estimation slack is the sum of both grid error bounds.
    """
    mu_set = measure_set(indicator, grid)
    mu_image = measure_image(indicator, pmap, grid, a_box=a_box)
    c_n, big_c_n = distortion_factors(grid.dimension, pmap.s, pmap.field.lipschitz_k)
    slack = mu_set.error_bound + mu_image.error_bound
    lower_ok = c_n * mu_image.value <= mu_set.value + slack
    upper_ok = mu_set.value <= big_c_n * mu_image.value + slack
    return DistortionReport(mu_set, mu_image, c_n, big_c_n, slack, lower_ok, upper_ok)


# --------------------------------------------------------------------------
# level sets of the maximal operator
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class MaximalLattices:
    """Maximal-operator values on a window's center and corner lattices.

    Masked-out points carry -inf so a single threshold pass yields the level
    set indicator including the window mask.
    """

    grid: GridSpec
    centers: Array
    corners: Array


def maximal_on_lattices(
    F: ScalarField,
    pmap: PerturbationMap,
    window: GridSpec,
    spec: MaximalSpec,
    quad: QuadratureSpec,
) -> MaximalLattices:
    values = {}
    for kind in ("centers", "corners"):
        shape = window.lattice_shape(kind)
        flat = np.full(int(np.prod(shape, dtype=np.int64)), -np.inf)
        for pts, offset in window.iter_lattice(kind):
            keep = window.mask(pts)
            if np.any(keep):
                segment = flat[offset:offset + len(pts)]
                segment[keep] = maximal_batch(F, pmap, pts[keep], spec, quad)
                flat[offset:offset + len(pts)] = segment
        values[kind] = flat
    return MaximalLattices(window, values["centers"], values["corners"])


def threshold_measures(lattices: MaximalLattices, thresholds: Sequence[float]) -> list[MeasureEstimate]:
    """Level-set measures mu{M > lambda} for each threshold, sharing one maximal pass."""
    grid = lattices.grid
    vol = grid.cell_volume
    corner_shape = grid.lattice_shape("corners")
    out = []
    for lam in thresholds:
        inside = int(np.count_nonzero(lattices.centers > lam))
        corner_vals = (lattices.corners > lam).reshape(corner_shape)
        boundary = _boundary_cells(corner_vals, grid.resolution, grid.dimension)
        out.append(MeasureEstimate(vol * inside, "grid_count", vol * boundary,
                                   grid.resolution ** grid.dimension))
    return out


def level_set_sweep(
    F: ScalarField,
    pmap: PerturbationMap,
    thresholds: Sequence[float],
    window: GridSpec,
    spec: MaximalSpec,
    quad: QuadratureSpec,
) -> list[MeasureEstimate]:
    for lam in thresholds:
        if not lam > 0:
            raise ValueError("level-set thresholds must be positive")
    return threshold_measures(maximal_on_lattices(F, pmap, window, spec, quad), thresholds)


def level_set_measure(
    F: ScalarField,
    pmap: PerturbationMap,
    lam: float,
    window: GridSpec,
    spec: MaximalSpec,
    quad: QuadratureSpec,
) -> MeasureEstimate:
    """mu{X in window : M_*^s(F)(X) > lambda}, masked to the ball when requested."""
    return level_set_sweep(F, pmap, [lam], window, spec, quad)[0]


# --------------------------------------------------------------------------
# greedy interval covering
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class IntervalCollection:
    """Finite collection of open intervals (a, b) on the line."""

    intervals: tuple[tuple[float, float], ...]

    def __post_init__(self):
        ivs = tuple((float(a), float(b)) for a, b in self.intervals)
        for a, b in ivs:
            if not a < b:
                raise ValueError(f"degenerate interval ({a}, {b})")
        object.__setattr__(self, "intervals", ivs)

    def union_measure(self) -> float:
        """Lebesgue measure of the union, by an endpoint sweep."""
        total = 0.0
        cur_a = cur_b = None
        for a, b in sorted(self.intervals):
            if cur_b is None or a > cur_b:
                if cur_b is not None:
                    total += cur_b - cur_a
                cur_a, cur_b = a, b
            else:
                cur_b = max(cur_b, b)
        if cur_b is not None:
            total += cur_b - cur_a
        return total


def greedy_cover_select(collection: IntervalCollection, c: float) -> list[tuple[float, float]]:
    """Vitali-style greedy selection: longest first (ties to the left), drop intersecting.

    Every discarded interval sits inside the 3x dilation of some selected one,
    so the selected lengths sum to more than a third of the union measure and
    in particular to more than c/3 for any c below it.
    """
    total = collection.union_measure()
    if not c < total:
        raise ValueError(f"c = {c:g} must be strictly below the union measure {total:g}")
    remaining = sorted(collection.intervals, key=lambda iv: (-(iv[1] - iv[0]), iv[0]))
    selected: list[tuple[float, float]] = []
    while remaining:
        best = remaining[0]
        selected.append(best)
        # open intervals: touching endpoints do not intersect
        remaining = [iv for iv in remaining[1:] if iv[1] <= best[0] or iv[0] >= best[1]]
    return selected

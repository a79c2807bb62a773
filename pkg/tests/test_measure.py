import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from liplab.averaging import MaximalSpec, QuadratureSpec
from liplab.fields import (
    ScalarField,
    box_indicator,
    catalog_scalar_fields,
    catalog_unit_fields,
    constant_field,
    gaussian_bump,
    shear_field,
)
from liplab.measure import (
    DistortionReport,
    GridError,
    GridSpec,
    IntervalCollection,
    check_distortion,
    distortion_factors,
    greedy_cover_select,
    level_set_measure,
    level_set_sweep,
    measure_image,
    measure_set,
    measure_set_monte_carlo,
)
from liplab.perturb import PerturbationMap, SolverSpec

RNG = np.random.default_rng(31415)
QUAD = QuadratureSpec()

SHEAR_IMAGE_AREA = 0.8161209223472559  # int_0^1 (1 - 0.4 sin x) dx, closed form


def box_pred(lo, hi):
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)

    def pred(pts):
        return np.all((pts >= lo) & (pts <= hi), axis=1)

    return pred


# ---------------------------------------------------------------------------
# grid measures
# ---------------------------------------------------------------------------


def test_grid_spec_validation():
    with pytest.raises(ValueError):
        GridSpec([[-1, 1], [-1, 1]], 8)
    with pytest.raises(ValueError):
        GridSpec([[1, 1], [-1, 1]], 64)


def test_unit_square_measure():
    grid = GridSpec([[-2, 2], [-2, 2]], 1024)
    est = measure_set(box_pred([0, 0], [1, 1]), grid)
    assert est.method == "grid_count"
    assert abs(est.value - 1.0) <= 0.01
    assert est.error_bound > 0


def test_empty_set_measure():
    grid = GridSpec([[-2, 2], [-2, 2]], 64)
    est = measure_set(lambda pts: np.zeros(len(pts), dtype=bool), grid)
    assert est.value == 0.0
    assert est.error_bound == 0.0


def test_disk_area():
    grid = GridSpec([[-2, 2], [-2, 2]], 1024)
    est = measure_set(lambda pts: np.sum(pts * pts, axis=1) <= 1.0, grid)
    assert abs(est.value - math.pi) <= 0.01
    assert abs(est.value - math.pi) <= est.error_bound


def test_monte_carlo_disk():
    est = measure_set_monte_carlo(lambda pts: np.sum(pts * pts, axis=1) <= 1.0,
                                  [[-2, 2], [-2, 2]], samples=200_000, seed=5)
    assert est.method == "monte_carlo"
    assert abs(est.value - math.pi) <= est.error_bound


def test_additivity_disjoint_boxes():
    grid = GridSpec([[-2, 2], [-2, 2]], 256)
    a = box_pred([-1.5, -1.5], [-0.5, -0.5])
    b = box_pred([0.5, 0.5], [1.5, 1.5])
    union = lambda pts: a(pts) | b(pts)
    ea, eb, eu = measure_set(a, grid), measure_set(b, grid), measure_set(union, grid)
    assert abs(eu.value - (ea.value + eb.value)) <= ea.error_bound + eb.error_bound + eu.error_bound


def test_translation_invariance_by_whole_cells():
    grid = GridSpec([[-2, 2], [-2, 2]], 256)
    h = grid.cell_widths[0]
    base = measure_set(box_pred([0, 0], [0.9, 0.7]), grid)
    shifted = measure_set(box_pred([7 * h, -3 * h], [0.9 + 7 * h, 0.7 - 3 * h]), grid)
    assert shifted.value == base.value


def test_refinement_consistency():
    pred = lambda pts: np.sum(pts * pts, axis=1) <= 1.0
    coarse = measure_set(pred, GridSpec([[-2, 2], [-2, 2]], 128))
    fine = measure_set(pred, GridSpec([[-2, 2], [-2, 2]], 256))
    assert abs(fine.value - coarse.value) <= coarse.error_bound


def test_grid_three_dimensional():
    grid = GridSpec([[-1, 1]] * 3, 48)
    est = measure_set(box_pred([-0.5] * 3, [0.5] * 3), grid)
    assert est.value == pytest.approx(1.0, abs=0.07)
    assert abs(est.value - 1.0) <= est.error_bound


# ---------------------------------------------------------------------------
# image measures and distortion
# ---------------------------------------------------------------------------


def test_image_measure_zero_shift():
    grid = GridSpec([[-0.5, 1.5], [-0.5, 1.5]], 256)
    pred = box_pred([0, 0], [1, 1])
    pmap = PerturbationMap(shear_field(1.0), 0.0)
    assert measure_image(pred, pmap, grid).value == measure_set(pred, grid).value


def test_image_measure_translation_invariance():
    grid = GridSpec([[-1.0, 2.0], [-1.0, 2.0]], 512)
    pred = box_pred([0, 0], [1, 1])
    base = measure_set(pred, grid)
    pmap = PerturbationMap(constant_field(2, phase=0.7), 0.4)
    moved = measure_image(pred, pmap, grid, a_box=[[0, 1], [0, 1]])
    assert abs(moved.value - base.value) <= base.error_bound + moved.error_bound


def test_image_measure_shear_jacobian():
    pred = box_pred([0, 0], [1, 1])
    pmap = PerturbationMap(shear_field(1.0), 0.4)
    grid = GridSpec([[-0.5, 1.5], [-0.5, 1.5]], 1024)
    est = measure_image(pred, pmap, grid, a_box=[[0, 1], [0, 1]])
    assert est.value == pytest.approx(SHEAR_IMAGE_AREA, rel=0.01)


def test_image_measure_shear_jacobian_fine_grid():
    pred = box_pred([0, 0], [1, 1])
    pmap = PerturbationMap(shear_field(1.0), 0.4)
    grid = GridSpec([[-0.5, 1.5], [-0.5, 1.5]], 4096)
    est = measure_image(pred, pmap, grid, a_box=[[0, 1], [0, 1]])
    assert est.value == pytest.approx(SHEAR_IMAGE_AREA, rel=0.002)


def test_image_measure_box_too_small():
    pred = box_pred([0, 0], [1, 1])
    pmap = PerturbationMap(shear_field(1.0), 0.4)
    grid = GridSpec([[0, 1], [0, 1]], 64)
    with pytest.raises(GridError, match="image"):
        measure_image(pred, pmap, grid, a_box=[[0, 1], [0, 1]])


def test_distortion_factors_reduce_to_planar_constants():
    c2, C2 = distortion_factors(2, 0.0, 1.0)
    assert c2 == pytest.approx(1.0 / (2 * math.pi), rel=1e-12)
    assert C2 == pytest.approx(2 * math.pi, rel=1e-12)
    c, C = distortion_factors(2, 0.25, 1.0)
    assert C == pytest.approx(2 * math.pi / 0.75**2, rel=1e-12)
    assert c == pytest.approx(1.0 / (2 * math.pi * 1.25**2), rel=1e-12)


def test_check_distortion_trivial_shift():
    pred = box_pred([0, 0], [1, 1])
    pmap = PerturbationMap(shear_field(1.0), 0.0)
    grid = GridSpec([[-0.5, 1.5], [-0.5, 1.5]], 256)
    report = check_distortion(pred, pmap, grid, a_box=[[0, 1], [0, 1]])
    assert isinstance(report, DistortionReport)
    assert report.passed


def test_check_distortion_shear_example():
    pred = box_pred([0, 0], [1, 1])
    pmap = PerturbationMap(shear_field(1.0), 0.4)
    grid = GridSpec([[-0.5, 1.5], [-0.5, 1.5]], 512)
    report = check_distortion(pred, pmap, grid, a_box=[[0, 1], [0, 1]])
    assert report.passed
    # the explicit arithmetic from the planar bounds at s = 0.4, K = 1
    assert report.lower_factor * report.mu_image.value <= 1.0
    assert 1.0 <= report.upper_factor * report.mu_image.value


@pytest.mark.parametrize("dimension", [2, 3])
def test_distortion_sandwich_random_rectangles(dimension):
    resolution = 256 if dimension == 2 else 48
    rng = np.random.default_rng(77)
    for field in catalog_unit_fields(dimension):
        T = 0.5 if field.lipschitz_k == 0 else min(0.5, 0.95 / field.lipschitz_k)
        for _ in range(3):
            lo = rng.uniform(-1.0, 0.3, size=dimension)
            width = rng.uniform(0.3, 1.0, size=dimension)
            a_box = np.stack([lo, lo + width], axis=1)
            pred = box_pred(a_box[:, 0], a_box[:, 1])
            for s in (T / 4, -T / 4, 0.45 * T, -0.45 * T):
                pmap = PerturbationMap(field, s, SolverSpec(tolerance=1e-9))
                grid = GridSpec(np.stack([a_box[:, 0] - abs(s) - 0.05,
                                          a_box[:, 1] + abs(s) + 0.05], axis=1), resolution)
                assert check_distortion(pred, pmap, grid, a_box=a_box).passed


# ---------------------------------------------------------------------------
# level sets
# ---------------------------------------------------------------------------


def test_level_set_zero_function():
    zero = ScalarField.from_callable(lambda pts: np.zeros(len(pts)), 2,
                                     [[-1, 1], [-1, 1]], name="zero")
    pmap = PerturbationMap(shear_field(1.0), 0.1)
    window = GridSpec([[-2, 2], [-2, 2]], 64, mask_radius=2.0)
    est = level_set_measure(zero, pmap, 0.5, window, MaximalSpec(0.25, 4), QUAD)
    assert est.value == 0.0


def test_level_set_above_sup_is_empty():
    F = gaussian_bump(2)
    sup_f = F(np.array([0.0, 0.0]))
    pmap = PerturbationMap(shear_field(1.0), 0.1)
    window = GridSpec([[-2, 2], [-2, 2]], 64, mask_radius=2.0)
    est = level_set_measure(F, pmap, sup_f * 1.01, window, MaximalSpec(0.25, 4), QUAD)
    assert est.value == 0.0


def test_level_set_indicator_contains_square():
    F = box_indicator(2)
    pmap = PerturbationMap(constant_field(2), 0.0)
    window = GridSpec([[-2, 2], [-2, 2]], 128, mask_radius=2.0)
    est = level_set_measure(F, pmap, 0.5, window, MaximalSpec(0.25, 6), QUAD)
    assert est.value >= 1.0 - est.error_bound


def test_level_set_sweep_nested():
    F = catalog_scalar_fields(2)[2]  # singularity
    pmap = PerturbationMap(shear_field(1.0), 0.2)
    window = GridSpec([[-2, 2], [-2, 2]], 128, mask_radius=2.0)
    ests = level_set_sweep(F, pmap, [0.5, 1.0, 2.0, 4.0], window, MaximalSpec(0.25, 6), QUAD)
    values = [e.value for e in ests]
    assert values == sorted(values, reverse=True)
    with pytest.raises(ValueError, match="positive"):
        level_set_sweep(F, pmap, [0.0], window, MaximalSpec(0.25, 6), QUAD)


def test_level_set_mask_restricts():
    F = box_indicator(2)
    pmap = PerturbationMap(constant_field(2), 0.0)
    spec = MaximalSpec(0.25, 4)
    masked = level_set_measure(F, pmap, 0.5, GridSpec([[-2, 2], [-2, 2]], 128, mask_radius=0.5), spec, QUAD)
    free = level_set_measure(F, pmap, 0.5, GridSpec([[-2, 2], [-2, 2]], 128), spec, QUAD)
    assert masked.value < free.value


# ---------------------------------------------------------------------------
# greedy interval covering
# ---------------------------------------------------------------------------


def test_interval_collection_validation():
    with pytest.raises(ValueError, match="degenerate"):
        IntervalCollection(((1.0, 1.0),))
    col = IntervalCollection(((0, 1), (0.5, 2), (3, 4)))
    assert col.union_measure() == pytest.approx(3.0)


def test_greedy_single_interval():
    out = greedy_cover_select(IntervalCollection(((0, 1),)), 0.5)
    assert out == [(0.0, 1.0)]
    assert sum(b - a for a, b in out) > 0.5 / 3


def test_greedy_nested_intervals():
    out = greedy_cover_select(IntervalCollection(((0, 1), (0, 3))), 2.9)
    assert out == [(0.0, 3.0)]


def test_greedy_chain_matches_exhaustive_optimum():
    col = IntervalCollection(((0, 2), (1, 3), (2, 4)))
    out = greedy_cover_select(col, 3.9)
    assert out == [(0.0, 2.0), (2.0, 4.0)]
    total = sum(b - a for a, b in out)
    assert total > 3.9 / 3
    # exhaustive oracle over all disjoint subfamilies
    best = 0.0
    for k in range(1, 4):
        for combo in itertools.combinations(col.intervals, k):
            ivs = sorted(combo)
            if all(x[1] <= y[0] for x, y in zip(ivs, ivs[1:])):
                best = max(best, sum(b - a for a, b in ivs))
    assert total == best


def test_greedy_precondition():
    with pytest.raises(ValueError, match="union measure"):
        greedy_cover_select(IntervalCollection(((0, 1),)), 1.0)


interval_lists = st.lists(
    st.tuples(st.floats(-50, 50, allow_nan=False), st.floats(0.01, 10, allow_nan=False)),
    min_size=1, max_size=50,
)


@given(data=interval_lists, frac=st.floats(0.01, 0.999))
@settings(max_examples=300, deadline=None)
def test_greedy_properties(data, frac):
    col = IntervalCollection(tuple((a, a + w) for a, w in data))
    c = frac * col.union_measure()
    out = greedy_cover_select(col, c)
    ivs = sorted(out)
    assert all(x[1] <= y[0] for x, y in zip(ivs, ivs[1:])), "selection must be disjoint"
    assert all(iv in col.intervals for iv in out), "selection must be a subfamily"
    assert sum(b - a for a, b in out) > c / 3.0

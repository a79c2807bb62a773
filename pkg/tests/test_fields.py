import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from liplab.fields import (
    FieldDescriptor,
    PairSampler,
    ScalarField,
    as_points,
    box_indicator,
    catalog_scalar_fields,
    catalog_unit_fields,
    constant_field,
    estimate_lipschitz,
    field_from_descriptor,
    gaussian_bump,
    make_phase_field,
    scalar_from_name,
    shear_field,
    sinusoid_field,
    tent_function,
    truncated_singularity,
)

RNG = np.random.default_rng(20240811)


# ---------------------------------------------------------------------------
# unit fields
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("dimension", [2, 3])
def test_catalog_fields_unit_norm(dimension):
    pts = RNG.uniform(-5, 5, size=(10_000, dimension))
    for field in catalog_unit_fields(dimension):
        norms = np.linalg.norm(field(pts), axis=1)
        assert np.max(np.abs(norms - 1.0)) <= 1e-12


def test_constant_phase_gives_e1():
    field = make_phase_field(2, lambda pts: np.zeros(len(pts)), 0.0)
    out = field(np.array([3.0, -7.0]))
    assert np.allclose(out, [1.0, 0.0], atol=0)
    assert field.lipschitz_k == 0.0


def test_make_phase_field_rejects_bad_dimension():
    with pytest.raises(ValueError):
        make_phase_field(0, lambda pts: np.zeros(len(pts)), 1.0)
    with pytest.raises(ValueError):
        make_phase_field(-3, lambda pts: np.zeros(len(pts)), 1.0)
    # rotating e1 needs a second coordinate
    with pytest.raises(ValueError):
        make_phase_field(1, lambda pts: np.zeros(len(pts)), 1.0)


def _pair_ratio_oracle(field, box, count, seed):
    # independent pair-sampling check: ratios never exceed the declared constant
    rng = np.random.default_rng(seed)
    x = rng.uniform(box[0], box[1], size=(count, field.dimension))
    y = rng.uniform(box[0], box[1], size=(count, field.dimension))
    d = np.linalg.norm(x - y, axis=1)
    keep = d > 0
    ratios = np.linalg.norm(field(x[keep]) - field(y[keep]), axis=1) / d[keep]
    return ratios


def test_shear_ratio_never_exceeds_a():
    field = shear_field(1.0)
    ratios = _pair_ratio_oracle(field, (-2, 2), 100_000, 7)
    assert np.max(ratios) <= 1.0 + 1e-12
    assert np.max(ratios) > 0.9


def test_sinusoid_ratio_never_exceeds_declared():
    field = sinusoid_field(0.5, 1.0, 1.0)
    expected = 0.5 * math.sqrt(2.0)
    assert field.lipschitz_k == pytest.approx(expected)
    ratios = _pair_ratio_oracle(field, (-2, 2), 100_000, 11)
    assert np.max(ratios) <= expected + 1e-12


def test_estimate_lipschitz_examples():
    sampler = PairSampler(np.array([[-2.0, 2.0], [-2.0, 2.0]]), count=100_000)
    assert estimate_lipschitz(constant_field(2), sampler, seed=3) == 0.0
    shear = estimate_lipschitz(shear_field(1.0), sampler, seed=3)
    assert 0.9 < shear <= 1.0
    sinus = estimate_lipschitz(sinusoid_field(0.5, 1.0, 1.0), sampler, seed=3)
    assert sinus <= 0.5 * math.sqrt(2.0) + 1e-9


@pytest.mark.parametrize("dimension", [2, 3])
def test_declared_k_dominates_estimate(dimension):
    box = np.array([[-2.0, 2.0]] * dimension)
    sampler = PairSampler(box, count=20_000)
    for field in catalog_unit_fields(dimension):
        est = estimate_lipschitz(field, sampler, seed=5)
        assert est <= field.lipschitz_k + 1e-9


def test_estimate_skips_degenerate_pairs():
    field = shear_field(1.0)

    class DegenerateSampler(PairSampler):
        def draw(self, rng):
            x = rng.uniform(-1, 1, size=(100, 2))
            return x, x.copy()

    sampler = DegenerateSampler(np.array([[-1.0, 1.0], [-1.0, 1.0]]), count=100)
    assert estimate_lipschitz(field, sampler, seed=0) == 0.0


descriptor_params = st.lists(
    st.tuples(
        st.sampled_from(["a", "b", "c", "phase"]),
        st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False),
    ),
    max_size=3,
    unique_by=lambda kv: kv[0],
)


@given(family=st.sampled_from(["constant", "shear", "sinusoid", "custom"]),
       dimension=st.integers(min_value=2, max_value=5),
       params=descriptor_params)
@settings(max_examples=200, deadline=None)
def test_descriptor_text_roundtrip_bit_exact(family, dimension, params):
    desc = FieldDescriptor(family, dimension, tuple(params))
    back = FieldDescriptor.parse(desc.to_text())
    assert back == desc


def test_field_from_descriptor_reconstructs():
    original = sinusoid_field(0.5, 1.25, -0.75, dimension=3)
    rebuilt = field_from_descriptor(original.descriptor.to_text())
    assert rebuilt.descriptor == original.descriptor
    assert rebuilt.lipschitz_k == original.lipschitz_k
    pts = RNG.uniform(-1, 1, size=(50, 3))
    assert np.array_equal(rebuilt(pts), original(pts))


def test_field_from_descriptor_unknown_family():
    with pytest.raises(ValueError, match="unknown field family"):
        field_from_descriptor("vortex:a=1")


def test_as_points_validation():
    with pytest.raises(ValueError):
        as_points(np.array([[np.nan, 1.0]]))
    with pytest.raises(ValueError):
        as_points(np.zeros((2, 2, 2)))
    with pytest.raises(ValueError):
        as_points([1.0, 2.0], dimension=3)
    assert as_points([1.0, 2.0]).shape == (1, 2)


# ---------------------------------------------------------------------------
# scalar catalog
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("dimension", [2, 3])
def test_catalog_scalar_members(dimension):
    catalog = catalog_scalar_fields(dimension)
    kinds = {f.regularity for f in catalog}
    assert {"smooth", "indicator", "truncated_singularity", "continuous_compact_support"} <= kinds
    for f in catalog:
        assert f.l1_norm() == 1.0


@pytest.mark.parametrize("dimension", [2, 3])
def test_scalar_support_zeroing_exact(dimension):
    for f in catalog_scalar_fields(dimension):
        lo, hi = f.support_box[:, 0], f.support_box[:, 1]
        outside = RNG.uniform(lo - 3.0, hi + 3.0, size=(5_000, dimension))
        mask = np.any((outside < lo) | (outside > hi), axis=1)
        values = f(outside[mask])
        assert np.all(values == 0.0)


def test_indicator_unit_square():
    f = box_indicator(2)
    assert f(np.array([0.5, 0.5])) == 1.0
    assert f(np.array([1.5, 0.5])) == 0.0
    assert f.l1_norm() == 1.0


def test_bump_truncation_mass_below_tolerance():
    # radial quadrature oracle for the discarded tail beyond the 4-sigma cut
    for dimension in (2, 3):
        sigma = 0.5
        tail, _ = integrate.quad(
            lambda r: math.exp(-r * r / sigma**2) * r ** (dimension - 1),
            4 * sigma, 60 * sigma, epsabs=1e-20)
        surf = 2 * math.pi ** (dimension / 2) / math.gamma(dimension / 2)
        total = (sigma * math.sqrt(math.pi)) ** dimension / surf
        assert tail / total < 1e-6


def test_bump_mass_via_grid_quadrature():
    f = gaussian_bump(2)
    g = 2048
    h = 4.0 / g
    xs = -2 + (np.arange(g) + 0.5) * h
    gx, gy = np.meshgrid(xs, xs)
    pts = np.stack([gx.ravel(), gy.ravel()], axis=1)
    mass = f(pts).sum() * h * h
    assert mass == pytest.approx(1.0, abs=2e-6)


def test_singularity_normalization_2d():
    # gamma=1, R=1 in 2D: mass 2*pi, so the normalized field is 1/(2*pi*r)
    f = truncated_singularity(2, gamma=1.0, radius=1.0)
    r = 0.37
    assert f(np.array([r, 0.0])) == pytest.approx(1.0 / (2 * math.pi * r), rel=1e-12)
    g = 4096
    h = 2.0 / g
    xs = -1 + (np.arange(g) + 0.5) * h
    gx, gy = np.meshgrid(xs, xs)
    pts = np.stack([gx.ravel(), gy.ravel()], axis=1)
    mass = f(pts).sum() * h * h
    assert mass == pytest.approx(1.0, abs=2e-4)


def test_singularity_rejects_nonintegrable_gamma():
    with pytest.raises(ValueError):
        truncated_singularity(2, gamma=2.0)


def test_singularity_lp_class_invariant():
    # declaring a finite L^p norm with gamma*p >= n must be rejected
    f = truncated_singularity(2, gamma=1.0)
    with pytest.raises(ValueError, match="gamma"):
        ScalarField("bad", 2, "truncated_singularity", f.support_box, f.eval_fn,
                    {2: (1.0, "impossible")}, params={"gamma": 1.0})


def test_tent_mass_and_lipschitz():
    f = tent_function(2)
    g = 1024
    h = 2.2 / g
    xs = -1.1 + (np.arange(g) + 0.5) * h
    gx, gy = np.meshgrid(xs, xs)
    pts = np.stack([gx.ravel(), gy.ravel()], axis=1)
    assert f(pts).sum() * h * h == pytest.approx(1.0, abs=1e-3)
    assert f.lipschitz == pytest.approx(math.sqrt(2))


def test_bump_lipschitz_dominates_samples():
    f = gaussian_bump(2)
    pts = RNG.uniform(-2, 2, size=(20_000, 2))
    delta = RNG.normal(0, 1e-4, size=pts.shape)
    num = np.abs(f(pts + delta) - f(pts))
    den = np.linalg.norm(delta, axis=1)
    assert np.max(num / den) <= f.lipschitz * (1 + 1e-6)


def test_scalar_from_name():
    assert scalar_from_name("tent", 3).dimension == 3
    with pytest.raises(ValueError, match="unknown scalar"):
        scalar_from_name("spike", 2)

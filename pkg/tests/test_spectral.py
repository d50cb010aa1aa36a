"""Grids, transforms, diagonal operators, norms, rough data, snapshots."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symnls.spectral import (
    Boundary,
    Grid,
    SpectralField,
    apply_operator,
    band_limit,
    conjugate,
    dealias,
    forward_transform,
    frac_laplacian,
    frac_semigroup_diff,
    inverse_transform,
    l2_norm,
    operator_multipliers,
    phi1,
    phi1_scalar,
    project,
    read_snapshot,
    rough_data,
    semigroup,
    sobolev_norm,
    write_snapshot,
)

from conftest import random_field


# ---------------------------------------------------------------------------
# Grid


def test_grid_validation():
    with pytest.raises(ValueError):
        Grid.periodic(24)  # not a power of two
    with pytest.raises(ValueError):
        Grid.periodic(8, 4)  # dimension out of range
    with pytest.raises(ValueError):
        Grid(2, 8, Boundary.DIRICHLET, (1.0, 1.0))  # Dirichlet is 1-d only
    with pytest.raises(ValueError):
        Grid(1, 8, Boundary.PERIODIC, (-1.0,))


def test_periodic_eigenvalues_and_wavenumbers():
    g = Grid.periodic(8)
    (k,) = g.wavenumbers
    assert list(k) == [-4, -3, -2, -1, 0, 1, 2, 3]
    assert np.allclose(g.eigenvalues, k.astype(float) ** 2)
    # zero eigenvalue exactly at the zero mode only
    assert np.count_nonzero(g.eigenvalues == 0.0) == 1


def test_dirichlet_eigenvalues():
    g = Grid.dirichlet(8)
    (k,) = g.wavenumbers
    assert list(k) == list(range(1, 9))
    assert np.allclose(g.eigenvalues, (np.pi * k) ** 2)
    assert np.all(g.eigenvalues > 0)


def test_periodic_eigenvalues_scale_with_length():
    g = Grid.periodic(8, length=4 * np.pi)
    (k,) = g.wavenumbers
    assert np.allclose(g.eigenvalues, (0.5 * k) ** 2)


# ---------------------------------------------------------------------------
# Transforms


def test_constant_samples_hit_zero_mode_only():
    g = Grid.periodic(16)
    f = forward_transform(np.ones(g.shape, dtype=complex), g)
    nonzero = np.abs(f.coeffs) > 1e-14
    assert np.count_nonzero(nonzero) == 1
    assert nonzero[16 // 2]  # k = 0 slot


def test_dirichlet_sine_eigenfunction_single_mode():
    g = Grid.dirichlet(16)
    (x,) = g.points
    f = forward_transform(np.sin(np.pi * x).astype(complex), g)
    mags = np.abs(f.coeffs)
    assert mags[0] == pytest.approx(1 / math.sqrt(2), rel=1e-13)
    assert np.all(mags[1:] < 1e-13)


def test_single_periodic_mode_inverse_values():
    g = Grid.periodic(16)
    coeffs = np.zeros(g.shape, dtype=complex)
    k = 3
    coeffs[k + 8] = 1.0
    (x,) = g.points
    expected = np.exp(1j * k * x) / math.sqrt(2 * np.pi)
    assert np.allclose(inverse_transform(SpectralField(g, coeffs)), expected, atol=1e-14)


def _direct_summation(field: SpectralField) -> np.ndarray:
    g = field.grid
    (x,) = g.points
    (k,) = g.wavenumbers
    (L,) = g.domain_length
    if g.boundary is Boundary.PERIODIC:
        basis = np.exp(1j * np.outer(x, 2 * np.pi * k / L)) / math.sqrt(L)
    else:
        basis = math.sqrt(2 / L) * np.sin(np.outer(x, k) * np.pi / L)
    return basis @ field.coeffs


@pytest.mark.parametrize("make", [Grid.periodic, Grid.dirichlet])
def test_inverse_matches_direct_summation(make, rng):
    g = make(8)
    u = random_field(g, rng)
    assert np.allclose(inverse_transform(u), _direct_summation(u), atol=1e-13)


@pytest.mark.parametrize("make", [Grid.periodic, Grid.dirichlet])
@pytest.mark.parametrize("K", [8, 64, 256])
def test_roundtrip(make, K, rng):
    g = make(K)
    v = rng.standard_normal(g.shape) + 1j * rng.standard_normal(g.shape)
    back = inverse_transform(forward_transform(v, g))
    assert np.max(np.abs(back - v)) <= 1e-13 * np.max(np.abs(v))


def test_roundtrip_2d(rng):
    g = Grid.periodic(16, 2)
    v = rng.standard_normal(g.shape) + 1j * rng.standard_normal(g.shape)
    assert np.allclose(inverse_transform(forward_transform(v, g)), v, atol=1e-13)


def test_forward_shape_mismatch():
    g = Grid.periodic(8)
    with pytest.raises(ValueError):
        forward_transform(np.ones(7, dtype=complex), g)


def test_parseval(rng):
    g = Grid.periodic(64)
    u = random_field(g, rng)
    w = inverse_transform(u)
    quad = math.sqrt(g.cell_volume * float(np.sum(np.abs(w) ** 2)))
    assert quad == pytest.approx(l2_norm(u), rel=1e-12)


# ---------------------------------------------------------------------------
# Operators


def test_semigroup_zero_is_identity(rng):
    g = Grid.periodic(32)
    u = random_field(g, rng)
    assert np.array_equal(apply_operator(u, semigroup(0.0)).coeffs, u.coeffs)


def test_phi1_at_zero_mode_is_one():
    g = Grid.periodic(8)
    mult = operator_multipliers(phi1(1j * 0.3), g.eigenvalues)
    assert mult[8 // 2] == pytest.approx(1.0)


def test_semigroup_single_mode_phase():
    g = Grid.periodic(8)
    coeffs = np.zeros(g.shape, dtype=complex)
    coeffs[2 + 4] = 1.0  # k = 2, lambda = 4
    out = apply_operator(SpectralField(g, coeffs), semigroup(0.3))
    assert out.coeffs[6] == pytest.approx(np.exp(-1.2j), rel=1e-14)


@given(t=st.floats(-10, 10), seed=st.integers(0, 2**31 - 1))
@settings(max_examples=100, deadline=None)
def test_semigroup_unitarity(t, seed):
    g = Grid.periodic(32)
    u = random_field(g, np.random.default_rng(seed))
    assert abs(l2_norm(apply_operator(u, semigroup(t))) - l2_norm(u)) <= 1e-13 * l2_norm(u)


@given(s=st.floats(-0.5, 0.5), t=st.floats(-0.5, 0.5))
@settings(max_examples=50, deadline=None)
def test_semigroup_group_law(s, t):
    g = Grid.periodic(32)
    u = random_field(g, np.random.default_rng(7))
    twice = apply_operator(apply_operator(u, semigroup(s)), semigroup(t))
    once = apply_operator(u, semigroup(s + t))
    assert l2_norm(twice - once) <= 1e-13 * l2_norm(u)


def test_phi1_scalar_taylor_branch_continuity():
    # values just below and above the series cutoff must agree closely
    for z in (1e-4 * 0.99, 1e-4 * 1.01):
        for phase in (1, 1j, -1, -1j):
            a, b = phi1_scalar(z * phase), complex(np.expm1(z * phase)) / (z * phase)
            assert a == pytest.approx(b, rel=1e-10)


def test_frac_laplacian_multiplier():
    g = Grid.periodic(8)
    mult = operator_multipliers(frac_laplacian(0.5), g.eigenvalues)
    assert np.allclose(mult, np.sqrt(g.eigenvalues))
    with pytest.raises(ValueError):
        operator_multipliers(frac_laplacian(1.5), g.eigenvalues)


def test_frac_semigroup_diff_zero_mode_annihilated():
    g = Grid.periodic(8)
    mult = operator_multipliers(frac_semigroup_diff(0.7, 0.5), g.eigenvalues)
    assert mult[4] == 0.0


def test_frac_semigroup_diff_matches_quotient():
    lam = np.array([1.0, 9.0, 100.0])
    t, gamma = 0.31, 0.4
    mult = operator_multipliers(frac_semigroup_diff(t, gamma), lam)
    expected = (np.exp(-1j * t * lam) - 1.0) / (t * lam) ** gamma
    assert np.allclose(mult, expected, rtol=1e-12)


@given(
    t=st.floats(1e-12, 10),
    gamma=st.floats(0, 1),
    seed=st.integers(0, 2**31 - 1),
)
@settings(max_examples=200, deadline=None)
def test_frac_semigroup_bound(t, gamma, seed):
    g = Grid.periodic(16)
    u = random_field(g, np.random.default_rng(seed))
    out = l2_norm(apply_operator(u, frac_semigroup_diff(t, gamma)))
    assert out <= 2 ** (1 - gamma) * l2_norm(u) * (1 + 1e-12)


# ---------------------------------------------------------------------------
# Norms


def test_sobolev_norm_zero_field():
    g = Grid.periodic(8)
    assert sobolev_norm(SpectralField.zero(g), 2.0) == 0.0


def test_sobolev_norm_single_mode():
    g = Grid.periodic(8)
    coeffs = np.zeros(g.shape, dtype=complex)
    coeffs[1 + 4] = 1.0  # k = 1, lambda = 1
    assert sobolev_norm(SpectralField(g, coeffs), 2.0) == pytest.approx(math.sqrt(2))


def test_l2_norm_is_quadrature(rng):
    g = Grid.periodic(64)
    u = random_field(g, rng)
    w = inverse_transform(u)
    quad = math.sqrt(g.cell_volume * float(np.sum(np.abs(w) ** 2)))
    assert l2_norm(u) == pytest.approx(quad, rel=1e-12)


def test_sobolev_norm_rejects_negative_s():
    g = Grid.periodic(8)
    with pytest.raises(ValueError):
        sobolev_norm(SpectralField.zero(g), -1.0)


# ---------------------------------------------------------------------------
# Conjugation


@pytest.mark.parametrize("make", [Grid.periodic, Grid.dirichlet])
def test_conjugate_matches_physical_conjugation(make, rng):
    g = make(32)
    u = random_field(g, rng)
    via_coeffs = inverse_transform(conjugate(u))
    assert np.allclose(via_coeffs, np.conj(inverse_transform(u)), atol=1e-13)


def test_conjugate_is_involution(rng):
    g = Grid.periodic(16)
    u = random_field(g, rng)
    assert np.allclose(conjugate(conjugate(u)).coeffs, u.coeffs)


# ---------------------------------------------------------------------------
# Rough data


def test_rough_data_deterministic():
    g = Grid.periodic(64)
    a = rough_data(g, 2.0, 3, 1.0)
    b = rough_data(g, 2.0, 3, 1.0)
    assert np.array_equal(a.coeffs, b.coeffs)


def test_rough_data_rescaling_contract():
    g = Grid.periodic(256)
    out = rough_data(g, 2.0, 0, 1.0)
    assert sobolev_norm(out, 2.0) == pytest.approx(1.0, abs=1e-12)


def test_rough_data_higher_norm_diverges_under_refinement():
    coarse = sobolev_norm(rough_data(Grid.periodic(2**8), 1.0, 0, 1.0), 2.0)
    fine = sobolev_norm(rough_data(Grid.periodic(2**12), 1.0, 0, 1.0), 2.0)
    assert fine / coarse > 2.0


def test_rough_data_validation():
    g = Grid.periodic(8)
    with pytest.raises(ValueError):
        rough_data(g, -1.0, 0, 1.0)
    with pytest.raises(ValueError):
        rough_data(g, 1.0, 0, 0.0)


# ---------------------------------------------------------------------------
# Dealias / band limiting / projection


def test_dealias_leaves_low_band_unchanged(rng):
    g = Grid.periodic(64)
    u = band_limit(random_field(g, rng), 64 // 3)
    assert np.array_equal(dealias(u).coeffs, u.coeffs)


def test_dealias_idempotent(rng):
    g = Grid.periodic(64)
    u = random_field(g, rng)
    once = dealias(u)
    assert np.array_equal(dealias(once).coeffs, once.coeffs)


def test_dealias_equals_explicit_mask(rng):
    g = Grid.periodic(64)
    u = random_field(g, rng)
    (k,) = g.wavenumbers
    expected = np.where(np.abs(k) <= 64 / 3, u.coeffs, 0.0)
    assert np.array_equal(dealias(u).coeffs, expected)


def test_dealias_dirichlet(rng):
    g = Grid.dirichlet(32)
    u = random_field(g, rng)
    (k,) = g.wavenumbers
    expected = np.where(k <= 2 * 32 / 3, u.coeffs, 0.0)
    assert np.array_equal(dealias(u).coeffs, expected)


def test_project_roundtrip(rng):
    small, big = Grid.periodic(16), Grid.periodic(64)
    u = random_field(small, rng)
    up = project(u, big)
    assert l2_norm(up) == pytest.approx(l2_norm(u))
    back = project(up, small)
    assert np.allclose(back.coeffs, u.coeffs)


def test_band_limit(rng):
    g = Grid.periodic(32)
    u = band_limit(random_field(g, rng), 4)
    (k,) = g.wavenumbers
    assert np.all(u.coeffs[np.abs(k) > 4] == 0)


# ---------------------------------------------------------------------------
# Snapshots


@pytest.mark.parametrize("make", [Grid.periodic, Grid.dirichlet])
def test_snapshot_roundtrip(make, rng, tmp_path):
    g = make(32)
    u = random_field(g, rng)
    path = tmp_path / "state.nlsf"
    write_snapshot(u, path)
    back = read_snapshot(path)
    assert back.grid == g
    assert np.array_equal(back.coeffs, u.coeffs)


def test_snapshot_rejects_garbage(tmp_path):
    path = tmp_path / "bogus.nlsf"
    path.write_bytes(b"BOGUS---" + b"\x00" * 64)
    with pytest.raises(ValueError):
        read_snapshot(path)

import numpy as np
import pytest

from symnls.spectral import Grid, SpectralField, band_limit


def random_field(grid: Grid, rng) -> SpectralField:
    coeffs = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    return SpectralField(grid, coeffs)


def random_band_limited(grid: Grid, rng, max_mode: int) -> SpectralField:
    return band_limit(random_field(grid, rng), max_mode)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

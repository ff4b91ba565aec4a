import cmath
import math

from hypothesis import given, strategies as st
import numpy as np
import pytest

from uavlora.errors import DomainError
from uavlora.terrain import (
    PRESETS, TerrainModel, effective_relative_permittivity, fresnel_parallel, get_terrain,
)

F = 868e6


def test_preset_values():
    assert (PRESETS["dry"].eps_r_real, PRESETS["dry"].eps_r_imag, PRESETS["dry"].sigma) == (4.8, -0.4, 1e-4)
    assert (PRESETS["slightly-wet"].eps_r_real, PRESETS["slightly-wet"].sigma) == (15.0, 0.0)
    assert PRESETS["moderately-wet"].eps_r_real == 30.0
    assert PRESETS["wet"].is_pec


def test_unknown_preset():
    with pytest.raises(DomainError):
        get_terrain("swamp")


@pytest.mark.parametrize("kw", [dict(eps_r_real=0.5), dict(eps_r_real=4.0, sigma=-1.0)])
def test_invalid_dielectric(kw):
    with pytest.raises(DomainError):
        TerrainModel.dielectric(**kw)


def test_effective_permittivity_dry():
    # sigma / (2 pi f eps0) = 2.0709e-3 at 868 MHz
    eps = effective_relative_permittivity(PRESETS["dry"], F)
    assert eps.real == 4.8
    assert abs(eps.imag - (-0.402071)) < 1e-5


def test_effective_permittivity_lossless_conductivity():
    t = TerrainModel.dielectric(4.8, -0.4, 0.0)
    for f in (1e6, 868e6, 5e9):
        assert effective_relative_permittivity(t, f) == complex(4.8, -0.4)
    assert effective_relative_permittivity(PRESETS["slightly-wet"], F) == complex(15, -0.4)


def test_effective_permittivity_pec_rejected():
    with pytest.raises(DomainError):
        effective_relative_permittivity(PRESETS["wet"], F)


def test_pec_is_exactly_minus_one():
    rng = np.random.default_rng(1)
    phis = rng.uniform(1e-9, math.pi / 2, 100)
    out = fresnel_parallel(phis, PRESETS["wet"], F)
    assert np.all(out == -1.0 + 0.0j)
    assert fresnel_parallel(0.3, PRESETS["wet"], 2.4e9) == -1 + 0j


def test_normal_incidence_lossless():
    rho = fresnel_parallel(math.pi / 2, TerrainModel.dielectric(4.0), F)
    assert abs(rho - (-1.0 / 3.0)) < 1e-12


def test_grazing_limit():
    rho = fresnel_parallel(1e-6, PRESETS["dry"], F)
    assert abs(rho + 1) < 1e-3
    for t in PRESETS.values():
        assert abs(fresnel_parallel(1e-5, t, F) + 1) < 1e-2


@pytest.mark.parametrize("phi", [0.0, -0.1, math.pi / 2 + 1e-6])
def test_angle_domain(phi):
    with pytest.raises(DomainError):
        fresnel_parallel(phi, PRESETS["dry"], F)


def _fresnel_scalar(phi, eps):
    root = cmath.sqrt(eps - math.cos(phi) ** 2)
    return (math.sin(phi) - root) / (math.sin(phi) + root)


@pytest.mark.parametrize("name", ["dry", "slightly-wet", "moderately-wet"])
def test_matches_scalar_formula(name):
    t = PRESETS[name]
    eps = effective_relative_permittivity(t, F)
    phis = np.linspace(0.01, math.pi / 2, 50)
    vec = fresnel_parallel(phis, t, F)
    ref = [_fresnel_scalar(p, eps) for p in phis]
    np.testing.assert_allclose(vec, ref, rtol=1e-13)


def test_magnitude_bounded_everywhere():
    phis = np.linspace(math.pi / 2 / 1e4, math.pi / 2, 10_000)
    for t in PRESETS.values():
        assert np.all(np.abs(fresnel_parallel(phis, t, F)) <= 1.0)


@given(st.floats(1.0, 100.0), st.floats(1e-6, math.pi / 2))
def test_lossless_is_real(eps_r, phi):
    rho = fresnel_parallel(phi, TerrainModel.dielectric(eps_r), F)
    assert rho.imag == 0.0
    assert -1.0 <= rho.real <= 0.0


def test_wetter_reflects_more():
    phis = np.linspace(0.01, 1.5, 200)
    mags = [np.abs(fresnel_parallel(phis, PRESETS[n], F)) for n in ("dry", "slightly-wet", "moderately-wet")]
    assert np.all(mags[0] < mags[1]) and np.all(mags[1] < mags[2])

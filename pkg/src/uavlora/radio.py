"""Scalar conventions: decibels, frequency and wavelength."""

import math

import numpy as np

from .errors import DomainError

SPEED_OF_LIGHT = 299_792_458.0  # m/s, exact
VACUUM_PERMITTIVITY = 8.8541878128e-12  # F/m

DEFAULT_FREQUENCY_HZ = 868e6


def wavelength(frequency_hz):
    """Free-space wavelength in metres for a carrier frequency in Hz."""
    if not frequency_hz > 0:
        raise DomainError(f"frequency must be positive, got {frequency_hz!r}")
    return SPEED_OF_LIGHT / frequency_hz


def wavenumber(frequency_hz):
    """Vacuum propagation constant k0 = 2*pi/lambda, in rad/m."""
    return 2.0 * math.pi / wavelength(frequency_hz)


def db_to_linear(x_db):
    return np.power(10.0, np.asarray(x_db, dtype=float) / 10.0)[()]


def linear_to_db(x):
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError("decibel conversion needs strictly positive input")
    return (10.0 * np.log10(x))[()]


def db_linear_convert(x, direction):
    """Convert between dB and linear power ratios.

    ``direction`` is ``"to-linear"`` or ``"to-db"``.
    """
    if direction == "to-linear":
        return db_to_linear(x)
    if direction == "to-db":
        return linear_to_db(x)
    raise ValueError(f"unknown direction {direction!r}")

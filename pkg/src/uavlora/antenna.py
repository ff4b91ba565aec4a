"""Antenna models for the link budget.

Covers the receive patch (rotationally symmetric ellipsoid gain), the
transmit equivalent-gain statistics computed from sampled gain patterns,
the polarization loss factor and the transmit power transfer coefficient.
"""

import csv
from dataclasses import dataclass, field
import math

import numpy as np

from .errors import DomainError, SchemaError
from .radio import db_to_linear, linear_to_db


@dataclass(frozen=True)
class RxPatchParams:
    """Receive patch described by its peak gain (dBi) and half-power beamwidth (deg).

    ``normalize`` rescales the ellipsoid so that its maximum equals the
    nominal peak gain; by default the ellipsoid formula is used as is.
    """

    g_max_dbi: float = 3.2
    bw_deg: float = 100.0
    normalize: bool = False

    def __post_init__(self):
        if not math.isfinite(self.g_max_dbi):
            raise DomainError("peak gain must be finite")
        if not 0.0 < self.bw_deg < 180.0:
            raise DomainError("beamwidth must lie in (0, 180) degrees")

    @property
    def a_z(self):
        return float(db_to_linear(self.g_max_dbi)) / 2.0

    @property
    def a_xi(self):
        return self.a_z / math.tan(math.radians(self.bw_deg) / 2.0)

    def peak(self):
        """Maximum of the un-normalized ellipsoid gain (linear)."""
        az, axi = self.a_z, self.a_xi
        if axi <= az:
            return 2.0 * az**2 / axi
        s = az / math.sqrt(axi**2 - az**2)
        if s >= 1.0:
            return 2.0 * az**2 / axi
        return axi * az / math.sqrt(axi**2 - az**2)


def rx_gain(theta, p=RxPatchParams()):
    """Linear receive gain at polar angle ``theta`` (radians).

    ``theta`` is measured from the patch plane, so the gain vanishes in that
    plane (theta = 0) and peaks on the patch axis (theta = pi/2) for beamwidths
    of 90 degrees or more.
    """
    theta = np.asarray(theta, dtype=float)
    if np.any((theta < 0.0) | (theta > math.pi)):
        raise DomainError("theta must lie in [0, pi]")
    az, axi = p.a_z, p.a_xi
    s, c = np.sin(theta), np.cos(theta)
    g = 2.0 * az**2 * axi * s / (az**2 * c**2 + axi**2 * s**2)
    if p.normalize:
        g = g * (float(db_to_linear(p.g_max_dbi)) / p.peak())
    return g[()]


def rx_gain_dbi(theta, p=RxPatchParams()):
    g = np.asarray(rx_gain(theta, p))
    with np.errstate(divide="ignore"):
        return (10.0 * np.log10(g))[()]


def polarization_vector(a, b):
    """Normalize a pair of complex components to a unit polarization vector."""
    v = np.array([a, b], dtype=complex)
    n = np.linalg.norm(v)
    if n == 0:
        raise DomainError("polarization vector cannot be zero")
    return v / n


CIRCULAR_RX = polarization_vector(1.0, 1.0j)


def plf(t, r):
    """Polarization loss factor |t . conj(r)|**2 for unit polarization vectors."""
    t = np.asarray(t, dtype=complex)
    r = np.asarray(r, dtype=complex)
    for v in (t, r):
        if v.shape != (2,) or abs(np.linalg.norm(v) - 1.0) > 1e-9:
            raise DomainError("polarization vectors must be unit-norm 2-vectors")
    return float(min(1.0, abs(np.dot(t, np.conj(r))) ** 2))


def power_transfer(gamma):
    """Transmit power transfer coefficient 10*log10(1 - |Gamma|**2) in dB."""
    if not 0.0 <= gamma < 1.0:
        raise DomainError("reflection coefficient magnitude must lie in [0, 1)")
    return 10.0 * math.log10(1.0 - gamma**2)


# Equivalent uniform Tx gains (dBi), keyed by (posture, terrain class).
TX_EQUIVALENT_GAIN = {
    ("standing", "wet"): -4.1,
    ("standing", "dry"): -4.1,
    ("lying", "wet"): -4.5,
    ("lying", "dry"): -6.5,
}


def tx_equivalent_gain(posture, terrain_class, table=None):
    table = TX_EQUIVALENT_GAIN if table is None else table
    try:
        return table[(posture, terrain_class)]
    except KeyError:
        raise DomainError(f"no equivalent gain for {posture}/{terrain_class}") from None


@dataclass(frozen=True)
class GainPattern:
    """Gain sampled on a regular (theta, phi) grid over the upper half-space.

    ``gain`` has shape ``(len(theta), len(phi))``; angles are in radians,
    theta from the zenith in [0, pi/2] and phi in [0, 2*pi).
    """

    theta: np.ndarray
    phi: np.ndarray
    gain: np.ndarray
    label: str = ""
    _weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        theta = np.asarray(self.theta, dtype=float)
        phi = np.asarray(self.phi, dtype=float)
        gain = np.asarray(self.gain, dtype=float)
        if theta.ndim != 1 or phi.ndim != 1 or len(theta) < 2 or len(phi) < 2:
            raise SchemaError("pattern grid needs at least 2x2 samples")
        if gain.shape != (len(theta), len(phi)):
            raise SchemaError("gain matrix does not match the angular axes")
        if not np.all(np.isfinite(gain)):
            raise SchemaError("pattern gains must be finite")
        for name, ax in (("theta", theta), ("phi", phi)):
            step = np.diff(ax)
            if np.any(step <= 0) or not np.allclose(step, step[0], rtol=1e-6, atol=1e-12):
                raise SchemaError(f"{name} axis must be regular and increasing")
        if theta[0] < -1e-12 or theta[-1] > math.pi / 2 + 1e-9:
            raise SchemaError("theta must lie within [0, 90] degrees")
        if phi[0] < -1e-12 or phi[-1] >= 2 * math.pi - 1e-12:
            raise SchemaError("phi must lie within [0, 360) degrees")
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "gain", gain)
        object.__setattr__(self, "_weights", _cell_solid_angles(theta, phi))

    @property
    def weights(self):
        """Solid angle of the cell around each node, in steradians."""
        return self._weights

    def same_grid(self, other):
        return (
            self.theta.shape == other.theta.shape
            and self.phi.shape == other.phi.shape
            and np.allclose(self.theta, other.theta)
            and np.allclose(self.phi, other.phi)
        )


def _cell_solid_angles(theta, phi):
    # node-centred cells, clipped to the half-space in theta; phi is periodic
    dt = theta[1] - theta[0]
    lo = np.clip(theta - dt / 2, 0.0, math.pi / 2)
    hi = np.clip(theta + dt / 2, 0.0, math.pi / 2)
    band = np.cos(lo) - np.cos(hi)
    dphi = 2 * math.pi / len(phi)
    return np.outer(band, np.full(len(phi), dphi))


PATTERN_HEADER = ("theta_deg", "phi_deg", "gain_dbi")


def load_pattern(path, label=None):
    """Read a ``theta_deg,phi_deg,gain_dbi`` CSV into a :class:`GainPattern`."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or any(c not in reader.fieldnames for c in PATTERN_HEADER):
            raise SchemaError(f"{path}: header must contain {','.join(PATTERN_HEADER)}")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            try:
                rows.append(tuple(float(row[c]) for c in PATTERN_HEADER))
            except (TypeError, ValueError):
                raise SchemaError(f"{path}:{lineno}: non-numeric value") from None
    if not rows:
        raise SchemaError(f"{path}: no samples")
    data = np.array(rows)
    thetas = np.unique(data[:, 0])
    phis = np.unique(data[:, 1])
    if len(data) != len(thetas) * len(phis):
        raise SchemaError(f"{path}: samples do not form a full rectangular grid")
    ti = np.searchsorted(thetas, data[:, 0])
    pj = np.searchsorted(phis, data[:, 1])
    gain = np.full((len(thetas), len(phis)), np.nan)
    gain[ti, pj] = data[:, 2]
    if np.isnan(gain).any():
        raise SchemaError(f"{path}: duplicate grid nodes")
    return GainPattern(np.radians(thetas), np.radians(phis), gain, label or str(path))


def save_pattern(pattern, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(PATTERN_HEADER)
        for i, t in enumerate(np.degrees(pattern.theta)):
            for j, p in enumerate(np.degrees(pattern.phi)):
                w.writerow([repr(float(t)), repr(float(p)), repr(float(pattern.gain[i, j]))])


def _min_gain(patterns):
    if not patterns:
        raise DomainError("at least one gain pattern is required")
    first = patterns[0]
    for p in patterns[1:]:
        if not first.same_grid(p):
            raise SchemaError("gain patterns are sampled on different grids")
    return np.min(np.stack([p.gain for p in patterns]), axis=0), first.weights


def ccdf(patterns, g0):
    """Percentage of the half-space where every pattern's gain exceeds ``g0`` dBi."""
    gmin, w = _min_gain(patterns)
    return float(100.0 * w[gmin > g0].sum() / w.sum())


def ccdf_curve(patterns, thresholds):
    """Vectorized :func:`ccdf` over an array of thresholds."""
    gmin, w = _min_gain(patterns)
    order = np.argsort(gmin, axis=None)
    g_sorted = gmin.ravel()[order]
    w_sorted = w.ravel()[order]
    # weight strictly above each threshold
    tail = np.concatenate([np.cumsum(w_sorted[::-1])[::-1], [0.0]])
    idx = np.searchsorted(g_sorted, np.asarray(thresholds, dtype=float), side="right")
    return 100.0 * tail[idx] / w.sum()


def equivalent_gain(patterns, quantile=75.0):
    """Largest threshold ``g0`` such that ``ccdf(patterns, g0) >= quantile``.

    The ccdf is a right-continuous step function, so the supremum is attained
    at one of the sampled (pointwise-minimum) gain values.
    """
    if not 0.0 < quantile < 100.0:
        raise DomainError("quantile must lie in (0, 100)")
    gmin, w = _min_gain(patterns)
    g = gmin.ravel()
    order = np.argsort(g, kind="stable")
    g_sorted, w_sorted = g[order], w.ravel()[order]
    tail = np.cumsum(w_sorted[::-1])[::-1]  # weight with gain >= g_sorted[i]
    values = np.unique(g_sorted)
    first = np.searchsorted(g_sorted, values, side="left")
    at_least = 100.0 * tail[first] / w.sum()
    ok = values[at_least >= quantile * (1 - 1e-12)]
    return float(ok.max())

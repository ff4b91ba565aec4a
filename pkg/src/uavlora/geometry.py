"""Flat-earth two-ray geometry between a ground transmitter and a UAV."""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class LinkGeometry:
    """Ray lengths and angles for ground distance R, UAV altitude H and Tx height h.

    Angles are in radians. ``phi`` is the grazing angle at the specular
    point. ``theta_direct`` and ``theta_reflected`` are the arrival angles
    of the two rays at the UAV patch, measured from the (horizontal) patch
    plane so that pi/2 means straight below the UAV. ``theta_tx_direct`` and
    ``theta_tx_reflected`` are the matching departure angles at the
    transmitter, measured from the horizontal.

    Fields are floats for scalar inputs and arrays when R or H are arrays.
    """

    R: object
    H: object
    h: object
    r: object
    r1: object
    r2: object
    specular_x: object
    phi: object
    theta_direct: object
    theta_reflected: object
    theta_tx_direct: object
    theta_tx_reflected: object

    @property
    def delta(self):
        """Excess length of the reflected path, r1 + r2 - r (m)."""
        return _excess(self.R, self.H, self.h)


def _excess(R, H, h):
    # (r1 + r2) - r written without cancellation: difference of two hypotenuses
    a = np.hypot(R, H + h)
    b = np.hypot(R, H - h)
    return 4.0 * H * h / (a + b)


def two_ray_geometry(R, H, h):
    R = np.asarray(R, dtype=float)
    H = np.asarray(H, dtype=float)
    h = np.asarray(h, dtype=float)
    if np.any(R < 0) or np.any(~(H > 0)) or np.any(h < 0):
        raise DomainError("need R >= 0, H > 0 and h >= 0")
    if np.any((R == 0) & (h == H)):
        raise DomainError("transmitter and receiver coincide")
    R, H, h = np.broadcast_arrays(R, H, h)
    r = np.hypot(R, H - h)
    total = np.hypot(R, H + h)
    with np.errstate(invalid="ignore", divide="ignore"):
        frac = np.where(h + H > 0, h / (h + H), 0.0)
    x = R * frac
    r1 = np.hypot(x, h)
    r2 = total - r1
    phi = np.arctan2(H + h, R)
    theta_d = np.arctan2(np.abs(H - h), R)
    theta_r = phi
    out = dict(
        R=R, H=H, h=h, r=r, r1=r1, r2=r2, specular_x=x, phi=phi,
        theta_direct=theta_d, theta_reflected=theta_r,
        theta_tx_direct=np.arctan2(H - h, R), theta_tx_reflected=phi,
    )
    return LinkGeometry(**{k: v[()] for k, v in out.items()})

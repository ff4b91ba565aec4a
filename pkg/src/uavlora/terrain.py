"""Ground electrical models and the horizontal-polarization Fresnel coefficient."""

from dataclasses import dataclass
import math

import numpy as np

from .errors import DomainError
from .radio import VACUUM_PERMITTIVITY


@dataclass(frozen=True)
class TerrainModel:
    """Electrical description of a flat ground.

    ``kind`` is ``"pec"`` or ``"dielectric"``. Dielectric grounds carry the
    relative permittivity as printed (imaginary part signed) plus a
    conductivity in S/m.
    """

    kind: str = "dielectric"
    eps_r_real: float = 1.0
    eps_r_imag: float = 0.0
    sigma: float = 0.0
    label: str = "custom"

    def __post_init__(self):
        if self.kind not in ("pec", "dielectric"):
            raise DomainError(f"unknown terrain kind {self.kind!r}")
        if self.kind == "dielectric":
            if not self.eps_r_real >= 1.0:
                raise DomainError("relative permittivity real part must be >= 1")
            if not self.sigma >= 0.0:
                raise DomainError("conductivity must be non-negative")

    @property
    def is_pec(self):
        return self.kind == "pec"

    @classmethod
    def pec(cls, label="pec"):
        return cls(kind="pec", eps_r_real=math.inf, label=label)

    @classmethod
    def dielectric(cls, eps_r_real, eps_r_imag=0.0, sigma=0.0, label="custom"):
        return cls("dielectric", float(eps_r_real), float(eps_r_imag), float(sigma), label)


PRESETS = {
    "dry": TerrainModel.dielectric(4.8, -0.4, 1e-4, label="dry"),
    "slightly-wet": TerrainModel.dielectric(15.0, -0.4, 0.0, label="slightly-wet"),
    "moderately-wet": TerrainModel.dielectric(30.0, -0.4, 0.0, label="moderately-wet"),
    "wet": TerrainModel.pec(label="wet"),
}


def get_terrain(name):
    try:
        return PRESETS[name]
    except KeyError:
        raise DomainError(
            f"unknown terrain preset {name!r}; choose from {', '.join(PRESETS)}"
        ) from None


def effective_relative_permittivity(terrain, frequency_hz):
    """Complex relative permittivity with the conductivity folded in.

    Returns ``eps_r_real + 1j*eps_r_imag - 1j*sigma/(2*pi*f*eps0)``.
    """
    if terrain.is_pec:
        raise DomainError("a PEC ground has no finite permittivity")
    if not frequency_hz > 0:
        raise DomainError("frequency must be positive")
    loss = terrain.sigma / (2.0 * math.pi * frequency_hz * VACUUM_PERMITTIVITY)
    return complex(terrain.eps_r_real, terrain.eps_r_imag - loss)


def fresnel_parallel(phi, terrain, frequency_hz):
    """Reflection coefficient for a wave polarized parallel to the ground.

    ``phi`` is the incidence (grazing) angle in radians, measured from the
    ground plane, and must lie in (0, pi/2]. Scalars and arrays are both
    accepted. A PEC ground returns exactly -1.
    """
    phi = np.asarray(phi, dtype=float)
    if np.any(~((phi > 0.0) & (phi <= math.pi / 2))):
        raise DomainError("incidence angle must lie in (0, pi/2]")
    if terrain.is_pec:
        return np.full(phi.shape, -1.0 + 0.0j)[()]
    eps = effective_relative_permittivity(terrain, frequency_hz)
    s = np.sin(phi)
    # eps - cos^2 written as (eps - 1) + sin^2 to avoid cancellation near grazing;
    # principal branch, Re >= 0
    root = np.sqrt((eps - 1.0) + s**2 + 0j)
    return ((s - root) / (s + root))[()]

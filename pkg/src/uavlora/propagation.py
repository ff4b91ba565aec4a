"""Path loss, the two-ray path-gain factor and the assembled link budget.

All budget terms are carried in dB; linear quantities appear only inside
the complex two-ray sum.
"""

from dataclasses import dataclass, field, replace
import math

import numpy as np

from . import antenna, terrain as _terrain
from .antenna import RxPatchParams
from .errors import DomainError
from .geometry import two_ray_geometry
from .radio import DEFAULT_FREQUENCY_HZ, wavelength, wavenumber

DEFAULT_F_FLOOR_DB = -200.0
STANDING_HEIGHT_M = 1.7


@dataclass(frozen=True)
class PathLossProfile:
    """Log-distance model PL(r) = pl_d0 + 10 n log10(r / d0)."""

    pl_d0: float
    d0: float
    n: float
    label: str = "custom"

    def __post_init__(self):
        if not self.d0 > 0 or not self.n > 0:
            raise DomainError("path-loss profile needs d0 > 0 and n > 0")


def free_space_profile(frequency_hz=DEFAULT_FREQUENCY_HZ):
    return PathLossProfile(0.0, wavelength(frequency_hz) / (4 * math.pi), 2.0, "free-space")


SNOW_SURFACE = PathLossProfile(56.7, 1.0, 3.17, "snow-surface")


def path_loss(r, profile):
    r = np.asarray(r, dtype=float)
    if np.any(~(r > 0)):
        raise DomainError("path length must be positive")
    return (profile.pl_d0 + 10.0 * profile.n * np.log10(r / profile.d0))[()]


def two_ray_factor(rho, gain_ratio, delta, k0, f_floor=DEFAULT_F_FLOOR_DB):
    """20 log10|1 + rho sqrt(gain_ratio) exp(-j k0 (r - r1 - r2))|, floored at ``f_floor``.

    ``delta`` is the excess path r1 + r2 - r; ``gain_ratio`` is the
    reflected-to-direct product of the linear antenna gains.
    """
    r_minus_r1_r2 = -np.asarray(delta, dtype=float)
    s = 1.0 + np.asarray(rho) * np.sqrt(gain_ratio) * np.exp(-1j * k0 * r_minus_r1_r2)
    mag = np.abs(s)
    with np.errstate(divide="ignore"):
        f = 20.0 * np.log10(mag)
    return np.maximum(f, f_floor)[()]


def path_gain_factor(g, terrain, rx=RxPatchParams(), frequency_hz=DEFAULT_FREQUENCY_HZ,
                     f_floor=DEFAULT_F_FLOOR_DB):
    """Two-ray path-gain factor F (dB) for a :class:`LinkGeometry`.

    The transmitter is an equivalent uniform radiator, so only the receive
    gains enter the ratio.
    """
    if np.any(~(np.asarray(g.h) > 0)):
        raise DomainError("the two-ray factor needs a raised transmitter (h > 0)")
    g_dir = np.asarray(antenna.rx_gain(g.theta_direct, rx))
    if np.any(g_dir <= 0):
        raise DomainError("receive gain along the direct ray is zero")
    g_ref = np.asarray(antenna.rx_gain(g.theta_reflected, rx))
    rho = _terrain.fresnel_parallel(g.phi, terrain, frequency_hz)
    return two_ray_factor(rho, g_ref / g_dir, g.delta, wavenumber(frequency_hz), f_floor)


@dataclass(frozen=True)
class LinkScenario:
    """Everything the link budget needs apart from the (R, H) position.

    ``tx_gain`` and ``h`` default to the posture-dependent values when left
    as ``None``; ``terrain_class`` defaults to "wet" for a PEC ground and
    "dry" otherwise. A lying posture always puts the antenna on the ground
    and drops the two-ray term.
    """

    posture: str = "standing"
    terrain: _terrain.TerrainModel = field(default_factory=lambda: _terrain.PRESETS["dry"])
    frequency_hz: float = DEFAULT_FREQUENCY_HZ
    p_t: float = 14.0
    tau_t: float = -0.01
    chi: float = -3.0
    tx_gain: float = None
    rx: RxPatchParams = RxPatchParams()
    h: float = None
    pl_profile: PathLossProfile = None
    extra_loss: float = 0.0
    f_floor: float = DEFAULT_F_FLOOR_DB
    terrain_class: str = None
    erp_limit: float = None

    def __post_init__(self):
        if self.posture not in ("standing", "lying"):
            raise DomainError(f"posture must be standing or lying, not {self.posture!r}")
        if not self.frequency_hz > 0:
            raise DomainError("frequency must be positive")
        if self.terrain_class is None:
            object.__setattr__(self, "terrain_class", "wet" if self.terrain.is_pec else "dry")
        if self.terrain_class not in ("wet", "dry"):
            raise DomainError("terrain class must be wet or dry")
        if self.posture == "lying":
            object.__setattr__(self, "h", 0.0)
        elif self.h is None:
            object.__setattr__(self, "h", STANDING_HEIGHT_M)
        if self.h < 0:
            raise DomainError("transmitter height must be non-negative")
        if self.tx_gain is None:
            object.__setattr__(
                self, "tx_gain", antenna.tx_equivalent_gain(self.posture, self.terrain_class))
        if self.pl_profile is None:
            object.__setattr__(self, "pl_profile", free_space_profile(self.frequency_hz))
        if self.erp_limit is not None and self.p_t > self.erp_limit:
            raise DomainError(
                f"transmit power {self.p_t} dBm exceeds the {self.erp_limit} dBm ERP limit")

    @property
    def multipath(self):
        return self.posture == "standing" and self.h > 0

    def replace(self, **changes):
        if "posture" in changes and "h" not in changes:
            changes["h"] = None
        if ("posture" in changes or "terrain" in changes or "terrain_class" in changes) \
                and "tx_gain" not in changes:
            changes.setdefault("tx_gain", None)
            if "terrain" in changes and "terrain_class" not in changes:
                changes["terrain_class"] = None
        if "frequency_hz" in changes and "pl_profile" not in changes \
                and self.pl_profile.label == "free-space":
            changes["pl_profile"] = None
        return replace(self, **changes)


def link_terms(R, H, s):
    """Budget terms (dB) at ground distance R and altitude H, as a dict.

    Keys: ``r`` (slant path, m), ``g_r`` (receive gain, dBi), ``pl``, ``f``
    and ``p_r`` (dBm). Arrays broadcast.
    """
    g = two_ray_geometry(R, H, s.h)
    g_r = antenna.rx_gain_dbi(g.theta_direct, s.rx)
    pl = path_loss(g.r, s.pl_profile)
    if s.multipath:
        f = path_gain_factor(g, s.terrain, s.rx, s.frequency_hz, s.f_floor)
    else:
        f = np.zeros(np.shape(g.r))[()]
    base = s.p_t + s.tx_gain + s.tau_t + s.chi - s.extra_loss
    p_r = base + g_r - pl + f
    return {"r": g.r, "g_r": g_r, "pl": pl, "f": f, "p_r": p_r}


def received_power(R, H, s):
    """Received power (dBm) for ground distance R (m) and UAV altitude H (m)."""
    return link_terms(R, H, s)["p_r"]


def single_ray_power(R, H, s):
    """Received power with the two-ray term removed (F = 0)."""
    t = link_terms(R, H, s)
    return t["p_r"] - t["f"]

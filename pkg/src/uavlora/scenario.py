"""Scenario files: JSON or TOML mappings onto :class:`LinkScenario`."""

import hashlib
import json
from pathlib import Path

from .antenna import RxPatchParams
from .errors import SchemaError
from .propagation import SNOW_SURFACE, LinkScenario, PathLossProfile, free_space_profile
from .terrain import PRESETS, TerrainModel, get_terrain

KEYS = (
    "posture", "terrain", "terrain_class", "frequency_hz", "p_t_dbm", "tau_t_db",
    "chi_db", "tx_gain_dbi", "rx_g_max_dbi", "rx_bw_deg", "rx_normalize", "h_m",
    "path_loss", "extra_loss_db", "f_floor_db", "erp_limit_dbm",
)
_TERRAIN_KEYS = {"eps_r_real", "eps_r_imag", "sigma"}
_PL_KEYS = {"pl_d0_db", "d0_m", "n"}


def _terrain_from(value):
    if isinstance(value, str):
        if value not in PRESETS:
            raise SchemaError(f"unknown terrain preset {value!r}; choose from {', '.join(PRESETS)}")
        return get_terrain(value)
    if isinstance(value, dict):
        extra = set(value) - _TERRAIN_KEYS - {"label"}
        if extra or "eps_r_real" not in value:
            raise SchemaError(f"custom terrain needs eps_r_real[, eps_r_imag, sigma]; got {sorted(value)}")
        return TerrainModel.dielectric(
            value["eps_r_real"], value.get("eps_r_imag", 0.0), value.get("sigma", 0.0),
            label=value.get("label", "custom"))
    raise SchemaError(f"terrain must be a preset name or a table, not {value!r}")


def _terrain_to(t):
    if t.label in PRESETS and PRESETS[t.label] == t:
        return t.label
    return {"eps_r_real": t.eps_r_real, "eps_r_imag": t.eps_r_imag, "sigma": t.sigma, "label": t.label}


def _profile_from(value, frequency_hz):
    if value is None or value == "free-space":
        return None
    if value == "snow-surface":
        return SNOW_SURFACE
    if isinstance(value, dict):
        if set(value) - _PL_KEYS - {"label"} or not _PL_KEYS <= set(value):
            raise SchemaError("custom path loss needs exactly pl_d0_db, d0_m, n")
        return PathLossProfile(value["pl_d0_db"], value["d0_m"], value["n"], value.get("label", "custom"))
    raise SchemaError(f"unknown path-loss profile {value!r}")


def _profile_to(p, frequency_hz):
    if p == free_space_profile(frequency_hz):
        return "free-space"
    if p == SNOW_SURFACE:
        return "snow-surface"
    return {"pl_d0_db": p.pl_d0, "d0_m": p.d0, "n": p.n, "label": p.label}


def scenario_from_dict(d):
    """Build a scenario from a mapping; unknown keys are rejected."""
    unknown = set(d) - set(KEYS)
    if unknown:
        raise SchemaError(f"unknown scenario keys: {', '.join(sorted(unknown))}")
    freq = float(d.get("frequency_hz", 868e6))
    rx = RxPatchParams(
        float(d.get("rx_g_max_dbi", 3.2)), float(d.get("rx_bw_deg", 100.0)),
        bool(d.get("rx_normalize", False)))
    kw = dict(
        posture=d.get("posture", "standing"),
        terrain=_terrain_from(d.get("terrain", "dry")),
        terrain_class=d.get("terrain_class"),
        frequency_hz=freq,
        p_t=float(d.get("p_t_dbm", 14.0)),
        tau_t=float(d.get("tau_t_db", -0.01)),
        chi=float(d.get("chi_db", -3.0)),
        tx_gain=d.get("tx_gain_dbi"),
        rx=rx,
        h=d.get("h_m"),
        pl_profile=_profile_from(d.get("path_loss"), freq),
        extra_loss=float(d.get("extra_loss_db", 0.0)),
        f_floor=float(d.get("f_floor_db", -200.0)),
        erp_limit=d.get("erp_limit_dbm"),
    )
    for k in ("tx_gain", "h", "erp_limit"):
        if kw[k] is not None:
            kw[k] = float(kw[k])
    return LinkScenario(**kw)


def scenario_to_dict(s):
    """Effective scenario, with every derived default written out."""
    return {
        "posture": s.posture,
        "terrain": _terrain_to(s.terrain),
        "terrain_class": s.terrain_class,
        "frequency_hz": s.frequency_hz,
        "p_t_dbm": s.p_t,
        "tau_t_db": s.tau_t,
        "chi_db": s.chi,
        "tx_gain_dbi": s.tx_gain,
        "rx_g_max_dbi": s.rx.g_max_dbi,
        "rx_bw_deg": s.rx.bw_deg,
        "rx_normalize": s.rx.normalize,
        "h_m": s.h,
        "path_loss": _profile_to(s.pl_profile, s.frequency_hz),
        "extra_loss_db": s.extra_loss,
        "f_floor_db": s.f_floor,
        "erp_limit_dbm": s.erp_limit,
    }


def read_scenario_file(path):
    """Parse a ``.json`` or ``.toml`` scenario file into a plain dict."""
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".json":
        with open(path) as fh:
            data = json.load(fh)
    elif suffix == ".toml":
        try:
            import tomllib
        except ModuleNotFoundError:  # Python < 3.11
            import tomli as tomllib
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    else:
        raise SchemaError(f"{path}: scenario files must be .json or .toml")
    if not isinstance(data, dict):
        raise SchemaError(f"{path}: scenario must be a mapping")
    return data


def load_scenario(path, **overrides):
    data = read_scenario_file(path)
    data.update({k: v for k, v in overrides.items() if v is not None})
    return scenario_from_dict(data)


def fingerprint(s):
    blob = json.dumps(scenario_to_dict(s), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]

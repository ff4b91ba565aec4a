"""Flight logs: RSS estimation from RSSI/SNR, calibration and model comparison."""

import csv
from dataclasses import dataclass
import math

import numpy as np

from .analysis import sensitivity
from .errors import DomainError, SchemaError
from .propagation import received_power

LOG_COLUMNS = ("timestamp_s", "r_m", "lat", "lon", "h_uav_m", "rssi_db", "snr_db", "sf", "seq")
EARTH_RADIUS_M = 6_371_008.8


@dataclass(frozen=True)
class PacketRecord:
    timestamp: float
    r: float
    h_uav: float
    rssi: float
    snr_db: float
    sf: int
    seq: int
    lat: float = None
    lon: float = None


@dataclass(frozen=True)
class ComparisonStats:
    n: int
    mean_error: float
    rmse: float
    max_abs: float

    def as_dict(self):
        return {"n": self.n, "mean_error_db": self.mean_error, "rmse_db": self.rmse,
                "max_abs_db": self.max_abs}


def snr_correction(snr_db):
    """10*log10(1 + 1/SNR) with SNR given in dB."""
    return 10.0 * np.log10(1.0 + 10.0 ** (-np.asarray(snr_db, dtype=float) / 10.0))


def rss_from_rssi(rssi, snr_db, c0=0.0):
    """Received power (dBm) from the reported RSSI, SNR (dB) and calibration offset."""
    return (np.asarray(rssi, dtype=float) - snr_correction(snr_db) + c0)[()]


def calibrate_c0(record, known_p_r):
    """Offset that makes ``record`` map exactly onto the reference power ``known_p_r``."""
    return float(known_p_r - rss_from_rssi(record.rssi, record.snr_db, 0.0))


def ground_distance(lat, lon, target):
    """Equirectangular ground distance (m) from ``target = (lat, lon)`` in degrees."""
    lat0, lon0 = target
    phi_m = math.radians((lat + lat0) / 2.0)
    dx = math.radians(lon - lon0) * math.cos(phi_m)
    dy = math.radians(lat - lat0)
    return EARTH_RADIUS_M * math.hypot(dx, dy)


def _num(row, key):
    text = (row.get(key) or "").strip()
    if text == "":
        return None
    v = float(text)
    if not math.isfinite(v):
        raise ValueError(f"{key} is not finite")
    return v


def ingest_log(path, target=None):
    """Parse a flight log into ``(records, rejects)``.

    ``rejects`` is a list of ``(row, reason)`` pairs for rows that failed
    validation; they are kept out of ``records`` but never silently lost.
    Positions come either from ``r_m`` or from ``lat``/``lon`` resolved
    against ``target``; a file must use one form throughout.
    """
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in LOG_COLUMNS if c not in header]
        if missing:
            raise SchemaError(f"{path}: missing columns {', '.join(missing)}")
        rows = list(reader)

    mode = None
    records, rejects = [], []
    last_seq = None
    for row in rows:
        try:
            r, lat, lon = _num(row, "r_m"), _num(row, "lat"), _num(row, "lon")
            if r is not None and (lat is not None or lon is not None):
                raise ValueError("both r_m and lat/lon populated")
            if r is None and (lat is None or lon is None):
                raise ValueError("no position (r_m or lat+lon)")
            row_mode = "r" if r is not None else "latlon"
            if mode is None:
                mode = row_mode
            elif row_mode != mode:
                raise SchemaError(f"{path}: mixes r_m and lat/lon positions")
            if row_mode == "latlon":
                if target is None:
                    raise SchemaError(f"{path}: lat/lon positions need a target coordinate")
                r = ground_distance(lat, lon, target)
            if r < 0:
                raise ValueError("negative ground distance")
            vals = {k: _num(row, k) for k in ("timestamp_s", "h_uav_m", "rssi_db", "snr_db", "sf", "seq")}
            for k, v in vals.items():
                if v is None:
                    raise ValueError(f"{k} is empty")
            sf, seq = vals["sf"], vals["seq"]
            if sf != int(sf) or int(sf) not in range(7, 13):
                raise ValueError(f"sf {row['sf'].strip()} outside 7..12")
            if seq != int(seq):
                raise ValueError("seq must be an integer")
            if last_seq is not None and seq < last_seq:
                raise ValueError("seq decreases")
            if not vals["h_uav_m"] > 0:
                raise ValueError("h_uav_m must be positive")
        except SchemaError:
            raise
        except ValueError as exc:
            rejects.append((row, str(exc)))
            continue
        last_seq = seq
        records.append(PacketRecord(vals["timestamp_s"], r, vals["h_uav_m"], vals["rssi_db"],
                                    vals["snr_db"], int(sf), int(seq), lat, lon))
    return records, rejects


def write_log(records, path):
    """Write records in the log schema; lat/lon are kept when every record has them."""
    use_latlon = bool(records) and all(r.lat is not None and r.lon is not None for r in records)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(LOG_COLUMNS)
        for rec in records:
            pos = ["", repr(rec.lat), repr(rec.lon)] if use_latlon else [repr(float(rec.r)), "", ""]
            w.writerow([repr(float(rec.timestamp)), *pos, repr(float(rec.h_uav)),
                        repr(float(rec.rssi)), repr(float(rec.snr_db)), rec.sf, rec.seq])


def write_rejects(rejects, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([*LOG_COLUMNS, "reason"])
        for row, reason in rejects:
            w.writerow([row.get(c, "") for c in LOG_COLUMNS] + [reason])


def compare(records, s, sf=None, c0=0.0):
    """Statistics of model minus measured power over the records.

    With ``sf`` given, only packets sent with that spreading factor count.
    """
    if sf is not None:
        records = [r for r in records if r.sf == sf]
    if not records:
        raise DomainError("no records to compare")
    R = np.array([r.r for r in records])
    H = np.array([r.h_uav for r in records])
    model = np.atleast_1d(received_power(R, H, s))
    measured = np.atleast_1d(rss_from_rssi([r.rssi for r in records],
                                           [r.snr_db for r in records], c0))
    err = model - measured
    n = len(err)
    return ComparisonStats(
        n=n,
        mean_error=math.fsum(err) / n,
        rmse=math.sqrt(math.fsum(err * err) / n),
        max_abs=float(np.max(np.abs(err))),
    )


def synth_flight(trajectory, s, sf=12, noise_sd=0.0, seed=0, snr_db=20.0, speed=1.0):
    """Simulated flight log for a vertical or horizontal trajectory.

    ``trajectory`` is a mapping: ``{"kind": "vertical", "R": ..., "start": ...,
    "stop": ..., "step": ...}`` sweeps H at fixed R; ``kind="horizontal"``
    with ``"H"`` sweeps R at fixed H. One packet is sent per sample; those
    arriving below the receiver sensitivity are dropped, leaving a gap in
    ``seq``. RSSI is set so that :func:`rss_from_rssi` with ``c0 = 0``
    recovers the (noisy) model power.
    """
    kind = trajectory.get("kind")
    start, stop, step = (float(trajectory[k]) for k in ("start", "stop", "step"))
    if not (step > 0 and stop > start):
        raise DomainError("trajectory needs stop > start and a positive step")
    line = start + step * np.arange(int(math.floor((stop - start) / step + 1e-9)) + 1)
    if kind == "vertical":
        R = np.full_like(line, float(trajectory["R"]))
        H = line
        if line[0] <= 0:
            raise DomainError("vertical sweep must stay above ground")
    elif kind == "horizontal":
        R = line
        H = np.full_like(line, float(trajectory["H"]))
        if line[0] < 0:
            raise DomainError("horizontal sweep needs R >= 0")
    else:
        raise DomainError(f"trajectory kind must be vertical or horizontal, not {kind!r}")
    p = np.atleast_1d(received_power(R, H, s))
    rng = np.random.default_rng(seed)
    if noise_sd > 0:
        p = p + rng.normal(0.0, noise_sd, size=p.shape)
    rssi = p + snr_correction(snr_db)
    sens = sensitivity(sf)
    dt = step / speed
    return [
        PacketRecord(i * dt, float(R[i]), float(H[i]), float(rssi[i]), float(snr_db), int(sf), i)
        for i in range(len(line)) if p[i] >= sens
    ]

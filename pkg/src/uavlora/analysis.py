"""LoRa receiver thresholds and the derived link products.

Maximum-range solving, coverage grids over (R, H), fringe extent of the
two-ray interference, and their CSV / PGM exports.
"""

from concurrent.futures import ThreadPoolExecutor
import csv
from dataclasses import dataclass, field
import math

import numpy as np

from .errors import DomainError
from .propagation import link_terms, received_power
from .scenario import fingerprint

# SX1276 sensitivity (dBm) at 125 kHz bandwidth
SENSITIVITY_DBM = {12: -136.0, 11: -133.0, 10: -132.0, 9: -129.0, 8: -126.0, 7: -123.0}
BANDWIDTH_HZ = 125e3
ERP_LIMIT_DBM = 14.0

R_DOMAIN = (1.0, 10000.0)
H_DOMAIN = (5.0, 120.0)


def sensitivity(sf):
    try:
        return SENSITIVITY_DBM[int(sf)]
    except (KeyError, ValueError, TypeError):
        raise DomainError(f"spreading factor must be 7..12, got {sf!r}") from None


def erp_check(p_t, limit=ERP_LIMIT_DBM):
    """True when the transmit power respects the ERP limit."""
    return p_t <= limit


def bisect(fn, lo, hi, tol):
    """Root of ``fn`` in [lo, hi] by bisection; ``fn(lo)`` and ``fn(hi)`` differ in sign.

    Returns the final bracket ``(lo, hi)`` with ``hi - lo <= tol``; ``lo``
    keeps the sign of ``fn(lo)``.
    """
    f_lo = fn(lo) >= 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if (fn(mid) >= 0) == f_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


@dataclass
class RangeResult:
    """Outcome of a range search.

    ``last_crossing`` is the largest R still at or above the sensitivity
    before the final drop; ``first_dropout`` the smallest R where the power
    first falls below it. ``saturated`` means the link is still up at the far
    edge of the domain, in which case ``last_crossing`` is None.
    """

    last_crossing: float = None
    first_dropout: float = None
    saturated: bool = False
    crossings: list = field(default_factory=list)


def find_range(power_fn, threshold, r_domain=R_DOMAIN, coarse_step=1.0, tol=1e-3,
               values=None):
    """Locate where ``power_fn(R)`` crosses ``threshold`` over ``r_domain``.

    ``power_fn`` must accept arrays. Sign changes are located on a grid with
    spacing ``coarse_step`` and each is refined by bisection to ``tol``.
    ``values`` may carry the precomputed powers on that grid.
    """
    r_lo, r_hi = map(float, r_domain)
    if not (1.0 <= r_lo < r_hi <= 1e6):
        raise DomainError("range domain must satisfy 1 <= r_min < r_max <= 1e6")
    if not coarse_step > 0:
        raise DomainError("coarse step must be positive")
    grid = _grid(r_lo, r_hi, coarse_step)
    p = np.asarray(power_fn(grid) if values is None else values, dtype=float)
    up = p >= threshold
    out = RangeResult(saturated=bool(up[-1]))
    if not up[0]:
        out.first_dropout = r_lo
    edges = np.nonzero(up[:-1] != up[1:])[0]

    def margin(x):
        return float(np.asarray(power_fn(np.array([x])))[0]) - threshold

    down = []
    for i in edges:
        lo, hi = bisect(margin, grid[i], grid[i + 1], tol)
        if up[i]:
            down.append(lo)  # still covered at lo
            out.crossings.append(lo)
        else:
            out.crossings.append(hi)
    if down:
        if out.first_dropout is None:
            out.first_dropout = down[0]
        if not out.saturated:
            out.last_crossing = down[-1]
    return out


def _grid(lo, hi, step):
    if not (step > 0 and math.isfinite(step) and hi >= lo):
        raise DomainError(f"bad axis: start {lo}, stop {hi}, step {step}")
    n = int(math.floor((hi - lo) / step + 1e-9))
    g = lo + step * np.arange(n + 1)
    if g[-1] < hi:
        g = np.append(g, hi)
    return g


def max_range(H, sf, s, r_domain=R_DOMAIN, coarse_step=1.0):
    """Maximum ground distance at which the link stays above the SF sensitivity."""
    return find_range(lambda R: received_power(R, H, s), sensitivity(sf), r_domain, coarse_step)


def max_range_curve(h_axis, sfs, s, r_domain=R_DOMAIN, coarse_step=1.0, workers=1):
    """Range for every (H, SF) pair as a list of ``(H, SF, RangeResult)`` rows.

    The power profile along R is computed once per altitude and reused for
    every spreading factor.
    """
    h_axis = [float(h) for h in h_axis]
    sfs = [int(sf) for sf in sfs]
    for sf in sfs:
        sensitivity(sf)
    grid = _grid(float(r_domain[0]), float(r_domain[1]), coarse_step)

    def one(H):
        p = received_power(grid, H, s)
        fn = lambda R: received_power(R, H, s)  # noqa: E731
        return [(H, sf, find_range(fn, sensitivity(sf), r_domain, coarse_step, values=p))
                for sf in sfs]

    rows = _map(one, h_axis, workers)
    return [row for chunk in rows for row in chunk]


def _map(fn, items, workers):
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


@dataclass
class CoverageGrid:
    """Received power over an (R, H) grid; rows follow ``h_axis``, columns ``r_axis``."""

    r_axis: np.ndarray
    h_axis: np.ndarray
    values: np.ndarray
    sensitivity: float
    nulls: np.ndarray
    fingerprint: str = ""

    @property
    def covered(self):
        return self.values >= self.sensitivity


def axis(start, stop, step):
    return _grid(float(start), float(stop), float(step))


def coverage_map(s, sf, r_axis, h_axis, workers=1):
    r_axis = np.asarray(r_axis, dtype=float)
    h_axis = np.asarray(h_axis, dtype=float)
    for name, ax in (("R", r_axis), ("H", h_axis)):
        if ax.ndim != 1 or len(ax) == 0 or np.any(np.diff(ax) <= 0):
            raise DomainError(f"{name} axis must be non-empty and strictly increasing")

    def row(H):
        t = link_terms(r_axis, H, s)
        return np.atleast_1d(t["p_r"]), np.atleast_1d(t["f"] <= s.f_floor)

    rows = _map(row, list(h_axis), workers)
    values = np.vstack([r[0] for r in rows])
    nulls = np.vstack([r[1] for r in rows])
    return CoverageGrid(r_axis, h_axis, values, sensitivity(sf), nulls, fingerprint(s))


def fringe_extent(H, s, ripple_threshold=3.0, r_domain=R_DOMAIN, step=0.5):
    """Ground distance of the farthest interference fade deeper than the threshold.

    The two-ray profile is compared with its single-ray counterpart on a
    regular grid. The extent is the largest R at which the difference has a
    local minimum below ``-ripple_threshold`` dB; 0 when no such fade exists.
    Beyond the last fade the two-ray term only decays smoothly, which is not
    counted as ripple.
    """
    if not s.multipath:
        raise DomainError("fringes need a standing (raised) transmitter")
    R = _grid(float(r_domain[0]), float(r_domain[1]), step)
    f = link_terms(R, H, s)["f"]
    inner = f[1:-1]
    fades = np.nonzero((inner < f[:-2]) & (inner <= f[2:]) & (inner < -ripple_threshold))[0]
    if len(fades) == 0:
        return 0.0
    return float(R[fades[-1] + 1])


def profile(s, kind, fixed, start, stop, step):
    """Received power along a horizontal (fixed H) or vertical (fixed R) flight line.

    Returns ``(R, H, p_r)`` arrays.
    """
    line = axis(start, stop, step)
    if kind == "horizontal":
        R, H = line, np.full_like(line, float(fixed))
    elif kind == "vertical":
        R, H = np.full_like(line, float(fixed)), line
    else:
        raise DomainError(f"flight line must be horizontal or vertical, not {kind!r}")
    return R, H, np.atleast_1d(received_power(R, H, s))


def _fmt(x):
    return "" if x is None else repr(float(x))


def write_coverage_csv(grid, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["R_m", "H_m", "P_R_dbm", "covered"])
        cov = grid.covered
        for i, H in enumerate(grid.h_axis):
            for j, R in enumerate(grid.r_axis):
                w.writerow([_fmt(R), _fmt(H), _fmt(grid.values[i, j]), int(cov[i, j])])


def write_pgm(grid, path):
    """8-bit binary PGM, highest altitude on top, nulls black, min-max scaled."""
    v = grid.values[::-1]
    nulls = grid.nulls[::-1]
    live = v[~nulls]
    lo, hi = (float(live.min()), float(live.max())) if live.size else (0.0, 1.0)
    span = hi - lo if hi > lo else 1.0
    img = np.clip(np.rint((v - lo) / span * 255.0), 0, 255).astype(np.uint8)
    img[nulls] = 0
    rows, cols = img.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{cols} {rows}\n255\n".encode("ascii"))
        fh.write(img.tobytes())


def write_curve_csv(rows, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["H_m", "SF", "last_crossing_m", "first_dropout_m", "saturated"])
        for H, sf, res in rows:
            w.writerow([_fmt(H), sf, _fmt(res.last_crossing), _fmt(res.first_dropout),
                        int(res.saturated)])

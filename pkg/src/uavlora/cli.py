"""Command-line entry point: ``uavlora <command> [options]``.

Every command writes its outputs into ``--out-dir`` (default: the
``UAVLORA_OUT_DIR`` environment variable, else the working directory).
Exit status is 0 on success, 1 when the inputs fall outside the model's
domain or fail schema checks, and 2 on usage errors.
"""

import argparse
import json
import os
from pathlib import Path
import sys

import numpy as np

from . import analysis, antenna, measurements, terrain
from .errors import DomainError, SchemaError
from .propagation import single_ray_power
from .scenario import load_scenario, scenario_from_dict, scenario_to_dict

OUT_DIR_ENV = "UAVLORA_OUT_DIR"

# flag name -> scenario key
_SCENARIO_FLAGS = {
    "posture": "posture",
    "terrain": "terrain",
    "terrain_class": "terrain_class",
    "frequency": "frequency_hz",
    "p_t": "p_t_dbm",
    "tau_t": "tau_t_db",
    "chi": "chi_db",
    "tx_gain": "tx_gain_dbi",
    "tx_height": "h_m",
    "path_loss": "path_loss",
    "extra_loss": "extra_loss_db",
    "erp_limit": "erp_limit_dbm",
}


def _add_scenario_args(p):
    g = p.add_argument_group("scenario")
    g.add_argument("--scenario", metavar="FILE", help="JSON or TOML scenario file")
    g.add_argument("--posture", choices=["standing", "lying"])
    g.add_argument("--terrain", choices=list(terrain.PRESETS))
    g.add_argument("--terrain-class", choices=["wet", "dry"],
                   help="class used to look up the equivalent Tx gain")
    g.add_argument("--frequency", type=float, metavar="HZ")
    g.add_argument("--p-t", type=float, metavar="DBM", help="transmit power")
    g.add_argument("--tau-t", type=float, metavar="DB", help="Tx power transfer coefficient")
    g.add_argument("--chi", type=float, metavar="DB", help="polarization loss factor")
    g.add_argument("--tx-gain", type=float, metavar="DBI", help="override the equivalent Tx gain")
    g.add_argument("--tx-height", type=float, metavar="M", help="Tx height above ground")
    g.add_argument("--path-loss", choices=["free-space", "snow-surface"])
    g.add_argument("--extra-loss", type=float, metavar="DB", help="additional loss, e.g. burial")
    g.add_argument("--erp-limit", type=float, metavar="DBM", help="reject P_T above this ERP")


def _add_out(p, plot=True):
    p.add_argument("--out-dir", metavar="DIR", default=None,
                   help=f"output directory (default ${OUT_DIR_ENV} or .)")
    if plot:
        p.add_argument("--plot", action="store_true", help="also render PNG figures")


def _domain_args(p, r=(1.0, 10000.0, 10.0), h=(5.0, 120.0, 5.0)):
    p.add_argument("--r-min", type=float, default=r[0])
    p.add_argument("--r-max", type=float, default=r[1])
    p.add_argument("--r-step", type=float, default=r[2])
    if h is not None:
        p.add_argument("--h-min", type=float, default=h[0])
        p.add_argument("--h-max", type=float, default=h[1])
        p.add_argument("--h-step", type=float, default=h[2])


def build_parser():
    parser = argparse.ArgumentParser(
        prog="uavlora", description="Ground-to-UAV LoRa link budget and analysis toolkit.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("coverage", help="received-power map over R x H")
    _add_scenario_args(p)
    p.add_argument("--sf", type=int, default=12)
    _domain_args(p)
    p.add_argument("--workers", type=int, default=1)
    _add_out(p)

    p = sub.add_parser("range", help="maximum range versus altitude for each SF")
    _add_scenario_args(p)
    p.add_argument("--sf", type=int, nargs="+", default=[7, 8, 9, 10, 11, 12])
    _domain_args(p, r=(1.0, 10000.0, 1.0))
    p.add_argument("--workers", type=int, default=1)
    _add_out(p)

    p = sub.add_parser("profile", help="received power along a flight line")
    _add_scenario_args(p)
    p.add_argument("--kind", choices=["horizontal", "vertical"], default="horizontal")
    p.add_argument("--fixed", type=float, default=50.0,
                   help="H for a horizontal line, R for a vertical one (m)")
    p.add_argument("--start", type=float, default=1.0)
    p.add_argument("--stop", type=float, default=2500.0)
    p.add_argument("--step", type=float, default=0.5)
    p.add_argument("--sf", type=int, default=12)
    _add_out(p)

    p = sub.add_parser("fringe", help="extent of two-ray interference fades per altitude")
    _add_scenario_args(p)
    p.add_argument("--h", type=float, nargs="+", default=[15.0, 50.0, 120.0], metavar="M")
    p.add_argument("--threshold", type=float, default=3.0, metavar="DB")
    p.add_argument("--r-min", type=float, default=1.0)
    p.add_argument("--r-max", type=float, default=10000.0)
    _add_out(p, plot=False)

    p = sub.add_parser("fresnel", help="ground reflection coefficient versus incidence angle")
    p.add_argument("--terrain", choices=list(terrain.PRESETS), nargs="+",
                   default=list(terrain.PRESETS))
    p.add_argument("--frequency", type=float, default=868e6, metavar="HZ")
    p.add_argument("--step-deg", type=float, default=0.5)
    _add_out(p)

    p = sub.add_parser("gain", help="Rx patch pattern table; CCDF and equivalent gain of Tx patterns")
    p.add_argument("--rx-g-max", type=float, default=3.2, metavar="DBI")
    p.add_argument("--rx-bw", type=float, default=100.0, metavar="DEG")
    p.add_argument("--normalize", action="store_true", help="scale the Rx ellipsoid to its peak gain")
    p.add_argument("--step-deg", type=float, default=1.0)
    p.add_argument("--pattern", nargs="+", metavar="CSV",
                   help="gain pattern files (theta_deg,phi_deg,gain_dbi)")
    p.add_argument("--quantile", type=float, default=75.0)
    _add_out(p)

    p = sub.add_parser("ingest", help="validate a flight log, split off rejected rows")
    p.add_argument("log")
    p.add_argument("--target-lat", type=float)
    p.add_argument("--target-lon", type=float)
    _add_out(p, plot=False)

    p = sub.add_parser("calibrate", help="single-point calibration offset c0")
    p.add_argument("log")
    p.add_argument("--seq", type=int, help="reference packet by sequence number (default: first)")
    p.add_argument("--known-p-r", type=float, required=True, metavar="DBM")
    p.add_argument("--target-lat", type=float)
    p.add_argument("--target-lon", type=float)
    _add_out(p, plot=False)

    p = sub.add_parser("compare", help="model versus measured received power")
    p.add_argument("log")
    _add_scenario_args(p)
    p.add_argument("--c0", type=float, default=None, metavar="DBM")
    p.add_argument("--calibration", metavar="JSON", help="output of the calibrate command")
    p.add_argument("--sf", type=int, default=None, help="only packets with this SF")
    p.add_argument("--target-lat", type=float)
    p.add_argument("--target-lon", type=float)
    _add_out(p)

    p = sub.add_parser("synth", help="synthetic flight log from the model")
    _add_scenario_args(p)
    p.add_argument("--kind", choices=["horizontal", "vertical"], default="horizontal")
    p.add_argument("--fixed", type=float, default=50.0,
                   help="H for a horizontal sweep, R for a vertical one (m)")
    p.add_argument("--start", type=float, default=1.0)
    p.add_argument("--stop", type=float, default=2700.0)
    p.add_argument("--step", type=float, default=1.0)
    p.add_argument("--sf", type=int, default=12)
    p.add_argument("--noise-sd", type=float, default=0.0, metavar="DB")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--snr-db", type=float, default=20.0)
    _add_out(p, plot=False)
    return parser


def _out_dir(args):
    d = Path(args.out_dir or os.environ.get(OUT_DIR_ENV) or ".")
    d.mkdir(parents=True, exist_ok=True)
    return d


def _scenario(args, out):
    overrides = {_SCENARIO_FLAGS[k]: getattr(args, k) for k in _SCENARIO_FLAGS
                 if getattr(args, k, None) is not None}
    if args.scenario:
        s = load_scenario(args.scenario, **overrides)
    else:
        s = scenario_from_dict(overrides)
    _write_json(out / "scenario.json", scenario_to_dict(s))
    return s


def _write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _target(args):
    if args.target_lat is None and args.target_lon is None:
        return None
    if args.target_lat is None or args.target_lon is None:
        raise DomainError("give both --target-lat and --target-lon")
    return (args.target_lat, args.target_lon)


def _write_rows(path, header, rows):
    import csv

    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _f(x):
    return repr(float(x))


def cmd_coverage(args):
    out = _out_dir(args)
    s = _scenario(args, out)
    grid = analysis.coverage_map(
        s, args.sf, analysis.axis(args.r_min, args.r_max, args.r_step),
        analysis.axis(args.h_min, args.h_max, args.h_step), workers=args.workers)
    analysis.write_coverage_csv(grid, out / "coverage.csv")
    analysis.write_pgm(grid, out / "coverage.pgm")
    if args.plot:
        from . import plotting

        plotting.coverage(grid, out / "coverage.png", f"{s.posture}, {s.terrain.label}, SF{args.sf}")


def cmd_range(args):
    out = _out_dir(args)
    s = _scenario(args, out)
    rows = analysis.max_range_curve(
        analysis.axis(args.h_min, args.h_max, args.h_step), args.sf, s,
        r_domain=(args.r_min, args.r_max), coarse_step=args.r_step, workers=args.workers)
    analysis.write_curve_csv(rows, out / "range.csv")
    if args.plot:
        from . import plotting

        plotting.range_curves(rows, out / "range.png", f"{s.posture}, {s.terrain.label}")


def cmd_profile(args):
    out = _out_dir(args)
    s = _scenario(args, out)
    R, H, p = analysis.profile(s, args.kind, args.fixed, args.start, args.stop, args.step)
    single = np.atleast_1d(single_ray_power(R, H, s))
    sens = analysis.sensitivity(args.sf)
    _write_rows(out / "profile.csv", ["R_m", "H_m", "P_R_dbm", "single_ray_dbm", "covered"],
                [[_f(a), _f(b), _f(c), _f(d), int(c >= sens)] for a, b, c, d in zip(R, H, p, single)])
    if args.plot:
        from . import plotting

        x, label = (R, "ground distance R (m)") if args.kind == "horizontal" else (H, "altitude H (m)")
        plotting.profile(x, p, out / "profile.png", label, sens,
                         single if s.multipath else None, logx=args.kind == "horizontal")


def cmd_fringe(args):
    out = _out_dir(args)
    s = _scenario(args, out)
    rows = [[_f(H), _f(analysis.fringe_extent(H, s, args.threshold, (args.r_min, args.r_max)))]
            for H in args.h]
    _write_rows(out / "fringe.csv", ["H_m", "fringe_extent_m"], rows)


def cmd_fresnel(args):
    out = _out_dir(args)
    phi_deg = analysis.axis(args.step_deg, 90.0, args.step_deg)
    rows, curves = [], {}
    for name in args.terrain:
        rho = np.atleast_1d(terrain.fresnel_parallel(np.radians(phi_deg), terrain.get_terrain(name),
                                                     args.frequency))
        curves[name] = rho
        rows += [[_f(a), name, _f(c.real), _f(c.imag), _f(abs(c)), _f(np.degrees(np.angle(c)))]
                 for a, c in zip(phi_deg, rho)]
    _write_rows(out / "fresnel.csv",
                ["phi_deg", "terrain", "re", "im", "magnitude", "phase_deg"], rows)
    if args.plot:
        from . import plotting

        plotting.fresnel(phi_deg, curves, out / "fresnel.png")


def cmd_gain(args):
    out = _out_dir(args)
    rx = antenna.RxPatchParams(args.rx_g_max, args.rx_bw, args.normalize)
    theta_deg = analysis.axis(0.0, 180.0, args.step_deg)
    g = np.atleast_1d(antenna.rx_gain(np.radians(theta_deg), rx))
    with np.errstate(divide="ignore"):
        g_db = 10 * np.log10(g)
    _write_rows(out / "rx_gain.csv", ["theta_deg", "gain_linear", "gain_dbi"],
                [[_f(t), _f(a), _f(b)] for t, a, b in zip(theta_deg, g, g_db)])
    if args.plot:
        from . import plotting

        plotting.rx_pattern(theta_deg, g_db, out / "rx_gain.png")
    if not args.pattern:
        return
    patterns = [antenna.load_pattern(p) for p in args.pattern]
    gmin = np.min(np.stack([p.gain for p in patterns]), axis=0)
    thresholds = np.unique(np.round(np.concatenate(
        [np.arange(np.floor(gmin.min()), np.ceil(gmin.max()) + 0.1, 0.1), np.unique(gmin)]), 9))
    pct = antenna.ccdf_curve(patterns, thresholds)
    _write_rows(out / "ccdf.csv", ["g0_dbi", "ccdf_pct"],
                [[_f(a), _f(b)] for a, b in zip(thresholds, pct)])
    g0 = antenna.equivalent_gain(patterns, args.quantile)
    _write_json(out / "equivalent_gain.json", {
        "patterns": [str(p) for p in args.pattern], "quantile_pct": args.quantile,
        "equivalent_gain_dbi": g0})
    if args.plot:
        from . import plotting

        plotting.ccdf(thresholds, pct, out / "ccdf.png", g0, args.quantile)


def cmd_ingest(args):
    out = _out_dir(args)
    records, rejects = measurements.ingest_log(args.log, _target(args))
    measurements.write_log(records, out / "clean.csv")
    measurements.write_rejects(rejects, out / "rejects.csv")
    _write_json(out / "ingest.json", {"accepted": len(records), "rejected": len(rejects)})


def cmd_calibrate(args):
    out = _out_dir(args)
    records, _ = measurements.ingest_log(args.log, _target(args))
    if not records:
        raise DomainError("log has no valid records")
    if args.seq is None:
        ref = records[0]
    else:
        match = [r for r in records if r.seq == args.seq]
        if not match:
            raise DomainError(f"no packet with seq {args.seq}")
        ref = match[0]
    c0 = measurements.calibrate_c0(ref, args.known_p_r)
    _write_json(out / "calibration.json", {"c0_dbm": c0, "seq": ref.seq, "known_p_r_dbm": args.known_p_r})


def cmd_compare(args):
    out = _out_dir(args)
    s = _scenario(args, out)
    c0 = args.c0
    if args.calibration:
        with open(args.calibration) as fh:
            cal = json.load(fh)
        if "c0_dbm" not in cal:
            raise SchemaError(f"{args.calibration}: missing c0_dbm")
        c0 = cal["c0_dbm"]
    c0 = 0.0 if c0 is None else c0
    records, _ = measurements.ingest_log(args.log, _target(args))
    stats = measurements.compare(records, s, args.sf, c0)
    _write_json(out / "stats.json", {**stats.as_dict(), "c0_dbm": c0})
    if args.plot:
        from . import plotting
        from .propagation import received_power

        recs = [r for r in records if args.sf is None or r.sf == args.sf]
        R = np.array([r.r for r in recs])
        H = np.array([r.h_uav for r in recs])
        vertical = np.ptp(R) < np.ptp(H)
        x = H if vertical else R
        plotting.comparison(
            x, received_power(R, H, s),
            measurements.rss_from_rssi([r.rssi for r in recs], [r.snr_db for r in recs], c0),
            out / "compare.png", "altitude H (m)" if vertical else "ground distance R (m)")


def cmd_synth(args):
    out = _out_dir(args)
    s = _scenario(args, out)
    key = "H" if args.kind == "horizontal" else "R"
    traj = {"kind": args.kind, key: args.fixed, "start": args.start, "stop": args.stop,
            "step": args.step}
    records = measurements.synth_flight(traj, s, args.sf, args.noise_sd, args.seed, args.snr_db)
    measurements.write_log(records, out / "synth.csv")


COMMANDS = {
    "coverage": cmd_coverage, "range": cmd_range, "profile": cmd_profile,
    "fringe": cmd_fringe, "fresnel": cmd_fresnel, "gain": cmd_gain,
    "ingest": cmd_ingest, "calibrate": cmd_calibrate, "compare": cmd_compare,
    "synth": cmd_synth,
}


def run(argv=None):
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except (DomainError, SchemaError, OSError, json.JSONDecodeError) as exc:
        print(f"uavlora {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

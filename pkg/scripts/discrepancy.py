"""Regenerate docs/discrepancy.md: computed headline ranges against the reference figures.

Run from the repository root: ``python scripts/discrepancy.py``.
The acceptance suite rebuilds the table and checks the committed file matches.
"""

from pathlib import Path
import sys

from uavlora.analysis import fringe_extent, max_range
from uavlora.propagation import LinkScenario
from uavlora.terrain import PRESETS

R_DOMAIN = (1.0, 1e5)
FACTOR = 2.5
DOC = Path(__file__).resolve().parents[1] / "docs" / "discrepancy.md"


def headline_rows():
    """(case, computed_m, reference_lo_m, reference_hi_m) for every headline figure."""
    standing = LinkScenario()
    rows = []
    for sf in range(7, 13):
        ref = {7: (3800.0, 3800.0), 12: (6500.0, 6500.0)}.get(sf, (3800.0, 6500.0))
        rows.append((f"standing, dry, H=120 m, SF{sf}",
                     max_range(120.0, sf, standing, R_DOMAIN).last_crossing, *ref))
    lying_wet = LinkScenario(posture="lying", terrain=PRESETS["wet"])
    rows.append(("lying, wet, H=120 m, SF12",
                 max_range(120.0, 12, lying_wet, R_DOMAIN).last_crossing, 9500.0, 9500.0))
    return rows


def context_rows():
    standing = LinkScenario()
    wet = LinkScenario(posture="lying", terrain=PRESETS["wet"])
    dry = LinkScenario(posture="lying", terrain=PRESETS["dry"])
    ratio = (max_range(120.0, 12, wet, R_DOMAIN).last_crossing
             / max_range(120.0, 12, dry, R_DOMAIN).last_crossing)
    return [
        ("standing, dry, H=50 m, SF7 range (m)", max_range(50.0, 7, standing, R_DOMAIN).last_crossing, 2000.0),
        ("standing, dry, H=50 m, SF12 range (m)", max_range(50.0, 12, standing, R_DOMAIN).last_crossing, 3000.0),
        ("lying wet/dry range ratio, H=120 m, SF12", ratio, 1.21),
        ("fringe extent, standing, dry, H=15 m, 3 dB (m)", fringe_extent(15.0, standing), 100.0),
    ]


def band_ok(computed, lo, hi):
    return lo / FACTOR <= computed <= hi * FACTOR


def render():
    out = [
        "# Headline ranges: computed versus reference",
        "",
        "Generated by `python scripts/discrepancy.py` with the default scenario",
        "parameters, ranges searched over R in [1, 100000] m. A computed value passes",
        f"when it lies within a factor of {FACTOR} of its reference (for a span, of",
        "the span end points).",
        "",
        "| case | computed (m) | reference (m) | computed / reference | within band |",
        "|---|---:|---:|---:|:---:|",
    ]
    for case, got, lo, hi in headline_rows():
        ref = f"{lo:.0f}" if lo == hi else f"{lo:.0f} to {hi:.0f}"
        ratio = f"{got / lo:.3f}" if lo == hi else f"{got / hi:.3f} to {got / lo:.3f}"
        out.append(f"| {case} | {got:.1f} | {ref} | {ratio} | {'yes' if band_ok(got, lo, hi) else 'no'} |")
    out += [
        "",
        "## Related figures",
        "",
        "| quantity | computed | reference | computed / reference |",
        "|---|---:|---:|---:|",
    ]
    for case, got, ref in context_rows():
        out.append(f"| {case} | {got:.3f} | {ref:g} | {got / ref:.3f} |")
    out += [
        "",
        "## Reading the table",
        "",
        "At these distances received power decays at 40 dB per decade of R. For the",
        "standing user the two-ray factor past the last fade adds 20 dB per decade to",
        "free-space loss; for the lying user the Rx gain toward a near-horizon",
        "transmitter falls as sin(elevation) and does the same. Each factor of 2 in",
        "range therefore costs about 12 dB. Bringing the computed ranges onto the",
        "reference figures takes an extra 15 to 22 dB of loss in every case. The model",
        "inputs (gains, polarization loss, sensitivities) are the published defaults, so",
        "the gap points at losses that the reference figures include and the stated",
        "parameters do not, such as body shadowing, the Rx pattern orientation, cabling",
        "or a fade margin. The within-range structure (SF ordering, wet above dry,",
        "fringe growth with altitude) is reproduced.",
        "",
    ]
    return "\n".join(out)


def main(argv=None):
    text = render()
    if argv and argv[0] == "--check":
        return 0 if DOC.read_text() == text else 1
    DOC.parent.mkdir(exist_ok=True)
    DOC.write_text(text)
    print(text)
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))

import math

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest

from uavlora import antenna
from uavlora.antenna import GainPattern, RxPatchParams
from uavlora.errors import DomainError, SchemaError


# --- receive patch -----------------------------------------------------------

def test_rx_gain_zero_in_patch_plane():
    assert antenna.rx_gain(0.0) == 0.0


def test_rx_gain_on_axis_defaults():
    # a_z = 10**0.32 / 2 = 1.044648, a_xi = a_z * cot(50 deg) = 0.876564
    p = RxPatchParams()
    assert abs(p.a_z - 1.044648) < 1e-6
    assert abs(p.a_xi - 0.876564) < 1e-6
    g = antenna.rx_gain(math.pi / 2)
    assert abs(g - 2.4898) < 1e-3
    assert abs(10 * math.log10(g) - 3.962) < 1e-3


def test_rx_gain_bw90_peak_is_twice_a_z():
    p = RxPatchParams(bw_deg=90.0)
    assert math.isclose(antenna.rx_gain(math.pi / 2, p), 2 * p.a_z, rel_tol=1e-12)


@given(st.floats(0.0, math.pi))
def test_rx_gain_symmetry(theta):
    g = antenna.rx_gain(theta)
    assert g >= 0
    assert math.isclose(g, antenna.rx_gain(math.pi - theta), rel_tol=1e-9, abs_tol=1e-15)


@pytest.mark.parametrize("bw", [40.0, 90.0, 100.0, 150.0])
def test_normalized_peak_equals_nominal(bw):
    p = RxPatchParams(g_max_dbi=3.2, bw_deg=bw, normalize=True)
    th = np.linspace(0, math.pi, 200_001)
    peak = antenna.rx_gain(th, p).max()
    assert abs(10 * math.log10(peak) - 3.2) < 1e-6
    raw = antenna.rx_gain(th, RxPatchParams(3.2, bw)).max()
    assert math.isclose(raw, p.peak(), rel_tol=1e-8)


@pytest.mark.parametrize("kw", [dict(bw_deg=0.0), dict(bw_deg=180.0), dict(g_max_dbi=math.inf)])
def test_rx_params_validation(kw):
    with pytest.raises(DomainError):
        RxPatchParams(**kw)


def test_rx_gain_domain():
    with pytest.raises(DomainError):
        antenna.rx_gain(-0.1)


# --- polarization ------------------------------------------------------------

RHCP = np.array([1, 1j]) / math.sqrt(2)


@pytest.mark.parametrize("t, r, expected", [
    (RHCP, RHCP, 1.0),
    (np.array([1, 0]), RHCP, 0.5),
    (RHCP, np.array([1, -1j]) / math.sqrt(2), 0.0),
])
def test_plf_examples(t, r, expected):
    assert abs(antenna.plf(t, r) - expected) < 1e-12


def test_plf_linear_on_circular_is_minus_3db():
    assert abs(10 * math.log10(antenna.plf([1, 0], antenna.CIRCULAR_RX)) + 3.0103) < 1e-4


def test_plf_rejects_non_unit():
    with pytest.raises(DomainError):
        antenna.plf([1, 1], RHCP)


angles = st.floats(0, 2 * math.pi)


@given(angles, angles, angles, angles, angles)
def test_plf_properties(a, b, c, d, phase):
    t = antenna.polarization_vector(math.cos(a), math.sin(a) * complex(math.cos(b), math.sin(b)))
    r = antenna.polarization_vector(math.cos(c), math.sin(c) * complex(math.cos(d), math.sin(d)))
    x = antenna.plf(t, r)
    assert 0.0 <= x <= 1.0
    assert abs(antenna.plf(t, t) - 1.0) < 1e-12
    rot = complex(math.cos(phase), math.sin(phase))
    assert abs(antenna.plf(t * rot, r) - x) < 1e-12
    assert abs(antenna.plf(t, r * rot) - x) < 1e-12


# --- power transfer ----------------------------------------------------------

def test_power_transfer_examples():
    assert antenna.power_transfer(0.0) == 0.0
    assert abs(antenna.power_transfer(10 ** (-10 / 20)) - (-0.458)) < 1e-3
    # Gamma solving 10 log10(1 - G^2) = -0.01 dB
    assert abs(antenna.power_transfer(0.04799) - (-0.01)) < 1e-4


@pytest.mark.parametrize("g", [1.0, 1.5, -0.1])
def test_power_transfer_domain(g):
    with pytest.raises(DomainError):
        antenna.power_transfer(g)


def test_power_transfer_monotone():
    g = np.linspace(0, 0.999999, 1000)
    v = [antenna.power_transfer(x) for x in g]
    assert np.all(np.diff(v) < 0)
    assert antenna.power_transfer(1 - 1e-12) < -100


# --- Tx equivalent gain table ------------------------------------------------

@pytest.mark.parametrize("key, val", [
    (("standing", "dry"), -4.1), (("standing", "wet"), -4.1),
    (("lying", "wet"), -4.5), (("lying", "dry"), -6.5),
])
def test_tx_table(key, val):
    assert antenna.tx_equivalent_gain(*key) == val


# --- gain patterns and CCDF --------------------------------------------------

def grid(n_theta=31, n_phi=24):
    return np.linspace(0, math.pi / 2, n_theta), np.arange(n_phi) * 2 * math.pi / n_phi


def uniform(value, **kw):
    th, ph = grid(**kw)
    return GainPattern(th, ph, np.full((len(th), len(ph)), float(value)))


def test_ccdf_uniform():
    p = uniform(5.0)
    assert antenna.ccdf([p], 0.0) == 100.0
    assert antenna.ccdf([p], 6.0) == 0.0


def test_ccdf_uses_pointwise_minimum():
    assert antenna.ccdf([uniform(10.0), uniform(0.0)], 5.0) == 0.0


def test_weights_cover_half_space():
    th, ph = grid(91, 360)
    p = uniform(0.0, n_theta=91, n_phi=360)
    assert math.isclose(p.weights.sum(), 2 * math.pi, rel_tol=1e-12)


def _brute_ccdf(patterns, g0):
    # independent per-cell loop with midpoint-rule sin(theta) weights
    th, ph = patterns[0].theta, patterns[0].phi
    dt, dp = th[1] - th[0], 2 * math.pi / len(ph)
    num = den = 0.0
    for i, t in enumerate(th):
        lo, hi = max(t - dt / 2, 0.0), min(t + dt / 2, math.pi / 2)
        w = math.sin((lo + hi) / 2) * (hi - lo) * dp
        for j in range(len(ph)):
            den += w
            if min(p.gain[i, j] for p in patterns) > g0:
                num += w
    return 100 * num / den


def random_patterns(seed, k=3, n_theta=46, n_phi=72):
    rng = np.random.default_rng(seed)
    th, ph = grid(n_theta, n_phi)
    return [GainPattern(th, ph, rng.normal(-3, 4, (len(th), len(ph)))) for _ in range(k)]


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_ccdf_matches_brute_force(seed):
    pats = random_patterns(seed)
    for g0 in (-10.0, -6.0, -3.0, 0.0, 4.0):
        assert abs(antenna.ccdf(pats, g0) - _brute_ccdf(pats, g0)) < 0.1


def test_ccdf_matches_analytic_cap_area():
    # gain above threshold only inside a polar cap of half-angle 40 deg:
    # exact share of the half-space is 1 - cos(40 deg)
    th, ph = grid(1801, 8)
    cap = math.radians(40)
    gain = np.where(th[:, None] < cap, 10.0, -10.0) * np.ones((1, len(ph)))
    p = GainPattern(th, ph, gain)
    assert abs(antenna.ccdf([p], 0.0) - 100 * (1 - math.cos(cap))) < 0.1


def test_ccdf_curve_matches_pointwise():
    pats = random_patterns(5)
    thr = np.linspace(-15, 10, 41)
    np.testing.assert_allclose(antenna.ccdf_curve(pats, thr), [antenna.ccdf(pats, t) for t in thr])


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_ccdf_monotone_properties(seed):
    pats = random_patterns(seed, k=3, n_theta=10, n_phi=12)
    thr = np.linspace(-30, 20, 60)
    c = antenna.ccdf_curve(pats, thr)
    assert np.all(np.diff(c) <= 1e-12)
    assert antenna.ccdf(pats, -math.inf) == 100.0
    fewer = antenna.ccdf_curve(pats[:2], thr)
    assert np.all(c <= fewer + 1e-12)


# --- equivalent gain ---------------------------------------------------------

@pytest.mark.parametrize("q", [1.0, 25.0, 50.0, 75.0, 99.0])
def test_equivalent_gain_uniform_identity(q):
    assert antenna.equivalent_gain([uniform(5.0)], q) == 5.0
    assert antenna.equivalent_gain([uniform(-4.5)], q) == -4.5


def test_equivalent_gain_two_level():
    # 80% of the half-space at -2 dBi and 20% at +8 dBi (split in phi)
    th, ph = grid(31, 20)
    gain = np.full((len(th), len(ph)), -2.0)
    gain[:, 16:] = 8.0
    p = GainPattern(th, ph, gain)
    assert math.isclose(antenna.ccdf([p], -2.0), 20.0)
    assert antenna.equivalent_gain([p], 75.0) == -2.0
    assert antenna.equivalent_gain([p], 15.0) == 8.0


def _brute_quantile(patterns, q):
    # sup of g0 over sampled values with ccdf(g0 - 0) >= q, by exhaustive search
    gmin = np.min([p.gain for p in patterns], axis=0)
    w = patterns[0].weights
    best = -math.inf
    for v in np.unique(gmin):
        share = 100 * w[gmin >= v].sum() / w.sum()
        if share >= q - 1e-9:
            best = max(best, v)
    return best


@pytest.mark.parametrize("seed", [3, 4])
def test_equivalent_gain_brute_force(seed):
    pats = random_patterns(seed, n_theta=16, n_phi=24)
    for q in (10.0, 50.0, 75.0, 90.0):
        g0 = antenna.equivalent_gain(pats, q)
        assert g0 == _brute_quantile(pats, q)
        assert antenna.ccdf(pats, g0 - 1e-9) >= q


def test_equivalent_gain_errors():
    with pytest.raises(DomainError):
        antenna.equivalent_gain([], 75)
    with pytest.raises(DomainError):
        antenna.equivalent_gain([uniform(1.0)], 100)


def test_mismatched_grids():
    with pytest.raises(SchemaError):
        antenna.ccdf([uniform(1.0), uniform(1.0, n_theta=10)], 0.0)


def test_pattern_validation():
    th, ph = grid()
    with pytest.raises(SchemaError):
        GainPattern(th, ph, np.zeros((3, 3)))
    with pytest.raises(SchemaError):
        GainPattern(np.array([0.0, 0.1, 0.5]), ph, np.zeros((3, len(ph))))
    with pytest.raises(SchemaError):
        GainPattern(th[:1], ph, np.zeros((1, len(ph))))


def test_pattern_csv_round_trip(tmp_path):
    pats = random_patterns(9, k=1, n_theta=10, n_phi=8)
    path = tmp_path / "p.csv"
    antenna.save_pattern(pats[0], path)
    back = antenna.load_pattern(path)
    np.testing.assert_array_equal(back.gain, pats[0].gain)
    np.testing.assert_allclose(back.theta, pats[0].theta, rtol=1e-14)


def test_pattern_csv_schema(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("theta,phi,gain\n0,0,1\n")
    with pytest.raises(SchemaError):
        antenna.load_pattern(bad)
    holes = tmp_path / "holes.csv"
    holes.write_text("theta_deg,phi_deg,gain_dbi\n0,0,1\n0,180,1\n90,0,1\n")
    with pytest.raises(SchemaError):
        antenna.load_pattern(holes)

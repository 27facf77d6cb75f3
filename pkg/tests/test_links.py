import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from aerolink.atmosphere import TurbulenceProfile, beer_lambert
from aerolink.fading import EwParams, NakagamiParams, ew_snr_cdf, nakagami_snr_cdf
from aerolink.links import (
    CrMode,
    ExpWeibull,
    FsoLinkSpec,
    HybridCdf,
    LinkCdf,
    NakagamiErlang,
    RfLinkSpec,
    fso_ew_params,
    fso_link_cdf,
    fso_mean_snr,
    gta_link_cdf,
    gta_mean_snr,
    hybrid_atg_cdf,
    path_loss,
    reference_path_loss,
    to_db,
    to_linear,
)

# mpmath, 40 digits
ZETA_2GHZ = 1757.026542415858
R_DEFAULT = 2507.987240796890
V_DEFAULT = 1.352736071522955e11
GBAR_DEFAULT_DB = 20.68786929095151

EW = EwParams(3.9, 1.7, 0.68)


def test_reference_path_loss_2ghz():
    assert reference_path_loss(2e9) == pytest.approx(ZETA_2GHZ, rel=1e-13)


def test_path_loss_zero_exponent():
    for d in (10.0, 900.0, 4000.0):
        assert path_loss(RfLinkSpec(pl_exponent=0.0, horizontal_m=d)) == pytest.approx(ZETA_2GHZ)


def test_path_loss_default_geometry():
    spec = RfLinkSpec()
    assert spec.distance_m == pytest.approx(R_DEFAULT, rel=1e-14)
    assert path_loss(spec) == pytest.approx(V_DEFAULT, rel=1e-12)


@pytest.mark.parametrize("field, lo, hi", [
    ("horizontal_m", 1000.0, 1001.0),
    ("altitude_m", 100.0, 101.0),
    ("carrier_hz", 2e9, 2.1e9),
    ("pl_exponent", 2.0, 2.1),
])
def test_path_loss_increasing(field, lo, hi):
    a = path_loss(RfLinkSpec(**{field: lo}))
    b = path_loss(RfLinkSpec(**{field: hi}))
    assert b > a


def test_coincident_endpoints_rejected():
    with pytest.raises(ValueError):
        RfLinkSpec(horizontal_m=0.0, altitude_m=0.0)


def test_overlay_identity_budget():
    # P_s = P_n and V(r) = 1: zeta = 1 needs f_c = c / (2 pi)
    spec = RfLinkSpec(tx_power_dbm=-100.0, carrier_hz=299_792_458.0 / (2 * math.pi),
                      pl_exponent=0.0)
    assert gta_mean_snr(spec) == pytest.approx(1.0, rel=1e-14)


def test_underlay_halves_with_zero_db_interference():
    over = gta_mean_snr(RfLinkSpec())
    under = gta_mean_snr(RfLinkSpec(cr_mode="underlay", primary_interference_db=0.0))
    assert under == pytest.approx(over / 2, rel=1e-14)


def test_default_budget_in_db():
    # 32 - (-100) = 132 dB budget minus path loss in dB
    assert to_db(gta_mean_snr(RfLinkSpec())) == pytest.approx(GBAR_DEFAULT_DB, rel=1e-12)
    assert to_db(gta_mean_snr(RfLinkSpec())) == pytest.approx(132.0 - 10 * math.log10(V_DEFAULT), rel=1e-12)


def test_overlay_warns_on_underlay_fields():
    with pytest.warns(UserWarning):
        RfLinkSpec(primary_interference_db=3.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        RfLinkSpec(cr_mode=CrMode.UNDERLAY, primary_interference_db=3.0)


def test_gta_link_cdf_delegates():
    spec = RfLinkSpec()
    link = gta_link_cdf(spec)
    assert link.cdf(0.0) == 0.0
    gbar = gta_mean_snr(spec)
    assert link.cdf(gbar) == nakagami_snr_cdf(gbar, NakagamiParams(4, gbar))


def test_underlay_dominates_overlay():
    over = gta_link_cdf(RfLinkSpec())
    for gain in (1.0, 2.5):
        under = gta_link_cdf(RfLinkSpec(cr_mode="underlay", primary_interference_db=5.0,
                                        interference_channel_gain=gain))
        g = np.geomspace(1e-3, 1e4, 200)
        assert np.all(under.cdf(g) >= over.cdf(g))


@given(st.floats(0.3, 3.0), st.floats(0, 10))
def test_overlay_ge_underlay_mean(gain, ip_db):
    over = gta_mean_snr(RfLinkSpec())
    under = gta_mean_snr(RfLinkSpec(cr_mode="underlay", primary_interference_db=ip_db,
                                    interference_channel_gain=gain))
    if gain * (1 + 10 ** (ip_db / 10)) >= 1:
        assert over >= under


@given(st.floats(-200, 200))
def test_db_round_trip(x_db):
    x = float(to_linear(x_db))
    assert float(to_linear(to_db(x))) == pytest.approx(x, rel=1e-12)


def test_fso_lossless_medium():
    spec = FsoLinkSpec(length_m=3000.0, attenuation=0.0, ew=EW)
    assert fso_mean_snr(spec) == pytest.approx(10 ** 13.2, rel=1e-13)


def test_fso_thin_fog_one_km_penalty():
    spec = FsoLinkSpec(length_m=1000.0, attenuation=4.59, ew=EW)
    assert fso_mean_snr(spec) == pytest.approx(10 ** 13.2 * 10 ** -0.918, rel=1e-12)
    assert fso_mean_snr(FsoLinkSpec(length_m=1000.0, fog="thin", ew=EW)) == fso_mean_snr(spec)


def test_fso_doubling_length():
    one = fso_mean_snr(FsoLinkSpec(length_m=1500.0, attenuation=4.59, ew=EW))
    two = fso_mean_snr(FsoLinkSpec(length_m=3000.0, attenuation=4.59, ew=EW))
    assert two == pytest.approx(one * float(beer_lambert(4.59, 1.5)) ** 2, rel=1e-12)


def test_fso_literal_convention():
    spec = FsoLinkSpec(length_m=2500.0, attenuation=4.5859, ew=EW, attenuation_convention="literal")
    assert fso_mean_snr(spec) == pytest.approx(10 ** 13.2 * math.exp(-2 * 4.5859 * 2.5), rel=1e-12)


def test_fso_kim_source():
    spec = FsoLinkSpec(length_m=1000.0, visibility_km=1.9, ew=EW)
    ref = FsoLinkSpec(length_m=1000.0, attenuation=4.585930050866935, ew=EW)
    assert fso_mean_snr(spec) == pytest.approx(fso_mean_snr(ref), rel=1e-12)


@pytest.mark.parametrize("kwargs", [
    dict(ew=EW),
    dict(fog="thin", attenuation=4.0, ew=EW),
    dict(fog="thin"),
    dict(fog="thin", ew=EW, altitude_m=200.0),
])
def test_fso_exactly_one_source(kwargs):
    with pytest.raises(ValueError):
        FsoLinkSpec(length_m=1000.0, **kwargs)


def test_fso_derived_ew_chain_weakens_with_altitude():
    low = fso_ew_params(FsoLinkSpec(length_m=2500.0, fog="thin", altitude_m=50.0))
    high = fso_ew_params(FsoLinkSpec(length_m=2500.0, fog="thin", altitude_m=400.0))
    g = np.geomspace(1e-4, 0.5, 50)
    assert np.all(ew_snr_cdf(g, high, 1.0) < ew_snr_cdf(g, low, 1.0))


def test_fso_derived_ew_uses_profile():
    calm = TurbulenceProfile(ground_cn2=1e-16)
    strong = fso_ew_params(FsoLinkSpec(length_m=2500.0, fog="thin", altitude_m=50.0))
    weak = fso_ew_params(FsoLinkSpec(length_m=2500.0, fog="thin", altitude_m=50.0, turbulence=calm))
    assert weak != strong


def test_fso_link_cdf_family():
    link = fso_link_cdf(FsoLinkSpec(length_m=1000.0, attenuation=0.0, ew=EwParams(2.0, 2.0, 1.0)))
    assert link.cdf(0.0) == 0.0
    assert link.cdf(link.mean_snr) == pytest.approx(0.39957640089372805, rel=1e-14)
    weib = fso_link_cdf(FsoLinkSpec(length_m=1000.0, attenuation=0.0, ew=EwParams(1.0, 2.0, 1.0)))
    assert weib.cdf(weib.mean_snr) == pytest.approx(1 - math.exp(-1), rel=1e-14)


@pytest.mark.parametrize("link", [
    LinkCdf(117.0, NakagamiErlang(4)),
    LinkCdf(117.0, ExpWeibull(EW)),
])
def test_link_cdf_shape(link):
    g = np.concatenate([[0.0], np.geomspace(1e-3, 1e5, 200)])
    f = link.cdf(g)
    assert f[0] == 0.0 and np.all(np.diff(f) >= 0)
    assert link.cdf(1e3 * link.mean_snr) > 1 - 1e-6


def test_link_cdf_rejects_bad_mean():
    with pytest.raises(ValueError):
        LinkCdf(0.0, NakagamiErlang(4))


def test_hybrid_product_rule():
    arm = LinkCdf(1.0, ExpWeibull(EwParams(1.0, 2.0, 1.0)))
    g_th = -math.log(0.9)  # F(g_th) = 0.1
    hybrid = HybridCdf(arm, arm)
    assert arm.cdf(g_th) == pytest.approx(0.1)
    assert hybrid.cdf(g_th) == pytest.approx(0.01)


def test_hybrid_perfect_backup():
    fso = FsoLinkSpec(length_m=2500.0, attenuation=4.59, ew=EW)
    strong_rf = RfLinkSpec(tx_power_dbm=300.0)
    assert hybrid_atg_cdf(fso, strong_rf).cdf(2.0) < 1e-100


def test_hybrid_below_both_arms():
    fso = FsoLinkSpec(length_m=3000.0, attenuation=4.5859, attenuation_convention="literal", ew=EW)
    hybrid = hybrid_atg_cdf(fso, RfLinkSpec())
    g = np.geomspace(1e-2, 1e4, 100)
    assert np.all(hybrid.cdf(g) <= np.minimum(hybrid.fso.cdf(g), hybrid.rf.cdf(g)))
    f = hybrid.cdf(np.concatenate([[0.0], g]))
    assert f[0] == 0.0 and np.all(np.diff(f) >= 0)


def test_hybrid_sampler_is_max_of_arms():
    arm_a = LinkCdf(2.0, NakagamiErlang(2))
    arm_b = LinkCdf(3.0, ExpWeibull(EW))
    u = np.random.default_rng(0).random((10, 3))
    hybrid = HybridCdf(arm_b, arm_a)
    assert hybrid.uniforms_per_draw == 3
    expected = np.maximum(arm_b.from_uniforms(u[:, :1]), arm_a.from_uniforms(u[:, 1:]))
    assert np.array_equal(hybrid.from_uniforms(u), expected)

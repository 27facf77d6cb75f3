import dataclasses
import hashlib
import io
import math
import os

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aerolink.experiments import CSV_COLUMNS, SweepRow, csv_text, emit_csv, read_csv, run_sweep
from aerolink.montecarlo import McConfig
from aerolink.scenario import (
    ConfigError,
    ConfigFile,
    ScenarioConfig,
    SweepSpec,
    apply_overrides,
    dumps,
    load,
    loads,
)

REFERENCE = dict(
    wavelength_nm=1550.0, threshold_db=3.0, nakagami_m=4, horizontal_m=2500.0,
    urn_altitude_m=200.0, haps_altitude_m=19000.0, carrier_hz=2e9, attenuation=4.5859,
    wind_speed_mps=21.0, tx_power_dbm=32.0, noise_power_dbm=-100.0,
)

MC = McConfig(samples=20_000, master_seed=3, batch_size=3000)


def test_defaults_match_reference_parameters():
    s = ScenarioConfig()
    assert {k: getattr(s, k) for k in REFERENCE} == REFERENCE


def test_config_round_trip_defaults():
    cfg = ConfigFile()
    back = loads(dumps(cfg))
    assert back.scenario == cfg.scenario
    assert back.sweep is None and back.montecarlo == {}


@settings(max_examples=60)
@given(
    st.floats(100, 5000), st.floats(10, 1000), st.floats(-5, 20), st.integers(1, 8),
    st.one_of(st.floats(0, 50), st.sampled_from(["thin", "dense", "light"])),
    st.booleans(), st.sampled_from(["plane", "spherical"]),
)
def test_config_round_trip_fields(d, hu, th, m, att, equal, wave):
    s = ScenarioConfig(horizontal_m=d, urn_altitude_m=hu, threshold_db=th, nakagami_m=m,
                       attenuation=att, equal_mean_snr=equal, wave=wave)
    cfg = ConfigFile(s, SweepSpec("horizontal_m", 1.0, 2.0, 3, ("fig2a",), "both"),
                     {"samples": 5000, "master_seed": 9})
    back = loads(dumps(cfg))
    assert back.scenario == s
    assert back.sweep == cfg.sweep and back.montecarlo == cfg.montecarlo


def test_round_trip_with_visibility_and_fixed_ew():
    s = ScenarioConfig(attenuation=None, visibility_km=1.9, ew_alpha=2.0, ew_beta=1.5, ew_eta=0.7)
    assert loads(dumps(ConfigFile(s))).scenario == s


def test_config_file_on_disk(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text(
        "[scenario]\nhorizontal_m = 1800  # metres\nattenuation = thin\n"
        "[sweep]\nvariable = urn_altitude_m\nstart = 50\nstop = 400\nsteps = 8\n"
        "configs = fig2b, fig2d\n[montecarlo]\nsamples = 100000\nmaster_seed = 0x10\n")
    cfg = load(path)
    assert cfg.scenario.horizontal_m == 1800.0 and cfg.scenario.attenuation == "thin"
    assert cfg.sweep.configs == ("fig2b", "fig2d") and cfg.sweep.method == "analytical"
    assert cfg.montecarlo == {"samples": 100000, "master_seed": 16}


@pytest.mark.parametrize("text", [
    "[scenario]\nhorizontl_m = 10\n",
    "[scenario]\nnakagami_m = 2.5\n",
    "[scenario]\nattenuation = haze\n",
    "[scenario]\nequal_mean_snr = maybe\n",
    "[weather]\nfog = 1\n",
    "[montecarlo]\nseed = 1\n",
    "[sweep]\nvariable = horizontal_m\nstart = 1\nstop = 2\n",
    "[sweep]\nvariable = horizontal_m\nstart = 3\nstop = 2\nsteps = 4\n",
    "[sweep]\nvariable = horizontal_m\nstart = 1\nstop = 2\nsteps = 4\nconfigs = fig2e\n",
    "not an ini file",
])
def test_config_errors(text):
    with pytest.raises(ConfigError):
        loads(text)


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError, match="nope.ini"):
        load(tmp_path / "nope.ini")


def test_overrides():
    s = apply_overrides(ScenarioConfig(), ["horizontal_m=1200", "wave = plane", "ew_alpha=none"])
    assert s.horizontal_m == 1200.0 and s.wave == "plane"
    for bad in (["horizontal_m"], ["bogus=1"], ["tx_power_dbm=loud"]):
        with pytest.raises(ConfigError):
            apply_overrides(ScenarioConfig(), bad)


@pytest.mark.parametrize("kwargs", [
    dict(variable="altitude", start=0, stop=1, steps=2),
    dict(variable="horizontal_m", start=1, stop=1, steps=2),
    dict(variable="horizontal_m", start=0, stop=1, steps=1),
    dict(variable="horizontal_m", start=0, stop=1, steps=2, configs=()),
    dict(variable="horizontal_m", start=0, stop=1, steps=2, method="exact"),
])
def test_sweep_spec_validation(kwargs):
    with pytest.raises(ConfigError):
        SweepSpec(**kwargs)


def test_sweep_values_hit_endpoints():
    v = SweepSpec("horizontal_m", 1500.0, 3500.0, 21).values()
    assert len(v) == 21 and v[0] == 1500.0 and v[-1] == 3500.0 and v[10] == 2500.0


@pytest.mark.parametrize("configs, method, per_point", [
    (("fig2a",), "analytical", 1),
    (("fig2a", "fig2b", "fig2c"), "montecarlo", 3),
    (("fig2b", "fig2d"), "both", 4),
])
def test_two_step_row_count(configs, method, per_point):
    rows = run_sweep(ScenarioConfig(), SweepSpec("horizontal_m", 2000.0, 3000.0, 2, configs, method),
                     MC)
    assert len(rows) == 2 * per_point


def test_row_order_and_columns():
    sweep = SweepSpec("threshold_db", 0.0, 6.0, 3, ("fig2d", "fig2a"), "both")
    rows = run_sweep(ScenarioConfig(), sweep, MC)
    keys = [(r.value, r.config, r.method) for r in rows]
    expected = [(v, c, m) for v in (0.0, 3.0, 6.0) for c in ("fig2d", "fig2a")
                for m in ("analytical", "montecarlo")]
    assert keys == expected
    for r in rows:
        assert r.variable == "threshold_db" and 0.0 <= r.p_out <= 1.0
        if r.method == "analytical":
            assert r.ci95 == 0.0 and r.samples == 0
        else:
            assert r.ci95 > 0.0 or r.p_out in (0.0, 1.0)
            assert r.samples == MC.samples


def test_sweep_workers_do_not_change_rows():
    sweep = SweepSpec("horizontal_m", 2800.0, 3400.0, 4, ("fig2a", "fig2b", "fig2c", "fig2d"),
                      "both")
    assert run_sweep(ScenarioConfig(), sweep, MC, workers=1) == \
        run_sweep(ScenarioConfig(), sweep, MC, workers=os.cpu_count() or 4)


def test_sweep_rejects_invalid_range_before_work():
    # urn altitude above the HAPS is invalid at the top of the range
    with pytest.raises(ConfigError):
        run_sweep(ScenarioConfig(), SweepSpec("urn_altitude_m", 100.0, 25000.0, 3))


def test_interference_sweep_moves_only_underlay():
    rows = run_sweep(ScenarioConfig(), SweepSpec("interference_db", 0.0, 5.0, 2))
    by = {(r.config, r.value): r.p_out for r in rows}
    assert by["fig2a", 0.0] == by["fig2a", 5.0]
    assert by["fig2d", 5.0] >= by["fig2d", 0.0]


def _rows():
    return run_sweep(ScenarioConfig(), SweepSpec("horizontal_m", 2500.0, 3300.0, 3, ("fig2b",),
                                                 "both"), MC)


def test_csv_layout():
    text = csv_text(_rows())
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    fields = lines[1].split(",")
    assert fields[0] == "horizontal_m" and fields[1] == "2500.0" and fields[3] == "analytical"
    mantissa = fields[4].split("e")[0].replace(".", "").lstrip("-")
    assert len(mantissa) == 9
    assert text.endswith("\n") and "\r" not in text


def test_csv_parse_back(tmp_path):
    row = SweepRow("horizontal_m", 2500.0, "fig2b", "montecarlo", 1.234567891e-5, 2.5e-7, 1000000)
    path = tmp_path / "one.csv"
    emit_csv([row], path)
    (back,) = read_csv(path)
    assert back.variable == row.variable and back.value == row.value and back.config == row.config
    assert back.samples == row.samples
    assert math.isclose(back.p_out, row.p_out, rel_tol=5e-9)
    assert math.isclose(back.ci95, row.ci95, rel_tol=5e-9)


def test_csv_digest_stable(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    emit_csv(_rows(), a)
    emit_csv(_rows(), b)
    assert hashlib.sha256(a.read_bytes()).digest() == hashlib.sha256(b.read_bytes()).digest()


def test_emit_to_stream_returns_bytes():
    rows = _rows()
    buf = io.BytesIO()
    data = emit_csv(rows, buf)
    assert buf.getvalue() == data == csv_text(rows).encode()


def test_empty_table_creates_no_file(tmp_path):
    path = tmp_path / "empty.csv"
    with pytest.raises(ValueError):
        emit_csv([], path)
    assert not path.exists() and list(tmp_path.iterdir()) == []


def test_unwritable_destination_names_path(tmp_path):
    path = tmp_path / "missing" / "out.csv"
    with pytest.raises(OSError, match="missing"):
        emit_csv(_rows(), path)


def test_csv_rejects_foreign_header(tmp_path):
    path = tmp_path / "x.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError):
        read_csv(path)


def test_scenario_validation():
    for bad in (dict(nakagami_m=0), dict(urn_altitude_m=20000.0), dict(attenuation=None),
                dict(visibility_km=2.0), dict(wave="cylindrical"), dict(ew_alpha=1.0),
                dict(carrier_hz=-1.0), dict(parallel_branches=0)):
        with pytest.raises(ConfigError):
            dataclasses.replace(ScenarioConfig(), **bad)

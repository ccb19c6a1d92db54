import json
import random
import xml.etree.ElementTree as ET
from dataclasses import replace

import numpy as np
import pytest

from oemsim.errors import ConfigError
from oemsim.harness.configio import (
    baseline_from_document,
    config_to_document,
    load_document,
    parse_quantity,
    sweep_from_document,
    system_config_from_document,
)
from oemsim.harness.output import csv_text, emit_csv, emit_metadata, emit_svg_plot, read_csv, svg_text
from oemsim.harness.scenarios import (
    DEFAULT_BASELINE,
    Axis,
    Observable,
    scenario_custom,
    scenario_fig2,
    scenario_fig3,
    scenario_fig4,
    scenario_fig5,
)
from oemsim.harness.sweep import SweepResult, evaluate_point, run_sweep

WM = DEFAULT_BASELINE.omega_m


# --- scenarios -------------------------------------------------------------

def test_fig2_structure():
    sc = scenario_fig2(2)
    assert sc.base_config.n_microwave == 4
    assert [m.sign for m in sc.base_config.microwaves] == [1, -1, 1, -1]
    assert {m.omega_w for m in sc.base_config.microwaves} == {DEFAULT_BASELINE.omega_w}
    assert sc.base_config.mech.temperature == 15e-3
    assert [o.label for o in sc.observables] == ["w1+/w2-", "w1+/w3+", "w2-/w4-"]
    assert sc.violations() == []
    assert scenario_fig2(10).base_config.dimension == 44
    with pytest.raises(ValueError):
        scenario_fig2(0)


def test_config_hash_is_deterministic():
    assert scenario_fig2(2).config_hash() == scenario_fig2(2).config_hash()
    assert len(scenario_fig2(2).config_hash()) == 64


@pytest.mark.parametrize(
    "change",
    [
        lambda sc: replace(sc, base_config=replace(sc.base_config, mech=replace(sc.base_config.mech, mass=2e-11))),
        lambda sc: replace(sc, base_config=replace(sc.base_config, mech=replace(sc.base_config.mech, temperature=16e-3))),
        lambda sc: replace(sc, base_config=replace(
            sc.base_config, optical=replace(sc.base_config.optical, drive_power=31e-3))),
        lambda sc: replace(sc, base_config=replace(
            sc.base_config,
            microwaves=(replace(sc.base_config.microwaves[0], mu=0.009),) + sc.base_config.microwaves[1:])),
        lambda sc: replace(sc, axis=replace(sc.axis, points=51)),
        lambda sc: replace(sc, observables=sc.observables[:1]),
    ],
)
def test_config_hash_changes_with_any_parameter(change):
    sc = scenario_fig2(2)
    assert change(sc).config_hash() != sc.config_hash()


def test_fig3_structure():
    sc = scenario_fig3()
    ghz = [m.omega_w / (2 * np.pi * 1e9) for m in sc.base_config.microwaves]
    assert np.allclose(ghz, [9, 9, 37.5, 37.5, 60, 60])
    labels = [o.label for o in sc.observables]
    for lab in ["9+/9-", "37.5+/37.5-", "60+/60-", "9+/37.5-", "9-/37.5+", "37.5+/60-", "37.5-/60+", "9+/60-",
                "9-/60+", "9+/37.5+"]:
        assert lab in labels
    ob = {o.label: o for o in sc.observables}
    assert (ob["9-/37.5+"].a, ob["9-/37.5+"].b) == (2, 3)
    assert (ob["37.5-/60+"].a, ob["37.5-/60+"].b) == (4, 5)


def test_fig4_models():
    sc = scenario_fig4()
    assert sc.axis.spacing == "log" and sc.axis.start == 1e-3 and sc.axis.stop == 250e-3
    assert all(abs(m.delta_w) == pytest.approx(0.1 * WM) for m in sc.base_config.microwaves)
    assert sc.base_config.microwaves[0].delta_w < 0
    ten = scenario_fig4("fig2", 10)
    assert ten.base_config.n_microwave == 20
    values = sc.axis.values()
    assert values[0] == pytest.approx(1e-3) and values[-1] == pytest.approx(250e-3)
    assert np.all(np.diff(np.log(values)) == pytest.approx(np.log(250) / 100))
    with pytest.raises(ValueError):
        scenario_fig4("fig9")


def test_fig5_detuning_coefficient_convention():
    sc = scenario_fig5()
    cfg = sc.config_at(0.3)
    dets = [m.delta_w / WM for m in cfg.microwaves]
    assert dets == pytest.approx([0.3, -0.3, 0.6, -0.6])
    assert [m.delta_w for m in sc.config_at(0.0).microwaves] == [0.0] * 4


def test_axis_grid_is_symmetric_and_contains_zero():
    v = Axis("delta_w", -1.0, 1.0, 101).values()
    assert len(v) == 101 and v[50] == 0.0
    assert np.array_equal(v, -v[::-1])


def test_axis_violations():
    assert Axis("delta_w", -1, 1, 1).violations()
    assert Axis("delta_w", -1, float("inf")).violations()
    assert Axis("nonsense", 0, 1).violations()
    assert Axis("temperature", 0.0, 1.0, spacing="log").violations()
    sc = scenario_custom(DEFAULT_BASELINE.system([DEFAULT_BASELINE.omega_w]), Axis("delta_w", -1, 1, 3),
                         [Observable("bad", 1, 5)])
    assert any("outside" in v for v in sc.violations())
    with pytest.raises(ConfigError):
        run_sweep(sc)


def test_baseline_is_immutable():
    with pytest.raises(AttributeError):
        DEFAULT_BASELINE.mass = 1.0


# --- sweep engine ---------------------------------------------------------

def test_zero_microwave_coupling_gives_zero_entanglement():
    cfg = DEFAULT_BASELINE.system([DEFAULT_BASELINE.omega_w])
    cfg = replace(cfg, microwaves=tuple(replace(m, drive_power=0.0) for m in cfg.microwaves))
    res = run_sweep(scenario_custom(cfg, Axis("delta_w", 0.2, 0.8, 2)))
    assert len(res.rows) == 2
    assert all(r.stable for r in res.rows)
    assert res.column("w1+/w2-") == [0.0, 0.0]


def test_order_independence():
    sc = scenario_fig2(2, points=11)
    values = list(sc.axis.values())
    forward = [evaluate_point(sc, v) for v in values]
    shuffled = values[:]
    random.Random(5).shuffle(shuffled)
    rows = sorted((evaluate_point(sc, v) for v in shuffled), key=lambda r: r.axis_value)
    assert rows == forward


def test_parallel_sweep_matches_serial():
    sc = scenario_fig5(points=9)
    assert csv_text(run_sweep(sc, workers=2)) == csv_text(run_sweep(sc))


def test_stability_gating():
    # Blue-detuned optical drive destabilises the mechanics.
    sc = scenario_custom(DEFAULT_BASELINE.system([DEFAULT_BASELINE.omega_w]), Axis("delta_c", -1.0, 1.0, 5))
    res = run_sweep(sc)
    unstable = [r for r in res.rows if not r.stable]
    assert unstable and any(r.stable for r in res.rows)
    for r in res.rows:
        if not r.stable:
            assert all(e is None for e in r.entanglement)
            assert r.error is not None or r.spectral_abscissa >= 0
        else:
            assert r.spectral_abscissa < 0 and r.relative_residual <= 1e-9
    lines = csv_text(res).splitlines()[1:]
    assert sum("unstable" in ln for ln in lines) == len(unstable)


def test_point_failures_are_recorded_not_raised():
    sc = scenario_custom(DEFAULT_BASELINE.system([DEFAULT_BASELINE.omega_w]), Axis("temperature", -1.0, 1.0, 3))
    res = run_sweep(sc)
    assert len(res.rows) == 3
    bad = res.rows[0]
    assert bad.error and "temperature" in bad.error and bad.entanglement == (None,)
    assert res.rows[2].error is None
    assert "error" in csv_text(res).splitlines()[1]


def test_rows_sorted_even_for_descending_axis():
    sc = scenario_custom(DEFAULT_BASELINE.system([DEFAULT_BASELINE.omega_w]), Axis("delta_w", 0.8, 0.2, 4))
    assert run_sweep(sc).axis_values == sorted(run_sweep(sc).axis_values)


def test_fig5_plus_minus_dc_relabeling():
    res = run_sweep(scenario_fig5(points=21))
    for label in res.labels:
        col = res.column(label)
        assert all(e is not None for e in col)
    within = np.array(res.column("w1+/w2-"))
    assert np.max(np.abs(within - within[::-1])) <= 1e-9


def test_fig3_mirror_relation():
    res = run_sweep(scenario_fig3(points=21))
    a = np.array(res.column("9+/37.5-"))
    b = np.array(res.column("9-/37.5+"))
    assert np.max(np.abs(a - b[::-1])) <= 1e-9


def test_keep_covariance():
    res = run_sweep(scenario_fig2(2, points=3), keep_covariance=True)
    for r in res.rows:
        assert r.covariance.shape == (12, 12)
    assert run_sweep(scenario_fig2(2, points=3)).rows[0].covariance is None


# --- output ---------------------------------------------------------------

def small_result():
    return run_sweep(scenario_fig2(2, points=7))


def test_empty_result_gives_header_only():
    empty = SweepResult("custom", "delta_w", "omega_m", ("w1+/w2-",))
    assert csv_text(empty) == "axis,w1+/w2-,spectral_abscissa,stable\n"


def test_csv_schema():
    res = small_result()
    lines = csv_text(res).splitlines()
    header = lines[0].split(",")
    assert header == ["axis", *res.labels, "spectral_abscissa", "stable"]
    assert len(lines) == 8
    assert all(len(ln.split(",")) == len(header) for ln in lines)


def test_csv_round_trip(tmp_path):
    res = small_result()
    path = emit_csv(res, tmp_path / "out.csv")
    header, rows = read_csv(path)
    assert header[1:-2] == list(res.labels)
    for parsed, row in zip(rows, res.rows):
        assert parsed["axis"] == row.axis_value
        assert parsed["spectral_abscissa"] == row.spectral_abscissa
        assert parsed["stable"] == row.stable
        for label, e in zip(res.labels, row.entanglement):
            assert parsed[label] == e


def test_csv_is_byte_identical_across_runs():
    assert csv_text(small_result()) == csv_text(small_result())


def test_metadata(tmp_path):
    res = small_result()
    meta = json.loads(emit_metadata(res, tmp_path / "m.json").read_text())
    assert meta["config_hash"] == scenario_fig2(2, points=7).config_hash()
    assert meta["constants_version"] == res.constants_version
    assert meta["points"] == 7 and meta["errors"] == {}


def test_svg_is_well_formed(tmp_path):
    res = small_result()
    path = emit_svg_plot(res, tmp_path / "plot.svg")
    root = ET.parse(path).getroot()
    ns = "{http://www.w3.org/2000/svg}"
    assert len(root.findall(f"{ns}polyline")) >= len(res.labels) - 0
    text = " ".join(t.text or "" for t in root.iter(f"{ns}text"))
    assert "delta_w" in text and "E_N" in text
    assert all(lab in text for lab in res.labels)


def test_svg_log_axis_for_temperature():
    res = run_sweep(scenario_fig4(points=5))
    assert "temperature [K]" in svg_text(res)


def test_write_errors_carry_path(tmp_path):
    target = tmp_path / "missing" / "out.csv"
    with pytest.raises(OSError, match="missing"):
        emit_csv(small_result(), target)


# --- config documents ------------------------------------------------------

@pytest.mark.parametrize(
    "value, dim, expected",
    [
        ("10 MHz", "frequency", 2 * np.pi * 1e7),
        ("0.08 wm", "frequency", 0.08 * WM),
        ("30 mW", "power", 0.03),
        ("1550 nm", "length", 1.55e-6),
        ("10 ng", "mass", 1e-11),
        ("15 mK", "temperature", 0.015),
        (0.008, "dimensionless", 0.008),
        ("-0.5 wm", "frequency", -0.5 * WM),
        ("1e3 rad/s", "frequency", 1e3),
    ],
)
def test_parse_quantity(value, dim, expected):
    assert parse_quantity(value, dim, WM) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("value, dim", [("3 parsecs", "length"), ("0.1 wm", "power"), ("abc", "mass"), (True, "mass"),
                                         ([1], "mass"), ("5 mW", "length")])
def test_parse_quantity_rejects(value, dim):
    with pytest.raises(ConfigError):
        parse_quantity(value, dim, WM)


def test_baseline_document_reproduces_defaults():
    doc = {
        "mechanical": {"omega_m": "10 MHz", "quality_factor": 5e4, "mass": "10 ng", "temperature": "15 mK"},
        "optical": {"drive_wavelength": "1550 nm", "kappa_c": "0.08 wm", "drive_power": "30 mW",
                    "cavity_length": "1 mm", "delta_c": "0.5 wm"},
        "microwave_defaults": {"omega_w": "9 GHz", "kappa_w": "0.02 wm", "drive_power": "30 mW", "gap": "100 nm",
                               "mu": 0.008, "delta_w": "0.5 wm"},
    }
    b = baseline_from_document(doc)
    for name in ("omega_m", "mass", "kappa_c", "delta_c", "omega_w", "kappa_w", "gap", "drive_wavelength"):
        assert getattr(b, name) == pytest.approx(getattr(DEFAULT_BASELINE, name), rel=1e-15)
    with pytest.raises(ConfigError, match="unknown field"):
        baseline_from_document({"optical": {"finesse": 3}})


def test_system_document_defaults_and_round_trip(two_pair_config):
    doc = {"microwaves": [{}, {}, {}, {}]}
    cfg = system_config_from_document(doc)
    assert cfg == two_pair_config
    back = system_config_from_document(json.loads(json.dumps(config_to_document(cfg))))
    assert back == cfg


def test_system_document_errors():
    with pytest.raises(ConfigError):
        system_config_from_document({})
    with pytest.raises(ConfigError, match="unknown fields"):
        system_config_from_document({"microwaves": [{"colour": "red"}]})


def test_sweep_document():
    axis, obs = sweep_from_document({"sweep": {"axis": "delta_w", "min": -0.5, "max": 0.5, "points": 11,
                                               "observables": [[1, 2]]}})
    assert axis == Axis("delta_w", -0.5, 0.5, 11)
    assert obs == [Observable("w1/w2", 1, 2)]
    with pytest.raises(ConfigError):
        sweep_from_document({"sweep": {"axis": "delta_w", "points": 1}})
    with pytest.raises(ConfigError):
        sweep_from_document({"sweep": {}})


def test_load_document_errors(tmp_path):
    with pytest.raises(OSError, match="nope.json"):
        load_document(tmp_path / "nope.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError, match="bad.json"):
        load_document(bad)
    arr = tmp_path / "arr.json"
    arr.write_text("[]")
    with pytest.raises(ConfigError):
        load_document(arr)

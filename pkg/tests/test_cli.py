import csv
import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qflmc.cli import dispatch
from qflmc.config import config_from_dict, config_to_dict, dumps_config, parse_config
from qflmc.errors import ConfigurationError
from qflmc.harness import SweepResult, SweepRow
from qflmc.power import digital_power_cap, lmc_noise_cap
from qflmc.report import HEADER, emit_csv, format_csv, read_csv


@pytest.fixture
def write_config(tmp_path):
    def _write(obj, name="cfg.json"):
        path = tmp_path / name
        path.write_text(json.dumps(obj))
        return path

    return _write


def test_empty_config_gives_defaults(write_config):
    cfg = parse_config(write_config({}))
    assert (cfg.model.K, cfg.model.m, cfg.model.n_total) == (20, 5, 1200)
    assert cfg.model.theta_star == (0.418, -0.289, 0.3982, 0.8231, 0.5251)
    assert (cfg.channel.h, cfg.channel.n0) == (0.04, 1.0)
    assert cfg.channel.snr_db == pytest.approx(25.0)
    assert (cfg.ell, cfg.quantizer.a) == (30.0, 0.05)
    assert (cfg.s_total, cfg.s_burnin) == (300, 200)
    assert (cfg.budget.epsilon, cfg.budget.delta) == (5.0, 0.01)


@pytest.mark.parametrize(
    "raw, key",
    [
        ({"s_burnin": 300, "s_total": 300}, "s_burnin"),
        ({"bogus": 1}, "bogus"),
        ({"model": {"dim": 3}}, "model.dim"),
        ({"channel": {"p0": 1.0, "snr_db": 3.0}}, "channel.snr_db"),
        ({"privacy": {"epsilon": -1}}, "epsilon"),
        ({"scheme": "smoke-signals"}, "scheme"),
    ],
)
def test_rejections_name_the_key(write_config, raw, key):
    with pytest.raises(ConfigurationError) as exc:
        parse_config(write_config(raw))
    assert key in str(exc.value)


def test_missing_config(tmp_path):
    with pytest.raises(ConfigurationError):
        parse_config(tmp_path / "nope.json")


configs = st.fixed_dictionaries(
    {
        "scheme": st.sampled_from(["digital", "analog", "digital_no_dp", "analog_no_dp", "centralized_lmc"]),
        "eta": st.one_of(st.none(), st.floats(1e-6, 1.0)),
        "ell": st.floats(0.1, 100.0),
        "s_total": st.integers(2, 1000),
        "replications": st.integers(1, 5000),
        "seed": st.integers(0, 2**64 - 1),
        "mode": st.sampled_from(["paper", "corrected"]),
        "freeze_dataset": st.booleans(),
        "channel": st.fixed_dictionaries({"h": st.floats(0.001, 2.0), "n0": st.floats(0.01, 10.0), "snr_db": st.floats(-10, 60)}),
        "quantizer": st.fixed_dictionaries({"a": st.floats(1e-4, 10.0)}),
        "privacy": st.fixed_dictionaries({"epsilon": st.floats(0.01, 50.0), "delta": st.floats(0.0, 0.99)}),
        "sweep": st.one_of(
            st.none(),
            st.fixed_dictionaries(
                {
                    "axis": st.sampled_from(["snr_db", "epsilon", "a"]),
                    "grid": st.lists(st.floats(0.01, 100), min_size=1, max_size=6, unique=True).map(sorted),
                }
            ),
        ),
    }
)


@settings(max_examples=60, deadline=None)
@given(raw=configs, burn_frac=st.floats(0, 0.99))
def test_config_round_trip(tmp_path_factory, raw, burn_frac):
    raw = dict(raw, s_burnin=int(burn_frac * (raw["s_total"] - 1)))
    cfg = config_from_dict(raw)
    path = tmp_path_factory.mktemp("rt") / "cfg.json"
    path.write_text(dumps_config(cfg))
    again = parse_config(path)
    assert config_to_dict(again) == config_to_dict(cfg)
    assert dumps_config(again) == dumps_config(cfg)


def _result(rows=1):
    return SweepResult(
        "snr_db", 42,
        [SweepRow(10.0 + i, "digital", 0.1 / 3 + i, math.pi * 1e-5, 0.06434283176858165, 200) for i in range(rows)],
    )


def test_csv_one_row(tmp_path):
    path = tmp_path / "out.csv"
    emit_csv(_result(), path)
    data = path.read_bytes()
    lines = data.decode("utf-8").split("\n")
    assert data.endswith(b"\n") and b"\r" not in data
    assert lines[:-1][0] == ",".join(HEADER)
    assert len(lines[:-1]) == 2


def test_csv_byte_identical(tmp_path):
    emit_csv(_result(3), tmp_path / "a.csv")
    emit_csv(_result(3), tmp_path / "b.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def test_csv_full_precision(tmp_path):
    res = _result(3)
    emit_csv(res, tmp_path / "a.csv")
    with open(tmp_path / "a.csv", newline="") as fh:
        parsed = list(csv.reader(fh))[1:]
    for row, rec in zip(res.rows, parsed):
        assert float(rec[1]) == row.sweep_value
        assert float(rec[3]) == row.mean_mse
        assert float(rec[4]) == row.stderr_mse
        assert float(rec[5]) == row.gain_used
        assert "e" in rec[3]
    assert [r["mean_mse"] for r in read_csv(tmp_path / "a.csv")] == [r.mean_mse for r in res.rows]


def test_csv_rejects_empty():
    with pytest.raises(ValueError):
        format_csv(SweepResult("snr_db", 0, []))


def test_csv_io_error_mentions_path(tmp_path):
    with pytest.raises(OSError, match="missing"):
        emit_csv(_result(), tmp_path / "missing" / "x.csv")


def test_cli_solve_gain_dp_inactive(capsys):
    assert dispatch(["solve-gain", "--epsilon", "8"]) == 0
    out = capsys.readouterr()
    expected = min(digital_power_cap(0.04, 10**2.5), lmc_noise_cap(8.28e-3, 1.0))
    fields = dict(tok.split("=") for tok in out.out.split())
    assert float(fields["A"]) == pytest.approx(expected, rel=1e-11)
    assert fields["binding"] in ("power", "lmc-noise")
    manifest = json.loads(out.err.strip().splitlines()[0])
    assert manifest["config"]["privacy"]["epsilon"] == 8.0
    assert manifest["version"]


@pytest.mark.parametrize("scheme", ["digital", "analog"])
def test_cli_dp_check_zero_gain(capsys, scheme):
    assert dispatch(["dp-check", "--gain", "0", "--scheme", scheme, "--n-mc", "2000"]) == 0
    fields = dict(tok.split("=") for tok in capsys.readouterr().out.split())
    assert float(fields["delta_hat"]) == 0.0


def test_cli_usage_errors(capsys):
    assert dispatch(["frobnicate"]) == 2
    assert dispatch(["run", "--no-such-flag"]) == 2
    assert "usage" in capsys.readouterr().err


def test_cli_config_error_exit_code(tmp_path, write_config, capsys):
    path = write_config({"s_total": 10, "s_burnin": 10})
    assert dispatch(["run", "--config", str(path)]) == 1
    assert "s_burnin" in capsys.readouterr().err


def test_cli_run_single_row(tmp_path):
    out = tmp_path / "run.csv"
    assert dispatch(["run", "--scheme", "analog", "--replications", "3", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert len(rows) == 1 and rows[0]["scheme"] == "analog" and rows[0]["replications"] == 3


def test_cli_sweep_byte_identical(tmp_path, write_config):
    path = write_config({"s_total": 60, "s_burnin": 30, "solver": {"n_mc": 5000}})
    args = ["sweep-epsilon", "--config", str(path), "--grid", "1,5", "--replications", "4", "--seed", "9"]
    assert dispatch(args + ["--out", str(tmp_path / "a.csv")]) == 0
    assert dispatch(args + ["--out", str(tmp_path / "b.csv"), "--jobs", "2"]) == 0
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    rows = read_csv(tmp_path / "a.csv")
    assert [(r["sweep_value"], r["scheme"]) for r in rows] == [(1.0, "digital"), (1.0, "analog"), (5.0, "digital"), (5.0, "analog")]


def test_cli_row_rederivable_by_run(tmp_path, write_config):
    path = write_config({"s_total": 60, "s_burnin": 30})
    sweep_out, run_out = tmp_path / "s.csv", tmp_path / "r.csv"
    assert dispatch(["sweep-snr", "--config", str(path), "--grid", "10", "--schemes", "analog",
                     "--replications", "3", "--out", str(sweep_out)]) == 0
    assert dispatch(["run", "--config", str(path), "--scheme", "analog", "--snr-db", "10",
                     "--replications", "3", "--out", str(run_out)]) == 0
    s, r = read_csv(sweep_out)[0], read_csv(run_out)[0]
    assert (s["mean_mse"], s["stderr_mse"], s["gain_used"]) == (r["mean_mse"], r["stderr_mse"], r["gain_used"])

import json
import math

import numpy as np
import pytest

from ictsparse.bench import (
    ExperimentConfig,
    SweepResult,
    default_lambda_grid,
    emit_metadata,
    emit_plots,
    emit_tables,
    operator_curves,
    run_experiment,
)
from ictsparse.bench.cli import main
from ictsparse.bench.outputs import read_curves
from ictsparse.bench.plots import line_chart
from ictsparse.metrics import MetricsRecord
from ictsparse.prox import RootPolicy

PHANTOM = {"kind": "shepp-logan", "name": "phantom", "size": 16}


def tiny_config(tmp_path, **kw):
    base = dict(datasets=[PHANTOM], lambda_grid=[1e-3, 1e-2, 1e-1], iterations=10,
                stride=4, output_dir=str(tmp_path / "out"))
    base.update(kw)
    return ExperimentConfig.from_dict(base)


def rec(alg, lam, psnr, nz, ds="d"):
    return MetricsRecord(ds, alg, lam, psnr, 10 ** (-psnr / 10), nz, 200)


def test_default_grid():
    g = default_lambda_grid()
    assert len(g) == 16
    assert g[0] == pytest.approx(1e-4) and g[-1] == pytest.approx(10.0)
    assert all(b > a for a, b in zip(g, g[1:]))


def test_config_validation(tmp_path):
    with pytest.raises(ValueError):
        tiny_config(tmp_path, lambda_grid=[])
    with pytest.raises(ValueError):
        tiny_config(tmp_path, algorithms=["FISTA"])
    with pytest.raises(ValueError):
        tiny_config(tmp_path, gamma=0.0)
    with pytest.raises(ValueError):
        ExperimentConfig.from_dict({"datasets": [PHANTOM], "colour": "red"})
    cfg = tiny_config(tmp_path, root_policy="largest-abs")
    assert cfg.root_policy is RootPolicy.PAPER_LARGEST_ABS
    assert cfg.with_overrides(gamma=None, eta=0.01).eta == 0.01


def test_config_round_trips_through_json(tmp_path):
    cfg = tiny_config(tmp_path)
    path = tmp_path / "c.json"
    path.write_text(json.dumps(cfg.to_dict()))
    assert ExperimentConfig.from_json(path) == cfg


def test_single_record_tables(tmp_path):
    res = SweepResult([rec("IHT", 0.1, 30.0, 5.0)])
    emit_tables(res, tmp_path)
    best = (tmp_path / "best_psnr.csv").read_text().splitlines()
    sparse = (tmp_path / "sparsest.csv").read_text().splitlines()
    assert len(best) == len(sparse) == 2
    assert best[1] == sparse[1] == "d,IHT,0.1,30.000000,5.000000,200"


def test_best_psnr_tie_takes_first_in_grid_order():
    res = SweepResult([rec("IST", 0.1, 30.0, 9.0), rec("IST", 0.2, 30.0, 4.0),
                       rec("IST", 0.3, 29.0, 1.0)])
    assert res.best_psnr()[0].lam == 0.1


def test_sparsest_skips_all_zero_and_breaks_ties_on_psnr():
    res = SweepResult([rec("ICT", 0.1, 20.0, 2.0), rec("ICT", 0.2, 22.0, 2.0),
                       rec("ICT", 0.3, 7.0, 0.0)])
    assert res.sparsest()[0].lam == 0.2


def test_empty_result_is_a_no_op(tmp_path):
    assert emit_tables(SweepResult(), tmp_path) == []
    assert emit_plots(SweepResult(), tmp_path) == []
    assert list(tmp_path.iterdir()) == []


def test_failed_cells_are_reported(tmp_path):
    bad = MetricsRecord("d", "IST", 5.0, math.nan, math.nan, math.nan, 3, failed=True)
    res = SweepResult([rec("IST", 0.1, 30.0, 5.0), bad])
    emit_tables(res, tmp_path)
    full = (tmp_path / "sweep_full.csv").read_text().splitlines()
    assert full[2].endswith(",nan,failed")
    assert len(read_curves(tmp_path / "curves" / "d.csv")["IST"]) == 1


def test_one_series_chart_has_one_polyline():
    svg = line_chart({"IHT": [(1.0, 20.0), (2.0, 25.0)]}, "t", "x", "y")
    assert svg.count("<polyline") == 1
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")


def test_operator_ordering():
    xs = np.round(np.arange(2.2, 5.0 + 1e-9, 0.1), 10)
    c = operator_curves(1.0, 0.001, xs=xs)
    assert np.all(c["IST"] <= c["ICT"])
    assert np.all(c["ICT"] <= c["IHT"])
    np.testing.assert_array_equal(c["IHT"], xs)


def test_run_outputs_and_metadata(tmp_path):
    cfg = tiny_config(tmp_path)
    res = run_experiment(cfg)
    assert len(res.records) == 9
    out = tmp_path / "out"
    emit_tables(res, out)
    emit_plots(res, out)
    emit_metadata(cfg, out)
    meta = json.loads((out / "metadata.json").read_text())
    assert meta["config"]["root_policy"] == "objective-min"
    assert meta["conventions"]["epsilon_zero"] == 1e-6
    assert meta["software"]["version"]
    assert (out / "plots" / "phantom.svg").read_text().count("<polyline") == 3


def test_threads_do_not_change_results(tmp_path):
    one = run_experiment(tiny_config(tmp_path, chunk_size=7))
    many = run_experiment(tiny_config(tmp_path, chunk_size=7, threads=3))
    assert one.records == many.records


def test_cli_run_is_byte_deterministic(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"datasets": [PHANTOM], "lambda_grid": [1e-3, 1e-1],
                               "iterations": 5, "stride": 4}))
    for name in ("a", "b"):
        assert main(["run", "--config", str(cfg), "--output", str(tmp_path / name),
                     "--no-plots"]) == 0
    for f in ("best_psnr.csv", "sparsest.csv", "sweep_full.csv", "curves/phantom.csv"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()
    resolved = json.loads((tmp_path / "a" / "config.resolved.json").read_text())
    assert resolved["plots"] is False


def test_cli_overrides(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"datasets": [PHANTOM], "iterations": 5, "stride": 4}))
    out = tmp_path / "o"
    assert main(["run", "--config", str(cfg), "--output", str(out), "--lambda-grid", "0.01",
                 "--algorithms", "ICT", "--gamma", "0.5", "--root-policy", "largest-abs",
                 "--shrink-scaling", "proximal", "--no-plots"]) == 0
    resolved = json.loads((out / "config.resolved.json").read_text())
    assert resolved["lambda_grid"] == [0.01] and resolved["algorithms"] == ["ICT"]
    assert resolved["gamma"] == 0.5 and resolved["root_policy"] == "largest-abs"
    assert len((out / "sweep_full.csv").read_text().splitlines()) == 2


def test_cli_utilities(tmp_path, capsys):
    assert main(["operators", "--lambda", "1", "--gamma", "0.001",
                 "--out", str(tmp_path / "ops.svg")]) == 0
    assert (tmp_path / "ops.svg").read_text().count("<polyline") == 3
    assert main(["phantom", "--size", "32", "--out", str(tmp_path / "p.pgm")]) == 0
    assert (tmp_path / "p.pgm").read_bytes().startswith(b"P5\n32 32\n255\n")
    assert main(["dictionary", "--out", str(tmp_path / "d.csv")]) == 0
    assert len((tmp_path / "d.csv").read_text().splitlines()) == 64
    assert main(["run", "--config", str(tmp_path / "missing.json")]) == 2
    assert "error" in capsys.readouterr().err

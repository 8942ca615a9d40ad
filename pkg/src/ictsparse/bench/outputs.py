"""CSV tables and run metadata."""

from __future__ import annotations

import csv
import json
import logging
import math
import re
from pathlib import Path

from .. import __version__
from ..dictionary import DICTIONARY_VERSION
from ..metrics import MetricsRecord
from .runner import SweepResult

log = logging.getLogger(__name__)

TABLE_COLUMNS = ("dataset", "algorithm", "lambda", "psnr_db", "percent_nonzero", "iterations")
FULL_COLUMNS = TABLE_COLUMNS + ("mse", "status")
CURVE_COLUMNS = ("algorithm", "lambda", "percent_nonzero", "psnr_db")


def _num(v: float, fmt: str) -> str:
    return "nan" if math.isnan(v) else format(v, fmt)


def _row(r: MetricsRecord) -> list[str]:
    return [r.dataset, r.algorithm, format(r.lam, ".6g"), _num(r.psnr_db, ".6f"),
            _num(r.percent_nonzero, ".6f"), str(r.iterations)]


def _write(path: Path, header, rows) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    return path


def safe_name(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "_", name)


def emit_tables(result: SweepResult, output_dir: str | Path) -> list[Path]:
    """Write best/sparsest tables, the full sweep and per-dataset curve files."""
    if not result.records:
        log.warning("empty sweep result; no tables written")
        return []
    out = Path(output_dir)
    written = [
        _write(out / "best_psnr.csv", TABLE_COLUMNS, [_row(r) for r in result.best_psnr()]),
        _write(out / "sparsest.csv", TABLE_COLUMNS, [_row(r) for r in result.sparsest()]),
        _write(out / "sweep_full.csv", FULL_COLUMNS,
               [_row(r) + [_num(r.mse, ".9e"), "failed" if r.failed else "ok"]
                for r in result.records]),
    ]
    datasets = dict.fromkeys(r.dataset for r in result.records)
    for ds in datasets:
        rows = [[r.algorithm, format(r.lam, ".6g"), _num(r.percent_nonzero, ".6f"),
                 _num(r.psnr_db, ".6f")]
                for r in result.records if r.dataset == ds and not r.failed]
        written.append(_write(out / "curves" / f"{safe_name(ds)}.csv", CURVE_COLUMNS, rows))
    return written


def read_curves(path: str | Path) -> dict[str, list[tuple[float, float]]]:
    """``{algorithm: [(percent_nonzero, psnr_db), ...]}`` from a curve file."""
    curves: dict[str, list[tuple[float, float]]] = {}
    with Path(path).open() as fh:
        for row in csv.DictReader(fh):
            curves.setdefault(row["algorithm"], []).append(
                (float(row["percent_nonzero"]), float(row["psnr_db"])))
    return curves


def conventions(config) -> dict:
    return {
        "gradient": "x - eta * 2 * A^T (A x - y)  (exact gradient of ||y - Ax||^2)",
        "shrink_scaling": config.shrink_scaling,
        "hard_threshold": "tau = lambda",
        "soft_threshold": "tau = lambda",
        "cauchy": {"gamma": config.gamma, "root_policy": config.root_policy.value},
        "epsilon_zero": config.epsilon_zero,
        "pixel_range": "[0, 1]",
        "peak": 1.0,
        "patch_mean": "patches coded raw, no mean removal",
        "patch_edge_policy": "final anchor clamped to the border",
        "reassembly": "running mean in patch order",
        "dictionary": DICTIONARY_VERSION,
        "psnr_cap_db": 999.0,
    }


def emit_metadata(config, output_dir: str | Path) -> Path:
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    meta = {"software": {"package": "ictsparse", "version": __version__},
            "config": config.to_dict(), "conventions": conventions(config)}
    path = out / "metadata.json"
    path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return path

"""Dependency-free SVG charts: sparsity/PSNR curves and operator shapes."""

from __future__ import annotations

import logging
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from ..prox import RootPolicy, cauchy_shrink_array, hard_threshold, soft_threshold
from .outputs import safe_name
from .runner import SweepResult

log = logging.getLogger(__name__)

COLORS = {"IHT": "#1f77b4", "IST": "#d62728", "ICT": "#2ca02c"}
FALLBACK = ("#9467bd", "#8c564b", "#e377c2", "#7f7f7f")
W, H, PAD = 480, 360, 50


def _ticks(lo, hi, n=5):
    return [lo + (hi - lo) * i / (n - 1) for i in range(n)]


def line_chart(series: dict[str, list[tuple[float, float]]], title: str,
               xlabel: str, ylabel: str, markers: bool = False) -> str:
    """One polyline per series; returns the SVG document as text."""
    pts = [p for s in series.values() for p in s]
    xs = [p[0] for p in pts] or [0.0, 1.0]
    ys = [p[1] for p in pts] or [0.0, 1.0]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x0, x1 = x0 - 1, x1 + 1
    if y1 == y0:
        y0, y1 = y0 - 1, y1 + 1

    def sx(v):
        return PAD + (v - x0) / (x1 - x0) * (W - 2 * PAD)

    def sy(v):
        return H - PAD - (v - y0) / (y1 - y0) * (H - 2 * PAD)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
           f'viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">',
           f'<rect width="{W}" height="{H}" fill="white"/>',
           f'<text x="{W / 2}" y="20" text-anchor="middle" font-size="13">{escape(title)}</text>',
           f'<rect x="{PAD}" y="{PAD}" width="{W - 2 * PAD}" height="{H - 2 * PAD}" '
           'fill="none" stroke="#444"/>']
    for t in _ticks(x0, x1):
        out.append(f'<text x="{sx(t):.2f}" y="{H - PAD + 15}" text-anchor="middle">{t:.3g}</text>')
    for t in _ticks(y0, y1):
        out.append(f'<text x="{PAD - 5}" y="{sy(t) + 4:.2f}" text-anchor="end">{t:.3g}</text>')
    out.append(f'<text x="{W / 2}" y="{H - 12}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="14" y="{H / 2}" text-anchor="middle" '
               f'transform="rotate(-90 14 {H / 2})">{escape(ylabel)}</text>')
    for i, (name, pts) in enumerate(series.items()):
        color = COLORS.get(name, FALLBACK[i % len(FALLBACK)])
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
                   f'points="{coords}"><title>{escape(name)}</title></polyline>')
        if markers:
            out.extend(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="2.5" fill="{color}"/>'
                       for x, y in pts)
        out.append(f'<text x="{W - PAD - 5}" y="{PAD + 15 + 14 * i}" text-anchor="end" '
                   f'fill="{color}">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def operator_curves(lam: float, gamma: float, policy=RootPolicy.PAPER_LARGEST_ABS,
                    xs=None) -> dict[str, np.ndarray]:
    """Hard, soft (both with threshold ``lam``) and Cauchy shrinkage over ``xs``."""
    if xs is None:
        xs = np.linspace(-5.0, 5.0, 1001)
    xs = np.asarray(xs, dtype=float)
    return {"x": xs, "IHT": hard_threshold(xs, lam), "IST": soft_threshold(xs, lam),
            "ICT": cauchy_shrink_array(xs, lam, gamma, policy)}


def operator_chart(lam: float, gamma: float, policy=RootPolicy.PAPER_LARGEST_ABS) -> str:
    c = operator_curves(lam, gamma, policy)
    series = {k: list(zip(c["x"], c[k])) for k in ("IHT", "IST", "ICT")}
    return line_chart(series, f"Shrinkage operators (lambda={lam:g}, gamma={gamma:g})",
                      "input x", "output")


def emit_plots(result: SweepResult, output_dir: str | Path, lam: float = 1.0,
               gamma: float = 0.001, policy=RootPolicy.PAPER_LARGEST_ABS) -> list[Path]:
    """Sparsity-vs-PSNR chart per dataset plus one operator-shape chart."""
    ok = [r for r in result.records if not r.failed]
    if not ok:
        log.warning("empty sweep result; no plots written")
        return []
    out = Path(output_dir) / "plots"
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for ds in dict.fromkeys(r.dataset for r in ok):
        series: dict[str, list[tuple[float, float]]] = {}
        for r in ok:
            if r.dataset == ds:
                series.setdefault(r.algorithm, []).append((r.percent_nonzero, r.psnr_db))
        series = {k: sorted(v) for k, v in series.items()}
        path = out / f"{safe_name(ds)}.svg"
        path.write_text(line_chart(series, f"{ds}: % non-zeros vs PSNR",
                                   "% non-zero coefficients", "PSNR (dB)", markers=True))
        written.append(path)
    path = out / "operators.svg"
    path.write_text(operator_chart(lam, gamma, policy))
    written.append(path)
    return written

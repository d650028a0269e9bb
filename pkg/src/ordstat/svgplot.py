"""Deterministic SVG rendering of curve CSV files.

The picture is a pure function of the CSV text: re-rendering the written
CSV reproduces the plot byte for byte.  Survival columns and hazard
columns each get a panel when present; Monte Carlo rows are drawn dashed.
"""

from __future__ import annotations

import csv
import io

__all__ = ["render_csv_plot"]

_W, _H = 720, 320
_ML, _MR, _MT, _MB = 70, 20, 36, 44
_COLORS = {"X": "#1f77b4", "Y": "#d62728"}


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def _panel(series: dict[str, list[tuple[float, float]]], title: str,
           y_offset: int) -> list[str]:
    xs = [p[0] for pts in series.values() for p in pts]
    ys = [p[1] for pts in series.values() for p in pts]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    pad = 0.05 * (y_hi - y_lo) or 0.05
    y_lo, y_hi = y_lo - pad, y_hi + pad
    if x_hi <= x_lo:
        x_hi = x_lo + 1.0

    def sx(v: float) -> float:
        return _ML + (v - x_lo) / (x_hi - x_lo) * (_W - _ML - _MR)

    def sy(v: float) -> float:
        return y_offset + _H - _MB - (v - y_lo) / (y_hi - y_lo) * (_H - _MT - _MB)

    out = [
        f'<rect x="{_ML}" y="{y_offset + _MT}" width="{_W - _ML - _MR}" '
        f'height="{_H - _MT - _MB}" fill="none" stroke="#333" stroke-width="1"/>',
        f'<text x="{_W // 2}" y="{y_offset + 22}" text-anchor="middle" '
        f'font-size="14" font-family="monospace">{title}</text>',
    ]
    for t in _ticks(x_lo, x_hi):
        px = sx(t)
        out.append(f'<line x1="{_fmt(px)}" y1="{y_offset + _H - _MB}" '
                   f'x2="{_fmt(px)}" y2="{y_offset + _H - _MB + 5}" stroke="#333"/>')
        out.append(f'<text x="{_fmt(px)}" y="{y_offset + _H - _MB + 18}" '
                   f'text-anchor="middle" font-size="11" '
                   f'font-family="monospace">{t:.3g}</text>')
    for t in _ticks(y_lo, y_hi):
        py = sy(t)
        out.append(f'<line x1="{_ML - 5}" y1="{_fmt(py)}" x2="{_ML}" '
                   f'y2="{_fmt(py)}" stroke="#333"/>')
        out.append(f'<text x="{_ML - 8}" y="{_fmt(py)}" text-anchor="end" '
                   f'dy="4" font-size="11" font-family="monospace">{t:.3g}</text>')
    out.append(f'<text x="{_W // 2}" y="{y_offset + _H - 8}" text-anchor="middle" '
               f'font-size="12" font-family="monospace">x</text>')

    legend_y = y_offset + _MT + 16
    for name in sorted(series):
        pts = sorted(series[name])
        color = _COLORS["X" if "_X" in name else "Y"]
        dash = ' stroke-dasharray="6,4"' if "(" in name else ""
        path = " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}" for x, y in pts)
        out.append(f'<polyline points="{path}" fill="none" stroke="{color}" '
                   f'stroke-width="1.5"{dash}/>')
        out.append(f'<line x1="{_W - 170}" y1="{legend_y}" x2="{_W - 140}" '
                   f'y2="{legend_y}" stroke="{color}" stroke-width="1.5"{dash}/>')
        out.append(f'<text x="{_W - 134}" y="{legend_y + 4}" font-size="11" '
                   f'font-family="monospace">{name}</text>')
        legend_y += 16
    return out


def render_csv_plot(csv_text: str) -> str:
    """Render the curves CSV (schema u,x,sf_X,sf_Y,hr_X,hr_Y,source) to SVG."""
    reader = csv.DictReader(io.StringIO(csv_text))
    sf_series: dict[str, list[tuple[float, float]]] = {}
    hr_series: dict[str, list[tuple[float, float]]] = {}
    for row in reader:
        x = float(row["x"])
        src = row.get("source", "analytic")
        suffix = "" if src == "analytic" else f" ({src})"
        for col, bucket in (("sf_X", sf_series), ("sf_Y", sf_series),
                            ("hr_X", hr_series), ("hr_Y", hr_series)):
            raw = row.get(col)
            if raw:
                bucket.setdefault(col + suffix, []).append((x, float(raw)))

    panels = []
    if sf_series:
        panels.append(("survival functions", sf_series))
    if hr_series:
        panels.append(("hazard rate functions", hr_series))
    if not panels:
        raise ValueError("CSV contains no drawable curve columns")

    height = _H * len(panels)
    body: list[str] = []
    for i, (title, series) in enumerate(panels):
        body.extend(_panel(series, title, i * _H))
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{height}" '
        f'viewBox="0 0 {_W} {height}">\n<rect width="{_W}" height="{height}" '
        f'fill="white"/>\n' + "\n".join(body) + "\n</svg>\n"
    )

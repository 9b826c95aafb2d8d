"""Minimal standalone SVG line charts.

Plots are a convenience output of the harness and must never gate the
numeric pipeline, so this writer depends on nothing outside the
standard library, embeds no external assets and produces deterministic
bytes for identical inputs.  Log scale drops nonpositive values; a
curve that decays into float noise simply bottoms out.
"""

from __future__ import annotations

import math

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b")

_W, _H = 880, 540
_ML, _MR, _MT, _MB = 78, 24, 46, 58


def _nice_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if mag * mult >= raw:
            step = mag * mult
            break
    first = math.ceil(lo / step) * step
    ticks = []
    v = first
    while v <= hi + step * 1e-9:
        ticks.append(round(v, 12))
        v += step
    return ticks


def _fmt_num(v: float) -> str:
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return f"{v:g}"


def line_chart(series, path, title: str = "", xlabel: str = "",
               ylabel: str = "", ylog: bool = True) -> None:
    """Write a line chart to an SVG file.

    Parameters
    ----------
    series : iterable of (label, xs, ys)
        One polyline per entry; in log mode points with y <= 0 are
        dropped.
    path : path-like
        Output file.
    """
    data = []
    for k, (label, xs, ys) in enumerate(series):
        pts = [(float(x), float(y)) for x, y in zip(xs, ys)
               if math.isfinite(x) and math.isfinite(y) and (not ylog or y > 0.0)]
        if pts:
            data.append((label, pts, PALETTE[k % len(PALETTE)]))
    if not data:
        raise ValueError("nothing to plot: no finite points")

    xlo = min(p[0] for _, pts, _ in data for p in pts)
    xhi = max(p[0] for _, pts, _ in data for p in pts)
    ylo = min(p[1] for _, pts, _ in data for p in pts)
    yhi = max(p[1] for _, pts, _ in data for p in pts)
    if xhi == xlo:
        xhi = xlo + 1.0
    if ylog:
        ylo_t, yhi_t = math.log10(ylo), math.log10(yhi)
        dlo, dhi = math.floor(ylo_t), math.ceil(yhi_t)
        if dhi == dlo:
            dhi += 1
        yticks = list(range(dlo, dhi + 1, max(1, (dhi - dlo) // 8)))
        ylo_t, yhi_t = float(dlo), float(dhi)
    else:
        if yhi == ylo:
            yhi = ylo + 1.0
        ylo_t, yhi_t = ylo, yhi
        yticks = _nice_ticks(ylo, yhi)
    xticks = _nice_ticks(xlo, xhi)

    px_w = _W - _ML - _MR
    px_h = _H - _MT - _MB

    def X(x):
        return _ML + (x - xlo) / (xhi - xlo) * px_w

    def Y(y):
        t = math.log10(y) if ylog else y
        return _MT + (yhi_t - t) / (yhi_t - ylo_t) * px_h

    out = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_W} {_H}" '
        f'font-family="sans-serif" font-size="13">'
    )
    out.append(f'<rect width="{_W}" height="{_H}" fill="white"/>')
    if title:
        out.append(
            f'<text x="{_W / 2:.1f}" y="24" text-anchor="middle" '
            f'font-size="16">{title}</text>'
        )
    # gridlines and ticks
    for tv in yticks:
        y = Y(10.0 ** tv) if ylog else Y(tv)
        lab = f"1e{tv}" if ylog else _fmt_num(tv)
        out.append(
            f'<line x1="{_ML}" y1="{y:.1f}" x2="{_W - _MR}" y2="{y:.1f}" '
            f'stroke="#dddddd" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{_ML - 6}" y="{y + 4:.1f}" text-anchor="end">{lab}</text>'
        )
    for tv in xticks:
        x = X(tv)
        out.append(
            f'<line x1="{x:.1f}" y1="{_MT}" x2="{x:.1f}" y2="{_H - _MB}" '
            f'stroke="#eeeeee" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{x:.1f}" y="{_H - _MB + 18}" text-anchor="middle">'
            f"{_fmt_num(tv)}</text>"
        )
    # frame
    out.append(
        f'<rect x="{_ML}" y="{_MT}" width="{px_w}" height="{px_h}" '
        f'fill="none" stroke="#333333" stroke-width="1"/>'
    )
    if xlabel:
        out.append(
            f'<text x="{_ML + px_w / 2:.1f}" y="{_H - 14}" '
            f'text-anchor="middle">{xlabel}</text>'
        )
    if ylabel:
        yc = _MT + px_h / 2
        out.append(
            f'<text x="20" y="{yc:.1f}" text-anchor="middle" '
            f'transform="rotate(-90 20 {yc:.1f})">{ylabel}</text>'
        )
    # curves
    for label, pts, color in data:
        coords = " ".join(f"{X(x):.2f},{Y(y):.2f}" for x, y in pts)
        out.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" '
            f'stroke-width="1.6"/>'
        )
    # legend
    lx, ly = _W - _MR - 190, _MT + 10
    out.append(
        f'<rect x="{lx}" y="{ly}" width="180" height="{18 * len(data) + 10}" '
        f'fill="white" stroke="#999999" stroke-width="0.8"/>'
    )
    for k, (label, _, color) in enumerate(data):
        yk = ly + 18 * k + 14
        out.append(
            f'<line x1="{lx + 8}" y1="{yk - 4}" x2="{lx + 34}" y2="{yk - 4}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        out.append(f'<text x="{lx + 40}" y="{yk}">{label}</text>')
    out.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(out) + "\n")

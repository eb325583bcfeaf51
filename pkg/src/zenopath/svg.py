"""Standalone SVG plots with byte-deterministic output.

The renderer is a pure function of its inputs: fixed canvas geometry,
fixed palette, fixed 2-decimal pixel formatting, LF newlines. Linear axes
get 1-2-5 ticks; log axes get decade ticks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

WIDTH = 640
HEIGHT = 440
MARGIN_L = 72
MARGIN_R = 24
MARGIN_T = 42
MARGIN_B = 58

PALETTE = ("#1f6fb4", "#c44e52", "#2e8b57", "#8a5cb8", "#c98712")
GUIDE_COLOR = "#888888"


@dataclass(frozen=True)
class Series:
    xs: tuple
    ys: tuple
    label: str = ""
    mode: str = "line"  # line | points | both

    def __post_init__(self):
        if self.mode not in ("line", "points", "both"):
            raise ValueError(f"unknown series mode {self.mode!r}")
        if len(self.xs) != len(self.ys):
            raise ValueError("series xs and ys must have equal length")


def _px(v: float) -> str:
    return f"{v:.2f}"


def _nice_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    span = hi - lo
    if span <= 0:
        return [lo]
    raw = span / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + step * 1e-9:
        ticks.append(0.0 if abs(t) < step * 1e-9 else t)
        t += step
    return ticks


def _decade_ticks(lo: float, hi: float) -> list[float]:
    ticks = []
    e = math.floor(math.log10(lo) - 1e-12)
    while 10.0**e <= hi * (1 + 1e-12):
        if 10.0**e >= lo * (1 - 1e-12):
            ticks.append(10.0**e)
        e += 1
    if len(ticks) < 2:
        return _nice_ticks(lo, hi)
    return ticks


def _fmt_tick(v: float) -> str:
    if v == 0:
        return "0"
    a = abs(v)
    if 1e-4 <= a < 1e5:
        s = f"{v:.6g}"
    else:
        s = f"{v:.1e}"
    return s


class _Axis:
    def __init__(self, values, log: bool, pixel_lo: float, pixel_hi: float):
        vals = [v for v in values if not (isinstance(v, float) and math.isnan(v))]
        if log:
            vals = [v for v in vals if v > 0]
            if not vals:
                raise ValueError("log axis needs positive data")
        if not vals:
            raise ValueError("axis needs at least one finite value")
        lo, hi = min(vals), max(vals)
        if log:
            llo, lhi = math.log10(lo), math.log10(hi)
            pad = max((lhi - llo) * 0.05, 0.05)
            self.lo, self.hi = llo - pad, lhi + pad
            self.ticks = _decade_ticks(10.0 ** (llo - pad / 2), 10.0 ** (lhi + pad / 2))
        else:
            pad = (hi - lo) * 0.05 or max(abs(lo), 1.0) * 0.05
            self.lo, self.hi = lo - pad, hi + pad
            self.ticks = _nice_ticks(self.lo, self.hi)
        self.log = log
        self.p0, self.p1 = pixel_lo, pixel_hi

    def to_pixel(self, v: float) -> float:
        t = math.log10(v) if self.log else v
        frac = (t - self.lo) / (self.hi - self.lo)
        return self.p0 + frac * (self.p1 - self.p0)


def render_plot(
    series: list[Series],
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    logx: bool = False,
    logy: bool = False,
    hlines: tuple = (),
    vlines: tuple = (),
    annotations: tuple = (),
) -> str:
    """hlines/vlines are (value, label) guide pairs; annotations are
    (x_frac, y_frac, text) in unit plot coordinates."""
    all_x = [x for s in series for x in s.xs]
    all_y = [y for s in series for y in s.ys]
    all_x += [v for v, _ in vlines]
    all_y += [v for v, _ in hlines]
    ax = _Axis(all_x, logx, MARGIN_L, WIDTH - MARGIN_R)
    ay = _Axis(all_y, logy, HEIGHT - MARGIN_B, MARGIN_T)

    out = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">'
    )
    out.append(f'<rect width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>')
    x0, x1 = MARGIN_L, WIDTH - MARGIN_R
    y0, y1 = HEIGHT - MARGIN_B, MARGIN_T
    out.append(
        f'<rect x="{x0}" y="{y1}" width="{x1 - x0}" height="{y0 - y1}" '
        f'fill="none" stroke="#000000" stroke-width="1"/>'
    )
    if title:
        out.append(
            f'<text x="{WIDTH // 2}" y="24" font-family="sans-serif" font-size="14" '
            f'text-anchor="middle">{_esc(title)}</text>'
        )
    for t in ax.ticks:
        if not (ax.lo <= (math.log10(t) if logx else t) <= ax.hi):
            continue
        px = ax.to_pixel(t)
        out.append(
            f'<line x1="{_px(px)}" y1="{y0}" x2="{_px(px)}" y2="{y0 + 5}" '
            f'stroke="#000000" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{_px(px)}" y="{y0 + 18}" font-family="sans-serif" font-size="10" '
            f'text-anchor="middle">{_fmt_tick(t)}</text>'
        )
    for t in ay.ticks:
        if not (ay.lo <= (math.log10(t) if logy else t) <= ay.hi):
            continue
        py = ay.to_pixel(t)
        out.append(
            f'<line x1="{x0 - 5}" y1="{_px(py)}" x2="{x0}" y2="{_px(py)}" '
            f'stroke="#000000" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{x0 - 8}" y="{_px(py + 3)}" font-family="sans-serif" font-size="10" '
            f'text-anchor="end">{_fmt_tick(t)}</text>'
        )
    if xlabel:
        out.append(
            f'<text x="{(x0 + x1) // 2}" y="{HEIGHT - 14}" font-family="sans-serif" '
            f'font-size="12" text-anchor="middle">{_esc(xlabel)}</text>'
        )
    if ylabel:
        out.append(
            f'<text x="18" y="{(y0 + y1) // 2}" font-family="sans-serif" font-size="12" '
            f'text-anchor="middle" transform="rotate(-90 18 {(y0 + y1) // 2})">{_esc(ylabel)}</text>'
        )

    for v, label in hlines:
        py = ay.to_pixel(v)
        out.append(
            f'<line x1="{x0}" y1="{_px(py)}" x2="{x1}" y2="{_px(py)}" '
            f'stroke="{GUIDE_COLOR}" stroke-width="1" stroke-dasharray="5,4"/>'
        )
        if label:
            out.append(
                f'<text x="{x1 - 4}" y="{_px(py - 4)}" font-family="sans-serif" font-size="10" '
                f'text-anchor="end" fill="{GUIDE_COLOR}">{_esc(label)}</text>'
            )
    for v, label in vlines:
        px = ax.to_pixel(v)
        out.append(
            f'<line x1="{_px(px)}" y1="{y0}" x2="{_px(px)}" y2="{y1}" '
            f'stroke="{GUIDE_COLOR}" stroke-width="1" stroke-dasharray="5,4"/>'
        )
        if label:
            out.append(
                f'<text x="{_px(px + 4)}" y="{y1 + 12}" font-family="sans-serif" font-size="10" '
                f'fill="{GUIDE_COLOR}">{_esc(label)}</text>'
            )

    for i, s in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        pts = [
            (ax.to_pixel(x), ay.to_pixel(y))
            for x, y in zip(s.xs, s.ys)
            if not (math.isnan(x) or math.isnan(y)) and (not logx or x > 0) and (not logy or y > 0)
        ]
        if not pts:
            continue
        if s.mode in ("line", "both"):
            path = " ".join(f"{_px(px)},{_px(py)}" for px, py in pts)
            out.append(
                f'<polyline points="{path}" fill="none" stroke="{color}" stroke-width="1.5"/>'
            )
        if s.mode in ("points", "both"):
            for px, py in pts:
                out.append(f'<circle cx="{_px(px)}" cy="{_px(py)}" r="3" fill="{color}"/>')
        if s.label:
            ly = MARGIN_T + 14 + 14 * i
            out.append(
                f'<line x1="{x1 - 110}" y1="{ly - 4}" x2="{x1 - 90}" y2="{ly - 4}" '
                f'stroke="{color}" stroke-width="2"/>'
            )
            out.append(
                f'<text x="{x1 - 84}" y="{ly}" font-family="sans-serif" '
                f'font-size="10">{_esc(s.label)}</text>'
            )

    for fx, fy, text in annotations:
        px = x0 + fx * (x1 - x0)
        py = y0 + fy * (y1 - y0)
        out.append(
            f'<text x="{_px(px)}" y="{_px(py)}" font-family="sans-serif" '
            f'font-size="11">{_esc(text)}</text>'
        )

    out.append("</svg>")
    return "\n".join(out) + "\n"


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def write_svg(path, content: str) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(content)

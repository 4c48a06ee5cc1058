"""Static SVG rendering of a bootstrapped ALE curve against the ALER band."""

from __future__ import annotations

import xml.etree.ElementTree as ET

import numpy as np

from .bootstrap import BootAleCurve
from .stats import AlerBand

WIDTH, HEIGHT = 640, 400
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 64, 24, 36, 56
RUG_LENGTH = 8


def _fmt(v: float) -> str:
    return f"{v:.2f}"


class _Scale:
    def __init__(self, lo: float, hi: float, out_lo: float, out_hi: float):
        if hi <= lo:
            pad = abs(lo) * 0.05 or 1.0
            lo, hi = lo - pad, hi + pad
        self.lo, self.hi, self.out_lo, self.out_hi = lo, hi, out_lo, out_hi

    def __call__(self, v: float) -> float:
        return self.out_lo + (v - self.lo) / (self.hi - self.lo) * (self.out_hi - self.out_lo)


def _sub(parent, tag, **attrs):
    return ET.SubElement(parent, tag, {k.rstrip("_").replace("_", "-"): str(v) for k, v in attrs.items()})


def plot_svg(curve: BootAleCurve, band: AlerBand, rug=None, title: str | None = None) -> str:
    """Render ``curve`` as SVG text.

    Numeric variables get a mean line, a CI ribbon (when bootstrapped) and rug
    ticks at ``rug`` values.  Categorical variables get one point and interval
    per level.  The grey rectangle is the ALER band, dashed lines mark the
    outer band and a thin line marks its center.
    """
    if len(curve.ale_x) == 0:
        raise ValueError("cannot plot an empty curve")
    numeric = curve.kind == "numeric"
    bootstrapped = curve.n_it > 0

    y_vals = np.concatenate(
        [curve.ale_y_lo, curve.ale_y_hi, curve.ale_y_mean,
         [band.outer_lower, band.outer_upper, band.center]]
    )
    y_lo, y_hi = float(y_vals.min()), float(y_vals.max())
    pad = 0.05 * (y_hi - y_lo)
    plot_left, plot_right = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
    plot_top, plot_bottom = MARGIN_TOP, HEIGHT - MARGIN_BOTTOM
    sy = _Scale(y_lo - pad, y_hi + pad, plot_bottom, plot_top)
    if numeric:
        xs = np.asarray(curve.ale_x, dtype=np.float64)
        sx = _Scale(float(xs[0]), float(xs[-1]), plot_left, plot_right)
        px = [sx(v) for v in xs]
    else:
        k = len(curve.ale_x)
        sx = _Scale(-0.5, k - 0.5, plot_left, plot_right)
        px = [sx(i) for i in range(k)]

    svg = ET.Element(
        "svg",
        {
            "xmlns": "http://www.w3.org/2000/svg",
            "width": str(WIDTH),
            "height": str(HEIGHT),
            "viewBox": f"0 0 {WIDTH} {HEIGHT}",
        },
    )
    _sub(svg, "title").text = title or f"ALE of {curve.variable}"
    _sub(svg, "rect", x=0, y=0, width=WIDTH, height=HEIGHT, fill="white", class_="background")

    top, bottom = sy(band.upper), sy(band.lower)
    _sub(
        svg, "rect", class_="aler-band", x=_fmt(plot_left), y=_fmt(top),
        width=_fmt(plot_right - plot_left), height=_fmt(bottom - top), fill="#d9d9d9",
    )
    for edge in (band.outer_lower, band.outer_upper):
        _sub(
            svg, "line", class_="outer-band", x1=_fmt(plot_left), x2=_fmt(plot_right),
            y1=_fmt(sy(edge)), y2=_fmt(sy(edge)), stroke="#808080", stroke_dasharray="4 3",
        )
    _sub(
        svg, "line", class_="band-center", x1=_fmt(plot_left), x2=_fmt(plot_right),
        y1=_fmt(sy(band.center)), y2=_fmt(sy(band.center)), stroke="#808080", stroke_width="0.5",
    )

    if numeric:
        if bootstrapped:
            upper = [f"{_fmt(x)},{_fmt(sy(v))}" for x, v in zip(px, curve.ale_y_hi)]
            lower = [f"{_fmt(x)},{_fmt(sy(v))}" for x, v in zip(px, curve.ale_y_lo)]
            _sub(
                svg, "polygon", class_="ci-ribbon", points=" ".join(upper + lower[::-1]),
                fill="#4477aa", fill_opacity="0.25", stroke="none",
            )
        _sub(
            svg, "polyline", class_="ale-mean",
            points=" ".join(f"{_fmt(x)},{_fmt(sy(v))}" for x, v in zip(px, curve.ale_y_mean)),
            fill="none", stroke="#224477", stroke_width="1.5",
        )
        if rug is not None:
            rug_group = _sub(svg, "g", class_="rug", stroke="#333333", stroke_width="0.5")
            for v in np.unique(np.asarray(rug, dtype=np.float64)):
                x = _fmt(sx(float(v)))
                _sub(rug_group, "line", x1=x, x2=x, y1=_fmt(plot_bottom), y2=_fmt(plot_bottom - RUG_LENGTH))
    else:
        total = float(np.sum(curve.ale_n))
        for x, level, n, lo, hi, mean in zip(
            px, curve.ale_x, curve.ale_n, curve.ale_y_lo, curve.ale_y_hi, curve.ale_y_mean
        ):
            if bootstrapped:
                _sub(
                    svg, "line", class_="ci-interval", x1=_fmt(x), x2=_fmt(x),
                    y1=_fmt(sy(lo)), y2=_fmt(sy(hi)), stroke="#4477aa", stroke_width="2",
                )
            _sub(svg, "circle", class_="ale-point", cx=_fmt(x), cy=_fmt(sy(mean)), r="3", fill="#224477")
            label = _sub(
                svg, "text", class_="level-label", x=_fmt(x), y=_fmt(plot_bottom + 18),
                text_anchor="middle", font_size="11",
            )
            label.text = f"{level} ({100.0 * n / total:.0f}%)"

    _sub(
        svg, "line", class_="axis", x1=_fmt(plot_left), x2=_fmt(plot_left),
        y1=_fmt(plot_top), y2=_fmt(plot_bottom), stroke="black",
    )
    _sub(
        svg, "line", class_="axis", x1=_fmt(plot_left), x2=_fmt(plot_right),
        y1=_fmt(plot_bottom), y2=_fmt(plot_bottom), stroke="black",
    )
    for v in (sy.lo, 0.5 * (sy.lo + sy.hi), sy.hi):
        tick = _sub(svg, "text", class_="tick", x=_fmt(plot_left - 6), y=_fmt(sy(v) + 4),
                    text_anchor="end", font_size="10")
        tick.text = f"{v:.3g}"
    if numeric:
        for v in (sx.lo, sx.hi):
            tick = _sub(svg, "text", class_="tick", x=_fmt(sx(v)), y=_fmt(plot_bottom + 16),
                        text_anchor="middle", font_size="10")
            tick.text = f"{v:.3g}"
    caption = _sub(svg, "text", class_="xlabel", x=_fmt(0.5 * (plot_left + plot_right)),
                   y=_fmt(HEIGHT - 12), text_anchor="middle", font_size="12")
    caption.text = curve.variable
    return ET.tostring(svg, encoding="unicode") + "\n"

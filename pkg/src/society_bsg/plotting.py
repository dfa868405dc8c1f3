"""Self-contained SVG scatter plots of experiment records."""

from __future__ import annotations

import xml.etree.ElementTree as ET

from .errors import EmptyPlotError

WIDTH, HEIGHT = 640, 480
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 70, 130, 30, 60
PAD = 0.05
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b")
UNITS = {"cost": "budget units", "wall_ms": "ms", "instance": "id", "seed": "seed"}


def _get(record, metric):
    value = record[metric] if isinstance(record, dict) else getattr(record, metric)
    try:
        return float(value)
    except (TypeError, ValueError):
        return None


def _method(record):
    return record["method"] if isinstance(record, dict) else record.method


def padded_range(values) -> tuple:
    """``(lo, hi)`` of ``values`` widened by 5% of the span on each side (1 if the span is 0)."""
    lo, hi = min(values), max(values)
    pad = (hi - lo) * PAD if hi > lo else 1.0
    return lo - pad, hi + pad


def scale(value: float, lo: float, hi: float, start: float, end: float) -> float:
    """Linear map of ``[lo, hi]`` onto ``[start, end]``."""
    return start + (value - lo) / (hi - lo) * (end - start)


def plot_scatter(records, x: str = "cost", y: str = "wall_ms", sink=None) -> str:
    """Scatter plot of ``y`` against ``x``, one circle per record, coloured by method.

    Records whose ``x`` or ``y`` is not numeric (for example a ``skipped``
    cost) are left out.

    Args:
        records: ``ExperimentRecord`` objects or CSV row dicts.
        x, y: column names.
        sink: optional path or text stream receiving the document.

    Returns:
        The SVG document.

    Raises:
        EmptyPlotError: no plottable record.
    """
    pts = []
    for r in records:
        vx, vy = _get(r, x), _get(r, y)
        if vx is not None and vy is not None:
            pts.append((vx, vy, _method(r)))
    if not pts:
        raise EmptyPlotError("nothing to plot")
    methods = sorted({mth for _, _, mth in pts})
    colour = {mth: PALETTE[i % len(PALETTE)] for i, mth in enumerate(methods)}
    xlo, xhi = padded_range([p[0] for p in pts])
    ylo, yhi = padded_range([p[1] for p in pts])
    left, right = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
    top, bottom = MARGIN_TOP, HEIGHT - MARGIN_BOTTOM

    svg = ET.Element("svg", xmlns="http://www.w3.org/2000/svg", width=str(WIDTH), height=str(HEIGHT),
                     viewBox=f"0 0 {WIDTH} {HEIGHT}")
    ET.SubElement(svg, "rect", x="0", y="0", width=str(WIDTH), height=str(HEIGHT), fill="white")
    axes = ET.SubElement(svg, "g", stroke="black")
    ET.SubElement(axes, "line", x1=str(left), y1=str(bottom), x2=str(right), y2=str(bottom))
    ET.SubElement(axes, "line", x1=str(left), y1=str(bottom), x2=str(left), y2=str(top))
    for k in range(5):
        fx = xlo + (xhi - xlo) * k / 4
        fy = ylo + (yhi - ylo) * k / 4
        px = scale(fx, xlo, xhi, left, right)
        py = scale(fy, ylo, yhi, bottom, top)
        ET.SubElement(axes, "line", x1=f"{px:.2f}", y1=str(bottom), x2=f"{px:.2f}", y2=str(bottom + 5))
        ET.SubElement(axes, "line", x1=str(left - 5), y1=f"{py:.2f}", x2=str(left), y2=f"{py:.2f}")
        t = ET.SubElement(svg, "text", x=f"{px:.2f}", y=str(bottom + 18), **{"text-anchor": "middle", "font-size": "11"})
        t.text = f"{fx:.4g}"
        t = ET.SubElement(svg, "text", x=str(left - 8), y=f"{py + 4:.2f}", **{"text-anchor": "end", "font-size": "11"})
        t.text = f"{fy:.4g}"
    label = ET.SubElement(svg, "text", x=str((left + right) / 2), y=str(HEIGHT - 15),
                          **{"text-anchor": "middle", "font-size": "13"})
    label.text = f"{x} ({UNITS.get(x, 'value')})"
    cy = (top + bottom) / 2
    label = ET.SubElement(svg, "text", x="18", y=str(cy), transform=f"rotate(-90 18 {cy})",
                          **{"text-anchor": "middle", "font-size": "13"})
    label.text = f"{y} ({UNITS.get(y, 'value')})"

    dots = ET.SubElement(svg, "g", {"class": "points"})
    for vx, vy, mth in pts:
        ET.SubElement(dots, "circle", cx=f"{scale(vx, xlo, xhi, left, right):.2f}",
                      cy=f"{scale(vy, ylo, yhi, bottom, top):.2f}", r="4", fill=colour[mth],
                      **{"fill-opacity": "0.8", "data-method": mth})
    legend = ET.SubElement(svg, "g", {"class": "legend"})
    for k, mth in enumerate(methods):
        ly = top + 10 + 20 * k
        ET.SubElement(legend, "circle", cx=str(right + 20), cy=str(ly), r="5", fill=colour[mth])
        t = ET.SubElement(legend, "text", x=str(right + 32), y=str(ly + 4), **{"font-size": "12"})
        t.text = mth

    doc = ET.tostring(svg, encoding="unicode")
    if sink is not None:
        if isinstance(sink, str) or hasattr(sink, "__fspath__"):
            with open(sink, "w", encoding="utf-8") as fh:
                fh.write(doc)
        else:
            sink.write(doc)
    return doc

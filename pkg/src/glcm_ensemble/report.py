"""Summary tables and dependency-free SVG charts.

All output is a pure function of its inputs: fixed number formatting, no
timestamps, no random ids, so repeated renders are byte-identical.
"""

from __future__ import annotations

import csv
import io
from xml.sax.saxutils import escape

from .evaluation import ConfusionMatrix, MetricsReport

SUMMARY_COLUMNS = ("Classifier", "Accuracy", "Precision", "Recall", "F1 Score")
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf", "#7f7f7f")
FONT = "DejaVu Sans, Arial, sans-serif"


def summary_rows(named_reports) -> list[tuple[str, str, str, str, str]]:
    return [
        (name, f"{r.accuracy:.3f}", f"{r.precision:.3f}", f"{r.recall:.3f}", f"{r.f1:.3f}")
        for name, r in named_reports
    ]


def summary_table(named_reports, fmt: str = "text") -> str:
    """One row per classifier: accuracy, precision, recall, F1."""
    rows = summary_rows(named_reports)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(SUMMARY_COLUMNS)
        writer.writerows(rows)
        return buf.getvalue()
    if fmt != "text":
        raise ValueError(f"unknown summary format {fmt!r}")
    widths = [max(len(SUMMARY_COLUMNS[i]), *(len(r[i]) for r in rows)) for i in range(5)]
    lines = ["  ".join(c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(SUMMARY_COLUMNS, widths)))]
    lines.append("  ".join("-" * w for w in widths))
    for r in rows:
        lines.append("  ".join(c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(r, widths))))
    return "\n".join(lines) + "\n"


def _svg_open(width: int, height: int) -> list[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="{FONT}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
    ]


def _text(x, y, s, size=12, anchor="middle", extra="") -> str:
    return (
        f'<text x="{x:.1f}" y="{y:.1f}" font-size="{size}" text-anchor="{anchor}"{extra}>'
        f"{escape(str(s))}</text>"
    )


def _shade(frac: float) -> str:
    # white -> steel blue
    r = round(255 - frac * (255 - 31))
    g = round(255 - frac * (255 - 119))
    b = round(255 - frac * (255 - 180))
    return f"#{r:02x}{g:02x}{b:02x}"


def confusion_svg(cm: ConfusionMatrix, title: str = "") -> str:
    rows, cols = cm.n_classes, len(cm.column_labels)
    cell = 56
    left, top = 110, 70 if title else 50
    width = left + cols * cell + 30
    height = top + rows * cell + 60
    peak = max(1, int(cm.counts.max()))
    out = _svg_open(width, height)
    if title:
        out.append(_text(width / 2, 24, title, 15, extra=' font-weight="bold"'))
    out.append(_text(left + cols * cell / 2, top - 28, "Predicted", 12))
    out.append(
        _text(18, top + rows * cell / 2, "True", 12,
              extra=f' transform="rotate(-90 18 {top + rows * cell / 2:.1f})"')
    )
    for j, name in enumerate(cm.column_labels):
        out.append(_text(left + j * cell + cell / 2, top - 8, name, 11))
    for i, name in enumerate(cm.classes):
        out.append(_text(left - 8, top + i * cell + cell / 2 + 4, name, 11, anchor="end"))
        for j in range(cols):
            v = int(cm.counts[i, j])
            frac = v / peak
            x, y = left + j * cell, top + i * cell
            out.append(
                f'<rect class="cell" x="{x}" y="{y}" width="{cell}" height="{cell}" '
                f'fill="{_shade(frac)}" stroke="#999999" stroke-width="0.5"/>'
            )
            color = "#ffffff" if frac > 0.6 else "#000000"
            out.append(_text(x + cell / 2, y + cell / 2 + 5, v, 13, extra=f' fill="{color}"'))
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_confusion_svg(cm: ConfusionMatrix, path, title: str = "") -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(confusion_svg(cm, title))


def class_bars_svg(named_reports, class_names, title: str = "Per-class recall") -> str:
    """Grouped bars: one group per class, one bar per classifier."""
    named_reports = list(named_reports)
    n_models = len(named_reports)
    n_classes = len(class_names)
    bar = 14
    group = n_models * bar + 24
    left, top, plot_h = 60, 50, 240
    width = left + n_classes * group + 190
    height = top + plot_h + 60
    out = _svg_open(width, height)
    out.append(_text((left + n_classes * group) / 2, 26, title, 15, extra=' font-weight="bold"'))
    base_y = top + plot_h
    for k in range(6):
        frac = k / 5
        y = base_y - frac * plot_h
        out.append(f'<line x1="{left}" y1="{y:.1f}" x2="{left + n_classes * group}" y2="{y:.1f}" stroke="#dddddd"/>')
        out.append(_text(left - 6, y + 4, f"{frac:.1f}", 10, anchor="end"))
    for c, cname in enumerate(class_names):
        gx = left + c * group + 12
        for m, (name, report) in enumerate(named_reports):
            value = report.per_class_recall[c]
            h = value * plot_h
            out.append(
                f'<rect class="bar" x="{gx + m * bar}" y="{base_y - h:.1f}" width="{bar - 2}" '
                f'height="{h:.1f}" fill="{PALETTE[m % len(PALETTE)]}"><title>{escape(name)} / '
                f"{escape(str(cname))}: {value:.3f}</title></rect>"
            )
        out.append(_text(gx + n_models * bar / 2, base_y + 18, cname, 11))
    out.append(f'<line x1="{left}" y1="{base_y}" x2="{left + n_classes * group}" y2="{base_y}" stroke="#333333"/>')
    lx = left + n_classes * group + 16
    for m, (name, _) in enumerate(named_reports):
        y = top + m * 20
        out.append(f'<rect x="{lx}" y="{y}" width="12" height="12" fill="{PALETTE[m % len(PALETTE)]}"/>')
        out.append(_text(lx + 18, y + 10, name, 11, anchor="start"))
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_class_bars_svg(named_reports, path, class_names, title: str = "Per-class recall") -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(class_bars_svg(named_reports, class_names, title))

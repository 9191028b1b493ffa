import re
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from glcm_ensemble.evaluation import confusion, metrics
from glcm_ensemble.report import (
    SUMMARY_COLUMNS,
    class_bars_svg,
    confusion_svg,
    render_confusion_svg,
    summary_table,
)

NS = "{http://www.w3.org/2000/svg}"


def cells(svg):
    root = ET.fromstring(svg.encode())
    rects = [r for r in root.iter(NS + "rect") if r.get("class") == "cell"]
    texts = [t.text for t in root.iter(NS + "text")]
    return rects, texts


def test_identity_confusion_svg():
    cm = confusion([0, 1], [0, 1], classes=("a", "b"))
    rects, texts = cells(confusion_svg(cm, "identity"))
    assert len(rects) == 4
    fills = [r.get("fill") for r in rects]
    # diagonal shaded, off-diagonal white
    assert fills[0] == fills[3] != "#ffffff"
    assert fills[1] == fills[2] == "#ffffff"
    assert texts.count("1") == 2 and texts.count("0") == 2
    assert "identity" in texts and "a" in texts and "b" in texts


def test_unknown_column_drawn():
    cm = confusion([0, 1, 1], [0, -1, 1], classes=("a", "b"))
    rects, texts = cells(confusion_svg(cm))
    assert len(rects) == 6
    assert "unknown" in texts


def test_svg_deterministic(tmp_path):
    cm = confusion([0, 1, 2, 2], [0, 2, 2, 1], classes=("x", "y", "z"))
    render_confusion_svg(cm, tmp_path / "a.svg", "t")
    render_confusion_svg(cm, tmp_path / "b.svg", "t")
    assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "b.svg").read_bytes()


def test_title_is_escaped():
    cm = confusion([0, 1], [0, 1], classes=("<a>", "b&c"))
    ET.fromstring(confusion_svg(cm, "R&D <test>").encode())


def test_class_bars_structure():
    y = np.array([0, 0, 1, 1, 2, 2])
    reports = [
        ("A", metrics(confusion(y, y))),
        ("B", metrics(confusion(y, [0, 1, 1, 1, 2, 0]))),
    ]
    svg = class_bars_svg(reports, ["c0", "c1", "c2"])
    root = ET.fromstring(svg.encode())
    bars = [r for r in root.iter(NS + "rect") if r.get("class") == "bar"]
    assert len(bars) == 6
    heights = [float(b.get("height")) for b in bars]
    # class 0: A recall 1, B recall 0.5
    assert heights[0] == pytest.approx(2 * heights[1])
    assert svg == class_bars_svg(reports, ["c0", "c1", "c2"])


def test_summary_text_and_csv():
    y = np.array([0, 1, 1, 0])
    r = metrics(confusion(y, [0, 1, 0, 0]))
    text = summary_table([("Random Forest (RF)", r)])
    lines = text.splitlines()
    assert lines[0].split()[0] == "Classifier" and "F1 Score" in lines[0]
    assert set(lines[1]) <= {"-", " "}
    assert re.match(r"Random Forest \(RF\)\s+0\.750\s", lines[2])
    csv_text = summary_table([("RF", r)], "csv")
    assert csv_text.splitlines()[0] == ",".join(SUMMARY_COLUMNS)
    assert csv_text.splitlines()[1].startswith("RF,0.750,")
    with pytest.raises(ValueError):
        summary_table([("RF", r)], "xml")

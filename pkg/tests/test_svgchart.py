import xml.etree.ElementTree as ET

import numpy as np
import pytest

from nonmarkov.svgchart import Series, render_chart, write_chart


def series(label="a"):
    x = np.linspace(0.0, 10.0, 30)
    return Series(label=label, x=x, y=np.sin(x))


def test_series_validation():
    with pytest.raises(ValueError):
        Series(label="a", x=np.array([1.0, 2.0]), y=np.array([1.0]))
    with pytest.raises(ValueError):
        Series(label="a", x=np.array([1.0]), y=np.array([1.0]))


def test_render_rejects_empty():
    with pytest.raises(ValueError):
        render_chart([], title="t", x_label="x", y_label="y")


def test_render_is_wellformed_xml():
    svg = render_chart(
        [series("first"), series("second")],
        title="demo",
        x_label="time",
        y_label="value",
    )
    root = ET.fromstring(svg)
    assert root.tag.endswith("svg")
    assert "first" in svg and "second" in svg
    assert "demo" in svg


def test_render_escapes_markup():
    svg = render_chart(
        [series("a<b&c")], title="x < y", x_label="x", y_label="y"
    )
    ET.fromstring(svg)  # would raise on raw '<' in text
    assert "a<b&c" not in svg


def test_write_chart_lf_endings(tmp_path):
    path = tmp_path / "chart.svg"
    write_chart(str(path), [series()], title="t", x_label="x", y_label="y")
    raw = path.read_bytes()
    assert b"\r" not in raw
    assert raw.startswith(b"<svg") or raw.startswith(b"<?xml")

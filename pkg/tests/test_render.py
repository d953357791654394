import csv
import io
import json
import xml.etree.ElementTree as ET

import numpy as np

from hforge.render import clean, csv_text, dumps, heatmap_svg, jsonl


def test_clean_numbers():
    assert clean(-0.0) == 0.0 and str(clean(-0.0)) == "0.0"
    assert clean(0.1 + 0.2) == 0.3
    assert clean(np.float64(1 / 3)) == float(f"{1 / 3:.15g}")
    assert clean(np.int64(7)) == 7 and isinstance(clean(np.int64(7)), int)
    assert clean(1 + 2j) == [1.0, 2.0]
    assert clean(np.bool_(True)) is True
    assert clean(float("nan")) == "nan"
    assert clean(np.arange(3)) == [0, 1, 2]
    assert clean({1: (2, 3)}) == {"1": [2, 3]}


def test_dumps_sorted_and_stable():
    a = dumps({"b": 1, "a": [0.1 + 0.2, -0.0]})
    assert a == '{"a": [0.3, 0.0], "b": 1}'
    assert dumps({"a": [0.1 + 0.2, -0.0], "b": 1}) == a


def test_jsonl():
    text = jsonl([{"x": 1}, {"x": 2}])
    assert [json.loads(line) for line in text.splitlines()] == [{"x": 1}, {"x": 2}]
    assert text.endswith("\n")


def test_csv_rfc4180():
    text = csv_text([{"a": 'say "hi"', "b": "x,y", "c": True, "d": None, "e": [1, 2]}])
    assert text.endswith("\r\n")
    assert text.split("\r\n")[1] == '"say ""hi""","x,y",true,,"[1, 2]"'
    rows = list(csv.DictReader(io.StringIO(text)))
    assert rows[0]["a"] == 'say "hi"'


def test_csv_columns_and_empty():
    assert csv_text([{"a": 1, "b": 2}], ["b"]) == "b\r\n2\r\n"
    assert csv_text([]) == "\r\n"


def test_heatmap_svg():
    G = np.array([[0.0, 1.0], [-1.0, 0.5]])
    svg = heatmap_svg(G, ["r0", "r1"], ["c0", "c1"], "t<1>")
    root = ET.fromstring(svg)
    ns = "{http://www.w3.org/2000/svg}"
    rects = root.findall(f"{ns}rect")
    assert len(rects) == 4
    fills = [r.get("fill") for r in rects]
    assert fills[2] == "#313695"  # min
    assert fills[1] == "#a50026"  # max
    assert fills[0] == "#ffffff"  # midpoint
    assert "min -1   max 1" in svg
    assert "t&lt;1&gt;" in svg


def test_heatmap_constant_grid():
    svg = heatmap_svg(np.ones((3, 3)))
    ET.fromstring(svg)
    assert svg.count("<rect") == 9

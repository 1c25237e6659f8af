import json
import re

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ssgrowth.growth import GlobalGrowth, GrowthCurve, growth_function, safe_radii
from ssgrowth.io import ModelFormatError, dump_model, export_graph, jsonable, parse_model, report_json, \
    write_growth_csv
from ssgrowth.model import BUILTIN_NAMES, builtin, validate
from ssgrowth.substitution import generate

from oracles import naive_ball_volume, to_networkx

SIERPINSKI_DOC = """{
  "name": "sierpinski",
  "vertices": 6,
  "boundary": [0, 1, 2],
  "slots": [[0, 3, 5], [1, 3, 4], [2, 4, 5]]
}
"""


def test_parse_sierpinski_document():
    m = parse_model(SIERPINSKI_DOC)
    assert m == builtin("sierpinski")
    assert validate(m).passed


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_round_trip(name):
    m = builtin(name)
    text = dump_model(m)
    assert parse_model(text) == m
    assert dump_model(parse_model(text)) == text


@settings(max_examples=50, deadline=None)
@given(st.sampled_from(BUILTIN_NAMES), st.integers(0, 4), st.booleans())
def test_round_trip_under_relabelling(name, anchor, compact):
    m = builtin(name)
    doc = m.to_dict()
    doc["anchor_slot"] = anchor % m.mu
    text = json.dumps(doc, separators=(",", ":")) if compact else json.dumps(doc, indent=4)
    parsed = parse_model(text)
    assert parse_model(dump_model(parsed)) == parsed
    assert parsed.anchor_slot == anchor % m.mu


def test_anchor_defaults_to_zero():
    doc = json.loads(SIERPINSKI_DOC)
    assert "anchor_slot" not in doc
    assert parse_model(SIERPINSKI_DOC).anchor_slot == 0


def test_boundary_pair_slot_parses_but_fails_F1():
    m = parse_model('{"name": "f1", "vertices": 2, "boundary": [0, 1], "slots": [[0, 1]]}')
    assert not validate(m).checks["F1"].passed


@pytest.mark.parametrize("text,pattern", [
    ("", "syntax error"),
    ("   \n", "syntax error"),
    ("{", "syntax error.*line 1"),
    ("[1, 2]", "JSON object"),
    ('{"name": "x", "vertices": 3, "boundary": [0, 2], "slots": [[0, 1]], "colour": 1}', "unknown field 'colour'"),
    ('{"name": "x", "vertices": 3, "boundary": [0, 2]}', "missing field 'slots'"),
    ('{"name": 7, "vertices": 3, "boundary": [0, 2], "slots": []}', "name"),
    ('{"name": "x", "vertices": true, "boundary": [0, 2], "slots": []}', "vertices: expected an integer"),
    ('{"name": "x", "vertices": 3, "boundary": [0, 9], "slots": [[0, 1]]}', "boundary.*out of range"),
    ('{"name": "x", "vertices": 3, "boundary": [0, 2], "slots": [[0, 1], [1, 1]]}', r"slots\[1\].*duplicate"),
    ('{"name": "x", "vertices": 3, "boundary": [0, 2], "slots": [[0, 1], "a"]}', r"slots\[1\]"),
])
def test_parse_errors(text, pattern):
    with pytest.raises(ModelFormatError, match=pattern):
        parse_model(text)


def test_arity_error_has_position():
    text = '{\n  "name": "x",\n  "vertices": 3,\n  "boundary": [0, 2],\n  "slots": [[0, 1],\n            [1]]\n}\n'
    with pytest.raises(ModelFormatError) as exc:
        parse_model(text)
    msg = str(exc.value)
    assert msg.startswith("slots[1]: expected 2 ids, got 1")
    assert re.search(r"line 6, column 13", msg)


def test_edges_export_line():
    assert export_graph(generate(builtin("line"), 1), "edges") == "0 1\n1 2"


def test_edges_export_sierpinski():
    lines = export_graph(generate(builtin("sierpinski"), 1), "edges").split("\n")
    assert len(lines) == 9
    pairs = [tuple(map(int, ln.split())) for ln in lines]
    assert pairs == sorted(pairs) and all(u < v for u, v in pairs)


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_dot_export_round_trip(name):
    m = builtin(name)
    hg = generate(m, 3)
    text = export_graph(hg, "dot")
    edges = re.findall(r"^\s*(\d+) -- (\d+);$", text, flags=re.M)
    levels = re.findall(r"^\s*(\d+) \[level=(\d+)\];$", text, flags=re.M)
    assert len(edges) == m.mu ** 3 * m.theta * (m.theta - 1) // 2
    g = nx.Graph([(int(u), int(v)) for u, v in edges])
    assert nx.is_isomorphic(g, to_networkx(hg))
    assert [int(lv) for _, lv in levels] == hg.level.tolist()


def test_json_export():
    hg = generate(builtin("tree4"), 2)
    doc = json.loads(export_graph(hg, "json"))
    assert doc["n"] == 2 and doc["model"] == "tree4"
    assert len(doc["edges"]) == hg.graph.edge_count
    assert [v["level"] for v in doc["vertices"]] == hg.level.tolist()


def test_unknown_format():
    with pytest.raises(ValueError, match="unknown export format"):
        export_graph(generate(builtin("line"), 1), "graphml")


def test_growth_csv_single_point():
    assert write_growth_csv(GrowthCurve(0, 0, np.array([4]))) == "r,volume\n0,4\n"


def test_growth_csv_line_midpoint():
    hg = generate(builtin("line"), 3)
    text = write_growth_csv(growth_function(hg, int(np.argmax(safe_radii(hg)))))
    assert text == "r,volume\n0,2\n1,6\n2,10\n3,14\n"
    assert "\r" not in text


def test_growth_csv_sierpinski_matches_oracle():
    hg = generate(builtin("sierpinski"), 5)
    x = int(np.argmax(safe_radii(hg)))
    rows = write_growth_csv(growth_function(hg, x)).splitlines()[1:]
    g = to_networkx(hg)
    assert [tuple(map(int, r.split(","))) for r in rows] == \
        [(r, naive_ball_volume(g, x, r)) for r in range(len(rows))]


def test_global_csv():
    text = write_growth_csv([GlobalGrowth(2, 10, 12, 5), GlobalGrowth(4, 30, 44, 3)])
    assert text == "r,lower,upper\n2,10,12\n4,30,44\n"
    with pytest.raises(ValueError):
        write_growth_csv([])


def test_report_json_is_canonical():
    doc = {"b": np.int64(3), "a": [np.float64(0.1), 1.5], "c": {"z": np.bool_(True)}}
    text = report_json(doc)
    assert text == report_json(json.loads(text))
    assert text.index('"a"') < text.index('"b"')
    assert "0.1" in text and text.endswith("\n")
    with pytest.raises(ValueError):
        report_json({"x": float("nan")})


def test_jsonable_handles_reports():
    from ssgrowth.invariants import check_edge_boundary
    out = jsonable(check_edge_boundary(builtin("sierpinski"), n_max=2))
    assert out["status"] == "pass"
    json.dumps(out)

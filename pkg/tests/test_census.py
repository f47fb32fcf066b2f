from __future__ import annotations

import json

import pytest

from scrollforge import census
from scrollforge.errors import TheoremViolation
from scrollforge.projgeom import span
from scrollforge.scroll import canonical_scroll, cross_section, image_scroll
from scrollforge.sections import KEYS

TABLE7 = dict(zip(KEYS, [115248, 18816, 1029, 392, 1372, 112, 176, 56, 56]))
TABLE8 = dict(zip(KEYS, [258048, 36288, 1792, 576, 2304, 168, 261, 72, 84]))
TABLE9 = dict(zip(KEYS, [524880, 64800, 2916, 810, 3645, 240, 370, 90, 120]))


@pytest.fixture(scope="module")
def report7():
    return census.run_census(7)


def test_closed_forms_match_literal_tables():
    assert census.expected_table(7) == TABLE7
    assert census.expected_table(8) == TABLE8
    assert census.expected_table(9) == TABLE9
    assert sum(TABLE7.values()) == 137257
    assert sum(TABLE8.values()) == 299593
    assert census.expected_r(7) == [112, 176, 56, 56]
    assert census.expected_s(7) == [21, 8, 28]
    assert census.expected_inventory(7) == {"lines": 8, "conics": 1, "cubics": 49, "quartics": 2352, "quintics": 115248}


def test_shards_are_contiguous():
    parts = census.shards(100, 30)
    assert parts == [(0, 30), (30, 60), (60, 90), (90, 100)]


def test_census_q7(report7):
    assert report7["table"] == TABLE7
    assert report7["r"] == [112, 176, 56, 56]
    assert report7["s"] == [21, 8, 28]
    assert report7["inventory"] == census.expected_inventory(7)
    assert census.report_ok(report7)
    assert list(report7) == ["q", "field", "table", "r", "s", "inventory", "audits", "wall_time_ms"]


def test_double_count_q7(report7):
    dc = next(a for a in report7["audits"] if a["name"] == "double_count")
    assert dc["status"] == "pass"
    assert dc["direct"] == 1254912 == 64 * 19608


def test_shard_size_does_not_change_the_table():
    V = canonical_scroll(7)
    a = census.hyperplane_census(V, shard_size=5000)
    b = census.hyperplane_census(V, shard_size=137257)
    assert a.counts == b.counts == TABLE7
    assert a.incidences == b.incidences


def test_census_of_a_moved_scroll():
    V = canonical_scroll(7)
    M = [[int(i == (j + 3) % 7) for j in range(7)] for i in range(7)]
    M[0][1] = 2
    W = image_scroll(V, M)
    assert census.hyperplane_census(W).counts == TABLE7


def test_r_and_s_censuses():
    V = canonical_scroll(7)
    assert census.r_census(V) == [112, 176, 56, 56]
    assert census.s_census(V, cross_section(V, 3, 4)) == [21, 8, 28]
    with pytest.raises(ValueError):
        census.s_census(V, V.conic)


def test_mismatch_raises_theorem_violation(monkeypatch):
    V = canonical_scroll(7)
    monkeypatch.setattr(census, "expected_r", lambda q: [0, 0, 0, 0])
    with pytest.raises(TheoremViolation):
        census.r_census(V)


def test_quartic_branches_q7(report7):
    qa = next(a for a in report7["audits"] if a["name"] == "quartic_alpha_point")
    assert qa["branches"] == {"conic_point": 18816, "nucleus": 0, "other": 0}


def test_renderings_round_trip(report7):
    text = census.render(report7, "json")
    assert census.from_json(text) == json.loads(json.dumps(report7))
    csv_text = census.render(report7, "csv")
    assert "table,quintic,115248" in csv_text
    assert csv_text.splitlines()[0] == "section,key,value"
    md = census.render(report7, "md")
    assert md.startswith("# Hyperplane census, q = 7")
    assert "| quartic1 | 18816 |" in md


def test_conic_sections_share_one_plane():
    V = canonical_scroll(7)
    t = census.hyperplane_census(V)
    assert len(t.conic_duals) == 400
    assert census.conic_count(V, t.conic_duals[:50]) == 1
    assert span(list(V.conic)) == V.alpha

from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from goalfuzz import (
    build_model,
    export_csv,
    export_dot,
    export_json,
    format_number,
    impact_matrix,
    parse_model,
    serialize_model,
)
from goalfuzz import errors
from goalfuzz.engine import ImpactMatrix
from goalfuzz.model import FuzzyRule

from corpus import corpus, random_model

MINIMAL = "root s\np1: s -> i1 @ 0.5\n"


def test_parse_sample(sample):
    assert len(sample.goals) == 12 and len(sample.interventions) == 10


def test_minimal_round_trip():
    m = parse_model(MINIMAL)
    assert len(m.rules) == 1
    assert serialize_model(m) == MINIMAL


def test_sample_serializes_to_17_lines(sample):
    text = serialize_model(sample)
    assert len(text.splitlines()) == 17
    assert "p5: g3 -> g6 g7 g8 i2 @ 0.7" in text.splitlines()
    assert parse_model(text) == sample


def test_crlf_and_comments():
    text = "# header\r\nroot s   # the root\r\n\r\np1: s -> i1 @ 0.5\r\n"
    assert parse_model(text) == parse_model(MINIMAL)


def test_declarations_round_trip():
    text = "root s\ngoal g9\nintervention i7, i8\np1: s -> g9 i1 @ 0.25\n"
    m = parse_model(text)
    assert "g9" in m.goals and {"i7", "i8"} <= m.interventions
    assert serialize_model(m) == text


def test_out_of_range_weight_has_line():
    with pytest.raises(errors.MembershipOutOfRangeError) as info:
        parse_model("p1: s -> i1 @ 1.2")
    assert info.value.line == 1


@pytest.mark.parametrize(
    "text, line, col",
    [
        ("root s\np1: s -> i1 @ 5e-1\n", 2, 15),
        ("root s\np1: s -> i1 @ 0.1234567891\n", 2, 15),
        ("root s\np1: s i1 @ 0.5\n", 2, 7),
        ("root s\np1: s -> @ 0.5\n", 2, 10),
        ("root s\np1: s -> i1 0.5\n", 2, 13),
        ("root s\np1: s -> i1 @\n", 2, 14),
        ("root s\np1: s -> i1 @ 0.5 extra\n", 2, 19),
        ("root s\nroot t\np1: s -> i1 @ 0.5\n", 2, 1),
        ("root\n", 1, 5),
        ("banana s\n", 1, 8),
        ("root s\np1: s -> _x @ 0.5\n", 2, 10),
        ("root s\np1: s -> i1 @ 0.5 $\n", 2, 19),
        ("p1: s -> i1 @ 0.5\n", 1, 1),
        ("root s\n", 1, 1),
        ("", 1, 1),
    ],
)
def test_syntax_errors_are_located(text, line, col):
    with pytest.raises(errors.ModelSyntaxError) as info:
        parse_model(text)
    assert (info.value.line, info.value.col) == (line, col)
    assert 1 <= info.value.line <= max(1, len(text.splitlines()))


def test_model_errors_get_lines():
    text = "root a\np1: a -> b @ 0.5\np2: b -> c @ 0.5\np3: c -> a @ 0.5\n"
    with pytest.raises(errors.CycleDetectedError) as info:
        parse_model(text)
    assert info.value.line == 2

    with pytest.raises(errors.DuplicateRuleIdError) as info:
        parse_model("root s\np1: s -> a @ 0.5\np1: s -> b @ 0.5\n")
    assert info.value.line == 3

    with pytest.raises(errors.KindConflictError) as info:
        parse_model("root s\nintervention a\np1: s -> a @ 0.5\np2: a -> b @ 0.5\n")
    assert info.value.line == 4


@pytest.mark.parametrize(
    "value, text",
    [(0.5, "0.5"), (0.9, "0.9"), (1.0, "1"), (0.0, "0"), (0.15, "0.15"), (1e-9, "0.000000001"),
     (0.123456789, "0.123456789")],
)
def test_format_number(value, text):
    assert format_number(value) == text
    assert float(text) == value


def test_corpus_round_trip():
    for m in corpus():
        assert parse_model(serialize_model(m)) == m


decimal_weight = st.integers(0, 10**9).map(lambda k: float(f"{k / 10**9:.9f}"))


@settings(max_examples=200, deadline=None)
@given(st.lists(decimal_weight, min_size=1, max_size=8))
def test_weights_round_trip(weights):
    rules = [FuzzyRule(f"p{k}", "s", (f"i{k}",), w) for k, w in enumerate(weights)]
    m = build_model("s", rules)
    again = parse_model(serialize_model(m))
    assert [r.membership for r in again.rules] == weights


def test_export_json_minimal():
    doc = json.loads(export_json(parse_model(MINIMAL)))
    assert list(doc) == ["root", "goals", "interventions", "rules"]
    assert doc["rules"] == [{"id": "p1", "lhs": "s", "rhs": ["i1"], "membership": 0.5}]


def test_export_json_with_matrix(sample):
    doc = json.loads(export_json(sample, impact_matrix(sample)))
    assert doc["impact"]["s"]["i1"] == 0.9
    assert doc["goals"][:3] == ["g1", "g2", "g3"]
    assert doc["interventions"][-1] == "i10"


def test_export_json_mismatch(sample):
    other = impact_matrix(parse_model(MINIMAL))
    with pytest.raises(errors.MatrixModelMismatchError):
        export_json(sample, other)


def test_export_csv_rows(sample):
    lines = export_csv(impact_matrix(sample)).splitlines()
    assert lines[0] == "goal,i1,i2,i3,i4,i5,i6,i7,i8,i9,i10"
    assert lines[1].startswith("s,")
    assert "g4,0,0,0.6,0,0,0,0,0,0,0" in lines
    g11 = next(line for line in lines if line.startswith("g11,"))
    assert g11.endswith(",0.8,0.85")


def test_export_csv_single_pair():
    matrix = ImpactMatrix("x", ("s",), ("i1",), {("s", "i1"): 1.0})
    assert export_csv(matrix) == "goal,i1\ns,1\n"


def test_export_dot_minimal():
    dot = export_dot(parse_model(MINIMAL))
    assert dot.count("shape=ellipse") + dot.count("shape=box") == 2
    assert dot.count("->") == 1
    assert "shape=point" not in dot


def test_export_dot_sample(sample):
    dot = export_dot(sample)
    assert dot.count("shape=point") == 3
    assert dot.count("shape=ellipse") == 12
    assert dot.count("shape=box") == 10
    assert '"s" -> "p1/and"' in dot


def test_dot_junctions_match_multi_symbol_rules():
    for m in corpus(60, seed=3):
        assert export_dot(m).count("shape=point") == sum(len(r.rhs) > 1 for r in m.rules)


def test_exports_are_deterministic():
    import random

    m = random_model(random.Random(7))
    mat = impact_matrix(m)
    assert export_csv(mat) == export_csv(impact_matrix(m))
    assert export_json(m, mat) == export_json(m, impact_matrix(m))
    assert export_dot(m) == export_dot(parse_model(serialize_model(m)))

import json

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from conftest import jets
from frontalrec.gallery import normal_form
from frontalrec.germs import JetMap
from frontalrec.jets import Jet
from frontalrec.parsing import ParseError, format_jetmap, parse_document, parse_germ, parse_polynomial
from frontalrec.recognize import Tag

NAMES = ["t1", "t2"]


def doc(*comps, vars_="t1, t2", extra=""):
    return f"vars: {vars_}\n{extra}" + "".join(f"f: {c}\n" for c in comps)


def test_ce_transcription():
    assert parse_germ(doc("t1", "t2^2", "t2^3")) == normal_form(Tag.CUSPIDAL_EDGE)


def test_sw_fractions():
    assert parse_germ(doc("t1", "t2^3 + t1*t2", "3/4*t2^4 + 1/2*t1*t2^2")) == normal_form(Tag.SWALLOWTAIL)


def test_unknown_variable_position():
    with pytest.raises(ParseError) as exc:
        parse_germ(doc("t1", "t2^2", "t2^2 + t3"))
    assert exc.value.line == 4 and exc.value.column == 11
    assert "t3" in str(exc.value)


@pytest.mark.parametrize("text, msg", [
    ("t1 / t2", "non-constant"), ("t1 / 0", "division by zero"), ("t1 ^ t2", "exponent"),
    ("(t1 + t2", "expected"), ("t1 $ 2", "unexpected character"), ("", "empty"), ("t1^2^3", "chained"),
])
def test_expression_errors(text, msg):
    with pytest.raises(ParseError, match=msg):
        parse_polynomial(text, NAMES)


def test_expression_features():
    p = parse_polynomial("-(t1 - 2*t2)**2 / 4 + +3", NAMES)
    assert p == {(2, 0): mpq(-1, 4), (1, 1): mpq(1), (0, 2): mpq(-1), (0, 0): mpq(3)}


def test_constant_term_requires_base_point():
    with pytest.raises(ParseError, match="constant term"):
        parse_germ(doc("1 + t1", "t2^2"))


def test_base_point_translation():
    f = parse_germ(doc("t1 - 1", "(t2 - 2)^2", extra="base: 1, 2\n"))
    assert f == parse_germ(doc("t1", "t2^2"))
    g = parse_germ(doc("t1^2", "t2", extra="base: 1, 0\n"))
    assert g == parse_germ(doc("2*t1 + t1^2", "t2"))


def test_document_fields_and_metadata():
    d = parse_document(doc("t1", "t2^2", extra="order: 7\nlabel: fold  # comment\n"))
    assert d.order == 7 and d.metadata == {"label": "fold"}
    assert d.to_jetmap().order == 7
    assert d.to_jetmap(9).order == 9


@pytest.mark.parametrize("text, msg", [
    ("f: t1\n", "vars"), ("vars: t1, t2\n", "components"), ("vars: t1, t1\nf: t1\nf: t1\n", "distinct"),
    ("vars: t1, t2\nf: t1\n", "at least as many"), ("vars: t1\nbase: 1, 2\nf: t1\n", "base point"),
    ("vars: t1\norder: x\nf: t1\n", "integer"), ("vars: t1\nnonsense\n", "key: value"),
    ("{\"vars\": [\"t1\"]", "invalid JSON"), ("{\"vars\": [\"t1\"]}", "components"),
])
def test_document_errors(text, msg):
    with pytest.raises(ParseError, match=msg):
        parse_document(text)


def test_json_document_and_report_input():
    data = {"vars": ["u", "t"], "components": ["t + u", "t^3 + 3*u*t^2"], "order": 8, "metadata": {"k": "v"}}
    d = parse_document(json.dumps(data))
    assert d.to_json() == data
    assert parse_document(json.dumps({"tool": "frontalrec", "input": data})).to_json() == data


@given(st.lists(jets(order=6, max_terms=5, min_degree=1), min_size=2, max_size=4))
def test_format_parse_round_trip(comps):
    f = JetMap(comps)
    assert parse_document(doc(*format_jetmap(f))).to_jetmap(6) == f

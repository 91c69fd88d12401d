import random

import pytest

from conftest import FIGURE_EIGHT_PD, TREFOIL_PD
from oracles import random_knot
from symknot.diagram import (
    KnotDiagram,
    connected_sum,
    mirror,
    parse_pd,
    relabel,
    seifert_data,
    serialize_pd,
    validate,
)
from symknot.errors import DiagramError
from symknot.invariants import determinant
from symknot.seifert import seifert_matrix
from symknot import linalg


def test_empty_text_is_round_unknot():
    d = parse_pd("")
    assert d.crossing_count == 0
    assert validate(d).ok


def test_trefoil_parses_as_three_crossing_knot():
    d = parse_pd(TREFOIL_PD)
    assert d.crossing_count == 3
    assert determinant(d) == 3


def test_kinked_unknot_is_valid():
    d = parse_pd("X(1,1,2,2)")
    assert validate(d).ok
    assert determinant(d) == 1


@pytest.mark.parametrize("text", ["X(1,2,3)", "Y(1,2,3,4)", "X(0,1,1,0)", "X(a,b,c,d)"])
def test_malformed_tokens_rejected(text):
    with pytest.raises(DiagramError):
        parse_pd(text)


def test_arc_used_three_times_reported():
    report = validate(KnotDiagram.from_crossings([(1, 3, 3, 3)]))
    assert not report.ok
    assert any(e.startswith("arc multiplicity") and "arc 3" in e for e in report.errors)


def test_split_link_reports_two_components():
    report = validate(KnotDiagram.from_crossings([(1, 1, 2, 2), (3, 3, 4, 4)]))
    assert "component count 2: diagram is a link, not a knot" in report.errors


def test_validate_never_raises_on_garbage():
    report = validate(KnotDiagram.from_crossings([(1, 2, 3, 4), (3, 2, 1, 4)]))
    assert not report.ok and len(report.errors) >= 1


def test_mirror_involution_and_sign_flip():
    rng = random.Random(11)
    for _ in range(20):
        d = random_knot(rng, 8)
        m = mirror(d)
        assert mirror(m) == d
        assert sorted(m.signs) == sorted(-s for s in d.signs)


def test_mirror_of_trefoil_and_unknot():
    assert determinant(mirror(parse_pd(TREFOIL_PD))) == 3
    assert mirror(parse_pd("")) == parse_pd("")


def test_connected_sum_counts_and_determinant():
    t = parse_pd(TREFOIL_PD)
    s = connected_sum(t, mirror(t))
    assert s.crossing_count == 6
    assert validate(s).ok
    assert determinant(s) == 9


def test_unknot_is_identity_for_connected_sum():
    t = parse_pd(TREFOIL_PD)
    assert connected_sum(parse_pd(""), t) == relabel(t)
    assert connected_sum(t, parse_pd("")) == relabel(t)


def test_connected_sum_associative_on_determinant():
    rng = random.Random(5)
    for _ in range(20):
        a, b, c = (random_knot(rng, 5) for _ in range(3))
        left = connected_sum(a, connected_sum(b, c))
        right = connected_sum(connected_sum(a, b), c)
        assert determinant(left) == determinant(right) == determinant(a) * determinant(b) * determinant(c)


def test_serialize_round_trip_byte_exact():
    rng = random.Random(2)
    for _ in range(30):
        d = random_knot(rng, 10)
        text = serialize_pd(d)
        assert serialize_pd(parse_pd(text)) == text
        assert parse_pd(text) == d


def test_serialization_sorted_by_first_label():
    text = serialize_pd(parse_pd("X(5,2,6,3) X(1,4,2,5) X(3,6,4,1)"))
    assert text == TREFOIL_PD


@pytest.mark.parametrize("text, circles, genus", [
    ("", 1, 0),
    (TREFOIL_PD, 2, 1),
    (FIGURE_EIGHT_PD, 3, 1),
])
def test_seifert_data_examples(text, circles, genus):
    sd = seifert_data(parse_pd(text))
    assert (sd.circle_count, sd.genus) == (circles, genus)
    assert sd.euler_characteristic == circles - sd.crossing_count


def test_seifert_euler_identity_and_mirror_genus():
    rng = random.Random(9)
    for _ in range(30):
        d = random_knot(rng, 10)
        sd = seifert_data(d)
        assert sd.circle_count - sd.crossing_count == 1 - 2 * sd.genus
        assert seifert_data(mirror(d)).genus == sd.genus


def test_seifert_matrix_examples():
    assert seifert_matrix(parse_pd("")) == []
    v = seifert_matrix(parse_pd(TREFOIL_PD))
    sym = [[v[i][j] + v[j][i] for j in range(2)] for i in range(2)]
    assert len(v) == 2 and abs(linalg.bareiss_det(sym)) == 3


def test_seifert_matrix_size_is_twice_genus():
    rng = random.Random(4)
    for _ in range(50):
        d = random_knot(rng, 10)
        assert len(seifert_matrix(d)) == 2 * seifert_data(d).genus

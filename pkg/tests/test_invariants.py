import random

import pytest

from conftest import TREFOIL_PD
from oracles import fox_alexander, random_knot
from symknot import linalg
from symknot.diagram import connected_sum, mirror, parse_pd
from symknot.errors import InconsistencyError
from symknot.invariants import (
    ONE,
    LaurentPolynomial,
    alexander_polynomial,
    bounds_report,
    determinant,
    goeritz_matrix,
    h1_double_cover,
    rs_lower_bound,
    smith_normal_form,
)

TREFOIL_ALEX = LaurentPolynomial.from_coefficients([1, -1, 1])


def trefoil():
    return parse_pd(TREFOIL_PD)


def n_trefoils(n):
    d = trefoil()
    for _ in range(n - 1):
        d = connected_sum(d, trefoil())
    return d


def test_alexander_examples():
    assert alexander_polynomial(parse_pd("")) == ONE
    assert alexander_polynomial(trefoil()) == TREFOIL_ALEX
    square = connected_sum(trefoil(), mirror(trefoil()))
    assert alexander_polynomial(square) == TREFOIL_ALEX * TREFOIL_ALEX


def test_alexander_matches_fox_calculus():
    rng = random.Random(21)
    for _ in range(40):
        d = random_knot(rng, 10)
        assert alexander_polynomial(d) == fox_alexander(d)


def test_alexander_normalization():
    rng = random.Random(22)
    for _ in range(20):
        poly = alexander_polynomial(random_knot(rng, 9))
        assert poly.terms[0][0] == 0 and poly.terms[-1][1] > 0
        assert abs(poly(1)) == 1


def test_alexander_multiplicative():
    rng = random.Random(23)
    for _ in range(20):
        a, b = random_knot(rng, 6), random_knot(rng, 6)
        assert alexander_polynomial(connected_sum(a, b)) == alexander_polynomial(a) * alexander_polynomial(b)
        assert determinant(connected_sum(a, b)) == determinant(a) * determinant(b)


@pytest.mark.parametrize("d, det", [(parse_pd(""), 1), (parse_pd(TREFOIL_PD), 3)])
def test_determinant_examples(d, det):
    assert determinant(d) == det


def test_determinant_square_knot():
    assert determinant(connected_sum(trefoil(), mirror(trefoil()))) == 9


def test_goeritz_examples():
    assert goeritz_matrix(parse_pd("")) == []
    assert abs(linalg.bareiss_det(goeritz_matrix(trefoil()))) == 3


def test_goeritz_and_alexander_agree():
    rng = random.Random(24)
    for _ in range(50):
        d = random_knot(rng, 10)
        assert abs(linalg.bareiss_det(goeritz_matrix(d))) == abs(alexander_polynomial(d)(-1))
        assert determinant(d) % 2 == 1


@pytest.mark.parametrize("matrix, factors", [
    ([[2, 0], [0, 3]], (6,)),
    ([[0]], (0,)),
    ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], ()),
    ([[2, 4], [6, 8]], (2, 4)),
])
def test_smith_normal_form_examples(matrix, factors):
    group = smith_normal_form(matrix)
    assert group.invariant_factors == factors
    assert group.min_generators == len(factors)


def test_smith_divisibility_chain_random():
    rng = random.Random(25)
    for _ in range(40):
        n = rng.randint(1, 5)
        m = [[rng.randint(-6, 6) for _ in range(n)] for _ in range(n)]
        f = smith_normal_form(m).invariant_factors
        assert all(b % a == 0 for a, b in zip(f, f[1:]) if a)
        det = abs(linalg.bareiss_det(m))
        if det:
            from math import prod
            assert prod(f) == det


def test_h1_of_unknot_and_trefoil():
    assert h1_double_cover(parse_pd("")).invariant_factors == ()
    group = h1_double_cover(trefoil())
    assert group.invariant_factors == (3,) and group.min_generators == 1


@pytest.mark.parametrize("n", [1, 2, 3])
def test_h1_of_trefoil_sums(n):
    group = h1_double_cover(n_trefoils(n))
    assert group.invariant_factors == (3,) * n


def test_h1_order_is_determinant():
    rng = random.Random(26)
    for _ in range(30):
        d = random_knot(rng, 10)
        assert h1_double_cover(d).order == determinant(d)


@pytest.mark.parametrize("h, r", [(0, 0), (1, 1), (3, 1), (4, 2), (7, 2), (8, 3)])
def test_rs_lower_bound(h, r):
    assert rs_lower_bound(h) == r


def test_bounds_report_unknot_and_upper():
    b = bounds_report(parse_pd(""), 0)
    assert (b.heegaard_upper, b.heegaard_lower, b.rs_lower, b.genus_lower, b.determinant) == (0, 0, 0, 0, 1)
    assert b.consistent
    assert bounds_report(parse_pd(""), 2).heegaard_upper == 6


def test_bounds_report_flags_impossible_witness():
    b = bounds_report(n_trefoils(3), 0)
    assert not b.consistent
    assert any("rs_lower" in f for f in b.flags)


def test_bounds_report_rejects_negative_r():
    with pytest.raises(ValueError):
        bounds_report(trefoil(), -1)


def test_laurent_polynomial_text():
    assert str(TREFOIL_ALEX) == "t^2 - t + 1"
    assert str(LaurentPolynomial(())) == "0"


def test_inconsistency_error_is_not_input_error():
    assert not issubclass(InconsistencyError, ValueError)

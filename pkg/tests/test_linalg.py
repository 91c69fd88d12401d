import random

import pytest

from symknot import linalg


def test_bareiss_det_small():
    assert linalg.bareiss_det([]) == 1
    assert linalg.bareiss_det([[2, 1], [1, 2]]) == 3
    assert linalg.bareiss_det([[0, 1], [1, 0]]) == -1
    assert linalg.bareiss_det([[1, 2], [2, 4]]) == 0


def test_bareiss_matches_cofactor_expansion():
    def cofactor(m):
        if len(m) == 1:
            return m[0][0]
        return sum((-1) ** j * m[0][j] * cofactor([row[:j] + row[j + 1:] for row in m[1:]])
                   for j in range(len(m)))

    rng = random.Random(61)
    for _ in range(50):
        n = rng.randint(1, 5)
        m = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
        assert linalg.bareiss_det(m) == cofactor(m)


def test_rank():
    assert linalg.rank([[1, 2], [2, 4]]) == 1
    assert linalg.rank([[1, 0], [0, 1]]) == 2
    assert linalg.rank([[0, 0]]) == 0


def test_integer_kernel():
    m = [[1, 1, 1]]
    ker = linalg.integer_kernel(m)
    assert len(ker) == 2
    for v in ker:
        assert sum(v) == 0


def test_unit_solutions():
    m = [[2, 3, 0], [0, 1, 1]]
    xs = linalg.unit_solutions(m)
    for i, x in enumerate(xs):
        assert [sum(r[j] * x[j] for j in range(3)) for r in m] == [int(k == i) for k in range(2)]
    with pytest.raises(ValueError):
        linalg.unit_solutions([[2, 4]])


def test_solve_unit_pairing():
    for w in ([3, 5], [0, 7, 2], [-4, 9, 6]):
        x = linalg.solve_unit_pairing(w)
        assert sum(a * b for a, b in zip(x, w)) == 1
    with pytest.raises(ValueError):
        linalg.solve_unit_pairing([2, 4])


def test_poly_det():
    # det([[1, t], [t, 1]]) = 1 - t^2
    assert linalg.poly_det([[1, 0], [0, 1]], [[0, 1], [1, 0]]) == [1, 0, -1]
    assert linalg.poly_det([], []) == [1]


def test_primitive():
    assert linalg.primitive([4, -6, 8]) == [2, -3, 4]
    assert linalg.primitive([0, 0]) == [0, 0]

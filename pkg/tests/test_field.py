import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gmmds.field import (
    FieldMatrix,
    PrimeField,
    UniPoly,
    eval_poly,
    is_prime,
    next_prime,
    poly_from_roots,
)
from oracles import leibniz_det, poly_product_eval

F7 = PrimeField(7)
F101 = PrimeField(101)


def test_primality():
    assert is_prime(2) and is_prime(257) and is_prime(101)
    assert not is_prime(1) and not is_prime(91) and not is_prime(2**16)
    assert next_prime(258) == 263


def test_nonprime_modulus_rejected():
    with pytest.raises(ValueError):
        PrimeField(6)


@given(st.integers(1, 100), st.integers(0, 100))
def test_field_axioms(a, b):
    x, y = F101(a), F101(b)
    assert (x * y) * x.inverse() == y
    assert x + (-x) == F101(0)
    assert x * F101(1) == x


def test_poly_from_roots_examples():
    assert poly_from_roots(F7, []).coeffs == (1,)
    assert poly_from_roots(F7, [3]).coeffs == (4, 1)  # x - 3
    # roots {2, 3}: x^2 - 5x + 6 = x^2 + 2x + 6 over GF(7)
    assert poly_from_roots(F7, [2, 3]).coeffs == (6, 2, 1)


def test_eval_poly_examples():
    assert int(eval_poly(UniPoly(F7), 5)) == 0
    assert int(eval_poly(poly_from_roots(F7, [4]), 4)) == 0
    assert int(eval_poly(UniPoly(F7, [6, 2, 1]), 2)) == 0


@settings(max_examples=60)
@given(st.lists(st.integers(0, 100), max_size=8), st.integers(0, 100))
def test_poly_from_roots_matches_direct_product(roots, x):
    p = poly_from_roots(F101, roots)
    assert p.degree == len(roots)
    assert int(p.coefficient(len(roots))) == 1
    assert int(eval_poly(p, x)) == poly_product_eval(roots, x, 101)


def test_poly_arithmetic_roundtrip():
    a = UniPoly(F7, [1, 2, 3])
    b = UniPoly(F7, [5, 6])
    assert (a * b).degree == 3
    assert (a + b - b).coeffs == a.coeffs
    assert a.shift(2).coeffs == (0, 0, 1, 2, 3)


def test_det_examples():
    assert int(FieldMatrix.identity(F7, 3).det()) == 1
    assert int(FieldMatrix(F7, [[1, 2], [1, 2]]).det()) == 0
    assert int(FieldMatrix(F7, [[1, 2], [3, 4]]).det()) == 5  # -2 mod 7


def test_det_rejects_nonsquare():
    with pytest.raises(ValueError):
        FieldMatrix(F7, [[1, 2, 3], [4, 5, 6]]).det()


@pytest.mark.parametrize("field", [F7, F101])
@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_det_matches_leibniz(field, n):
    rng = random.Random(n * field.p)
    for _ in range(40):
        rows = [[rng.randrange(field.p) for _ in range(n)] for _ in range(n)]
        assert int(FieldMatrix(field, rows).det()) == leibniz_det(rows, field.p)


def test_left_nullspace_examples():
    assert FieldMatrix.identity(F7, 3).left_nullspace() == []
    zero = FieldMatrix(F7, [[0, 0], [0, 0]])
    assert len(zero.left_nullspace()) == 2
    basis = FieldMatrix(F7, [[1, 2], [2, 4]]).left_nullspace()
    assert len(basis) == 1
    v = [int(x) for x in basis[0]]
    # must be a scalar multiple of [2, -1] = [2, 6]
    assert (v[0] * 6 - v[1] * 2) % 7 == 0 and any(v)


def test_nullspace_annihilates_and_rank_nullity():
    rng = random.Random(11)
    for _ in range(50):
        r, c = rng.randrange(1, 5), rng.randrange(1, 5)
        m = FieldMatrix(F7, [[rng.randrange(7) for _ in range(c)] for _ in range(r)])
        basis = m.left_nullspace()
        for v in basis:
            prod = [
                sum(int(v[i]) * m.row(i)[j] for i in range(r)) % 7 for j in range(c)
            ]
            assert all(x == 0 for x in prod)
        assert m.rank() + len(basis) == r


def test_matmul_and_transpose():
    a = FieldMatrix(F7, [[1, 2], [3, 4]])
    b = FieldMatrix(F7, [[1, 0], [0, 1]])
    assert (a @ b).int_rows() == a.int_rows()
    assert a.transpose().int_rows() == [[1, 3], [2, 4]]

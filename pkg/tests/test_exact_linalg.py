from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from starcat.exact_linalg import (Field, Fp, Matrix, Subspace, kernel, kernel_vectors, rref,
                                  solve, solve_sparse, vadd, vscale)


def test_prime_field_arithmetic():
    F = Field(7)
    a, b = F(3), F(5)
    assert a + b == F(1)
    assert a * b == F(1)
    assert (a / b) * b == a
    assert F(Fraction(1, 2)) * 2 == F(1)
    assert -a == F(4)


def test_field_rejects_small_or_composite():
    for p in (2, 4, 9, 1):
        with pytest.raises(ValueError):
            Field(p)


def test_mixing_prime_fields_fails():
    with pytest.raises(ValueError):
        Fp(1, 5) + Fp(1, 7)


def test_sparse_vector_helpers():
    assert vadd({0: 1, 1: 2}, {1: -2, 3: 1}) == {0: 1, 3: 1}
    assert vscale({0: 2}, Fraction(1, 2)) == {0: 1}
    assert vscale({0: 2}, 0) == {}


def test_rref_and_kernel():
    m = Matrix.from_rows([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    r, piv = rref(m)
    assert piv == [0, 1]
    K = kernel(m)
    assert K.dim == 1
    v = K.sparse_basis()[0]
    assert m.apply(v) == {}


def test_solve_consistent_and_inconsistent():
    m = Matrix.from_rows([[1, 1], [1, -1]])
    assert solve(m, [2, 0]) == [1, 1]
    singular = Matrix.from_rows([[1, 1], [2, 2]])
    assert solve(singular, [1, 3]) is None
    assert solve_sparse([{0: 1}, {1: 1}], {0: 2, 1: 3}) == {0: 2, 1: 3}


def test_inverse_and_identity():
    m = Matrix.from_rows([[2, 1], [1, 1]])
    assert (m @ m.inverse()).is_identity()
    assert not Matrix.from_rows([[1, 2], [2, 4]]).is_invertible()


def test_subspace_operations():
    U = Subspace(3, [{0: 1}, {1: 1}])
    W = Subspace(3, [{1: 1}, {2: 1}])
    assert (U + W).dim == 3
    assert (U & W).dim == 1
    assert U.contains({0: 2, 1: -1})
    assert not U.contains({2: 1})
    assert Subspace.zero(3).dim == 0 and Subspace.full(3).dim == 3
    assert Subspace(3, [{0: 1, 1: 1}]).is_subspace_of(U)
    assert U.key() == Subspace(3, [{0: 1, 1: 1}, {0: 1, 1: -1}]).key()


small = st.integers(min_value=-3, max_value=3)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_rank_agrees_with_sympy(r, c, data):
    rows = [[data.draw(small) for _ in range(c)] for _ in range(r)]
    m = Matrix.from_rows(rows)
    assert m.rank() == sympy.Matrix(rows).rank()
    assert m.rank() + kernel(m).dim == c


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_kernel_vectors_are_annihilated_mod_p(r, c, data):
    F = Field(5)
    rows = [{j: F(data.draw(small)) for j in range(c)} for _ in range(r)]
    rows = [{j: x for j, x in row.items() if x} for row in rows]
    for v in kernel_vectors(rows, c):
        for row in rows:
            assert sum((x * v.get(j, 0) for j, x in row.items()), F(0)) == F(0)

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from linsite import _kernels_py
from linsite.errors import FieldMismatch, ShapeError
from linsite.exactla import (
    GF2,
    QQ,
    Matrix,
    PrimeField,
    field_from_json,
    inverse,
    kernel_basis,
    rank,
    rref,
    solve,
    span_ops,
)

F3 = PrimeField(3)


def test_rank_examples():
    assert rank(Matrix.identity(GF2, 2)) == 2
    assert rank(Matrix.zeros(QQ, 3, 4)) == 0
    assert rank(Matrix(QQ, [[1, 2], [2, 4]])) == 1


def test_kernel_examples():
    assert kernel_basis(Matrix.identity(GF2, 3)).cols == 0
    k = kernel_basis(Matrix.zeros(QQ, 3, 3))
    assert k.cols == 3 and rank(k) == 3
    k = kernel_basis(Matrix(GF2, [[1, 1]]))
    assert k.columns() == [(1, 1)]


def test_solve_examples():
    b = Matrix(F3, [[1, 2], [0, 1]])
    assert solve(Matrix.identity(F3, 2), b) == b
    assert solve(Matrix.zeros(GF2, 2, 2), Matrix(GF2, [[1], [0]])) is None
    x = solve(Matrix(GF2, [[1, 1], [0, 1]]), Matrix(GF2, [[0], [1]]))
    assert x.columns() == [(1, 1)]


def test_span_ops_examples():
    a = Matrix(GF2, [[1], [0]])
    b = Matrix(GF2, [[0], [1]])
    assert span_ops(a, a).equality
    z = span_ops(Matrix.zeros(GF2, 2, 1), b)
    assert z.intersection.is_zero() and z.containment
    s = span_ops(a, b)
    assert rank(s.sum) == 2 and rank(s.intersection) == 0


def test_field_mismatch_and_shape():
    with pytest.raises(FieldMismatch):
        Matrix.identity(GF2, 2) @ Matrix.identity(QQ, 2)
    with pytest.raises(ShapeError):
        Matrix.identity(GF2, 2) @ Matrix.identity(GF2, 3)


def test_rational_json_roundtrip():
    assert QQ.scalar_from_json(QQ.scalar_to_json(Fraction(-3, 7))) == Fraction(-3, 7)
    assert field_from_json(F3.to_json()) == F3
    assert field_from_json(QQ.to_json()) == QQ


def test_inverse():
    m = Matrix(QQ, [[2, 1], [1, 1]])
    assert inverse(m) @ m == Matrix.identity(QQ, 2)
    assert inverse(Matrix(QQ, [[1, 2], [2, 4]])) is None


def _matrices(field, max_r=4, max_c=4):
    elems = st.sampled_from(list(range(field.p))) if field is not QQ else st.fractions(min_value=-5, max_value=5, max_denominator=4)
    return st.integers(1, max_r).flatmap(
        lambda r: st.integers(1, max_c).flatmap(lambda c: st.lists(st.lists(elems, min_size=c, max_size=c), min_size=r, max_size=r))
    )


@pytest.mark.parametrize("field", [GF2, F3, QQ], ids=["F2", "F3", "Q"])
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_rank_nullity(field, data):
    m = Matrix(field, data.draw(_matrices(field)))
    k = kernel_basis(m)
    assert rank(m) + k.cols == m.cols
    if k.cols:
        assert (m @ k).is_zero()


@pytest.mark.parametrize("field", [GF2, F3, QQ], ids=["F2", "F3", "Q"])
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_solve_contract(field, data):
    rows = data.draw(_matrices(field))
    m = Matrix(field, rows)
    b = Matrix(field, [[data.draw(st.sampled_from([0, 1]))] for _ in range(m.rows)])
    x = solve(m, b)
    if x is None:
        assert rank(m.hstack(b)) > rank(m)
    else:
        assert m @ x == b


@pytest.mark.parametrize("field", [GF2, F3, QQ], ids=["F2", "F3", "Q"])
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_span_dimension_formula(field, data):
    a = Matrix(field, data.draw(_matrices(field, 3, 3)))
    rows = a.rows
    b = Matrix(field, [data.draw(st.lists(st.sampled_from([0, 1, 2]), min_size=3, max_size=3)) for _ in range(rows)])
    s = span_ops(a, b)
    assert rank(s.sum) + rank(s.intersection) == rank(a) + rank(b)
    assert span_ops(s.intersection, a).containment and span_ops(s.intersection, b).containment
    assert span_ops(a, s.sum).containment and span_ops(b, s.sum).containment


@settings(max_examples=100, deadline=None)
@given(
    p=st.sampled_from([2, 3, 5, 7]),
    rows=st.lists(st.lists(st.integers(0, 20), min_size=5, max_size=5), min_size=0, max_size=6),
)
def test_compiled_and_pure_kernels_agree(p, rows):
    from linsite import exactla

    pure = _kernels_py.rref_modp([list(r) for r in rows], 5, p)
    used = exactla._rref_modp([list(r) for r in rows], 5, p)
    assert [list(r) for r in pure[0]] == [list(r) for r in used[0]]
    assert list(pure[1]) == list(used[1])


def test_rref_is_deterministic_leftmost_pivot():
    red, piv = rref(GF2, [(0, 1, 1), (1, 1, 0)], 3)
    assert piv == [0, 1]
    assert red == [(1, 0, 1), (0, 1, 1)]

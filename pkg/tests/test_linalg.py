from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from frobkit.errors import DimensionMismatch, FieldMismatch
from frobkit.linalg import (
    QQ,
    Field,
    Matrix,
    kernel_basis,
    kron,
    rank,
    rref,
    solve,
)

F2 = Field.prime(2)
F5 = Field.prime(5)


def oracle_rank(rows, p=0):
    """Plain Gaussian elimination on Fractions (or ints mod p)."""
    m = [[Fraction(x) if not p else x % p for x in r] for r in rows]
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                if p:
                    f = m[i][c] * pow(m[r][c], -1, p) % p
                    m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
                else:
                    f = m[i][c] / m[r][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
    return r


def test_identity_rref():
    r, piv, red = rref(Matrix.identity(QQ, 2))
    assert (r, piv) == (2, [0, 1])
    assert red.is_identity()


def test_proportional_rows():
    r, piv, _ = rref(Matrix.from_rows(QQ, [[1, 2], [2, 4]]))
    assert (r, piv) == (1, [0])


def test_mod2_rank():
    r, _, red = rref(Matrix.from_rows(F2, [[1, 1], [1, 1]]))
    assert r == 1
    assert red == Matrix.from_rows(F2, [[1, 1], [0, 0]])


def test_mixed_field_entries():
    from flint import nmod

    with pytest.raises(FieldMismatch):
        Matrix.from_rows(QQ, [[1, nmod(1, 5)]])
    with pytest.raises(FieldMismatch):
        Matrix.identity(QQ, 2) @ Matrix.identity(F5, 2)


def test_kernel_examples():
    assert kernel_basis(Matrix.zeros(QQ, 2, 3)).cols == 3
    assert kernel_basis(Matrix.identity(QQ, 3)).cols == 0
    k = kernel_basis(Matrix.from_rows(QQ, [[1, -1]]))
    assert k.cols == 1
    assert k.column(0) == [1, 1]


def test_solve_examples():
    b = [QQ(3), QQ(-1)]
    assert solve(Matrix.identity(QQ, 2), b) == b
    x = solve(Matrix.from_rows(QQ, [[1, 1]]), [2])
    assert x[0] + x[1] == 2
    assert solve(Matrix.from_rows(QQ, [[1], [1]]), [0, 1]) is None
    with pytest.raises(DimensionMismatch):
        solve(Matrix.identity(QQ, 2), [1])


def test_fp_scalars_reduce():
    assert int(F5(7)) == 2
    assert F5(Fraction(1, 2)) * F5(2) == F5(1)


def test_kron_shape_and_entries():
    a = Matrix.from_rows(QQ, [[1, 2], [0, 1]])
    b = Matrix.from_rows(QQ, [[0, 1], [1, 0]])
    k = kron(a, b)
    assert k.shape == (4, 4)
    assert k.tolist()[0] == [0, 1, 0, 2]


small_ints = st.integers(min_value=-3, max_value=3)


@st.composite
def matrices(draw, p=0):
    r = draw(st.integers(1, 6))
    c = draw(st.integers(1, 6))
    rows = draw(st.lists(st.lists(small_ints, min_size=c, max_size=c), min_size=r, max_size=r))
    return rows


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_properties_q(rows):
    m = Matrix.from_rows(QQ, rows)
    r = rank(m)
    assert r == oracle_rank(rows)
    assert r == rank(m.T)
    k = kernel_basis(m)
    assert r + k.cols == m.cols
    assert (m @ k).is_zero()
    assert rank(k) == k.cols
    _, _, red = rref(m)
    _, _, red2 = rref(red)
    assert red2 == red


@settings(max_examples=60, deadline=None)
@given(matrices(), st.sampled_from([2, 3, 5]))
def test_rank_properties_fp(rows, p):
    f = Field.prime(p)
    m = Matrix.from_rows(f, rows)
    assert rank(m) == oracle_rank(rows, p)
    assert rank(m) + kernel_basis(m).cols == m.cols


@settings(max_examples=60, deadline=None)
@given(matrices(), st.data())
def test_solve_consistency(rows, data):
    m = Matrix.from_rows(QQ, rows)
    b = data.draw(st.lists(small_ints, min_size=m.rows, max_size=m.rows))
    x = solve(m, b)
    if x is not None:
        assert m.vector_apply(x) == [QQ(v) for v in b]
    else:
        aug = Matrix.from_rows(QQ, [r + [v] for r, v in zip(rows, b)])
        assert rank(aug) > rank(m)


def test_non_prime_rejected():
    with pytest.raises(ValueError):
        Field.prime(4)

from fractions import Fraction
import random

import pytest

from multcoh.linalg import (
    QQ, GF, Matrix, Subspace, Echelon, SpanBuilder,
    rank, kernel, solve, solve_matrix, image_basis, quotient,
    complete_in_subspace,
)

F2 = GF(2)
F3 = GF(3)
F5 = GF(5)


def M(field, rows):
    return Matrix.from_rows(field, rows)


# ---------------------------------------------------------------- rank


def test_rank_identity():
    assert rank(Matrix.identity(QQ, 3)) == 3


def test_rank_zero():
    assert rank(Matrix.zero(QQ, 2, 5)) == 0


def test_rank_proportional_rows():
    assert rank(M(QQ, [[1, 2], [2, 4]])) == 1


def test_rank_mod_p_differs_from_Q():
    rows = [[1, 1], [1, -1]]
    assert rank(M(QQ, rows)) == 2
    assert rank(M(F2, rows)) == 1


# ---------------------------------------------------------------- kernel


def test_kernel_zero_map():
    k = kernel(Matrix.zero(QQ, 3, 3))
    assert k.dim == 3 and k.ambient_dim == 3


def test_kernel_identity():
    assert kernel(Matrix.identity(QQ, 2)).dim == 0


def test_kernel_f2_sum():
    k = kernel(M(F2, [[1, 1]]))
    assert k.dim == 1
    assert k.basis.col(0) == (1, 1)


def test_kernel_members_are_killed():
    rng = random.Random(7)
    for field in (QQ, F3, F5):
        m = M(field, [[rng.randrange(-4, 5) for _ in range(5)] for _ in range(3)])
        k = kernel(m)
        assert k.dim == 5 - rank(m)
        for j in range(k.dim):
            assert all(v == field.zero() for v in m.matvec(k.basis.col(j)))


# ---------------------------------------------------------------- solve


def test_solve_mod5():
    assert solve(M(F5, [[2]]), [3]) == (4,)


def test_solve_no_solution():
    assert solve(M(QQ, [[0]]), [1]) is None


def test_solve_identity():
    b = [Fraction(3, 7), Fraction(-2)]
    assert solve(Matrix.identity(QQ, 2), b) == tuple(b)


def test_solve_exact_and_deterministic():
    rng = random.Random(41)
    for field in (QQ, F2, F3):
        a = M(field, [[rng.randrange(-3, 4) for _ in range(4)] for _ in range(3)])
        x0 = [rng.randrange(-3, 4) for _ in range(4)]
        b = a.matvec([field.coerce(v) for v in x0])
        x = solve(a, b)
        assert x is not None
        assert a.matvec(x) == b
        assert solve(a, b) == x


def test_solve_matrix_batches():
    a = M(F3, [[1, 2], [0, 1]])
    B = M(F3, [[1, 0], [0, 1]])
    X = Echelon(a).solve_matrix(B)
    assert a * X == B


# ---------------------------------------------------------------- quotient


def test_quotient_zero_subspace():
    proj, sec = quotient(2, Subspace.zero(QQ, 2))
    assert proj == Matrix.identity(QQ, 2)
    assert proj * sec == Matrix.identity(QQ, 2)


def test_quotient_full_subspace():
    proj, _ = quotient(2, Subspace.full(QQ, 2))
    assert proj.nrows == 0


def test_quotient_diagonal_line():
    sub = Subspace(2, Matrix.from_cols(QQ, [[1, 1]]))
    proj, sec = quotient(2, sub)
    assert proj.nrows == 1
    assert proj.matvec([1, 1]) == (Fraction(0),)
    assert proj * sec == Matrix.identity(QQ, 1)


def test_quotient_random_properties():
    rng = random.Random(11)
    for field in (QQ, F2, F3):
        cols = [[rng.randrange(-2, 3) for _ in range(4)] for _ in range(2)]
        m = Matrix.from_cols(field, cols)
        sub = Subspace(4, image_basis(m))
        proj, sec = quotient(4, sub)
        assert proj * sec == Matrix.identity(field, proj.nrows)
        assert (proj * sub.basis).is_zero()
        assert kernel(proj).dim == sub.dim


# ---------------------------------------------------------------- misc


def test_rank_plus_kernel_dim():
    rng = random.Random(3)
    for field in (QQ, F2, F3, F5):
        m = M(field, [[rng.randrange(-5, 6) for _ in range(6)] for _ in range(4)])
        assert rank(m) == 6 - kernel(m).dim


def test_matmul_and_kron_consistency():
    a = M(QQ, [[1, 2], [3, 4]])
    b = M(QQ, [[0, 1], [1, 0]])
    assert (a * b).rows_list() == [(2, 1), (4, 3)]
    k = a.kron(b)
    assert k.shape == (4, 4)
    assert k.entry(0, 1) == 1 and k.entry(1, 0) == 1 and k.entry(2, 3) == 4

    a2 = M(F3, [[1, 2], [0, 1]])
    b2 = M(F3, [[2]])
    assert a2.kron(b2).rows_list() == [(2, 1), (0, 2)]


def test_scalar_serialization_roundtrip():
    m = M(QQ, [[Fraction(-2, 7), 3], [0, Fraction(5, 1)]])
    j = m.to_json()
    assert j["entries"][0] == "-2/7" and j["entries"][1] == "3"
    assert Matrix.from_json(j) == m

    m2 = M(F5, [[7, -1]])
    j2 = m2.to_json()
    assert j2["entries"] == ["2", "4"]
    assert Matrix.from_json(j2) == m2


def test_digest_deterministic():
    a = M(F2, [[1, 0, 1], [0, 1, 1]])
    b = M(F2, [[1, 0, 1], [0, 1, 1]])
    assert a.digest() == b.digest()


def test_image_basis_is_pivot_columns():
    m = M(QQ, [[1, 2, 3], [2, 4, 6], [0, 0, 1]])
    ib = image_basis(m)
    assert ib.ncols == 2
    assert ib.col(0) == (1, 2, 0) and ib.col(1) == (3, 6, 1)


def test_span_builder_and_completion():
    sp = SpanBuilder(F2, 3)
    assert sp.add([1, 1, 0])
    assert not sp.add([1, 1, 0])
    assert sp.add([0, 1, 1])
    assert sp.contains([1, 0, 1])
    assert sp.dim == 2

    inner = Matrix.from_cols(QQ, [[1, 0, 0]])
    outer = Matrix.identity(QQ, 3)
    assert complete_in_subspace(inner, outer) == [1, 2]


def test_echelon_rref_is_canonical():
    m1 = M(QQ, [[2, 4, 2], [1, 3, 0]])
    m2 = M(QQ, [[1, 3, 0], [2, 4, 2]])
    assert Echelon(m1).rref_rows() == Echelon(m2).rref_rows()
    f1 = M(F3, [[2, 1], [1, 2]])
    f2 = M(F3, [[1, 2], [2, 1]])
    assert Echelon(f1).rref_rows() == Echelon(f2).rref_rows()


def test_large_f2_rank_sanity():
    rng = random.Random(5)
    rows = [[rng.randrange(2) for _ in range(200)] for _ in range(120)]
    m = M(F2, rows)
    r = rank(m)
    assert r == rank(m.transpose())
    assert r <= 120
    assert kernel(m).dim == 200 - r

import random

import pytest

from multcoh.linalg import QQ, GF, Matrix, rank, kernel
from multcoh.complexes import cohomology
from multcoh.derived import ModuleOverAlgebra, ExtSpace, free_resolution
from multcoh.groupcoh import (
    FinGroup, GModule, group_algebra, standard_resolution, invariants,
    em_cochain_complex, em_cohomology, em_cup, cup_map_full, phi,
    em_multiplicative_check, CoefficientMismatch, free_term_certificate,
)

F2 = GF(2)
F3 = GF(3)


def s3_two_dim_module():
    g = FinGroup.symmetric(3)
    # standard 2-dim module over F2: quotient of the permutation module
    # generators: transposition (0 1) = perms index of (1,0,2); 3-cycle (1,2,0)
    from itertools import permutations
    perms = sorted(permutations(range(3)))
    idx = {p: i for i, p in enumerate(perms)}
    s = idx[(1, 0, 2)]
    t = idx[(1, 2, 0)]
    images = {
        s: Matrix.from_rows(F2, [[1, 1], [0, 1]]),
        t: Matrix.from_rows(F2, [[0, 1], [1, 1]]),
    }
    return g, GModule.from_generator_images(g, F2, 2, images)


# ------------------------------------------------------------ groups


def test_cyclic_group():
    g = FinGroup.cyclic(4)
    assert g.order == 4 and g.identity == 0
    assert g.mult(3, 2) == 1
    assert g.inv(1) == 3


def test_symmetric_group():
    g = FinGroup.symmetric(3)
    assert g.order == 6
    # non-abelian
    assert any(g.mult(a, b) != g.mult(b, a)
               for a in range(6) for b in range(6))


def test_bad_table_rejected():
    with pytest.raises(ValueError):
        FinGroup([[0, 1], [1, 1]])


def test_gmodule_validation():
    g = FinGroup.cyclic(2)
    # 2 squares to 1 mod 3, a genuine involution
    GModule(g, F3, 1, [Matrix.identity(F3, 1), Matrix.from_rows(F3, [[2]])])
    # over Q, 2 is not an involution
    with pytest.raises(ValueError):
        GModule(g, QQ, 1, [Matrix.identity(QQ, 1), Matrix.from_rows(QQ, [[2]])])


def test_s3_module_axioms():
    g, v = s3_two_dim_module()
    assert v.dim == 2
    # no fixed vectors
    stacked = Matrix.vstack([v.rho(i) - Matrix.identity(F2, 2)
                             for i in range(6)])
    assert kernel(stacked).dim == 0


# ------------------------------------------------------------ resolution


def test_standard_resolution_trivial_group():
    g = FinGroup([[0]])
    k = GModule.trivial(g, QQ)
    std = standard_resolution(k, 4)
    c = std.complex
    for q in range(5):
        assert c.dim(q) == 1
    assert c.d(0).is_zero()
    assert c.d(1) == Matrix.identity(QQ, 1)
    assert c.d(2).is_zero()


def test_standard_resolution_dims_z2():
    g = FinGroup.cyclic(2)
    k = GModule.trivial(g, F2)
    std = standard_resolution(k, 3)
    assert std.complex.dim(1) == 4
    std.complex.validate()


def test_standard_resolution_exact_z3():
    g = FinGroup.cyclic(3)
    k = GModule.trivial(g, F3)
    std = standard_resolution(k, 4)
    c = std.complex
    c.validate()
    # rank checks of exactness, independent of the homotopy certificate
    assert rank(std.resolution.augmentation) == 1
    assert kernel(c.d(0)).dim == 1
    for q in range(1, 4):
        assert kernel(c.d(q)).dim == rank(c.d(q - 1))
    assert std.certificate_degrees == [1, 2, 3, 4]


def test_standard_resolution_equivariant():
    g = FinGroup.cyclic(3)
    k = GModule.trivial(g, F3)
    std = standard_resolution(k, 2)
    std.resolution.complex_of_modules.validate_equivariance()


# ------------------------------------------------------------ invariants


def test_invariants_trivial_action():
    g = FinGroup([[0]])
    k = GModule.trivial(g, QQ, 3)
    std = standard_resolution(k, 1)
    inv = invariants(std.resolution.complex_of_modules)
    assert inv.dim(0) == 3


def test_invariants_regular_rep_z2():
    g = FinGroup.cyclic(2)
    reg = GModule.regular(g, F2)
    alg = group_algebra(g, F2)
    from multcoh.derived import single_module_complex
    com = single_module_complex(reg.to_module(alg))
    inv = invariants(com)
    assert inv.dim(0) == 1


def test_invariants_of_I0_is_k():
    g = FinGroup.cyclic(3)
    k = GModule.trivial(g, F3)
    std = standard_resolution(k, 1)
    inv = invariants(std.resolution.complex_of_modules)
    assert inv.dim(0) == 1


def test_structural_matches_generic_invariants():
    for gr, field in ((FinGroup.cyclic(2), F2), (FinGroup.cyclic(3), F3)):
        k = GModule.trivial(gr, field)
        std = standard_resolution(k, 3)
        inv = invariants(std.resolution.complex_of_modules)
        em = em_cochain_complex(k, 3)
        for q in range(4):
            assert inv.dim(q) == em.dim(q)
        for n in range(3):
            assert cohomology(inv, n).dim == cohomology(em.complex, n).dim
        # embedded basis vectors are genuinely invariant
        for q in range(3):
            mod = std.resolution.complex_of_modules.module(q)
            for j in range(em.dim(q)):
                vec = [field.one() if i == j else field.zero()
                       for i in range(em.dim(q))]
                full = em.embed_vec(q, vec)
                for gi in range(gr.order):
                    assert tuple(mod.act_basis(gi, full)) == tuple(full)


# ------------------------------------------------------------ cohomology


def test_em_h0_is_fixed_points():
    g, v = s3_two_dim_module()
    assert em_cohomology(g, v, 0).dim == 0
    k = GModule.trivial(g, F2)
    assert em_cohomology(g, k, 0).dim == 1


def test_em_dims_z2_f2():
    g = FinGroup.cyclic(2)
    k = GModule.trivial(g, F2)
    em = em_cochain_complex(k, 5)
    for n in range(5):
        assert em_cohomology(g, k, n, em).dim == 1


def test_em_dims_z3_rational():
    g = FinGroup.cyclic(3)
    k = GModule.trivial(g, QQ)
    em = em_cochain_complex(k, 5)
    assert em_cohomology(g, k, 0, em).dim == 1
    for n in range(1, 5):
        assert em_cohomology(g, k, n, em).dim == 0


def test_em_dims_z3_f3():
    g = FinGroup.cyclic(3)
    k = GModule.trivial(g, F3)
    em = em_cochain_complex(k, 5)
    for n in range(5):
        assert em_cohomology(g, k, n, em).dim == 1


# ------------------------------------------------------------ cup


def test_cup_unit():
    g = FinGroup.cyclic(2)
    k = GModule.trivial(g, F2)
    em = em_cochain_complex(k, 4)
    one0 = (F2.one(),)  # the constant-1 invariant 0-cochain
    for p in range(3):
        d = em.dim(p)
        for j in range(d):
            alpha = tuple(F2.one() if i == j else F2.zero() for i in range(d))
            assert em_cup(em, p, alpha, em, 0, one0) == alpha


def test_cup_square_nonzero_z2():
    g = FinGroup.cyclic(2)
    k = GModule.trivial(g, F2)
    em = em_cochain_complex(k, 5)
    h1 = em_cohomology(g, k, 1, em)
    assert h1.dim == 1
    x = h1.cocycle_reps.col(0)
    xx = em_cup(em, 1, x, em, 1, x)
    h2 = em_cohomology(g, k, 2, em)
    assert h2.project(xx) != (F2.zero(),)


def test_cup_leibniz_random():
    rng = random.Random(5)
    g = FinGroup.cyclic(3)
    k = GModule.trivial(g, F3)
    v = GModule.trivial(g, F3)
    em_v = em_cochain_complex(v, 4)
    em_k = em_cochain_complex(k, 4)
    for p in (0, 1, 2):
        for q in (0, 1):
            if p + q + 1 > 3:
                continue
            for _ in range(3):
                alpha = tuple(F3.coerce(rng.randrange(3))
                              for _ in range(em_v.dim(p)))
                beta = tuple(F3.coerce(rng.randrange(3))
                             for _ in range(em_k.dim(q)))
                d_cup = em_v.complex.d(p + q).matvec(
                    em_cup(em_v, p, alpha, em_k, q, beta))
                da = em_v.complex.d(p).matvec(alpha)
                db = em_k.complex.d(q).matvec(beta)
                lhs1 = em_cup(em_v, p + 1, da, em_k, q, beta)
                lhs2 = em_cup(em_v, p, alpha, em_k, q + 1, db,
                              sign=F3.coerce((-1) ** p))
                total = tuple(F3.add(a, b) for a, b in zip(lhs1, lhs2))
                assert tuple(d_cup) == total


def test_cup_rejects_fat_coefficients():
    g, v = s3_two_dim_module()
    em_v = em_cochain_complex(v, 2)
    with pytest.raises(CoefficientMismatch):
        em_cup(em_v, 0, (F2.zero(), F2.zero()), em_v, 0,
               (F2.zero(), F2.zero()))


def test_cup_associative_on_classes():
    g = FinGroup.cyclic(2)
    k = GModule.trivial(g, F2)
    em = em_cochain_complex(k, 5)
    reps = {n: em_cohomology(g, k, n, em).cocycle_reps.col(0)
            for n in range(1, 3)}
    a, b = reps[1], reps[2]
    left = em_cup(em, 3, em_cup(em, 1, a, em, 2, b), em, 1, a)
    right = em_cup(em, 1, a, em, 3, em_cup(em, 2, b, em, 1, a))
    h4 = em_cohomology(g, k, 4, em)
    assert h4.project(left) == h4.project(right)


# ------------------------------------------------------------ phi and theorem


def test_phi_degree_zero_identity():
    g = FinGroup.cyclic(3)
    k = GModule.trivial(g, F3)
    alg = group_algebra(g, F3)
    kmod = k.to_module(alg)
    res_k = free_resolution(kmod, 3)
    std = standard_resolution(k, 2, alg)
    em = em_cochain_complex(k, 2)
    mat, tgt = phi(g, k, 0, std, res_k, em)
    assert tgt.dim == 1 and rank(mat) == 1


def test_phi_bijective_z2():
    g = FinGroup.cyclic(2)
    k = GModule.trivial(g, F2)
    alg = group_algebra(g, F2)
    kmod = k.to_module(alg)
    res_k = free_resolution(kmod, 6)
    std = standard_resolution(k, 4, alg)
    em = em_cochain_complex(k, 5)
    for n in range(1, 5):
        mat, tgt = phi(g, k, n, std, res_k, em)
        assert tgt.dim == 1
        assert rank(mat) == 1


def test_free_term_certificate():
    g, v = s3_two_dim_module()
    std = standard_resolution(v, 1)
    assert free_term_certificate(std, 1)


def test_em_multiplicative_z2_window3():
    g = FinGroup.cyclic(2)
    k = GModule.trivial(g, F2)
    rep = em_multiplicative_check(g, k, 3)
    assert rep.verified, rep
    assert rep.details["em_dims_V"] == [1, 1, 1, 1]


def test_em_multiplicative_corrupted_cup_sign():
    # the (2,1) product x_2 cup x_1 is a nonzero class in H^3(Z/3; F_3), so a
    # sign flip there is visible at class level (a (1,1) flip would not be:
    # the square of the degree-1 class already vanishes for odd p)
    g = FinGroup.cyclic(3)
    k = GModule.trivial(g, F3)
    rep = em_multiplicative_check(g, k, 3,
                                  corrupt={"cup_sign_flip": [2, 1]})
    assert rep.status == "refuted"
    assert rep.counterexample is not None
    assert rep.counterexample["stage"] == "multiplicativity"


def test_em_multiplicative_broken_equivariance():
    g = FinGroup.cyclic(3)
    k = GModule.trivial(g, F3)
    rep = em_multiplicative_check(g, k, 2,
                                  corrupt={"break_equivariance": True})
    assert rep.status == "refuted"

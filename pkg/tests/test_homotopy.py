import random

from multcoh.linalg import QQ, GF, Matrix
from multcoh.complexes import CochainComplex, GradedMap, graded_differential
from multcoh.homotopy import (
    is_chain_map, homotopy_between, homotopy_classes, compose_classes,
    quasi_iso_check, HomotopyClass,
)

F2 = GF(2)

K = CochainComplex.single(QQ)
TWO = CochainComplex(QQ, 0, [1, 1], [Matrix.identity(QQ, 1)])


def random_complex(field, rng, max_deg=2, max_dim=2):
    dims = [rng.randrange(0, max_dim + 1) for _ in range(max_deg + 1)]
    diffs = {}
    prev = None
    for n in range(max_deg):
        m, k = dims[n + 1], dims[n]
        if m and k:
            cand = Matrix.from_rows(
                field, [[rng.randrange(-1, 2) for _ in range(k)] for _ in range(m)])
        else:
            cand = Matrix.zero(field, m, k)
        if prev is not None and not (cand * prev).is_zero():
            cand = Matrix.zero(field, m, k)
        diffs[n] = cand
        prev = cand
    return CochainComplex(field, 0, dims, diffs).validate()


# ------------------------------------------------------------- is_chain_map


def test_identity_is_chain_map():
    assert is_chain_map(GradedMap.identity(TWO))


def test_scalar_between_points_is_chain_map():
    f = GradedMap(K, K, 0, {0: Matrix.from_rows(QQ, [[7]])})
    assert is_chain_map(f)


def test_non_chain_map_detected():
    f = GradedMap(TWO, TWO, 0, {0: Matrix.from_rows(QQ, [[1]]),
                                1: Matrix.from_rows(QQ, [[2]])})
    assert not is_chain_map(f)


# --------------------------------------------------------- homotopy_between


def test_homotopy_f_equals_g():
    h = homotopy_between(GradedMap.identity(TWO), GradedMap.identity(TWO))
    assert h is not None and h.is_zero()


def test_homotopy_contracts_identity():
    ident = GradedMap.identity(TWO)
    zero = GradedMap.zero_map(TWO, TWO, 0)
    h = homotopy_between(ident, zero)
    assert h is not None
    assert ident.sub(zero) == graded_differential(h)


def test_homotopy_absent_on_point():
    ident = GradedMap.identity(K)
    zero = GradedMap.zero_map(K, K, 0)
    assert homotopy_between(ident, zero) is None


def test_homotopy_soundness_and_completeness_random():
    rng = random.Random(12)
    trials = 0
    for _ in range(40):
        field = rng.choice([QQ, F2])
        a = random_complex(field, rng)
        b = random_complex(field, rng)
        space = homotopy_classes(a, b, 0)
        if space.hom.complex.dim(0) == 0:
            continue
        # two random cocycles
        zs = []
        d0 = space.hom.complex.d(0)
        from multcoh.linalg import kernel
        zker = kernel(d0)
        if zker.dim == 0:
            continue
        for _ in range(2):
            coeffs = [field.coerce(rng.randrange(-2, 3)) for _ in range(zker.dim)]
            vec = [field.zero()] * space.hom.complex.dim(0)
            for j, c in enumerate(coeffs):
                col = zker.basis.col(j)
                vec = [field.add(v, field.mul(c, x)) for v, x in zip(vec, col)]
            zs.append(space.hom.decode(0, vec))
        f, g = zs
        h = homotopy_between(f, g)
        same_class = space.project_map(f) == space.project_map(g)
        trials += 1
        if h is None:
            assert not same_class
        else:
            assert same_class
            assert f.sub(g) == graded_differential(h)
    assert trials >= 10


# --------------------------------------------------------- homotopy_classes


def test_classes_point_to_point():
    s = homotopy_classes(K, K, 0)
    assert s.dim == 1


def test_classes_from_unit_match_cohomology():
    from multcoh.complexes import cohomology
    rng = random.Random(3)
    c = random_complex(QQ, rng)
    for n in range(-1, 4):
        assert homotopy_classes(K, c, n).dim == cohomology(c, n).dim


def test_classes_contractible_vanish():
    assert homotopy_classes(TWO, TWO, 0).dim == 0


# --------------------------------------------------------- compose_classes


def test_compose_with_identity():
    s = homotopy_classes(K, K, 0)
    one = HomotopyClass(s, (QQ.one(),))
    out = compose_classes(one, one, target_space=s)
    assert out.coords == (QQ.one(),)


def test_compose_with_zero():
    s = homotopy_classes(K, K, 0)
    one = HomotopyClass(s, (QQ.one(),))
    zero = HomotopyClass(s, (QQ.zero(),))
    assert compose_classes(one, zero, target_space=s).coords == (QQ.zero(),)


def test_compose_associative_random_f2():
    rng = random.Random(21)
    done = 0
    for _ in range(120):
        a = random_complex(F2, rng, max_deg=1)
        b = random_complex(F2, rng, max_deg=1)
        c = random_complex(F2, rng, max_deg=1)
        d = random_complex(F2, rng, max_deg=1)
        if max(x.total_dim() for x in (a, b, c, d)) > 3:
            continue
        sab = homotopy_classes(a, b, 0)
        sbc = homotopy_classes(b, c, 0)
        scd = homotopy_classes(c, d, 0)
        if 0 in (sab.dim, sbc.dim, scd.dim):
            continue
        sad = homotopy_classes(a, d, 0)
        sac = homotopy_classes(a, c, 0)
        sbd = homotopy_classes(b, d, 0)
        f = rng.choice(sab.basis_classes())
        g = rng.choice(sbc.basis_classes())
        h = rng.choice(scd.basis_classes())
        left = compose_classes(h, compose_classes(g, f, sac), sad)
        right = compose_classes(compose_classes(h, g, sbd), f, sad)
        assert left.coords == right.coords
        done += 1
    assert done >= 3


def test_compose_representative_independent():
    rng = random.Random(8)
    for _ in range(30):
        a = random_complex(F2, rng)
        b = random_complex(F2, rng)
        c = random_complex(F2, rng)
        sab = homotopy_classes(a, b, 0)
        sbc = homotopy_classes(b, c, 0)
        if sab.dim == 0 or sbc.dim == 0:
            continue
        sac = homotopy_classes(a, c, 0)
        f = sab.basis_classes()[0]
        g = sbc.basis_classes()[0]
        base = compose_classes(g, f, sac).coords
        # perturb f's representative by a coboundary
        hc = sab.hom
        dm1 = hc.complex.dim(-1)
        if dm1 == 0:
            continue
        rnd = [F2.coerce(rng.randrange(2)) for _ in range(dm1)]
        pert = hc.decode(-1, rnd)
        f2 = f.rep().add(graded_differential(pert))
        comp = g.rep().compose(f2)
        assert sac.project_map(comp) == base


# --------------------------------------------------------- quasi_iso_check


def test_quasi_iso_identity():
    assert quasi_iso_check(GradedMap.identity(TWO))


def test_quasi_iso_zero_into_contractible():
    zc = CochainComplex.zero_complex(QQ)
    inc = GradedMap(zc, TWO, 0, {})
    assert quasi_iso_check(inc)


def test_quasi_iso_zero_map_on_point_fails():
    zero = GradedMap.zero_map(K, K, 0)
    assert not quasi_iso_check(zero)

"""Homotopy-category layer: chain maps, homotopies found by linear solving,
homotopy classes [A,B] = H(<A,B>), and their composition.

A homotopy between chain maps f, g of degree n is an h in <A,B>^(n-1) with
f - g = dh, i.e. d o h + (-1)^n h o d with the hom-complex sign.  Finding one
is a single linear solve against the hom-complex differential, globally over
all degrees in the window.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import Matrix, Echelon
from .complexes import (
    CochainComplex, GradedMap, HomComplex,
    hom_complex, cohomology, graded_differential,
)

__all__ = [
    "DegreeMismatch",
    "is_chain_map",
    "homotopy_between",
    "HomotopyClassSpace",
    "HomotopyClass",
    "homotopy_classes",
    "compose_classes",
    "quasi_iso_check",
]


class DegreeMismatch(Exception):
    pass


def is_chain_map(f: GradedMap) -> bool:
    """True iff d_B o f_p = (-1)^n f_(p+1) o d_A for all p (df = 0)."""
    return graded_differential(f).is_zero()


def homotopy_between(f: GradedMap, g: GradedMap,
                     lo: int | None = None, hi: int | None = None):
    """Some h with f - g = dh, or None if the classes differ.

    f and g must be chain maps of the same degree between the same complexes.
    Any solution is accepted; the solve is deterministic.  Optional lo/hi
    restrict the hom-complex window (used by large verifications).
    """
    if f.degree != g.degree:
        raise DegreeMismatch(f"{f.degree} vs {g.degree}")
    diff = f.sub(g)
    n = f.degree
    hc = hom_complex(f.source, f.target, lo, hi)
    if diff.is_zero():
        return hc.decode(n - 1, [f.source.field.zero()] * hc.complex.dim(n - 1))
    rhs = hc.encode(diff)
    sol = Echelon(hc.complex.d(n - 1)).solve(rhs)
    if sol is None:
        return None
    return hc.decode(n - 1, sol)


@dataclass
class HomotopyClassSpace:
    """[A,B]^n with chosen representative chain maps and a class projection."""

    source: CochainComplex
    target: CochainComplex
    degree: int
    dim: int
    representatives: list
    class_projection: Matrix
    hom: HomComplex

    def project_map(self, g: GradedMap) -> tuple:
        """Class coordinates of a cocycle graded map."""
        return self.class_projection.matvec(self.hom.encode(g))

    def rep_map(self, coords) -> GradedMap:
        """The representative chain map with the given class coordinates."""
        f = self.source.field
        vec = [f.zero()] * self.hom.complex.dim(self.degree)
        for j, c in enumerate(coords):
            if c != f.zero():
                rep = self.hom.encode(self.representatives[j])
                vec = [f.add(v, f.mul(c, r)) for v, r in zip(vec, rep)]
        return self.hom.decode(self.degree, vec)

    def basis_classes(self) -> list["HomotopyClass"]:
        f = self.source.field
        out = []
        for j in range(self.dim):
            coords = tuple(f.one() if i == j else f.zero()
                           for i in range(self.dim))
            out.append(HomotopyClass(self, coords))
        return out


@dataclass
class HomotopyClass:
    space: HomotopyClassSpace
    coords: tuple

    def rep(self) -> GradedMap:
        return self.space.rep_map(self.coords)


def homotopy_classes(A: CochainComplex, B: CochainComplex, n: int,
                     lo: int | None = None, hi: int | None = None) -> HomotopyClassSpace:
    """[A,B]^n = H^n(<A,B>) with representatives as graded maps."""
    hc = hom_complex(A, B, lo, hi)
    coh = cohomology(hc.complex, n)
    reps = [hc.decode(n, coh.cocycle_reps.col(j)) for j in range(coh.dim)]
    for r in reps:
        assert is_chain_map(r)
    return HomotopyClassSpace(A, B, n, coh.dim, reps, coh.class_projection, hc)


def compose_classes(g: HomotopyClass, f: HomotopyClass,
                    target_space: HomotopyClassSpace | None = None) -> HomotopyClass:
    """Class of the composite [B,C]^q x [A,B]^p -> [A,C]^(p+q).

    Independent of the chosen representatives (the composite of cocycles is a
    cocycle, and composing with a coboundary gives a coboundary).
    """
    if g.space.source != f.space.target:
        raise DegreeMismatch("middle complexes do not match")
    comp = g.rep().compose(f.rep())
    if target_space is None:
        target_space = homotopy_classes(
            f.space.source, g.space.target, g.space.degree + f.space.degree)
    return HomotopyClass(target_space, target_space.project_map(comp))


def quasi_iso_check(f: GradedMap) -> bool:
    """True iff the induced map on cohomology is bijective in every degree."""
    if f.degree != 0:
        raise DegreeMismatch("quasi-isomorphisms have degree 0")
    if not is_chain_map(f):
        raise ValueError("not a chain map")
    A, B = f.source, f.target
    degs = sorted(set(A.degrees()) | set(B.degrees()))
    lo = degs[0] if degs else 0
    hi = degs[-1] if degs else 0
    for n in range(lo, hi + 1):
        ha = cohomology(A, n)
        hb = cohomology(B, n)
        if ha.dim != hb.dim:
            return False
        if ha.dim == 0:
            continue
        cols = []
        for j in range(ha.dim):
            v = ha.cocycle_reps.col(j)
            cols.append(hb.project(f.component(n).matvec(v)))
        induced = Matrix.from_cols(A.field, cols)
        if Echelon(induced).rank != ha.dim:
            return False
    return True

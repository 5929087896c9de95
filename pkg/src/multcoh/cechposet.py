"""Sheaves of k-modules on finite posets (Alexandrov models), canonical
flabby resolutions, Cech cohomology of covers, both cup products, and the
multiplicative comparison check.

Opens are up-sets.  The canonical flabby resolution is realized in strict-
chain form: A^q(S) has stalk at x the functions on chains y_0 < ... < y_q
with y_0 >= x, valued in the stalk of S at y_q, with projection restrictions
and the alternating-sum differential (the last face restricted along S).
Every term is a product of point-coinduced sheaves, hence flabby; global
sections are functions on all chains, so cohomology of X is the cohomology
of the chain-function complex.  The front/back cup lives on these chains.

The bridge to the derived engine: sheaves on a finite poset are modules over
the poset's incidence algebra (transport basis e_(x<=y)); resolutions on that
side use cyclic projectives A*e_x, which keeps exact arithmetic small.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .linalg import FieldSpec, Matrix, Subspace, Echelon, kernel, rank, image_basis
from .complexes import CochainComplex, CohomologySpace, cohomology
from .derived import (
    AlgebraSpec, ModuleOverAlgebra, Resolution, ComplexOfModules,
    free_resolution, ExtSpace, ExtClass, ext_class_of_map, yoneda,
)
from .report import VerificationReport

__all__ = [
    "ZigZagObstruction", "ChainMapCheckFails",
    "FinPoset", "face_poset", "SheafOnPoset", "OpenCover",
    "global_sections", "GodementResolution", "godement_resolution",
    "godement_cup", "CechComplex", "cech_complex", "cech_cup",
    "phi_cech", "incidence_algebra", "sheaf_to_module",
    "poset_cohomology", "cech_multiplicative_check",
]


class ZigZagObstruction(Exception):
    pass


class ChainMapCheckFails(Exception):
    pass


class FinPoset:
    """Elements 0..n-1 with a validated order relation matrix."""

    def __init__(self, leq, labels=None):
        self.leq = [list(map(bool, row)) for row in leq]
        self.n = len(self.leq)
        for i in range(self.n):
            if len(self.leq[i]) != self.n:
                raise ValueError("order matrix must be square")
            if not self.leq[i][i]:
                raise ValueError("order not reflexive")
        for i in range(self.n):
            for j in range(self.n):
                if i != j and self.leq[i][j] and self.leq[j][i]:
                    raise ValueError("order not antisymmetric")
                if self.leq[i][j]:
                    for k in range(self.n):
                        if self.leq[j][k] and not self.leq[i][k]:
                            raise ValueError("order not transitive")
        self.labels = list(labels) if labels else [str(i) for i in range(self.n)]

    def up_set(self, x: int) -> list:
        return [y for y in range(self.n) if self.leq[x][y]]

    def less(self, x: int, y: int) -> bool:
        return self.leq[x][y]

    def is_up_closed(self, pts) -> bool:
        s = set(pts)
        return all(y in s for x in s for y in self.up_set(x))

    def comparable_pairs(self):
        """All pairs x < y."""
        return [(x, y) for x in range(self.n) for y in range(self.n)
                if x != y and self.leq[x][y]]

    def chains(self, length: int) -> list:
        """Strict chains (x_0 < ... < x_length), lexicographic order."""
        if length == 0:
            return [(x,) for x in range(self.n)]
        shorter = self.chains(length - 1)
        out = []
        for c in shorter:
            for y in range(self.n):
                if y != c[-1] and self.leq[c[-1]][y]:
                    out.append(c + (y,))
        return out

    @staticmethod
    def from_json(obj) -> "FinPoset":
        if "facets" in obj:
            return face_poset(obj["facets"])
        p = obj["poset"]
        return FinPoset(p["leq"], p.get("labels"))

    def to_json(self):
        return {"poset": {"size": self.n,
                          "leq": [[1 if v else 0 for v in r] for r in self.leq],
                          "labels": self.labels}}


def face_poset(facets) -> FinPoset:
    """Face poset of a simplicial complex given by facets; elements are the
    nonempty faces ordered by inclusion, listed by (dimension, vertex list)."""
    faces = set()
    for fac in facets:
        fac = tuple(sorted(set(fac)))
        if not fac:
            raise ValueError("empty facet")
        for r in range(1, len(fac) + 1):
            for c in combinations(fac, r):
                faces.add(c)
    ordered = sorted(faces, key=lambda c: (len(c), c))
    idx = {c: i for i, c in enumerate(ordered)}
    n = len(ordered)
    leq = [[set(a) <= set(b) for b in ordered] for a in ordered]
    p = FinPoset(leq, labels=["".join(str(v) for v in c) for c in ordered])
    p.faces = ordered
    p.face_index = idx
    return p


class SheafOnPoset:
    """Stalks and restriction maps along x <= y, functorial (checked)."""

    def __init__(self, poset: FinPoset, field: FieldSpec, stalk_dims,
                 restrictions: dict):
        self.poset = poset
        self.field = field
        self.stalk_dims = list(stalk_dims)
        if len(self.stalk_dims) != poset.n:
            raise ValueError("one stalk per point required")
        self.res = {}
        for x in range(poset.n):
            self.res[(x, x)] = Matrix.identity(field, self.stalk_dims[x])
        for (x, y), mat in restrictions.items():
            if not poset.less(x, y):
                raise ValueError(f"restriction along non-related {(x, y)}")
            if mat.shape != (self.stalk_dims[y], self.stalk_dims[x]):
                raise ValueError(f"bad restriction shape at {(x, y)}")
            self.res[(x, y)] = mat
        # complete by composition along any saturated chain, then check
        # all factorizations agree
        for (x, y) in poset.comparable_pairs():
            if (x, y) not in self.res:
                self.res[(x, y)] = self._compose_via(x, y)
        for (x, y) in poset.comparable_pairs():
            for z in range(poset.n):
                if z != x and z != y and poset.less(x, z) and poset.less(z, y):
                    if self.res[(z, y)] * self.res[(x, z)] != self.res[(x, y)]:
                        raise ValueError(
                            f"restrictions not functorial along {x}<={z}<={y}")

    def _compose_via(self, x, y):
        for z in range(self.poset.n):
            if z != x and z != y and self.poset.less(x, z) \
                    and self.poset.less(z, y) and (x, z) in self.res \
                    and (z, y) in self.res:
                return self.res[(z, y)] * self.res[(x, z)]
        raise ValueError(f"no restriction given or derivable for {(x, y)}")

    def restriction(self, x: int, y: int) -> Matrix:
        return self.res[(x, y)]

    @staticmethod
    def constant(poset: FinPoset, field: FieldSpec, dim: int = 1) -> "SheafOnPoset":
        ident = Matrix.identity(field, dim)
        return SheafOnPoset(poset, field, [dim] * poset.n,
                            {p: ident for p in poset.comparable_pairs()})

    @staticmethod
    def skyscraper(poset: FinPoset, field: FieldSpec, point: int,
                   dim: int = 1) -> "SheafOnPoset":
        """Sections over U are the stalk if point is in U, else 0; the stalk
        at y is nonzero iff y <= point."""
        dims = [dim if poset.less(y, point) else 0 for y in range(poset.n)]
        restr = {}
        for (x, y) in poset.comparable_pairs():
            if dims[x] and dims[y]:
                restr[(x, y)] = Matrix.identity(field, dim)
            else:
                restr[(x, y)] = Matrix.zero(field, dims[y], dims[x])
        return SheafOnPoset(poset, field, dims, restr)

    @staticmethod
    def from_json(poset: FinPoset, obj) -> "SheafOnPoset":
        f = FieldSpec.from_json(obj.get("field", "Q"))
        dims = obj["stalks"]
        restr = {}
        for key, mat in obj.get("restrictions", {}).items():
            x, y = key.split("<")
            restr[(int(x), int(y))] = Matrix.from_json(mat)
        return SheafOnPoset(poset, f, dims, restr)


class OpenCover:
    def __init__(self, poset: FinPoset, opens):
        self.poset = poset
        self.opens = [sorted(set(o)) for o in opens]
        for o in self.opens:
            if not poset.is_up_closed(o):
                raise ValueError(f"cover member {o} is not an up-set")
        covered = set()
        for o in self.opens:
            covered.update(o)
        if covered != set(range(poset.n)):
            raise ValueError("cover does not cover the space")

    @staticmethod
    def star_cover(poset: FinPoset) -> "OpenCover":
        """Stars of the vertices of a face poset."""
        faces = getattr(poset, "faces", None)
        if faces is None:
            raise ValueError("star covers need a face poset")
        verts = sorted({v for c in faces for v in c})
        opens = []
        for v in verts:
            opens.append([i for i, c in enumerate(faces) if v in c])
        return OpenCover(poset, opens)

    def intersection(self, tup) -> list:
        pts = set(self.opens[tup[0]])
        for i in tup[1:]:
            pts &= set(self.opens[i])
        return sorted(pts)

    @staticmethod
    def from_json(poset: FinPoset, obj) -> "OpenCover":
        return OpenCover(poset, obj["opens"])


# ---------------------------------------------------------------------------
# sections
# ---------------------------------------------------------------------------


def _layout(dims) -> list:
    off = [0]
    for d in dims:
        off.append(off[-1] + d)
    return off


def global_sections(S: SheafOnPoset, U) -> tuple[Subspace, list]:
    """Sections over the up-set U: families (s_x) with res(s_x) = s_y, as a
    subspace of the product of stalks over U (with its offset layout)."""
    U = sorted(U)
    if not S.poset.is_up_closed(U):
        raise ValueError("sections only over up-sets")
    f = S.field
    dims = [S.stalk_dims[x] for x in U]
    off = _layout(dims)
    total = off[-1]
    pos = {x: off[i] for i, x in enumerate(U)}
    rows = []
    for x in U:
        for y in S.poset.up_set(x):
            if y == x or y not in pos:
                continue
            r = S.restriction(x, y)
            for i in range(r.nrows):
                row = [f.zero()] * total
                rr = r.row(i)
                for j in range(r.ncols):
                    row[pos[x] + j] = rr[j]
                row[pos[y] + i] = f.add(row[pos[y] + i], f.coerce(-1))
                rows.append(row)
    if rows:
        sys = Matrix.from_rows(f, rows)
        sub = kernel(sys)
    else:
        sub = Subspace.full(f, total)
    return sub, U


# ---------------------------------------------------------------------------
# the canonical flabby (strict-chain) resolution
# ---------------------------------------------------------------------------


class GodementResolution:
    """A^q(S) for q = 0..N in strict-chain form, with the global-sections
    complex (functions on all chains) and sheaf data per degree."""

    def __init__(self, S: SheafOnPoset, N: int):
        self.sheaf = S
        self.N = N
        self.poset = S.poset
        self.field = S.field
        f = S.field
        self.chains = {}
        self.chain_index = {}
        self.offsets = {}
        dims = []
        for q in range(N + 1):
            ch = [c for c in S.poset.chains(q) if S.stalk_dims[c[-1]]]
            self.chains[q] = ch
            self.chain_index[q] = {c: i for i, c in enumerate(ch)}
            off = _layout([S.stalk_dims[c[-1]] for c in ch])
            self.offsets[q] = off
            dims.append(off[-1])
        diffs = {q: self._gamma_diff(q) for q in range(N)}
        self.gamma = CochainComplex(f, 0, dims, diffs)
        self.gamma.validate()

    def chain_dim(self, q: int) -> int:
        return self.gamma.dim(q)

    def _gamma_diff(self, q: int) -> Matrix:
        """(df)(y_0<...<y_(q+1)) = sum_i (-1)^i f(drop i), the last face
        composed with the sheaf restriction."""
        S = self.sheaf
        f = self.field
        ent = []
        offq = self.offsets[q]
        offq1 = self.offsets[q + 1]
        idxq = self.chain_index[q]
        for ci, c in enumerate(self.chains[q + 1]):
            ro = offq1[ci]
            dtop = S.stalk_dims[c[-1]]
            for i in range(q + 2):
                sub = c[:i] + c[i + 1:]
                if sub not in idxq:
                    continue
                co = offq[idxq[sub]]
                sgn = f.coerce((-1) ** i)
                if i < q + 1:
                    for w in range(dtop):
                        ent.append((ro + w, co + w, sgn))
                else:
                    r = S.restriction(c[-2], c[-1])
                    for a in range(r.nrows):
                        row = r.row(a)
                        for b in range(r.ncols):
                            if row[b] != f.zero():
                                ent.append((ro + a, co + b, f.mul(sgn, row[b])))
        return Matrix.from_sparse(f, self.gamma_dim_raw(q + 1),
                                  self.gamma_dim_raw(q), ent)

    def gamma_dim_raw(self, q: int) -> int:
        return self.offsets[q][-1] if q in self.offsets else 0

    # -- sheaf-level data ---------------------------------------------------

    def stalk_chains(self, q: int, x: int) -> list:
        """Indices of degree-q chains whose start dominates x."""
        return [i for i, c in enumerate(self.chains[q])
                if self.poset.less(x, c[0])]

    def stalk_dim(self, q: int, x: int) -> int:
        return sum(self.sheaf.stalk_dims[self.chains[q][i][-1]]
                   for i in self.stalk_chains(q, x))

    def term_sheaf(self, q: int) -> SheafOnPoset:
        """A^q as a sheaf: stalk = chain functions with start above the
        point, restrictions = projections."""
        S = self.sheaf
        f = self.field
        n = self.poset.n
        dims = [self.stalk_dim(q, x) for x in range(n)]
        restr = {}
        for (x, y) in self.poset.comparable_pairs():
            rows = []
            chx = self.stalk_chains(q, x)
            chy = self.stalk_chains(q, y)
            offx = _layout([S.stalk_dims[self.chains[q][i][-1]] for i in chx])
            posx = {ci: offx[k] for k, ci in enumerate(chx)}
            ent = []
            ro = 0
            for ci in chy:
                d = S.stalk_dims[self.chains[q][ci][-1]]
                co = posx[ci]
                for w in range(d):
                    ent.append((ro + w, co + w, f.one()))
                ro += d
            restr[(x, y)] = Matrix.from_sparse(f, dims[y], dims[x], ent)
        return SheafOnPoset(self.poset, f, dims, restr)

    def section_to_stalk(self, q: int, x: int, vec) -> tuple:
        """Restrict a global chain function to the stalk at x."""
        S = self.sheaf
        out = []
        off = self.offsets[q]
        for ci in self.stalk_chains(q, x):
            d = S.stalk_dims[self.chains[q][ci][-1]]
            out.extend(vec[off[ci]:off[ci] + d])
        return tuple(out)

    def augmentation_gamma(self) -> Matrix:
        """Gamma(S) -> Gamma(A^0): s -> (y_0 -> res(s at y_0))... on global
        sections, a section family indexed by points maps to the chain
        function c -> s_(c_0) restricted; since sections are compatible this
        is just evaluation at c_0 = the chain's only point."""
        S = self.sheaf
        f = self.field
        sub, U = global_sections(S, list(range(self.poset.n)))
        off_pts = _layout([S.stalk_dims[x] for x in U])
        cols = []
        for j in range(sub.dim):
            v = sub.basis.col(j)
            out = []
            for c in self.chains[0]:
                x = c[0]
                i = U.index(x)
                out.extend(v[off_pts[i]:off_pts[i] + S.stalk_dims[x]])
            cols.append(out)
        return Matrix.from_cols(f, cols) if cols else \
            Matrix.zero(f, self.chain_dim(0), 0)


def godement_resolution(S: SheafOnPoset, N: int) -> GodementResolution:
    return GodementResolution(S, N)


def poset_cohomology(S: SheafOnPoset, n: int,
                     god: GodementResolution | None = None) -> CohomologySpace:
    """H^n(X, S) := H^n of the chain-function complex."""
    if god is None:
        god = godement_resolution(S, n + 1)
    return cohomology(god.gamma, n)


def godement_cup(B: GodementResolution, p: int, beta,
                 A: GodementResolution, q: int, alpha) -> tuple:
    """(beta cup alpha)(y_0<...<y_(p+q)) = res(beta(y_0..y_p)) *
    alpha(y_p..y_(p+q)); beta is S-valued, alpha is valued in the constant
    sheaf (1-dimensional stalks where nonzero)."""
    if any(d > 1 for d in A.sheaf.stalk_dims):
        raise ChainMapCheckFails("second factor must be constant-sheaf valued")
    S = B.sheaf
    f = B.field
    out = [f.zero()] * B.chain_dim(p + q)
    offp = B.offsets[p]
    offo = B.offsets[p + q]
    idxb = B.chain_index[p]
    idxa = A.chain_index[q]
    offa = A.offsets[q]
    for ci, c in enumerate(B.chains[p + q]):
        front = c[:p + 1]
        back = c[p:]
        if front not in idxb or back not in idxa:
            continue
        aval = alpha[offa[idxa[back]]]
        if aval == f.zero():
            continue
        bo = offp[idxb[front]]
        dfront = S.stalk_dims[front[-1]]
        seg = list(beta[bo:bo + dfront])
        if all(v == f.zero() for v in seg):
            continue
        r = S.restriction(front[-1], c[-1])
        val = r.matvec(seg)
        o = offo[ci]
        for i, v in enumerate(val):
            out[o + i] = f.add(out[o + i], f.mul(aval, v))
    return tuple(out)


# ---------------------------------------------------------------------------
# Cech complexes
# ---------------------------------------------------------------------------


class CechComplex:
    """Alternating Cech cochains of a cover with coefficients in a sheaf:
    degree p is the sum over increasing (p+1)-tuples of the sections over the
    intersection."""

    def __init__(self, cover: OpenCover, S: SheafOnPoset, N: int):
        self.cover = cover
        self.sheaf = S
        self.N = N
        f = S.field
        self.field = f
        r = len(cover.opens)
        self.tuples = {}
        self.sections = {}
        self.pieces = {}
        dims = []
        for p in range(N + 1):
            tups = [t for t in combinations(range(r), p + 1)
                    if cover.intersection(t)]
            keep = []
            secs = {}
            for t in tups:
                sub, U = global_sections(S, cover.intersection(t))
                if sub.dim:
                    keep.append(t)
                    secs[t] = (sub, U)
            self.tuples[p] = keep
            self.sections[p] = secs
            self.pieces[p] = _layout([secs[t][0].dim for t in keep])
            dims.append(self.pieces[p][-1] if keep else 0)
        diffs = {p: self._diff(p) for p in range(N)}
        self.complex = CochainComplex(f, 0, dims, diffs)
        self.complex.validate()

    def _restrict_section(self, p, t_small, t_big, vec_coords):
        """Section over the intersection of t_small, restricted to the
        intersection of t_big, in the target's section coordinates."""
        sub_s, U_s = self.sections[p][t_small]
        sub_b, U_b = self.sections[len(t_big) - 1][t_big]
        S = self.sheaf
        full = [self.field.zero()] * sum(S.stalk_dims[x] for x in U_s)
        off_s = _layout([S.stalk_dims[x] for x in U_s])
        amb = sub_s.basis.matvec(vec_coords) if sub_s.dim else full
        off_b = _layout([S.stalk_dims[x] for x in U_b])
        out = []
        for i, x in enumerate(U_b):
            j = U_s.index(x)
            out.extend(amb[off_s[j]:off_s[j] + S.stalk_dims[x]])
        coords = sub_b.coords(out)
        if coords is None:
            raise AssertionError("restricted family not a section")
        return coords

    def _diff(self, p: int) -> Matrix:
        f = self.field
        rows = self.complex_dim_raw(p + 1)
        cols = self.complex_dim_raw(p)
        ent = []
        idx_p = {t: i for i, t in enumerate(self.tuples[p])}
        for bi, big in enumerate(self.tuples.get(p + 1, [])):
            ro = self.pieces[p + 1][bi]
            for j in range(p + 2):
                small = big[:j] + big[j + 1:]
                if small not in idx_p:
                    continue
                co = self.pieces[p][idx_p[small]]
                sgn = f.coerce((-1) ** j)
                sub_s, _ = self.sections[p][small]
                for a in range(sub_s.dim):
                    unit = [f.one() if i == a else f.zero()
                            for i in range(sub_s.dim)]
                    out = self._restrict_section(p, small, big, unit)
                    for b, v in enumerate(out):
                        if v != f.zero():
                            ent.append((ro + b, co + a, f.mul(sgn, v)))
        return Matrix.from_sparse(f, rows, cols, ent)

    def complex_dim_raw(self, p: int) -> int:
        return self.pieces[p][-1] if self.tuples.get(p) else 0

    def section_value_at(self, p: int, t, coords, x: int):
        """Stalk value at x of the section over the intersection of t."""
        sub, U = self.sections[p][t]
        S = self.sheaf
        amb = sub.basis.matvec(coords)
        off = _layout([S.stalk_dims[y] for y in U])
        i = U.index(x)
        return amb[off[i]:off[i] + S.stalk_dims[x]]


def cech_complex(cover: OpenCover, S: SheafOnPoset, N: int) -> CechComplex:
    return CechComplex(cover, S, N)


def cech_cup(cz: CechComplex, p: int, alpha, ck: CechComplex, q: int, beta):
    """(alpha cup beta)_(i_0..i_(p+q)) = res(alpha_(i_0..i_p)) *
    beta_(i_p..i_(p+q)); beta has constant (1-dim) coefficients."""
    S = cz.sheaf
    f = cz.field
    out = [f.zero()] * cz.complex.dim(p + q)
    idx_a = {t: i for i, t in enumerate(cz.tuples[p])}
    idx_b = {t: i for i, t in enumerate(ck.tuples[q])}
    for oi, t in enumerate(cz.tuples.get(p + q, [])):
        front = t[:p + 1]
        back = t[p:]
        if front not in idx_a or back not in idx_b:
            continue
        sub_t, U_t = cz.sections[p + q][t]
        # build the stalkwise product over U_t
        fam = []
        asub, aU = cz.sections[p][front]
        bsub, bU = ck.sections[q][back]
        a_off = cz.pieces[p][idx_a[front]]
        b_off = ck.pieces[q][idx_b[back]]
        a_co = alpha[a_off:a_off + asub.dim]
        b_co = beta[b_off:b_off + bsub.dim]
        if all(v == f.zero() for v in a_co) or \
                all(v == f.zero() for v in b_co):
            continue
        a_amb = asub.basis.matvec(a_co)
        b_amb = bsub.basis.matvec(b_co)
        a_layout = _layout([S.stalk_dims[y] for y in aU])
        b_layout = _layout([ck.sheaf.stalk_dims[y] for y in bU])
        for x in U_t:
            ai = aU.index(x)
            seg = list(a_amb[a_layout[ai]:a_layout[ai] + S.stalk_dims[x]])
            bi = bU.index(x)
            bseg = b_amb[b_layout[bi]:b_layout[bi] + ck.sheaf.stalk_dims[x]]
            bval = bseg[0] if bseg else f.zero()
            fam.extend(f.mul(bval, v) for v in seg)
        coords = sub_t.coords(fam)
        if coords is None:
            raise AssertionError("cup family is not a section")
        o = cz.pieces[p + q][oi]
        for i, v in enumerate(coords):
            out[o + i] = f.add(out[o + i], v)
    return tuple(out)


# ---------------------------------------------------------------------------
# the comparison map: Cech classes to derived classes
# ---------------------------------------------------------------------------


class _CechGodement:
    """The double complex C^a(U, A^b) in chain-function coordinates: a
    cochain assigns to each (a+1)-tuple a function on chains starting inside
    the intersection."""

    def __init__(self, cover: OpenCover, god: GodementResolution, N: int):
        self.cover = cover
        self.god = god
        self.N = N
        f = god.field
        self.field = f
        r = len(cover.opens)
        self.tuples = {a: [t for t in combinations(range(r), a + 1)
                           if cover.intersection(t)] for a in range(N + 1)}
        # chain lists per (tuple, b): chains starting inside the intersection
        self._chain_ids = {}
        self._offsets = {}
        for a in range(N + 1):
            for t in self.tuples[a]:
                pts = set(self.cover.intersection(t))
                for b in range(N + 1):
                    ids = [i for i, c in enumerate(god.chains[b])
                           if c[0] in pts]
                    self._chain_ids[(t, b)] = ids
                    self._offsets[(t, b)] = _layout(
                        [god.sheaf.stalk_dims[god.chains[b][i][-1]]
                         for i in ids])

    def dim(self, a: int, b: int) -> int:
        return sum(self._offsets[(t, b)][-1] for t in self.tuples[a]) \
            if self.tuples.get(a) else 0

    def layout(self, a: int, b: int) -> list:
        return _layout([self._offsets[(t, b)][-1] for t in self.tuples[a]])

    def cech_d(self, a: int, b: int) -> Matrix:
        """Horizontal differential C^a(A^b) -> C^(a+1)(A^b): alternating sum
        of chain-function projections."""
        f = self.field
        god = self.god
        rows = self.dim(a + 1, b)
        cols = self.dim(a, b)
        ent = []
        lay_out = self.layout(a + 1, b)
        lay_in = self.layout(a, b)
        idx_small = {t: i for i, t in enumerate(self.tuples[a])}
        for bi, big in enumerate(self.tuples.get(a + 1, [])):
            ids_big = self._chain_ids[(big, b)]
            off_big = self._offsets[(big, b)]
            for j in range(a + 2):
                small = big[:j] + big[j + 1:]
                if small not in idx_small:
                    continue
                sgn = f.coerce((-1) ** j)
                ids_small = self._chain_ids[(small, b)]
                off_small = self._offsets[(small, b)]
                pos_small = {ci: off_small[k] for k, ci in enumerate(ids_small)}
                base_out = lay_out[bi]
                base_in = lay_in[idx_small[small]]
                for k, ci in enumerate(ids_big):
                    d = god.sheaf.stalk_dims[god.chains[b][ci][-1]]
                    if ci not in pos_small:
                        continue
                    for w in range(d):
                        ent.append((base_out + off_big[k] + w,
                                    base_in + pos_small[ci] + w, sgn))
        return Matrix.from_sparse(f, rows, cols, ent)

    def vert_d(self, a: int, b: int) -> Matrix:
        """Vertical differential C^a(A^b) -> C^a(A^(b+1)) tuplewise."""
        f = self.field
        god = self.god
        rows = self.dim(a, b + 1)
        cols = self.dim(a, b)
        ent = []
        lay_out = self.layout(a, b + 1)
        lay_in = self.layout(a, b)
        S = god.sheaf
        for ti, t in enumerate(self.tuples.get(a, [])):
            ids_in = self._chain_ids[(t, b)]
            ids_out = self._chain_ids[(t, b + 1)]
            off_in = self._offsets[(t, b)]
            off_out = self._offsets[(t, b + 1)]
            pos_in = {ci: off_in[k] for k, ci in enumerate(ids_in)}
            idxb = god.chain_index[b]
            for k, ci in enumerate(ids_out):
                c = god.chains[b + 1][ci]
                ro = lay_out[ti] + off_out[k]
                dtop = S.stalk_dims[c[-1]]
                for i in range(b + 2):
                    sub = c[:i] + c[i + 1:]
                    if sub not in idxb:
                        continue
                    cj = idxb[sub]
                    if cj not in pos_in:
                        continue
                    co = lay_in[ti] + pos_in[cj]
                    sgn = f.coerce((-1) ** i)
                    if i < b + 1:
                        for w in range(dtop):
                            ent.append((ro + w, co + w, sgn))
                    else:
                        rmat = S.restriction(c[-2], c[-1])
                        for x in range(rmat.nrows):
                            rw = rmat.row(x)
                            for y in range(rmat.ncols):
                                if rw[y] != f.zero():
                                    ent.append((ro + x, co + y,
                                                f.mul(sgn, rw[y])))
        return Matrix.from_sparse(f, rows, cols, ent)


def phi_cech(cz: CechComplex, god: GodementResolution, p: int, alpha,
             dc: _CechGodement | None = None) -> tuple:
    """Image of a Cech p-cocycle in the chain-function complex, by the
    staircase through the double complex (row solves, then the vertical
    differential, with the total-complex sign)."""
    cover = cz.cover
    f = cz.field
    if dc is None:
        dc = _CechGodement(cover, god, p + 1)
    # embed: alpha gives per-tuple sections of S; a section over U embeds in
    # A^0 as the chain function c -> res(s at c_0)
    vec = []
    S = cz.sheaf
    for ti, t in enumerate(cz.tuples[p]):
        sub, U = cz.sections[p][t]
        off = cz.pieces[p][ti]
        coords = alpha[off:off + sub.dim]
        amb = sub.basis.matvec(coords)
        lay = _layout([S.stalk_dims[x] for x in U])
        for ci in dc._chain_ids[(t, 0)]:
            c = god.chains[0][ci]
            i = U.index(c[0])
            vec.extend(amb[lay[i]:lay[i] + S.stalk_dims[c[0]]])
    z = tuple(vec)
    a_deg = p
    for k in range(p):
        # solve cech_d(a_deg - 1, k) y = z
        dmat = dc.cech_d(a_deg - 1, k)
        sol = Echelon(dmat).solve(z)
        if sol is None:
            raise ZigZagObstruction(
                f"row at Godement level {k} is not exact")
        sgn = f.coerce(-((-1) ** (a_deg - 1)))
        z = tuple(f.mul(sgn, v)
                  for v in dc.vert_d(a_deg - 1, k).matvec(sol))
        a_deg -= 1
    # z lives in C^0(A^p): glue to a global chain function
    out = [f.zero()] * god.chain_dim(p)
    seen = [False] * god.chain_dim(p)
    lay = dc.layout(0, p)
    offs = god.offsets[p]
    for ti, t in enumerate(dc.tuples[0]):
        ids = dc._chain_ids[(t, p)]
        off_t = dc._offsets[(t, p)]
        for k, ci in enumerate(ids):
            d = god.sheaf.stalk_dims[god.chains[p][ci][-1]]
            seg = z[lay[ti] + off_t[k]: lay[ti] + off_t[k] + d]
            base = offs[ci]
            if seen[base] if d else False:
                for i in range(d):
                    if out[base + i] != seg[i]:
                        raise ZigZagObstruction(
                            "glued values disagree on overlaps")
            else:
                for i in range(d):
                    out[base + i] = seg[i]
                if d:
                    seen[base] = True
    return tuple(out)

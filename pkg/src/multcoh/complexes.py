"""Cochain complexes over an exact field: shifts, cohomology, hom-complexes
and tensor products.

All complexes carry an explicit finite window [lo, hi]; dimensions outside it
are zero.  The hom-complex <A,B> has degree-n part the sum over p of
Hom(A^p, B^{n+p}) and differential df = d o f - (-1)^n f o d; its cocycles are
the chain maps A -> B[n].  The tensor differential is Koszul-signed with the
left factor's degree, which makes composition and evaluation chain maps.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import (
    FieldSpec, Matrix, Subspace, Echelon,
    kernel, rank, image_basis, complete_in_subspace,
)

__all__ = [
    "NotAComplex",
    "CochainComplex",
    "GradedMap",
    "CohomologySpace",
    "shift",
    "truncate",
    "hom_complex",
    "HomComplex",
    "cohomology",
    "tensor",
    "TensorComplex",
    "graded_differential",
]


class NotAComplex(Exception):
    def __init__(self, degree):
        self.degree = degree
        super().__init__(f"d o d != 0 at degree {degree}")


class CochainComplex:
    """Graded vector space with degree +1 differentials inside a window."""

    __slots__ = ("field", "lo", "hi", "_dims", "_diffs", "_validated")

    def __init__(self, field: FieldSpec, lo: int, dims, diffs=None):
        """dims: list of dimensions for degrees lo, lo+1, ...; diffs: dict or
        list of Matrix, diffs[n]: C^n -> C^(n+1)."""
        self.field = field
        dims = list(dims)
        while dims and dims[-1] == 0:
            dims.pop()
        while dims and dims[0] == 0:
            dims.pop(0)
            lo += 1
        self.lo = lo
        self.hi = lo + len(dims) - 1 if dims else lo
        self._dims = {lo + i: d for i, d in enumerate(dims) if d}
        self._diffs = {}
        if diffs is not None:
            items = diffs.items() if isinstance(diffs, dict) else \
                ((lo + i, m) for i, m in enumerate(diffs))
            for n, m in items:
                if m is None:
                    continue
                if m.shape != (self.dim(n + 1), self.dim(n)):
                    raise ValueError(
                        f"differential at {n} has shape {m.shape}, "
                        f"expected {(self.dim(n + 1), self.dim(n))}")
                if self.dim(n) and self.dim(n + 1):
                    self._diffs[n] = m
        self._validated = False

    # -- structure -----------------------------------------------------------

    def dim(self, n: int) -> int:
        return self._dims.get(n, 0)

    def degrees(self):
        return sorted(self._dims)

    def total_dim(self) -> int:
        return sum(self._dims.values())

    def d(self, n: int) -> Matrix:
        m = self._diffs.get(n)
        if m is None:
            return Matrix.zero(self.field, self.dim(n + 1), self.dim(n))
        return m

    def validate(self):
        """Assert d o d = 0 everywhere; raises NotAComplex."""
        if self._validated:
            return self
        for n in self.degrees():
            if self.dim(n) and self.dim(n + 1) and self.dim(n + 2):
                if not (self.d(n + 1) * self.d(n)).is_zero():
                    raise NotAComplex(n)
        self._validated = True
        return self

    # -- constructors --------------------------------------------------------

    @staticmethod
    def single(field: FieldSpec, dim: int = 1, degree: int = 0) -> "CochainComplex":
        return CochainComplex(field, degree, [dim])

    @staticmethod
    def zero_complex(field: FieldSpec) -> "CochainComplex":
        return CochainComplex(field, 0, [])

    def __eq__(self, other):
        if not isinstance(other, CochainComplex):
            return NotImplemented
        if (self.field, self._dims) != (other.field, other._dims):
            return False
        return all(self.d(n) == other.d(n) for n in self.degrees())

    def __repr__(self):
        dims = " ".join(f"{n}:{d}" for n, d in sorted(self._dims.items()))
        return f"<CochainComplex {dims or 'zero'} over {self.field!r}>"

    def to_json(self):
        degs = self.degrees()
        lo = degs[0] if degs else 0
        hi = degs[-1] if degs else -1
        return {
            "field": self.field.to_json(),
            "lo": lo,
            "hi": hi,
            "dims": [self.dim(n) for n in range(lo, hi + 1)],
            "differentials": [
                [self.field.to_str(v) for r in self.d(n).rows_list() for v in r]
                for n in range(lo, hi)
            ],
        }

    @staticmethod
    def from_json(obj) -> "CochainComplex":
        f = FieldSpec.from_json(obj["field"])
        lo = obj["lo"]
        dims = obj["dims"]
        diffs = {}
        for i, ent in enumerate(obj.get("differentials", [])):
            n = lo + i
            nr, nc = dims[i + 1], dims[i]
            vals = [f.parse(s) for s in ent]
            diffs[n] = Matrix(f, nr, nc, [vals[r * nc:(r + 1) * nc]
                                          for r in range(nr)])
        return CochainComplex(f, lo, dims, diffs)


@dataclass
class GradedMap:
    """Degree-n graded map between complexes: components f_p: A^p -> B^(n+p)."""

    source: CochainComplex
    target: CochainComplex
    degree: int
    components: dict

    def __post_init__(self):
        clean = {}
        for p, m in self.components.items():
            exp = (self.target.dim(self.degree + p), self.source.dim(p))
            if m.shape != exp:
                raise ValueError(f"component at {p} has shape {m.shape}, expected {exp}")
            if exp[0] and exp[1]:
                clean[p] = m
        self.components = clean

    def component(self, p: int) -> Matrix:
        m = self.components.get(p)
        if m is None:
            return Matrix.zero(self.source.field,
                               self.target.dim(self.degree + p),
                               self.source.dim(p))
        return m

    def compose(self, other: "GradedMap") -> "GradedMap":
        """self o other (other applied first)."""
        if other.target is not self.source and other.target != self.source:
            raise ValueError("composition source/target mismatch")
        n = self.degree + other.degree
        comps = {}
        for p in other.source.degrees():
            mid = other.degree + p
            if self.source.dim(mid) and other.source.dim(p) \
                    and self.target.dim(n + p):
                comps[p] = self.component(mid) * other.component(p)
        return GradedMap(other.source, self.target, n, comps)

    def add(self, other: "GradedMap") -> "GradedMap":
        assert self.degree == other.degree
        comps = {}
        for p in set(self.components) | set(other.components):
            comps[p] = self.component(p) + other.component(p)
        return GradedMap(self.source, self.target, self.degree, comps)

    def sub(self, other: "GradedMap") -> "GradedMap":
        return self.add(other.scale(self.source.field.coerce(-1)))

    def scale(self, c) -> "GradedMap":
        comps = {p: m.scale(c) for p, m in self.components.items()}
        return GradedMap(self.source, self.target, self.degree, comps)

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.components.values())

    def __eq__(self, other):
        if not isinstance(other, GradedMap):
            return NotImplemented
        if self.degree != other.degree:
            return False
        for p in set(self.components) | set(other.components):
            if self.component(p) != other.component(p):
                return False
        return True

    @staticmethod
    def identity(c: CochainComplex) -> "GradedMap":
        return GradedMap(c, c, 0, {n: Matrix.identity(c.field, c.dim(n))
                                   for n in c.degrees()})

    @staticmethod
    def zero_map(src: CochainComplex, tgt: CochainComplex, degree: int) -> "GradedMap":
        return GradedMap(src, tgt, degree, {})

    def to_json(self):
        return {"degree": self.degree,
                "components": {str(p): m.to_json()
                               for p, m in sorted(self.components.items())}}


def graded_differential(f: GradedMap) -> GradedMap:
    """df = d_B o f - (-1)^n f o d_A in <A,B>."""
    A, B, n = f.source, f.target, f.degree
    sign = A.field.coerce((-1) ** n)
    comps = {}
    for p in A.degrees():
        post = B.d(n + p) * f.component(p) if B.dim(n + p + 1) else None
        pre = f.component(p + 1) * A.d(p) if B.dim(n + p + 1) else None
        if B.dim(n + p + 1) and A.dim(p):
            comps[p] = post - pre.scale(sign)
    return GradedMap(A, B, n + 1, comps)


def shift(c: CochainComplex, n: int) -> CochainComplex:
    """C[n]: dims(p) = C.dims(n+p), differential (-1)^n d."""
    degs = c.degrees()
    if not degs:
        return CochainComplex.zero_complex(c.field)
    lo = degs[0] - n
    hi = degs[-1] - n
    dims = [c.dim(n + p) for p in range(lo, hi + 1)]
    sign = c.field.coerce((-1) ** n)
    diffs = {}
    for p in range(lo, hi):
        if c.dim(n + p) and c.dim(n + p + 1):
            diffs[p] = c.d(n + p).scale(sign)
    return CochainComplex(c.field, lo, dims, diffs)


def truncate(c: CochainComplex, lo: int, hi: int) -> CochainComplex:
    """Brutal truncation to degrees lo..hi (maps across the cut dropped)."""
    dims = [c.dim(n) for n in range(lo, hi + 1)]
    diffs = {n: c._diffs[n] for n in c._diffs if lo <= n < hi}
    return CochainComplex(c.field, lo, dims, diffs)


class HomComplex:
    """<A,B> with its block bookkeeping.

    Degree-n coordinates: blocks ordered by increasing source degree p, and
    inside the block Hom(A^p, B^(n+p)) is vectorized column-major (source
    basis index slow, target fast).
    """

    def __init__(self, A: CochainComplex, B: CochainComplex,
                 lo: int | None = None, hi: int | None = None):
        if A.field != B.field:
            raise ValueError("field mismatch")
        self.source = A
        self.target = B
        adeg, bdeg = A.degrees(), B.degrees()
        if not adeg or not bdeg:
            self.complex = CochainComplex.zero_complex(A.field)
            self._blocks = {}
            self.lo, self.hi = 0, -1
            return
        full_lo = bdeg[0] - adeg[-1]
        full_hi = bdeg[-1] - adeg[0]
        self.lo = full_lo if lo is None else max(lo, full_lo)
        self.hi = full_hi if hi is None else min(hi, full_hi)
        self._blocks = {}
        dims = []
        for n in range(self.lo, self.hi + 1):
            blocks = []
            off = 0
            for p in adeg:
                s = A.dim(p) * B.dim(n + p)
                if s:
                    blocks.append((p, off, s))
                    off += s
            self._blocks[n] = blocks
            dims.append(off)
        diffs = {}
        for n in range(self.lo, self.hi):
            diffs[n] = self._differential(n)
        self.complex = CochainComplex(A.field, self.lo, dims, diffs)

    def blocks(self, n: int):
        return self._blocks.get(n, [])

    def block_dim(self, n: int) -> int:
        bl = self.blocks(n)
        return bl[-1][1] + bl[-1][2] if bl else 0

    def _differential(self, n: int) -> Matrix:
        A, B = self.source, self.target
        f = A.field
        nr = self.block_dim(n + 1)
        nc = self.block_dim(n)
        sign = f.coerce(-((-1) ** n))
        out = {}
        tgt_off = {p: o for p, o, _ in self.blocks(n + 1)}
        for p, off, size in self.blocks(n):
            # post-composition with d_B lands in block p of degree n+1
            if p in tgt_off and B.dim(n + p + 1):
                blk = Matrix.identity(f, A.dim(p)).kron(B.d(n + p))
                out[(tgt_off[p], off)] = blk
            # pre-composition with d_A from block p lands in block p-1
            if (p - 1) in tgt_off and A.dim(p - 1):
                blk = A.d(p - 1).transpose().kron(
                    Matrix.identity(f, B.dim(n + p))).scale(sign)
                key = (tgt_off[p - 1], off)
                out[key] = out[key] + blk if key in out else blk
        return _assemble_blocks(f, nr, nc, out)

    # -- encode / decode -----------------------------------------------------

    def encode(self, g: GradedMap) -> tuple:
        """GradedMap of matching degree -> coordinate vector."""
        n = g.degree
        vec = []
        for p, off, size in self.blocks(n):
            m = g.component(p)
            for j in range(m.ncols):
                vec.extend(m.col(j))
        return tuple(vec)

    def decode(self, n: int, vec) -> GradedMap:
        vec = list(vec)
        comps = {}
        A, B = self.source, self.target
        for p, off, size in self.blocks(n):
            rows_n = B.dim(n + p)
            cols_n = A.dim(p)
            cols = [vec[off + j * rows_n: off + (j + 1) * rows_n]
                    for j in range(cols_n)]
            comps[p] = Matrix.from_cols(A.field, cols) if cols else \
                Matrix.zero(A.field, rows_n, 0)
        return GradedMap(A, B, n, comps)


def _assemble_blocks(field: FieldSpec, nr: int, nc: int, blocks: dict) -> Matrix:
    """Dense matrix from {(row_off, col_off): Matrix}."""
    if field.p is not None:
        import numpy as np
        out = np.zeros((nr, nc), dtype=np.int64)
        for (ro, co), m in blocks.items():
            out[ro:ro + m.nrows, co:co + m.ncols] = m.to_numpy()
        return Matrix.from_numpy(field, out)
    z = field.zero()
    rows = [[z] * nc for _ in range(nr)]
    for (ro, co), m in blocks.items():
        for i in range(m.nrows):
            r = m.row(i)
            row = rows[ro + i]
            for j in range(m.ncols):
                row[co + j] = r[j]
    return Matrix(field, nr, nc, rows)


def hom_complex(A: CochainComplex, B: CochainComplex,
                lo: int | None = None, hi: int | None = None) -> HomComplex:
    return HomComplex(A, B, lo, hi)


@dataclass
class CohomologySpace:
    """H^n of a complex with chosen cocycle representatives.

    cocycle_reps: columns are representatives inside C^n; class_projection
    maps C^n coordinates to H^n coordinates (it kills coboundaries, and on a
    non-cocycle its value is meaningless).
    """

    degree: int
    dim: int
    cocycle_reps: Matrix
    class_projection: Matrix

    def project(self, vec) -> tuple:
        return self.class_projection.matvec(vec)


def cohomology(c: CochainComplex, n: int) -> CohomologySpace:
    c.validate()
    f = c.field
    cn = c.dim(n)
    if cn == 0:
        return CohomologySpace(n, 0, Matrix.zero(f, 0, 0), Matrix.zero(f, 0, 0))
    z = kernel(c.d(n))
    b = image_basis(c.d(n - 1)) if c.dim(n - 1) else Matrix.zero(f, cn, 0)
    chosen = complete_in_subspace(b, z.basis)
    reps = z.basis.take_cols(chosen)
    h = len(chosen)
    assert h == z.dim - b.ncols
    comp_idx = complete_in_subspace(
        Matrix.hstack([b, reps]) if h or b.ncols else Matrix.zero(f, cn, 0),
        Matrix.identity(f, cn))
    comp = Matrix.identity(f, cn).take_cols(comp_idx)
    full = Matrix.hstack([b, reps, comp])
    inv = Echelon(full).solve_matrix(Matrix.identity(f, cn))
    if inv is None:
        raise ArithmeticError("basis completion failed")
    proj = inv.take_rows(range(b.ncols, b.ncols + h))
    return CohomologySpace(n, h, reps, proj)


class TensorComplex:
    """Cw (x) Cv with Koszul-signed differential and block bookkeeping.

    Degree-n block layout: increasing left degree p (p+q = n); inside a block
    the pair (i_w, i_v) is at index i_w * dim_v + i_v.
    """

    def __init__(self, Cw: CochainComplex, Cv: CochainComplex):
        if Cw.field != Cv.field:
            raise ValueError("field mismatch")
        self.left = Cw
        self.right = Cv
        f = Cw.field
        wdeg, vdeg = Cw.degrees(), Cv.degrees()
        if not wdeg or not vdeg:
            self.complex = CochainComplex.zero_complex(f)
            self._blocks = {}
            return
        lo = wdeg[0] + vdeg[0]
        hi = wdeg[-1] + vdeg[-1]
        self._blocks = {}
        dims = []
        for n in range(lo, hi + 1):
            off = 0
            blocks = []
            for p in wdeg:
                q = n - p
                s = Cw.dim(p) * Cv.dim(q)
                if s:
                    blocks.append((p, off, s))
                    off += s
            self._blocks[n] = blocks
            dims.append(off)
        diffs = {}
        for n in range(lo, hi):
            nr = self.block_dim(n + 1)
            nc = self.block_dim(n)
            out = {}
            tgt_off = {p: o for p, o, _ in self._blocks.get(n + 1, [])}
            for p, off, size in self._blocks[n]:
                q = n - p
                if (p + 1) in tgt_off and Cw.dim(p + 1):
                    out[(tgt_off[p + 1], off)] = \
                        Cw.d(p).kron(Matrix.identity(f, Cv.dim(q)))
                if p in tgt_off and Cv.dim(q + 1):
                    sgn = f.coerce((-1) ** p)
                    out[(tgt_off[p], off)] = \
                        Matrix.identity(f, Cw.dim(p)).kron(Cv.d(q)).scale(sgn)
            diffs[n] = _assemble_blocks(f, nr, nc, out)
        self.complex = CochainComplex(f, lo, dims, diffs)

    def blocks(self, n: int):
        return self._blocks.get(n, [])

    def block_dim(self, n: int) -> int:
        bl = self.blocks(n)
        return bl[-1][1] + bl[-1][2] if bl else 0

    def embed(self, p: int, q: int, wvec, vvec) -> tuple:
        """Insertion of a pure tensor w (x) v into degree p+q coordinates."""
        n = p + q
        f = self.left.field
        vec = [f.zero()] * self.complex.dim(n)
        for pp, off, size in self.blocks(n):
            if pp == p:
                dv = self.right.dim(q)
                for i, wv in enumerate(wvec):
                    if wv == f.zero():
                        continue
                    for j, vv in enumerate(vvec):
                        vec[off + i * dv + j] = f.mul(wv, vv)
                return tuple(vec)
        if any(v != f.zero() for v in wvec) and any(v != f.zero() for v in vvec):
            raise ValueError(f"block ({p},{q}) absent")
        return tuple(vec)

    def tensor_map(self, g: GradedMap, h: GradedMap) -> GradedMap:
        """g (x) h on tensor complexes (both degree 0)."""
        if g.degree or h.degree:
            raise ValueError("only degree-0 tensor maps are supported")
        other = TensorComplex(g.target, h.target)
        comps = {}
        for n in [nn for nn in self.complex.degrees()]:
            out = {}
            tgt_off = {p: o for p, o, _ in other.blocks(n)}
            for p, off, size in self.blocks(n):
                q = n - p
                if p in tgt_off:
                    blk = g.component(p).kron(h.component(q))
                    out[(tgt_off[p], off)] = blk
            comps[n] = _assemble_blocks(
                g.source.field, other.complex.dim(n), self.complex.dim(n), out)
        return GradedMap(self.complex, other.complex, 0, comps)


def tensor(Cw: CochainComplex, Cv: CochainComplex) -> TensorComplex:
    return TensorComplex(Cw, Cv)

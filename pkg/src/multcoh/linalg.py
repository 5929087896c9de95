"""Exact dense linear algebra over Q and prime fields.

Everything downstream (cohomology, Ext, product checks) reduces to ranks,
kernels and linear solves computed here.  All arithmetic is exact: rationals
are `fractions.Fraction` (arbitrary precision), prime-field elements are least
nonnegative residues.  Row reduction always produces the canonical reduced row
echelon form, so identical inputs give bit-identical outputs.

Three elimination backends share one interface:

* Q        integer-scaled fraction-free reduction, normalized at the end
* F_p      vectorized modular reduction on numpy rows
* F_2      rows packed into Python ints, XOR elimination
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import hashlib

import numpy as np

__all__ = [
    "FieldSpec",
    "QQ",
    "GF",
    "Matrix",
    "Subspace",
    "Echelon",
    "SpanBuilder",
    "rank",
    "kernel",
    "solve",
    "solve_matrix",
    "image_basis",
    "quotient",
    "complete_in_subspace",
]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The coefficient field: rationals (p is None) or F_p for a prime p."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    @property
    def is_rationals(self) -> bool:
        return self.p is None

    def zero(self):
        return Fraction(0) if self.p is None else 0

    def one(self):
        return Fraction(1) if self.p is None else 1

    def coerce(self, x):
        if self.p is None:
            return Fraction(x)
        return int(x) % self.p

    def neg(self, x):
        return -x if self.p is None else (-x) % self.p

    def add(self, x, y):
        return x + y if self.p is None else (x + y) % self.p

    def mul(self, x, y):
        return x * y if self.p is None else (x * y) % self.p

    def inv(self, x):
        if self.p is None:
            return Fraction(1) / x
        return pow(x, self.p - 2, self.p)

    def parse(self, s: str):
        if self.p is None:
            return Fraction(s)
        return int(s) % self.p

    def to_str(self, x) -> str:
        return str(x)

    def to_json(self) -> str:
        return "Q" if self.p is None else f"F{self.p}"

    @staticmethod
    def from_json(s: str) -> "FieldSpec":
        if s == "Q":
            return QQ
        if s.startswith("F"):
            return GF(int(s[1:]))
        raise ValueError(f"bad field spec {s!r}")

    def __repr__(self):
        return "QQ" if self.p is None else f"GF({self.p})"


QQ = FieldSpec(None)


def GF(p: int) -> FieldSpec:
    return FieldSpec(p)


def _pack_bits(bits) -> int:
    """Pack a 0/1 sequence into an int, bit i = entry i."""
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.size == 0:
        return 0
    return int.from_bytes(np.packbits(arr, bitorder="little").tobytes(), "little")


def _unpack_bits(word: int, n: int) -> list[int]:
    return [(word >> j) & 1 for j in range(n)]


class Matrix:
    """Immutable dense matrix over a FieldSpec.

    Storage is row major: Fraction tuples over Q, `bytes` rows over F_p with
    p < 256 (int tuples otherwise).  Entries are always canonical (reduced
    fractions, least nonnegative residues).
    """

    __slots__ = ("field", "nrows", "ncols", "_rows", "_np")

    def __init__(self, field: FieldSpec, nrows: int, ncols: int, rows, _raw=False):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        if _raw:
            self._rows = rows
        else:
            coerced = []
            for r in rows:
                vals = [field.coerce(x) for x in r]
                if len(vals) != ncols:
                    raise ValueError("ragged rows")
                coerced.append(self._make_row(field, vals))
            if len(coerced) != nrows:
                raise ValueError("row count mismatch")
            self._rows = tuple(coerced)
        self._np = None

    @staticmethod
    def _make_row(field, vals):
        if field.p is not None and field.p < 256:
            return bytes(vals)
        return tuple(vals)

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_rows(cls, field: FieldSpec, rows) -> "Matrix":
        rows = [list(r) for r in rows]
        nr = len(rows)
        nc = len(rows[0]) if rows else 0
        return cls(field, nr, nc, rows)

    @classmethod
    def from_cols(cls, field: FieldSpec, cols) -> "Matrix":
        cols = [list(c) for c in cols]
        nc = len(cols)
        nr = len(cols[0]) if cols else 0
        return cls(field, nr, nc, [[cols[j][i] for j in range(nc)] for i in range(nr)])

    @classmethod
    def zero(cls, field: FieldSpec, nrows: int, ncols: int) -> "Matrix":
        z = field.zero()
        row = cls._make_row(field, [z] * ncols)
        return cls(field, nrows, ncols, tuple(row for _ in range(nrows)), _raw=True)

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        z, o = field.zero(), field.one()
        rows = []
        for i in range(n):
            r = [z] * n
            r[i] = o
            rows.append(cls._make_row(field, r))
        return cls(field, n, n, tuple(rows), _raw=True)

    @classmethod
    def diagonal(cls, field: FieldSpec, diag) -> "Matrix":
        diag = [field.coerce(x) for x in diag]
        n = len(diag)
        z = field.zero()
        rows = []
        for i in range(n):
            r = [z] * n
            r[i] = diag[i]
            rows.append(cls._make_row(field, r))
        return cls(field, n, n, tuple(rows), _raw=True)

    @classmethod
    def from_entries(cls, field: FieldSpec, nrows: int, ncols: int, entries: dict) -> "Matrix":
        """Build from a sparse {(i, j): value} dict."""
        z = field.zero()
        rows = [[z] * ncols for _ in range(nrows)]
        for (i, j), v in entries.items():
            rows[i][j] = field.coerce(v)
        return cls(field, nrows, ncols, rows)

    @classmethod
    def column(cls, field: FieldSpec, vec) -> "Matrix":
        return cls.from_cols(field, [list(vec)])

    @classmethod
    def from_sparse(cls, field: FieldSpec, nrows: int, ncols: int, entries) -> "Matrix":
        """Build from an iterable of (i, j, value); memory-lean for F_p."""
        if field.p is not None and field.p < 256:
            buf = bytearray(nrows * ncols)
            p = field.p
            for i, j, v in entries:
                buf[i * ncols + j] = (buf[i * ncols + j] + int(v)) % p
            b = bytes(buf)
            rows = tuple(b[i * ncols:(i + 1) * ncols] for i in range(nrows))
            return cls(field, nrows, ncols, rows, _raw=True)
        acc: dict = {}
        for i, j, v in entries:
            k = (i, j)
            acc[k] = field.add(acc[k], field.coerce(v)) if k in acc else field.coerce(v)
        return cls.from_entries(field, nrows, ncols, acc)

    # -- access ------------------------------------------------------------

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def entry(self, i: int, j: int):
        v = self._rows[i][j]
        return v

    def row(self, i: int) -> tuple:
        r = self._rows[i]
        return tuple(r) if not isinstance(r, tuple) else r

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self._rows)

    def rows_list(self) -> list[tuple]:
        return [self.row(i) for i in range(self.nrows)]

    def is_zero(self) -> bool:
        if self.field.p is not None and self.field.p < 256:
            return all(not any(r) for r in self._rows)
        z = self.field.zero()
        return all(all(v == z for v in r) for r in self._rows)

    def to_numpy(self) -> np.ndarray:
        """Int64 view for prime fields (cached only when small)."""
        if self.field.p is None:
            raise TypeError("no numpy view over Q")
        if self._np is not None:
            return self._np
        if self.nrows == 0 or self.ncols == 0:
            arr = np.zeros((self.nrows, self.ncols), dtype=np.int64)
        elif self.field.p < 256:
            arr = np.frombuffer(b"".join(self._rows), dtype=np.uint8)
            arr = arr.reshape(self.nrows, self.ncols).astype(np.int64)
        else:
            arr = np.array([list(r) for r in self._rows], dtype=np.int64)
        arr.flags.writeable = False
        if self.nrows * self.ncols <= 4_000_000:
            self._np = arr
        return arr

    @classmethod
    def from_numpy(cls, field: FieldSpec, arr) -> "Matrix":
        arr = np.asarray(arr, dtype=np.int64) % field.p
        nr, nc = arr.shape
        if field.p < 256:
            b = arr.astype(np.uint8).tobytes()
            rows = tuple(b[i * nc:(i + 1) * nc] for i in range(nr))
            return cls(field, nr, nc, rows, _raw=True)
        rows = tuple(tuple(int(x) for x in arr[i]) for i in range(nr))
        return cls(field, nr, nc, rows, _raw=True)

    # -- arithmetic --------------------------------------------------------

    def __mul__(self, other: "Matrix") -> "Matrix":
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.field != other.field or self.ncols != other.nrows:
            raise ValueError(
                f"shape/field mismatch {self.shape}x{other.shape}")
        f = self.field
        if f.p is not None:
            if self.nrows == 0 or other.ncols == 0 or self.ncols == 0:
                return Matrix.zero(f, self.nrows, other.ncols)
            if self.nrows * self.ncols > 8_000_000:
                # chunked product keeps the int64 working set bounded
                chunks = []
                step = max(1, 4_000_000 // max(self.ncols, 1))
                bn = other.to_numpy()
                for i0 in range(0, self.nrows, step):
                    part = self.take_rows(range(i0, min(i0 + step, self.nrows)))
                    chunks.append(Matrix.from_numpy(f, (part.to_numpy() @ bn) % f.p))
                return Matrix.vstack(chunks)
            prod = (self.to_numpy() @ other.to_numpy()) % f.p
            return Matrix.from_numpy(f, prod)
        ocols = [other.col(j) for j in range(other.ncols)]
        rows = []
        for i in range(self.nrows):
            r = self._rows[i]
            rows.append(tuple(
                sum((r[k] * c[k] for k in range(self.ncols)), Fraction(0))
                for c in ocols))
        return Matrix(f, self.nrows, other.ncols, tuple(rows), _raw=True)

    def matvec(self, vec) -> tuple:
        f = self.field
        if f.p is not None:
            if self.nrows == 0:
                return ()
            if self.ncols == 0:
                return (0,) * self.nrows
            v = np.asarray(list(vec), dtype=np.int64)
            out = (self.to_numpy() @ v) % f.p
            return tuple(int(x) for x in out)
        vec = list(vec)
        return tuple(
            sum((r[k] * vec[k] for k in range(self.ncols)), Fraction(0))
            for r in self._rows)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        f = self.field
        if f.p is not None:
            return Matrix.from_numpy(f, (self.to_numpy() + other.to_numpy()) % f.p)
        rows = tuple(tuple(a + b for a, b in zip(self._rows[i], other._rows[i]))
                     for i in range(self.nrows))
        return Matrix(f, self.nrows, self.ncols, rows, _raw=True)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        f = self.field
        if f.p is not None:
            return Matrix.from_numpy(f, (self.to_numpy() - other.to_numpy()) % f.p)
        rows = tuple(tuple(a - b for a, b in zip(self._rows[i], other._rows[i]))
                     for i in range(self.nrows))
        return Matrix(f, self.nrows, self.ncols, rows, _raw=True)

    def __neg__(self) -> "Matrix":
        return self.scale(self.field.coerce(-1))

    def scale(self, c) -> "Matrix":
        f = self.field
        c = f.coerce(c)
        if f.p is not None:
            return Matrix.from_numpy(f, (self.to_numpy() * c) % f.p)
        rows = tuple(tuple(c * v for v in r) for r in self._rows)
        return Matrix(f, self.nrows, self.ncols, rows, _raw=True)

    def transpose(self) -> "Matrix":
        f = self.field
        if f.p is not None:
            return Matrix.from_numpy(f, self.to_numpy().T)
        rows = tuple(self.col(j) for j in range(self.ncols))
        return Matrix(f, self.ncols, self.nrows, rows, _raw=True)

    def _check_same(self, other):
        if self.field != other.field or self.shape != other.shape:
            raise ValueError("shape/field mismatch")

    # -- slicing / stacking -------------------------------------------------

    def take_cols(self, idxs) -> "Matrix":
        idxs = list(idxs)
        rows = tuple(self._make_row(self.field, [r[j] for j in idxs])
                     for r in self._rows)
        return Matrix(self.field, self.nrows, len(idxs), rows, _raw=True)

    def take_rows(self, idxs) -> "Matrix":
        idxs = list(idxs)
        rows = tuple(self._rows[i] for i in idxs)
        return Matrix(self.field, len(idxs), self.ncols, rows, _raw=True)

    @classmethod
    def hstack(cls, mats) -> "Matrix":
        mats = list(mats)
        f = mats[0].field
        nr = mats[0].nrows
        rows = []
        for i in range(nr):
            vals = []
            for m in mats:
                vals.extend(m._rows[i])
            rows.append(cls._make_row(f, vals))
        return cls(f, nr, sum(m.ncols for m in mats), tuple(rows), _raw=True)

    @classmethod
    def vstack(cls, mats) -> "Matrix":
        mats = list(mats)
        f = mats[0].field
        nc = mats[0].ncols
        rows = []
        for m in mats:
            if m.ncols != nc:
                raise ValueError("column mismatch")
            rows.extend(m._rows)
        return cls(f, len(rows), nc, tuple(rows), _raw=True)

    def kron(self, other: "Matrix") -> "Matrix":
        """Kronecker product, row/col index = (self index) * other_dim + (other index)."""
        f = self.field
        if f.p is not None:
            a, b = self.to_numpy(), other.to_numpy()
            return Matrix.from_numpy(f, np.kron(a, b) % f.p)
        rows = []
        for i in range(self.nrows):
            for k in range(other.nrows):
                row = []
                ri = self._rows[i]
                rk = other._rows[k]
                for j in range(self.ncols):
                    v = ri[j]
                    row.extend(v * w for w in rk)
                rows.append(tuple(row))
        return Matrix(f, self.nrows * other.nrows, self.ncols * other.ncols,
                      tuple(rows), _raw=True)

    # -- equality / hashing / io -------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.field != other.field or self.shape != other.shape:
            return False
        if type(self._rows) is type(other._rows) and self._rows == other._rows:
            return True
        return self.rows_list() == other.rows_list()

    def __hash__(self):
        return hash((self.field, self.nrows, self.ncols, self.digest()))

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(f"{self.field.to_json()}:{self.nrows}x{self.ncols}".encode())
        for i in range(self.nrows):
            h.update(";".join(self.field.to_str(v) for v in self._rows[i]).encode())
        return h.hexdigest()

    def to_json(self):
        return {
            "field": self.field.to_json(),
            "rows": self.nrows,
            "cols": self.ncols,
            "entries": [self.field.to_str(v) for r in self._rows for v in r],
        }

    @staticmethod
    def from_json(obj) -> "Matrix":
        f = FieldSpec.from_json(obj["field"])
        nr, nc = obj["rows"], obj["cols"]
        ent = [f.parse(s) for s in obj["entries"]]
        if len(ent) != nr * nc:
            raise ValueError("entry count mismatch")
        return Matrix(f, nr, nc, [ent[i * nc:(i + 1) * nc] for i in range(nr)])

    def __repr__(self):
        if self.nrows * self.ncols > 100:
            return f"<Matrix {self.nrows}x{self.ncols} over {self.field!r}>"
        body = "; ".join(" ".join(str(v) for v in self.row(i))
                         for i in range(self.nrows))
        return f"<Matrix {self.nrows}x{self.ncols} [{body}]>"


# ---------------------------------------------------------------------------
# Echelon factorizations
# ---------------------------------------------------------------------------


class Echelon:
    """Canonical RREF of a matrix, with the row transform on pivot rows.

    Solving keeps only the pivot rows R and the matching transform rows T with
    R = T*A, which is enough to produce the deterministic particular solution
    (free variables zero) and the canonical kernel basis.  Consistency of a
    solve is certified by checking A*x = b exactly.
    """

    def __init__(self, m: Matrix):
        self.matrix = m
        self.field = m.field
        f = m.field
        if f.p == 2:
            self._init_f2(m)
        elif f.p is not None:
            self._init_fp(m)
        else:
            self._init_q(m)
        self.rank = len(self.pivot_cols)

    # -- F2: rows are ints, bit j = column j ------------------------------

    def _init_f2(self, m: Matrix):
        n = m.ncols
        rows = []
        if m.nrows and n:
            arr = m.to_numpy().astype(np.uint8)
            packed = np.packbits(arr, axis=1, bitorder="little")
            for i in range(m.nrows):
                rows.append(int.from_bytes(packed[i].tobytes(), "little"))
        else:
            rows = [0] * m.nrows
        piv: dict[int, tuple[int, int]] = {}
        for i, a in enumerate(rows):
            t = 1 << i
            while a:
                j = (a & -a).bit_length() - 1
                if j in piv:
                    pa, pt = piv[j]
                    a ^= pa
                    t ^= pt
                else:
                    piv[j] = (a, t)
                    break
        # back-eliminate to canonical RREF
        cols = sorted(piv)
        for c in cols:
            pa, pt = piv[c]
            for c2 in cols:
                if c2 < c:
                    qa, qt = piv[c2]
                    if (qa >> c) & 1:
                        piv[c2] = (qa ^ pa, qt ^ pt)
        self._piv = [(c,) + piv[c] for c in cols]
        self.pivot_cols = tuple(cols)

    # -- F_p ----------------------------------------------------------------

    def _init_fp(self, m: Matrix):
        p = self.field.p
        n = m.ncols
        piv: dict[int, tuple[np.ndarray, np.ndarray]] = {}
        for i in range(m.nrows):
            a = m.to_numpy()[i].copy() if n else np.zeros(0, dtype=np.int64)
            t = np.zeros(m.nrows, dtype=np.int64)
            t[i] = 1
            while True:
                nz = np.nonzero(a)[0]
                if nz.size == 0:
                    break
                j = int(nz[0])
                if j in piv:
                    pa, pt = piv[j]
                    c = a[j]
                    a = (a - c * pa) % p
                    t = (t - c * pt) % p
                else:
                    inv = pow(int(a[j]), p - 2, p)
                    piv[j] = ((a * inv) % p, (t * inv) % p)
                    break
        cols = sorted(piv)
        for c in cols:
            pa, pt = piv[c]
            for c2 in cols:
                if c2 < c:
                    qa, qt = piv[c2]
                    cf = qa[c]
                    if cf:
                        piv[c2] = ((qa - cf * pa) % p, (qt - cf * pt) % p)
        self._piv = [(c, piv[c][0], piv[c][1]) for c in cols]
        self.pivot_cols = tuple(cols)

    # -- Q: integer-scaled rows (a | t), normalized to Fractions at the end --

    def _init_q(self, m: Matrix):
        from math import gcd, lcm
        n = m.ncols
        nr = m.nrows
        piv: dict[int, list[int]] = {}

        def normalize(row):
            g = 0
            for v in row:
                g = gcd(g, v)
                if g == 1:
                    break
            if g > 1:
                row = [v // g for v in row]
            return row

        for i in range(nr):
            fr = m._rows[i]
            den = lcm(*[v.denominator for v in fr]) if n else 1
            a = [int(v * den) for v in fr] + [0] * nr
            a[n + i] = den
            while True:
                j = next((k for k in range(n) if a[k]), None)
                if j is None:
                    break
                if j in piv:
                    pa = piv[j]
                    c, pc = a[j], pa[j]
                    a = normalize([x * pc - y * c for x, y in zip(a, pa)])
                else:
                    piv[j] = a
                    break
        cols = sorted(piv)
        for c in cols:
            pa = piv[c]
            for c2 in cols:
                if c2 < c:
                    qa = piv[c2]
                    cf = qa[c]
                    if cf:
                        piv[c2] = normalize(
                            [x * pa[c] - y * cf for x, y in zip(qa, pa)])
        self._piv = []
        for c in cols:
            row = piv[c]
            lead = Fraction(row[c])
            arow = tuple(Fraction(v) / lead for v in row[:n])
            trow = tuple(Fraction(v) / lead for v in row[n:])
            self._piv.append((c, arow, trow))
        self.pivot_cols = tuple(c for c, _, _ in self._piv)

    # -- queries -------------------------------------------------------------

    def rref_rows(self) -> list:
        """Pivot rows of the canonical RREF, ascending pivot column."""
        n = self.matrix.ncols
        if self.field.p == 2:
            return [tuple(_unpack_bits(a, n)) for _, a, _ in self._piv]
        if self.field.p is not None:
            return [tuple(int(x) for x in a) for _, a, _ in self._piv]
        return [a for _, a, _ in self._piv]

    def _reduce_vec(self, b):
        """y = T*b restricted to pivot rows."""
        f = self.field
        if f.p == 2:
            bw = _pack_bits([x & 1 for x in b])
            return [(t & bw).bit_count() & 1 for _, _, t in self._piv]
        if f.p is not None:
            bv = np.asarray(list(b), dtype=np.int64)
            return [int((t @ bv) % f.p) for _, _, t in self._piv]
        bv = list(b)
        return [sum((tv * bv[k] for k, tv in enumerate(t) if tv), Fraction(0))
                for _, _, t in self._piv]

    def solve(self, b):
        """Deterministic x with A*x = b (free variables 0), or None."""
        f = self.field
        b = [f.coerce(x) for x in b]
        if len(b) != self.matrix.nrows:
            raise ValueError("rhs length mismatch")
        y = self._reduce_vec(b)
        x = [f.zero()] * self.matrix.ncols
        for (c, _, _), yv in zip(self._piv, y):
            x[c] = yv
        if self._residual_ok(x, b):
            return tuple(x)
        return None

    def _residual_ok(self, x, b) -> bool:
        ax = self.matrix.matvec(x)
        return list(ax) == list(b)

    def solve_matrix(self, B: Matrix):
        """X with A*X = B columnwise, or None if any column is inconsistent."""
        cols = []
        for j in range(B.ncols):
            x = self.solve(B.col(j))
            if x is None:
                return None
            cols.append(x)
        return Matrix.from_cols(self.field, cols) if cols else \
            Matrix.zero(self.field, self.matrix.ncols, 0)

    def kernel_basis(self) -> list[tuple]:
        """Canonical kernel basis: one vector per free column."""
        f = self.field
        n = self.matrix.ncols
        pset = set(self.pivot_cols)
        basis = []
        rrows = self.rref_rows()
        for j in range(n):
            if j in pset:
                continue
            v = [f.zero()] * n
            v[j] = f.one()
            for (c, _, _), row in zip(self._piv, rrows):
                v[c] = f.neg(row[j])
            basis.append(tuple(v))
        return basis

    def in_image(self, b) -> bool:
        return self.solve(b) is not None


# ---------------------------------------------------------------------------
# Derived operations
# ---------------------------------------------------------------------------


def rank(m: Matrix) -> int:
    return Echelon(m).rank


def solve(m: Matrix, b):
    return Echelon(m).solve(b)


def solve_matrix(m: Matrix, B: Matrix):
    return Echelon(m).solve_matrix(B)


@dataclass
class Subspace:
    """A subspace of k^n given by an n x d matrix of independent columns."""

    ambient_dim: int
    basis: Matrix

    def __post_init__(self):
        if self.basis.nrows != self.ambient_dim:
            raise ValueError("basis rows != ambient dim")
        if rank(self.basis) != self.basis.ncols:
            raise ValueError("basis columns are dependent")
        self._ech = None

    @property
    def dim(self) -> int:
        return self.basis.ncols

    @property
    def field(self) -> FieldSpec:
        return self.basis.field

    def _echelon(self) -> Echelon:
        if self._ech is None:
            self._ech = Echelon(self.basis)
        return self._ech

    def coords(self, vec):
        """Coordinates of vec in this basis, or None if not a member."""
        return self._echelon().solve(vec)

    def contains(self, vec) -> bool:
        return self.coords(vec) is not None

    @staticmethod
    def full(field: FieldSpec, n: int) -> "Subspace":
        return Subspace(n, Matrix.identity(field, n))

    @staticmethod
    def zero(field: FieldSpec, n: int) -> "Subspace":
        return Subspace(n, Matrix.zero(field, n, 0))


def kernel(m: Matrix) -> Subspace:
    """Kernel of m as a subspace of k^(ncols)."""
    basis = Echelon(m).kernel_basis()
    if basis:
        return Subspace(m.ncols, Matrix.from_cols(m.field, basis))
    return Subspace.zero(m.field, m.ncols)


def image_basis(m: Matrix) -> Matrix:
    """Deterministic basis of the column space: the pivot columns of m."""
    return m.take_cols(Echelon(m).pivot_cols)


class SpanBuilder:
    """Incrementally grown span of vectors in k^n, for greedy completions."""

    def __init__(self, field: FieldSpec, n: int):
        self.field = field
        self.n = n
        self._piv = {}  # leading index -> reduced row

    @property
    def dim(self) -> int:
        return len(self._piv)

    def _reduce_f2(self, w):
        while w:
            j = (w & -w).bit_length() - 1
            if j in self._piv:
                w ^= self._piv[j]
            else:
                return j, w
        return None, 0

    def add(self, vec) -> bool:
        """Insert vec; True if it enlarged the span."""
        f = self.field
        if f.p == 2:
            w = _pack_bits([int(x) & 1 for x in vec])
            j, w = self._reduce_f2(w)
            if j is None:
                return False
            self._piv[j] = w
            return True
        if f.p is not None:
            p = f.p
            a = np.asarray(list(vec), dtype=np.int64) % p
            while True:
                nz = np.nonzero(a)[0]
                if nz.size == 0:
                    return False
                j = int(nz[0])
                if j in self._piv:
                    a = (a - a[j] * self._piv[j]) % p
                else:
                    self._piv[j] = (a * pow(int(a[j]), p - 2, p)) % p
                    return True
        from math import gcd, lcm
        fr = [Fraction(x) for x in vec]
        den = lcm(*[v.denominator for v in fr]) if fr else 1
        a = [int(v * den) for v in fr]
        while True:
            j = next((k for k, v in enumerate(a) if v), None)
            if j is None:
                return False
            if j in self._piv:
                pa = self._piv[j]
                a = [x * pa[j] - y * a[j] for x, y in zip(a, pa)]
                g = 0
                for v in a:
                    g = gcd(g, v)
                    if g == 1:
                        break
                if g > 1:
                    a = [v // g for v in a]
            else:
                self._piv[j] = a
                return True

    def contains(self, vec) -> bool:
        f = self.field
        if f.p == 2:
            w = _pack_bits([int(x) & 1 for x in vec])
            return self._reduce_f2(w)[0] is None
        probe = SpanBuilder(self.field, self.n)
        probe._piv = dict(self._piv)
        return not probe.add(vec)


def quotient(ambient_dim: int, sub: Subspace):
    """Projection and section for k^n -> k^n / sub.

    projection has (n - dim sub) rows, projection*section = identity, and
    kernel(projection) = sub.  The complement is spanned by the standard
    basis vectors at the non-pivot coordinates of sub's column echelon.
    """
    if sub.ambient_dim != ambient_dim:
        raise ValueError("ambient dimension mismatch")
    f = sub.field
    d = sub.dim
    # pivot coordinates of the subspace = pivot columns of basis^T
    pivots = Echelon(sub.basis.transpose()).pivot_cols
    comp = [i for i in range(ambient_dim) if i not in set(pivots)]
    section = Matrix.from_entries(
        f, ambient_dim, len(comp), {(i, j): f.one() for j, i in enumerate(comp)})
    if d == 0:
        return Matrix.identity(f, ambient_dim), section
    # invert [sub.basis | section] and keep the complement rows
    full = Matrix.hstack([sub.basis, section])
    inv = Echelon(full).solve_matrix(Matrix.identity(f, ambient_dim))
    if inv is None:
        raise ArithmeticError("completion is singular; basis was dependent")
    projection = inv.take_rows(range(d, ambient_dim))
    return projection, section


def complete_in_subspace(inner: Matrix, outer: Matrix) -> list[int]:
    """Indices j of outer's columns that extend span(inner) to span(outer).

    Deterministic first-fit in column order ("echelon order").
    """
    span = SpanBuilder(inner.field, inner.nrows)
    for j in range(inner.ncols):
        span.add(inner.col(j))
    chosen: list[int] = []
    for j in range(outer.ncols):
        if span.add(outer.col(j)):
            chosen.append(j)
    return chosen

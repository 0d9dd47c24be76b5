"""Exact linear algebra over the rationals (or a prime field).

Vectors are handled internally as sparse dicts ``{column: scalar}`` with no
stored zeros; the public ``Matrix`` exposes the dense row-major view.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence


class DimensionMismatch(ValueError):
    pass


# ---------------------------------------------------------------- fields

class Fp:
    """Element of the prime field GF(p)."""

    __slots__ = ("v", "p")

    def __init__(self, v, p):
        if isinstance(v, Fraction):
            v = v.numerator * pow(v.denominator, -1, p)
        elif isinstance(v, Fp):
            v = v.v
        self.v = int(v) % p
        self.p = p

    def _lift(self, other):
        if isinstance(other, Fp):
            if other.p != self.p:
                raise ValueError("mixing different prime fields")
            return other.v
        return Fp(other, self.p).v

    def __add__(self, o):
        return Fp(self.v + self._lift(o), self.p)

    __radd__ = __add__

    def __sub__(self, o):
        return Fp(self.v - self._lift(o), self.p)

    def __rsub__(self, o):
        return Fp(self._lift(o) - self.v, self.p)

    def __mul__(self, o):
        return Fp(self.v * self._lift(o), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Fp(-self.v, self.p)

    def __truediv__(self, o):
        d = self._lift(o)
        if d == 0:
            raise ZeroDivisionError("division by zero in GF(%d)" % self.p)
        return Fp(self.v * pow(d, -1, self.p), self.p)

    def __rtruediv__(self, o):
        return Fp(self._lift(o), self.p) / self

    def __eq__(self, o):
        if isinstance(o, (Fp, int, Fraction)):
            return self.v == self._lift(o)
        return NotImplemented

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return "%d mod %d" % (self.v, self.p)


class Field:
    """Ground field: ``Field()`` is Q, ``Field(p)`` is GF(p)."""

    def __init__(self, p: int | None = None):
        if p is not None and (p <= 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1))):
            raise ValueError("prime field needs a prime p > 2, got %r" % p)
        self.p = p

    def __call__(self, x):
        if self.p is None:
            if isinstance(x, str):
                return Fraction(x)
            return x if isinstance(x, Fraction) else Fraction(x)
        if isinstance(x, str):
            x = Fraction(x)
        return Fp(x, self.p)

    @property
    def characteristic(self):
        return self.p or 0

    @property
    def name(self):
        return "rational" if self.p is None else "prime:%d" % self.p

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "QQ" if self.p is None else "GF(%d)" % self.p


QQ = Field()


# ------------------------------------------------------ sparse vector tools

def vadd(u: dict, v: dict, c=1) -> dict:
    """u + c*v, fresh dict."""
    w = dict(u)
    for k, x in v.items():
        y = w.get(k, 0) + c * x
        if y == 0:
            w.pop(k, None)
        else:
            w[k] = y
    return w


def vscale(v: dict, c) -> dict:
    if c == 0:
        return {}
    return {k: c * x for k, x in v.items()}


def vclean(v: dict) -> dict:
    return {k: x for k, x in v.items() if x != 0}


def dense(v: dict, n: int, zero=Fraction(0)) -> list:
    out = [zero] * n
    for k, x in v.items():
        out[k] = x
    return out


def sparse(v: Sequence) -> dict:
    return {i: x for i, x in enumerate(v) if x != 0}


class Echelon:
    """Incrementally maintained reduced row-echelon form.

    Rows are kept fully reduced, so reducing a vector needs one pass over
    the pivots it touches.
    """

    def __init__(self):
        self.rows: dict[int, dict] = {}

    def __len__(self):
        return len(self.rows)

    def reduce(self, v: dict) -> dict:
        v = dict(v)
        for p in [c for c in v if c in self.rows]:
            c = v.get(p, 0)
            if c != 0:
                for k, x in self.rows[p].items():
                    y = v.get(k, 0) - c * x
                    if y == 0:
                        v.pop(k, None)
                    else:
                        v[k] = y
        return v

    def add(self, v: dict) -> bool:
        r = self.reduce(v)
        if not r:
            return False
        p = min(r)
        inv = 1 / r[p]
        r = {k: x * inv for k, x in r.items()}
        for q, row in self.rows.items():
            c = row.get(p, 0)
            if c != 0:
                self.rows[q] = vadd(row, r, -c)
        self.rows[p] = r
        return True

    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def sorted_rows(self) -> list[dict]:
        return [self.rows[p] for p in sorted(self.rows)]


# ------------------------------------------------------------------ Matrix

class Matrix:
    """Matrix over a field with sparse row storage and a dense view."""

    __slots__ = ("rows", "cols", "_r")

    def __init__(self, rows: int, cols: int, data: Iterable[dict] | None = None):
        self.rows = rows
        self.cols = cols
        if data is None:
            self._r = [{} for _ in range(rows)]
        else:
            self._r = [vclean(d) for d in data]
            if len(self._r) != rows:
                raise DimensionMismatch("expected %d rows" % rows)

    # construction
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], field: Field = QQ) -> "Matrix":
        rows = [list(r) for r in rows]
        cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise DimensionMismatch("ragged rows")
        return cls(len(rows), cols, [sparse([field(x) for x in r]) for r in rows])

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[dict]) -> "Matrix":
        data = [{} for _ in range(rows)]
        for j, col in enumerate(columns):
            for i, x in col.items():
                if x != 0:
                    data[i][j] = x
        m = cls(rows, len(columns))
        m._r = data
        return m

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> "Matrix":
        one = field(1)
        return cls(n, n, [{i: one} for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols)

    # views
    @property
    def entries(self) -> list:
        out = []
        for r in self._r:
            out.extend(dense(r, self.cols))
        return out

    def to_lists(self) -> list[list]:
        return [dense(r, self.cols) for r in self._r]

    def row(self, i: int) -> dict:
        return self._r[i]

    def column(self, j: int) -> dict:
        return {i: r[j] for i, r in enumerate(self._r) if j in r}

    def columns(self) -> list[dict]:
        cols = [{} for _ in range(self.cols)]
        for i, r in enumerate(self._r):
            for j, x in r.items():
                cols[j][i] = x
        return cols

    def __getitem__(self, ij):
        i, j = ij
        return self._r[i].get(j, Fraction(0))

    @property
    def shape(self):
        return (self.rows, self.cols)

    def nnz(self) -> int:
        return sum(len(r) for r in self._r)

    # arithmetic
    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionMismatch("%s @ %s" % (self.shape, other.shape))
        orows = other._r
        out = []
        for r in self._r:
            acc: dict = {}
            for k, x in r.items():
                for j, y in orows[k].items():
                    acc[j] = acc.get(j, 0) + x * y
            out.append(acc)
        return Matrix(self.rows, other.cols, out)

    def apply(self, v: dict) -> dict:
        out = {}
        for i, r in enumerate(self._r):
            s = 0
            for k, x in r.items():
                y = v.get(k)
                if y is not None:
                    s = s + x * y
            if s != 0:
                out[i] = s
        return out

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionMismatch("%s + %s" % (self.shape, other.shape))
        return Matrix(self.rows, self.cols, [vadd(a, b) for a, b in zip(self._r, other._r)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionMismatch("%s - %s" % (self.shape, other.shape))
        return Matrix(self.rows, self.cols, [vadd(a, b, -1) for a, b in zip(self._r, other._r)])

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "Matrix":
        return Matrix(self.rows, self.cols, [vscale(r, c) for r in self._r])

    def __mul__(self, c):
        if isinstance(c, Matrix):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def transpose(self) -> "Matrix":
        return Matrix.from_columns(self.cols, self._r)

    @property
    def T(self):
        return self.transpose()

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.shape == other.shape and self._r == other._r

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(tuple(sorted(r.items())) for r in self._r)))

    def is_zero(self) -> bool:
        return not any(self._r)

    def is_identity(self) -> bool:
        return self.rows == self.cols and all(r == {i: 1} for i, r in enumerate(self._r))

    def rank(self) -> int:
        e = Echelon()
        for r in self._r:
            e.add(r)
        return len(e)

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise DimensionMismatch("inverse of non-square matrix")
        n = self.rows
        e = Echelon()
        for i, r in enumerate(self._r):
            row = dict(r)
            row[n + i] = 1
            e.add(row)
        if e.pivots()[:n] != list(range(n)) or len(e) < n:
            raise ZeroDivisionError("matrix is singular")
        return Matrix(n, n, [{k - n: x for k, x in e.rows[i].items() if k >= n} for i in range(n)])

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    def restrict_rows(self, idx: Sequence[int]) -> "Matrix":
        return Matrix(len(idx), self.cols, [self._r[i] for i in idx])

    def restrict_cols(self, idx: Sequence[int]) -> "Matrix":
        pos = {j: t for t, j in enumerate(idx)}
        return Matrix(self.rows, len(idx),
                      [{pos[j]: x for j, x in r.items() if j in pos} for r in self._r])

    def flatten(self) -> dict:
        """Row-major coordinates as a sparse vector of length rows*cols."""
        c = self.cols
        return {i * c + j: x for i, r in enumerate(self._r) for j, x in r.items()}

    @classmethod
    def unflatten(cls, v: dict, rows: int, cols: int) -> "Matrix":
        data = [{} for _ in range(rows)]
        for k, x in v.items():
            data[k // cols][k % cols] = x
        return cls(rows, cols, data)

    def __repr__(self):
        return "Matrix(%d×%d, %s)" % (self.rows, self.cols, self.to_lists())


def block_diag(blocks: Sequence[Matrix]) -> Matrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    data, co = [], 0
    for b in blocks:
        for r in b._r:
            data.append({j + co: x for j, x in r.items()})
        co += b.cols
    return Matrix(rows, cols, data)


def hstack(blocks: Sequence[Matrix]) -> Matrix:
    rows = blocks[0].rows
    data = [{} for _ in range(rows)]
    co = 0
    for b in blocks:
        if b.rows != rows:
            raise DimensionMismatch("hstack")
        for i, r in enumerate(b._r):
            for j, x in r.items():
                data[i][j + co] = x
        co += b.cols
    return Matrix(rows, co, data)


def vstack(blocks: Sequence[Matrix]) -> Matrix:
    cols = blocks[0].cols
    data = []
    for b in blocks:
        if b.cols != cols:
            raise DimensionMismatch("vstack")
        data.extend(b._r)
    return Matrix(len(data), cols, data)


# -------------------------------------------------------------- operations

def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    e = Echelon()
    for r in m._r:
        e.add(r)
    rows = e.sorted_rows()
    rows += [{}] * (m.rows - len(rows))
    return Matrix(m.rows, m.cols, rows), e.pivots()


def kernel_vectors(rows: Iterable[dict], ncols: int) -> list[dict]:
    e = Echelon()
    for r in rows:
        e.add(r)
    piv = e.rows
    out = []
    for f in range(ncols):
        if f in piv:
            continue
        v = {f: 1}
        for p, row in piv.items():
            x = row.get(f)
            if x is not None:
                v[p] = -x
        out.append(v)
    return out


def kernel(m: Matrix) -> "Subspace":
    return Subspace(m.cols, kernel_vectors(m._r, m.cols))


def solve(m: Matrix, b: Sequence) -> list | None:
    if len(b) != m.rows:
        raise DimensionMismatch("rhs length %d, rows %d" % (len(b), m.rows))
    n = m.cols
    e = Echelon()
    for r, bi in zip(m._r, b):
        row = dict(r)
        if bi != 0:
            row[n] = bi
        e.add(row)
    if n in e.rows:
        return None
    x = [Fraction(0)] * n
    for p, row in e.rows.items():
        x[p] = row.get(n, Fraction(0))
    if b and not isinstance(b[0], (int, Fraction)):
        zero = b[0] * 0
        x = [zero + xi for xi in x]
    return x


def solve_sparse(columns: Sequence[dict], target: dict) -> dict | None:
    """Coefficients c with sum_j c_j columns[j] = target, or None."""
    n = len(columns)
    rows: dict[int, dict] = {}
    for j, col in enumerate(columns):
        for i, x in col.items():
            rows.setdefault(i, {})[j] = x
    for i, x in target.items():
        rows.setdefault(i, {})[n] = x
    e = Echelon()
    for r in rows.values():
        e.add(r)
    if n in e.rows:
        return None
    return {p: row[n] for p, row in e.rows.items() if n in row}


# ---------------------------------------------------------------- Subspace

class Subspace:
    """Subspace of k^n stored by its canonical RREF basis."""

    __slots__ = ("ambient_dim", "_e", "_key")

    def __init__(self, ambient_dim: int, vectors: Iterable = ()):
        self.ambient_dim = ambient_dim
        e = Echelon()
        for v in vectors:
            if not isinstance(v, dict):
                if len(v) != ambient_dim:
                    raise DimensionMismatch("vector of length %d in k^%d" % (len(v), ambient_dim))
                v = sparse(v)
            elif v and max(v) >= ambient_dim:
                raise DimensionMismatch("vector index out of range for k^%d" % ambient_dim)
            e.add(v)
        self._e = e
        self._key = None

    @classmethod
    def zero(cls, n):
        return cls(n)

    @classmethod
    def full(cls, n):
        return cls(n, [{i: Fraction(1)} for i in range(n)])

    @property
    def dim(self) -> int:
        return len(self._e)

    def __len__(self):
        return self.dim

    @property
    def pivots(self) -> list[int]:
        return self._e.pivots()

    def sparse_basis(self) -> list[dict]:
        return self._e.sorted_rows()

    @property
    def basis(self) -> list[list]:
        return [dense(r, self.ambient_dim) for r in self.sparse_basis()]

    def _check(self, other):
        if not isinstance(other, Subspace):
            raise TypeError("expected Subspace")
        if other.ambient_dim != self.ambient_dim:
            raise DimensionMismatch("ambient %d vs %d" % (self.ambient_dim, other.ambient_dim))

    def contains(self, v) -> bool:
        if not isinstance(v, dict):
            if len(v) != self.ambient_dim:
                raise DimensionMismatch("vector length")
            v = sparse(v)
        return not self._e.reduce(v)

    __contains__ = contains

    def coordinates(self, v) -> list:
        """Coefficients of v in the canonical basis (v must lie in the subspace)."""
        if not isinstance(v, dict):
            v = sparse(v)
        if not self.contains(v):
            raise ValueError("vector not in subspace")
        return [v.get(p, Fraction(0)) for p in self.pivots]

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace(self.ambient_dim, self.sparse_basis() + other.sparse_basis())

    def intersection(self, other: "Subspace") -> "Subspace":
        """Zassenhaus: rows (a|a) and (b|0); rows with zero left half give a ∩ b."""
        self._check(other)
        n = self.ambient_dim
        e = Echelon()
        for a in self.sparse_basis():
            row = dict(a)
            row.update({k + n: x for k, x in a.items()})
            e.add(row)
        for b in other.sparse_basis():
            e.add(b)
        inter = [{k - n: x for k, x in r.items()} for p, r in e.rows.items() if p >= n]
        return Subspace(n, inter)

    __and__ = intersection

    def is_subspace_of(self, other: "Subspace") -> bool:
        self._check(other)
        return all(other.contains(v) for v in self.sparse_basis())

    def key(self):
        if self._key is None:
            self._key = (self.ambient_dim,
                         tuple(tuple(sorted(r.items())) for r in self.sparse_basis()))
        return self._key

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return "Subspace(dim %d in k^%d)" % (self.dim, self.ambient_dim)

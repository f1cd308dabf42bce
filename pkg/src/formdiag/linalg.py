"""Dense matrices and Gaussian elimination over the configured scalars.

Exact mode pivots on the first nonzero entry and divides through, which
is exact over a field; float mode pivots on the entry of largest modulus
and treats anything within the configured tolerance as zero.
"""

from __future__ import annotations

from .errors import DimensionMismatchError, NotSquareError
from .fields import FieldConfig, common_config


class Matrix:
    """An immutable dense matrix of Scalars sharing one FieldConfig."""

    __slots__ = ("cfg", "data")

    def __init__(self, cfg: FieldConfig, rows):
        self.cfg = cfg
        data = []
        width = None
        for row in rows:
            r = [cfg.scalar(x) for x in row]
            if width is None:
                width = len(r)
            elif len(r) != width:
                raise DimensionMismatchError("ragged rows")
            data.append(r)
        if not data or width == 0:
            width = width or 0
        self.data = data

    # -- construction -------------------------------------------------------

    @classmethod
    def identity(cls, cfg, n):
        return cls(cfg, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, cfg, r, c):
        return cls(cfg, [[0] * c for _ in range(r)])

    @classmethod
    def from_columns(cls, cfg, cols):
        if not cols:
            return cls(cfg, [])
        n = len(cols[0])
        return cls(cfg, [[cols[j][i] for j in range(len(cols))] for i in range(n)])

    # -- shape / access ------------------------------------------------------

    @property
    def nrows(self):
        return len(self.data)

    @property
    def ncols(self):
        return len(self.data[0]) if self.data else 0

    def row(self, i):
        return list(self.data[i])

    def col(self, j):
        return [r[j] for r in self.data]

    def __getitem__(self, key):
        i, j = key
        return self.data[i][j]

    def tolist(self):
        return [list(r) for r in self.data]

    def embed(self, cfg):
        if cfg == self.cfg:
            return self
        return Matrix(cfg, [[cfg.embed(x) for x in r] for r in self.data])

    # -- arithmetic ----------------------------------------------------------

    def _coerced(self, other):
        cfg = common_config(self.cfg, other.cfg)
        return self.embed(cfg), other.embed(cfg), cfg

    def __add__(self, other):
        a, b, cfg = self._coerced(other)
        if (a.nrows, a.ncols) != (b.nrows, b.ncols):
            raise DimensionMismatchError("matrix addition shape mismatch")
        return Matrix(cfg, [[x + y for x, y in zip(r1, r2)]
                            for r1, r2 in zip(a.data, b.data)])

    def __sub__(self, other):
        a, b, cfg = self._coerced(other)
        if (a.nrows, a.ncols) != (b.nrows, b.ncols):
            raise DimensionMismatchError("matrix subtraction shape mismatch")
        return Matrix(cfg, [[x - y for x, y in zip(r1, r2)]
                            for r1, r2 in zip(a.data, b.data)])

    def __neg__(self):
        return Matrix(self.cfg, [[-x for x in r] for r in self.data])

    def __mul__(self, other):
        if isinstance(other, Matrix):
            a, b, cfg = self._coerced(other)
            if a.ncols != b.nrows:
                raise DimensionMismatchError("matrix product shape mismatch")
            bt = list(zip(*b.data))
            out = []
            for r in a.data:
                out.append(
                    [_dot(cfg, r, col) for col in bt] if bt else []
                )
            return Matrix(cfg, out)
        return Matrix(self.cfg, [[x * other for x in r] for r in self.data])

    def __rmul__(self, other):
        return self * other

    def transpose(self):
        return Matrix(self.cfg, [list(c) for c in zip(*self.data)]) if self.data \
            else Matrix(self.cfg, [])

    def conj(self):
        return Matrix(self.cfg, [[x.conj() for x in r] for r in self.data])

    def trace(self):
        if self.nrows != self.ncols:
            raise NotSquareError("trace of a non-square matrix")
        t = self.cfg.zero
        for i in range(self.nrows):
            t = t + self.data[i][i]
        return t

    def vectorize(self):
        """Row-major flattening."""
        return [x for r in self.data for x in r]

    def is_zero(self):
        return all(x.is_zero() for r in self.data for x in r)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        a, b, _ = self._coerced(other)
        if (a.nrows, a.ncols) != (b.nrows, b.ncols):
            return False
        return all((x - y).is_zero()
                   for r1, r2 in zip(a.data, b.data) for x, y in zip(r1, r2))

    __hash__ = None

    def __repr__(self):
        rows = "; ".join(" ".join(x.text() for x in r) for r in self.data)
        return f"Matrix[{rows}]"

    # -- elimination ---------------------------------------------------------

    def rref(self):
        """Reduced row echelon form and the pivot column indices."""
        rows = [list(r) for r in self.data]
        pivots = _eliminate(rows, self.cfg, reduced=True)
        return Matrix(self.cfg, rows) if rows else Matrix(self.cfg, []), pivots

    def rank(self):
        rows = [list(r) for r in self.data]
        return len(_eliminate(rows, self.cfg, reduced=False))

    def nullspace(self):
        """Basis vectors (lists of Scalars) of the right kernel."""
        rows = [list(r) for r in self.data]
        pivots = _eliminate(rows, self.cfg, reduced=True)
        n = self.ncols
        zero, one = self.cfg.zero, self.cfg.one
        free = [c for c in range(n) if c not in pivots]
        basis = []
        for fc in free:
            v = [zero] * n
            v[fc] = one
            for r, pc in enumerate(pivots):
                v[pc] = -rows[r][fc]
            basis.append(v)
        return basis

    def column_space_basis(self):
        """The pivot columns of the matrix, as column vectors."""
        rows = [list(r) for r in self.data]
        pivots = _eliminate(rows, self.cfg, reduced=False)
        return [self.col(j) for j in pivots]

    def det(self):
        if self.nrows != self.ncols:
            raise NotSquareError("determinant of a non-square matrix")
        n = self.nrows
        rows = [list(r) for r in self.data]
        cfg = self.cfg
        det = cfg.one
        for c in range(n):
            p = _pick_pivot(rows, c, c, cfg)
            if p is None:
                return cfg.zero
            if p != c:
                rows[c], rows[p] = rows[p], rows[c]
                det = -det
            det = det * rows[c][c]
            inv = rows[c][c].inverse()
            for r in range(c + 1, n):
                if not rows[r][c].is_zero():
                    f = rows[r][c] * inv
                    rows[r] = [x - f * y for x, y in zip(rows[r], rows[c])]
        return det

    def inverse(self):
        if self.nrows != self.ncols:
            raise NotSquareError("inverse of a non-square matrix")
        n = self.nrows
        cfg = self.cfg
        rows = [
            list(r) + [cfg.one if i == j else cfg.zero for j in range(n)]
            for i, r in enumerate(self.data)
        ]
        pivots = _eliminate(rows, cfg, reduced=True, limit=n)
        if len(pivots) != n:
            raise ZeroDivisionError("matrix is singular")
        return Matrix(cfg, [r[n:] for r in rows])

    def solve(self, b):
        """A solution x of self @ x = b, or None when inconsistent."""
        cfg = self.cfg
        b = [cfg.scalar(x) for x in b]
        if len(b) != self.nrows:
            raise DimensionMismatchError("right-hand side length mismatch")
        rows = [list(r) + [b[i]] for i, r in enumerate(self.data)]
        pivots = _eliminate(rows, cfg, reduced=True, limit=self.ncols)
        n = self.ncols
        for r in range(len(pivots), self.nrows):
            if not rows[r][n].is_zero():
                return None
        x = [cfg.zero] * n
        for r, pc in enumerate(pivots):
            x[pc] = rows[r][n]
        return x


def _dot(cfg, u, v):
    s = cfg.zero
    for x, y in zip(u, v):
        if not (x.is_zero() or y.is_zero()):
            s = s + x * y
    return s


def _pick_pivot(rows, from_row, col, cfg):
    if cfg.mode == "exact":
        for r in range(from_row, len(rows)):
            if not rows[r][col].is_zero():
                return r
        return None
    best, best_mag = None, cfg.tolerance
    for r in range(from_row, len(rows)):
        mag = abs(rows[r][col])
        if mag > best_mag:
            best, best_mag = r, mag
    return best


def _eliminate(rows, cfg, reduced=True, limit=None):
    """In-place elimination; returns the pivot column list."""
    if not rows:
        return []
    ncols = len(rows[0]) if limit is None else limit
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= len(rows):
            break
        p = _pick_pivot(rows, r, c, cfg)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        targets = range(len(rows)) if reduced else range(r + 1, len(rows))
        for rr in targets:
            if rr != r and not rows[rr][c].is_zero():
                f = rows[rr][c]
                rows[rr] = [x - f * y for x, y in zip(rows[rr], rows[r])]
        pivots.append(c)
        r += 1
    return pivots


def block_diag(cfg, mats):
    """Block diagonal assembly of square matrices."""
    mats = [m.embed(cfg) for m in mats]
    n = sum(m.nrows for m in mats)
    out = [[cfg.zero] * n for _ in range(n)]
    off = 0
    for m in mats:
        for i in range(m.nrows):
            for j in range(m.ncols):
                out[off + i][off + j] = m[i, j]
        off += m.nrows
    return Matrix(cfg, out)


def span_contains(basis, vector, cfg):
    """Whether ``vector`` lies in the span of the given vectors."""
    if not basis:
        return all(cfg.scalar(x).is_zero() for x in vector)
    m = Matrix.from_columns(cfg, [list(b) for b in basis])
    return m.solve(vector) is not None


def spans_equal(basis_a, basis_b, cfg):
    """Mutual containment of two spans, decided by rank."""
    if not basis_a or not basis_b:
        return not basis_a and not basis_b
    ra = Matrix(cfg, basis_a).rank()
    rb = Matrix(cfg, basis_b).rank()
    rab = Matrix(cfg, list(basis_a) + list(basis_b)).rank()
    return ra == rb == rab

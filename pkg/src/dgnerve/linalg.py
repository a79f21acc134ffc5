"""Dense exact matrices with Gaussian elimination over a Field.

Desk-scale only: dimensions stay in the low hundreds, so dense rows of
Fractions are simpler and fast enough. Row-reduction is fraction-free in
spirit (pivot normalization happens once per pivot).
"""

from __future__ import annotations

from .scalars import Field, QQ


class Matrix:
    """An m-by-n matrix over an exact field, stored as a list of rows."""

    __slots__ = ("field", "rows", "ncols", "data")

    def __init__(self, nrows: int, ncols: int, field: Field = QQ, data=None):
        self.field = field
        self.rows = nrows
        self.ncols = ncols
        z = field.zero()
        if data is None:
            self.data = [[z] * ncols for _ in range(nrows)]
        else:
            if len(data) != nrows or any(len(r) != ncols for r in data):
                raise ValueError("data shape mismatch")
            self.data = [[field.of(x) for x in row] for row in data]

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> "Matrix":
        m = cls(n, n, field)
        one = field.one()
        for i in range(n):
            m.data[i][i] = one
        return m

    def copy(self) -> "Matrix":
        m = Matrix(self.rows, self.ncols, self.field)
        m.data = [row[:] for row in self.data]
        return m

    def __getitem__(self, ij):
        return self.data[ij[0]][ij[1]]

    def __setitem__(self, ij, v):
        self.data[ij[0]][ij[1]] = self.field.of(v)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.rows == other.rows
            and self.ncols == other.ncols
            and self.data == other.data
        )

    def __add__(self, other):
        if (self.rows, self.ncols) != (other.rows, other.ncols):
            raise ValueError("shape mismatch in add")
        f = self.field
        out = Matrix(self.rows, self.ncols, f)
        out.data = [
            [f.add(a, b) for a, b in zip(r1, r2)]
            for r1, r2 in zip(self.data, other.data)
        ]
        return out

    def __sub__(self, other):
        return self + other.scale(self.field.of(-1))

    def scale(self, c) -> "Matrix":
        f = self.field
        c = f.of(c)
        out = Matrix(self.rows, self.ncols, f)
        out.data = [[f.mul(c, a) for a in row] for row in self.data]
        return out

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.rows:
            raise ValueError("shape mismatch in mul")
        f = self.field
        out = Matrix(self.rows, other.ncols, f)
        bt = list(zip(*other.data))
        for i, row in enumerate(self.data):
            orow = out.data[i]
            for j, col in enumerate(bt):
                s = f.zero()
                for a, b in zip(row, col):
                    if not f.is_zero(a) and not f.is_zero(b):
                        s = f.add(s, f.mul(a, b))
                orow[j] = s
        return out

    def apply(self, vec: list) -> list:
        """Matrix-vector product (vec indexed by columns)."""
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        f = self.field
        out = []
        for row in self.data:
            s = f.zero()
            for a, x in zip(row, vec):
                if not f.is_zero(a) and not f.is_zero(x):
                    s = f.add(s, f.mul(a, x))
            out.append(s)
        return out

    def transpose(self) -> "Matrix":
        out = Matrix(self.ncols, self.rows, self.field)
        out.data = [list(col) for col in zip(*self.data)] if self.rows else [[] for _ in range(self.ncols)]
        if self.rows == 0:
            out.data = [[self.field.zero()] * 0 for _ in range(self.ncols)]
        return out

    def is_zero(self) -> bool:
        f = self.field
        return all(f.is_zero(a) for row in self.data for a in row)

    def rref(self) -> tuple["Matrix", list[int]]:
        """Reduced row-echelon form and the list of pivot columns."""
        f = self.field
        m = self.copy()
        pivots: list[int] = []
        r = 0
        for c in range(m.ncols):
            pr = next((i for i in range(r, m.rows) if not f.is_zero(m.data[i][c])), None)
            if pr is None:
                continue
            m.data[r], m.data[pr] = m.data[pr], m.data[r]
            inv = f.inv(m.data[r][c])
            m.data[r] = [f.mul(inv, a) for a in m.data[r]]
            for i in range(m.rows):
                if i != r and not f.is_zero(m.data[i][c]):
                    t = m.data[i][c]
                    m.data[i] = [f.sub(a, f.mul(t, b)) for a, b in zip(m.data[i], m.data[r])]
            pivots.append(c)
            r += 1
            if r == m.rows:
                break
        return m, pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self) -> list[list]:
        """Basis of the right kernel, as column vectors."""
        f = self.field
        red, pivots = self.rref()
        free = [c for c in range(self.ncols) if c not in pivots]
        basis = []
        for fc in free:
            v = [f.zero()] * self.ncols
            v[fc] = f.one()
            for r, pc in enumerate(pivots):
                v[pc] = f.neg(red.data[r][fc])
            basis.append(v)
        return basis

    def column_space(self) -> list[list]:
        """Basis of the image, as column vectors (original columns at pivots)."""
        _, pivots = self.transpose().rref()
        # pivots of the transpose are row indices; easier: pivot columns of self
        _, piv = self.rref()
        return [[self.data[i][c] for i in range(self.rows)] for c in piv]

    def solve(self, b: list) -> list | None:
        """One solution x of self @ x = b, or None if inconsistent."""
        f = self.field
        aug = Matrix(self.rows, self.ncols + 1, f)
        for i in range(self.rows):
            aug.data[i][: self.ncols] = self.data[i][:]
            aug.data[i][self.ncols] = f.of(b[i])
        red, pivots = aug.rref()
        if self.ncols in pivots:
            return None
        x = [f.zero()] * self.ncols
        for r, c in enumerate(pivots):
            x[c] = red.data[r][self.ncols]
        return x

    def __repr__(self):
        return f"Matrix({self.rows}x{self.ncols} over {self.field})"


def from_columns(cols: list[list], nrows: int, field: Field = QQ) -> Matrix:
    m = Matrix(nrows, len(cols), field)
    for j, col in enumerate(cols):
        if len(col) != nrows:
            raise ValueError("column length mismatch")
        for i, v in enumerate(col):
            m.data[i][j] = field.of(v)
    return m


def vec_add(f: Field, u: list, v: list) -> list:
    return [f.add(a, b) for a, b in zip(u, v)]


def vec_sub(f: Field, u: list, v: list) -> list:
    return [f.sub(a, b) for a, b in zip(u, v)]


def vec_scale(f: Field, c, u: list) -> list:
    c = f.of(c)
    return [f.mul(c, a) for a in u]


def vec_is_zero(f: Field, u: list) -> bool:
    return all(f.is_zero(a) for a in u)

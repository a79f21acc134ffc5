"""Bounded chain/cochain complexes over an exact field.

A ChainComplex stores per-level basis labels and differential matrices.
`shift` is +1 for cochain complexes (d raises the level) and -1 for chain
complexes (d lowers it). All constructions check d*d = 0 on demand rather
than by construction, so defective data is reportable.
"""

from __future__ import annotations

from .linalg import Matrix, from_columns
from .scalars import Field, QQ


class ChainComplex:
    def __init__(self, shift: int, spaces: dict, diffs: dict, field: Field = QQ):
        if shift not in (1, -1):
            raise ValueError("shift must be +1 (cochain) or -1 (chain)")
        self.shift = shift
        self.field = field
        self.spaces = {int(n): list(lbls) for n, lbls in spaces.items() if lbls}
        self.diffs = {}
        for n, m in diffs.items():
            n = int(n)
            if m is None:
                continue
            exp_rows, exp_cols = self.dim(n + shift), self.dim(n)
            if (m.rows, m.ncols) != (exp_rows, exp_cols):
                raise ValueError(
                    f"differential at level {n} has shape {m.rows}x{m.ncols}, "
                    f"expected {exp_rows}x{exp_cols}"
                )
            if not m.is_zero():
                self.diffs[n] = m

    def levels(self) -> list[int]:
        return sorted(self.spaces)

    def dim(self, n: int) -> int:
        return len(self.spaces.get(n, []))

    def labels(self, n: int) -> list:
        return self.spaces.get(n, [])

    def differential(self, n: int) -> Matrix:
        if n in self.diffs:
            return self.diffs[n]
        return Matrix(self.dim(n + self.shift), self.dim(n), self.field)

    def dims(self) -> dict[int, int]:
        return {n: self.dim(n) for n in self.levels()}

    def validate(self) -> list[int]:
        """Levels at which d*d != 0 (empty list means a genuine complex)."""
        bad = []
        for n in self.levels():
            sq = self.differential(n + self.shift) @ self.differential(n)
            if not sq.is_zero():
                bad.append(n)
        return bad

    def homology(self) -> dict[int, int]:
        """dim Ker(d_n) - rank(d at the level below), per level."""
        out = {}
        for n in self.levels():
            zn = self.dim(n) - self.differential(n).rank()
            bn = self.differential(n - self.shift).rank()
            out[n] = zn - bn
        return {n: d for n, d in out.items()}

    def homology_reps(self, n: int):
        """(boundary basis, homology representative cycles) at level n,
        as column vectors in the level-n coordinates."""
        f = self.field
        dn = self.differential(n)
        cycles = dn.nullspace()
        dprev = self.differential(n - self.shift)
        bounds = []
        if dprev.ncols and dprev.rows:
            red, piv = dprev.rref()
            for c in piv:
                bounds.append([dprev.data[i][c] for i in range(dprev.rows)])
        dim_n = self.dim(n)
        stacked = from_columns(bounds + cycles, dim_n, f) if dim_n else Matrix(0, 0, f)
        reps = []
        if dim_n:
            _, piv = stacked.rref()
            for c in piv:
                if c >= len(bounds):
                    reps.append(cycles[c - len(bounds)])
        return bounds, reps

    def __repr__(self):
        kind = "cochain" if self.shift == 1 else "chain"
        return f"ChainComplex({kind}, dims={self.dims()})"


def hom_complex(a: ChainComplex, b: ChainComplex) -> ChainComplex:
    """Cochain complex Hom^k = (+)_i Hom(A^i, B^{i+k}) with
    d(f) = f d_A + (-1)^{k+1} d_B f. Basis labels are (i, a_lbl, b_lbl)."""
    if a.shift != 1 or b.shift != 1:
        raise ValueError("hom_complex expects cochain complexes")
    f = a.field
    spaces: dict[int, list] = {}
    ks = set()
    for i in a.levels():
        for j in b.levels():
            ks.add(j - i)
    for k in ks:
        lbls = []
        for i in a.levels():
            for al in a.labels(i):
                for bl in b.labels(i + k):
                    lbls.append((i, al, bl))
        if lbls:
            spaces[k] = lbls
    diffs = {}
    neg = f.of(-1)
    for k, lbls in spaces.items():
        tgt = spaces.get(k + 1, [])
        tindex = {lbl: r for r, lbl in enumerate(tgt)}
        m = Matrix(len(tgt), len(lbls), f)
        sgn = f.one() if (k + 1) % 2 == 0 else neg
        for c, (i, al, bl) in enumerate(lbls):
            da = a.differential(i - 1)
            if da.rows and da.ncols:
                arow = a.labels(i).index(al)
                for c2, al2 in enumerate(a.labels(i - 1)):
                    coeff = da.data[arow][c2]
                    if not f.is_zero(coeff):
                        r = tindex.get((i - 1, al2, bl))
                        if r is not None:
                            m.data[r][c] = f.add(m.data[r][c], coeff)
            db = b.differential(i + k)
            if db.rows and db.ncols:
                bcol = b.labels(i + k).index(bl)
                for r2, bl2 in enumerate(b.labels(i + k + 1)):
                    coeff = db.data[r2][bcol]
                    if not f.is_zero(coeff):
                        r = tindex.get((i, al, bl2))
                        if r is not None:
                            m.data[r][c] = f.add(m.data[r][c], f.mul(sgn, coeff))
        diffs[k] = m
    return ChainComplex(1, spaces, diffs, f)


def op_complex(c: ChainComplex) -> ChainComplex:
    """Reindex a cochain complex as a chain complex: A^op_n = A^{-n}."""
    if c.shift != 1:
        raise ValueError("op_complex expects a cochain complex")
    spaces = {-i: c.labels(i) for i in c.levels()}
    # the chain differential at level n is d_C^{-n}: A^{-n} -> A^{-n+1}
    return ChainComplex(-1, spaces, {(-i): c.differential(i) for i in c.levels()}, c.field)


def truncate_nonneg(c: ChainComplex):
    """tau_{>=0}: keep positive levels, replace level 0 by Ker(d_0), drop the
    rest. Returns (complex, incl0) where incl0 embeds the new level-0 basis
    into the old level-0 coordinates."""
    if c.shift != -1:
        raise ValueError("truncate_nonneg expects a chain complex")
    f = c.field
    ker = c.differential(0).nullspace()
    spaces = {n: c.labels(n) for n in c.levels() if n > 0}
    k0 = [("tau0", idx) for idx in range(len(ker))]
    if k0:
        spaces[0] = k0
    incl0 = from_columns(ker, c.dim(0), f)
    diffs = {n: c.differential(n) for n in c.levels() if n > 1}
    # d_1 lands in Ker(d_0) automatically; rewrite it in the kernel basis
    d1 = c.differential(1)
    if c.dim(1) and k0:
        m = Matrix(len(k0), c.dim(1), f)
        for col in range(c.dim(1)):
            v = [d1.data[r][col] for r in range(d1.rows)]
            x = incl0.solve(v)
            if x is None:
                raise ValueError("d_1 image not contained in Ker(d_0); not a complex")
            for r, val in enumerate(x):
                m.data[r][col] = val
        diffs[1] = m
    return ChainComplex(-1, spaces, diffs, f), incl0


def cone_complex(fmap: dict, a: ChainComplex, b: ChainComplex) -> ChainComplex:
    """Mapping cone of a degree-0 cochain map f: A -> B.
    Cone^p = A^{p+1} (+) B^p with d(x, y) = (-dx, fx + dy).
    fmap: level -> Matrix (dim B^p x dim A^p)."""
    f = a.field
    spaces: dict[int, list] = {}
    for p in set([n - 1 for n in a.levels()] + b.levels()):
        lbls = [("a", l) for l in a.labels(p + 1)] + [("b", l) for l in b.labels(p)]
        if lbls:
            spaces[p] = lbls
    diffs = {}
    for p, lbls in spaces.items():
        tgt = spaces.get(p + 1, [])
        m = Matrix(len(tgt), len(lbls), f)
        da, db = a.differential(p + 1), b.differential(p)
        fm = fmap.get(p + 1)
        na, nb = a.dim(p + 2), a.dim(p + 1)
        for col, (part, lbl) in enumerate(lbls):
            if part == "a":
                ci = a.labels(p + 1).index(lbl)
                for r in range(da.rows):
                    v = da.data[r][ci]
                    if not f.is_zero(v):
                        m.data[tgt.index(("a", a.labels(p + 2)[r]))][col] = f.neg(v)
                if fm is not None:
                    for r in range(fm.rows):
                        v = fm.data[r][ci]
                        if not f.is_zero(v):
                            m.data[tgt.index(("b", b.labels(p + 1)[r]))][col] = v
            else:
                ci = b.labels(p).index(lbl)
                for r in range(db.rows):
                    v = db.data[r][ci]
                    if not f.is_zero(v):
                        m.data[tgt.index(("b", b.labels(p + 1)[r]))][col] = v
        diffs[p] = m
    return ChainComplex(1, spaces, diffs, f)


def direct_sum(a: ChainComplex, b: ChainComplex) -> ChainComplex:
    if a.shift != b.shift:
        raise ValueError("direct sum of complexes with different directions")
    f = a.field
    spaces: dict[int, list] = {}
    for n in set(a.levels()) | set(b.levels()):
        spaces[n] = [("l", x) for x in a.labels(n)] + [("r", x) for x in b.labels(n)]
    diffs = {}
    for n in spaces:
        tgt = spaces.get(n + a.shift, [])
        m = Matrix(len(tgt), len(spaces[n]), f)
        da, db = a.differential(n), b.differential(n)
        for r in range(da.rows):
            for c in range(da.ncols):
                m.data[r][c] = da.data[r][c]
        ra, ca = a.dim(n + a.shift), a.dim(n)
        for r in range(db.rows):
            for c in range(db.ncols):
                m.data[ra + r][ca + c] = db.data[r][c]
        diffs[n] = m
    return ChainComplex(a.shift, spaces, diffs, f)


def tensor_chain(a: ChainComplex, b: ChainComplex) -> ChainComplex:
    """Tensor product of chain complexes with the graded Leibniz rule
    d(x (x) y) = dx (x) y + (-1)^{deg x} x (x) dy."""
    if a.shift != -1 or b.shift != -1:
        raise ValueError("tensor_chain expects chain complexes")
    f = a.field
    spaces: dict[int, list] = {}
    for p in a.levels():
        for q in b.levels():
            spaces.setdefault(p + q, [])
            for x in a.labels(p):
                for y in b.labels(q):
                    spaces[p + q].append((p, x, q, y))
    diffs = {}
    for n, lbls in spaces.items():
        tgt = spaces.get(n - 1, [])
        tidx = {l: r for r, l in enumerate(tgt)}
        m = Matrix(len(tgt), len(lbls), f)
        for col, (p, x, q, y) in enumerate(lbls):
            da = a.differential(p)
            ci = a.labels(p).index(x)
            for r in range(da.rows):
                v = da.data[r][ci]
                if not f.is_zero(v):
                    m.data[tidx[(p - 1, a.labels(p - 1)[r], q, y)]][col] = v
            db = b.differential(q)
            cj = b.labels(q).index(y)
            sgn = f.one() if p % 2 == 0 else f.of(-1)
            for r in range(db.rows):
                v = db.data[r][cj]
                if not f.is_zero(v):
                    key = (p, x, q - 1, b.labels(q - 1)[r])
                    m.data[tidx[key]][col] = f.add(m.data[tidx[key]][col], f.mul(sgn, v))
        diffs[n] = m
    return ChainComplex(-1, spaces, diffs, f)


def is_chain_map(phi: dict, a: ChainComplex, b: ChainComplex) -> bool:
    """phi: level -> Matrix, a degree-0 map; checks d phi = phi d exactly."""
    for n in set(a.levels()) | set(phi):
        pn = phi.get(n, Matrix(b.dim(n), a.dim(n), a.field))
        pn1 = phi.get(n + a.shift, Matrix(b.dim(n + a.shift), a.dim(n + a.shift), a.field))
        lhs = b.differential(n) @ pn
        rhs = pn1 @ a.differential(n)
        if not (lhs - rhs).is_zero():
            return False
    return True


def induced_on_homology(phi: dict, a: ChainComplex, b: ChainComplex, n: int) -> Matrix:
    """Matrix of H_n(phi) w.r.t. the homology_reps bases; raises if phi does
    not send cycles to cycles up to boundaries."""
    f = a.field
    _, reps_a = a.homology_reps(n)
    bnd_b, reps_b = b.homology_reps(n)
    out = Matrix(len(reps_b), len(reps_a), f)
    pn = phi.get(n, Matrix(b.dim(n), a.dim(n), f))
    basis = from_columns(bnd_b + reps_b, b.dim(n), f)
    for j, z in enumerate(reps_a):
        w = pn.apply(z)
        x = basis.solve(w)
        if x is None:
            raise ValueError("image of a cycle is not a cycle mod boundaries")
        for i in range(len(reps_b)):
            out.data[i][j] = x[len(bnd_b) + i]
    return out


def is_quasi_iso(phi: dict, a: ChainComplex, b: ChainComplex) -> bool:
    """Equal homology dimensions and invertible induced map at every level."""
    ha, hb = a.homology(), b.homology()
    for n in set(ha) | set(hb):
        if ha.get(n, 0) != hb.get(n, 0):
            return False
        m = induced_on_homology(phi, a, b, n)
        if m.rank() != ha.get(n, 0):
            return False
    return True

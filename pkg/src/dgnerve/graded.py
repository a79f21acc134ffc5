"""Based Z-graded vector spaces and Koszul-signed graded maps.

A GradedSpace is a finite list of labelled basis vectors with integer
degrees. A GradedMap of degree n stores sparse entries keyed by
(source label, target label); an entry is only legal when
deg(target) = deg(source) + n.

The Koszul rule is the one fixed in the source conventions:
(f (x) g)(x (x) y) = (-1)^{deg(x) deg(g)} f(x) (x) g(y).
"""

from __future__ import annotations

from .scalars import Field, QQ


class GradedSpace:
    """Finite based graded space: ordered basis of (label, degree) pairs."""

    __slots__ = ("basis", "degree_of", "index_of")

    def __init__(self, basis):
        self.basis = tuple((lbl, int(d)) for lbl, d in basis)
        labels = [lbl for lbl, _ in self.basis]
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate basis labels")
        self.degree_of = {lbl: d for lbl, d in self.basis}
        self.index_of = {lbl: i for i, (lbl, _) in enumerate(self.basis)}

    @property
    def labels(self):
        return [lbl for lbl, _ in self.basis]

    def dim(self) -> int:
        return len(self.basis)

    def dims_by_degree(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for _, d in self.basis:
            out[d] = out.get(d, 0) + 1
        return out

    def slice_labels(self, degree: int) -> list:
        return [lbl for lbl, d in self.basis if d == degree]

    def __eq__(self, other):
        return isinstance(other, GradedSpace) and self.basis == other.basis

    def __repr__(self):
        return f"GradedSpace({list(self.basis)!r})"


class GradedMap:
    """Degree-n map between graded spaces, sparse on basis labels."""

    __slots__ = ("source", "target", "degree", "field", "entries")

    def __init__(self, source: GradedSpace, target: GradedSpace, degree: int,
                 field: Field = QQ, entries=None):
        self.source = source
        self.target = target
        self.degree = int(degree)
        self.field = field
        self.entries: dict = {}
        if entries:
            for (src, dst), c in entries.items():
                self.set_entry(src, dst, c)

    def set_entry(self, src, dst, coeff):
        if src not in self.source.degree_of:
            raise KeyError(f"unknown source label {src!r}")
        if dst not in self.target.degree_of:
            raise KeyError(f"unknown target label {dst!r}")
        if self.target.degree_of[dst] != self.source.degree_of[src] + self.degree:
            raise ValueError(
                f"degree violation: {src}({self.source.degree_of[src]}) -> "
                f"{dst}({self.target.degree_of[dst]}) under degree {self.degree}"
            )
        c = self.field.of(coeff)
        if self.field.is_zero(c):
            self.entries.pop((src, dst), None)
        else:
            self.entries[(src, dst)] = c

    def entry(self, src, dst):
        return self.entries.get((src, dst), self.field.zero())

    def apply_label(self, src) -> dict:
        """Image of a basis vector, as a sparse {target label: coeff} dict."""
        f = self.field
        out = {}
        for (s, d), c in self.entries.items():
            if s == src:
                out[d] = f.add(out.get(d, f.zero()), c)
        return {k: v for k, v in out.items() if not f.is_zero(v)}

    def apply_vec(self, vec: dict) -> dict:
        f = self.field
        out: dict = {}
        for s, x in vec.items():
            if f.is_zero(x):
                continue
            for (ss, d), c in self.entries.items():
                if ss == s:
                    out[d] = f.add(out.get(d, f.zero()), f.mul(c, x))
        return {k: v for k, v in out.items() if not f.is_zero(v)}

    def is_zero(self) -> bool:
        return not self.entries

    def add(self, other: "GradedMap") -> "GradedMap":
        if (other.source, other.target, other.degree) != (self.source, self.target, self.degree):
            raise ValueError("incompatible maps in add")
        f = self.field
        out = GradedMap(self.source, self.target, self.degree, f)
        for key in set(self.entries) | set(other.entries):
            c = f.add(self.entries.get(key, f.zero()), other.entries.get(key, f.zero()))
            if not f.is_zero(c):
                out.entries[key] = c
        return out

    def scale(self, c) -> "GradedMap":
        f = self.field
        c = f.of(c)
        out = GradedMap(self.source, self.target, self.degree, f)
        if not f.is_zero(c):
            out.entries = {k: f.mul(c, v) for k, v in self.entries.items()}
        return out

    def __eq__(self, other):
        return (
            isinstance(other, GradedMap)
            and self.source == other.source
            and self.target == other.target
            and self.degree == other.degree
            and self.entries == other.entries
        )

    def __repr__(self):
        return f"GradedMap(deg {self.degree}, {len(self.entries)} entries)"


def identity_map(space: GradedSpace, field: Field = QQ) -> GradedMap:
    m = GradedMap(space, space, 0, field)
    for lbl, _ in space.basis:
        m.set_entry(lbl, lbl, 1)
    return m


def compose_graded(g: GradedMap, f: GradedMap) -> GradedMap:
    """g after f; degrees add, entries are the exact product."""
    if f.target != g.source:
        raise ValueError("space mismatch: target of f must equal source of g")
    fld = f.field
    out = GradedMap(f.source, g.target, f.degree + g.degree, fld)
    by_src: dict = {}
    for (s, mid), c in f.entries.items():
        by_src.setdefault(mid, []).append((s, c))
    for (mid, dst), c2 in g.entries.items():
        for s, c1 in by_src.get(mid, []):
            key = (s, dst)
            c = fld.add(out.entries.get(key, fld.zero()), fld.mul(c2, c1))
            if fld.is_zero(c):
                out.entries.pop(key, None)
            else:
                out.entries[key] = c
    return out


def tensor_space(v: GradedSpace, w: GradedSpace) -> GradedSpace:
    return GradedSpace(
        [((a, b), da + db) for a, da in v.basis for b, db in w.basis]
    )


def tensor_maps(f: GradedMap, g: GradedMap) -> GradedMap:
    """f (x) g with the Koszul sign (-1)^{deg(x) deg(g)} on x (x) y."""
    fld = f.field
    src = tensor_space(f.source, g.source)
    dst = tensor_space(f.target, g.target)
    out = GradedMap(src, dst, f.degree + g.degree, fld)
    sign = fld.of(-1)
    for (a, a2), c1 in f.entries.items():
        dx = f.source.degree_of[a]
        koszul = (dx * g.degree) % 2
        for (b, b2), c2 in g.entries.items():
            c = fld.mul(c1, c2)
            if koszul:
                c = fld.mul(sign, c)
            out.entries[((a, b), (a2, b2))] = c
    return out


def suspend(v: GradedSpace, field: Field = QQ) -> tuple[GradedSpace, GradedMap]:
    """Shift every degree down by one; s: V -> s(V) is the identity on labels."""
    sv = GradedSpace([(lbl, d - 1) for lbl, d in v.basis])
    s = GradedMap(v, sv, -1, field)
    for lbl, _ in v.basis:
        s.set_entry(lbl, lbl, 1)
    return sv, s


def invert_iso(m: GradedMap) -> GradedMap:
    """Inverse of a degree-d iso whose matrix is a signed permutation (enough
    for suspension maps); falls back to dense solve otherwise."""
    fld = m.field
    out = GradedMap(m.target, m.source, -m.degree, fld)
    if all(len(m.apply_label(lbl)) <= 1 for lbl in m.source.labels):
        used = set()
        for (s, d), c in m.entries.items():
            if d in used:
                break
            used.add(d)
        else:
            for (s, d), c in m.entries.items():
                out.set_entry(d, s, fld.inv(c))
            return out
    # dense fallback
    from .linalg import Matrix

    n = m.source.dim()
    if m.target.dim() != n:
        raise ValueError("not invertible: dimension mismatch")
    mat = Matrix(n, n, fld)
    for (s, d), c in m.entries.items():
        mat[m.target.index_of[d], m.source.index_of[s]] = c
    for j, lbl in enumerate(m.target.labels):
        e = [fld.zero()] * n
        e[j] = fld.one()
        col = mat.solve(e)
        if col is None:
            raise ValueError("not invertible")
        for i, c in enumerate(col):
            if not fld.is_zero(c):
                out.set_entry(lbl, m.source.labels[i], c)
    return out

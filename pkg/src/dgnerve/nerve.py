"""Simplicial nerve machinery: the cosimplicial categories generated by
standard simplices, nerve simplices and their validation, faces and
degeneracies by functor (pre)composition, constructive inner-horn filling,
and pushforward along functors.

A nerve n-simplex over a category C is stored as its component family
f_{i0...ik} (strictly increasing strings, each an element of
Hom^{1-k}(x_{i0}, x_{ik})); the dictionary of a strictly unital functor
from the simplex category into C.
"""

from __future__ import annotations

from itertools import combinations

from .ainfty import (
    AInfCategory,
    AInfFunctor,
    SVec,
    check_functor,
    compose_functors,
    functor_defect,
    svec_add,
    svec_is_zero,
    svec_scale,
)
from .graded import GradedSpace
from .linalg import Matrix
from .scalars import Field, QQ


def standard_simplex_category(n: int, field: Field = QQ) -> AInfCategory:
    """The dg-category on objects 0..n with Hom(i,j) = K.(i,j) for i <= j,
    m_2((jk),(ij)) = (ik), no differential, no higher operations."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    cat = AInfCategory(list(range(n + 1)), field, arity_cap=max(2, n))
    for i in range(n + 1):
        for j in range(i, n + 1):
            cat.set_hom(i, j, GradedSpace([((i, j), 0)]))
    for i in range(n + 1):
        cat.set_unit(i, {(i, i): field.one()})
    for i in range(n + 1):
        for j in range(i, n + 1):
            for k in range(j, n + 1):
                cat.set_m((i, j, k), ((j, k), (i, j)), (i, k), 1)
    return cat


def _delta(j: int, n: int):
    """Coface map [n-1] -> [n] skipping j."""
    return lambda k: k if k < j else k + 1


def _sigma(j: int, n: int):
    """Codegeneracy map [n] -> [n-1] repeating j."""
    return lambda k: k if k <= j else k - 1


def _induced_functor(src: AInfCategory, dst: AInfCategory, vmap) -> AInfFunctor:
    n = len(src.objects) - 1
    func = AInfFunctor(src, dst, {i: vmap(i) for i in range(n + 1)},
                       arity_cap=max(len(src.objects), len(dst.objects)))
    for i in range(n + 1):
        for j in range(i, n + 1):
            func.set_f((i, j), ((i, j),), (vmap(i), vmap(j)), 1)
    return func


def coface_functor(j: int, n: int, field: Field = QQ,
                   src: AInfCategory | None = None,
                   dst: AInfCategory | None = None) -> AInfFunctor:
    if not (0 <= j <= n):
        raise ValueError(f"coface index {j} out of range for n={n}")
    src = src or standard_simplex_category(n - 1, field)
    dst = dst or standard_simplex_category(n, field)
    return _induced_functor(src, dst, _delta(j, n))


def codegeneracy_functor(j: int, n: int, field: Field = QQ,
                         src: AInfCategory | None = None,
                         dst: AInfCategory | None = None) -> AInfFunctor:
    if not (0 <= j <= n - 1):
        raise ValueError(f"codegeneracy index {j} out of range for n={n}")
    src = src or standard_simplex_category(n, field)
    dst = dst or standard_simplex_category(n - 1, field)
    return _induced_functor(src, dst, _sigma(j, n))


class NerveSimplex:
    """Component family of an n-simplex of the nerve of `cat`."""

    def __init__(self, cat: AInfCategory, objects, components: dict):
        self.cat = cat
        self.objects = tuple(objects)
        self.n = len(self.objects) - 1
        self.components = {tuple(k): dict(v) for k, v in components.items()}

    def component(self, string) -> SVec:
        return self.components.get(tuple(string), {})

    def all_strings(self):
        for k in range(1, self.n + 1):
            for s in combinations(range(self.n + 1), k + 1):
                yield s

    def __eq__(self, other):
        if not isinstance(other, NerveSimplex) or self.objects != other.objects:
            return False
        keys = set(self.components) | set(other.components)
        f = self.cat.field
        for k in keys:
            a, b = self.component(k), other.component(k)
            if not svec_is_zero(f, svec_add(f, a, svec_scale(f, -1, b))):
                return False
        return True

    def __repr__(self):
        return f"NerveSimplex(n={self.n}, objects={self.objects})"


def simplex_to_functor(cat: AInfCategory, s: NerveSimplex) -> AInfFunctor:
    """The strictly unital functor A[Delta^n] -> cat determined by s."""
    n = s.n
    src = standard_simplex_category(n, cat.field)
    func = AInfFunctor(src, cat, {i: s.objects[i] for i in range(n + 1)},
                       arity_cap=max(n, 1))
    for i in range(n + 1):
        for lbl, c in cat.unit(s.objects[i]).items():
            func.set_f((i, i), ((i, i),), lbl, c)
    for string in s.all_strings():
        arcs = tuple((string[t], string[t + 1]) for t in range(len(string) - 1))
        arcs = tuple(reversed(arcs))  # tensor order: last arc first
        for lbl, c in s.component(string).items():
            func.set_f(string, arcs, lbl, c)
    return func


def functor_to_simplex(func: AInfFunctor) -> NerveSimplex:
    """Extract the component family from a functor defined on a simplex
    category (inverse of simplex_to_functor on strict strings)."""
    n = len(func.source.objects) - 1
    objects = [func.obj_map[i] for i in range(n + 1)]
    comps = {}
    for k in range(1, n + 1):
        for string in combinations(range(n + 1), k + 1):
            arcs = tuple(reversed([(string[t], string[t + 1]) for t in range(k)]))
            v = func.f_basis(string, arcs)
            if v:
                comps[string] = v
    return NerveSimplex(func.target, objects, comps)


def string_defect(cat: AInfCategory, s: NerveSimplex, string) -> SVec:
    """Structure-equation defect of one strictly increasing string."""
    func = simplex_to_functor(cat, s)
    arcs = tuple(reversed([(string[t], string[t + 1]) for t in range(len(string) - 1)]))
    return functor_defect(func, tuple(string), arcs)


def validate_simplex(cat: AInfCategory, s: NerveSimplex) -> list:
    """Defect report; empty iff s is a nerve simplex.

    Checks presence and degree of every component, then the structure
    equation on every strictly increasing string.
    """
    f = cat.field
    bad = []
    for string in s.all_strings():
        k = len(string) - 1
        comp = s.component(string)
        x, y = s.objects[string[0]], s.objects[string[-1]]
        sp = cat.hom(x, y)
        for lbl in comp:
            if lbl not in sp.degree_of:
                bad.append(("unknown-label", string, lbl))
            elif sp.degree_of[lbl] != 1 - k:
                bad.append(("degree", string, lbl, sp.degree_of[lbl], 1 - k))
    if bad:
        return bad
    func = simplex_to_functor(cat, s)
    for string in s.all_strings():
        arcs = tuple(reversed([(string[t], string[t + 1]) for t in range(len(string) - 1)]))
        d = functor_defect(func, tuple(string), arcs)
        if not svec_is_zero(f, d):
            bad.append(("defect", string, d))
    return bad


def face(s: NerveSimplex, j: int) -> NerveSimplex:
    """d_j: precompose the defining functor with the j-th coface functor."""
    if not (0 <= j <= s.n):
        raise ValueError(f"face index {j} out of range")
    func = simplex_to_functor(s.cat, s)
    cf = coface_functor(j, s.n, s.cat.field, dst=func.source)
    return functor_to_simplex(compose_functors(func, cf))


def degeneracy(s: NerveSimplex, j: int) -> NerveSimplex:
    """s_j: precompose with the j-th codegeneracy functor."""
    if not (0 <= j <= s.n):
        raise ValueError(f"degeneracy index {j} out of range")
    func = simplex_to_functor(s.cat, s)
    cs = codegeneracy_functor(j, s.n + 1, s.cat.field, dst=func.source)
    return functor_to_simplex(compose_functors(func, cs))


def pushforward(func: AInfFunctor, s: NerveSimplex) -> NerveSimplex:
    """Image of s under a functor of ambient categories."""
    for i, x in enumerate(s.objects):
        if x not in func.obj_map:
            raise ValueError(f"object {x!r} not in the functor's object map")
    sf = simplex_to_functor(s.cat, s)
    return functor_to_simplex(compose_functors(func, sf))


class HornData:
    """Inner-horn data: all components of an n-simplex except f_{0..n} and
    f_{0..p-hat..n}."""

    def __init__(self, cat: AInfCategory, objects, p: int, components: dict):
        self.cat = cat
        self.objects = tuple(objects)
        self.n = len(self.objects) - 1
        self.p = p
        full = tuple(range(self.n + 1))
        missing = full[:p] + full[p + 1 :]
        self.components = {
            tuple(k): dict(v)
            for k, v in components.items()
            if tuple(k) not in (full, missing)
        }

    @classmethod
    def from_simplex(cls, s: NerveSimplex, p: int) -> "HornData":
        return cls(s.cat, s.objects, p, s.components)


def fill_inner_horn(cat: AInfCategory, horn: HornData) -> NerveSimplex:
    """Fill an inner horn with f_{0..n} = 0; the remaining component is the
    unique solution of the full-string structure equation, in which it
    occurs only through the face term with coefficient (-1)^{p-1}."""
    n, p = horn.n, horn.p
    if not (0 < p < n):
        raise ValueError(f"horn index p={p} is not inner for n={n}")
    full = tuple(range(n + 1))
    missing = full[:p] + full[p + 1 :]
    comps = dict(horn.components)
    s0 = NerveSimplex(cat, horn.objects, comps)
    for string in s0.all_strings():
        if string in (full, missing):
            continue
        if tuple(string) not in s0.components and len(string) >= 2:
            raise ValueError(f"horn is missing component {string}")
    d0 = string_defect(cat, s0, full)
    sign = cat.field.of(-1) if p % 2 else cat.field.one()
    comps[missing] = svec_scale(cat.field, sign, d0)
    return NerveSimplex(cat, horn.objects, comps)


# ---------------------------------------------------------------------------
# construction helpers


def m1_matrix(cat: AInfCategory, x, y, degree: int) -> tuple[Matrix, list, list]:
    """Matrix of m_1 from the degree slice to the next, plus both label lists."""
    f = cat.field
    src = cat.hom(x, y).slice_labels(degree)
    dst = cat.hom(x, y).slice_labels(degree + 1)
    m = Matrix(len(dst), len(src), f)
    for c, lbl in enumerate(src):
        img = cat.eval_m((x, y), [{lbl: f.one()}])
        for out, v in img.items():
            if out in dst:
                m.data[dst.index(out)][c] = v
    return m, src, dst


def solve_m1(cat: AInfCategory, x, y, degree: int, rhs: SVec) -> SVec | None:
    """One element u of the given degree with m_1(u) = rhs, or None."""
    f = cat.field
    m, src, dst = m1_matrix(cat, x, y, degree)
    vec = [rhs.get(lbl, f.zero()) for lbl in dst]
    extra = {k for k in rhs if k not in dst and not f.is_zero(rhs[k])}
    if extra:
        return None
    sol = m.solve(vec)
    if sol is None:
        return None
    return {lbl: c for lbl, c in zip(src, sol) if not f.is_zero(c)}


def random_slice_vec(cat: AInfCategory, x, y, degree: int, rng) -> SVec:
    f = cat.field
    out = {}
    for lbl in cat.hom(x, y).slice_labels(degree):
        c = f.of(rng.randint(-2, 2))
        if not f.is_zero(c):
            out[lbl] = c
    return out


def random_cycle(cat: AInfCategory, x, y, degree: int, rng) -> SVec:
    """Random element of Ker(m_1) in the given degree slice."""
    f = cat.field
    m, src, _ = m1_matrix(cat, x, y, degree)
    basis = m.nullspace()
    out: SVec = {}
    for v in basis:
        c = f.of(rng.randint(-2, 2))
        if f.is_zero(c):
            continue
        for lbl, a in zip(src, v):
            if not f.is_zero(a):
                s = f.add(out.get(lbl, f.zero()), f.mul(c, a))
                if f.is_zero(s):
                    out.pop(lbl, None)
                else:
                    out[lbl] = s
    return out


def random_valid_simplex(cat: AInfCategory, objects, rng) -> NerveSimplex:
    """Random nerve simplex built string by string.

    Edges on consecutive vertices are random cycles; wider edges are
    composites plus random exact terms (so the 2-string equations are
    solvable); higher components solve their structure equation, with a
    random cycle added. Raises if an equation is obstructed (use object
    complexes without negative-degree hom homology to avoid that).
    """
    f = cat.field
    objects = tuple(objects)
    n = len(objects) - 1
    comps: dict = {}
    for i in range(n):
        comps[(i, i + 1)] = random_cycle(cat, objects[i], objects[i + 1], 0, rng)
    for width in range(2, n + 1):
        for i in range(0, n - width + 1):
            j = i + width
            gl = comps[(i + 1, j)]
            fl = comps[(i, i + 1)]
            comp = cat.eval_m((objects[i], objects[i + 1], objects[j]), [gl, fl])
            exact = cat.eval_m(
                (objects[i], objects[j]),
                [random_slice_vec(cat, objects[i], objects[j], -1, rng)],
            )
            comps[(i, j)] = svec_add(f, comp, exact)
    for k in range(2, n + 1):
        for string in combinations(range(n + 1), k + 1):
            s0 = NerveSimplex(cat, objects, {**comps, tuple(string): {}})
            rhs = string_defect(cat, s0, string)
            # defect = rhs - m_1(f_string); solve m_1(u) = rhs
            u = solve_m1(cat, objects[string[0]], objects[string[-1]], 1 - k, rhs)
            if u is None:
                raise ValueError(f"obstructed structure equation at {string}")
            u = svec_add(f, u, random_cycle(cat, objects[string[0]], objects[string[-1]], 1 - k, rng))
            comps[tuple(string)] = u
    return NerveSimplex(cat, objects, comps)


def bounding_two_simplex(cat: AInfCategory, x, y, fvec: SVec, gvec: SVec):
    """A 2-simplex over (x, y, y) with edges f, Id_y, g, or None.

    Exists iff g - f is exact; witnesses h(N(C))(x,y) = H^0 Hom(x,y).
    """
    comps = {(0, 1): fvec, (1, 2): cat.unit(y), (0, 2): gvec}
    s0 = NerveSimplex(cat, (x, y, y), {**comps, (0, 1, 2): {}})
    rhs = string_defect(cat, s0, (0, 1, 2))
    u = solve_m1(cat, x, y, -1, rhs)
    if u is None:
        return None
    comps[(0, 1, 2)] = u
    return NerveSimplex(cat, (x, y, y), comps)

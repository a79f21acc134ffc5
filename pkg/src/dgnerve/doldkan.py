"""Dold-Kan machinery: simplicial vector spaces, the DK functor with the
epi-mono factorization rule, normalized chains, exact decomposition into
normalized components, Alexander-Whitney and Eilenberg-Zilber maps, and the
mapping spaces / composition of the simplicial category attached to a
dg-category.

Monotone maps [m] -> [n] are value tuples of length m+1. Order-preserving
surjections are enumerated in lexicographic order of their value sequences,
which fixes every DK basis and matrix layout.
"""

from __future__ import annotations

from itertools import combinations

from .ainfty import AInfCategory, SVec, svec_add, svec_scale
from .complexes import ChainComplex, hom_complex, op_complex, truncate_nonneg
from .linalg import Matrix, from_columns
from .scalars import Field, QQ


# ---------------------------------------------------------------------------
# ordinal combinatorics


def surjections(n: int, p: int) -> list[tuple[int, ...]]:
    """Order-preserving surjections [n] ->> [p], lex-ordered value tuples."""
    if p > n or p < 0:
        return []
    out = []
    for ascents in combinations(range(1, n + 1), p):
        seq = [0]
        for k in range(1, n + 1):
            seq.append(seq[-1] + (1 if k in ascents else 0))
        out.append(tuple(seq))
    return sorted(out)


def all_surjections(n: int) -> list[tuple[int, ...]]:
    """Every [n] ->> [p] for p <= n, lex-ordered (mixes all p)."""
    out = []
    for p in range(n + 1):
        out.extend(surjections(n, p))
    return sorted(out)


def epi_mono_factor(theta: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """theta = rho o eps with eps epi onto [q] and rho mono; returns (eps, rho)."""
    image = sorted(set(theta))
    index = {v: i for i, v in enumerate(image)}
    eps = tuple(index[v] for v in theta)
    rho = tuple(image)
    return eps, rho


def coface_map(i: int, n: int) -> tuple[int, ...]:
    """delta_i: [n-1] -> [n]."""
    return tuple(k if k < i else k + 1 for k in range(n))


def codegeneracy_map(i: int, n: int) -> tuple[int, ...]:
    """sigma_i: [n] -> [n-1]."""
    return tuple(k if k <= i else k - 1 for k in range(n + 1))


def min_section(eta: tuple[int, ...]) -> tuple[int, ...]:
    """The monotone section of an epi picking the least preimage."""
    p = eta[-1]
    return tuple(eta.index(u) for u in range(p + 1))


# ---------------------------------------------------------------------------
# simplicial vector spaces


class SimplicialVS:
    """Levelwise finite-dimensional simplicial vector space (up to a cap),
    presented by face and degeneracy matrices."""

    def __init__(self, field: Field, dims: dict, cap: int):
        self.field = field
        self.cap = cap
        self._dims = {int(n): int(d) for n, d in dims.items()}
        self.faces: dict = {}
        self.degens: dict = {}

    def dim(self, n: int) -> int:
        return self._dims.get(n, 0)

    def set_face(self, n: int, i: int, m: Matrix):
        self.faces[(n, i)] = m

    def set_degen(self, n: int, i: int, m: Matrix):
        self.degens[(n, i)] = m

    def face_mat(self, n: int, i: int) -> Matrix:
        return self.faces.get((n, i)) or Matrix(self.dim(n - 1), self.dim(n), self.field)

    def degen_mat(self, n: int, i: int) -> Matrix:
        return self.degens.get((n, i)) or Matrix(self.dim(n + 1), self.dim(n), self.field)

    def apply_face(self, n: int, i: int, vec: list) -> list:
        return self.face_mat(n, i).apply(vec)

    def apply_degen(self, n: int, i: int, vec: list) -> list:
        return self.degen_mat(n, i).apply(vec)

    def check_identities(self) -> list:
        """All simplicial identities as exact matrix equations, up to cap."""
        bad = []
        for n in range(self.cap + 1):
            if n >= 2:
                for j in range(n + 1):
                    for i in range(j):
                        lhs = self.face_mat(n - 1, i) @ self.face_mat(n, j)
                        rhs = self.face_mat(n - 1, j - 1) @ self.face_mat(n, i)
                        if not (lhs - rhs).is_zero():
                            bad.append(("dd", n, i, j))
            if n + 2 <= self.cap:
                for i in range(n + 1):
                    for j in range(i, n + 1):
                        lhs = self.degen_mat(n + 1, i) @ self.degen_mat(n, j)
                        rhs = self.degen_mat(n + 1, j + 1) @ self.degen_mat(n, i)
                        if not (lhs - rhs).is_zero():
                            bad.append(("ss", n, i, j))
            if n + 1 <= self.cap and n >= 0:
                for j in range(n + 1):
                    for i in range(n + 2):
                        lhs = self.face_mat(n + 1, i) @ self.degen_mat(n, j)
                        if i < j:
                            rhs = self.degen_mat(n - 1, j - 1) @ self.face_mat(n, i)
                        elif i in (j, j + 1):
                            rhs = Matrix.identity(self.dim(n), self.field)
                        else:
                            rhs = self.degen_mat(n - 1, j) @ self.face_mat(n, i - 1)
                        if not (lhs - rhs).is_zero():
                            bad.append(("ds", n, i, j))
        return bad


class ProductView:
    """The levelwise tensor product X x Y without materialized matrices."""

    def __init__(self, x, y):
        self.x = x
        self.y = y
        self.field = x.field
        self.cap = min(x.cap, y.cap)

    def dim(self, n: int) -> int:
        return self.x.dim(n) * self.y.dim(n)

    def _tensor_apply(self, ma: Matrix, mb: Matrix, vec: list) -> list:
        f = self.field
        na, nb = ma.ncols, mb.ncols
        out = [f.zero()] * (ma.rows * mb.rows)
        for idx, v in enumerate(vec):
            if f.is_zero(v):
                continue
            i, j = divmod(idx, nb)
            for r in range(ma.rows):
                a = ma.data[r][i]
                if f.is_zero(a):
                    continue
                av = f.mul(a, v)
                base = r * mb.rows
                for s in range(mb.rows):
                    b = mb.data[s][j]
                    if not f.is_zero(b):
                        out[base + s] = f.add(out[base + s], f.mul(av, b))
        return out

    def apply_face(self, n: int, i: int, vec: list) -> list:
        return self._tensor_apply(self.x.face_mat(n, i), self.y.face_mat(n, i), vec)

    def apply_degen(self, n: int, i: int, vec: list) -> list:
        return self._tensor_apply(self.x.degen_mat(n, i), self.y.degen_mat(n, i), vec)


def apply_mono(view, n: int, mono: tuple[int, ...], vec: list) -> list:
    """X(mu) for a monotone injection mu: [p] -> [n]: faces at the missing
    values, largest first."""
    missing = [v for v in range(n + 1) if v not in mono]
    cur = n
    for v in sorted(missing, reverse=True):
        vec = view.apply_face(cur, v, vec)
        cur -= 1
    return vec


def apply_epi(view, eta: tuple[int, ...], vec: list) -> list:
    """X(eta) = eta^*: X_p -> X_n for an epi eta: [n] ->> [p]: degeneracies
    peeled at the repeats."""
    word = []
    seq = list(eta)
    while True:
        for k in range(len(seq) - 1):
            if seq[k] == seq[k + 1]:
                word.append(k)
                del seq[k + 1]
                break
        else:
            break
    # word holds sigma-indices outermost-first: eta = eta' o sigma_{k}; apply eta'* then s_k
    p = eta[-1]
    cur = p
    for k in reversed(word):
        vec = view.apply_degen(cur, k, vec)
        cur += 1
    return vec


def normalized_projection(view, n: int, vec: list) -> list:
    """P = (1 - s_{n-1}d_{n-1}) ... (1 - s_0 d_0), image inside N(X)_n."""
    f = view.field
    for i in range(n):
        corr = view.apply_degen(n - 1, i, view.apply_face(n, i, vec))
        vec = [f.sub(a, b) for a, b in zip(vec, corr)]
    return vec


def decompose(view, n: int, vec: list) -> dict:
    """Unique components {eta: c_eta in N(X)_p} with vec = sum eta^*(c_eta).

    Peeling: for surjections in descending (p, lex) order, the normalized
    projection of X(s_eta) applied to the running remainder is exactly
    c_eta; contaminating terms were already extracted and subtracted.
    """
    f = view.field
    out: dict = {}
    rem = list(vec)
    for p in range(n, -1, -1):
        for eta in reversed(surjections(n, p)):
            w = apply_mono(view, n, min_section(eta), rem)
            c = normalized_projection(view, p, w)
            out[eta] = c
            if any(not f.is_zero(t) for t in c):
                back = apply_epi(view, eta, c)
                rem = [f.sub(a, b) for a, b in zip(rem, back)]
    return out


def reassemble(view, n: int, comps: dict) -> list:
    f = view.field
    total = [f.zero()] * view.dim(n)
    for eta, c in comps.items():
        w = apply_epi(view, eta, c)
        total = [f.add(a, b) for a, b in zip(total, w)]
    return total


# ---------------------------------------------------------------------------
# the DK functor


class DKSpace(SimplicialVS):
    """DK(A) for a non-negatively graded chain complex A.

    Level-n basis: (eta, a) over all eta: [n] ->> [p] (lex order across p)
    and a in the level-p basis of A.
    """

    def __init__(self, a: ChainComplex, cap: int = 6):
        if a.shift != -1:
            raise ValueError("dk expects a chain complex")
        if any(n < 0 for n in a.levels()):
            raise ValueError("dk expects non-negative levels")
        self.complex = a
        field = a.field
        self._bases = {}
        for n in range(cap + 1):
            basis = []
            for eta in all_surjections(n):
                for lbl in a.labels(eta[-1]):
                    basis.append((eta, lbl))
            self._bases[n] = basis
        dims = {n: len(b) for n, b in self._bases.items()}
        super().__init__(field, dims, cap)
        for n in range(1, cap + 1):
            for i in range(n + 1):
                self.set_face(n, i, self.structure_map(coface_map(i, n), n))
        for n in range(0, cap):
            for i in range(n + 1):
                self.set_degen(n, i, self.structure_map(codegeneracy_map(i, n + 1), n))

    def basis(self, n: int) -> list:
        return self._bases.get(n, [])

    def index(self, n: int, eta, lbl) -> int:
        return self.basis(n).index((eta, lbl))

    def structure_map(self, theta: tuple[int, ...], n: int) -> Matrix:
        """theta^*: DK(A)_n -> DK(A)_m for monotone theta: [m] -> [n]."""
        a = self.complex
        f = self.field
        m = len(theta) - 1
        src, dst = self.basis(n), self.basis(m)
        didx = {b: r for r, b in enumerate(dst)}
        out = Matrix(len(dst), len(src), f)
        for c, (eta, lbl) in enumerate(src):
            p = eta[-1]
            comp = tuple(eta[theta[k]] for k in range(m + 1))
            eps, rho = epi_mono_factor(comp)
            q = eps[-1]
            if rho == tuple(range(p + 1)):
                out.data[didx[(eps, lbl)]][c] = f.one()
            elif q == p - 1 and rho == tuple(range(p)):
                # rho misses exactly p: the component is (-1)^p times d_p
                dmat = a.differential(p)
                col = a.labels(p).index(lbl)
                sgn = f.one() if p % 2 == 0 else f.of(-1)
                for r, lbl2 in enumerate(a.labels(p - 1)):
                    v = dmat.data[r][col]
                    if not f.is_zero(v):
                        out.data[didx[(eps, lbl2)]][c] = f.mul(sgn, v)
        return out

    def top_projection(self, n: int, vec: list) -> list:
        """pi_n: the coordinates on the identity-surjection block = A_n."""
        a = self.complex
        eta_id = tuple(range(n + 1))
        return [vec[self.index(n, eta_id, lbl)] for lbl in a.labels(n)]

    def include_top(self, n: int, avec: list) -> list:
        f = self.field
        out = [f.zero()] * self.dim(n)
        eta_id = tuple(range(n + 1))
        for lbl, v in zip(self.complex.labels(n), avec):
            out[self.index(n, eta_id, lbl)] = v
        return out


def dk(a: ChainComplex, cap: int = 6) -> DKSpace:
    return DKSpace(a, cap)


def normalized_complex(x: SimplicialVS, cap: int | None = None):
    """N(X)_n = intersection of Ker(d_i), i<n, with d = (-1)^n d_n.

    Returns (chain complex, inclusions) where inclusions[n] embeds the
    level-n kernel basis back into X_n coordinates."""
    if cap is None:
        cap = x.cap
    f = x.field
    incl: dict[int, Matrix] = {}
    spaces: dict[int, list] = {}
    for n in range(cap + 1):
        if x.dim(n) == 0:
            incl[n] = Matrix(0, 0, f)
            continue
        rows = []
        for i in range(n):
            rows.extend(x.face_mat(n, i).data)
        stacked = Matrix(len(rows), x.dim(n), f)
        stacked.data = [row[:] for row in rows]
        kern = stacked.nullspace() if rows else [
            [f.one() if i == j else f.zero() for i in range(x.dim(n))]
            for j in range(x.dim(n))
        ]
        incl[n] = from_columns(kern, x.dim(n), f)
        spaces[n] = [("n", n, k) for k in range(len(kern))]
    diffs = {}
    for n in range(1, cap + 1):
        if not spaces.get(n) or n - 1 not in incl:
            continue
        sgn = 1 if n % 2 == 0 else -1
        dmat = x.face_mat(n, n).scale(sgn)
        cols = []
        for k in range(incl[n].ncols):
            v = [incl[n].data[r][k] for r in range(incl[n].rows)]
            w = dmat.apply(v)
            sol = incl[n - 1].solve(w) if incl[n - 1].ncols else []
            if sol is None:
                raise ValueError("normalized differential leaves the kernel")
            cols.append(sol)
        diffs[n] = from_columns(cols, len(spaces.get(n - 1, [])), f)
    return ChainComplex(-1, spaces, diffs, f), incl


def pi_boundary_check(a: ChainComplex, n: int, cap: int | None = None) -> list:
    """d_n(pi_n(v)) = sum_j (-1)^j pi_{n-1}(d_j^n(v)) on every basis vector."""
    space = dk(a, cap if cap is not None else max(n, 1))
    f = a.field
    bad = []
    if n == 0:
        return bad
    for idx in range(space.dim(n)):
        vec = [f.one() if i == idx else f.zero() for i in range(space.dim(n))]
        lhs = a.differential(n).apply(space.top_projection(n, vec))
        rhs = [f.zero()] * a.dim(n - 1)
        for j in range(n + 1):
            w = space.top_projection(n - 1, space.apply_face(n, j, vec))
            sgn = f.one() if j % 2 == 0 else f.of(-1)
            rhs = [f.add(r, f.mul(sgn, t)) for r, t in zip(rhs, w)]
        if lhs != rhs:
            bad.append((n, space.basis(n)[idx], lhs, rhs))
    return bad


# ---------------------------------------------------------------------------
# Alexander-Whitney and Eilenberg-Zilber


def shuffles(p: int, q: int):
    """(mu, nu, sign): mu the y-side degeneracy positions (|mu| = p)."""
    universe = list(range(p + q))
    for mu in combinations(universe, p):
        nu = tuple(v for v in universe if v not in mu)
        word = list(mu) + list(nu)
        inv = sum(
            1
            for i in range(len(word))
            for j in range(i + 1, len(word))
            if word[i] > word[j]
        )
        yield mu, nu, (-1) ** inv


def ez(x: SimplicialVS, y: SimplicialVS, p: int, q: int, xv: list, yv: list) -> list:
    """Signed shuffle sum in (X x Y)_{p+q} = X_{p+q} (x) Y_{p+q}."""
    f = x.field
    n = p + q
    out = [f.zero()] * (x.dim(n) * y.dim(n))
    for mu, nu, sgn in shuffles(p, q):
        xs = list(xv)
        cur = p
        for v in nu:
            xs = x.apply_degen(cur, v, xs)
            cur += 1
        ys = list(yv)
        cur = q
        for v in mu:
            ys = y.apply_degen(cur, v, ys)
            cur += 1
        s = f.of(sgn)
        for i, a in enumerate(xs):
            if f.is_zero(a):
                continue
            sa = f.mul(s, a)
            base = i * y.dim(n)
            for j, b in enumerate(ys):
                if not f.is_zero(b):
                    out[base + j] = f.add(out[base + j], f.mul(sa, b))
    return out


def aw(x: SimplicialVS, y: SimplicialVS, n: int, vec: list,
       sign_mode: str = "classical") -> dict:
    """{(p, q): element of X_p (x) Y_q} built from front and back faces and
    projected to normalized (x) normalized.

    sign_mode 'paper' multiplies the (p,q) term by (-1)^{np+1}; 'classical'
    uses no sign. The suite selects the mode that is a chain map with
    aw o ez = id.
    """
    f = x.field
    view = ProductView(x, y)
    out = {}
    for p in range(n + 1):
        q = n - p
        front = tuple(range(p + 1))
        back = tuple(range(p, n + 1))
        total = [f.zero()] * (x.dim(p) * y.dim(q))
        # apply front^p to the x tensor factor and back^q to the y factor
        for idx in range(len(vec)):
            v = vec[idx]
            if f.is_zero(v):
                continue
            i, j = divmod(idx, y.dim(n))
            ex = [f.zero()] * x.dim(n)
            ex[i] = f.one()
            ey = [f.zero()] * y.dim(n)
            ey[j] = f.one()
            xi = apply_mono(x, n, front, ex)
            yj = apply_mono(y, n, back, ey)
            for a_i, a in enumerate(xi):
                if f.is_zero(a):
                    continue
                av = f.mul(v, a)
                base = a_i * y.dim(q)
                for b_j, b in enumerate(yj):
                    if not f.is_zero(b):
                        total[base + b_j] = f.add(total[base + b_j], f.mul(av, b))
        if sign_mode == "paper":
            sgn = f.of(-1) if (n * p + 1) % 2 else f.one()
            total = [f.mul(sgn, t) for t in total]
        # project each factor to its normalized part
        proj = [f.zero()] * len(total)
        for i in range(x.dim(p)):
            row = total[i * y.dim(q) : (i + 1) * y.dim(q)]
            if all(f.is_zero(t) for t in row):
                continue
            prow = normalized_projection(y, q, row)
            for j, t in enumerate(prow):
                proj[i * y.dim(q) + j] = t
        total2 = [f.zero()] * len(total)
        for j in range(y.dim(q)):
            col = [proj[i * y.dim(q) + j] for i in range(x.dim(p))]
            if all(f.is_zero(t) for t in col):
                continue
            pcol = normalized_projection(x, p, col)
            for i, t in enumerate(pcol):
                total2[i * y.dim(q) + j] = t
        out[(p, q)] = total2
    return out


# ---------------------------------------------------------------------------
# mapping spaces of the simplicial category of a dg-category


class MappingSpace:
    """DK(tau_{>=0}(Hom(x,y)^op)) with the hom-complex bookkeeping needed to
    pair levels back into hom elements."""

    def __init__(self, cat: AInfCategory, x, y, cap: int = 6):
        self.cat = cat
        self.x, self.y = x, y
        self.hom = cat._hom_complexes[(x, y)]
        chain = op_complex(self.hom)
        self.trunc, self.incl0 = truncate_nonneg(chain)
        self.space = dk(self.trunc, cap)
        self.cap = cap

    def dim(self, level: int) -> int:
        return self.space.dim(level)

    def level_to_hom(self, p: int, avec: list) -> SVec:
        """Coordinates of A_p as a hom element of degree -p."""
        f = self.cat.field
        if p == 0:
            coords = self.incl0.apply(avec)
            return {l: c for l, c in zip(self.hom.labels(0), coords) if not f.is_zero(c)}
        return {l: c for l, c in zip(self.trunc.labels(p), avec) if not f.is_zero(c)}

    def hom_to_level(self, p: int, vec: SVec) -> list:
        f = self.cat.field
        if p > 0:
            return [vec.get(l, f.zero()) for l in self.trunc.labels(p)]
        coords = [vec.get(l, f.zero()) for l in self.hom.labels(0)]
        sol = self.incl0.solve(coords)
        if sol is None:
            raise ValueError("degree-0 element is not a cycle")
        return sol

    def zero_simplex_of(self, vec: SVec) -> list:
        """The level-0 simplex of a closed degree-0 morphism."""
        return self.space.include_top(0, self.hom_to_level(0, vec))

    def identity_zero_simplex(self) -> list:
        return self.zero_simplex_of(self.cat.unit(self.x))


def mapping_space(cat: AInfCategory, x, y, cap: int = 6) -> MappingSpace:
    if (x, y) not in getattr(cat, "_hom_complexes", {}):
        raise ValueError("mapping_space needs a chain dg-category")
    return MappingSpace(cat, x, y, cap)


def compose_simplices(ms_xy: MappingSpace, ms_yz: MappingSpace, ms_xz: MappingSpace,
                      n: int, u: list, v: list, sign_mode: str = "classical") -> list:
    """Composite Map(x,y)_n (x) Map(y,z)_n -> Map(x,z)_n.

    Pairs (u, v) as a level-n element of the product, decomposes it into
    normalized components, applies the normalized AW map and the Koszul
    pairing m_2 on each piece, and reassembles through the DK structure of
    the target.
    """
    cat = ms_xy.cat
    f = cat.field
    X, Y, Z = ms_xy.space, ms_yz.space, ms_xz.space
    view = ProductView(X, Y)
    ny = Y.dim(n)
    vec = [f.zero()] * (X.dim(n) * ny)
    for i, a in enumerate(u):
        if f.is_zero(a):
            continue
        for j, b in enumerate(v):
            if not f.is_zero(b):
                vec[i * ny + j] = f.mul(a, b)
    comps = decompose(view, n, vec)
    total = [f.zero()] * Z.dim(n)
    for eta, c in comps.items():
        p = eta[-1]
        if all(f.is_zero(t) for t in c):
            continue
        pieces = aw(X, Y, p, c, sign_mode)
        target = [f.zero()] * ms_xz.trunc.dim(p)
        for (p1, q1), t in pieces.items():
            # normalized part of DK is the identity-surjection block
            a_dim = ms_xy.trunc.dim(p1)
            b_dim = ms_yz.trunc.dim(q1)
            if a_dim == 0 or b_dim == 0:
                continue
            for ai in range(a_dim):
                av = [f.zero()] * a_dim
                av[ai] = f.one()
                xi = X.index(p1, tuple(range(p1 + 1)), ms_xy.trunc.labels(p1)[ai])
                for bi in range(b_dim):
                    yj = Y.index(q1, tuple(range(q1 + 1)), ms_yz.trunc.labels(q1)[bi])
                    coeff = t[xi * Y.dim(q1) + yj]
                    if f.is_zero(coeff):
                        continue
                    ha = ms_xy.level_to_hom(p1, [f.one() if k == ai else f.zero() for k in range(a_dim)])
                    hb = ms_yz.level_to_hom(q1, [f.one() if k == bi else f.zero() for k in range(b_dim)])
                    prod = cat.eval_m((ms_xy.x, ms_xy.y, ms_yz.y), [hb, ha])
                    if not prod:
                        continue
                    lv = ms_xz.hom_to_level(p, prod)
                    for r, t2 in enumerate(lv):
                        target[r] = f.add(target[r], f.mul(coeff, t2))
        w = apply_epi(Z, eta, Z.include_top(p, target))
        total = [f.add(a, b) for a, b in zip(total, w)]
    return total

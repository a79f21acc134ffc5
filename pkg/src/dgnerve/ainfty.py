"""A-infinity categories and functors with exact sign bookkeeping.

Conventions (fixed once, used everywhere):
  * m_n has degree 2-n and eats Hom(x_{n-1},x_n) (x) ... (x) Hom(x_0,x_1);
    coefficient tables are keyed by basis-label tuples in tensor order,
    i.e. the leftmost slot is the last morphism of the composable string.
  * Operators act with the Koszul rule: moving a degree-d operator past a
    degree-e element costs (-1)^{d e}.
  * The defining relation: sum over n=r+s+t of
    (-1)^{s r + t} m_{r+t+1} (Id^r (x) m_s (x) Id^t) = 0.
  * Functor components f_n have degree 1-n and satisfy the eps_r-signed
    equation, eps_r(i_1..i_r) = sum_{2<=k<=r} (1-i_k) (i_1+...+i_{k-1}).

Hom elements are sparse dicts {basis label: scalar}.
"""

from __future__ import annotations

from itertools import product

from .complexes import ChainComplex, hom_complex
from .graded import GradedSpace
from .linalg import Matrix, from_columns
from .scalars import Field, QQ

SVec = dict


def svec_add(field: Field, u: SVec, v: SVec) -> SVec:
    out = dict(u)
    for k, c in v.items():
        s = field.add(out.get(k, field.zero()), c)
        if field.is_zero(s):
            out.pop(k, None)
        else:
            out[k] = s
    return out


def svec_scale(field: Field, c, u: SVec) -> SVec:
    c = field.of(c)
    if field.is_zero(c):
        return {}
    return {k: field.mul(c, v) for k, v in u.items()}


def svec_is_zero(field: Field, u: SVec) -> bool:
    return all(field.is_zero(c) for c in u.values())


def eps_r(parts: tuple[int, ...]) -> int:
    """Sign exponent for m'_r(f_{i_1} (x) ... (x) f_{i_r})."""
    total = 0
    acc = 0
    for k, ik in enumerate(parts, start=1):
        if k >= 2:
            total += (1 - ik) * acc
        acc += ik
    return total % 2


class AInfCategory:
    """Objects, graded hom spaces, sparse structure-map coefficient tables."""

    def __init__(self, objects, field: Field = QQ, arity_cap: int = 4):
        self.objects = list(objects)
        self.field = field
        self.arity_cap = arity_cap
        self._homs: dict = {}
        self.units: dict = {}
        self._m: dict = {}
        self.m_hook = None  # optional (objs, labels) -> SVec for big categories

    def set_hom(self, x, y, space: GradedSpace):
        self._homs[(x, y)] = space

    def hom(self, x, y) -> GradedSpace:
        return self._homs.get((x, y), GradedSpace([]))

    def set_unit(self, x, vec: SVec):
        self.units[x] = dict(vec)

    def unit(self, x) -> SVec:
        return self.units.get(x, {})

    def deg(self, x, y, label) -> int:
        return self.hom(x, y).degree_of[label]

    def tuple_degrees(self, objs, labels) -> list[int]:
        """Degrees of a tensor-order basis tuple over the string objs."""
        n = len(labels)
        return [self.deg(objs[n - 1 - k], objs[n - k], labels[k]) for k in range(n)]

    def set_m(self, objs, labels, out_label, coeff):
        """Store one coefficient of m_n on the object string objs=(x_0..x_n);
        labels in tensor order. Enforces the degree 2-n constraint."""
        objs = tuple(objs)
        labels = tuple(labels)
        n = len(labels)
        if len(objs) != n + 1:
            raise ValueError("object string length must be arity+1")
        if n > self.arity_cap:
            raise ValueError(f"arity {n} exceeds cap {self.arity_cap}")
        degs = self.tuple_degrees(objs, labels)
        out_deg = self.hom(objs[0], objs[-1]).degree_of[out_label]
        if out_deg != sum(degs) + 2 - n:
            raise ValueError(
                f"m_{n} coefficient violates degree 2-n: inputs {degs}, output {out_deg}"
            )
        c = self.field.of(coeff)
        table = self._m.setdefault(objs, {})
        row = table.setdefault(labels, {})
        if self.field.is_zero(c):
            row.pop(out_label, None)
        else:
            row[out_label] = c

    def m_basis(self, objs, labels) -> SVec:
        objs, labels = tuple(objs), tuple(labels)
        table = self._m.get(objs)
        if table is not None and labels in table:
            return dict(table[labels])
        if self.m_hook is not None:
            return self.m_hook(objs, labels)
        return {}

    def eval_m(self, objs, tens: list[SVec]) -> SVec:
        """Multilinear evaluation of m_n on sparse elements (tensor order)."""
        f = self.field
        out: SVec = {}
        supports = [list(t.items()) for t in tens]
        if any(not s for s in supports):
            return out
        for combo in product(*supports):
            coeff = f.one()
            for _, c in combo:
                coeff = f.mul(coeff, c)
            term = self.m_basis(objs, tuple(lbl for lbl, _ in combo))
            if term:
                out = svec_add(f, out, svec_scale(f, coeff, term))
        return out

    def hom_pairs(self):
        return [(x, y) for (x, y), sp in self._homs.items() if sp.dim() > 0]

    def composable_strings(self, n: int):
        """Object strings (x_0..x_n) whose consecutive homs are all nonzero."""
        adj: dict = {}
        for x, y in self.hom_pairs():
            adj.setdefault(x, []).append(y)
        out = []

        def walk(path):
            if len(path) == n + 1:
                out.append(tuple(path))
                return
            for y in adj.get(path[-1], []):
                walk(path + [y])

        for x in self.objects:
            if n == 0:
                out.append((x,))
            else:
                walk([x])
        return out


def id_m_id_terms(cat: AInfCategory, objs, labels, with_sign: bool = True):
    """All (Id^r (x) m_s (x) Id^t) contractions of a basis tuple.

    Yields (sign, new_objs, list-of-slots) where each slot is either a basis
    label (untouched) or an SVec (the m_s output), in tensor order. The sign
    includes (-1)^{sr+t} when with_sign, always the Koszul factor
    (-1)^{deg(m_s) * sum of first r degrees}.
    """
    f = cat.field
    n = len(labels)
    degs = cat.tuple_degrees(objs, labels)
    for s in range(1, n + 1):
        for r in range(0, n - s + 1):
            t = n - r - s
            inner_objs = objs[t : t + s + 1]
            inner = cat.m_basis(inner_objs, labels[r : r + s])
            if not inner:
                continue
            exp = ((s * r + t) % 2) if with_sign else 0
            exp = (exp + (2 - s) * sum(degs[:r])) % 2
            sign = f.one() if exp == 0 else f.of(-1)
            new_objs = objs[: t + 1] + objs[t + s :]
            slots = list(labels[:r]) + [inner] + list(labels[r + s :])
            yield sign, new_objs, slots


def relation_defect(cat: AInfCategory, objs, labels) -> SVec:
    """Left side of the defining relation on one basis tuple; zero iff OK."""
    f = cat.field
    total: SVec = {}
    for sign, new_objs, slots in id_m_id_terms(cat, objs, labels):
        tens = [{lbl: f.one()} if not isinstance(lbl, dict) else lbl for lbl in slots]
        term = cat.eval_m(new_objs, tens)
        total = svec_add(f, total, svec_scale(f, sign, term))
    return total


def check_relations(cat: AInfCategory, n_max: int | None = None) -> list:
    """Every violated (n, object string, basis tuple) with its defect."""
    if n_max is None:
        n_max = 2 * cat.arity_cap
    bad = []
    for n in range(1, n_max + 1):
        for objs in cat.composable_strings(n):
            bases = [cat.hom(objs[n - 1 - k], objs[n - k]).labels for k in range(n)]
            for labels in product(*bases):
                d = relation_defect(cat, objs, labels)
                if not svec_is_zero(cat.field, d):
                    bad.append((n, objs, labels, d))
    return bad


def check_strict_units(cat: AInfCategory) -> list:
    """Unit laws plus vanishing of stored higher m_n on unit-bearing tuples."""
    f = cat.field
    bad = []
    for x in cat.objects:
        if not cat.unit(x):
            bad.append(("missing-unit", x))
    for x, y in cat.hom_pairs():
        for v in cat.hom(x, y).labels:
            vv = {v: f.one()}
            left = cat.eval_m((x, x, y), [vv, cat.unit(x)])
            if left != vv:
                bad.append(("right-unit-law", x, y, v, left))
            right = cat.eval_m((x, y, y), [cat.unit(y), vv])
            if right != vv:
                bad.append(("left-unit-law", x, y, v, right))
    for objs, table in cat._m.items():
        n = len(objs) - 1
        if n <= 2:
            continue
        for j in range(n):
            # slot j spans Hom(objs[n-1-j], objs[n-j]); a unit can sit there
            # only on strings with the matching repeat
            if objs[n - 1 - j] != objs[n - j]:
                continue
            x = objs[n - 1 - j]
            bases = [
                cat.hom(objs[n - 1 - k], objs[n - k]).labels if k != j else [None]
                for k in range(n)
            ]
            for combo in product(*bases):
                tens = [
                    cat.unit(x) if k == j else {combo[k]: f.one()} for k in range(n)
                ]
                val = cat.eval_m(objs, tens)
                if not svec_is_zero(f, val):
                    bad.append(("higher-unit", objs, j, combo, val))
    return bad


class AInfFunctor:
    """Object map plus degree (1-n) component tables, keyed like m."""

    def __init__(self, source: AInfCategory, target: AInfCategory, obj_map: dict,
                 arity_cap: int | None = None):
        self.source = source
        self.target = target
        self.obj_map = dict(obj_map)
        self.arity_cap = arity_cap if arity_cap is not None else source.arity_cap
        self._f: dict = {}
        self.f_hook = None

    def set_f(self, objs, labels, out_label, coeff):
        objs, labels = tuple(objs), tuple(labels)
        n = len(labels)
        if len(objs) != n + 1:
            raise ValueError("object string length must be arity+1")
        degs = self.source.tuple_degrees(objs, labels)
        tgt = self.target.hom(self.obj_map[objs[0]], self.obj_map[objs[-1]])
        if tgt.degree_of[out_label] != sum(degs) + 1 - n:
            raise ValueError(f"f_{n} coefficient violates degree 1-n")
        c = self.source.field.of(coeff)
        row = self._f.setdefault(objs, {}).setdefault(labels, {})
        if self.source.field.is_zero(c):
            row.pop(out_label, None)
        else:
            row[out_label] = c

    def f_basis(self, objs, labels) -> SVec:
        objs, labels = tuple(objs), tuple(labels)
        table = self._f.get(objs)
        if table is not None and labels in table:
            return dict(table[labels])
        if self.f_hook is not None:
            return self.f_hook(objs, labels)
        return {}

    def eval_f(self, objs, tens: list[SVec]) -> SVec:
        f = self.source.field
        out: SVec = {}
        supports = [list(t.items()) for t in tens]
        if any(not s for s in supports):
            return out
        for combo in product(*supports):
            coeff = f.one()
            for _, c in combo:
                coeff = f.mul(coeff, c)
            term = self.f_basis(objs, tuple(lbl for lbl, _ in combo))
            if term:
                out = svec_add(f, out, svec_scale(f, coeff, term))
        return out


def compositions(n: int, max_parts: int | None = None):
    """Ordered partitions (i_1..i_r) of n, i_k >= 1."""
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in compositions(n - first):
            parts = (first,) + rest
            if max_parts is None or len(parts) <= max_parts:
                yield parts


def blocks_value(func: AInfFunctor, objs, labels, parts) -> tuple[int, list, list]:
    """Evaluate (f_{i_1} (x) ... (x) f_{i_r}) on a basis tuple.

    Returns (koszul sign exponent, target object string pieces, list of SVec
    block values in tensor order)."""
    cat = func.source
    n = len(labels)
    degs = cat.tuple_degrees(objs, labels)
    exp = 0
    pre = 0
    offset = 0
    vals = []
    tgt_objs = []
    for k, ik in enumerate(parts, start=1):
        if k >= 2:
            exp += (1 - ik) * pre
        blk_labels = labels[offset : offset + ik]
        # slots offset..offset+ik-1 cover objects objs[n-offset-ik .. n-offset]
        blk_objs = objs[n - offset - ik : n - offset + 1]
        vals.append(func.f_basis(blk_objs, blk_labels))
        tgt_objs.append((func.obj_map[blk_objs[0]], func.obj_map[blk_objs[-1]]))
        pre += sum(degs[offset : offset + ik])
        offset += ik
    return exp % 2, tgt_objs, vals


def functor_defect(func: AInfFunctor, objs, labels) -> SVec:
    """LHS - RHS of the functor equation on one basis tuple."""
    cat, tgt = func.source, func.target
    f = cat.field
    total: SVec = {}
    for sign, new_objs, slots in id_m_id_terms(cat, objs, labels):
        tens = [{lbl: f.one()} if not isinstance(lbl, dict) else lbl for lbl in slots]
        term = func.eval_f(new_objs, tens)
        total = svec_add(f, total, svec_scale(f, sign, term))
    n = len(labels)
    for parts in compositions(n):
        r = len(parts)
        kz, tgt_pairs, vals = blocks_value(func, objs, labels, parts)
        if any(svec_is_zero(f, v) for v in vals):
            continue
        exp = (eps_r(parts) + kz) % 2
        sign = f.of(-1) if exp else f.one()
        string = [tgt_pairs[-1][0]]
        for a, b in reversed(tgt_pairs):
            string.append(b)
        term = tgt.eval_m(tuple(string), vals)
        total = svec_add(f, total, svec_scale(f, f.neg(sign), term))
    return total


def check_functor(func: AInfFunctor, n_max: int | None = None) -> list:
    """Functor-equation defects plus strict-unitality violations."""
    cat = func.source
    f = cat.field
    if n_max is None:
        n_max = func.arity_cap
    bad = []
    for n in range(1, n_max + 1):
        for objs in cat.composable_strings(n):
            bases = [cat.hom(objs[n - 1 - k], objs[n - k]).labels for k in range(n)]
            for labels in product(*bases):
                d = functor_defect(func, objs, labels)
                if not svec_is_zero(f, d):
                    bad.append((n, objs, labels, d))
    for x in cat.objects:
        img = func.eval_f((x, x), [cat.unit(x)])
        if img != func.target.unit(func.obj_map[x]):
            bad.append(("unit", x, img))
    return bad


def identity_functor(cat: AInfCategory) -> AInfFunctor:
    func = AInfFunctor(cat, cat, {x: x for x in cat.objects})
    for (x, y), sp in cat._homs.items():
        for lbl in sp.labels:
            func.set_f((x, y), (lbl,), lbl, 1)
    # identity on big categories: fall back to a hook so untabulated pairs work
    func.f_hook = lambda objs, labels: (
        {labels[0]: cat.field.one()} if len(labels) == 1 else {}
    )
    return func


def compose_functors(g: AInfFunctor, f: AInfFunctor) -> AInfFunctor:
    """g after f, components e_k = sum (-1)^{eps_r} g_r(f_{i_1} (x) ... )."""
    if f.target is not g.source and f.target.objects != g.source.objects:
        raise ValueError("functor sources/targets do not match")
    cat = f.source
    fld = cat.field
    cap = min(f.arity_cap, g.arity_cap)
    out = AInfFunctor(cat, g.target, {x: g.obj_map[f.obj_map[x]] for x in cat.objects},
                      arity_cap=cap)
    for k in range(1, cap + 1):
        for objs in cat.composable_strings(k):
            bases = [cat.hom(objs[k - 1 - j], objs[k - j]).labels for j in range(k)]
            for labels in product(*bases):
                acc: SVec = {}
                for parts in compositions(k):
                    kz, tgt_pairs, vals = blocks_value(f, objs, labels, parts)
                    if any(svec_is_zero(fld, v) for v in vals):
                        continue
                    exp = (eps_r(parts) + kz) % 2
                    string = [tgt_pairs[-1][0]]
                    for a, b in reversed(tgt_pairs):
                        string.append(b)
                    term = g.eval_f(tuple(string), vals)
                    acc = svec_add(fld, acc, svec_scale(fld, fld.of(-1) if exp else 1, term))
                for out_lbl, c in acc.items():
                    out.set_f(objs, labels, out_lbl, c)
    return out


class BarData:
    """Suspended coderivation coefficients b_i = s m_i (s^{-1})^{(x) i}."""

    def __init__(self, cat: AInfCategory):
        self.cat = cat
        self.coeffs: dict = {}
        f = cat.field
        for objs, table in cat._m.items():
            n = len(objs) - 1
            for labels, row in table.items():
                degs = cat.tuple_degrees(objs, labels)
                exp = sum((n - k - 1) * (degs[k] - 1) for k in range(n - 1)) % 2
                for out_lbl, c in row.items():
                    val = f.mul(f.of(-1) if exp else f.one(), c)
                    self.coeffs.setdefault(objs, {}).setdefault(labels, {})[out_lbl] = val

    def b_basis(self, objs, labels) -> SVec:
        return dict(self.coeffs.get(tuple(objs), {}).get(tuple(labels), {}))

    def suspended_degree(self, x, y, label) -> int:
        return self.cat.deg(x, y, label) - 1

    def to_category(self) -> AInfCategory:
        """Invert the suspension signs; exact round trip on coefficients."""
        cat = self.cat
        f = cat.field
        out = AInfCategory(cat.objects, f, cat.arity_cap)
        out._homs = dict(cat._homs)
        out.units = dict(cat.units)
        for objs, table in self.coeffs.items():
            n = len(objs) - 1
            for labels, row in table.items():
                degs = out.tuple_degrees(objs, labels)
                exp = sum((n - k - 1) * (degs[k] - 1) for k in range(n - 1)) % 2
                for out_lbl, c in row.items():
                    out.set_m(objs, labels, out_lbl, f.mul(f.of(-1) if exp else f.one(), c))
        return out


def bar_relation_defect(bar: BarData, objs, labels) -> SVec:
    """sum_{r+s+t=n} b(Id^r (x) b_s (x) Id^t), Koszul signs only (deg b = +1)."""
    cat = bar.cat
    f = cat.field
    n = len(labels)
    sdegs = [bar.suspended_degree(objs[n - 1 - k], objs[n - k], labels[k]) for k in range(n)]
    total: SVec = {}
    for s in range(1, n + 1):
        for r in range(0, n - s + 1):
            t = n - r - s
            inner = bar.b_basis(objs[t : t + s + 1], labels[r : r + s])
            if not inner:
                continue
            exp = sum(sdegs[:r]) % 2  # deg(b_s) = +1
            new_objs = objs[: t + 1] + objs[t + s :]
            for mid_lbl, c1 in inner.items():
                new_labels = labels[:r] + (mid_lbl,) + labels[r + s :]
                outer = bar.b_basis(new_objs, new_labels)
                coeff = f.mul(f.of(-1) if exp else f.one(), c1)
                total = svec_add(f, total, svec_scale(f, coeff, outer))
    return total


def is_dg(cat: AInfCategory) -> bool:
    """No stored m_n for n > 2 (hooks are trusted to be dg by construction)."""
    return all(len(objs) - 1 <= 2 for objs in cat._m)


def embed_dg(cat: AInfCategory, arity_cap: int = 4) -> AInfCategory:
    """View a dg-category as an A-infinity category with a bigger cap;
    coefficients are shared, not copied."""
    out = AInfCategory(cat.objects, cat.field, arity_cap)
    out._homs = cat._homs
    out.units = cat.units
    out._m = cat._m
    out.m_hook = cat.m_hook
    return out


def chain_dg_category(complexes: dict, field: Field = QQ, arity_cap: int = 2) -> AInfCategory:
    """The dg-category of named bounded cochain complexes.

    Hom(x,y) has basis (i, a, b): the elementary map sending basis vector a
    of X^i to b of Y^{i+k}. m_1 is the hom-complex differential; composition
    carries the Koszul sign m_2(g (x) f) = (-1)^{deg g deg f} g o f, the
    unique sign for which the defining relation holds against the
    hom-complex differential.
    """
    cat = AInfCategory(list(complexes), field, arity_cap)
    cat._chain_complexes = dict(complexes)
    homcx: dict = {}
    for x, cx in complexes.items():
        for y, cy in complexes.items():
            h = hom_complex(cx, cy)
            homcx[(x, y)] = h
            basis = []
            for k in h.levels():
                for lbl in h.labels(k):
                    basis.append((lbl, k))
            cat.set_hom(x, y, GradedSpace(basis))
    cat._hom_complexes = homcx

    def hook(objs, labels):
        f = cat.field
        if len(labels) == 1:
            x, y = objs
            h = homcx[(x, y)]
            lbl = labels[0]
            k = cat.deg(x, y, lbl)
            d = h.differential(k)
            col = h.labels(k).index(lbl)
            out = {}
            for r, out_lbl in enumerate(h.labels(k + 1)):
                if not f.is_zero(d.data[r][col]):
                    out[out_lbl] = d.data[r][col]
            return out
        if len(labels) == 2:
            x, y, z = objs
            gl, fl = labels  # tensor order: g in Hom(y,z), f in Hom(x,y)
            (i2, b2, c2) = gl
            (i1, a1, b1) = fl
            kg = cat.deg(y, z, gl)
            kf = cat.deg(x, y, fl)
            if b1 != b2 or i2 != i1 + kf:
                return {}
            sign = f.of(-1) if (kg * kf) % 2 else f.one()
            return {(i1, a1, c2): sign}
        return {}

    cat.m_hook = hook
    for x, cx in complexes.items():
        unit = {}
        for i in cx.levels():
            for a in cx.labels(i):
                unit[(i, a, a)] = field.one()
        cat.set_unit(x, unit)
    return cat


def h0_category(cat: AInfCategory):
    """Objects, dim H^0 per hom, and composition on homology classes."""
    f = cat.field
    data = {}
    for x in cat.objects:
        for y in cat.objects:
            sp = cat.hom(x, y)
            z0_lbls = sp.slice_labels(0)
            zm1_lbls = sp.slice_labels(-1)
            z1_lbls = sp.slice_labels(1)
            d0 = Matrix(len(z1_lbls), len(z0_lbls), f)
            for c, lbl in enumerate(z0_lbls):
                img = cat.eval_m((x, y), [{lbl: f.one()}])
                for out_lbl, v in img.items():
                    if out_lbl in z1_lbls:
                        d0.data[z1_lbls.index(out_lbl)][c] = v
            dm1 = Matrix(len(z0_lbls), len(zm1_lbls), f)
            for c, lbl in enumerate(zm1_lbls):
                img = cat.eval_m((x, y), [{lbl: f.one()}])
                for out_lbl, v in img.items():
                    if out_lbl in z0_lbls:
                        dm1.data[z0_lbls.index(out_lbl)][c] = v
            cycles = d0.nullspace()
            bounds = []
            red, piv = dm1.rref()
            for c in piv:
                bounds.append([dm1.data[i][c] for i in range(dm1.rows)])
            stacked = from_columns(bounds + cycles, len(z0_lbls), f)
            reps = []
            if len(z0_lbls):
                _, piv2 = stacked.rref()
                for c in piv2:
                    if c >= len(bounds):
                        reps.append(cycles[c - len(bounds)])
            data[(x, y)] = {
                "labels": z0_lbls,
                "bounds": bounds,
                "reps": reps,
                "dim": len(reps),
            }

    class H0:
        objects = cat.objects
        homs = data

        @staticmethod
        def dim(x, y):
            return data[(x, y)]["dim"]

        @staticmethod
        def class_of(x, y, vec_coords):
            """Coordinates of a degree-0 cycle's class in the rep basis."""
            d = data[(x, y)]
            basis = from_columns(d["bounds"] + d["reps"], len(d["labels"]), f)
            sol = basis.solve(vec_coords)
            if sol is None:
                raise ValueError("not a cycle")
            return sol[len(d["bounds"]):]

        @staticmethod
        def compose(x, y, z, i, j):
            """Class of reps[j] o reps[i] for reps of Hom(x,y), Hom(y,z)."""
            di, dj = data[(x, y)], data[(y, z)]
            vi = {lbl: c for lbl, c in zip(di["labels"], di["reps"][i]) if not f.is_zero(c)}
            vj = {lbl: c for lbl, c in zip(dj["labels"], dj["reps"][j]) if not f.is_zero(c)}
            img = cat.eval_m((x, y, z), [vj, vi])
            dz = data[(x, z)]
            coords = [img.get(lbl, f.zero()) for lbl in dz["labels"]]
            return H0.class_of(x, z, coords)

    return H0

"""Additive presheaves on a finite linear category.

A presheaf F stores ``dim F(A)`` per object and, for every basis morphism
``f: A -> B``, the matrix of ``F(f): F(B) -> F(A)`` (``dim F(A)`` rows,
``dim F(B)`` columns). Matrices are kept as tuples of row tuples; zero-row
matrices are the empty tuple, so shapes are always read off the dimensions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .errors import NotAComplex, TooLarge, Unsupported, ValidationError
from .exactla import Field, Matrix, mat_mul_rows, nullspace, rref, span_basis
from .lincat import FinLinearCategory, Morphism, ValidationReport

Rows = tuple


# ---------------------------------------------------------------------------
# small matrix helpers (row-major tuples with explicit shapes)
# ---------------------------------------------------------------------------


def zero_rows(field: Field, r: int, c: int) -> Rows:
    return tuple((field.zero,) * c for _ in range(r))


def ident_rows(field: Field, n: int) -> Rows:
    z, o = field.zero, field.one
    return tuple(tuple(o if i == j else z for j in range(n)) for i in range(n))


def mul(field: Field, a: Rows, b: Rows, bcols: int) -> Rows:
    return mat_mul_rows(field, a, b, bcols)


def add_rows(field: Field, a: Rows, b: Rows) -> Rows:
    return tuple(tuple(field(x + y) for x, y in zip(r, s)) for r, s in zip(a, b))


def scale_rows(field: Field, c, a: Rows) -> Rows:
    return tuple(tuple(field(c * x) for x in r) for r in a)


def apply_rows(field: Field, a: Rows, v: Sequence) -> tuple:
    out = []
    for row in a:
        s = 0
        for x, y in zip(row, v):
            if x and y:
                s += x * y
        out.append(field(s))
    return tuple(out)


def columns_of(a: Rows, ncols: int) -> list[tuple]:
    return [tuple(r[j] for r in a) for j in range(ncols)]


def rows_from_columns(cols: Sequence[Sequence], nrows: int) -> Rows:
    return tuple(tuple(c[i] for c in cols) for i in range(nrows))


def rank_of(field: Field, a: Rows, ncols: int) -> int:
    return len(rref(field, list(a), ncols)[1]) if a else 0


def left_inverse(field: Field, cols: Sequence[Sequence], dim: int) -> Rows:
    """Rows L with ``L · [cols] = I`` for linearly independent columns.

    Row-reduces ``[B | I]``; the first k rows of the right block are L.
    """
    k = len(cols)
    if k == 0:
        return ()
    aug = []
    for i in range(dim):
        aug.append([c[i] for c in cols] + [field.one if j == i else field.zero for j in range(dim)])
    red, piv = rref(field, aug, k + dim)
    if len([p for p in piv if p < k]) != k:
        raise ValidationError("columns are not independent")
    return tuple(tuple(red[i][k:]) for i in range(k))


# ---------------------------------------------------------------------------
# Presheaf
# ---------------------------------------------------------------------------


class Presheaf:
    """A presheaf given by value dimensions and basis action matrices.

    Args:
        cat: The category.
        dims: ``object -> dim F(object)``; missing objects are zero.
        action: Either a dict ``(A, B) -> [matrix for each basis f: A -> B]``
            or a callable ``(A, B, i) -> matrix``.
        name: Optional label for reports.
    """

    def __init__(self, cat: FinLinearCategory, dims: dict, action, name: str = ""):
        self.cat = cat
        self.field = cat.field
        self.dims = {a: int(dims.get(a, 0)) for a in cat.objects}
        self._action = action
        self._cache: dict = {}
        self._mcache: dict = {}
        self.name = name

    def dim(self, a: str) -> int:
        return self.dims[a]

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def act(self, a: str, b: str, i: int) -> Rows:
        """Matrix of F(f_i): F(b) -> F(a) for the i-th basis morphism a -> b."""
        key = (a, b, i)
        m = self._cache.get(key)
        if m is None:
            da, db = self.dims[a], self.dims[b]
            if da == 0 or db == 0:
                m = zero_rows(self.field, da, db)
            elif callable(self._action):
                m = tuple(tuple(r) for r in self._action(a, b, i))
            else:
                mats = self._action.get((a, b))
                m = zero_rows(self.field, da, db) if mats is None else tuple(tuple(r) for r in mats[i])
            self._cache[key] = m
        return m

    def act_morphism(self, f: Morphism) -> Rows:
        """Matrix of F(f) for an arbitrary morphism f."""
        key = (f.source, f.target, f.coords)
        m = self._mcache.get(key)
        if m is None:
            a, b = f.source, f.target
            da, db = self.dims[a], self.dims[b]
            acc = [[0] * db for _ in range(da)]
            if da and db:
                for i, c in enumerate(f.coords):
                    if c:
                        mi = self.act(a, b, i)
                        for r in range(da):
                            row, src = acc[r], mi[r]
                            for k in range(db):
                                if src[k]:
                                    row[k] += c * src[k]
            F = self.field
            m = tuple(tuple(F(x) for x in row) for row in acc)
            self._mcache[key] = m
        return m

    def validate(self) -> ValidationReport:
        """Check F(id) = id and F(g∘f) = F(f)∘F(g) on all basis pairs."""
        c, F = self.cat, self.field
        viol, checked = [], 0
        for a in c.objects:
            if self.dims[a] and self.act_morphism(c.identity(a)) != ident_rows(F, self.dims[a]):
                viol.append(f"identity: F(id_{a}) is not the identity")
        for a, b, cc in itertools.product(c.objects, repeat=3):
            if not (c.hom_dim(a, b) and c.hom_dim(b, cc)):
                continue
            if not (self.dims[a] and self.dims[cc]):
                continue
            for f in c.basis(a, b):
                ff = self.act_morphism(f)
                for g in c.basis(b, cc):
                    checked += 1
                    lhs = self.act_morphism(c.compose(g, f))
                    rhs = mul(F, ff, self.act_morphism(g), self.dims[cc])
                    if lhs != rhs:
                        viol.append(f"functoriality: {a}->{b}->{cc}")
                        break
        return ValidationReport(not viol, viol, checked)

    def key(self) -> tuple:
        """Hashable canonical description (for deduplication and ordering)."""
        c = self.cat
        parts = [tuple(self.dims[a] for a in c.objects)]
        for a, b in itertools.product(c.objects, repeat=2):
            for i in range(c.hom_dim(a, b)):
                parts.append(self.act(a, b, i))
        return tuple(parts)

    def is_zero(self) -> bool:
        return self.total_dim() == 0

    def to_json(self) -> dict:
        c, F = self.cat, self.field
        action = {}
        for a, b in itertools.product(c.objects, repeat=2):
            if not (self.dims[a] and self.dims[b]):
                continue
            for i, label in enumerate(c.basis_labels(a, b)):
                action[f"{a}|{b}|{label}"] = [[F.scalar_to_json(x) for x in r] for r in self.act(a, b, i)]
        return {"values": {a: self.dims[a] for a in c.objects}, "action": action}

    @classmethod
    def from_json(cls, cat: FinLinearCategory, doc: dict, check: bool = True) -> "Presheaf":
        F = cat.field
        try:
            dims = {a: int(doc["values"].get(a, 0)) for a in cat.objects}
            unknown = set(doc["values"]) - set(cat.objects)
            if unknown:
                raise ValidationError(f"values for unknown objects {sorted(unknown)}")
            lookup = {}
            for a, b in itertools.product(cat.objects, repeat=2):
                for i, label in enumerate(cat.basis_labels(a, b)):
                    lookup[f"{a}|{b}|{label}"] = (a, b, i)
            action: dict = {}
            for key, mat in doc.get("action", {}).items():
                if key not in lookup:
                    raise ValidationError(f"unknown basis morphism {key!r}")
                a, b, i = lookup[key]
                rows = tuple(tuple(F.scalar_from_json(x) for x in r) for r in mat)
                if len(rows) != dims[a] or any(len(r) != dims[b] for r in rows):
                    raise ValidationError(f"action matrix {key!r} has the wrong shape")
                action.setdefault((a, b), {})[i] = rows
            mats = {}
            for (a, b), by_i in action.items():
                mats[(a, b)] = [by_i.get(i, zero_rows(F, dims[a], dims[b])) for i in range(cat.hom_dim(a, b))]
        except (KeyError, TypeError, AttributeError) as exc:
            raise ValidationError(f"malformed presheaf document: {exc}") from exc
        p = cls(cat, dims, mats)
        if check:
            rep = p.validate()
            if not rep.ok:
                raise ValidationError("; ".join(rep.violations[:3]))
        return p

    def __repr__(self):
        return f"Presheaf({self.name or '?'}, dims={self.dims})"


def representable(c: FinLinearCategory, x: str) -> Presheaf:
    """The Yoneda presheaf hom(-, x)."""
    if not c.has_object(x):
        raise KeyError(x)
    dims = {b: c.hom_dim(b, x) for b in c.objects}

    def action(a, b, i):
        return c.precompose_matrix(c.basis_morphism(a, b, i), x)

    return Presheaf(c, dims, action, name=f"Y({x})")


def zero_presheaf(c: FinLinearCategory) -> Presheaf:
    return Presheaf(c, {}, {}, name="0")


# ---------------------------------------------------------------------------
# Presheaf maps
# ---------------------------------------------------------------------------


class PresheafMap:
    """A natural transformation given by its components ``φ_X: F(X) -> G(X)``."""

    def __init__(self, source: Presheaf, target: Presheaf, components: dict):
        self.source = source
        self.target = target
        F = source.field
        self.components = {}
        for a in source.cat.objects:
            m = components.get(a)
            self.components[a] = zero_rows(F, target.dim(a), source.dim(a)) if m is None else tuple(tuple(r) for r in m)

    def component(self, a: str) -> Rows:
        return self.components[a]

    def matrix(self, a: str) -> Matrix:
        return Matrix(self.source.field, self.components[a], self.source.dim(a), trusted=True)

    def validate(self) -> ValidationReport:
        """Re-check every naturality square on basis morphisms."""
        c, F = self.source.cat, self.source.field
        viol, checked = [], 0
        for a, b in itertools.product(c.objects, repeat=2):
            for f in c.basis(a, b):
                checked += 1
                lhs = mul(F, self.target.act_morphism(f), self.components[b], self.source.dim(b))
                rhs = mul(F, self.components[a], self.source.act_morphism(f), self.source.dim(b))
                if lhs != rhs:
                    viol.append(f"naturality: square for {a}->{b}")
        return ValidationReport(not viol, viol, checked)

    def compose(self, other: "PresheafMap") -> "PresheafMap":
        """``self ∘ other``."""
        F = self.source.field
        comps = {a: mul(F, self.components[a], other.components[a], other.source.dim(a)) for a in self.source.cat.objects}
        return PresheafMap(other.source, self.target, comps)

    def is_zero(self) -> bool:
        return not any(x for m in self.components.values() for r in m for x in r)

    def is_injective(self) -> bool:
        F = self.source.field
        return all(rank_of(F, self.components[a], self.source.dim(a)) == self.source.dim(a) for a in self.source.cat.objects)

    def is_surjective(self) -> bool:
        F = self.source.field
        return all(rank_of(F, self.components[a], self.source.dim(a)) == self.target.dim(a) for a in self.source.cat.objects)

    def is_iso(self) -> bool:
        return all(self.source.dim(a) == self.target.dim(a) for a in self.source.cat.objects) and self.is_injective()


def identity_map(p: Presheaf) -> PresheafMap:
    return PresheafMap(p, p, {a: ident_rows(p.field, p.dim(a)) for a in p.cat.objects})


def zero_map(p: Presheaf, q: Presheaf) -> PresheafMap:
    return PresheafMap(p, q, {})


@dataclass
class NatSpace:
    """Basis of the space of natural transformations ``F -> G``."""

    dim: int
    basis: list


def nat_space(f: Presheaf, g: Presheaf) -> NatSpace:
    """Solve the naturality system for maps ``f -> g`` exactly."""
    c, F = f.cat, f.field
    offsets, n = {}, 0
    for a in c.objects:
        offsets[a] = n
        n += g.dim(a) * f.dim(a)
    if n == 0:
        return NatSpace(0, [])
    rows = []
    for a, b in itertools.product(c.objects, repeat=2):
        ga, fb = g.dim(a), f.dim(b)
        if not (ga and fb) or not c.hom_dim(a, b):
            continue
        fa, gb = f.dim(a), g.dim(b)
        if not (gb or fa):
            continue
        for i in range(c.hom_dim(a, b)):
            Gf = g.act(a, b, i)  # ga x gb
            Ff = f.act(a, b, i)  # fa x fb
            # (G(f) φ_b)[r][col] - (φ_a F(f))[r][col] = 0
            for r in range(ga):
                for col in range(fb):
                    row = {}
                    for k in range(gb):
                        v = Gf[r][k]
                        if v:
                            idx = offsets[b] + k * fb + col
                            row[idx] = row.get(idx, 0) + v
                    for k in range(fa):
                        v = Ff[k][col]
                        if v:
                            idx = offsets[a] + r * fa + k
                            row[idx] = row.get(idx, 0) - v
                    if any(F(x) for x in row.values()):
                        dense = [F.zero] * n
                        for idx, v in row.items():
                            dense[idx] = F(v)
                        rows.append(dense)
    basis_vecs = nullspace(F, rows, n) if rows else [tuple(F.one if i == j else F.zero for i in range(n)) for j in range(n)]
    maps = []
    for vec in basis_vecs:
        comps = {}
        for a in c.objects:
            ga, fa, off = g.dim(a), f.dim(a), offsets[a]
            comps[a] = tuple(tuple(vec[off + r * fa + k] for k in range(fa)) for r in range(ga))
        maps.append(PresheafMap(f, g, comps))
    return NatSpace(len(maps), maps)


# ---------------------------------------------------------------------------
# Subquotients
# ---------------------------------------------------------------------------


@dataclass
class Subquotient:
    """Pointwise data of K/I inside a presheaf M.

    ``reps[a]`` are the chosen representative vectors in M(a) of a basis of
    the subquotient and ``coords[a]`` is a left inverse of ``[I | reps]``
    restricted to K.
    """

    presheaf: Presheaf
    reps: dict
    decompose: dict
    sub_dim: dict


def _subquotient(m: Presheaf, kern: dict, img: dict, name: str) -> Subquotient:
    """Build the presheaf K/I from pointwise bases of I ⊆ K ⊆ M."""
    c, F = m.cat, m.field
    reps, decomp, idims, dims = {}, {}, {}, {}
    for a in c.objects:
        d = m.dim(a)
        ib = list(span_basis(F, img[a], d))
        basis = list(ib)
        extra = []
        for v in kern[a]:
            if len(rref(F, basis + [v], d)[1]) > len(basis):
                basis.append(v)
                extra.append(v)
        reps[a] = extra
        idims[a] = len(ib)
        dims[a] = len(extra)
        decomp[a] = left_inverse(F, basis, d)

    def action(a, b, i):
        mf = m.act(a, b, i)
        out_cols = []
        for v in reps[b]:
            w = apply_rows(F, mf, v)
            co = apply_rows(F, decomp[a], w)
            out_cols.append(co[idims[a]:])
        return rows_from_columns(out_cols, dims[a])

    sq = Presheaf(c, dims, action, name=name)
    return Subquotient(sq, reps, decomp, idims)


def _pointwise_kernel(phi: PresheafMap) -> dict:
    F = phi.source.field
    return {a: nullspace(F, list(phi.components[a]), phi.source.dim(a)) if phi.target.dim(a) else
            [tuple(F.one if i == j else F.zero for i in range(phi.source.dim(a))) for j in range(phi.source.dim(a))]
            for a in phi.source.cat.objects}


def _pointwise_image(phi: PresheafMap) -> dict:
    return {a: columns_of(phi.components[a], phi.source.dim(a)) for a in phi.source.cat.objects}


def homology(p: PresheafMap, q: PresheafMap) -> Presheaf:
    """Pointwise ker(q)/im(p) with the induced action.

    Raises:
        NotAComplex: ``q ∘ p`` is not zero.
    """
    if p.target is not q.source and p.target.key() != q.source.key():
        raise ValidationError("homology needs target(p) = source(q)")
    if not q.compose(p).is_zero():
        raise NotAComplex("q ∘ p is not zero")
    return _subquotient(q.source, _pointwise_kernel(q), _pointwise_image(p), "H").presheaf


def kernel(phi: PresheafMap) -> tuple[Presheaf, PresheafMap]:
    """Kernel presheaf and its inclusion into the source."""
    src = phi.source
    sq = _subquotient(src, _pointwise_kernel(phi), {a: [] for a in src.cat.objects}, "ker")
    inc = PresheafMap(sq.presheaf, src, {a: rows_from_columns(sq.reps[a], src.dim(a)) for a in src.cat.objects})
    return sq.presheaf, inc


def cokernel(phi: PresheafMap) -> tuple[Presheaf, PresheafMap]:
    """Cokernel presheaf and the projection from the target."""
    tgt = phi.target
    F = tgt.field
    full = {a: [tuple(F.one if i == j else F.zero for i in range(tgt.dim(a))) for j in range(tgt.dim(a))] for a in tgt.cat.objects}
    sq = _subquotient(tgt, full, _pointwise_image(phi), "coker")
    proj = {}
    for a in tgt.cat.objects:
        dec = sq.decompose[a]
        proj[a] = tuple(dec[sq.sub_dim[a]:])
    return sq.presheaf, PresheafMap(tgt, sq.presheaf, proj)


def image_dims(phi: PresheafMap) -> dict:
    F = phi.source.field
    return {a: rank_of(F, phi.components[a], phi.source.dim(a)) for a in phi.source.cat.objects}


# ---------------------------------------------------------------------------
# Direct sums and maps between sums of representables
# ---------------------------------------------------------------------------


def direct_sum(parts: Sequence[Presheaf]) -> Presheaf:
    """The direct sum of presheaves, coordinates concatenated in order."""
    if not parts:
        raise ValidationError("direct_sum of an empty list needs a category; use zero_presheaf")
    c, F = parts[0].cat, parts[0].field
    dims = {a: sum(p.dim(a) for p in parts) for a in c.objects}

    def action(a, b, i):
        out = []
        col_off = 0
        total_b = dims[b]
        for p in parts:
            m = p.act(a, b, i)
            for r in m:
                out.append((F.zero,) * col_off + tuple(r) + (F.zero,) * (total_b - col_off - p.dim(b)))
            col_off += p.dim(b)
        return tuple(out)

    return Presheaf(c, dims, action, name="⊕")


def sum_of_representables(c: FinLinearCategory, objs: Sequence[str]) -> Presheaf:
    if not objs:
        return zero_presheaf(c)
    return direct_sum([representable(c, x) for x in objs])


def yoneda_matrix_map(c: FinLinearCategory, src_objs: Sequence[str], tgt_objs: Sequence[str], entries, src=None, tgt=None) -> PresheafMap:
    """The map ⊕𝚈(src_objs) -> ⊕𝚈(tgt_objs) given by a matrix of morphisms.

    Args:
        c: Category.
        src_objs: Source summands Z_γ.
        tgt_objs: Target summands Y_β.
        entries: ``entries[γ][β]`` is a Morphism Z_γ -> Y_β (or None for 0).
        src: Prebuilt source presheaf (optional).
        tgt: Prebuilt target presheaf (optional).
    """
    F = c.field
    src = src if src is not None else sum_of_representables(c, src_objs)
    tgt = tgt if tgt is not None else sum_of_representables(c, tgt_objs)
    comps = {}
    for w in c.objects:
        sd = [c.hom_dim(w, z) for z in src_objs]
        td = [c.hom_dim(w, y) for y in tgt_objs]
        nrows, ncols = sum(td), sum(sd)
        mat = [[F.zero] * ncols for _ in range(nrows)]
        coff = 0
        for gi, z in enumerate(src_objs):
            roff = 0
            for bi, y in enumerate(tgt_objs):
                m = entries[gi][bi] if entries else None
                if m is not None and any(m.coords) and sd[gi] and td[bi]:
                    block = c.postcompose_matrix(m, w)  # hom(w,z) -> hom(w,y)
                    for r in range(td[bi]):
                        for k in range(sd[gi]):
                            v = block[r][k]
                            if v:
                                mat[roff + r][coff + k] = F(mat[roff + r][coff + k] + v)
                roff += td[bi]
            coff += sd[gi]
        comps[w] = tuple(tuple(r) for r in mat)
    return PresheafMap(src, tgt, comps)


# ---------------------------------------------------------------------------
# Restriction along functors
# ---------------------------------------------------------------------------


def restrict(p: Presheaf, sub: FinLinearCategory, obj_map: Callable[[str], str], mor_map: Callable[[Morphism], Morphism]) -> Presheaf:
    """Precompose a presheaf with a linear functor ``sub -> p.cat``."""
    dims = {a: p.dim(obj_map(a)) for a in sub.objects}

    def action(a, b, i):
        return p.act_morphism(mor_map(sub.basis_morphism(a, b, i)))

    return Presheaf(sub, dims, action)


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def enumerate_presheaves(c: FinLinearCategory, max_dim: int = 2, cap: int = 200_000, search_cap: int = 5_000_000) -> list[Presheaf]:
    """All presheaves with ``dim F(A) <= max_dim`` for every object, over F_p.

    Candidates are built by assigning action matrices basis morphism by basis
    morphism; identity matrices are forced and every functoriality equation is
    tested as soon as all matrices it mentions are assigned.

    Raises:
        Unsupported: the field is not finite.
        TooLarge: more than ``cap`` results or ``search_cap`` candidates.
    """
    F = c.field
    if not F.is_finite:
        raise Unsupported("presheaf enumeration needs a finite field")
    objs = c.objects
    elems = list(F.elements())
    results: list[Presheaf] = []
    visited = [0]

    # basis morphisms in a fixed order
    morphs = [(a, b, i) for a in objs for b in objs for i in range(c.hom_dim(a, b))]
    # identity: pick the last nonzero coordinate as the solved one
    solved = {}
    for a in objs:
        coords = c.identity(a).coords
        piv = max(i for i, x in enumerate(coords) if x)
        solved[(a, a, piv)] = coords
    # composition constraints: (f, g) basis pairs with f: a->b, g: b->cc
    constraints = []
    for a, b, cc in itertools.product(objs, repeat=3):
        if not (c.hom_dim(a, b) and c.hom_dim(b, cc)):
            continue
        t = c.table(a, b, cc)
        for i in range(c.hom_dim(b, cc)):
            for j in range(c.hom_dim(a, b)):
                constraints.append(((a, b, j), (b, cc, i), (a, cc), t[i][j]))

    for dims_t in itertools.product(range(max_dim + 1), repeat=len(objs)):
        dims = dict(zip(objs, dims_t))
        free = [m for m in morphs if m not in solved and dims[m[0]] and dims[m[1]]]
        order = {m: k for k, m in enumerate(free)}

        def needed_step(m):
            if m in order:
                return order[m]
            if m in solved:
                a = m[0]
                return max((order[(a, a, i)] for i in range(c.hom_dim(a, a)) if (a, a, i) in order), default=-1)
            return -1  # zero matrix, always known

        cons_at: dict = {}
        for cons in constraints:
            f, g, (a, cc), coords = cons
            if not (dims[a] and dims[cc]):
                continue
            involved = [f, g] + [(a, cc, k) for k, x in enumerate(coords) if x]
            step = max(needed_step(m) for m in involved)
            cons_at.setdefault(step, []).append(cons)

        assign: dict = {}

        def mat_of(m):
            a, b, i = m
            if not (dims[a] and dims[b]):
                return zero_rows(F, dims[a], dims[b])
            if m in assign:
                return assign[m]
            if m in solved:
                coords = solved[m]
                acc = [[F.zero] * dims[a] for _ in range(dims[a])]
                for k, x in enumerate(coords):
                    if x and k != i:
                        mk = assign[(a, b, k)]
                        for r in range(dims[a]):
                            for s in range(dims[a]):
                                acc[r][s] = F(acc[r][s] - x * mk[r][s])
                inv = F.inv(coords[i])
                for r in range(dims[a]):
                    acc[r][r] = F(acc[r][r] + 1)
                return tuple(tuple(F(inv * v) for v in row) for row in acc)
            return zero_rows(F, dims[a], dims[b])

        def check(cons):
            f, g, (a, cc), coords = cons
            b = f[1]
            lhs_acc = [[0] * dims[cc] for _ in range(dims[a])]
            for k, x in enumerate(coords):
                if x:
                    mk = mat_of((a, cc, k))
                    for r in range(dims[a]):
                        for s in range(dims[cc]):
                            lhs_acc[r][s] += x * mk[r][s]
            lhs = tuple(tuple(F(v) for v in row) for row in lhs_acc)
            rhs = mul(F, mat_of(f), mat_of(g), dims[cc]) if dims[b] else zero_rows(F, dims[a], dims[cc])
            return lhs == rhs

        for cons in cons_at.get(-1, []):
            if not check(cons):
                break
        else:
            cands = {}
            for m in free:
                a, b, _ = m
                cands[m] = None  # generated lazily
            shape = {m: (dims[m[0]], dims[m[1]]) for m in free}

            def all_mats(r, s):
                for entries in itertools.product(elems, repeat=r * s):
                    yield tuple(tuple(entries[k * s:(k + 1) * s]) for k in range(r))

            def rec(k):
                if k == len(free):
                    mats = {}
                    for a, b in itertools.product(objs, repeat=2):
                        if dims[a] and dims[b] and c.hom_dim(a, b):
                            mats[(a, b)] = [mat_of((a, b, i)) for i in range(c.hom_dim(a, b))]
                    results.append(Presheaf(c, dims, mats))
                    if len(results) > cap:
                        raise TooLarge(f"more than {cap} presheaves")
                    return
                m = free[k]
                for mat in all_mats(*shape[m]):
                    visited[0] += 1
                    if visited[0] > search_cap:
                        raise TooLarge(f"presheaf search exceeded {search_cap} candidates")
                    assign[m] = mat
                    if all(check(cons) for cons in cons_at.get(k, [])):
                        rec(k + 1)
                del assign[m]

            if free:
                rec(0)
            else:
                if all(check(cons) for cons in cons_at.get(-1, [])):
                    mats = {}
                    for a, b in itertools.product(objs, repeat=2):
                        if dims[a] and dims[b] and c.hom_dim(a, b):
                            mats[(a, b)] = [mat_of((a, b, i)) for i in range(c.hom_dim(a, b))]
                    results.append(Presheaf(c, dims, mats))
    return results


def enumerate_maps(f: Presheaf, g: Presheaf, limit: int | None = None) -> Iterable[PresheafMap]:
    """All natural transformations f -> g over a finite field (lexicographic in coefficients)."""
    F = f.field
    if not F.is_finite:
        raise Unsupported("map enumeration needs a finite field")
    ns = nat_space(f, g)
    count = 0
    for coeffs in itertools.product(list(F.elements()), repeat=ns.dim):
        comps = {}
        for a in f.cat.objects:
            acc = zero_rows(F, g.dim(a), f.dim(a))
            for cf, m in zip(coeffs, ns.basis):
                if cf:
                    acc = add_rows(F, acc, scale_rows(F, cf, m.components[a]))
            comps[a] = acc
        yield PresheafMap(f, g, comps)
        count += 1
        if limit is not None and count >= limit:
            return

"""Finite k-linear categories, their builders and optional monoidal structure.

A category is stored by structure constants: for objects A, B, C the table
``table(A, B, C)[i][j]`` holds the coordinates of ``g_i ∘ f_j`` in the basis
of hom(A, C), where ``f_j`` runs over the basis of hom(A, B) and ``g_i`` over
hom(B, C). Builders that describe large families (the graded window) supply a
rule instead and tables are filled lazily.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Callable, Iterable, Sequence

from .errors import FieldMismatch, NotFinite, ValidationError, WindowOverflow
from .exactla import Field, field_from_json, rref

Coords = tuple


@dataclass(frozen=True)
class Morphism:
    """A morphism ``source -> target`` given by coordinates in the hom basis."""

    source: str
    target: str
    coords: Coords

    def is_zero(self) -> bool:
        return not any(self.coords)


@dataclass(frozen=True)
class FormalDirectSum:
    """An ordered finite list of objects standing for their formal coproduct."""

    summands: tuple = ()

    def __len__(self):
        return len(self.summands)

    def __iter__(self):
        return iter(self.summands)


@dataclass
class ValidationReport:
    """Outcome of a structural check; ``violations`` lists human-readable failures."""

    ok: bool
    violations: list = dc_field(default_factory=list)
    checked: int = 0

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": list(self.violations), "checked": self.checked}


class FinLinearCategory:
    """A finite presentation of a k-linear category.

    Args:
        field: Scalar field.
        objects: Object labels, in a fixed order.
        hom_dims: Map ``(A, B) -> dim hom(A, B)``; missing pairs are zero.
        identities: Map ``A -> coordinates of id_A``.
        tables: Map ``(A, B, C) -> table`` of structure constants. Optional when
            ``rule`` is given.
        rule: Callable ``(A, B, C, i, j) -> coords`` computing ``g_i ∘ f_j``.
        basis_labels: Map ``(A, B) -> labels``; defaults to ``"A|B#i"``.
        name: Free-form name used in reports.
    """

    def __init__(
        self,
        field: Field,
        objects: Sequence[str],
        hom_dims: dict,
        identities: dict,
        tables: dict | None = None,
        rule: Callable | None = None,
        basis_labels: dict | None = None,
        name: str = "",
    ):
        if len(set(objects)) != len(objects):
            raise ValidationError("duplicate object labels")
        self.field = field
        self.objects = tuple(objects)
        self.name = name
        self._dims = {(a, b): int(hom_dims.get((a, b), 0)) for a in objects for b in objects}
        self._ident = {a: tuple(field(x) for x in identities[a]) for a in objects}
        self._tables = dict(tables or {})
        self._rule = rule
        self._labels = dict(basis_labels or {})
        self._pre_cache: dict = {}
        self._post_cache: dict = {}
        self.monoidal: MonoidalStructure | None = None
        self.meta: dict = {}

    # -- basic data -------------------------------------------------------
    def hom_dim(self, a: str, b: str) -> int:
        return self._dims[(a, b)]

    def has_object(self, a: str) -> bool:
        return (a, a) in self._dims

    def basis_labels(self, a: str, b: str) -> tuple:
        labels = self._labels.get((a, b))
        if labels is None:
            labels = tuple(f"{a}|{b}#{i}" for i in range(self.hom_dim(a, b)))
            self._labels[(a, b)] = labels
        return tuple(labels)

    def basis(self, a: str, b: str) -> list[Morphism]:
        d = self.hom_dim(a, b)
        z, o = self.field.zero, self.field.one
        return [Morphism(a, b, tuple(o if k == i else z for k in range(d))) for i in range(d)]

    def basis_morphism(self, a: str, b: str, i: int) -> Morphism:
        return self.basis(a, b)[i]

    def identity(self, a: str) -> Morphism:
        return Morphism(a, a, self._ident[a])

    def zero(self, a: str, b: str) -> Morphism:
        return Morphism(a, b, (self.field.zero,) * self.hom_dim(a, b))

    def morphism(self, a: str, b: str, coords: Iterable) -> Morphism:
        c = tuple(self.field(x) for x in coords)
        if len(c) != self.hom_dim(a, b):
            raise ValidationError(f"coords length {len(c)} != dim hom({a},{b})")
        return Morphism(a, b, c)

    def total_hom_dim(self) -> int:
        return sum(self._dims.values())

    # -- composition ------------------------------------------------------
    def table(self, a: str, b: str, c: str):
        key = (a, b, c)
        t = self._tables.get(key)
        if t is None:
            dab, dbc = self.hom_dim(a, b), self.hom_dim(b, c)
            dac = self.hom_dim(a, c)
            if self._rule is None or dab == 0 or dbc == 0:
                zero = (self.field.zero,) * dac
                t = [[zero] * dab for _ in range(dbc)]
            else:
                t = [[tuple(self._rule(a, b, c, i, j)) for j in range(dab)] for i in range(dbc)]
            self._tables[key] = t
        return t

    def compose_coords(self, a: str, b: str, c: str, g: Coords, f: Coords) -> Coords:
        """Coordinates of ``g ∘ f`` for f in hom(a,b), g in hom(b,c)."""
        dac = self.hom_dim(a, c)
        acc = [0] * dac
        if dac:
            t = self.table(a, b, c)
            for i, gi in enumerate(g):
                if not gi:
                    continue
                row = t[i]
                for j, fj in enumerate(f):
                    if not fj:
                        continue
                    s = gi * fj
                    for k, v in enumerate(row[j]):
                        if v:
                            acc[k] += s * v
        F = self.field
        return tuple(F(x) for x in acc)

    def compose(self, g: Morphism, f: Morphism) -> Morphism:
        """The composite ``g ∘ f``."""
        if f.target != g.source:
            raise ValidationError(f"cannot compose {g.source}->{g.target} after {f.source}->{f.target}")
        return Morphism(f.source, g.target, self.compose_coords(f.source, f.target, g.target, g.coords, f.coords))

    def add(self, f: Morphism, g: Morphism) -> Morphism:
        if (f.source, f.target) != (g.source, g.target):
            raise ValidationError("adding morphisms with different endpoints")
        F = self.field
        return Morphism(f.source, f.target, tuple(F(x + y) for x, y in zip(f.coords, g.coords)))

    def scale(self, c, f: Morphism) -> Morphism:
        F = self.field
        return Morphism(f.source, f.target, tuple(F(c * x) for x in f.coords))

    def precompose_matrix(self, f: Morphism, c: str) -> tuple:
        """Row-major matrix of ``(- ∘ f): hom(B, c) -> hom(A, c)`` for f: A -> B."""
        key = (f.source, f.target, f.coords, c)
        m = self._pre_cache.get(key)
        if m is None:
            a, b = f.source, f.target
            cols = [self.compose_coords(a, b, c, g.coords, f.coords) for g in self.basis(b, c)]
            dac = self.hom_dim(a, c)
            m = tuple(tuple(col[k] for col in cols) for k in range(dac))
            self._pre_cache[key] = m
        return m

    def postcompose_matrix(self, g: Morphism, a: str) -> tuple:
        """Row-major matrix of ``(g ∘ -): hom(a, B) -> hom(a, C)`` for g: B -> C."""
        key = (g.source, g.target, g.coords, a)
        m = self._post_cache.get(key)
        if m is None:
            b, c = g.source, g.target
            cols = [self.compose_coords(a, b, c, g.coords, f.coords) for f in self.basis(a, b)]
            dac = self.hom_dim(a, c)
            m = tuple(tuple(col[k] for col in cols) for k in range(dac))
            self._post_cache[key] = m
        return m

    # -- serialization ----------------------------------------------------
    def to_json(self) -> dict:
        F = self.field
        hom = {}
        compose = []
        for a in self.objects:
            for b in self.objects:
                d = self.hom_dim(a, b)
                if d:
                    hom[f"{a}|{b}"] = {"dim": d, "basis": list(self.basis_labels(a, b))}
        for a, b, c in itertools.product(self.objects, repeat=3):
            if self.hom_dim(a, b) and self.hom_dim(b, c) and self.hom_dim(a, c):
                t = self.table(a, b, c)
                compose.append(
                    {
                        "triple": [a, b, c],
                        "table": [[[F.scalar_to_json(x) for x in v] for v in row] for row in t],
                    }
                )
        doc = {
            "field": F.to_json(),
            "objects": list(self.objects),
            "hom": hom,
            "compose": compose,
            "identity": {a: [F.scalar_to_json(x) for x in self._ident[a]] for a in self.objects},
        }
        if self.name:
            doc["name"] = self.name
        if self.monoidal is not None:
            doc["monoidal"] = self.monoidal.to_json()
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "FinLinearCategory":
        try:
            F = field_from_json(doc["field"])
            objects = list(doc["objects"])
            dims, labels = {}, {}
            for key, entry in doc.get("hom", {}).items():
                a, b = _split_pair(key)
                dims[(a, b)] = int(entry["dim"])
                basis = entry.get("basis")
                if basis is not None:
                    if len(basis) != dims[(a, b)]:
                        raise ValidationError(f"basis length mismatch for {key}")
                    labels[(a, b)] = tuple(basis)
            for a, b in dims:
                if a not in objects or b not in objects:
                    raise ValidationError(f"hom entry for unknown object in {a}|{b}")
            tables = {}
            for entry in doc.get("compose", []):
                a, b, c = entry["triple"]
                t = [[tuple(F.scalar_from_json(x) for x in v) for v in row] for row in entry["table"]]
                if len(t) != dims.get((b, c), 0) or any(len(row) != dims.get((a, b), 0) for row in t):
                    raise ValidationError(f"table shape mismatch for triple {a},{b},{c}")
                if any(len(v) != dims.get((a, c), 0) for row in t for v in row):
                    raise ValidationError(f"table vector length mismatch for triple {a},{b},{c}")
                tables[(a, b, c)] = t
            idents = {}
            for a in objects:
                coords = [F.scalar_from_json(x) for x in doc["identity"][a]]
                if len(coords) != dims.get((a, a), 0):
                    raise ValidationError(f"identity of {a} has wrong length")
                idents[a] = coords
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ValidationError(f"malformed category document: {exc}") from exc
        cat = cls(F, objects, dims, idents, tables=tables, basis_labels=labels, name=doc.get("name", ""))
        if "monoidal" in doc:
            cat.monoidal = MonoidalStructure.from_json(cat, doc["monoidal"])
        return cat

    def __repr__(self):
        return f"FinLinearCategory({self.name or '?'}, objects={len(self.objects)}, field={self.field!r})"


def _split_pair(key: str) -> tuple[str, str]:
    parts = key.split("|")
    if len(parts) != 2:
        raise ValidationError(f"bad hom key {key!r}")
    return parts[0], parts[1]


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def validate(c: FinLinearCategory, max_violations: int = 50) -> ValidationReport:
    """Check identity laws and associativity on all basis morphisms.

    Bilinearity holds by construction; the check confirms that every table has
    the shape its hom dimensions demand.
    """
    viol = []
    checked = 0
    F = c.field
    objs = c.objects
    for a, b, cc in itertools.product(objs, repeat=3):
        t = c.table(a, b, cc)
        if len(t) != c.hom_dim(b, cc) or any(len(r) != c.hom_dim(a, b) for r in t):
            viol.append(f"bilinearity: table ({a},{b},{cc}) has wrong shape")
    for a in objs:
        if len(c.identity(a).coords) != c.hom_dim(a, a):
            viol.append(f"identity: {a} has wrong coordinate length")
    if viol:
        return ValidationReport(False, viol, checked)
    for a, b in itertools.product(objs, repeat=2):
        ida, idb = c.identity(a), c.identity(b)
        for f in c.basis(a, b):
            checked += 1
            if c.compose(idb, f).coords != f.coords:
                viol.append(f"identity: left identity of {b} fails on {a}->{b}")
            if c.compose(f, ida).coords != f.coords:
                viol.append(f"identity: right identity of {a} fails on {a}->{b}")
            if len(viol) >= max_violations:
                return ValidationReport(False, viol, checked)
    for a, b, cc, d in itertools.product(objs, repeat=4):
        if not (c.hom_dim(a, b) and c.hom_dim(b, cc) and c.hom_dim(cc, d)):
            continue
        for f in c.basis(a, b):
            for g in c.basis(b, cc):
                gf = c.compose(g, f)
                for h in c.basis(cc, d):
                    checked += 1
                    lhs = c.compose(c.compose(h, g), f)
                    rhs = c.compose(h, gf)
                    if lhs.coords != rhs.coords:
                        viol.append(f"associativity: triple ({a},{b},{cc},{d}) fails")
                        if len(viol) >= max_violations:
                            return ValidationReport(False, viol, checked)
    del F
    return ValidationReport(not viol, viol, checked)


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------


def from_algebra(field: Field, structure_constants, labels=None, unit=None, name: str = "") -> FinLinearCategory:
    """One-object category whose endomorphism space is an algebra.

    Args:
        field: Scalar field.
        structure_constants: ``mult[i][j]`` = coordinates of ``e_i · e_j``.
            Composition is ``g ∘ f = g · f``.
        labels: Basis labels; defaults to ``e0, e1, ...``.
        unit: Coordinates of the unit; solved for when omitted.
        name: Category name.

    Raises:
        ValidationError: the constants are not associative or have no unit.
    """
    mult = [[tuple(field(x) for x in v) for v in row] for row in structure_constants]
    n = len(mult)
    if any(len(row) != n or any(len(v) != n for v in row) for row in mult):
        raise ValidationError("structure constants must be n×n×n")
    if unit is None:
        unit = _solve_unit(field, mult, n)
        if unit is None:
            raise ValidationError("algebra has no unit")
    labels = tuple(labels) if labels is not None else tuple(f"e{i}" for i in range(n))
    cat = FinLinearCategory(
        field,
        ["*"],
        {("*", "*"): n},
        {"*": unit},
        tables={("*", "*", "*"): mult},
        basis_labels={("*", "*"): labels},
        name=name,
    )
    rep = validate(cat)
    if not rep.ok:
        raise ValidationError("; ".join(rep.violations[:3]))
    cat.meta["algebra"] = {"mult": mult, "labels": labels}
    return cat


def _solve_unit(field: Field, mult, n):
    # u·e_j = e_j and e_j·u = e_j, linear in u
    rows = []
    rhs = []
    for j in range(n):
        for k in range(n):
            rows.append([mult[i][j][k] for i in range(n)])
            rhs.append(field.one if k == j else field.zero)
            rows.append([mult[j][i][k] for i in range(n)])
            rhs.append(field.one if k == j else field.zero)
    aug = [r + [b] for r, b in zip(rows, rhs)]
    red, piv = rref(field, aug, n + 1)
    if piv and piv[-1] == n:
        return None
    u = [field.zero] * n
    for row, pc in zip(red, piv):
        u[pc] = row[n]
    return u


def product_algebra(field: Field, k: int = 2, name: str = "") -> FinLinearCategory:
    """The algebra F^k with orthogonal idempotent basis ``e1..ek``."""
    z, o = field.zero, field.one
    mult = [[tuple(o if (i == j == m) else z for m in range(k)) for j in range(k)] for i in range(k)]
    labels = [f"e{i + 1}" for i in range(k)]
    return from_algebra(field, mult, labels, unit=[o] * k, name=name or f"F{getattr(field, 'p', 'Q')}^{k}")


def quotient_polynomial_algebra(field: Field, modulus: Sequence, name: str = "") -> FinLinearCategory:
    """The algebra F[x]/(m(x)) with monomial basis ``1, x, ..., x^{d-1}``.

    Args:
        field: Scalar field.
        modulus: Coefficients of the monic polynomial m, constant term first.
        name: Category name.
    """
    m = [field(c) for c in modulus]
    d = len(m) - 1
    if d < 1 or m[-1] != field.one:
        raise ValidationError("modulus must be monic of degree >= 1")

    def reduce(poly):
        poly = list(poly)
        for deg in range(len(poly) - 1, d - 1, -1):
            c = poly[deg]
            if c:
                for k in range(d + 1):
                    poly[deg - d + k] = field(poly[deg - d + k] - c * m[k])
        return tuple(field(x) for x in poly[:d]) + (field.zero,) * max(0, d - len(poly))

    mult = []
    for i in range(d):
        row = []
        for j in range(d):
            poly = [field.zero] * (2 * d)
            poly[i + j] = field.one
            row.append(reduce(poly))
        mult.append(row)
    labels = ["1"] + ["x" if k == 1 else f"x{k}" for k in range(1, d)]
    unit = [field.one] + [field.zero] * (d - 1)
    return from_algebra(field, mult, labels, unit=unit, name=name)


def from_quiver(field: Field, vertices, arrows, relations=(), name: str = "", max_length: int = 64) -> FinLinearCategory:
    """Path category of a quiver modulo homogeneous relations.

    Args:
        field: Scalar field.
        vertices: Vertex labels; these become the objects.
        arrows: ``(name, source, target)`` triples. An arrow is a morphism in
            hom(source, target).
        relations: Each relation is a list of ``(coefficient, path)`` where a
            path is a tuple of arrow names in traversal order. All paths in one
            relation share endpoints and length.
        name: Category name.
        max_length: Give up (NotFinite) if paths of this length survive.

    Raises:
        NotFinite: path spaces do not vanish in bounded length.
        ValidationError: malformed or inhomogeneous relations.
    """
    vertices = list(vertices)
    arrow_src = {a: s for a, s, _ in arrows}
    arrow_tgt = {a: t for a, _, t in arrows}
    if len(arrow_src) != len(arrows):
        raise ValidationError("duplicate arrow names")
    for a, s, t in arrows:
        if s not in vertices or t not in vertices:
            raise ValidationError(f"arrow {a} uses an unknown vertex")

    def endpoints(path):
        for x, y in zip(path, path[1:]):
            if arrow_tgt[x] != arrow_src[y]:
                raise ValidationError(f"path {path} is not composable")
        return arrow_src[path[0]], arrow_tgt[path[-1]]

    rels = []
    for rel in relations:
        terms = [(field(c), tuple(p)) for c, p in rel]
        lengths = {len(p) for _, p in terms}
        ends = {endpoints(p) for _, p in terms}
        if len(lengths) != 1 or len(ends) != 1 or 0 in lengths:
            raise ValidationError("relations must be homogeneous combinations of parallel paths")
        rels.append((terms, lengths.pop(), ends.pop()))

    # paths by length
    paths_by_len = {1: [(a,) for a, _, _ in arrows]}
    normal = {}  # (length) -> dict (s,t) -> list of normal paths
    reducer = {}  # (length) -> dict path -> coords over normal paths of same endpoints
    length = 1
    while True:
        if length > max_length:
            raise NotFinite(f"paths of length {max_length} do not vanish")
        paths = paths_by_len[length]
        if not paths:
            break
        groups: dict = {}
        for p in paths:
            groups.setdefault(endpoints(p), []).append(p)
        normal[length] = {}
        reducer[length] = {}
        for ends, plist in groups.items():
            idx = {p: k for k, p in enumerate(plist)}
            rows = []
            for terms, rl, rends in rels:
                if rl > length:
                    continue
                for pre_len in range(length - rl + 1):
                    post_len = length - rl - pre_len
                    for u in _paths_of_length(paths_by_len, arrows, pre_len, None, rends[0], arrow_src, arrow_tgt):
                        for w in _paths_of_length(paths_by_len, arrows, post_len, rends[1], None, arrow_src, arrow_tgt):
                            full_s = arrow_src[u[0]] if u else rends[0]
                            full_t = arrow_tgt[w[-1]] if w else rends[1]
                            if (full_s, full_t) != ends:
                                continue
                            vec = [field.zero] * len(plist)
                            for c, p in terms:
                                k = idx[u + p + w]
                                vec[k] = field(vec[k] + c)
                            rows.append(vec)
            red, piv = rref(field, rows, len(plist)) if rows else ([], [])
            pivset = set(piv)
            nf = [p for k, p in enumerate(plist) if k not in pivset]
            nidx = {p: k for k, p in enumerate(nf)}
            normal[length][ends] = nf
            red_map = {}
            for k, p in enumerate(plist):
                v = [field.zero] * len(nf)
                if k in pivset:
                    row = red[piv.index(k)]
                    for kk, q in enumerate(plist):
                        if kk not in pivset and row[kk]:
                            v[nidx[q]] = field(-row[kk])
                else:
                    v[nidx[p]] = field.one
                red_map[p] = tuple(v)
            reducer[length][ends] = red_map
        survivors = [p for nf in normal[length].values() for p in nf]
        if not survivors:
            break
        nxt = [p + (a,) for p in paths for a, s, _ in arrows if arrow_tgt[p[-1]] == s]
        length += 1
        paths_by_len[length] = nxt

    # assemble hom bases: trivial path first, then normal paths by length
    hom_basis = {}
    for s in vertices:
        for t in vertices:
            basis = [("e", s)] if s == t else []
            for ln in sorted(normal):
                basis.extend(normal[ln].get((s, t), []))
            hom_basis[(s, t)] = basis
    index = {k: {p: i for i, p in enumerate(v)} for k, v in hom_basis.items()}
    dims = {k: len(v) for k, v in hom_basis.items()}

    def path_coords(s, t, path):
        d = dims[(s, t)]
        out = [field.zero] * d
        if path[0] == "e":
            out[index[(s, t)][path]] = field.one
            return tuple(out)
        ln = len(path)
        if ln not in reducer or (s, t) not in reducer[ln]:
            return tuple(out)
        red_map = reducer[ln][(s, t)]
        nf = normal[ln][(s, t)]
        for k, c in enumerate(red_map[path]):
            if c:
                out[index[(s, t)][nf[k]]] = c
        return tuple(out)

    tables = {}
    for a, b, c in itertools.product(vertices, repeat=3):
        fb, gb = hom_basis[(a, b)], hom_basis[(b, c)]
        if not fb or not gb or not dims[(a, c)]:
            continue
        table = []
        for g in gb:
            row = []
            for f in fb:
                if f[0] == "e":
                    row.append(path_coords(a, c, g))
                elif g[0] == "e":
                    row.append(path_coords(a, c, f))
                else:
                    row.append(path_coords(a, c, f + g))
            table.append(row)
        tables[(a, b, c)] = table
    idents = {v: [field.one if p == ("e", v) else field.zero for p in hom_basis[(v, v)]] for v in vertices}
    labels = {
        k: tuple(f"e_{p[1]}" if p[0] == "e" else ".".join(p) for p in v) for k, v in hom_basis.items()
    }
    cat = FinLinearCategory(field, vertices, dims, idents, tables=tables, basis_labels=labels, name=name)
    cat.meta["quiver"] = {"vertices": vertices, "arrows": list(arrows)}
    return cat


def _paths_of_length(paths_by_len, arrows, n, start, end, src, tgt):
    if n == 0:
        return [()]
    out = []
    for p in paths_by_len.get(n, []):
        if start is not None and src[p[0]] != start:
            continue
        if end is not None and tgt[p[-1]] != end:
            continue
        out.append(p)
    return out


# ---------------------------------------------------------------------------
# Graded window
# ---------------------------------------------------------------------------


def monomials(nvars: int, degree: int) -> list[tuple]:
    """Exponent vectors of the given degree, x0-heavy first."""
    if degree < 0:
        return []
    if nvars == 1:
        return [(degree,)]
    out = []
    for e in range(degree, -1, -1):
        for rest in monomials(nvars - 1, degree - e):
            out.append((e,) + rest)
    return out


def _mono_label(e: tuple) -> str:
    parts = []
    for i, k in enumerate(e):
        if k == 1:
            parts.append(f"x{i}")
        elif k > 1:
            parts.append(f"x{i}^{k}")
    return "*".join(parts) or "1"


def graded_label(j: int) -> str:
    return f"S<{j}>"


def graded_degree(label: str) -> int:
    if not (label.startswith("S<") and label.endswith(">")):
        raise ValidationError(f"{label!r} is not a graded window object")
    return int(label[2:-1])


def graded_window(field: Field, n: int, lo: int, hi: int) -> FinLinearCategory:
    """Shifted free modules S⟨j⟩, lo ≤ j ≤ hi, over S = k[x0..xn].

    hom(S⟨i⟩, S⟨j⟩) = S_{i-j} with the monomial basis and composition is
    polynomial multiplication. The returned category carries a symmetric
    strict monoidal structure with S⟨i⟩⊗S⟨j⟩ = S⟨i+j⟩ (partial: results
    outside the window raise WindowOverflow) and S⟨j⟩* = S⟨-j⟩.
    """
    if not lo <= 0 <= hi:
        raise ValidationError("graded window needs lo <= 0 <= hi")
    nv = n + 1
    mono_cache: dict = {}

    def monos(d):
        if d not in mono_cache:
            ms = monomials(nv, d)
            mono_cache[d] = (ms, {m: k for k, m in enumerate(ms)})
        return mono_cache[d]

    objects = [graded_label(j) for j in range(lo, hi + 1)]
    dims, labels, idents = {}, {}, {}
    for i in range(lo, hi + 1):
        for j in range(lo, hi + 1):
            ms, _ = monos(i - j)
            dims[(graded_label(i), graded_label(j))] = len(ms)
            labels[(graded_label(i), graded_label(j))] = tuple(_mono_label(m) for m in ms)
        idents[graded_label(i)] = [field.one]

    def unit_vector(d, e):
        ms, idx = monos(d)
        v = [field.zero] * len(ms)
        v[idx[e]] = field.one
        return tuple(v)

    def rule(a, b, c, i, j):
        da, db, dc = graded_degree(a), graded_degree(b), graded_degree(c)
        g = monos(db - dc)[0][i]
        f = monos(da - db)[0][j]
        return unit_vector(da - dc, tuple(x + y for x, y in zip(g, f)))

    cat = FinLinearCategory(field, objects, dims, idents, rule=rule, basis_labels=labels, name=f"graded(n={n},[{lo},{hi}])")
    cat.meta["graded"] = {"n": n, "lo": lo, "hi": hi}
    cat.meta["monomials"] = monos

    def tensor_objects(a, b):
        d = graded_degree(a) + graded_degree(b)
        if not lo <= d <= hi:
            raise WindowOverflow(f"{a}⊗{b} = S<{d}> leaves the window [{lo},{hi}]")
        return graded_label(d)

    def tensor_basis(a, b, i, c, d, j):
        f = monos(graded_degree(a) - graded_degree(b))[0][i]
        g = monos(graded_degree(c) - graded_degree(d))[0][j]
        deg = graded_degree(a) + graded_degree(c) - graded_degree(b) - graded_degree(d)
        return unit_vector(deg, tuple(x + y for x, y in zip(f, g)))

    def braiding(a, b):
        t = tensor_objects(a, b)
        return Morphism(t, t, (field.one,))

    def dual_object(a):
        d = -graded_degree(a)
        if not lo <= d <= hi:
            raise WindowOverflow(f"dual of {a} leaves the window")
        return graded_label(d)

    def dual_basis(a, b, i):
        # f: S<a> -> S<b> is a polynomial; f*: S<-b> -> S<-a> is the same polynomial
        return tuple(unit_vector(graded_degree(a) - graded_degree(b), monos(graded_degree(a) - graded_degree(b))[0][i]))

    cat.monoidal = MonoidalStructure(
        cat,
        unit=graded_label(0),
        tensor_objects=tensor_objects,
        tensor_basis=tensor_basis,
        braiding=braiding,
        dual_object=dual_object,
        dual_basis=dual_basis,
        symmetric=True,
    )
    return cat


def polynomial_morphism(c: FinLinearCategory, source: str, target: str, poly: dict) -> Morphism:
    """Morphism of the graded window from a ``{exponent tuple: coefficient}`` map."""
    monos = c.meta["monomials"]
    d = graded_degree(source) - graded_degree(target)
    ms, idx = monos(d)
    v = [c.field.zero] * len(ms)
    for e, coeff in poly.items():
        if sum(e) != d or len(e) != c.meta["graded"]["n"] + 1:
            raise ValidationError(f"monomial {e} has the wrong degree for {source}->{target}")
        v[idx[tuple(e)]] = c.field(v[idx[tuple(e)]] + coeff)
    return Morphism(source, target, tuple(v))


# ---------------------------------------------------------------------------
# Monoidal structure
# ---------------------------------------------------------------------------


class MonoidalStructure:
    """Strict monoidal structure on a finite linear category.

    Args:
        cat: The underlying category.
        unit: Label of the unit object.
        tensor_objects: Callable or dict ``(A, B) -> A⊗B``.
        tensor_basis: Callable ``(A, B, i, C, D, j) -> coords`` of
            ``f_i ⊗ g_j`` in hom(A⊗C, B⊗D), or a dict keyed by
            ``(A, B, C, D)`` holding tables ``[i][j]``.
        braiding: Optional callable ``(A, B) -> Morphism A⊗B -> B⊗A``.
        dual_object: Optional callable giving A*.
        dual_basis: Optional callable ``(A, B, i) -> coords`` of the dual
            ``f_i*: B* -> A*``.
        symmetric: Whether the braiding is a symmetry.
    """

    def __init__(self, cat, unit, tensor_objects, tensor_basis, braiding=None, dual_object=None, dual_basis=None, symmetric=True):
        self.cat = cat
        self.unit = unit
        self._tobj = tensor_objects
        self._tbasis = tensor_basis
        self._braid = braiding
        self._dual_obj = dual_object
        self._dual_basis = dual_basis
        self.symmetric = symmetric
        self._cache: dict = {}

    def tensor_objects(self, a: str, b: str) -> str:
        if callable(self._tobj):
            return self._tobj(a, b)
        try:
            return self._tobj[(a, b)]
        except KeyError:
            raise WindowOverflow(f"tensor {a}⊗{b} is not tabulated") from None

    def tensor_objects_many(self, objs: Sequence[str]) -> str:
        out = self.unit
        for o in objs:
            out = self.tensor_objects(out, o)
        return out

    def _basis_table(self, a, b, c, d):
        key = (a, b, c, d)
        t = self._cache.get(key)
        if t is None:
            if callable(self._tbasis):
                t = [[tuple(self._tbasis(a, b, i, c, d, j)) for j in range(self.cat.hom_dim(c, d))] for i in range(self.cat.hom_dim(a, b))]
            else:
                t = self._tbasis.get(key)
                if t is None:
                    raise WindowOverflow(f"tensor of hom({a},{b}) and hom({c},{d}) is not tabulated")
            self._cache[key] = t
        return t

    def tensor(self, f: Morphism, g: Morphism) -> Morphism:
        """The morphism ``f ⊗ g``."""
        src = self.tensor_objects(f.source, g.source)
        tgt = self.tensor_objects(f.target, g.target)
        dim = self.cat.hom_dim(src, tgt)
        acc = [0] * dim
        if dim and any(f.coords) and any(g.coords):
            t = self._basis_table(f.source, f.target, g.source, g.target)
            for i, fi in enumerate(f.coords):
                if not fi:
                    continue
                for j, gj in enumerate(g.coords):
                    if not gj:
                        continue
                    s = fi * gj
                    for k, v in enumerate(t[i][j]):
                        if v:
                            acc[k] += s * v
        F = self.cat.field
        return Morphism(src, tgt, tuple(F(x) for x in acc))

    def braiding(self, a: str, b: str) -> Morphism | None:
        return None if self._braid is None else self._braid(a, b)

    @property
    def has_braiding(self) -> bool:
        return self._braid is not None

    @property
    def has_duals(self) -> bool:
        return self._dual_obj is not None and self._dual_basis is not None

    def dual_object(self, a: str) -> str:
        if self._dual_obj is None:
            raise NotImplementedError("no duals on this monoidal structure")
        return self._dual_obj(a)

    def dual(self, f: Morphism) -> Morphism:
        """The transpose ``f*: B* -> A*`` of ``f: A -> B``."""
        if not self.has_duals:
            raise NotImplementedError("no duals on this monoidal structure")
        a, b = f.source, f.target
        src, tgt = self.dual_object(b), self.dual_object(a)
        acc = [0] * self.cat.hom_dim(src, tgt)
        for i, c in enumerate(f.coords):
            if c:
                for k, v in enumerate(self._dual_basis(a, b, i)):
                    if v:
                        acc[k] += c * v
        F = self.cat.field
        return Morphism(src, tgt, tuple(F(x) for x in acc))

    def validate(self, objects: Sequence[str] | None = None) -> ValidationReport:
        """Check unit, associativity on objects and the interchange law.

        Only object tuples whose tensor products stay inside the category are
        checked; skipped tuples are not violations.
        """
        c = self.cat
        objs = list(objects or c.objects)
        viol, checked = [], 0

        def tobj(*xs):
            try:
                return self.tensor_objects_many(xs)
            except WindowOverflow:
                return None

        for a in objs:
            if tobj(a) != a or tobj(a, self.unit) != a:
                viol.append(f"unit: {a}")
        for a, b, d in itertools.product(objs, repeat=3):
            try:
                left = self.tensor_objects(self.tensor_objects(a, b), d)
                right = self.tensor_objects(a, self.tensor_objects(b, d))
            except WindowOverflow:
                continue
            checked += 1
            if left != right:
                viol.append(f"associativity on objects: {a},{b},{d}")
        # interchange: (g⊗g')∘(f⊗f') = (g∘f)⊗(g'∘f')
        for a, b, cc in itertools.product(objs, repeat=3):
            for a2, b2, c2 in itertools.product(objs, repeat=3):
                if not (c.hom_dim(a, b) and c.hom_dim(b, cc) and c.hom_dim(a2, b2) and c.hom_dim(b2, c2)):
                    continue
                try:
                    for f in c.basis(a, b):
                        for g in c.basis(b, cc):
                            for f2 in c.basis(a2, b2):
                                for g2 in c.basis(b2, c2):
                                    checked += 1
                                    lhs = c.compose(self.tensor(g, g2), self.tensor(f, f2))
                                    rhs = self.tensor(c.compose(g, f), c.compose(g2, f2))
                                    if lhs.coords != rhs.coords:
                                        viol.append(f"interchange: {a}->{b}->{cc} with {a2}->{b2}->{c2}")
                                        raise StopIteration
                except (WindowOverflow, StopIteration):
                    continue
        if self._braid is not None:
            for a, b in itertools.product(objs, repeat=2):
                for a2, b2 in itertools.product(objs, repeat=2):
                    if not (c.hom_dim(a, a2) and c.hom_dim(b, b2)):
                        continue
                    try:
                        for f in c.basis(a, a2):
                            for g in c.basis(b, b2):
                                checked += 1
                                lhs = c.compose(self.braiding(a2, b2), self.tensor(f, g))
                                rhs = c.compose(self.tensor(g, f), self.braiding(a, b))
                                if lhs.coords != rhs.coords:
                                    viol.append(f"braiding naturality: {a}->{a2}, {b}->{b2}")
                    except WindowOverflow:
                        continue
        return ValidationReport(not viol, viol, checked)

    def to_json(self) -> dict:
        c = self.cat
        F = c.field
        objs = {}
        for a, b in itertools.product(c.objects, repeat=2):
            try:
                objs[f"{a}|{b}"] = self.tensor_objects(a, b)
            except WindowOverflow:
                pass
        morphs = []
        for a, b, cc, d in itertools.product(c.objects, repeat=4):
            if not (c.hom_dim(a, b) and c.hom_dim(cc, d)):
                continue
            try:
                t = self._basis_table(a, b, cc, d)
            except WindowOverflow:
                continue
            morphs.append({"pair": [f"{a}|{b}", f"{cc}|{d}"], "table": [[[F.scalar_to_json(x) for x in v] for v in row] for row in t]})
        doc = {"unit": self.unit, "objects": objs, "morphisms": morphs, "symmetric": self.symmetric}
        if self._braid is not None:
            braid = {}
            for a, b in itertools.product(c.objects, repeat=2):
                try:
                    braid[f"{a}|{b}"] = [F.scalar_to_json(x) for x in self.braiding(a, b).coords]
                except WindowOverflow:
                    pass
            doc["braiding"] = braid
        return doc

    @classmethod
    def from_json(cls, cat: FinLinearCategory, doc: dict) -> "MonoidalStructure":
        F = cat.field
        try:
            objs = {_split_pair(k): v for k, v in doc["objects"].items()}
            tables = {}
            for entry in doc.get("morphisms", []):
                a, b = _split_pair(entry["pair"][0])
                cc, d = _split_pair(entry["pair"][1])
                tables[(a, b, cc, d)] = [[tuple(F.scalar_from_json(x) for x in v) for v in row] for row in entry["table"]]
            braid = None
            if "braiding" in doc:
                bdata = {_split_pair(k): tuple(F.scalar_from_json(x) for x in v) for k, v in doc["braiding"].items()}

                def braid(a, b, _bd=bdata):
                    if (a, b) not in _bd:
                        raise WindowOverflow(f"braiding {a},{b} not tabulated")
                    return Morphism(objs[(a, b)], objs[(b, a)], _bd[(a, b)])

            return cls(cat, doc["unit"], objs, tables, braiding=braid, symmetric=bool(doc.get("symmetric", True)))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed monoidal structure: {exc}") from exc


def algebra_monoidal(cat: FinLinearCategory) -> MonoidalStructure:
    """Monoidal structure of a commutative algebra viewed as a one-object category.

    ``f ⊗ g = f·g``, the braiding is the identity and every morphism is
    self-dual.
    """
    alg = cat.meta.get("algebra")
    if alg is None:
        raise ValidationError("category was not built from an algebra")
    mult = alg["mult"]
    n = len(mult)
    for i in range(n):
        for j in range(n):
            if mult[i][j] != mult[j][i]:
                raise ValidationError("algebra is not commutative")
    one = cat.identity("*")

    def dual_basis(a, b, i):
        return cat.basis("*", "*")[i].coords

    mon = MonoidalStructure(
        cat,
        unit="*",
        tensor_objects={("*", "*"): "*"},
        tensor_basis={("*", "*", "*", "*"): mult},
        braiding=lambda a, b: one,
        dual_object=lambda a: "*",
        dual_basis=dual_basis,
        symmetric=True,
    )
    cat.monoidal = mon
    return mon


# ---------------------------------------------------------------------------
# Tensor product of categories
# ---------------------------------------------------------------------------


def pair_label(x: str, y: str) -> str:
    return f"{x}&{y}"


def tensor_category(a: FinLinearCategory, b: FinLinearCategory, name: str = "") -> FinLinearCategory:
    """The category a⊗b: pairs of objects, hom spaces are tensor products.

    The basis of hom((X,Y),(X',Y')) is ordered with the a-index major.
    """
    if a.field != b.field:
        raise FieldMismatch("tensorCategory needs categories over the same field")
    F = a.field
    pairs = [(x, y) for x in a.objects for y in b.objects]
    labels = [pair_label(x, y) for x, y in pairs]
    if len(set(labels)) != len(labels):
        raise ValidationError("object labels collide in the tensor category")
    of = dict(zip(labels, pairs))
    dims, blabels, idents = {}, {}, {}
    for s in labels:
        for t in labels:
            (x, y), (x2, y2) = of[s], of[t]
            dims[(s, t)] = a.hom_dim(x, x2) * b.hom_dim(y, y2)
            blabels[(s, t)] = tuple(f"{la}&{lb}" for la in a.basis_labels(x, x2) for lb in b.basis_labels(y, y2))
        (x, y) = of[s]
        idents[s] = [F(p * q) for p in a.identity(x).coords for q in b.identity(y).coords]

    def rule(s, t, u, i, j):
        (x, y), (x2, y2), (x3, y3) = of[s], of[t], of[u]
        db_g, db_f = b.hom_dim(y2, y3), b.hom_dim(y, y2)
        gi_a, gi_b = divmod(i, db_g)
        fj_a, fj_b = divmod(j, db_f)
        ca = a.table(x, x2, x3)[gi_a][fj_a]
        cb = b.table(y, y2, y3)[gi_b][fj_b]
        return tuple(F(p * q) for p in ca for q in cb)

    cat = FinLinearCategory(F, labels, dims, idents, rule=rule, basis_labels=blabels, name=name or f"{a.name}⊗{b.name}")
    cat.meta["tensor"] = {"factors": (a, b), "pairs": of}
    return cat


def tensor_morphism(c: FinLinearCategory, f: Morphism, g: Morphism) -> Morphism:
    """The morphism f⊗g of a tensor category, for f in the first and g in the second factor."""
    F = c.field
    return Morphism(pair_label(f.source, g.source), pair_label(f.target, g.target), tuple(F(p * q) for p in f.coords for q in g.coords))

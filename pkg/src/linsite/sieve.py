"""Sieves: subfunctors of a representable hom(-, A).

A sieve stores, for every object B, a canonical basis of R(B) ⊆ hom(B, A):
the nonzero rows of the reduced row echelon form of any spanning set. The
transpose of that basis is the reduced column echelon matrix, so equality of
sieves is equality of the stored tuples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ApexMismatch, TargetMismatch, TooLarge, Unsupported
from .exactla import Matrix, mat_vec, nullspace, rank_rows, rref, span_basis, span_intersection
from .lincat import FinLinearCategory, Morphism


class Sieve:
    """A sieve on ``apex`` given by canonical span bases per object."""

    __slots__ = ("cat", "apex", "spans", "_key")

    def __init__(self, cat: FinLinearCategory, apex: str, spans: dict):
        self.cat = cat
        self.apex = apex
        self.spans = {b: tuple(spans.get(b, ())) for b in cat.objects}
        self._key = (apex,) + tuple(self.spans[b] for b in cat.objects)

    # -- basic -------------------------------------------------------------
    def dim(self, b: str) -> int:
        return len(self.spans[b])

    def total_dim(self) -> int:
        return sum(len(v) for v in self.spans.values())

    def span_matrix(self, b: str) -> Matrix:
        """Columns spanning R(b), in reduced column echelon form."""
        d = self.cat.hom_dim(b, self.apex)
        return Matrix.from_columns(self.cat.field, self.spans[b], d)

    def key(self) -> tuple:
        return self._key

    def __eq__(self, other):
        return isinstance(other, Sieve) and self.cat is other.cat and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"Sieve({self.apex}, dims={ {b: len(v) for b, v in self.spans.items() if v} })"

    def contains_morphism(self, f: Morphism) -> bool:
        if f.target != self.apex:
            raise TargetMismatch("morphism does not end at the apex")
        basis = self.spans[f.source]
        if not any(f.coords):
            return True
        if not basis:
            return False
        d = self.cat.hom_dim(f.source, self.apex)
        return rank_rows(self.cat.field, list(basis) + [f.coords], d) == len(basis)

    def is_maximal(self) -> bool:
        return all(len(self.spans[b]) == self.cat.hom_dim(b, self.apex) for b in self.cat.objects)

    def is_zero(self) -> bool:
        return self.total_dim() == 0

    def generators(self) -> list[Morphism]:
        """A generating set: greedy over objects in order, basis vectors not yet reached."""
        c, F = self.cat, self.cat.field
        gens: list[Morphism] = []
        reached = {b: () for b in c.objects}
        for b in c.objects:
            d = c.hom_dim(b, self.apex)
            for v in self.spans[b]:
                if reached[b] and rank_rows(F, list(reached[b]) + [v], d) == len(reached[b]):
                    continue
                g = Morphism(b, self.apex, v)
                gens.append(g)
                cyc = _cyclic_spans(c, g)
                for o in c.objects:
                    if cyc[o]:
                        reached[o] = span_basis(F, list(reached[o]) + list(cyc[o]), c.hom_dim(o, self.apex))
        return gens

    def is_closed(self) -> bool:
        """Independent re-check of precomposition closure on basis morphisms."""
        c, F = self.cat, self.cat.field
        for b in c.objects:
            for v in self.spans[b]:
                f = Morphism(b, self.apex, v)
                for cc in c.objects:
                    for g in c.basis(cc, b):
                        comp = c.compose(f, g)
                        basis = self.spans[cc]
                        if any(comp.coords) and rank_rows(F, list(basis) + [comp.coords], c.hom_dim(cc, self.apex)) != len(basis):
                            return False
        return True

    def to_json(self) -> dict:
        F = self.cat.field
        return {b: [[F.scalar_to_json(x) for x in v] for v in self.spans[b]] for b in self.cat.objects if self.spans[b]}

    @classmethod
    def from_json(cls, cat: FinLinearCategory, apex: str, doc: dict, close: bool = True) -> "Sieve":
        F = cat.field
        vecs = {}
        for b, cols in doc.items():
            if not cat.has_object(b):
                raise KeyError(b)
            d = cat.hom_dim(b, apex)
            vs = [tuple(F.scalar_from_json(x) for x in col) for col in cols]
            if any(len(v) != d for v in vs):
                raise ValueError(f"sieve vector for {b} has the wrong length")
            vecs[b] = vs
        gens = [Morphism(b, apex, v) for b, vs in vecs.items() for v in vs]
        s = generated_sieve(cat, gens, apex=apex)
        if not close:
            return cls(cat, apex, {b: span_basis(F, vs, cat.hom_dim(b, apex)) for b, vs in vecs.items()})
        return s


def _cyclic_spans(c: FinLinearCategory, v: Morphism) -> dict:
    """Pointwise spanning vectors of the sieve generated by one morphism."""
    out = {}
    for b in c.objects:
        if c.hom_dim(b, v.source) and c.hom_dim(b, v.target):
            m = c.postcompose_matrix(v, b)
            cols = [tuple(r[j] for r in m) for j in range(c.hom_dim(b, v.source))]
            out[b] = [col for col in cols if any(col)]
        else:
            out[b] = []
    return out


def maximal_sieve(c: FinLinearCategory, x: str) -> Sieve:
    F = c.field
    spans = {}
    for b in c.objects:
        d = c.hom_dim(b, x)
        spans[b] = tuple(tuple(F.one if i == j else F.zero for i in range(d)) for j in range(d))
    return Sieve(c, x, spans)


def zero_sieve(c: FinLinearCategory, x: str) -> Sieve:
    return Sieve(c, x, {})


def generated_sieve(c: FinLinearCategory, morphisms: Iterable[Morphism], apex: str | None = None) -> Sieve:
    """The sieve R_v generated by morphisms with a common target.

    Raises:
        TargetMismatch: targets differ (or differ from ``apex``).
    """
    morphisms = list(morphisms)
    if apex is None:
        if not morphisms:
            raise TargetMismatch("apex required for an empty generating set")
        apex = morphisms[0].target
    for m in morphisms:
        if m.target != apex:
            raise TargetMismatch(f"morphism ends at {m.target}, expected {apex}")
    F = c.field
    vecs = {b: [] for b in c.objects}
    for m in morphisms:
        if not any(m.coords):
            continue
        for b, cols in _cyclic_spans(c, m).items():
            vecs[b].extend(cols)
    return Sieve(c, apex, {b: span_basis(F, vs, c.hom_dim(b, apex)) for b, vs in vecs.items()})


def pullback_sieve(r: Sieve, f: Morphism) -> Sieve:
    """``f^{-1}R``: morphisms g with ``f ∘ g ∈ R``."""
    if f.target != r.apex:
        raise TargetMismatch(f"pullback along {f.source}->{f.target} of a sieve on {r.apex}")
    c, F = r.cat, r.cat.field
    spans = {}
    for cc in c.objects:
        dsrc = c.hom_dim(cc, f.source)
        if dsrc == 0:
            continue
        dtgt = c.hom_dim(cc, r.apex)
        if dtgt == 0 or len(r.spans[cc]) == dtgt:
            spans[cc] = tuple(tuple(F.one if i == j else F.zero for i in range(dsrc)) for j in range(dsrc))
            continue
        m = c.postcompose_matrix(f, cc)  # dtgt x dsrc
        # equations whose common kernel is R(cc)
        eqs = nullspace(F, list(r.spans[cc]), dtgt) if r.spans[cc] else [
            tuple(F.one if i == j else F.zero for i in range(dtgt)) for j in range(dtgt)
        ]
        rows = [mat_vec(F, [tuple(m[k][j] for k in range(dtgt)) for j in range(dsrc)], e) for e in eqs]
        spans[cc] = span_basis(F, nullspace(F, rows, dsrc), dsrc)
    return Sieve(c, f.source, spans)


def pushforward_sieve(r: Sieve, q: Morphism) -> Sieve:
    """The sieve ``{q ∘ g : g ∈ R}`` on the target of q (R a sieve on its source)."""
    if q.source != r.apex:
        raise TargetMismatch("pushforward needs a sieve on the source of q")
    c, F = r.cat, r.cat.field
    spans = {}
    for b in c.objects:
        if not r.spans[b]:
            continue
        d = c.hom_dim(b, q.target)
        if d == 0:
            continue
        m = c.postcompose_matrix(q, b)
        spans[b] = span_basis(F, [mat_vec(F, m, v) for v in r.spans[b]], d)
    return Sieve(c, q.target, spans)


def sieve_sum(sieves: Sequence[Sieve], apex: str | None = None, cat: FinLinearCategory | None = None) -> Sieve:
    """Smallest sieve containing all inputs (pointwise span sum)."""
    if not sieves:
        return zero_sieve(cat, apex)
    c, F = sieves[0].cat, sieves[0].cat.field
    x = sieves[0].apex
    for s in sieves:
        if s.apex != x:
            raise ApexMismatch("sieves on different objects")
    return Sieve(c, x, {b: span_basis(F, [v for s in sieves for v in s.spans[b]], c.hom_dim(b, x)) for b in c.objects})


def sieve_intersection(r: Sieve, s: Sieve) -> Sieve:
    if r.apex != s.apex:
        raise ApexMismatch("sieves on different objects")
    c, F = r.cat, r.cat.field
    return Sieve(c, r.apex, {b: span_intersection(F, r.spans[b], s.spans[b], c.hom_dim(b, r.apex)) for b in c.objects})


def sieve_contains(r: Sieve, s: Sieve) -> bool:
    """Whether ``s ⊆ r``."""
    if r.apex != s.apex:
        raise ApexMismatch("sieves on different objects")
    c, F = r.cat, r.cat.field
    for b in c.objects:
        sb = s.spans[b]
        if not sb:
            continue
        rb = r.spans[b]
        if len(sb) > len(rb):
            return False
        if rank_rows(F, list(rb) + list(sb), c.hom_dim(b, r.apex)) != len(rb):
            return False
    return True


@dataclass(frozen=True)
class SieveOps:
    intersection: Sieve
    contains: bool
    equals: bool


def sieve_ops(r: Sieve, s: Sieve) -> SieveOps:
    """Intersection, containment ``s ⊆ r`` and equality."""
    return SieveOps(sieve_intersection(r, s), sieve_contains(r, s), r == s)


def _vectors(field, d: int, projective: bool = True):
    """Nonzero vectors of F_p^d, one per line when ``projective``."""
    elems = list(field.elements())
    for v in itertools.product(elems, repeat=d):
        if not any(v):
            continue
        if projective:
            lead = next(x for x in v if x)
            if lead != 1:
                continue
        yield tuple(v)


def enumerate_sieves(c: FinLinearCategory, x: str, cap: int = 10_000, vector_cap: int = 1 << 14) -> list[Sieve]:
    """All sieves on x, in canonical order (total dimension, then spans).

    Every sieve is a sum of cyclic sieves, so a closure search from the zero
    sieve that adds one cyclic sieve at a time reaches all of them.

    Raises:
        Unsupported: the field is not finite.
        TooLarge: more than ``cap`` sieves or too many vectors to scan.
    """
    F = c.field
    if not F.is_finite:
        raise Unsupported("sieve enumeration needs a finite field")
    total = sum(F.p ** c.hom_dim(b, x) for b in c.objects)
    if total > vector_cap:
        raise TooLarge(f"{total} vectors exceed the scan cap {vector_cap}")
    cyclic = {}
    for b in c.objects:
        for v in _vectors(F, c.hom_dim(b, x)):
            s = generated_sieve(c, [Morphism(b, x, v)], apex=x)
            cyclic[s.key()] = s
    cyc = sorted(cyclic.values(), key=lambda s: (s.total_dim(), s.key()))
    start = zero_sieve(c, x)
    seen = {start.key(): start}
    frontier = [start]
    while frontier:
        nxt = []
        for s in frontier:
            for z in cyc:
                if sieve_contains(s, z):
                    continue
                t = sieve_sum([s, z])
                if t.key() not in seen:
                    seen[t.key()] = t
                    nxt.append(t)
                    if len(seen) > cap:
                        raise TooLarge(f"more than {cap} sieves on {x}")
        frontier = nxt
    return sorted(seen.values(), key=lambda s: (s.total_dim(), s.key()))

"""Formal sequences, additive pretopologies and the closure ``top(S)``.

A formal sequence is ``⨿_γ Z_γ --p--> ⨿_β Y_β --q--> X`` with ``q ∘ p = 0``,
stored as finite lists. A pretopology is a list of such sequences; the
coverings of X are the sequences with target X, taken in construction order.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .errors import ValidationError
from .exactla import nullspace, rank_rows, span_basis
from .lincat import FinLinearCategory, Morphism
from .presheaf import (
    Presheaf,
    PresheafMap,
    apply_rows,
    cokernel,
    columns_of,
    homology,
    rank_of,
    yoneda_matrix_map,
)
from .sieve import (
    Sieve,
    generated_sieve,
    maximal_sieve,
    pullback_sieve,
    pushforward_sieve,
    sieve_contains,
    sieve_intersection,
    sieve_sum,
)
from .topology import Topology, axiom_check

VERIFIED, UNKNOWN, VIOLATED = "Verified", "Unknown", "Violated"


def _unit(F, n, j):
    return tuple(F.one if i == j else F.zero for i in range(n))


def _all_vectors(F, d):
    import itertools

    for v in itertools.product(list(F.elements()), repeat=d):
        if any(v):
            yield tuple(v)


# ---------------------------------------------------------------------------
# Formal sequences
# ---------------------------------------------------------------------------


class FormalSequence:
    """A formal sequence ``⨿Z --p--> ⨿Y --q--> X`` with vanishing composite.

    Args:
        cat: The category.
        target: X.
        middle: Objects Y_β.
        left: Objects Z_γ.
        q: Morphisms Y_β -> X, one per middle summand.
        p: ``p[γ][β]`` a Morphism Z_γ -> Y_β or None for zero.
        check: Verify ``q ∘ p = 0`` and all shapes.

    Raises:
        ValidationError: shapes disagree or the composite is nonzero.
    """

    def __init__(self, cat: FinLinearCategory, target: str, middle: Sequence[str], left: Sequence[str], q, p, check: bool = True):
        self.cat = cat
        self.target = target
        self.middle = tuple(middle)
        self.left = tuple(left)
        self.q = tuple(q)
        p = [list(row) for row in p]
        self.p = tuple(
            tuple(m if m is not None else cat.zero(z, y) for m, y in zip(row, self.middle)) for row, z in zip(p, self.left)
        )
        if check:
            self._check(p)
        self._yq = None
        self._yp = None

    def _check(self, raw_p):
        c = self.cat
        if self.target not in c.objects:
            raise ValidationError(f"unknown target {self.target}")
        if len(self.q) != len(self.middle):
            raise ValidationError("q must have one morphism per middle summand")
        if len(raw_p) != len(self.left) or any(len(r) != len(self.middle) for r in raw_p):
            raise ValidationError("p must be a |left| x |middle| matrix of morphisms")
        for y, m in zip(self.middle, self.q):
            if (m.source, m.target) != (y, self.target) or len(m.coords) != c.hom_dim(y, self.target):
                raise ValidationError(f"q component {m.source}->{m.target} does not match {y}->{self.target}")
        for z, row in zip(self.left, self.p):
            for y, m in zip(self.middle, row):
                if (m.source, m.target) != (z, y) or len(m.coords) != c.hom_dim(z, y):
                    raise ValidationError(f"p component {m.source}->{m.target} does not match {z}->{y}")
        F = c.field
        for z, row in zip(self.left, self.p):
            acc = [F.zero] * c.hom_dim(z, self.target)
            for qb, pb in zip(self.q, row):
                if pb.is_zero() or qb.is_zero():
                    continue
                comp = c.compose(qb, pb).coords
                acc = [F(a + b) for a, b in zip(acc, comp)]
            if any(acc):
                raise ValidationError(f"q ∘ p is nonzero on the left summand {z}")

    def image_sieve(self) -> Sieve:
        """R_q, the sieve generated by the components of q."""
        return generated_sieve(self.cat, self.q, apex=self.target)

    def yoneda_q(self) -> PresheafMap:
        if self._yq is None:
            self._yq = yoneda_matrix_map(self.cat, self.middle, [self.target], [[m] for m in self.q])
        return self._yq

    def yoneda_p(self) -> PresheafMap:
        if self._yp is None:
            self._yp = yoneda_matrix_map(self.cat, self.left, self.middle, self.p, tgt=self.yoneda_q().source)
        return self._yp

    def key(self) -> tuple:
        return (self.target, self.middle, self.left, tuple(m.coords for m in self.q), tuple(tuple(m.coords for m in r) for r in self.p))

    def __eq__(self, other):
        return isinstance(other, FormalSequence) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"FormalSequence({list(self.left)} -> {list(self.middle)} -> {self.target})"

    def to_json(self) -> dict:
        sj = self.cat.field.scalar_to_json
        return {
            "target": self.target,
            "middle": list(self.middle),
            "left": list(self.left),
            "q": [[sj(x) for x in m.coords] for m in self.q],
            "p": [[[sj(x) for x in m.coords] for m in row] for row in self.p],
        }

    @classmethod
    def from_json(cls, cat: FinLinearCategory, doc: dict) -> "FormalSequence":
        try:
            F = cat.field
            x = doc["target"]
            mid = list(doc.get("middle", []))
            left = list(doc.get("left", []))
            for o in [x] + mid + left:
                if o not in cat.objects:
                    raise ValidationError(f"unknown object {o!r}")
            q = [cat.morphism(y, x, [F.scalar_from_json(v) for v in co]) for y, co in zip(mid, doc.get("q", []))]
            praw = doc.get("p", [[[]] * len(mid) for _ in left])
            p = []
            for z, row in zip(left, praw):
                p.append([cat.morphism(z, y, [F.scalar_from_json(v) for v in co]) if co else cat.zero(z, y) for y, co in zip(mid, row)])
            if len(q) != len(mid) or len(p) != len(left):
                raise ValidationError("q/p sizes do not match middle/left")
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed sequence: {exc}") from exc
        return cls(cat, x, mid, left, q, p)


def identity_sequence(c: FinLinearCategory, x: str) -> FormalSequence:
    """``0 -> X --id--> X``."""
    return FormalSequence(c, x, [x], [], [c.identity(x)], [])


def gabriel_sequence(c: FinLinearCategory, xs: Sequence[Morphism], resolve_kernel: bool = False) -> FormalSequence:
    """The sequence s_x on a one-object commutative algebra.

    Middle summands are copies of the object with q_α = x_α. For α < β the
    left summand (α, β) maps to x_β in copy α and to -x_α in copy β. With
    ``resolve_kernel`` further left summands are added until the Yoneda
    sequence is exact at the middle, which places the sequence in ``pre'``
    of any topology covering its image.
    """
    if not xs:
        raise ValidationError("gabriel_sequence needs at least one element")
    x = xs[0].target
    for m in xs:
        if m.source != x or m.target != x:
            raise ValidationError("gabriel_sequence needs endomorphisms of a single object")
    k = len(xs)
    left, p = [], []
    for a in range(k):
        for b in range(a + 1, k):
            row = [None] * k
            row[a] = xs[b]
            row[b] = c.scale(-1, xs[a])
            left.append(x)
            p.append(row)
    seq = FormalSequence(c, x, [x] * k, left, list(xs), p)
    return resolve(seq) if resolve_kernel else seq


def resolve(seq: FormalSequence) -> FormalSequence:
    """Extend the left of ``seq`` so that the Yoneda sequence is exact at the middle."""
    c, F = seq.cat, seq.cat.field
    left, p = list(seq.left), [list(r) for r in seq.p]
    qm, pm = seq.yoneda_q(), seq.yoneda_p()
    for w in c.objects:
        mids = [c.hom_dim(w, y) for y in seq.middle]
        n = sum(mids)
        if n == 0:
            continue
        img = list(columns_of(pm.components[w], pm.source.dim(w))) if pm.source.dim(w) else []
        basis = list(span_basis(F, img, n)) if img else []
        for v in nullspace(F, list(qm.components[w]), n) if qm.target.dim(w) else [_unit(F, n, j) for j in range(n)]:
            if rank_rows(F, basis + [v], n) == len(basis):
                continue
            basis = list(span_basis(F, basis + [v], n))
            row, off = [], 0
            for y, d in zip(seq.middle, mids):
                row.append(Morphism(w, y, tuple(v[off:off + d])))
                off += d
            left.append(w)
            p.append(row)
    return FormalSequence(c, seq.target, seq.middle, left, seq.q, p)


def kernel_sequence(c: FinLinearCategory, gens: Sequence[Morphism], x: str) -> FormalSequence:
    """The sequence with q = ``gens`` and left side resolving the Yoneda kernel."""
    base = FormalSequence(c, x, [g.source for g in gens], [], list(gens), [])
    return resolve(base)


# ---------------------------------------------------------------------------
# Pretopologies
# ---------------------------------------------------------------------------


@dataclass
class PTReport:
    """Three-valued verdict of a pretopology axiom check."""

    axiom: str
    verdict: str
    failures: list = dc_field(default_factory=list)
    depth: int = 0
    exhausted: bool = False
    note: str = ""

    def to_json(self) -> dict:
        return {
            "axiom": self.axiom,
            "verdict": self.verdict,
            "failures": self.failures,
            "depth": self.depth,
            "exhausted": self.exhausted,
            "note": self.note,
        }


class Pretopology:
    """A finite list of formal sequences.

    Args:
        cat: The category.
        sequences: The sequences; coverings of X keep construction order.
        search_depth: Bound for composite-covering searches.
        name: Label for reports.
        structural: Optional precomputed verdicts ``{"PTa": PTReport, ...}``
            for families whose axioms hold by construction.
    """

    def __init__(self, cat: FinLinearCategory, sequences=(), search_depth: int = 4, name: str = "", structural=None):
        self.cat = cat
        self.sequences = list(sequences)
        for s in self.sequences:
            if s.cat is not cat:
                raise ValidationError("sequence lives on another category")
        self.search_depth = search_depth
        self.name = name
        self.structural = dict(structural or {})
        self.meta: dict = {}
        self._levels = None

    def coverings(self, x: str) -> list[FormalSequence]:
        return [s for s in self.sequences if s.target == x]

    def union(self, other: "Pretopology") -> "Pretopology":
        seen, seqs = set(), []
        for s in self.sequences + other.sequences:
            if s.key() not in seen:
                seen.add(s.key())
                seqs.append(s)
        return Pretopology(self.cat, seqs, max(self.search_depth, other.search_depth), name=f"{self.name}∪{other.name}")

    def to_json(self) -> dict:
        return {"sequences": [s.to_json() for s in self.sequences], "searchDepth": self.search_depth}

    @classmethod
    def from_json(cls, cat: FinLinearCategory, doc: dict) -> "Pretopology":
        try:
            seqs = [FormalSequence.from_json(cat, d) for d in doc["sequences"]]
            depth = int(doc.get("searchDepth", 4))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ValidationError(f"malformed pretopology: {exc}") from exc
        return cls(cat, seqs, depth)

    # -- composite coverings ------------------------------------------------
    def achievable(self, depth: int | None = None, cap: int = 4096):
        """Sieves generated by depth-i composites of coverings, per depth.

        Returns ``(levels, exhausted)`` where ``levels[i][X]`` is the list of
        distinct sieves R_r for r in Co^i_X (Co^0 = identities) and
        ``exhausted`` is True when the level sequence became periodic, so every
        composite sieve already appears in ``levels``.
        """
        depth = self.search_depth if depth is None else depth
        if self._levels is not None and (self._levels[1] or len(self._levels[0]) > depth):
            return self._levels
        c = self.cat
        levels = [{x: [maximal_sieve(c, x)] for x in c.objects}]
        sigs = [self._signature(levels[0])]
        exhausted = False
        for _ in range(depth):
            prev = levels[-1]
            nxt = {}
            overflow = False
            for x in c.objects:
                found = {}
                for s in self.coverings(x):
                    combos = [[]]
                    for y, qb in zip(s.middle, s.q):
                        opts = [pushforward_sieve(r, qb) for r in prev[y]]
                        combos = [cb + [o] for cb in combos for o in opts]
                        if len(combos) > cap:
                            overflow = True
                            break
                    if overflow:
                        break
                    for cb in combos:
                        r = sieve_sum(cb, apex=x, cat=c)
                        found[r.key()] = r
                if overflow:
                    break
                nxt[x] = sorted(found.values(), key=lambda r: (r.total_dim(), r.key()))
            if overflow:
                break
            sig = self._signature(nxt)
            levels.append(nxt)
            if sig in sigs:
                exhausted = True
                break
            sigs.append(sig)
        self._levels = (levels, exhausted)
        return self._levels

    @staticmethod
    def _signature(level) -> tuple:
        return tuple((x, frozenset(r.key() for r in rs)) for x, rs in sorted(level.items()))

    def find_witness(self, target: Sieve, depth: int | None = None):
        """Smallest depth i and a sieve R_r, r in Co^i, with ``R_r ⊆ target``."""
        levels, _ = self.achievable(depth)
        for i, lev in enumerate(levels):
            for r in lev[target.apex]:
                if sieve_contains(target, r):
                    return i, r
        return None


def check_pta(s: Pretopology, vector_cap: int = 1024) -> PTReport:
    """(PTa): each f: A -> X pulls a covering q back to something containing a covering.

    For a pair (q, A) the intersection of ``f^{-1}R_q`` over a basis of
    hom(A, X) is contained in ``f^{-1}R_q`` for every f, so a witness for the
    intersection serves all f at once. Otherwise individual f are tried
    (all of them over a small finite field).
    """
    if "PTa" in s.structural:
        return s.structural["PTa"]
    c = s.cat
    levels, exhausted = s.achievable()
    failures, unknown = [], False
    for seq in s.sequences:
        rq = seq.image_sieve()
        x = seq.target
        for a in c.objects:
            basis = c.basis(a, x)
            if not basis:
                continue
            common = None
            for f in basis:
                pb = pullback_sieve(rq, f)
                common = pb if common is None else sieve_intersection(common, pb)
            if s.find_witness(common) is not None:
                continue
            d = c.hom_dim(a, x)
            if not (c.field.is_finite and c.field.p ** d <= vector_cap):
                unknown = True
                failures.append({"target": x, "object": a, "reason": "no uniform witness; field too large to scan"})
                continue
            for v in _all_vectors(c.field, d):
                f = Morphism(a, x, v)
                if s.find_witness(pullback_sieve(rq, f)) is None:
                    failures.append({"target": x, "object": a, "morphism": [c.field.scalar_to_json(t) for t in v]})
                    if not exhausted:
                        unknown = True
                    break
    depth = len(levels) - 1
    if not failures:
        return PTReport("PTa", VERIFIED, [], depth, exhausted)
    return PTReport("PTa", UNKNOWN if unknown else VIOLATED, failures, depth, exhausted)


def _pb_sieve(c, a, fvecs, seq, pm) -> Sieve:
    """``{g: C -> A : f∘g ∈ im(p∘-)}`` intersected over the given f."""
    F = c.field
    spans = {}
    for cc in c.objects:
        da = c.hom_dim(cc, a)
        if da == 0:
            continue
        mids = [c.hom_dim(cc, y) for y in seq.middle]
        n = sum(mids)
        if n == 0:
            spans[cc] = tuple(_unit(F, da, j) for j in range(da))
            continue
        img = columns_of(pm.components[cc], pm.source.dim(cc)) if pm.source.dim(cc) else []
        img = list(span_basis(F, img, n)) if img else []
        eqs = nullspace(F, img, n) if img else [_unit(F, n, j) for j in range(n)]
        rows = []
        for fv in fvecs:
            rows.extend(_pb_rows(c, a, cc, fv, seq, eqs))
        spans[cc] = span_basis(F, nullspace(F, rows, da), da) if rows else tuple(_unit(F, da, j) for j in range(da))
    return Sieve(c, a, spans)


def _pb_rows(c, a, cc, fv, seq, eqs):
    """Equations on g ∈ hom(cc, a) expressing ``(f_β∘g)_β ∈ im``."""
    F = c.field
    da = c.hom_dim(cc, a)
    # matrix M: hom(cc,a) -> ⊕ hom(cc, y_β)
    cols = []
    for j in range(da):
        g = Morphism(cc, a, _unit(F, da, j))
        col = []
        off = 0
        for y in seq.middle:
            dy = c.hom_dim(a, y)
            fb = Morphism(a, y, tuple(fv[off:off + dy]))
            off += dy
            col.extend(c.compose(fb, g).coords if any(fb.coords) else (F.zero,) * c.hom_dim(cc, y))
        cols.append(col)
    out = []
    for e in eqs:
        out.append(tuple(F(sum(e[k] * col[k] for k in range(len(e)) if e[k] and col[k])) for col in cols))
    return out


def _middle_exact(seq: FormalSequence, w: str) -> bool:
    c, F = seq.cat, seq.cat.field
    qm, pm = seq.yoneda_q(), seq.yoneda_p()
    n = qm.source.dim(w)
    if n == 0:
        return True
    nullity = n - rank_of(F, qm.components[w], n) if qm.target.dim(w) else n
    img = rank_of(F, pm.components[w], pm.source.dim(w)) if pm.source.dim(w) else 0
    return nullity == img


def check_ptb(s: Pretopology, vector_cap: int = 1024) -> PTReport:
    """(PTb): every f with q∘f = 0 factors through p after refining by a covering.

    The strong form (PTb'), exactness of ``hom(A, -)`` on each sequence, is
    tested first; where it fails a witness for the sieve
    ``P_f = {g : f∘g ∈ im(p∘-)}`` is searched.
    """
    if "PTb" in s.structural:
        return s.structural["PTb"]
    c, F = s.cat, s.cat.field
    levels, exhausted = s.achievable()
    failures, unknown = [], False
    strong = True
    for seq in s.sequences:
        qm, pm = seq.yoneda_q(), seq.yoneda_p()
        for a in c.objects:
            if _middle_exact(seq, a):
                continue
            strong = False
            n = qm.source.dim(a)
            ker = nullspace(F, list(qm.components[a]), n) if qm.target.dim(a) else [_unit(F, n, j) for j in range(n)]
            if s.find_witness(_pb_sieve(c, a, ker, seq, pm)) is not None:
                continue
            if not (F.is_finite and F.p ** len(ker) <= vector_cap):
                unknown = True
                failures.append({"target": seq.target, "object": a, "reason": "no uniform witness; field too large to scan"})
                continue
            for coeffs in _all_vectors(F, len(ker)):
                fv = tuple(F(sum(cf * v[k] for cf, v in zip(coeffs, ker))) for k in range(n))
                if s.find_witness(_pb_sieve(c, a, [fv], seq, pm)) is None:
                    failures.append({"target": seq.target, "object": a, "morphism": [F.scalar_to_json(t) for t in fv]})
                    if not exhausted:
                        unknown = True
                    break
    depth = len(levels) - 1
    note = "PTb' holds" if strong else ""
    if not failures:
        return PTReport("PTb", VERIFIED, [], depth, exhausted, note)
    return PTReport("PTb", UNKNOWN if unknown else VIOLATED, failures, depth, exhausted, note)


# ---------------------------------------------------------------------------
# top(S)
# ---------------------------------------------------------------------------


@dataclass
class TopOfResult:
    topology: Topology
    warnings: list = dc_field(default_factory=list)
    pta: PTReport | None = None
    ptb: PTReport | None = None
    axioms: object = None
    iterations: int = 0

    def to_json(self) -> dict:
        return {
            "topology": self.topology.to_json(),
            "warnings": self.warnings,
            "PTa": self.pta.to_json() if self.pta else None,
            "PTb": self.ptb.to_json() if self.ptb else None,
            "axioms": self.axioms.to_json() if self.axioms else None,
            "iterations": self.iterations,
        }


def top_of(s: Pretopology, check: bool = True, axiom_candidates=None) -> TopOfResult:
    """The topology generated by a pretopology.

    The minimal sieve of top(S) on X is the intersection of R_r over all
    composite coverings r of X. It is computed as the greatest fixpoint of

        M(X) ↦ M(X) ∩ ⋂_{q ∈ Co_X} Σ_β q_β ∘ M(Y_β)

    starting from maximal sieves. Every iterate is a sieve R_r for some
    composite r, and the fixpoint lies below all of them, so the fixpoint is
    the minimal covering sieve. Termination follows from finite height.
    """
    c = s.cat
    m = {x: maximal_sieve(c, x) for x in c.objects}
    cov = {x: s.coverings(x) for x in c.objects}
    it = 0
    changed = True
    while changed:
        changed = False
        it += 1
        for x in c.objects:
            cur = m[x]
            for seq in cov[x]:
                pushed = sieve_sum([pushforward_sieve(m[y], qb) for y, qb in zip(seq.middle, seq.q)], apex=x, cat=c)
                cur = sieve_intersection(cur, pushed)
            if cur != m[x]:
                m[x] = cur
                changed = True
    t = Topology(c, m, name=f"top({s.name})" if s.name else "top")
    res = TopOfResult(t, iterations=it)
    if check:
        res.pta = check_pta(s)
        res.ptb = check_ptb(s)
        for rep in (res.pta, res.ptb):
            if rep.verdict != VERIFIED:
                res.warnings.append(f"{rep.axiom} {rep.verdict}: input may not be a pretopology")
        try:
            res.axioms = axiom_check(t, candidates=axiom_candidates)
        except Exception as exc:  # caps on enumeration
            res.warnings.append(f"axiom postcondition skipped: {exc}")
        else:
            if not res.axioms.ok:
                res.warnings.append("axiom postcondition failed")
            elif res.axioms.mode != "exhaustive":
                res.warnings.append(f"axioms {res.axioms.mode}")
    return res


# ---------------------------------------------------------------------------
# pre'(T), pre(T), pre_2(T)
# ---------------------------------------------------------------------------


def in_pre_prime(t: Topology, seq: FormalSequence) -> bool:
    """Yoneda sequence exact at the middle and image sieve covering."""
    if not all(_middle_exact(seq, w) for w in seq.cat.objects):
        return False
    return t.covers(seq.image_sieve())


def in_pre(t: Topology, seq: FormalSequence) -> bool:
    """``⊕𝚉Z -> ⊕𝚉Y -> 𝚉X -> 0`` exact in sheaves.

    Sheafification is exact, so this holds iff the sheafifications of the
    presheaf homology at the middle and of the cokernel vanish.
    """
    from .sheafify import sheafify_vanishes

    qm, pm = seq.yoneda_q(), seq.yoneda_p()
    h = homology(pm, qm)
    co, _ = cokernel(qm)
    return sheafify_vanishes(t, h) and sheafify_vanishes(t, co)


def pre_prime_generators(t: Topology) -> Pretopology:
    """A generating subset of pre'(T): one sequence per non-maximal minimal sieve.

    The right map lists generators of minSieve(X); the left map resolves the
    kernel of ``⊕𝚈V_α -> 𝚈X`` at every object.
    """
    c = t.cat
    seqs = []
    for x in c.objects:
        ms = t.min_sieve(x)
        if ms.is_maximal():
            continue
        seqs.append(kernel_sequence(c, t.generators(x), x))
    return Pretopology(c, seqs, name="pre'")


def two_bounded_candidates(c: FinLinearCategory, vector_cap: int = 256) -> list[FormalSequence]:
    """All sequences ``Z --p--> Y --q--> X`` with single objects over a small F_p.

    q ranges over nonzero morphisms Y -> X and p over all morphisms Z -> Y
    with q∘p = 0 (p = 0 stands for an empty left side). The sequence
    ``0 -> X`` with the zero object in the middle is included for every X.
    """
    F = c.field
    out = []
    for x in c.objects:
        out.append(FormalSequence(c, x, [], [], [], [], check=False))
        for y in c.objects:
            dq = c.hom_dim(y, x)
            if dq == 0 or F.p ** dq > vector_cap:
                continue
            for qv in _all_vectors(F, dq):
                q = Morphism(y, x, qv)
                out.append(FormalSequence(c, x, [y], [], [q], [], check=False))
                for z in c.objects:
                    dp = c.hom_dim(z, y)
                    if dp == 0 or F.p ** dp > vector_cap:
                        continue
                    pre = c.postcompose_matrix(q, z)
                    kern = nullspace(F, list(pre), dp) if pre else [_unit(F, dp, j) for j in range(dp)]
                    if not kern:
                        continue
                    for coeffs in _all_vectors(F, len(kern)):
                        pv = tuple(F(sum(cf * v[k] for cf, v in zip(coeffs, kern))) for k in range(dp))
                        out.append(FormalSequence(c, x, [y], [z], [q], [[Morphism(z, y, pv)]], check=False))
    return out


@dataclass
class PreTwoReport:
    ok: bool
    accepted: int
    candidates: int
    generated: Topology

    def to_json(self) -> dict:
        return {"ok": self.ok, "accepted": self.accepted, "candidates": self.candidates, "generated": self.generated.to_json()}


def pre_two(t: Topology, candidates: Sequence[FormalSequence]) -> PreTwoReport:
    """Bounded-generation certificate: candidates in pre(T) regenerate T."""
    acc = [s for s in candidates if in_pre(t, s)]
    gen = top_of(Pretopology(t.cat, acc), check=False).topology
    return PreTwoReport(gen == t, len(acc), len(candidates), gen)


# ---------------------------------------------------------------------------
# Sheaves via sequences
# ---------------------------------------------------------------------------


def sequence_is_exact_for(seq: FormalSequence, f: Presheaf) -> bool:
    """``0 -> F(X) -> ∏F(Y_β) -> ∏F(Z_γ)`` exact."""
    F = f.field
    dx = f.dim(seq.target)
    dys = [f.dim(y) for y in seq.middle]
    dzs = [f.dim(z) for z in seq.left]
    ny = sum(dys)
    # Φ: F(X) -> ⊕F(Y_β)
    phi = []
    for qb in seq.q:
        phi.extend(f.act_morphism(qb))
    rphi = rank_of(F, tuple(phi), dx) if dx and phi else 0
    if rphi != dx:
        return False
    # Ψ: ⊕F(Y_β) -> ⊕F(Z_γ)
    psi = []
    for z, dz, row in zip(seq.left, dzs, seq.p):
        if dz == 0:
            continue
        blocks = [f.act_morphism(pb) for pb in row]
        for r in range(dz):
            line = []
            for blk, dy in zip(blocks, dys):
                line.extend(blk[r] if dy else ())
            psi.append(tuple(line))
    rpsi = rank_of(F, tuple(psi), ny) if psi and ny else 0
    return ny - rpsi == rphi


def is_sheaf_via(s: Pretopology, f: Presheaf) -> bool:
    """Sheaf condition for every sequence of ``s``."""
    return all(sequence_is_exact_for(seq, f) for seq in s.sequences)


# ---------------------------------------------------------------------------
# Tensor categories
# ---------------------------------------------------------------------------


def tensor_side(s: Pretopology, cab: FinLinearCategory, side: str) -> Pretopology:
    """``S ⊗ id`` (side ``"left"``, S on the first factor) or ``id ⊗ S``.

    Every sequence of ``s`` is tensored with the identity of each object of the
    other factor.
    """
    from .lincat import pair_label, tensor_morphism

    a, b = cab.meta["tensor"]["factors"]
    other = b if side == "left" else a
    seqs = []
    for seq in s.sequences:
        for o in other.objects:
            ido = other.identity(o)
            if side == "left":
                lab = lambda u: pair_label(u, o)
                mor = lambda m: tensor_morphism(cab, m, ido)
            else:
                lab = lambda u: pair_label(o, u)
                mor = lambda m: tensor_morphism(cab, ido, m)
            seqs.append(
                FormalSequence(
                    cab,
                    lab(seq.target),
                    [lab(y) for y in seq.middle],
                    [lab(z) for z in seq.left],
                    [mor(m) for m in seq.q],
                    [[mor(m) for m in row] for row in seq.p],
                )
            )
    return Pretopology(cab, seqs, s.search_depth, name=f"{s.name}⊗id" if side == "left" else f"id⊗{s.name}")

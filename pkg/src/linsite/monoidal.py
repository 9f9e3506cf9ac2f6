"""Unit morphisms, σ_u sequences, 𝒯_𝒱 topologies and the graded ℙⁿ pipeline.

A (formal) unit morphism is a list ``u = [u_i: U_i -> 𝟙]``. Its sequence is

    σ_u:  ⨿_{i,j} U_i⊗U_j --(u⊗U - U⊗u)--> ⨿_i U_i --u--> 𝟙

where the (i, j) summand maps by ``u_i ⊗ id`` to copy j and by
``-(id ⊗ u_j)`` to copy i.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .errors import ValidationError, WindowOverflow
from .exactla import QQ, nullspace, rank_rows, span_basis
from .lincat import FinLinearCategory, Morphism, graded_degree, graded_label, graded_window, polynomial_morphism
from .presheaf import rank_of
from .pretop import FormalSequence, PTReport, Pretopology, VERIFIED, check_pta, check_ptb, top_of
from .sheafify import factor_through, kernel_of_z, relations, sh_hom
from .sieve import generated_sieve, sieve_contains
from .topology import Topology


def _mon(c: FinLinearCategory):
    if c.monoidal is None:
        raise ValidationError("category has no monoidal structure")
    return c.monoidal


def _unit(F, n, j):
    return tuple(F.one if i == j else F.zero for i in range(n))


def _check_unit_morphism(c, u):
    mon = _mon(c)
    if not u:
        raise ValidationError("a unit morphism needs at least one component")
    for m in u:
        if m.target != mon.unit:
            raise ValidationError(f"component {m.source}->{m.target} does not end at the unit {mon.unit}")


# ---------------------------------------------------------------------------
# σ_u
# ---------------------------------------------------------------------------


def sigma_sequence(c: FinLinearCategory, u: Sequence[Morphism]) -> FormalSequence:
    """The sequence σ_u with left summands U_i⊗U_j in lexicographic order.

    Raises:
        WindowOverflow: some U_i⊗U_j is outside the category.
    """
    _check_unit_morphism(c, u)
    mon = _mon(c)
    k = len(u)
    left, p = [], []
    for i in range(k):
        for j in range(k):
            ui, uj = u[i], u[j]
            left.append(mon.tensor_objects(ui.source, uj.source))
            row = [None] * k
            a = mon.tensor(ui, c.identity(uj.source))
            b = mon.tensor(c.identity(ui.source), uj)
            row[j] = a
            row[i] = c.add(row[i], c.scale(-1, b)) if row[i] is not None else c.scale(-1, b)
            p.append(row)
    return FormalSequence(c, mon.unit, [m.source for m in u], left, list(u), p)


def tensor_sequence(seq: FormalSequence, x: str) -> FormalSequence:
    """``seq ⊗ X``: every object and morphism tensored with X on the right.

    Raises:
        WindowOverflow: a tensored object leaves the category.
    """
    c = seq.cat
    mon = _mon(c)
    idx = c.identity(x)
    t = lambda o: mon.tensor_objects(o, x)
    return FormalSequence(
        c,
        t(seq.target),
        [t(y) for y in seq.middle],
        [t(z) for z in seq.left],
        [mon.tensor(m, idx) for m in seq.q],
        [[mon.tensor(m, idx) for m in row] for row in seq.p],
    )


# ---------------------------------------------------------------------------
# Classification of unit morphisms
# ---------------------------------------------------------------------------


@dataclass
class UnitMorphismClass:
    """``classification`` is one of Zero, InU, InUep, InUex."""

    u: list
    classification: str
    window: object = None
    witness: dict | None = None

    def to_json(self, c: FinLinearCategory) -> dict:
        sj = c.field.scalar_to_json
        return {
            "u": [{"source": m.source, "target": m.target, "coords": [sj(x) for x in m.coords]} for m in self.u],
            "classification": self.classification,
            "window": self.window,
            "witness": self.witness,
        }


def _precompose_stack(c, gens, a):
    """Rows of ``g ↦ (g ∘ gens_i)_i`` from hom(T, a) to ⊕ hom(S_i, a)."""
    rows = []
    for m in gens:
        rows.extend(c.precompose_matrix(m, a))
    return rows


def _sigma_hom_exact(c, seq: FormalSequence, a: str):
    """(injective, exact at the middle) for ``hom(seq, A)``."""
    F = c.field
    dx = c.hom_dim(seq.target, a)
    q_rows = _precompose_stack(c, seq.q, a)  # hom(X,a) -> ⊕hom(Y_i,a)
    inj = (rank_of(F, tuple(q_rows), dx) if q_rows and dx else 0) == dx
    dys = [c.hom_dim(y, a) for y in seq.middle]
    n = sum(dys)
    if n == 0:
        return inj, True
    prow = []
    for z, row in zip(seq.left, seq.p):
        dz = c.hom_dim(z, a)
        if dz == 0:
            continue
        blocks = [c.precompose_matrix(pb, a) if dy else None for pb, dy in zip(row, dys)]
        for r in range(dz):
            line = []
            for blk, dy in zip(blocks, dys):
                line.extend(blk[r] if blk is not None else ())
            prow.append(line)
    nullity = n - (rank_rows(F, prow, n) if prow else 0)
    img = rank_of(F, tuple(q_rows), dx) if q_rows and dx else 0
    return inj, nullity == img


def _window(c):
    g = c.meta.get("graded")
    return [g["lo"], g["hi"]] if g else None


def classify_u(c: FinLinearCategory, u: Sequence[Morphism]) -> UnitMorphismClass:
    """Zero, InU, InUep (−∘u injective on hom(𝟙, A)) or InUex (hom(σ_u, A) exact).

    All objects A of the (window) category are tested.

    Raises:
        WindowOverflow: σ_u needs objects outside the window.
    """
    u = list(u)
    _check_unit_morphism(c, u)
    if all(m.is_zero() for m in u):
        return UnitMorphismClass(u, "Zero", _window(c))
    seq = sigma_sequence(c, u)
    ep, ex = True, True
    witness = None
    for a in c.objects:
        inj, mid = _sigma_hom_exact(c, seq, a)
        if not inj:
            ep = False
            witness = {"object": a, "property": "epi"}
            break
        if not mid and ex:
            ex = False
            witness = {"object": a, "property": "exactness"}
    cls = "InUex" if ep and ex else ("InUep" if ep else "InU")
    return UnitMorphismClass(u, cls, _window(c), witness)


def strict_epi(c: FinLinearCategory, u: Sequence[Morphism]) -> bool:
    """Epimorphism such that every f killing the kernel of u factors through u.

    The kernel is ``{k: W -> ⨿U_i : u∘k = 0}`` over all objects W; f
    "kills" it when ``f∘k = 0`` for all such k.
    """
    u = list(u)
    _check_unit_morphism(c, u)
    F = c.field
    unit = _mon(c).unit
    rels = relations(c, u, unit)
    for a in c.objects:
        dx = c.hom_dim(unit, a)
        q_rows = _precompose_stack(c, u, a)
        img = rank_of(F, tuple(q_rows), dx) if q_rows and dx else 0
        if img != dx:
            return False
        dys = [c.hom_dim(m.source, a) for m in u]
        n = sum(dys)
        if n == 0:
            continue
        eqs = []
        for w, ks in rels:
            dw = c.hom_dim(w, a)
            if dw == 0:
                continue
            blocks = [c.precompose_matrix(k, a) if dy else None for k, dy in zip(ks, dys)]
            for r in range(dw):
                line = []
                for blk, dy in zip(blocks, dys):
                    line.extend(blk[r] if blk is not None else ())
                eqs.append(line)
        killing = n - (rank_rows(F, eqs, n) if eqs else 0)
        if killing != img:
            return False
    return True


# ---------------------------------------------------------------------------
# S_𝒱 and 𝒯_𝒱
# ---------------------------------------------------------------------------


def tv_pretopology(c: FinLinearCategory, vs: Sequence[Sequence[Morphism]], name: str = "S_V", check: bool = True) -> Pretopology:
    """The family ``σ_u ⊗ X`` over u in ``vs`` and objects X.

    Objects where a tensor leaves the window are skipped and listed in
    ``meta["clipped"]``. Axiom verdicts are attached in ``meta``.
    """
    seqs, clipped = [], []
    sig = []
    for u in vs:
        u = list(u)
        if all(m.is_zero() for m in u):
            raise ValidationError("S_V needs nonzero unit morphisms")
        try:
            sig.append(sigma_sequence(c, u))
        except WindowOverflow:
            sig.append(None)
    for x in c.objects:
        for k, s in enumerate(sig):
            if s is None:
                clipped.append({"object": x, "u": k})
                continue
            try:
                seqs.append(tensor_sequence(s, x))
            except WindowOverflow:
                clipped.append({"object": x, "u": k})
    pt = Pretopology(c, seqs, name=name)
    pt.meta["clipped"] = clipped
    if check:
        pta, ptb = check_pta(pt), check_ptb(pt)
        pt.structural = {"PTa": pta, "PTb": ptb}
        pt.meta["PTa"], pt.meta["PTb"] = pta.verdict, ptb.verdict
    return pt


@dataclass
class MonoidalReport:
    ok: bool
    witness: dict | None = None
    clipped: list = dc_field(default_factory=list)
    checked: int = 0

    def to_json(self) -> dict:
        return {"ok": self.ok, "witness": self.witness, "clipped": len(self.clipped), "checked": self.checked}


def monoidal_check(t: Topology, c: FinLinearCategory | None = None, pretopology: Pretopology | None = None) -> MonoidalReport:
    """For every X and A, ``{r ⊗ A : r generator of minSieve(X)}`` covers X⊗A.

    With a braiding this one-sided test suffices; otherwise ``A ⊗ r`` is
    tested too. A pair is clipped (reported, not failed) when some object B
    with ``minSieve(X)(B) ≠ 0`` has ``B ⊗ A`` outside the window, since the
    tensored sieve is then truncated.

    If ``pretopology`` generates t, its coverings q are tested instead of
    minimal sieves: ``R_q ⊗ A`` covering for all q suffices, because
    tensoring a composite covering gives a composite of tensored coverings.
    """
    c = c or t.cat
    mon = _mon(c)
    if pretopology is not None:
        return _monoidal_via_coverings(t, c, pretopology)
    clipped, checked = [], 0
    for x in c.objects:
        gens = t.generators(x)
        support = [b for b in c.objects if t.min_sieve(x).spans[b]]
        for a in c.objects:
            try:
                for b in support:
                    mon.tensor_objects(b, a)
                    if not mon.has_braiding:
                        mon.tensor_objects(a, b)
            except WindowOverflow:
                clipped.append({"object": x, "with": a})
                continue
            ida = c.identity(a)
            sides = [lambda r: mon.tensor(r, ida)]
            if not mon.has_braiding:
                sides.append(lambda r: mon.tensor(ida, r))
            for k, side in enumerate(sides):
                try:
                    apex = mon.tensor_objects(x, a) if k == 0 else mon.tensor_objects(a, x)
                    ms = [side(r) for r in gens]
                except WindowOverflow:
                    clipped.append({"object": x, "with": a})
                    continue
                checked += 1
                s = generated_sieve(c, ms, apex=apex)
                if not t.covers(s):
                    return MonoidalReport(False, {"object": x, "with": a, "side": "right" if k == 0 else "left"}, clipped, checked)
    return MonoidalReport(True, None, clipped, checked)


def _monoidal_via_coverings(t: Topology, c: FinLinearCategory, s: Pretopology) -> MonoidalReport:
    mon = _mon(c)
    clipped, checked = [], 0
    for k, seq in enumerate(s.sequences):
        for a in c.objects:
            ida = c.identity(a)
            sides = [(lambda m: mon.tensor(m, ida), lambda o: mon.tensor_objects(o, a))]
            if not mon.has_braiding:
                sides.append((lambda m: mon.tensor(ida, m), lambda o: mon.tensor_objects(a, o)))
            for side, obj in sides:
                try:
                    apex = obj(seq.target)
                    ms = [side(m) for m in seq.q]
                    for z in seq.left:
                        obj(z)
                except WindowOverflow:
                    clipped.append({"sequence": k, "with": a})
                    continue
                checked += 1
                if not t.covers(generated_sieve(c, ms, apex=apex)):
                    return MonoidalReport(False, {"sequence": k, "target": seq.target, "with": a}, clipped, checked)
    return MonoidalReport(True, None, clipped, checked)


def tensor_words(c: FinLinearCategory, vs: Sequence[Sequence[Morphism]], depth: int) -> list[list[Morphism]]:
    """Components of all tensor products of at most ``depth`` elements of ``vs``."""
    mon = _mon(c)
    words = [list(u) for u in vs]
    out = list(words)
    cur = words
    for _ in range(depth - 1):
        nxt = []
        for w in cur:
            for u in vs:
                try:
                    nxt.append([mon.tensor(a, b) for a in w for b in u])
                except WindowOverflow:
                    continue
        out.extend(nxt)
        cur = nxt
    return out


def annihilator(c: FinLinearCategory, vs: Sequence[Sequence[Morphism]], x: str, depth: int = 3) -> tuple:
    """Span of ``{u ∈ hom(X, 𝟙) : u* ∘ v = 0}`` over tensor words v of length ≤ depth."""
    mon = _mon(c)
    F = c.field
    unit = mon.unit
    d = c.hom_dim(x, unit)
    if d == 0:
        return ()
    vecs = []
    for w in tensor_words(c, vs, depth):
        rows = []
        for comp in w:
            cols = []
            for b in c.basis(x, unit):
                cols.append(c.compose(mon.dual(b), comp).coords)
            if cols and cols[0]:
                rows.extend(tuple(col[r] for col in cols) for r in range(len(cols[0])))
        vecs.extend(nullspace(F, rows, d) if rows else [_unit(F, d, j) for j in range(d)])
    return span_basis(F, vecs, d)


def kernel_vs_annihilator(c: FinLinearCategory, vs, t: Topology | None = None, depth: int = 3) -> dict:
    """Compare kernelOfZ(𝒯_𝒱) at (X, 𝟙) with the annihilator for every X."""
    unit = _mon(c).unit
    if t is None:
        t = top_of(tv_pretopology(c, vs, check=False), check=False).topology
    ker = kernel_of_z(t)
    F = c.field
    out = {}
    for x in c.objects:
        d = c.hom_dim(x, unit)
        if d == 0:
            continue
        kx = span_basis(F, ker.spaces.get((x, unit), []), d)
        ax = annihilator(c, vs, x, depth)
        out[x] = {"kernel": len(kx), "annihilator": len(ax), "equal": tuple(kx) == tuple(ax)}
    return out


# ---------------------------------------------------------------------------
# Factorization of coverings
# ---------------------------------------------------------------------------


def chain_composites(s: Pretopology, x: str, depth: int) -> list[list[Morphism]]:
    """Composite coverings of X along first coverings, depths 0..depth."""
    c = s.cat
    out = [[c.identity(x)]]
    for _ in range(depth):
        nxt = []
        for r in out[-1]:
            covs = s.coverings(r.source)
            if not covs:
                nxt.append(r)
                continue
            nxt.extend(c.compose(r, qb) for qb in covs[0].q)
        out.append(nxt)
    return out


@dataclass
class FactorizationReport:
    ok: bool
    depths: dict
    failures: list

    def to_json(self) -> dict:
        return {"ok": self.ok, "depths": self.depths, "failures": self.failures}


def factorization_search(s1: Pretopology, s2: Pretopology, depth: int = 6) -> FactorizationReport:
    """Every q in Co(S2) is refined by some composite r of S1: r_δ = q ∘ g_δ.

    Success shows that every covering sieve of top(S2) covers in top(S1).
    Only objects with coverings in S2 are visited.
    """
    c = s1.cat
    depths, failures = {}, []
    cache = {}
    for k, q in enumerate(s2.sequences):
        x = q.target
        if x not in cache:
            cache[x] = chain_composites(s1, x, depth)
        found = None
        for i, comps in enumerate(cache[x]):
            if all(factor_through(c, list(q.q), r) is not None for r in comps):
                found = i
                break
        if found is None:
            failures.append({"sequence": k, "target": x})
        else:
            depths[f"{k}:{x}"] = found
    return FactorizationReport(not failures, depths, failures)


# ---------------------------------------------------------------------------
# Graded instances
# ---------------------------------------------------------------------------


def variables(c: FinLinearCategory) -> list[Morphism]:
    """v = (x_0, ..., x_n): S⟨1⟩^{n+1} -> S⟨0⟩."""
    n = c.meta["graded"]["n"]
    return [polynomial_morphism(c, graded_label(1), graded_label(0), {tuple(1 if k == i else 0 for k in range(n + 1)): 1}) for i in range(n + 1)]


def monomial_unit(c: FinLinearCategory, exps: Sequence[Sequence[int]]) -> list[Morphism]:
    """The unit morphism whose components are the given monomials."""
    out = []
    for e in exps:
        d = sum(e)
        out.append(polynomial_morphism(c, graded_label(d), graded_label(0), {tuple(e): 1}))
    return out


def finite_cokernel(c: FinLinearCategory, u: Sequence[Morphism]) -> int | None:
    """Smallest degree t with ``(u)_t = S_t``, or None inside the window.

    A unit morphism of the graded window has finite-dimensional cokernel
    exactly when its ideal contains all monomials of some degree.
    """
    g = c.meta["graded"]
    F = c.field
    for t in range(0, g["hi"] - g["lo"] + 1):
        x = graded_label(t) if t <= g["hi"] else None
        if x is None:
            return None
        d = c.hom_dim(x, graded_label(0))
        vecs = []
        for m in u:
            if graded_degree(m.source) > t:
                continue
            vecs.extend(c.compose(m, h).coords for h in c.basis(x, m.source))
        if vecs and rank_rows(F, vecs, d) == d:
            return t
    return None


def proj_hom(n: int, d: int, window: int = 10, max_stage: int | None = None) -> dict:
    """dim of sheaf homs 𝚉S⟨0⟩ -> 𝚉S⟨-d⟩ for 𝒯_{{v}} on the graded window.

    With hom(S⟨i⟩, S⟨j⟩) = S_{i-j}, the object S⟨-d⟩ plays the role of the
    twist 𝒪(d), so the result is the dimension of global sections of 𝒪(d)
    on ℙⁿ.

    Raises:
        ValidationError: S⟨-d⟩ is outside the window.
        Unstable: no stabilization within ``max_stage``.
    """
    if not -window <= -d <= window:
        raise ValidationError(f"S<{-d}> lies outside the window [-{window},{window}]")
    c = graded_window(QQ, n, -window, window)
    s = tv_pretopology(c, [variables(c)], name="S_v", check=False)
    res = sh_hom(s, graded_label(0), graded_label(-d), max_stage if max_stage is not None else window + 1)
    out = res.to_json()
    out.update({"n": n, "d": d, "window": [-window, window]})
    return out

"""The Σ construction, sheafification and sheaf-level hom spaces.

ΣF(X) is the colimit of Nat(R, F) over covering sieves R on X. Covering
sieves on X form a directed family with least element minSieve(X), so the
colimit is Nat(minSieve(X), F). That space is computed from a presentation:
with generators r_α: V_α -> X of the sieve,

    Nat(R, F) = ker(∏_α F(V_α) -> ∏_{(W, k)} F(W)),

where k runs over a basis of the kernel of ``⊕_α hom(W, V_α) -> hom(W, X)``
for every object W and ``(x_α) ↦ Σ_α F(k_α) x_α``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import Unstable, ValidationError
from .exactla import nullspace, solve_rows
from .lincat import FinLinearCategory, Morphism
from .presheaf import (
    Presheaf,
    PresheafMap,
    apply_rows,
    left_inverse,
    rank_of,
    rows_from_columns,
)
from .sieve import Sieve, maximal_sieve, pushforward_sieve, sieve_sum
from .topology import Topology


def _unit(F, n, j):
    return tuple(F.one if i == j else F.zero for i in range(n))


# ---------------------------------------------------------------------------
# Presentations of sieves
# ---------------------------------------------------------------------------


def relations(c: FinLinearCategory, gens: list[Morphism], x: str) -> list[tuple]:
    """Kernel basis of ``⊕_α hom(W, V_α) -> hom(W, X)`` for every W.

    Returns a list of ``(W, (k_α)_α)`` with ``k_α: W -> V_α``.
    """
    F = c.field
    out = []
    for w in c.objects:
        dims = [c.hom_dim(w, g.source) for g in gens]
        n = sum(dims)
        if n == 0:
            continue
        dx = c.hom_dim(w, x)
        if dx == 0:
            vecs = [_unit(F, n, j) for j in range(n)]
        else:
            rows = [[] for _ in range(dx)]
            for g, d in zip(gens, dims):
                if d == 0:
                    continue
                m = c.postcompose_matrix(g, w)
                for i in range(dx):
                    rows[i].extend(m[i])
            vecs = nullspace(F, rows, n)
        for v in vecs:
            ks, off = [], 0
            for g, d in zip(gens, dims):
                ks.append(Morphism(w, g.source, tuple(v[off:off + d])))
                off += d
            out.append((w, tuple(ks)))
    return out


def factor_through(c: FinLinearCategory, gens: list[Morphism], m: Morphism):
    """Morphisms g_α with ``m = Σ_α gens[α] ∘ g_α``, or None if impossible."""
    F = c.field
    v = m.source
    cols, index = [], []
    for a, g in enumerate(gens):
        for h in c.basis(v, g.source):
            cols.append(c.compose(g, h).coords)
            index.append((a, h))
    d = c.hom_dim(v, m.target)
    if d == 0:
        return [c.zero(v, g.source) for g in gens]
    if not cols:
        return None if any(m.coords) else [c.zero(v, g.source) for g in gens]
    sol = solve_rows(F, cols, m.coords, d)
    if sol is None:
        return None
    out = [[F.zero] * c.hom_dim(v, g.source) for g in gens]
    for coef, (a, h) in zip(sol, index):
        if coef:
            k = h.coords.index(F.one)
            out[a][k] = F(out[a][k] + coef)
    return [Morphism(v, g.source, tuple(o)) for g, o in zip(gens, out)]


@dataclass
class NatData:
    """Nat(R, F) as a subspace of ∏_α F(V_α).

    ``embed`` holds basis vectors (columns) and ``coords`` a left inverse.
    """

    gens: list
    dims: list
    embed: list
    coords: tuple

    @property
    def dim(self) -> int:
        return len(self.embed)

    @property
    def ambient(self) -> int:
        return sum(self.dims)


def nat_data(c: FinLinearCategory, gens: list[Morphism], rels: list[tuple], f: Presheaf) -> NatData:
    """Solve for Nat(R_gens, F) using the relation presentation."""
    F = c.field
    dims = [f.dim(g.source) for g in gens]
    n = sum(dims)
    if n == 0:
        return NatData(list(gens), dims, [], ())
    rows = []
    for w, ks in rels:
        dw = f.dim(w)
        if dw == 0:
            continue
        blocks = [f.act_morphism(k) if d and any(k.coords) else None for k, d in zip(ks, dims)]
        for r in range(dw):
            line = []
            for blk, d in zip(blocks, dims):
                line.extend(blk[r] if blk is not None else (F.zero,) * d)
            if any(line):
                rows.append(line)
    emb = nullspace(F, rows, n) if rows else [_unit(F, n, j) for j in range(n)]
    return NatData(list(gens), dims, emb, left_inverse(F, emb, n))


def _split(vec, dims):
    out, off = [], 0
    for d in dims:
        out.append(tuple(vec[off:off + d]))
        off += d
    return out


def restriction_matrix(c: FinLinearCategory, f: Presheaf, src: NatData, tgt: NatData, m: Morphism) -> tuple:
    """Matrix of Nat(R, F) -> Nat(R', F), ``η ↦ η(m ∘ -)``, for m: X' -> X.

    Requires ``m ∘ R' ⊆ R``; every generator r'_β gives ``m∘r'_β = Σ r_α∘g_α``.

    Raises:
        ValidationError: some ``m ∘ r'_β`` is not in R.
    """
    F = c.field
    facts = []
    for rb in tgt.gens:
        comp = c.compose(m, rb)
        gs = factor_through(c, src.gens, comp)
        if gs is None:
            raise ValidationError(f"{comp.source}->{comp.target} composite does not lie in the sieve")
        facts.append([(a, f.act_morphism(g)) for a, g in enumerate(gs) if any(g.coords) and src.dims[a] and f.dim(g.source)])
    cols = []
    for e in src.embed:
        xs = _split(e, src.dims)
        big = []
        for (rb, mats), db in zip(zip(tgt.gens, facts), tgt.dims):
            acc = [F.zero] * db
            for a, mat in mats:
                w = apply_rows(F, mat, xs[a])
                acc = [F(p + q) for p, q in zip(acc, w)]
            big.extend(acc)
        cols.append(apply_rows(F, tgt.coords, big) if tgt.embed else ())
    return rows_from_columns(cols, tgt.dim)


# ---------------------------------------------------------------------------
# Σ and sheafification
# ---------------------------------------------------------------------------


class SigmaPlan:
    """Per-topology data shared by every Σ computation: generators and relations."""

    def __init__(self, t: Topology):
        self.t = t
        c = t.cat
        self.gens = {x: t.generators(x) for x in c.objects}
        self.rels = {x: relations(c, self.gens[x], x) for x in c.objects}


def plan_for(t: Topology) -> SigmaPlan:
    if t._plan is None:
        t._plan = SigmaPlan(t)
    return t._plan


@dataclass
class SigmaResult:
    """ΣF with σ_F: F -> ΣF and the per-object Nat data."""

    presheaf: Presheaf
    map: PresheafMap
    data: dict


def sigma(t: Topology, f: Presheaf) -> SigmaResult:
    """ΣF(X) = Nat(minSieve(X), F) with the restriction action, and σ_F."""
    c, F = t.cat, f.field
    plan = plan_for(t)
    data = {x: nat_data(c, plan.gens[x], plan.rels[x], f) for x in c.objects}
    dims = {x: data[x].dim for x in c.objects}

    def action(a, b, i):
        return restriction_matrix(c, f, data[b], data[a], c.basis_morphism(a, b, i))

    sf = Presheaf(c, dims, action, name=f"Σ{f.name}")
    comps = {}
    for x in c.objects:
        d = data[x]
        cols = []
        for j in range(f.dim(x)):
            v = _unit(F, f.dim(x), j)
            big = []
            for g, dg in zip(d.gens, d.dims):
                if dg:
                    big.extend(apply_rows(F, f.act_morphism(g), v))
            cols.append(apply_rows(F, d.coords, big) if d.embed else ())
        comps[x] = rows_from_columns(cols, d.dim)
    return SigmaResult(sf, PresheafMap(f, sf, comps), data)


def sigma_map(t: Topology, phi: PresheafMap, src: SigmaResult, tgt: SigmaResult) -> PresheafMap:
    """Σφ: ΣF -> ΣG, applying φ at every generator source."""
    c, F = t.cat, phi.source.field
    comps = {}
    for x in c.objects:
        ds, dt = src.data[x], tgt.data[x]
        cols = []
        for e in ds.embed:
            xs = _split(e, ds.dims)
            big = []
            for g, part, dg in zip(ds.gens, xs, dt.dims):
                if dg:
                    big.extend(apply_rows(F, phi.component(g.source), part) if part else (F.zero,) * dg)
            cols.append(apply_rows(F, dt.coords, big) if dt.embed else ())
        comps[x] = rows_from_columns(cols, dt.dim)
    return PresheafMap(src.presheaf, tgt.presheaf, comps)


@dataclass
class SheafificationResult:
    """𝚂F = ΣΣF with unit η = (Σσ_F)∘σ_F and the intermediate stage."""

    sheaf: Presheaf
    unit: PresheafMap
    stages: tuple = dc_field(default=())


def sheafify_op(t: Topology, f: Presheaf, check: bool = True) -> SheafificationResult:
    """Sheafify F.

    Raises:
        ValidationError: the postconditions fail (result not a sheaf, or the
            unit of a sheaf is not an isomorphism).
    """
    s1 = sigma(t, f)
    s2 = sigma(t, s1.presheaf)
    unit = sigma_map(t, s1.map, s1, s2).compose(s1.map)
    if check:
        if not is_sheaf(t, s2.presheaf):
            raise ValidationError("ΣΣF is not a sheaf")
        if is_sheaf(t, f) and not unit.is_iso():
            raise ValidationError("unit of a sheaf is not an isomorphism")
    return SheafificationResult(s2.presheaf, unit, (s1.presheaf, s1.map))


def _local_ranks(t: Topology, f: Presheaf, x: str):
    """(rank of F(X) -> ∏F(V_α), dim Nat(minSieve(X), F))."""
    c, F = t.cat, f.field
    plan = plan_for(t)
    d = nat_data(c, plan.gens[x], plan.rels[x], f)
    phi = []
    for g, dg in zip(d.gens, d.dims):
        if dg:
            phi.extend(f.act_morphism(g))
    r = rank_of(F, tuple(phi), f.dim(x)) if phi and f.dim(x) else 0
    return r, d.dim


def is_sheaf(t: Topology, f: Presheaf) -> bool:
    """F(X) -> Nat(minSieve(X), F) bijective for every X."""
    for x in t.cat.objects:
        r, n = _local_ranks(t, f, x)
        if not (r == f.dim(x) == n):
            return False
    return True


def is_separated(t: Topology, f: Presheaf) -> bool:
    """F(X) -> Nat(minSieve(X), F) injective for every X."""
    return all(_local_ranks(t, f, x)[0] == f.dim(x) for x in t.cat.objects)


def sheafify_vanishes(t: Topology, f: Presheaf) -> bool:
    """Whether ΣΣF = 0."""
    s1 = sigma(t, f).presheaf
    if s1.is_zero():
        return True
    return sigma(t, s1).presheaf.is_zero()


# ---------------------------------------------------------------------------
# Kernel of 𝚉
# ---------------------------------------------------------------------------


@dataclass
class KernelReport:
    """``spaces[(X, X')]`` is a basis of J(X, X') ⊆ hom(X, X')."""

    spaces: dict
    cross_check: bool

    def is_zero(self) -> bool:
        return all(not v for v in self.spaces.values())

    def to_json(self, c: FinLinearCategory) -> dict:
        sj = c.field.scalar_to_json
        return {
            "kernel": {f"{a}|{b}": [[sj(x) for x in v] for v in vs] for (a, b), vs in sorted(self.spaces.items())},
            "crossCheck": self.cross_check,
        }


def kernel_of_z(t: Topology) -> KernelReport:
    """Morphisms killed by precomposition with all minimal-sieve generators.

    Cross-checked against the kernel of σ on representables,
    ``hom(X, X') = 𝚈X'(X) -> Σ𝚈X'(X)``.
    """
    from .presheaf import representable

    c, F = t.cat, t.cat.field
    spaces = {}
    for x in c.objects:
        gens = t.generators(x)
        for x2 in c.objects:
            d = c.hom_dim(x, x2)
            if d == 0:
                continue
            rows = []
            for g in gens:
                rows.extend(c.precompose_matrix(g, x2))
            spaces[(x, x2)] = nullspace(F, rows, d) if rows else [_unit(F, d, j) for j in range(d)]
    ok = True
    for x2 in c.objects:
        sm = sigma(t, representable(c, x2)).map
        for x in c.objects:
            d = c.hom_dim(x, x2)
            if d == 0:
                continue
            comp = sm.component(x)
            k = len(nullspace(F, list(comp), d)) if comp else d
            if k != len(spaces[(x, x2)]):
                ok = False
    return KernelReport(spaces, ok)


# ---------------------------------------------------------------------------
# Sheaf hom along the composite-covering chain
# ---------------------------------------------------------------------------


@dataclass
class ShHomResult:
    dim: int
    stabilized_at: int
    apriori: int | None
    stages: list
    section_stage1: int | None = None
    warnings: list = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "stabilizedAt": self.stabilized_at,
            "aprioriBound": self.apriori,
            "stages": self.stages,
            "sectionStage1": self.section_stage1,
            "warnings": self.warnings,
        }


def _normalize(F, m: Morphism):
    lead = next((x for x in m.coords if x), None)
    if lead is None or lead == F.one:
        return m
    inv = F.inv(lead)
    return Morphism(m.source, m.target, tuple(F(inv * x) for x in m.coords))


def _chain_stages(source, x: str, max_stage: int):
    """Summand lists of r_0 = id, r_{m+1} = r_m composed with first coverings.

    A summand whose source has no covering (the window boundary) is kept as
    is. Returns (list of summand lists, clipped flag).
    """
    from .pretop import Pretopology

    c, F = source.cat, source.cat.field
    stages = [[c.identity(x)]]
    clipped = False
    for _ in range(max_stage + 1):
        nxt, seen = [], set()
        for r in stages[-1]:
            if isinstance(source, Pretopology):
                covs = source.coverings(r.source)
                parts = [c.compose(r, qb) for qb in covs[0].q] if covs else None
            else:
                parts = [c.compose(r, g) for g in source.generators(r.source)]
            if parts is None:
                clipped = True
                parts = [r]
            for p in parts:
                if p.is_zero():
                    continue
                p = _normalize(F, p)
                k = (p.source, p.coords)
                if k not in seen:
                    seen.add(k)
                    nxt.append(p)
        stages.append(nxt)
    return stages, clipped


def sh_hom(source, x: str, x2: str, max_stage: int = 12) -> ShHomResult:
    """dim Sh(𝚉X, 𝚉X') along the chain of composite coverings.

    Stage m is Nat(R_m, 𝚈X') for the sieve R_m of the m-fold composite
    covering. The value is reported once two consecutive stages agree with an
    isomorphic connecting map. The first m with R_{m+1} = R_m is an a-priori
    bound (the chain is constant afterwards); the larger of the two governs.

    Args:
        source: A Pretopology (first covering of every object is used, in
            construction order) or a Topology (minimal-sieve generators).
        x: Source object X.
        x2: Target object X'.
        max_stage: Largest stage evaluated.

    Raises:
        Unstable: no stabilization by ``max_stage``.
    """
    from .presheaf import representable
    from .pretop import Pretopology

    c, F = source.cat, source.cat.field
    yx2 = representable(c, x2)
    summands, clipped = _chain_stages(source, x, max_stage)
    sieves = [sieve_sum([pushforward_sieve(maximal_sieve(c, r.source), r) for r in s], apex=x, cat=c) for s in summands]
    apriori = next((m for m in range(len(sieves) - 1) if sieves[m + 1] == sieves[m]), None)
    datas, dims, conn = [], [], []
    warnings = []
    if clipped:
        warnings.append("chain reached objects without coverings (window boundary)")
    stabilized = None
    for m in range(max_stage + 1):
        gens = sieves[m].generators()
        d = nat_data(c, gens, relations(c, gens, x), yx2)
        datas.append(d)
        dims.append(d.dim)
        if m > 0:
            r = restriction_matrix(c, yx2, datas[m - 1], d, c.identity(x))
            rk = rank_of(F, r, datas[m - 1].dim) if r and datas[m - 1].dim else 0
            conn.append(rk)
            if rk < datas[m - 1].dim:
                warnings.append(f"connecting map {m - 1}->{m} not injective: coverings are not epimorphic")
            if stabilized is None and dims[m] == dims[m - 1] and rk == dims[m]:
                stabilized = m - 1
        governing = max(stabilized, apriori) if (stabilized is not None and apriori is not None) else None
        if governing is not None and m >= governing:
            break
        if stabilized is not None and apriori is None and m >= stabilized + 1 and m == max_stage:
            break
    if stabilized is None:
        raise Unstable(f"no stabilization within {max_stage} stages; enlarge the window", dims)
    governing = stabilized if apriori is None or apriori > max_stage else max(stabilized, apriori)
    if apriori is None:
        warnings.append("no a-priori bound reached")
    value = dims[min(governing, len(dims) - 1)]
    if value != dims[stabilized]:
        warnings.append("stage value changed after the stopping rule fired")
    sec = None
    if isinstance(source, Pretopology) and source.coverings(x):
        seq = source.coverings(x)[0]
        sec = _section_kernel(seq, x2)
    return ShHomResult(value, stabilized, apriori, dims, sec, warnings)


def _section_kernel(seq, x2: str) -> int:
    """dim ker(∏ hom(Y_β, X') -> ∏ hom(Z_γ, X')) for one covering sequence."""
    c, F = seq.cat, seq.cat.field
    dys = [c.hom_dim(y, x2) for y in seq.middle]
    n = sum(dys)
    if n == 0:
        return 0
    rows = []
    for z, row in zip(seq.left, seq.p):
        dz = c.hom_dim(z, x2)
        if dz == 0:
            continue
        blocks = [c.precompose_matrix(pb, x2) if dy else None for pb, dy in zip(row, dys)]
        for r in range(dz):
            line = []
            for blk, dy in zip(blocks, dys):
                line.extend(blk[r] if blk is not None else ())
            rows.append(line)
    return len(nullspace(F, rows, n)) if rows else n

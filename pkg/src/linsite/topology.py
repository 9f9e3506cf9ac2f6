"""Grothendieck topologies stored by their minimal covering sieves.

Why one sieve per object is enough: the sieves on X form a lattice of finite
height (each R(B) is a subspace of a finite-dimensional hom space), and the
covering sieves T(X) are closed under pairwise intersection. A nonempty family
closed under finite intersections in a finite-height lattice has a least
element, the intersection of all its members; call it minSieve(X). Up-closure
of T(X) then says the covering sieves are exactly the sieves containing
minSieve(X). Conversely a family of sieves defines a topology this way exactly
when ``axiom_check`` passes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

from .errors import TooLarge, ValidationError
from .lincat import FinLinearCategory, Morphism
from .sieve import (
    Sieve,
    enumerate_sieves,
    generated_sieve,
    maximal_sieve,
    pullback_sieve,
    sieve_contains,
    sieve_sum,
    zero_sieve,
)


class Topology:
    """A topology given by its minimal covering sieve on every object."""

    def __init__(self, cat: FinLinearCategory, min_sieves: dict, name: str = ""):
        self.cat = cat
        self.min_sieves = {x: min_sieves[x] for x in cat.objects}
        for x, s in self.min_sieves.items():
            if s.apex != x:
                raise ValidationError(f"minimal sieve for {x} has apex {s.apex}")
        self.name = name
        self._plan = None
        self._gens: dict = {}

    def min_sieve(self, x: str) -> Sieve:
        return self.min_sieves[x]

    def generators(self, x: str) -> list[Morphism]:
        if x not in self._gens:
            self._gens[x] = self.min_sieves[x].generators()
        return self._gens[x]

    def covers(self, r: Sieve) -> bool:
        """Whether R is a covering sieve, i.e. R ⊇ minSieve(apex)."""
        return sieve_contains(r, self.min_sieves[r.apex])

    def key(self) -> tuple:
        return tuple(self.min_sieves[x].key() for x in self.cat.objects)

    def __eq__(self, other):
        return isinstance(other, Topology) and other.cat is self.cat and other.key() == self.key()

    def __hash__(self):
        return hash(self.key())

    def finer_or_equal(self, other: "Topology") -> bool:
        """Whether every covering sieve of ``other`` covers in ``self``."""
        return all(sieve_contains(other.min_sieves[x], self.min_sieves[x]) for x in self.cat.objects)

    def to_json(self) -> dict:
        return {"minSieve": {x: self.min_sieves[x].to_json() for x in self.cat.objects}}

    @classmethod
    def from_json(cls, cat: FinLinearCategory, doc: dict) -> "Topology":
        """Read a topology; every listed family must already be a sieve."""
        try:
            data = doc["minSieve"]
            sieves = {}
            for x in cat.objects:
                raw = Sieve.from_json(cat, x, data.get(x, {}), close=False)
                if not raw.is_closed():
                    raise ValidationError(f"minSieve({x}) is not closed under precomposition")
                sieves[x] = raw
            unknown = set(data) - set(cat.objects)
            if unknown:
                raise ValidationError(f"minSieve for unknown objects {sorted(unknown)}")
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ValidationError):
                raise
            raise ValidationError(f"malformed topology document: {exc}") from exc
        return cls(cat, sieves)

    def __repr__(self):
        dims = {x: s.total_dim() for x, s in self.min_sieves.items()}
        return f"Topology({self.name or '?'}, minSieve dims={dims})"


def coarsest(c: FinLinearCategory) -> Topology:
    """Only maximal sieves cover."""
    return Topology(c, {x: maximal_sieve(c, x) for x in c.objects}, name="coarsest")


def finest(c: FinLinearCategory) -> Topology:
    """Every sieve covers."""
    return Topology(c, {x: zero_sieve(c, x) for x in c.objects}, name="finest")


@dataclass
class AxiomReport:
    """Outcome of ``axiom_check``.

    ``mode`` is ``"exhaustive"`` when (T3) ran over all sieves and
    ``"verified on candidate set"`` otherwise.
    """

    ok: bool
    mode: str
    violations: list = dc_field(default_factory=list)
    checked: int = 0

    def to_json(self) -> dict:
        return {"ok": self.ok, "mode": self.mode, "violations": self.violations, "checked": self.checked}


def _coords_json(c, m: Morphism):
    return {"source": m.source, "target": m.target, "coords": [c.field.scalar_to_json(x) for x in m.coords]}


def _t3_candidates(t: Topology, x: str, extra) -> list[Sieve]:
    c = t.cat
    out = {}
    basis_sieves = []
    for b in c.objects:
        for f in c.basis(b, x):
            s = generated_sieve(c, [f], apex=x)
            basis_sieves.append(s)
    for s in basis_sieves:
        out[s.key()] = s
    for s, r in itertools.combinations(basis_sieves, 2):
        u = sieve_sum([s, r])
        out[u.key()] = u
    for s in [zero_sieve(c, x), t.min_sieves[x]] + [s for s in (extra or []) if s.apex == x]:
        out[s.key()] = s
    return list(out.values())


def axiom_check(t: Topology, candidates=None, sieve_cap: int = 10_000, max_violations: int = 20) -> AxiomReport:
    """Verify (T1)-(T3) for the covering system generated by ``t``.

    (T1) holds by construction. (T2) is checked as
    ``pullback(minSieve(A), f) ⊇ minSieve(B)`` for every basis f: B -> A; basis
    morphisms suffice because ``(Σ c_i f_i)^{-1}R ⊇ ∩ f_i^{-1}R``. (T3) is
    checked with R = minSieve(A): any covering R contains it, so the premise
    for R implies the premise for minSieve(A). Again only basis elements of
    minSieve(A)(B) need testing. Over F_p the sieves S range over all sieves;
    over Q over ``candidates`` plus sieves generated by basis morphisms.

    Raises:
        TooLarge: sieve enumeration exceeds ``sieve_cap``.
    """
    c = t.cat
    viol = []
    checked = 0
    for a in c.objects:
        ma = t.min_sieves[a]
        if not ma.is_closed():
            viol.append({"axiom": "sieve", "object": a})
    # (T2)
    for a in c.objects:
        ma = t.min_sieves[a]
        for b in c.objects:
            mb = t.min_sieves[b]
            for f in c.basis(b, a):
                checked += 1
                if not sieve_contains(pullback_sieve(ma, f), mb):
                    viol.append({"axiom": "T2", "object": a, "morphism": _coords_json(c, f)})
                    if len(viol) >= max_violations:
                        return AxiomReport(False, "exhaustive" if c.field.is_finite else "verified on candidate set", viol, checked)
    # (T3)
    exhaustive = c.field.is_finite and candidates is None
    for a in c.objects:
        ma = t.min_sieves[a]
        sieves = enumerate_sieves(c, a, cap=sieve_cap) if exhaustive else _t3_candidates(t, a, candidates)
        premises = [(b, Morphism(b, a, v)) for b in c.objects for v in ma.spans[b]]
        for s in sieves:
            if sieve_contains(s, ma):
                continue
            checked += 1
            if all(sieve_contains(pullback_sieve(s, f), t.min_sieves[b]) for b, f in premises):
                viol.append({"axiom": "T3", "object": a, "sieve": s.to_json()})
                if len(viol) >= max_violations:
                    break
    mode = "exhaustive" if exhaustive else "verified on candidate set"
    return AxiomReport(not viol, mode, viol, checked)


@dataclass
class JoinMeet:
    join: Topology
    meet: Topology


def join_meet(ts) -> JoinMeet:
    """Join (coarsest topology containing all) and meet (intersection).

    The meet's minimal sieve is the sieve sum of the inputs' minimal sieves.
    The join is ``top`` of the union of generating subsets of ``pre'(T_i)``.
    """
    from .pretop import Pretopology, pre_prime_generators, top_of

    ts = list(ts)
    if not ts:
        raise ValidationError("join_meet needs at least one topology")
    c = ts[0].cat
    for t in ts:
        if t.cat is not c:
            raise ValidationError("topologies live on different categories")
    meet = Topology(c, {x: sieve_sum([t.min_sieves[x] for t in ts]) for x in c.objects}, name="meet")
    seqs = []
    for t in ts:
        seqs.extend(pre_prime_generators(t).sequences)
    join = top_of(Pretopology(c, seqs), check=False).topology
    join.name = "join"
    return JoinMeet(join, meet)


def enumerate_topologies(c: FinLinearCategory, cap: int = 20_000, sieve_cap: int = 10_000) -> list[Topology]:
    """All topologies on c over F_p, as minimal-sieve families passing axiom_check.

    (T2) is used to prune: families are built object by object and pairs
    violating the pullback condition are discarded early.

    Raises:
        TooLarge: too many candidate families.
    """
    objs = c.objects
    per_obj = {x: enumerate_sieves(c, x, cap=sieve_cap) for x in objs}
    total = 1
    for x in objs:
        total *= len(per_obj[x])
    if total > cap * 50:
        raise TooLarge(f"{total} candidate families exceed the scan cap")

    def t2_ok(a, sa, b, sb):
        for f in c.basis(b, a):
            if not sieve_contains(pullback_sieve(sa, f), sb):
                return False
        return True

    results = []

    def rec(k, chosen):
        if k == len(objs):
            t = Topology(c, dict(chosen))
            if axiom_check(t, sieve_cap=sieve_cap).ok:
                results.append(t)
                if len(results) > cap:
                    raise TooLarge(f"more than {cap} topologies")
            return
        x = objs[k]
        for s in per_obj[x]:
            ok = True
            for y, sy in chosen.items():
                if not (t2_ok(x, s, y, sy) and t2_ok(y, sy, x, s)):
                    ok = False
                    break
            if ok and not t2_ok(x, s, x, s):
                ok = False
            if ok:
                chosen[x] = s
                rec(k + 1, chosen)
                del chosen[x]

    rec(0, {})
    return results

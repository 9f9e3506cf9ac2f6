"""Subcanonical, bounded-generation and canonical-topology computations."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .exactla import rank_rows
from .lincat import FinLinearCategory
from .presheaf import rank_of, representable
from .pretop import FormalSequence, in_pre, pre_prime_generators, pre_two, two_bounded_candidates
from .sheafify import is_sheaf, kernel_of_z
from .topology import Topology, enumerate_topologies, join_meet


def right_exact(seq: FormalSequence) -> bool:
    """``0 -> hom(X, A) -> ⊕hom(Y_β, A) -> ⊕hom(Z_γ, A)`` exact for every A."""
    c, F = seq.cat, seq.cat.field
    for a in c.objects:
        dx = c.hom_dim(seq.target, a)
        q_rows = []
        for m in seq.q:
            q_rows.extend(c.precompose_matrix(m, a))
        rq = rank_of(F, tuple(q_rows), dx) if q_rows and dx else 0
        if rq != dx:
            return False
        dys = [c.hom_dim(y, a) for y in seq.middle]
        n = sum(dys)
        if n == 0:
            continue
        rows = []
        for z, row in zip(seq.left, seq.p):
            dz = c.hom_dim(z, a)
            if dz == 0:
                continue
            blocks = [c.precompose_matrix(pb, a) if dy else None for pb, dy in zip(row, dys)]
            for r in range(dz):
                line = []
                for blk, dy in zip(blocks, dys):
                    line.extend(blk[r] if blk is not None else ())
                rows.append(line)
        if n - (rank_rows(F, rows, n) if rows else 0) != rq:
            return False
    return True


@dataclass
class SubcanonicalReport:
    ok: bool
    witness: str | None
    cross_check: bool
    kernel_zero: bool
    sampled: int = 0

    def to_json(self) -> dict:
        return {
            "subcanonical": self.ok,
            "witness": self.witness,
            "crossCheck": self.cross_check,
            "kernelZero": self.kernel_zero,
            "sampledSequences": self.sampled,
        }


def subcanonical_check(t: Topology, sample_cap: int = 400) -> SubcanonicalReport:
    """Every representable is a sheaf.

    Cross-checks: the kernel of 𝚉 vanishes exactly when t is subcanonical,
    and members of pre(T) (the generating subset of pre'(T), plus 2-bounded
    candidates over a finite field) are all right exact exactly when t is
    subcanonical.
    """
    c = t.cat
    witness = None
    for x in c.objects:
        if not is_sheaf(t, representable(c, x)):
            witness = x
            break
    ok = witness is None
    seqs = list(pre_prime_generators(t).sequences)
    if c.field.is_finite:
        cands = two_bounded_candidates(c)[:sample_cap]
        seqs.extend(s for s in cands if in_pre(t, s))
    all_right_exact = all(right_exact(s) for s in seqs)
    kz = kernel_of_z(t).is_zero()
    cross = (all_right_exact == ok) and (not ok or kz)
    return SubcanonicalReport(ok, witness, cross, kz, len(seqs))


@dataclass
class BoundedReport:
    ok: bool
    accepted: int
    candidates: int

    def to_json(self) -> dict:
        return {"verdict": "bounded" if self.ok else "not certified", "accepted": self.accepted, "candidates": self.candidates}


def bounded_generation(t: Topology) -> BoundedReport:
    """Whether the 2-bounded members of pre(T) generate T (finite fields)."""
    rep = pre_two(t, two_bounded_candidates(t.cat))
    return BoundedReport(rep.ok, rep.accepted, rep.candidates)


@dataclass
class CanonicalReport:
    canonical: Topology
    canonical_bounded: Topology
    subcanonical: list = dc_field(default_factory=list)
    bounded: list = dc_field(default_factory=list)
    canonical_is_subcanonical: bool = True
    canonical_is_finest: bool = True

    def to_json(self) -> dict:
        return {
            "canonical": self.canonical.to_json(),
            "canonicalBounded": self.canonical_bounded.to_json(),
            "subcanonicalCount": len(self.subcanonical),
            "boundedSubcanonicalCount": len(self.bounded),
            "canonicalIsSubcanonical": self.canonical_is_subcanonical,
            "canonicalIsFinest": self.canonical_is_finest,
        }


def canonical_topologies(c: FinLinearCategory, topologies: list[Topology] | None = None) -> CanonicalReport:
    """Join of all subcanonical topologies, and of those with bounded generation.

    Raises:
        TooLarge: topology enumeration exceeds its caps.
    """
    ts = topologies if topologies is not None else enumerate_topologies(c)
    sub = [t for t in ts if subcanonical_check(t).ok]
    can = join_meet(sub).join
    bnd = [t for t in sub if bounded_generation(t).ok]
    canb = join_meet(bnd).join if bnd else join_meet([sub[0]]).meet
    can_sub = subcanonical_check(can).ok
    finest_ok = all(can.finer_or_equal(t) for t in sub)
    can.name, canb.name = "canonical", "canonicalBounded"
    return CanonicalReport(can, canb, sub, bnd, can_sub, finest_ok)


@dataclass
class TopologyReport:
    subcanonical: SubcanonicalReport
    bounded: BoundedReport | None
    monoidal: object = None
    canonical_rank: int | None = None

    def to_json(self) -> dict:
        return {
            "subcanonical": self.subcanonical.to_json(),
            "boundedGeneration": self.bounded.to_json() if self.bounded else {"verdict": "not computed (field not finite)"},
            "monoidal": self.monoidal.to_json() if self.monoidal is not None else None,
            "canonicalRank": self.canonical_rank,
        }


def topology_report(t: Topology, monoidal: bool = False, rank_in: list[Topology] | None = None) -> TopologyReport:
    """Subcanonicity, bounded generation, optional monoidality and lattice position.

    ``canonical_rank`` is the number of enumerated topologies strictly finer
    than t when ``rank_in`` is given.
    """
    sub = subcanonical_check(t)
    bnd = bounded_generation(t) if t.cat.field.is_finite else None
    mon = None
    if monoidal and t.cat.monoidal is not None:
        from .monoidal import monoidal_check

        mon = monoidal_check(t)
    rank = None
    if rank_in is not None:
        rank = sum(1 for s in rank_in if s != t and s.finer_or_equal(t))
    return TopologyReport(sub, bnd, mon, rank)

"""Verification suites over the bundled corpus.

Each suite states the property it checks, lists the instances it visits and
returns one ``Check`` per (instance, property) pair. Checks of a suite run
concurrently; results are sorted by name so reports do not depend on
scheduling.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Callable

from .corpus import Instance, instance, kelly
from .exactla import GF2, QQ, rank_rows
from .lincat import Morphism, from_quiver, graded_window
from .monoidal import (
    classify_u,
    factorization_search,
    monoidal_check,
    monomial_unit,
    proj_hom,
    strict_epi,
    tv_pretopology,
    variables,
)
from .presheaf import enumerate_maps, enumerate_presheaves, kernel, nat_space, representable
from .pretop import Pretopology, gabriel_sequence, is_sheaf_via, pre_prime_generators, top_of
from .sieve import generated_sieve, maximal_sieve, sieve_contains, zero_sieve
from .sheafify import is_separated, is_sheaf, kernel_of_z, sheafify_op, sigma, sigma_map
from .topology import Topology, axiom_check, coarsest, enumerate_topologies, finest, join_meet


@dataclass
class HarnessConfig:
    """Caps and sampling controls shared by all suites."""

    seed: int = 0
    max_dim: int = 2
    max_sieves: int = 10_000
    depth: int = 4
    samples: int = 100
    workers: int = 4


@dataclass
class Check:
    name: str
    ok: bool
    detail: dict = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok, "detail": self.detail}


@dataclass
class SuiteResult:
    suite: str
    statement: str
    instances: list
    checks: list
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return all(ch.ok for ch in self.checks)

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "statement": self.statement,
            "instances": list(self.instances),
            "ok": self.ok,
            "checks": [ch.to_json() for ch in self.checks],
        }


Task = tuple[str, Callable[[], Check]]

F2_NAMES = ["F2", "F2xF2", "F2[x]/x2", "F2[x]/x3", "A2", "A3rel"]
EXPECTED_COUNTS = {"F2": 2, "F2xF2": 4}


# ---------------------------------------------------------------------------
# Shared helpers
# ---------------------------------------------------------------------------


def _topologies(inst: Instance, cfg: HarnessConfig) -> list[Topology]:
    return enumerate_topologies(inst.cat, sieve_cap=cfg.max_sieves)


def _presheaves(inst: Instance, cfg: HarnessConfig):
    return enumerate_presheaves(inst.cat, max_dim=cfg.max_dim)


def _map_vector(phi) -> list:
    out = []
    for a in phi.source.cat.objects:
        for r in phi.components[a]:
            out.extend(r)
    return out


def _ordered_upper_bound(u: Topology, ts) -> bool:
    """u has every covering sieve of every t in ts."""
    return all(sieve_contains(t.min_sieve(x), u.min_sieve(x)) for t in ts for x in u.cat.objects)


def _ordered_lower_bound(u: Topology, ts) -> bool:
    return all(sieve_contains(u.min_sieve(x), t.min_sieve(x)) for t in ts for x in u.cat.objects)


def corrupted_family() -> tuple[Topology, str]:
    """A minimal-sieve family on v1 -> v2 that is not stable under pullback.

    v1 needs its maximal sieve while v2 is covered by the zero sieve; the
    pullback of the zero sieve along ``a`` is zero on v1, so (T2) fails.
    """
    c = from_quiver(GF2, ["v1", "v2"], [("a", "v1", "v2")], name="A2")
    t = Topology(c, {"v1": maximal_sieve(c, "v1"), "v2": zero_sieve(c, "v2")}, name="corrupted")
    return t, "T2"


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------


def _axioms(cfg: HarnessConfig) -> list[Task]:
    tasks: list[Task] = []
    names = F2_NAMES + ["kelly"]

    def trivial(name):
        def run():
            inst = instance(name)
            reps = {k: axiom_check(f(inst.cat), sieve_cap=cfg.max_sieves) for k, f in (("coarsest", coarsest), ("finest", finest))}
            return Check(f"trivial/{inst.name}", all(r.ok for r in reps.values()), {k: r.mode for k, r in reps.items()})

        return run

    for n in names:
        tasks.append((f"trivial/{n}", trivial(n)))

    def graded():
        c = graded_window(QQ, 1, -3, 3)
        reps = {k: axiom_check(f(c)) for k, f in (("coarsest", coarsest), ("finest", finest))}
        return Check("trivial/graded[-3,3]", all(r.ok for r in reps.values()), {k: r.mode for k, r in reps.items()})

    def corrupted():
        t, axiom = corrupted_family()
        rep = axiom_check(t)
        found = [v for v in rep.violations if v.get("axiom") == axiom]
        return Check("corrupted/A2", not rep.ok and bool(found), {"violations": rep.violations[:3]})

    tasks.append(("trivial/graded", graded))
    tasks.append(("corrupted/A2", corrupted))
    return tasks


def _enumeration(cfg: HarnessConfig) -> list[Task]:
    def run(name):
        def go():
            inst = instance(name)
            ts = _topologies(inst, cfg)
            axioms_ok = all(axiom_check(t, sieve_cap=cfg.max_sieves).ok for t in ts)
            expected = EXPECTED_COUNTS.get(inst.name)
            ok = axioms_ok and (expected is None or len(ts) == expected)
            return Check(f"count/{inst.name}", ok, {"count": len(ts), "expected": expected, "axiomsOk": axioms_ok})

        return go

    return [(f"count/{n}", run(n)) for n in F2_NAMES]


def _roundtrip(cfg: HarnessConfig) -> list[Task]:
    def run(name):
        def go():
            inst = instance(name)
            bad = []
            ts = _topologies(inst, cfg)
            for k, t in enumerate(ts):
                back = top_of(pre_prime_generators(t), check=False).topology
                if back != t:
                    bad.append(k)
            return Check(f"roundtrip/{inst.name}", not bad, {"topologies": len(ts), "mismatches": bad})

        return go

    return [(f"roundtrip/{n}", run(n)) for n in F2_NAMES]


def _sheaf_equivalence(cfg: HarnessConfig) -> list[Task]:
    def run(name):
        def go():
            inst = instance(name)
            ps = _presheaves(inst, cfg)
            detail, ok = {}, True
            for pname, s in sorted(inst.pretopologies.items()):
                t = top_of(s, check=False).topology
                bad = sum(1 for f in ps if is_sheaf_via(s, f) != is_sheaf(t, f))
                sheaves = sum(1 for f in ps if is_sheaf(t, f))
                detail[pname] = {"mismatches": bad, "sheaves": sheaves}
                ok = ok and bad == 0
            detail["presheaves"] = len(ps)
            return Check(f"equivalence/{inst.name}", ok, detail)

        return go

    return [(f"equivalence/{n}", run(n)) for n in F2_NAMES + ["kelly"]]


def _join(cfg: HarnessConfig) -> list[Task]:
    def run(name):
        def go():
            inst = instance(name)
            ts = _topologies(inst, cfg)
            ps = _presheaves(inst, cfg)
            sheaf_sets = [frozenset(i for i, f in enumerate(ps) if is_sheaf(t, f)) for t in ts]
            bad = []
            pairs = 0
            for i in range(len(ts)):
                for j in range(i, len(ts)):
                    pairs += 1
                    fam = [ts[i], ts[j]]
                    jm = join_meet(fam)
                    ups = [u for u in ts if _ordered_upper_bound(u, fam)]
                    lub = [u for u in ups if all(_ordered_upper_bound(w, [u]) for w in ups)]
                    lows = [u for u in ts if _ordered_lower_bound(u, fam)]
                    glb = [u for u in lows if all(_ordered_lower_bound(w, [u]) for w in lows)]
                    join_sheaves = frozenset(k for k, f in enumerate(ps) if is_sheaf(jm.join, f))
                    if lub != [jm.join] or glb != [jm.meet] or join_sheaves != sheaf_sets[i] & sheaf_sets[j]:
                        bad.append([i, j])
            return Check(f"join/{inst.name}", not bad, {"pairs": pairs, "failures": bad})

        return go

    return [(f"join/{n}", run(n)) for n in F2_NAMES]


def sheafification_contract(inst: Instance, cfg: HarnessConfig) -> dict:
    """Sampled adjunction, separation, sheaf and kernel-preservation checks."""
    rng = random.Random(f"{cfg.seed}:{inst.name}")
    ts = _topologies(inst, cfg) if inst.name != kelly().name else [top_of(s, check=False).topology for s in inst.pretopologies.values()]
    ps = _presheaves(inst, cfg)
    F = inst.cat.field
    counts = {"pairs": 0, "adjunction": 0, "separated": 0, "sheafOfSeparated": 0, "unitIso": 0, "kernels": 0}
    failures = []
    sigma_cache: dict = {}

    def sig(k, fi):
        if (k, fi) not in sigma_cache:
            sigma_cache[(k, fi)] = sigma(ts[k], ps[fi])
        return sigma_cache[(k, fi)]

    sheaves = {k: [i for i, f in enumerate(ps) if is_sheaf(t, f)] for k, t in enumerate(ts)}
    for _ in range(cfg.samples):
        k = rng.randrange(len(ts))
        t = ts[k]
        fi = rng.randrange(len(ps))
        gi = rng.choice(sheaves[k])
        f, g = ps[fi], ps[gi]
        counts["pairs"] += 1
        # adjunction: ψ ↦ ψ∘η is a bijection Nat(𝚂F, G) -> Nat(F, G)
        sh = sheafify_op(t, f, check=False)
        left, right = nat_space(sh.sheaf, g), nat_space(f, g)
        vecs = [_map_vector(psi.compose(sh.unit)) for psi in left.basis]
        n = len(vecs[0]) if vecs else 0
        if left.dim == right.dim and (not vecs or rank_rows(F, vecs, n) == left.dim):
            counts["adjunction"] += 1
        else:
            failures.append({"check": "adjunction", "topology": k, "F": fi, "G": gi})
        s1 = sig(k, fi).presheaf
        if is_separated(t, s1):
            counts["separated"] += 1
        else:
            failures.append({"check": "separated", "topology": k, "F": fi})
        if is_separated(t, f):
            if is_sheaf(t, s1):
                counts["sheafOfSeparated"] += 1
            else:
                failures.append({"check": "sheafOfSeparated", "topology": k, "F": fi})
        if is_sheaf(t, f):
            if sh.unit.is_iso():
                counts["unitIso"] += 1
            else:
                failures.append({"check": "unitIso", "topology": k, "F": fi})
        # Σ preserves the kernel of a sampled map F -> H
        hi = rng.randrange(len(ps))
        h = ps[hi]
        maps = list(enumerate_maps(f, h, limit=16))
        phi = rng.choice(maps)
        kp, inc = kernel(phi)
        sf, sh_ = sig(k, fi), sig(k, hi)
        sphi = sigma_map(t, phi, sf, sh_)
        sk = sigma(t, kp)
        sinc = sigma_map(t, inc, sk, sf)
        kq, _ = kernel(sphi)
        same = all(kq.dim(a) == sk.presheaf.dim(a) for a in inst.cat.objects)
        if same and sinc.is_injective() and sphi.compose(sinc).is_zero():
            counts["kernels"] += 1
        else:
            failures.append({"check": "kernels", "topology": k, "F": fi, "H": hi})
    return {"counts": counts, "failures": failures, "topologies": len(ts), "presheaves": len(ps)}


def _sheafification(cfg: HarnessConfig) -> list[Task]:
    def run(name):
        def go():
            inst = instance(name)
            res = sheafification_contract(inst, cfg)
            return Check(f"contract/{inst.name}", not res["failures"], res)

        return go

    return [(f"contract/{n}", run(n)) for n in F2_NAMES + ["kelly"]]


def e1_local(f, e2: Morphism) -> bool:
    """M is its own localization M ↦ e1M exactly when e2 acts as zero."""
    return not any(x for r in f.act_morphism(e2) for x in r)


def _gabriel(cfg: HarnessConfig) -> list[Task]:
    def product():
        inst = instance("F2xF2")
        c = inst.cat
        e1, e2 = Morphism("*", "*", (1, 0)), Morphism("*", "*", (0, 1))
        t = top_of(Pretopology(c, [gabriel_sequence(c, [e1])]), check=False).topology
        dim = sheafify_op(t, representable(c, "*")).sheaf.dim("*")
        ps = _presheaves(inst, cfg)
        bad = sum(1 for f in ps if is_sheaf(t, f) != e1_local(f, e2))
        return Check("localization/F2xF2", dim == 1 and bad == 0, {"sheafifiedRepresentableDim": dim, "mismatches": bad, "presheaves": len(ps)})

    def cube():
        inst = instance("F2[x]/x3")
        c = inst.cat
        x = Morphism("*", "*", (0, 1, 0))
        t = top_of(Pretopology(c, [gabriel_sequence(c, [x])]), check=False).topology
        ps = _presheaves(inst, cfg)
        nonzero = sum(1 for f in ps if not f.is_zero() and is_sheaf(t, f))
        return Check("localization/F2[x]/x3", t == finest(c) and nonzero == 0, {"finest": t == finest(c), "nonzeroSheaves": nonzero})

    return [("localization/F2xF2", product), ("localization/F2[x]/x3", cube)]


def _kernel(cfg: HarnessConfig) -> list[Task]:
    def product():
        c = instance("F2xF2").cat
        e1 = Morphism("*", "*", (1, 0))
        t = Topology(c, {"*": generated_sieve(c, [e1])})
        rep = kernel_of_z(t)
        span = [list(v) for v in rep.spaces.get(("*", "*"), [])]
        ok = span == [[0, 1]] and rep.cross_check
        return Check("kernel/F2xF2(e1)", ok, {"span": span, "crossCheck": rep.cross_check})

    def subcanonical(name):
        def go():
            inst = instance(name)
            ts = _topologies(inst, cfg)
            sub = [t for t in ts if all(is_sheaf(t, representable(inst.cat, x)) for x in inst.cat.objects)]
            bad = [k for k, t in enumerate(sub) if not kernel_of_z(t).is_zero()]
            return Check(f"subcanonical/{inst.name}", not bad, {"subcanonical": len(sub), "nonzeroKernels": bad})

        return go

    return [("kernel/F2xF2(e1)", product)] + [(f"subcanonical/{n}", subcanonical(n)) for n in F2_NAMES]


def _classification(cfg: HarnessConfig) -> list[Task]:
    def run():
        seen = {}
        for w in (4, 6):
            c = graded_window(QQ, 1, -w, w)
            v = variables(c)
            seen[w] = {
                "x0,x1": classify_u(c, v).classification,
                "x0": classify_u(c, [v[0]]).classification,
                "strictEpi": [strict_epi(c, v), strict_epi(c, [v[0]])],
            }
        ok = all(s["x0,x1"] == "InUex" and s["x0"] == "InUep" and s["strictEpi"] == [True, False] for s in seen.values())
        return Check("classification/graded n=1", ok and seen[4] == seen[6], {str(k): v for k, v in seen.items()})

    return [("classification/graded n=1", run)]


PROJECTIVE_CASES = [(1, 0, 6, 1), (1, 1, 6, 2), (1, 2, 6, 3), (1, 3, 6, 4), (1, -1, 6, 0), (1, -2, 6, 0), (2, 1, 4, 3)]


def _projective(cfg: HarnessConfig) -> list[Task]:
    def run(n, d, w, want):
        def go():
            t0 = time.perf_counter()
            res = proj_hom(n, d, window=w)
            secs = time.perf_counter() - t0
            ok = res["dim"] == want and res["stabilizedAt"] is not None and secs < 30
            return Check(f"projHom/n={n},d={d}", ok, {"dim": res["dim"], "expected": want, "stabilizedAt": res["stabilizedAt"], "window": res["window"]})

        return go

    return [(f"projHom/n={n},d={d}", run(n, d, w, want)) for n, d, w, want in PROJECTIVE_CASES]


def _monoidal(cfg: HarnessConfig) -> list[Task]:
    def run():
        c = graded_window(QQ, 1, -6, 6)
        v = variables(c)
        s = tv_pretopology(c, [v], name="S_v", check=False)
        t = top_of(s, check=False).topology
        vs = [monomial_unit(c, [(2, 0), (0, 2)]), monomial_unit(c, [(2, 0), (1, 1), (0, 2)])]
        sv = tv_pretopology(c, [v] + vs, name="S_V", check=False)
        tv = top_of(sv, check=False).topology
        reps = {
            "T_v": monoidal_check(t).ok,
            "T_v coverings": monoidal_check(t, pretopology=s).ok,
            "coarsest": monoidal_check(coarsest(c)).ok,
            "finest": monoidal_check(finest(c)).ok,
        }
        fwd, back = factorization_search(s, sv, depth=cfg.depth + 2), factorization_search(sv, s, depth=cfg.depth + 2)
        detail = dict(reps)
        detail.update({"factorization": [fwd.ok, back.ok], "sameMinimalSieves": tv == t})
        return Check("monoidal/graded[-6,6]", all(reps.values()) and fwd.ok and back.ok, detail)

    return [("monoidal/graded[-6,6]", run)]


def _kelly(cfg: HarnessConfig) -> list[Task]:
    def run():
        inst = kelly()
        ts = {k: top_of(s, check=False).topology for k, s in inst.pretopologies.items()}
        ps = _presheaves(inst, cfg)
        bad = sum(1 for f in ps if is_sheaf(ts["union"], f) != (is_sheaf(ts["rows"], f) and is_sheaf(ts["columns"], f)))
        return Check("kelly/F2xF2(x)F2[x]/x2", bad == 0, {"presheaves": len(ps), "mismatches": bad})

    return [("kelly", run)]


SUITES: dict[str, tuple[str, list[str], Callable[[HarnessConfig], list[Task]]]] = {
    "axioms": ("axiom check accepts both trivial topologies and rejects a family unstable under pullback", F2_NAMES + ["kelly", "graded[-3,3]", "corrupted A2"], _axioms),
    "enumeration": ("topology enumeration counts, each enumerated family satisfies the axioms", F2_NAMES, _enumeration),
    "roundtrip": ("top(pre'(T)) = T for every enumerated topology", F2_NAMES, _roundtrip),
    "sheaf-equivalence": ("sheaves for a pretopology S are the sheaves for top(S)", F2_NAMES + ["kelly"], _sheaf_equivalence),
    "join": ("join is the least upper bound and its sheaves are the intersection of sheaf sets", F2_NAMES, _join),
    "sheafification": ("sheafification is left adjoint to inclusion, Σ separates, Σ of separated is a sheaf, Σ preserves kernels", F2_NAMES + ["kelly"], _sheafification),
    "gabriel": ("Gabriel localization at an idempotent and at a nilpotent", ["F2xF2", "F2[x]/x3"], _gabriel),
    "kernel": ("kernel of the sheafified Yoneda embedding; zero for subcanonical topologies", F2_NAMES, _kernel),
    "classification": ("classification of unit morphisms in the graded window is stable as the window grows", ["graded n=1 [-4,4]", "graded n=1 [-6,6]"], _classification),
    "projective": ("sheaf homs on the graded window match global sections of twisting sheaves", ["graded n=1", "graded n=2"], _projective),
    "monoidal": ("the topology of the variables is monoidal and equals the topology of the larger family", ["graded n=1 [-6,6]"], _monoidal),
    "kelly": ("sheaves on the tensor site are the row and column bi-sheaves", ["kelly"], _kelly),
}


def suite_names() -> list[str]:
    return list(SUITES)


def run_suite(name: str, cfg: HarnessConfig | None = None) -> SuiteResult:
    """Run one suite; checks are dispatched to a thread pool.

    Raises:
        KeyError: unknown suite name.
    """
    cfg = cfg or HarnessConfig()
    statement, insts, build = SUITES[name]
    tasks = build(cfg)
    t0 = time.perf_counter()
    if cfg.workers > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            checks = list(pool.map(lambda task: task[1](), tasks))
    else:
        checks = [fn() for _, fn in tasks]
    checks.sort(key=lambda ch: ch.name)
    return SuiteResult(name, statement, insts, checks, time.perf_counter() - t0)


def run_suites(names: list[str], cfg: HarnessConfig | None = None) -> list[SuiteResult]:
    if names == ["all"]:
        names = suite_names()
    return [run_suite(n, cfg) for n in names]


__all__ = [
    "Check",
    "HarnessConfig",
    "SUITES",
    "SuiteResult",
    "corrupted_family",
    "e1_local",
    "run_suite",
    "run_suites",
    "sheafification_contract",
    "suite_names",
]

import itertools

import pytest

import oracles
from linsite import corpus
from linsite.presheaf import enumerate_presheaves, representable
from linsite.pretop import gabriel_sequence, identity_sequence
from linsite.properties import (
    bounded_generation,
    canonical_topologies,
    right_exact,
    subcanonical_check,
    topology_report,
)
from linsite.sheafify import is_sheaf, kernel_of_z, sheafify_op
from linsite.sieve import generated_sieve
from linsite.topology import Topology, coarsest, enumerate_topologies, finest, join_meet

NAMES = list(corpus.BUILDERS)


def test_subcanonical_examples(k2, e1):
    c = k2.cat
    assert subcanonical_check(coarsest(c)).ok
    rep = subcanonical_check(finest(c))
    assert not rep.ok and rep.witness == "*"


def test_idempotent_topology_not_subcanonical(k2, e1):
    # 𝚈K(K) has dimension 2 while Nat((e1), 𝚈K) has dimension 1, so 𝚈K is
    # not a sheaf; consistently the kernel of 𝚉 is span{e2}, not zero.
    c = k2.cat
    t = Topology(c, {"*": generated_sieve(c, [e1])})
    rep = subcanonical_check(t)
    assert not rep.ok and not rep.kernel_zero and rep.cross_check


def test_right_exact(k2, e1):
    c = k2.cat
    assert right_exact(identity_sequence(c, "*"))
    assert not right_exact(gabriel_sequence(c, [e1]))


@pytest.mark.parametrize("name", NAMES)
def test_subcanonical_agrees_with_kernel_and_unit(name):
    c = corpus.instance(name).cat
    for t in enumerate_topologies(c):
        rep = subcanonical_check(t)
        assert rep.cross_check
        units = all(sheafify_op(t, representable(c, x)).unit.is_iso() for x in c.objects)
        assert rep.ok == (kernel_of_z(t).is_zero() and units)


@pytest.mark.parametrize("name", NAMES)
def test_joins_preserve_properties(name):
    c = corpus.instance(name).cat
    ts = enumerate_topologies(c)
    sub = [t for t in ts if subcanonical_check(t).ok]
    bnd = [t for t in ts if bounded_generation(t).ok]
    for a, b in itertools.combinations(sub, 2):
        assert subcanonical_check(join_meet([a, b]).join).ok
    for a, b in itertools.combinations(bnd, 2):
        assert bounded_generation(join_meet([a, b]).join).ok


@pytest.mark.parametrize("name", ["F2", "F2xF2", "F2[x]/x2", "F2[x]/x3"])
def test_canonical_is_coarsest_for_small_algebras(name):
    c = corpus.instance(name).cat
    rep = canonical_topologies(c)
    assert rep.canonical == coarsest(c)
    assert rep.canonical_is_subcanonical and rep.canonical_is_finest


def test_canonical_matches_left_exact_functors(a3rel):
    c = a3rel.cat
    rep = canonical_topologies(c)
    assert rep.canonical == rep.canonical_bounded
    oc = oracles.Cat(c.to_json())
    for p in enumerate_presheaves(c, 2):
        assert is_sheaf(rep.canonical_bounded, p) == oracles.left_exact(oracles.Pre(oc, p.to_json()))


def test_topology_report_json(k2):
    t = coarsest(k2.cat)
    doc = topology_report(t, monoidal=True, rank_in=enumerate_topologies(k2.cat)).to_json()
    assert doc["subcanonical"]["subcanonical"] is True
    assert doc["boundedGeneration"]["verdict"] == "bounded"
    assert doc["monoidal"]["ok"] is True
    assert doc["canonicalRank"] == 3

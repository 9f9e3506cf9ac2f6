import itertools

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from linsite import corpus
from linsite.errors import ValidationError
from linsite.exactla import QQ
from linsite.lincat import graded_window
from linsite.sieve import enumerate_sieves, generated_sieve, maximal_sieve, sieve_contains, zero_sieve
from linsite.topology import Topology, axiom_check, coarsest, enumerate_topologies, finest, join_meet

F2_NAMES = list(corpus.BUILDERS)


def minimal_key(c, t):
    oc = oracles.Cat(c.to_json())
    return tuple(sorted(oracles.min_sieves_from_json(oc, t.to_json()).items()))


def test_axiom_examples(k2, e1):
    c = k2.cat
    assert axiom_check(coarsest(c)).ok
    assert axiom_check(finest(c)).ok
    rep = axiom_check(Topology(c, {"*": generated_sieve(c, [e1])}))
    assert rep.ok and rep.mode == "exhaustive"


def test_axiom_candidate_mode_over_q():
    c = graded_window(QQ, 1, -2, 2)
    rep = axiom_check(coarsest(c))
    assert rep.ok and rep.mode == "verified on candidate set"


def test_t2_violation_reported():
    from linsite.harness import corrupted_family

    t, axiom = corrupted_family()
    rep = axiom_check(t)
    assert not rep.ok
    assert rep.violations[0]["axiom"] == axiom


def test_covers_examples(k2, e1, e2):
    c = k2.cat
    t = Topology(c, {"*": generated_sieve(c, [e1])})
    for u in (t, coarsest(c), finest(c)):
        assert u.covers(maximal_sieve(c, "*"))
    assert not coarsest(c).covers(zero_sieve(c, "*"))
    assert not t.covers(generated_sieve(c, [e2]))


def test_join_meet_examples(k2, e1, e2):
    c = k2.cat
    t1 = Topology(c, {"*": generated_sieve(c, [e1])})
    t2 = Topology(c, {"*": generated_sieve(c, [e2])})
    assert join_meet([t1]).join == t1
    assert join_meet([coarsest(c), t1]).join == t1
    assert join_meet([finest(c), t1]).meet == t1
    jm = join_meet([t1, t2])
    assert jm.join == finest(c)
    assert jm.meet == coarsest(c)


@pytest.mark.parametrize("name,count", [("F2", 2), ("F2xF2", 4), ("F2[x]/x2", 2)])
def test_enumeration_examples(name, count):
    assert len(enumerate_topologies(corpus.instance(name).cat)) == count


@pytest.mark.parametrize("name", F2_NAMES)
def test_enumeration_matches_brute_force(name):
    c = corpus.instance(name).cat
    oc = oracles.Cat(c.to_json())
    fams = oracles.topologies(oc)
    mine = {minimal_key(c, t) for t in enumerate_topologies(c)}
    theirs = {tuple(sorted(oracles.minimal(oc, f).items())) for f in fams}
    assert mine == theirs and len(fams) == len(mine)


@pytest.mark.parametrize("name", F2_NAMES)
def test_lattice_operations_match_brute_force(name):
    c = corpus.instance(name).cat
    oc = oracles.Cat(c.to_json())
    fams = oracles.topologies(oc)
    by_key = {tuple(sorted(oracles.minimal(oc, f).items())): f for f in fams}
    ts = enumerate_topologies(c)
    for t1, t2 in itertools.combinations_with_replacement(ts, 2):
        f1, f2 = by_key[minimal_key(c, t1)], by_key[minimal_key(c, t2)]
        jm = join_meet([t1, t2])
        lub = oracles.lub(fams, [f1, f2], oc)
        glb = oracles.glb([f1, f2], oc)
        assert minimal_key(c, jm.join) == tuple(sorted(oracles.minimal(oc, lub).items()))
        assert minimal_key(c, jm.meet) == tuple(sorted(oracles.minimal(oc, glb).items()))
        assert axiom_check(jm.join).ok and axiom_check(jm.meet).ok


@settings(max_examples=40, deadline=None)
@given(data=st.data(), name=st.sampled_from(["A2", "A3rel", "F2[x]/x3", "F2xF2"]))
def test_covers_monotone(data, name):
    c = corpus.instance(name).cat
    t = data.draw(st.sampled_from(enumerate_topologies(c)))
    x = data.draw(st.sampled_from(c.objects))
    ss = enumerate_sieves(c, x)
    r = data.draw(st.sampled_from(ss))
    s = data.draw(st.sampled_from(ss))
    if sieve_contains(s, r) and t.covers(r):
        assert t.covers(s)


@pytest.mark.parametrize("name", F2_NAMES)
def test_json_roundtrip(name):
    c = corpus.instance(name).cat
    for t in enumerate_topologies(c):
        assert Topology.from_json(c, t.to_json()) == t


def test_from_json_rejects_non_sieve(a2):
    c = a2.cat
    # {id_v2} alone is not closed: it must contain a
    with pytest.raises(ValidationError):
        Topology.from_json(c, {"minSieve": {"v2": {"v2": [[1]]}, "v1": {}}})

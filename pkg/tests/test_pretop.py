import itertools

import pytest
from conftest import simple

from linsite import corpus
from linsite.exactla import GF2, QQ
from linsite.lincat import Morphism, graded_window, quotient_polynomial_algebra
from linsite.monoidal import tv_pretopology, variables
from linsite.presheaf import enumerate_presheaves
from linsite.pretop import (
    UNKNOWN,
    VERIFIED,
    VIOLATED,
    FormalSequence,
    Pretopology,
    check_pta,
    check_ptb,
    gabriel_sequence,
    identity_sequence,
    in_pre,
    in_pre_prime,
    is_sheaf_via,
    pre_prime_generators,
    pre_two,
    top_of,
    two_bounded_candidates,
)
from linsite.sheafify import is_sheaf
from linsite.sieve import generated_sieve
from linsite.topology import Topology, coarsest, enumerate_topologies, finest, join_meet

F2_NAMES = list(corpus.BUILDERS)


def test_pta_examples(k2):
    assert check_pta(k2.pretopologies["s_e1"]).verdict == VERIFIED
    assert check_pta(Pretopology(k2.cat, [])).verdict == VERIFIED


def test_tv_family_structural():
    c = graded_window(QQ, 1, -3, 3)
    s = tv_pretopology(c, [variables(c)])
    assert s.meta["PTa"] == VERIFIED and s.meta["PTb"] == VERIFIED


def test_ptb_examples(k2, cube):
    assert check_ptb(k2.pretopologies["s_e1"]).verdict == VERIFIED
    assert check_ptb(cube.pretopologies["s_x"]).verdict == VERIFIED


def test_ptb_counterexample():
    # q = (1, x) on F2[x]/x^2 with no left map: its kernel is never killed
    c = quotient_polynomial_algebra(GF2, [0, 0, 1])
    seq = FormalSequence(c, "*", ["*", "*"], [], [Morphism("*", "*", (1, 0)), Morphism("*", "*", (0, 1))], [])
    rep = check_ptb(Pretopology(c, [seq]))
    assert rep.verdict == VIOLATED and rep.exhausted and rep.failures


def test_nonzero_composite_rejected(k2, e1):
    from linsite.errors import ValidationError

    with pytest.raises(ValidationError):
        FormalSequence(k2.cat, "*", ["*"], ["*"], [e1], [[e1]])


def test_top_of_examples(k2, cube, e1):
    c = k2.cat
    res = top_of(k2.pretopologies["s_e1"])
    assert res.topology.min_sieve("*") == generated_sieve(c, [e1])
    assert not res.warnings
    assert top_of(Pretopology(c, [])).topology == coarsest(c)
    assert top_of(cube.pretopologies["s_x"]).topology == finest(cube.cat)


def test_in_pre_prime_examples(k2, e1):
    c = k2.cat
    t = Topology(c, {"*": generated_sieve(c, [e1])})
    for u in (t, coarsest(c), finest(c)):
        assert in_pre_prime(u, identity_sequence(c, "*"))
    assert in_pre_prime(t, gabriel_sequence(c, [e1], resolve_kernel=True))
    assert not in_pre_prime(coarsest(c), gabriel_sequence(c, [e1], resolve_kernel=True))


def test_in_pre_examples(k2, e1, e2):
    c = k2.cat
    t = Topology(c, {"*": generated_sieve(c, [e1])})
    # the homology e1·K of ·e2 survives localization at e1
    assert not in_pre(t, gabriel_sequence(c, [e2]))
    for seq in two_bounded_candidates(c):
        assert in_pre(finest(c), seq)


@pytest.mark.parametrize("name", F2_NAMES)
def test_pre_prime_inside_pre(name):
    c = corpus.instance(name).cat
    for t in enumerate_topologies(c):
        for seq in pre_prime_generators(t).sequences:
            assert in_pre_prime(t, seq) and in_pre(t, seq)


@pytest.mark.parametrize("name", F2_NAMES + ["kelly"])
def test_pretopology_inside_pre_of_its_topology(name):
    inst = corpus.instance(name)
    for s in inst.pretopologies.values():
        t = top_of(s, check=False).topology
        assert all(in_pre(t, seq) for seq in s.sequences)


def test_is_sheaf_via_examples(k2):
    c = k2.cat
    s = k2.pretopologies["s_e1"]
    for f in enumerate_presheaves(c, 2):
        assert is_sheaf_via(Pretopology(c, []), f)
    assert is_sheaf_via(s, simple(c, True))
    assert not is_sheaf_via(s, simple(c, False))


def test_pre_two_examples(k2):
    c = k2.cat
    assert pre_two(coarsest(c), []).ok
    assert pre_two(finest(c), two_bounded_candidates(c)).ok


def test_pre_two_graded():
    c = graded_window(QQ, 1, -3, 3)
    s = tv_pretopology(c, [variables(c)], check=False)
    t = top_of(s, check=False).topology
    assert pre_two(t, s.sequences).ok


@pytest.mark.parametrize("name", F2_NAMES)
def test_roundtrip(name):
    c = corpus.instance(name).cat
    for t in enumerate_topologies(c):
        assert top_of(pre_prime_generators(t), check=False).topology == t


@pytest.mark.parametrize("name", F2_NAMES + ["kelly"])
def test_bundled_pretopologies_verified(name):
    for s in corpus.instance(name).pretopologies.values():
        res = top_of(s)
        assert res.pta.verdict == VERIFIED and res.ptb.verdict == VERIFIED
        assert res.axioms.ok


def test_union_is_join(k2):
    ps = k2.pretopologies
    for a, b in itertools.combinations(["s_e1", "s_e2", "s_e1e2"], 2):
        union = top_of(ps[a].union(ps[b]), check=False).topology
        jm = join_meet([top_of(ps[a], check=False).topology, top_of(ps[b], check=False).topology])
        assert union == jm.join


def test_monotone(k2):
    ps = k2.pretopologies
    small = top_of(ps["s_e1"], check=False).topology
    big = top_of(ps["s_e1+s_e2"], check=False).topology
    assert small.min_sieve("*").key() != big.min_sieve("*").key()
    from linsite.sieve import sieve_contains

    assert sieve_contains(small.min_sieve("*"), big.min_sieve("*"))


def test_json_roundtrip(k2):
    s = k2.pretopologies["s_e1+s_e2"]
    back = Pretopology.from_json(k2.cat, s.to_json())
    assert back.to_json() == s.to_json()


def test_unknown_is_a_verdict():
    assert UNKNOWN not in (VERIFIED, VIOLATED)

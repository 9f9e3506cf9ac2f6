import itertools

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from linsite import corpus
from linsite.lincat import Morphism
from linsite.sieve import (
    enumerate_sieves,
    generated_sieve,
    maximal_sieve,
    pullback_sieve,
    sieve_ops,
    zero_sieve,
)


def as_sets(c, s):
    """Sieve as a tuple of spans, in oracle format."""
    doc = s.to_json()
    return tuple(oracles.span([tuple(v) for v in doc.get(b, [])], c.hom_dim(b, s.apex)) for b in c.objects)


def test_generated_examples(k2, e1):
    c = k2.cat
    assert generated_sieve(c, [c.identity("*")]) == maximal_sieve(c, "*")
    assert generated_sieve(c, [], apex="*") == zero_sieve(c, "*")
    s = generated_sieve(c, [e1])
    assert s.dim("*") == 1 and s.contains_morphism(e1)


def test_pullback_examples(k2, e1, e2):
    c = k2.cat
    r = generated_sieve(c, [e1])
    assert pullback_sieve(r, c.identity("*")) == r
    assert pullback_sieve(maximal_sieve(c, "*"), e2).is_maximal()
    assert pullback_sieve(r, e2) == r


def test_ops_examples(k2, e1, e2):
    c = k2.cat
    r, s = generated_sieve(c, [e1]), generated_sieve(c, [e2])
    assert sieve_ops(r, r).intersection == r
    assert sieve_ops(r, maximal_sieve(c, "*")).intersection == r
    assert sieve_ops(r, s).intersection.is_zero()
    assert not sieve_ops(r, s).contains and sieve_ops(r, r).equals


@pytest.mark.parametrize("name,count", [("F2", 2), ("F2xF2", 4), ("F2[x]/x2", 3)])
def test_enumeration_examples(name, count):
    c = corpus.instance(name).cat
    assert len(enumerate_sieves(c, "*")) == count


@pytest.mark.parametrize("name", list(corpus.BUILDERS) + ["kelly"])
def test_enumeration_matches_oracle(name):
    c = corpus.instance(name).cat
    oc = oracles.Cat(c.to_json())
    for x in c.objects:
        mine = {as_sets(c, s) for s in enumerate_sieves(c, x)}
        assert mine == set(oracles.sieves(oc, x))


@pytest.mark.parametrize("name", list(corpus.BUILDERS))
def test_generated_is_closed(name):
    c = corpus.instance(name).cat
    oc = oracles.Cat(c.to_json())
    for x in c.objects:
        ms = [Morphism(b, x, v) for b in c.objects for v in oc.homs(b, x) if any(v)]
        for combo in itertools.combinations(ms, 2):
            s = generated_sieve(c, list(combo), apex=x)
            assert s.is_closed()
            assert as_sets(c, s) in set(oracles.sieves(oc, x))


@settings(max_examples=60, deadline=None)
@given(data=st.data(), name=st.sampled_from(["A2", "A3rel", "F2[x]/x3", "F2xF2"]))
def test_pullback_functorial(data, name):
    c = corpus.instance(name).cat
    oc = oracles.Cat(c.to_json())
    a = data.draw(st.sampled_from(c.objects))
    r = data.draw(st.sampled_from(enumerate_sieves(c, a)))
    b = data.draw(st.sampled_from(c.objects))
    d = data.draw(st.sampled_from(c.objects))
    fs = oc.homs(b, a)
    gs = oc.homs(d, b)
    if not fs or not gs:
        return
    f = Morphism(b, a, data.draw(st.sampled_from(fs)))
    g = Morphism(d, b, data.draw(st.sampled_from(gs)))
    assert pullback_sieve(r, c.compose(f, g)) == pullback_sieve(pullback_sieve(r, f), g)
    assert as_sets(c, pullback_sieve(r, f)) == oracles.pullback(oc, as_sets(c, r), f.coords, b, a)


def test_json_roundtrip(k2, e1):
    from linsite.sieve import Sieve

    s = generated_sieve(k2.cat, [e1])
    assert Sieve.from_json(k2.cat, "*", s.to_json()) == s

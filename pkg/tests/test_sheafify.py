import pytest
from conftest import simple
from hypothesis import given, settings, strategies as st

import oracles
from linsite import corpus
from linsite.exactla import rank_rows
from linsite.presheaf import cokernel, enumerate_maps, enumerate_presheaves, homology, kernel, nat_space, representable
from linsite.sheafify import (
    is_separated,
    is_sheaf,
    kernel_of_z,
    sh_hom,
    sheafify_op,
    sigma,
    sigma_map,
)
from linsite.sieve import generated_sieve
from linsite.topology import Topology, coarsest, enumerate_topologies, finest

NAMES = list(corpus.BUILDERS)
_CACHE = {}


def data(name):
    if name not in _CACHE:
        inst = corpus.instance(name)
        _CACHE[name] = (inst, enumerate_topologies(inst.cat), enumerate_presheaves(inst.cat, 2))
    return _CACHE[name]


def te1(c, e1):
    return Topology(c, {"*": generated_sieve(c, [e1])})


def sheafify_map(t, phi):
    sf, sg = sigma(t, phi.source), sigma(t, phi.target)
    s1 = sigma_map(t, phi, sf, sg)
    ssf, ssg = sigma(t, sf.presheaf), sigma(t, sg.presheaf)
    return sigma_map(t, s1, ssf, ssg)


def test_sigma_examples(k2, e1):
    c = k2.cat
    y = representable(c, "*")
    r = sigma(coarsest(c), y)
    assert r.presheaf.key() == y.key() and r.map.is_iso()
    assert sigma(finest(c), y).presheaf.is_zero()
    assert sigma(te1(c, e1), y).presheaf.dim("*") == 1


def test_sheafify_examples(k2, e1):
    c = k2.cat
    t = te1(c, e1)
    s = simple(c, True)
    assert sheafify_op(t, s).unit.is_iso()
    # localization M -> e1·M: e1·K is one-dimensional
    assert sheafify_op(t, representable(c, "*")).sheaf.dim("*") == 1
    assert sheafify_op(t, simple(c, False)).sheaf.is_zero()


def test_sheaf_predicate_examples(k2, e1):
    c = k2.cat
    for f in enumerate_presheaves(c, 2):
        assert is_sheaf(coarsest(c), f)
    assert not is_separated(finest(c), representable(c, "*"))
    assert is_sheaf(te1(c, e1), simple(c, True))


def test_kernel_examples(k2, e1):
    c = k2.cat
    assert kernel_of_z(coarsest(c)).is_zero()
    rep = kernel_of_z(te1(c, e1))
    assert [list(v) for v in rep.spaces[("*", "*")]] == [[0, 1]] and rep.cross_check
    full = kernel_of_z(finest(c)).spaces[("*", "*")]
    assert rank_rows(c.field, full, 2) == 2


@pytest.mark.parametrize("name", NAMES)
def test_kernel_matches_oracle(name):
    inst, ts, _ = data(name)
    c = inst.cat
    oc = oracles.Cat(c.to_json())
    for t in ts:
        ms = oracles.min_sieves_from_json(oc, t.to_json())
        rep = kernel_of_z(t)
        assert rep.cross_check
        for x in c.objects:
            for x2 in c.objects:
                mine = oracles.span(rep.spaces.get((x, x2), []), c.hom_dim(x, x2))
                assert mine == oracles.kernel_morphisms(oc, ms[x], x, x2)


@pytest.mark.parametrize("name", NAMES)
def test_sheaf_predicate_matches_oracle(name):
    inst, ts, ps = data(name)
    oc = oracles.Cat(inst.cat.to_json())
    fams = {tuple(sorted(oracles.minimal(oc, f).items())): f for f in oracles.topologies(oc)}
    for t in ts:
        fam = fams[tuple(sorted(oracles.min_sieves_from_json(oc, t.to_json()).items()))]
        for p in ps:
            assert is_sheaf(t, p) == oracles.is_sheaf(oracles.Pre(oc, p.to_json()), fam)


@pytest.mark.parametrize("name", NAMES)
def test_sigma_separates(name):
    _, ts, ps = data(name)
    for t in ts:
        for p in ps:
            s1 = sigma(t, p).presheaf
            assert is_separated(t, s1)
            if is_separated(t, p):
                assert is_sheaf(t, s1)
            if is_sheaf(t, p):
                assert sheafify_op(t, p).unit.is_iso()


@settings(max_examples=60, deadline=None)
@given(d=st.data(), name=st.sampled_from(NAMES))
def test_adjunction(d, name):
    inst, ts, ps = data(name)
    t = d.draw(st.sampled_from(ts))
    f = d.draw(st.sampled_from(ps))
    g = d.draw(st.sampled_from([p for p in ps if is_sheaf(t, p)]))
    res = sheafify_op(t, f)
    left, right = nat_space(res.sheaf, g), nat_space(f, g)
    assert left.dim == right.dim
    vecs = []
    for psi in left.basis:
        comp = psi.compose(res.unit)
        vecs.append([x for a in inst.cat.objects for r in comp.components[a] for x in r])
    if vecs:
        assert rank_rows(inst.cat.field, vecs, len(vecs[0])) == left.dim


@settings(max_examples=60, deadline=None)
@given(d=st.data(), name=st.sampled_from(NAMES))
def test_sigma_left_exact(d, name):
    inst, ts, ps = data(name)
    t = d.draw(st.sampled_from(ts))
    f = d.draw(st.sampled_from(ps))
    g = d.draw(st.sampled_from(ps))
    phi = d.draw(st.sampled_from(list(enumerate_maps(f, g, limit=16))))
    k, inc = kernel(phi)
    sf, sg, sk = sigma(t, f), sigma(t, g), sigma(t, k)
    sphi = sigma_map(t, phi, sf, sg)
    sinc = sigma_map(t, inc, sk, sf)
    kq, _ = kernel(sphi)
    assert sinc.is_injective()
    assert all(kq.dim(a) == sk.presheaf.dim(a) for a in inst.cat.objects)
    assert sphi.compose(sinc).is_zero()


@settings(max_examples=40, deadline=None)
@given(d=st.data(), name=st.sampled_from(NAMES))
def test_sheafification_exact(d, name):
    inst, ts, ps = data(name)
    t = d.draw(st.sampled_from(ts))
    f = d.draw(st.sampled_from(ps))
    g = d.draw(st.sampled_from(ps))
    phi = d.draw(st.sampled_from(list(enumerate_maps(f, g, limit=16))))
    _, inc = kernel(phi)
    _, proj = cokernel(phi)
    assert homology(sheafify_map(t, inc), sheafify_map(t, phi)).is_zero()
    assert homology(sheafify_map(t, phi), sheafify_map(t, proj)).is_zero()


@pytest.mark.parametrize("name", NAMES)
def test_sh_hom_subcanonical(name):
    inst, ts, _ = data(name)
    c = inst.cat
    t = coarsest(c)
    for x in c.objects:
        for x2 in c.objects:
            res = sh_hom(t, x, x2)
            assert res.dim == c.hom_dim(x, x2) and res.stabilized_at == 0

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from linsite import corpus
from linsite.errors import NotAComplex
from linsite.exactla import QQ
from linsite.lincat import Morphism, graded_label, graded_window
from linsite.presheaf import (
    Presheaf,
    enumerate_maps,
    enumerate_presheaves,
    homology,
    identity_map,
    kernel,
    nat_space,
    representable,
    yoneda_matrix_map,
    zero_map,
    zero_presheaf,
)

NAMES = list(corpus.BUILDERS)
_CACHE = {}


def presheaves(name):
    if name not in _CACHE:
        inst = corpus.instance(name)
        _CACHE[name] = (inst, enumerate_presheaves(inst.cat, max_dim=2))
    return _CACHE[name]


def test_representable_examples(k2, a2):
    assert representable(k2.cat, "*").dim("*") == 2
    y = representable(a2.cat, "v2")
    assert y.dim("v1") == 1 and y.dim("v2") == 1
    g = graded_window(QQ, 1, -2, 2)
    assert representable(g, graded_label(0)).dim(graded_label(1)) == 2


def test_nat_space_examples(k2):
    y = representable(k2.cat, "*")
    assert nat_space(y, y).dim == 2
    assert nat_space(y, zero_presheaf(k2.cat)).dim == 0


def test_homology_examples(dual):
    c = dual.cat
    x = Morphism("*", "*", (0, 1))
    mx = yoneda_matrix_map(c, ["*"], ["*"], [[x]])
    assert homology(mx, mx).is_zero()
    y = representable(c, "*")
    z = zero_map(y, y)
    assert homology(z, z).dim("*") == 2
    zero = zero_presheaf(c)
    assert homology(identity_map(y), zero_map(y, zero)).is_zero()
    with pytest.raises(NotAComplex):
        homology(identity_map(y), identity_map(y))


@pytest.mark.parametrize("name", NAMES)
def test_enumeration_count_matches_oracle(name):
    inst, ps = presheaves(name)
    assert len(ps) == oracles.count_presheaves(oracles.Cat(inst.cat.to_json()), 2)
    assert all(p.validate().ok for p in ps)


@pytest.mark.parametrize("name", NAMES)
def test_yoneda(name):
    inst, ps = presheaves(name)
    for x in inst.cat.objects:
        y = representable(inst.cat, x)
        for p in ps:
            assert nat_space(y, p).dim == p.dim(x)


@pytest.mark.parametrize("name", ["F2xF2", "A2", "F2[x]/x3"])
def test_nat_space_basis_natural(name):
    _, ps = presheaves(name)
    for f in ps[:12]:
        for g in ps[:12]:
            for m in nat_space(f, g).basis:
                assert m.validate().ok


@pytest.mark.parametrize("name", NAMES)
def test_json_roundtrip(name):
    inst, ps = presheaves(name)
    for p in ps:
        q = Presheaf.from_json(inst.cat, p.to_json())
        assert q.key() == p.key()


@settings(max_examples=40, deadline=None)
@given(data=st.data(), name=st.sampled_from(["F2xF2", "A2", "A3rel", "F2[x]/x2"]))
def test_kernel_sequence_is_exact(data, name):
    inst, ps = presheaves(name)
    f = data.draw(st.sampled_from(ps))
    g = data.draw(st.sampled_from(ps))
    maps = list(enumerate_maps(f, g, limit=32))
    phi = data.draw(st.sampled_from(maps))
    _, inc = kernel(phi)
    assert inc.is_injective()
    assert homology(inc, phi).is_zero()

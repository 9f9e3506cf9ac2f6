import pytest

import oracles
from linsite import corpus
from linsite.errors import ValidationError
from linsite.exactla import QQ
from linsite.lincat import graded_label, graded_window
from linsite.monoidal import (
    classify_u,
    factorization_search,
    finite_cokernel,
    kernel_vs_annihilator,
    monoidal_check,
    monomial_unit,
    proj_hom,
    sigma_sequence,
    strict_epi,
    tensor_sequence,
    tv_pretopology,
    variables,
)
from linsite.pretop import top_of
from linsite.properties import subcanonical_check
from linsite.topology import coarsest, finest


@pytest.fixture(scope="module")
def w4():
    return graded_window(QQ, 1, -4, 4)


@pytest.fixture(scope="module")
def w6():
    c = graded_window(QQ, 1, -6, 6)
    v = variables(c)
    s = tv_pretopology(c, [v], check=False)
    return c, v, s, top_of(s, check=False).topology


def units(c):
    v = variables(c)
    return {
        "v": v,
        "x0": [v[0]],
        "squares": monomial_unit(c, [(2, 0), (0, 2)]),
        "degree2": monomial_unit(c, [(2, 0), (1, 1), (0, 2)]),
        "x0,x1^2": monomial_unit(c, [(1, 0), (0, 2)]),
    }


def test_classify_examples(w4, k2):
    c = w4
    v = variables(c)
    assert classify_u(c, [c.identity(graded_label(0))]).classification == "InUex"
    assert classify_u(k2.cat, [k2.cat.identity("*")]).classification == "InUex"
    assert classify_u(c, v).classification == "InUex"
    res = classify_u(c, [v[0]])
    assert res.classification == "InUep" and res.witness["property"] == "exactness"


def test_classify_zero(k2):
    assert classify_u(k2.cat, [k2.cat.zero("*", "*")]).classification == "Zero"


def test_strict_epi_matches_classification(w4):
    for name, u in units(w4).items():
        assert strict_epi(w4, u) == (classify_u(w4, u).classification == "InUex"), name


def test_subcanonical_iff_in_uex(w4):
    for name, u in units(w4).items():
        if name == "degree2":
            continue
        t = top_of(tv_pretopology(w4, [u], check=False), check=False).topology
        assert subcanonical_check(t).ok == (classify_u(w4, u).classification == "InUex"), name


def test_subcanonical_iff_in_uex_idempotent(k2, e1):
    t = top_of(tv_pretopology(k2.cat, [[e1]], check=False), check=False).topology
    assert classify_u(k2.cat, [e1]).classification != "InUex"
    assert not subcanonical_check(t).ok


def test_identity_family_gives_coarsest(w4):
    s = tv_pretopology(w4, [[w4.identity(graded_label(0))]])
    assert top_of(s, check=False).topology == coarsest(w4)


def test_tv_requires_nonzero(k2):
    with pytest.raises(ValidationError):
        tv_pretopology(k2.cat, [[k2.cat.zero("*", "*")]])


def test_tv_minimal_sieves(w6):
    c, v, s, t = w6
    hi = c.meta["graded"]["hi"]
    for x in c.objects:
        srcs = sorted({g.source for g in t.generators(x)})
        # interior objects are covered by maps out of the top of the window
        assert set(srcs) <= {graded_label(hi - 1), graded_label(hi)}


def test_sequences_shape(w4):
    v = variables(w4)
    seq = sigma_sequence(w4, v)
    assert seq.target == graded_label(0) and len(seq.middle) == 2
    shifted = tensor_sequence(seq, graded_label(-1))
    assert shifted.target == graded_label(-1)


def test_monoidal_examples(w6):
    c, v, s, t = w6
    assert monoidal_check(coarsest(c)).ok
    assert monoidal_check(finest(c)).ok
    rep = monoidal_check(t)
    assert rep.ok and rep.checked > 0
    assert monoidal_check(t, pretopology=s).ok


def test_monoidal_algebras():
    for name in ("F2", "F2xF2", "F2[x]/x2", "F2[x]/x3"):
        inst = corpus.instance(name)
        for s in inst.pretopologies.values():
            assert monoidal_check(top_of(s, check=False).topology).ok


def test_tv_equals_larger_family(w6):
    c, v, s, t = w6
    sv = tv_pretopology(c, [v, *list(units(c).values())[2:4]], check=False)
    assert factorization_search(s, sv).ok and factorization_search(sv, s).ok
    assert top_of(sv, check=False).topology == t


def test_finite_cokernel(w6):
    c, v, _, _ = w6
    u = units(c)
    assert [finite_cokernel(c, u[k]) for k in ("squares", "degree2", "v")] == [3, 2, 1]
    assert finite_cokernel(c, u["x0"]) is None


def test_kernel_vs_annihilator(w4, k2, e1):
    for x, row in kernel_vs_annihilator(w4, [variables(w4)]).items():
        assert row["kernel"] == 0 and row["equal"]
    rows = kernel_vs_annihilator(k2.cat, [[e1]])
    assert rows["*"] == {"kernel": 1, "annihilator": 1, "equal": True}


@pytest.mark.parametrize("n,d,window", [(1, 0, 6), (1, 1, 6), (1, 2, 6), (1, 3, 6), (1, -1, 6), (1, -2, 6), (2, 1, 4)])
def test_proj_hom_matches_cech(n, d, window):
    res = proj_hom(n, d, window=window)
    assert res["dim"] == oracles.cech_h0(n, d)
    assert res["stabilizedAt"] is not None


@pytest.mark.parametrize("d", [0, 2, 3, -1])
def test_proj_hom_stable_under_window_growth(d):
    assert proj_hom(1, d, window=6)["dim"] == proj_hom(1, d, window=8)["dim"]


def test_proj_hom_outside_window():
    with pytest.raises(ValidationError):
        proj_hom(1, 9, window=4)


def test_classification_stable():
    out = []
    for w in (4, 6):
        c = graded_window(QQ, 1, -w, w)
        v = variables(c)
        out.append((classify_u(c, v).classification, classify_u(c, [v[0]]).classification))
    assert out[0] == out[1] == ("InUex", "InUep")


def test_unit_morphism_json(w4):
    doc = classify_u(w4, variables(w4)).to_json(w4)
    assert doc["window"] == [-4, 4] and doc["classification"] == "InUex"

import copy
import itertools

import pytest
from hypothesis import given, settings, strategies as st

from linsite import corpus
from linsite.errors import NotFinite, ValidationError
from linsite.exactla import GF2, QQ
from linsite.lincat import (
    FinLinearCategory,
    from_algebra,
    from_quiver,
    graded_label,
    graded_window,
    monomials,
    polynomial_morphism,
    product_algebra,
    quotient_polynomial_algebra,
    tensor_category,
    validate,
)


def test_product_algebra_valid(k2):
    assert validate(k2.cat).ok
    assert k2.cat.hom_dim("*", "*") == 2


def test_broken_identity_names_object(k2):
    doc = copy.deepcopy(k2.cat.to_json())
    doc["identity"]["*"] = [1, 0]
    rep = validate(FinLinearCategory.from_json(doc))
    assert not rep.ok
    assert any("*" in v for v in rep.violations)


def test_a2_quiver(a2):
    c = a2.cat
    assert validate(c).ok
    assert c.hom_dim("v1", "v2") == 1 and c.hom_dim("v2", "v1") == 0
    assert c.hom_dim("v1", "v1") == c.hom_dim("v2", "v2") == 1


def test_idempotent_algebra():
    # F_2[x]/(x^2 - x) = F_2[x]/(x^2 + x): x and 1 + x are orthogonal idempotents
    c = quotient_polynomial_algebra(GF2, [0, 1, 1])
    assert c.hom_dim("*", "*") == 2
    x = c.morphism("*", "*", (0, 1))
    y = c.morphism("*", "*", (1, 1))
    assert c.compose(x, x) == x and c.compose(y, y) == y
    assert c.compose(x, y).is_zero()


def test_small_algebras():
    assert product_algebra(GF2, 1).hom_dim("*", "*") == 1
    c = quotient_polynomial_algebra(GF2, [0, 0, 0, 1])
    x = c.morphism("*", "*", (0, 1, 0))
    assert c.hom_dim("*", "*") == 3
    assert not c.compose(x, x).is_zero() and c.compose(x, c.compose(x, x)).is_zero()


def test_loop_with_relation_matches_algebra():
    q = from_quiver(GF2, ["*"], [("x", "*", "*")], [[(1, ("x", "x"))]])
    a = quotient_polynomial_algebra(GF2, [0, 0, 1])
    assert q.hom_dim("*", "*") == a.hom_dim("*", "*") == 2
    assert q.to_json()["compose"][0]["table"] == a.to_json()["compose"][0]["table"]


def test_single_vertex_quiver():
    assert from_quiver(GF2, ["v"], []).hom_dim("v", "v") == 1


def test_unbounded_loop_not_finite():
    with pytest.raises(NotFinite):
        from_quiver(GF2, ["*"], [("x", "*", "*")], max_length=8)


def test_nonassociative_constants_rejected():
    bad = [[(0, 1), (0, 0)], [(0, 0), (1, 0)]]
    with pytest.raises(ValidationError):
        from_algebra(GF2, bad)


def test_graded_window_dims():
    c = graded_window(QQ, 1, -3, 3)
    assert validate(c).ok
    assert c.hom_dim(graded_label(1), graded_label(0)) == 2
    assert c.hom_dim(graded_label(0), graded_label(1)) == 0
    c2 = graded_window(QQ, 2, -2, 2)
    assert c2.hom_dim(graded_label(2), graded_label(0)) == 6


@settings(max_examples=40, deadline=None)
@given(a=st.tuples(st.integers(0, 2), st.integers(0, 2)), b=st.tuples(st.integers(0, 2), st.integers(0, 2)))
def test_graded_composition_is_multiplication(a, b):
    c = graded_window(QQ, 1, -4, 4)
    da, db = sum(a), sum(b)
    if da + db > 4:
        return
    # f: S<da+db> -> S<db> multiplies by x^a, g: S<db> -> S<0> multiplies by x^b
    f = polynomial_morphism(c, graded_label(da + db), graded_label(db), {a: 1})
    g = polynomial_morphism(c, graded_label(db), graded_label(0), {b: 1})
    prod = tuple(x + y for x, y in zip(a, b))
    assert c.compose(g, f) == polynomial_morphism(c, graded_label(da + db), graded_label(0), {prod: 1})


def test_monomial_count():
    assert len(monomials(3, 2)) == 6


def test_tensor_category_dims(k2, dual):
    t = tensor_category(k2.cat, dual.cat)
    assert validate(t).ok
    (o,) = t.objects
    assert t.hom_dim(o, o) == 4
    one = product_algebra(GF2, 1)
    t1 = tensor_category(one, one)
    assert t1.hom_dim(t1.objects[0], t1.objects[0]) == 1


def test_tensor_dims_are_products():
    for a, b in itertools.combinations_with_replacement([corpus.f2(), corpus.f2xf2(), corpus.a2()], 2):
        t = tensor_category(a.cat, b.cat)
        assert validate(t).ok
        pairs = t.meta["tensor"]["pairs"]
        for o1, (x1, y1) in pairs.items():
            for o2, (x2, y2) in pairs.items():
                assert t.hom_dim(o1, o2) == a.cat.hom_dim(x1, x2) * b.cat.hom_dim(y1, y2)


@pytest.mark.parametrize("name", list(corpus.BUILDERS))
def test_builders_validate_and_roundtrip(name):
    c = corpus.instance(name).cat
    assert validate(c).ok
    back = FinLinearCategory.from_json(c.to_json())
    assert back.to_json() == c.to_json()


def test_malformed_document():
    with pytest.raises(ValidationError):
        FinLinearCategory.from_json({"objects": ["a"]})

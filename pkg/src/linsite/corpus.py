"""Bundled example instances: small categories, pretopologies and graded windows.

``python -m linsite.corpus DIR`` writes every instance as JSON files.
"""

from __future__ import annotations

import json
import os
import sys
from dataclasses import dataclass, field as dc_field

from .exactla import GF2
from .lincat import (
    FinLinearCategory,
    Morphism,
    algebra_monoidal,
    from_quiver,
    product_algebra,
    quotient_polynomial_algebra,
    tensor_category,
)
from .pretop import FormalSequence, Pretopology, gabriel_sequence, tensor_side


@dataclass
class Instance:
    """A bundled category with named pretopologies."""

    name: str
    cat: FinLinearCategory
    pretopologies: dict = dc_field(default_factory=dict)


def _alg(c, coords):
    return Morphism("*", "*", tuple(coords))


def f2() -> Instance:
    c = product_algebra(GF2, 1, name="F2")
    algebra_monoidal(c)
    zero = FormalSequence(c, "*", [], [], [], [])
    return Instance("F2", c, {"empty": Pretopology(c, [], name="empty"), "zero": Pretopology(c, [zero], name="zero")})


def f2xf2() -> Instance:
    c = product_algebra(GF2, 2, name="F2xF2")
    algebra_monoidal(c)
    e1, e2 = _alg(c, (1, 0)), _alg(c, (0, 1))
    s1 = gabriel_sequence(c, [e1])
    s2 = gabriel_sequence(c, [e2])
    s12 = gabriel_sequence(c, [e1, e2])
    return Instance(
        "F2xF2",
        c,
        {
            "s_e1": Pretopology(c, [s1], name="s_e1"),
            "s_e2": Pretopology(c, [s2], name="s_e2"),
            "s_e1e2": Pretopology(c, [s12], name="s_e1e2"),
            "s_e1+s_e2": Pretopology(c, [s1, s2], name="s_e1+s_e2"),
        },
    )


def f2_dual() -> Instance:
    c = quotient_polynomial_algebra(GF2, [0, 0, 1], name="F2[x]/x2")
    algebra_monoidal(c)
    x = _alg(c, (0, 1))
    return Instance("F2[x]/x2", c, {"s_x": Pretopology(c, [gabriel_sequence(c, [x])], name="s_x")})


def f2_cube() -> Instance:
    c = quotient_polynomial_algebra(GF2, [0, 0, 0, 1], name="F2[x]/x3")
    algebra_monoidal(c)
    x, x2 = _alg(c, (0, 1, 0)), _alg(c, (0, 0, 1))
    return Instance(
        "F2[x]/x3",
        c,
        {
            "s_x": Pretopology(c, [gabriel_sequence(c, [x])], name="s_x"),
            "s_x2": Pretopology(c, [gabriel_sequence(c, [x2])], name="s_x2"),
        },
    )


def a2() -> Instance:
    c = from_quiver(GF2, ["v1", "v2"], [("a", "v1", "v2")], name="A2")
    a = c.basis("v1", "v2")[0]
    by_a = FormalSequence(c, "v2", ["v1"], [], [a], [])
    zero_v1 = FormalSequence(c, "v1", [], [], [], [])
    return Instance(
        "A2",
        c,
        {
            "cover_v2_by_a": Pretopology(c, [by_a], name="cover_v2_by_a"),
            "kill_v1": Pretopology(c, [zero_v1], name="kill_v1"),
        },
    )


def a3rel() -> Instance:
    """Indecomposables S2 -> P -> S1 of the A2 representations, composite zero."""
    c = from_quiver(GF2, ["S2", "P", "S1"], [("i", "S2", "P"), ("pi", "P", "S1")], [[(1, ("i", "pi"))]], name="A3rel")
    i, pi = c.basis("S2", "P")[0], c.basis("P", "S1")[0]
    ses = FormalSequence(c, "S1", ["P"], ["S2"], [pi], [[i]])
    return Instance("A3rel", c, {"exact": Pretopology(c, [ses], name="exact")})


def kelly() -> Instance:
    """F2xF2 ⊗ F2[x]/x2 with the row and column pretopologies."""
    a, b = f2xf2(), f2_dual()
    c = tensor_category(a.cat, b.cat, name="F2xF2(x)F2[x]/x2")
    sl = tensor_side(a.pretopologies["s_e1"], c, "left")
    sr = tensor_side(b.pretopologies["s_x"], c, "right")
    inst = Instance(c.name, c, {"rows": sl, "columns": sr, "union": sl.union(sr)})
    inst.pretopologies["union"].name = "union"
    return inst


BUILDERS = {"F2": f2, "F2xF2": f2xf2, "F2[x]/x2": f2_dual, "F2[x]/x3": f2_cube, "A2": a2, "A3rel": a3rel}


def instances() -> list[Instance]:
    """The small F_2 instances (the tensor instance is separate)."""
    return [b() for b in BUILDERS.values()]


def instance(name: str) -> Instance:
    if name == "kelly":
        return kelly()
    return BUILDERS[name]()


def _slug(name: str) -> str:
    return "".join(ch if ch.isalnum() else "_" for ch in name).strip("_")


def dump(directory: str) -> list[str]:
    """Write every category and pretopology as sorted-key JSON."""
    os.makedirs(directory, exist_ok=True)
    written = []
    for inst in instances() + [kelly()]:
        base = _slug(inst.name)
        path = os.path.join(directory, f"{base}.category.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(inst.cat.to_json(), fh, sort_keys=True, indent=1, ensure_ascii=False)
        written.append(path)
        for pname, pt in inst.pretopologies.items():
            path = os.path.join(directory, f"{base}.{_slug(pname)}.pretopology.json")
            with open(path, "w", encoding="utf-8") as fh:
                json.dump(pt.to_json(), fh, sort_keys=True, indent=1, ensure_ascii=False)
            written.append(path)
    return written


if __name__ == "__main__":  # pragma: no cover
    for p in dump(sys.argv[1] if len(sys.argv) > 1 else os.path.join(os.path.dirname(__file__), "data")):
        print(p)

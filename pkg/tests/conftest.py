"""Shared fixtures: bundled instances and F_2 shortcuts."""

import pytest

from linsite import corpus
from linsite.lincat import Morphism


@pytest.fixture(scope="session")
def k2():
    """F_2 x F_2 with its Gabriel pretopologies."""
    return corpus.f2xf2()


@pytest.fixture(scope="session")
def e1():
    return Morphism("*", "*", (1, 0))


@pytest.fixture(scope="session")
def e2():
    return Morphism("*", "*", (0, 1))


@pytest.fixture(scope="session")
def dual():
    return corpus.f2_dual()


@pytest.fixture(scope="session")
def cube():
    return corpus.f2_cube()


@pytest.fixture(scope="session")
def a2():
    return corpus.a2()


@pytest.fixture(scope="session")
def a3rel():
    return corpus.a3rel()


@pytest.fixture(scope="session")
def kelly_inst():
    return corpus.kelly()


def simple(c, at_e1: bool):
    """The one-dimensional F_2 x F_2 module where e1 (or e2) acts as 1."""
    from linsite.presheaf import Presheaf

    act = {"*|*|e1": [[1 if at_e1 else 0]], "*|*|e2": [[0 if at_e1 else 1]]}
    return Presheaf.from_json(c, {"values": {"*": 1}, "action": act})

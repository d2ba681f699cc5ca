"""Built-in algebras, cobrackets and Manin triples.

Names:

* algebras: ``A4``, ``sl2``, ``so3``, ``heisenberg`` and the family
  ``abelian:n<N>:d<D>``;
* cobrackets: ``wedge-abelian``, ``wedge-abelian-dual``, ``heisenberg-dc``,
  ``sl2-standard``, ``A4-wedge-e1`` and ``zero:<algebra name>``;
* triples: ``double:<cobracket name>``.

Indices in the definitions below are 0-based.
"""

from __future__ import annotations

import re
from functools import lru_cache
from typing import Union

from .algebra import NLieAlgebra
from .bialgebra import Cobracket, dual_bialgebra
from .double import ManinTriple, build_double

__all__ = [
    "catalog",
    "algebra",
    "cobracket",
    "triple",
    "algebra_names",
    "cobracket_names",
    "triple_names",
    "names",
    "UnknownName",
]

_ABELIAN = re.compile(r"^abelian:n(\d+):d(\d+)$")


class UnknownName(KeyError):
    def __init__(self, name: str, available):
        self.name = name
        self.available = list(available)
        super().__init__(f"unknown catalog name {name!r}; available: {', '.join(self.available)}")

    def __str__(self) -> str:
        return self.args[0]


def _A4() -> NLieAlgebra:
    # [e1, e2, e3] = e4
    return NLieAlgebra(3, 4, {(0, 1, 2): {3: 1}}, name="A4")


def _sl2() -> NLieAlgebra:
    # basis (e, f, h): [h, e] = 2e, [h, f] = -2f, [e, f] = h
    return NLieAlgebra(2, 3, {(0, 1): {2: 1}, (0, 2): {0: -2}, (1, 2): {1: 2}}, name="sl2")


def _so3() -> NLieAlgebra:
    # [e1, e2] = e3, [e2, e3] = e1, [e3, e1] = e2
    return NLieAlgebra(2, 3, {(0, 1): {2: 1}, (1, 2): {0: 1}, (0, 2): {1: -1}}, name="so3")


def _heisenberg() -> NLieAlgebra:
    # [e1, e2] = e3
    return NLieAlgebra(2, 3, {(0, 1): {2: 1}}, name="heisenberg")


_ALGEBRAS = {"A4": _A4, "sl2": _sl2, "so3": _so3, "heisenberg": _heisenberg}
# enumerated members of the abelian family (the family itself is open)
_LISTED_ABELIAN = ("abelian:n2:d3", "abelian:n3:d4")


def _wedge_abelian() -> Cobracket:
    # abelian 3-Lie algebra of dimension 4, gamma(e4) = e1 ^ e2 ^ e3
    return Cobracket.from_wedges(algebra("abelian:n3:d4"), {3: {(0, 1, 2): 1}}, name="wedge-abelian")


def _wedge_abelian_dual() -> Cobracket:
    cb = dual_bialgebra(cobracket("wedge-abelian"))
    out = Cobracket(cb.algebra, cb.tensor, name="wedge-abelian-dual")
    out.algebra.name = "A4*"
    return out


def _heisenberg_dc() -> Cobracket:
    # gamma(e1) = e2 ^ e3: a double-construction Lie bialgebra
    return Cobracket.from_wedges(algebra("heisenberg"), {0: {(1, 2): 1}}, name="heisenberg-dc")


def _sl2_standard() -> Cobracket:
    # gamma(e) = e ^ h, gamma(f) = f ^ h, gamma(h) = 0
    return Cobracket.from_wedges(algebra("sl2"), {0: {(0, 2): 1}, 1: {(1, 2): 1}}, name="sl2-standard")


def _A4_wedge_e1() -> Cobracket:
    # gamma(e1) = e2 ^ e3 ^ e4 on A4: a bialgebra that is not a double construction
    return Cobracket.from_wedges(algebra("A4"), {0: {(1, 2, 3): 1}}, name="A4-wedge-e1")


_COBRACKETS = {
    "wedge-abelian": _wedge_abelian,
    "wedge-abelian-dual": _wedge_abelian_dual,
    "heisenberg-dc": _heisenberg_dc,
    "sl2-standard": _sl2_standard,
    "A4-wedge-e1": _A4_wedge_e1,
}


def algebra_names() -> list[str]:
    return list(_ALGEBRAS) + list(_LISTED_ABELIAN)


def cobracket_names() -> list[str]:
    return list(_COBRACKETS) + [f"zero:{a}" for a in algebra_names()]


def triple_names() -> list[str]:
    return [f"double:{c}" for c in cobracket_names()]


def names() -> list[str]:
    return algebra_names() + cobracket_names() + triple_names()


@lru_cache(maxsize=None)
def algebra(name: str) -> NLieAlgebra:
    if name in _ALGEBRAS:
        return _ALGEBRAS[name]()
    m = _ABELIAN.match(name)
    if m:
        n, d = int(m.group(1)), int(m.group(2))
        if n >= 2 and d >= 1:
            return NLieAlgebra.abelian(n, d)
    raise UnknownName(name, algebra_names() + ["abelian:n<N>:d<D>"])


@lru_cache(maxsize=None)
def cobracket(name: str) -> Cobracket:
    if name in _COBRACKETS:
        return _COBRACKETS[name]()
    if name.startswith("zero:"):
        alg = algebra(name[len("zero:"):])
        return Cobracket.zero(alg, name=name)
    raise UnknownName(name, cobracket_names())


@lru_cache(maxsize=None)
def triple(name: str) -> ManinTriple:
    if name.startswith("double:"):
        t = build_double(cobracket(name[len("double:"):])).triple()
        t.name = name
        return t
    raise UnknownName(name, triple_names())


def catalog(name: str) -> Union[NLieAlgebra, Cobracket, ManinTriple]:
    """Look up any built-in object by name."""
    for getter in (algebra, cobracket, triple):
        try:
            return getter(name)
        except UnknownName:
            continue
    raise UnknownName(name, names())

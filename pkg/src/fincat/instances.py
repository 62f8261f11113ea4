"""EnumCat instances over finite sets and finite posets."""

from __future__ import annotations

from .enumcat import EnumCat
from .errors import BoundError
from . import finset as fs
from . import order as od

FINSET_MAX_BOUND = 5
FINPOS_MAX_BOUND = 4


class FinSetCat(EnumCat):
    """Finite sets of size <= bound with all functions between them."""

    def __init__(self, bound: int):
        if bound > FINSET_MAX_BOUND:
            estimate = sum((y + 1) ** x for x in range(bound + 1) for y in range(bound + 1))
            raise BoundError(
                f"finset bound {bound} exceeds the maximum {FINSET_MAX_BOUND} "
                f"(roughly {estimate} arrows to sweep)"
            )
        self.bound = bound
        self.name = f"finset(bound={bound})"
        self._objects = tuple(fs.FinSet.range(n) for n in range(bound + 1))
        self._homs: dict[tuple, tuple] = {}

    def objects(self):
        return self._objects

    def hom(self, x, y):
        key = (x.labels, y.labels)
        out = self._homs.get(key)
        if out is None:
            out = tuple(fs.enumerate_fns(x, y))
            self._homs[key] = out
        return out

    def identity(self, x):
        return fs.FinFn.identity(x)

    def then(self, f, g):
        return f.then(g)

    def src(self, f):
        return f.dom

    def dst(self, f):
        return f.cod

    def grade(self, x):
        return x.size

    def obj_json(self, x):
        return x.to_json()

    def mor_json(self, f):
        return f.to_json()

    def pullback(self, f, g):
        return fs.pullback_fn(f, g)

    def coequalizer(self, f, g):
        return fs.coequalizer_fn(f, g)

    def regular_epi_decision(self, f):
        return fs.classify_fn(f).regular_epi

    def is_epi(self, f):
        return f.is_surjective


class FinPosCat(EnumCat):
    """Finite posets of size <= bound (canonical forms, one per iso class)
    with all monotone maps between them."""

    def __init__(self, bound: int):
        if bound > FINPOS_MAX_BOUND:
            raise BoundError(
                f"finpos bound {bound} exceeds the maximum {FINPOS_MAX_BOUND} "
                f"(63 isomorphism classes at size 5 alone; the square sweep is out of budget)"
            )
        self.bound = bound
        self.name = f"finpos(bound={bound})"
        objs = []
        for n in range(bound + 1):
            objs.extend(od.enumerate_posets(n))
        self._objects = tuple(objs)
        self._homs: dict[tuple, tuple] = {}

    def objects(self):
        return self._objects

    def hom(self, x, y):
        key = (x.carrier.labels, x.leq, y.carrier.labels, y.leq)
        out = self._homs.get(key)
        if out is None:
            out = tuple(od.enumerate_monotone(x, y))
            self._homs[key] = out
        return out

    def identity(self, x):
        return od.MonotoneMap.identity(x)

    def then(self, f, g):
        return f.then(g)

    def src(self, f):
        return f.dom

    def dst(self, f):
        return f.cod

    def grade(self, x):
        return x.size

    def obj_json(self, x):
        return x.to_json()

    def mor_json(self, f):
        return f.to_json()

    def pullback(self, f, g):
        return od.pullback_pos(f, g)

    def coequalizer(self, f, g):
        return od.coequalizer_pos(f, g)

    def regular_epi_decision(self, f):
        return od.classify_pos(f).regular_epi

    def regular_epi_fast(self, f):
        return od.quotient_projection_regular(f.dom, f.table, f.cod)

    def stability_probe(self, u, r):
        return od.pullback_projection_regular(u.dom, u.table, r.dom, r.table)

    def is_epi(self, f):
        return f.is_surjective

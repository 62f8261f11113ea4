"""The coslice category of arrows out of a fixed base set.

Objects are functions out of the base; morphisms are commuting
triangles under it.  Limits and colimits are computed on the underlying
sets, with the induced base arrow.
"""

from __future__ import annotations

from dataclasses import dataclass

from .enumcat import EnumCat
from .errors import BoundError, ValidationError
from . import finset as fs

COSLICE_MAX_BOUND = 4
COSLICE_MAX_BASE = 3


@dataclass(frozen=True)
class CoslObj:
    """An arrow out of the base: the base is ``arrow.dom``."""

    arrow: fs.FinFn

    @property
    def base(self) -> fs.FinSet:
        return self.arrow.dom

    @property
    def carrier(self) -> fs.FinSet:
        return self.arrow.cod

    def to_json(self) -> dict:
        return {"arrow": self.arrow.to_json()}

    @classmethod
    def from_json(cls, data) -> CoslObj:
        if not isinstance(data, dict) or "arrow" not in data:
            raise ValidationError("coslice object JSON must be an object with an 'arrow'")
        return cls(fs.FinFn.from_json(data["arrow"]))


@dataclass(frozen=True)
class CoslMor:
    """A map between codomains commuting with the two base arrows."""

    src: CoslObj
    dst: CoslObj
    map: fs.FinFn

    def __post_init__(self) -> None:
        if self.src.base != self.dst.base:
            raise ValidationError("coslice morphism endpoints have different bases")
        if self.map.dom != self.src.carrier or self.map.cod != self.dst.carrier:
            raise ValidationError("coslice morphism map does not match its endpoints")
        if self.src.arrow.then(self.map) != self.dst.arrow:
            raise ValidationError("coslice triangle does not commute")

    def then(self, other: CoslMor) -> CoslMor:
        if self.dst != other.src:
            raise ValueError("cannot compose coslice morphisms with mismatched endpoints")
        return CoslMor(self.src, other.dst, self.map.then(other.map))

    @classmethod
    def identity(cls, x: CoslObj) -> CoslMor:
        return cls(x, x, fs.FinFn.identity(x.carrier))

    def to_json(self) -> dict:
        return {"src": self.src.to_json(), "dst": self.dst.to_json(), "map": self.map.to_json()}


def coslice_pullback(f: CoslMor, g: CoslMor) -> tuple[CoslObj, CoslMor, CoslMor]:
    """Pullback computed on underlying sets, base arrow induced."""
    if f.dst != g.dst:
        raise ValueError("coslice pullback needs a common codomain")
    apex_set, p0, p1 = fs.pullback_fn(f.map, g.map)
    pair_index = {
        (p0.table[i], p1.table[i]): i for i in range(apex_set.size)
    }
    base = f.src.base
    base_arrow = fs.FinFn(
        base,
        apex_set,
        tuple(
            pair_index[(f.src.arrow.table[a], g.src.arrow.table[a])]
            for a in range(base.size)
        ),
    )
    apex = CoslObj(base_arrow)
    return apex, CoslMor(apex, f.src, p0), CoslMor(apex, g.src, p1)


def coslice_coequalizer(f: CoslMor, g: CoslMor) -> tuple[CoslObj, CoslMor]:
    """Coequalizer computed on underlying sets, base arrow induced."""
    if f.src != g.src or f.dst != g.dst:
        raise ValueError("coslice coequalizer needs a parallel pair")
    qset, proj = fs.coequalizer_fn(f.map, g.map)
    target = CoslObj(f.dst.arrow.then(proj))
    return target, CoslMor(f.dst, target, proj)


def coslice_coproduct(x: CoslObj, y: CoslObj) -> tuple[CoslObj, CoslMor, CoslMor]:
    """Binary coproduct under the base: the pushout over it.

    Built as the coequalizer of the two base inclusions into the
    disjoint union of the carriers.
    """
    if x.base != y.base:
        raise ValueError("coslice coproduct needs objects over the same base")
    base = x.base
    labels = tuple(f"l:{lab}" for lab in x.carrier.labels) + tuple(
        f"r:{lab}" for lab in y.carrier.labels
    )
    disjoint = fs.FinSet(labels)
    inl = fs.FinFn(x.carrier, disjoint, tuple(range(x.carrier.size)))
    inr = fs.FinFn(
        y.carrier, disjoint, tuple(x.carrier.size + i for i in range(y.carrier.size))
    )
    qset, proj = fs.coequalizer_fn(x.arrow.then(inl), y.arrow.then(inr))
    target = CoslObj(x.arrow.then(inl).then(proj))
    mor_x = CoslMor(x, target, inl.then(proj))
    mor_y = CoslMor(y, target, inr.then(proj))
    return target, mor_x, mor_y


class CosliceCat(EnumCat):
    """The coslice over a base, with codomain carriers of size <= bound."""

    def __init__(self, base: fs.FinSet, bound: int):
        if bound > COSLICE_MAX_BOUND:
            raise BoundError(
                f"coslice bound {bound} exceeds the maximum {COSLICE_MAX_BOUND} "
                f"(about {(bound + 1) ** base.size * (bound + 1)} objects to pair up)"
            )
        if base.size > COSLICE_MAX_BASE:
            raise BoundError(f"coslice base size {base.size} exceeds the maximum {COSLICE_MAX_BASE}")
        self.base = base
        self.bound = bound
        self.name = f"coslice(|A|={base.size}, bound={bound})"
        objs = []
        for s in range(bound + 1):
            cod = fs.FinSet.range(s)
            for fn in fs.enumerate_fns(base, cod):
                objs.append(CoslObj(fn))
        self._objects = tuple(objs)
        self._homs: dict[tuple, tuple] = {}

    def objects(self):
        return self._objects

    def hom(self, x, y):
        key = (x.arrow.cod.labels, x.arrow.table, y.arrow.cod.labels, y.arrow.table)
        out = self._homs.get(key)
        if out is None:
            mors = []
            for fn in fs.enumerate_fns(x.carrier, y.carrier):
                if x.arrow.then(fn) == y.arrow:
                    mors.append(CoslMor(x, y, fn))
            out = tuple(mors)
            self._homs[key] = out
        return out

    def identity(self, x):
        return CoslMor.identity(x)

    def then(self, f, g):
        return f.then(g)

    def src(self, f):
        return f.src

    def dst(self, f):
        return f.dst

    def grade(self, x):
        return x.carrier.size

    def obj_json(self, x):
        return x.to_json()

    def mor_json(self, f):
        return f.to_json()

    def pullback(self, f, g):
        return coslice_pullback(f, g)

    def coequalizer(self, f, g):
        return coslice_coequalizer(f, g)

    def regular_epi_decision(self, f):
        kp = self.kernel_pair(f)
        assert kp is not None
        _, p0, p1 = kp
        q, c = coslice_coequalizer(p0, p1)
        comparison = [0] * q.carrier.size
        for i in range(f.src.carrier.size):
            comparison[c.map.table[i]] = f.map.table[i]
        cmp_fn = fs.FinFn(q.carrier, f.dst.carrier, tuple(comparison))
        return cmp_fn.is_injective and cmp_fn.is_surjective

    def is_epi(self, f):
        return f.map.is_surjective

"""Poset-shaped diagrams of finite sets, cones and limits.

A diagram assigns a finite set to every shape element and a function to
every related pair, functorially.  The limit is computed as the set of
compatible families, and cones with a fixed apex correspond bijectively
to functions from the apex into the limit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

from .errors import ValidationError
from .finset import FinFn, FinSet
from .order import FinPoset


@dataclass(frozen=True)
class Diagram:
    """A functor from a finite poset shape to finite sets.

    ``arrows`` is aligned with ``shape.related_pairs()``; identity
    arrows are implied.  Deep functoriality is checked by
    :meth:`validate` (called on deserialized values and in tests).
    """

    shape: FinPoset
    objs: tuple[FinSet, ...]
    arrows: tuple[FinFn, ...]

    def __post_init__(self) -> None:
        pairs = self.shape.related_pairs()
        if len(self.objs) != self.shape.size:
            raise ValidationError("Diagram must assign one set per shape element")
        if len(self.arrows) != len(pairs):
            raise ValidationError(
                f"Diagram must assign one map per related pair ({len(pairs)} expected)"
            )

    @cached_property
    def _arrow_index(self) -> dict[tuple[int, int], FinFn]:
        return dict(zip(self.shape.related_pairs(), self.arrows))

    def arrow(self, p: int, q: int) -> FinFn:
        if p == q:
            return FinFn.identity(self.objs[p])
        return self._arrow_index[(p, q)]

    def validate(self) -> None:
        labels = self.shape.carrier.labels
        for (p, q), fn in self._arrow_index.items():
            if fn.dom != self.objs[p] or fn.cod != self.objs[q]:
                raise ValidationError(
                    f"arrow for {labels[p]!r} <= {labels[q]!r} does not match the assigned sets"
                )
        n = self.shape.size
        for p in range(n):
            for q in range(n):
                if not self.shape.leq[p][q]:
                    continue
                for r in range(n):
                    if not self.shape.leq[q][r]:
                        continue
                    left = self.arrow(p, q).then(self.arrow(q, r))
                    if left != self.arrow(p, r):
                        raise ValidationError(
                            "diagram is not functorial: "
                            f"arr({labels[q]!r}<={labels[r]!r}) o arr({labels[p]!r}<={labels[q]!r}) "
                            f"!= arr({labels[p]!r}<={labels[r]!r})"
                        )


@dataclass(frozen=True)
class Cone:
    """A natural family of legs from one apex into a diagram."""

    apex: FinSet
    diagram: Diagram
    legs: tuple[FinFn, ...]

    def __post_init__(self) -> None:
        if len(self.legs) != self.diagram.shape.size:
            raise ValidationError("Cone must have one leg per shape element")

    def validate(self) -> None:
        labels = self.diagram.shape.carrier.labels
        for p, leg in enumerate(self.legs):
            if leg.dom != self.apex or leg.cod != self.diagram.objs[p]:
                raise ValidationError(f"leg at {labels[p]!r} does not match apex or value set")
        for (p, q) in self.diagram.shape.related_pairs():
            if self.legs[p].then(self.diagram.arrow(p, q)) != self.legs[q]:
                raise ValidationError(
                    f"cone is not natural at {labels[p]!r} <= {labels[q]!r}"
                )


def _family_label(d: Diagram, family: tuple[int, ...]) -> str:
    parts = [d.objs[p].labels[v] for p, v in enumerate(family)]
    return "(" + ",".join(parts) + ")"


def limit_of_diagram(d: Diagram) -> tuple[FinSet, Cone]:
    """The set of compatible families with coordinate projections."""
    pairs = d.shape.related_pairs()
    families = []
    for family in itertools.product(*(range(s.size) for s in d.objs)):
        if all(d.arrow(p, q).table[family[p]] == family[q] for p, q in pairs):
            families.append(family)
    carrier = FinSet(tuple(_family_label(d, fam) for fam in families))
    legs = tuple(
        FinFn(carrier, d.objs[p], tuple(fam[p] for fam in families))
        for p in range(d.shape.size)
    )
    return carrier, Cone(carrier, d, legs)


def cone_to_point(c: Cone) -> FinFn:
    """The unique map from the apex into the limit commuting with all legs."""
    c.validate()
    lim, lim_cone = limit_of_diagram(c.diagram)
    index = {
        tuple(leg.table[i] for leg in lim_cone.legs): i
        for i in range(lim.size)
    }
    table = []
    for x in range(c.apex.size):
        family = tuple(leg.table[x] for leg in c.legs)
        table.append(index[family])
    return FinFn(c.apex, lim, tuple(table))


def point_to_cone(a: FinFn, d: Diagram) -> Cone:
    """Legs obtained by composing a point of the limit with its projections."""
    lim, lim_cone = limit_of_diagram(d)
    if a.cod != lim:
        raise ValueError("point_to_cone: codomain is not the limit of the diagram")
    legs = tuple(a.then(leg) for leg in lim_cone.legs)
    return Cone(a.dom, d, legs)


def enumerate_diagrams(shape: FinPoset, max_value: int, min_value: int = 0) -> Iterator[Diagram]:
    """All functorial diagrams over ``shape`` with value sets of size
    ``min_value`` .. ``max_value``, in deterministic order."""
    n = shape.size
    pairs = shape.related_pairs()
    if n == 0:
        yield Diagram(shape, (), ())
        return
    for sizes in itertools.product(range(min_value, max_value + 1), repeat=n):
        objs = tuple(FinSet.range(s) for s in sizes)
        arrow_options = [
            [
                FinFn(objs[p], objs[q], table)
                for table in itertools.product(range(sizes[q]), repeat=sizes[p])
            ]
            for p, q in pairs
        ]
        for arrows in itertools.product(*arrow_options):
            d = Diagram(shape, objs, arrows)
            try:
                d.validate()
            except ValidationError:
                continue
            yield d


def enumerate_cones(apex: FinSet, d: Diagram) -> Iterator[Cone]:
    """All natural cones with the given apex, in deterministic order."""
    leg_choices = [
        [
            FinFn(apex, d.objs[p], table)
            for table in itertools.product(range(d.objs[p].size), repeat=apex.size)
        ]
        for p in range(d.shape.size)
    ]
    if d.shape.size == 0:
        yield Cone(apex, d, ())
        return
    pairs = d.shape.related_pairs()
    for legs in itertools.product(*leg_choices):
        if all(legs[p].then(d.arrow(p, q)) == legs[q] for p, q in pairs):
            yield Cone(apex, d, tuple(legs))

"""Finite sets, functions, relations and partitions.

Everything here is an immutable value and every operation is pure.  All
enumeration orders are deterministic (lexicographic on tables, first
occurrence for partition classes) so that audits built on top of this
module produce byte-identical reports on every run.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

from .errors import ValidationError


@dataclass(frozen=True)
class FinSet:
    """An ordered finite set of distinct string labels."""

    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.labels, tuple):
            object.__setattr__(self, "labels", tuple(self.labels))
        seen = set()
        for lab in self.labels:
            if not isinstance(lab, str):
                raise ValidationError(f"FinSet label {lab!r} is not a string")
            if lab in seen:
                raise ValidationError(f"FinSet labels are not distinct: {lab!r} repeats")
            seen.add(lab)

    @property
    def size(self) -> int:
        return len(self.labels)

    @classmethod
    def range(cls, n: int) -> FinSet:
        """The canonical n-element set with labels "0" .. "n-1"."""
        return cls(tuple(str(i) for i in range(n)))

    def to_json(self) -> dict:
        return {"labels": list(self.labels)}

    @classmethod
    def from_json(cls, data) -> FinSet:
        if not isinstance(data, dict) or "labels" not in data:
            raise ValidationError("FinSet JSON must be an object with a 'labels' list")
        labels = data["labels"]
        if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
            raise ValidationError("FinSet 'labels' must be a list of strings")
        return cls(tuple(labels))


@dataclass(frozen=True)
class FinFn:
    """A total function between finite sets, given by its index table."""

    dom: FinSet
    cod: FinSet
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.table, tuple):
            object.__setattr__(self, "table", tuple(self.table))
        if len(self.table) != self.dom.size:
            raise ValidationError(
                f"FinFn table has {len(self.table)} entries for a domain of size {self.dom.size}"
            )
        for i, v in enumerate(self.table):
            if not isinstance(v, int) or not 0 <= v < self.cod.size:
                raise ValidationError(
                    f"FinFn table[{i}] = {v!r} is not a valid index into a codomain of size {self.cod.size}"
                )

    def __call__(self, i: int) -> int:
        return self.table[i]

    def then(self, other: FinFn) -> FinFn:
        """Diagrammatic composite: ``self`` followed by ``other``."""
        if self.cod != other.dom:
            raise ValueError("cannot compose: codomain does not match the next domain")
        return FinFn(self.dom, other.cod, tuple(other.table[v] for v in self.table))

    @classmethod
    def identity(cls, x: FinSet) -> FinFn:
        return cls(x, x, tuple(range(x.size)))

    @property
    def is_injective(self) -> bool:
        return len(set(self.table)) == len(self.table)

    @property
    def is_surjective(self) -> bool:
        return set(self.table) == set(range(self.cod.size))

    def image(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.table)))

    def to_json(self) -> dict:
        return {"dom": self.dom.to_json(), "cod": self.cod.to_json(), "table": list(self.table)}

    @classmethod
    def from_json(cls, data) -> FinFn:
        if not isinstance(data, dict) or not {"dom", "cod", "table"} <= set(data):
            raise ValidationError("FinFn JSON must be an object with 'dom', 'cod' and 'table'")
        table = data["table"]
        if not isinstance(table, list):
            raise ValidationError("FinFn 'table' must be a list of integers")
        return cls(FinSet.from_json(data["dom"]), FinSet.from_json(data["cod"]), tuple(table))


@dataclass(frozen=True)
class FinRel:
    """A binary relation between finite sets, stored as sorted index pairs."""

    dom: FinSet
    cod: FinSet
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        canon = tuple(sorted(set((int(a), int(b)) for a, b in self.pairs)))
        for a, b in canon:
            if not 0 <= a < self.dom.size:
                raise ValidationError(f"FinRel pair ({a},{b}): {a} is not a valid domain index")
            if not 0 <= b < self.cod.size:
                raise ValidationError(f"FinRel pair ({a},{b}): {b} is not a valid codomain index")
        object.__setattr__(self, "pairs", canon)

    @classmethod
    def from_fn(cls, f: FinFn) -> FinRel:
        return cls(f.dom, f.cod, tuple((i, v) for i, v in enumerate(f.table)))

    def compose(self, other: FinRel) -> FinRel:
        """Diagrammatic relational composite: ``self`` followed by ``other``."""
        if self.cod != other.dom:
            raise ValueError("cannot compose relations: codomain does not match the next domain")
        mid: dict[int, set[int]] = {}
        for b, c in other.pairs:
            mid.setdefault(b, set()).add(c)
        out = set()
        for a, b in self.pairs:
            for c in mid.get(b, ()):
                out.add((a, c))
        return FinRel(self.dom, other.cod, tuple(out))

    def to_json(self) -> dict:
        return {
            "dom": self.dom.to_json(),
            "cod": self.cod.to_json(),
            "pairs": [[a, b] for a, b in self.pairs],
        }

    @classmethod
    def from_json(cls, data) -> FinRel:
        if not isinstance(data, dict) or not {"dom", "cod", "pairs"} <= set(data):
            raise ValidationError("FinRel JSON must be an object with 'dom', 'cod' and 'pairs'")
        return cls(
            FinSet.from_json(data["dom"]),
            FinSet.from_json(data["cod"]),
            tuple((a, b) for a, b in data["pairs"]),
        )


@dataclass(frozen=True)
class Partition:
    """An equivalence relation on a finite carrier.

    Canonical form: class ids appear in first-occurrence order over the
    carrier indices, so equal partitions have equal encodings.
    """

    carrier: FinSet
    class_of: tuple[int, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.class_of, tuple):
            object.__setattr__(self, "class_of", tuple(self.class_of))
        if len(self.class_of) != self.carrier.size:
            raise ValidationError(
                f"Partition class_of has {len(self.class_of)} entries for a carrier of size {self.carrier.size}"
            )
        for i, c in enumerate(self.class_of):
            if not isinstance(c, int):
                raise ValidationError(f"Partition class_of[{i}] = {c!r} is not an integer")
        relabel: dict[int, int] = {}
        canon = []
        for c in self.class_of:
            if c not in relabel:
                relabel[c] = len(relabel)
            canon.append(relabel[c])
        object.__setattr__(self, "class_of", tuple(canon))

    @property
    def num_classes(self) -> int:
        return len(set(self.class_of))

    @cached_property
    def classes(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.num_classes)]
        for i, c in enumerate(self.class_of):
            out[c].append(i)
        return tuple(tuple(cls) for cls in out)

    def to_json(self) -> dict:
        return {"carrier": self.carrier.to_json(), "class_of": list(self.class_of)}

    @classmethod
    def from_json(cls, data) -> Partition:
        if not isinstance(data, dict) or not {"carrier", "class_of"} <= set(data):
            raise ValidationError("Partition JSON must be an object with 'carrier' and 'class_of'")
        return cls(FinSet.from_json(data["carrier"]), tuple(data["class_of"]))


class _UnionFind:
    """Small disjoint-set structure used by the coequalizer constructions."""

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra

    def partition(self, carrier: FinSet) -> Partition:
        return Partition(carrier, tuple(self.find(i) for i in range(carrier.size)))


def kernel_partition(h: FinFn) -> Partition:
    """The equivalence on the domain identifying elements with equal image."""
    ids: dict[int, int] = {}
    class_of = []
    for v in h.table:
        if v not in ids:
            ids[v] = len(ids)
        class_of.append(ids[v])
    return Partition(h.dom, tuple(class_of))


def refines(p: Partition, q: Partition) -> bool:
    """True iff every class of ``p`` is contained in some class of ``q``."""
    if p.carrier != q.carrier:
        raise ValueError("refines: partitions have different carriers")
    rep: dict[int, int] = {}
    for i, c in enumerate(p.class_of):
        qc = q.class_of[i]
        if c in rep:
            if rep[c] != qc:
                return False
        else:
            rep[c] = qc
    return True


def quotient(p: Partition) -> tuple[FinSet, FinFn]:
    """The set of classes and the canonical surjective projection.

    Class labels are taken from the least-index representative of each
    class, which makes serialization stable.
    """
    reps = [cls[0] for cls in p.classes]
    labels = tuple(p.carrier.labels[r] for r in reps)
    qset = FinSet(labels)
    proj = FinFn(p.carrier, qset, p.class_of)
    return qset, proj


def induced_map(p: Partition, q: Partition) -> FinFn:
    """The unique map between quotients commuting with both projections."""
    if not refines(p, q):
        raise ValueError("induced_map: first partition does not refine the second")
    pset, _ = quotient(p)
    qset, _ = quotient(q)
    table = [0] * p.num_classes
    for i, c in enumerate(p.class_of):
        table[c] = q.class_of[i]
    return FinFn(pset, qset, tuple(table))


def pair_label(x: str, y: str) -> str:
    return f"({x},{y})"


def pullback_fn(f: FinFn, g: FinFn) -> tuple[FinSet, FinFn, FinFn]:
    """The pullback of a cospan of functions, with coordinate projections."""
    if f.cod != g.cod:
        raise ValueError("pullback_fn: the two maps have different codomains")
    elems = [(x, y) for x in range(f.dom.size) for y in range(g.dom.size) if f.table[x] == g.table[y]]
    carrier = FinSet(tuple(pair_label(f.dom.labels[x], g.dom.labels[y]) for x, y in elems))
    p0 = FinFn(carrier, f.dom, tuple(x for x, _ in elems))
    p1 = FinFn(carrier, g.dom, tuple(y for _, y in elems))
    return carrier, p0, p1


def kernel_pair(f: FinFn) -> tuple[FinSet, FinFn, FinFn]:
    """The pullback of ``f`` along itself."""
    return pullback_fn(f, f)


def coequalizer_fn(f: FinFn, g: FinFn) -> tuple[FinSet, FinFn]:
    """Quotient of the codomain by the smallest equivalence with f(x) ~ g(x)."""
    if f.dom != g.dom or f.cod != g.cod:
        raise ValueError("coequalizer_fn: maps are not parallel")
    uf = _UnionFind(f.cod.size)
    for x in range(f.dom.size):
        uf.union(f.table[x], g.table[x])
    part = uf.partition(f.cod)
    return quotient(part)


@dataclass(frozen=True)
class FnClassification:
    mono: bool
    epi: bool
    regular_epi: bool

    def to_json(self) -> dict:
        return {"mono": self.mono, "epi": self.epi, "regular_epi": self.regular_epi}


def classify_fn(f: FinFn) -> FnClassification:
    """Mono/epi/regular-epi classification.

    Regular epi is decided by the kernel-pair comparison: the canonical
    map from the coequalizer of the kernel pair to the codomain must be
    a bijection.
    """
    _, p0, p1 = kernel_pair(f)
    qset, c = coequalizer_fn(p0, p1)
    comparison = [0] * qset.size
    for x in range(f.dom.size):
        comparison[c.table[x]] = f.table[x]
    cmp_fn = FinFn(qset, f.cod, tuple(comparison))
    regular = cmp_fn.is_injective and cmp_fn.is_surjective
    return FnClassification(mono=f.is_injective, epi=f.is_surjective, regular_epi=regular)


def enumerate_fns(x: FinSet, y: FinSet) -> Iterator[FinFn]:
    """All functions x -> y in lexicographic table order."""
    if x.size == 0:
        yield FinFn(x, y, ())
        return
    if y.size == 0:
        return
    for table in itertools.product(range(y.size), repeat=x.size):
        yield FinFn(x, y, table)

"""Finite preorders, posets and monotone maps.

Includes the posetal reflection, pullbacks and coequalizers of ordered
carriers, epi/regular-epi classification, canonical forms for
isomorphism testing, deterministic enumeration of small posets and
monotone maps, and the two explicit witnesses this engine exists to
reproduce: the pullback-instability square and the coequalizer
divergence between preorders and posets.

Deep order axioms (transitivity, antisymmetry) cost O(n^3) and are
verified by :meth:`FinPreorder.validate`, which is called on every
deserialized or user-supplied value; internal constructions satisfy
them by construction and skip the recheck in hot loops.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

from .errors import BoundError, ValidationError
from .finset import FinFn, FinSet, Partition, _UnionFind, pair_label, quotient


def closure_rows(rows: list[int], n: int) -> list[int]:
    """Reflexive-transitive closure of a relation given as bitmask rows.

    Iterated boolean-matrix squaring: each pass ORs every reachable row
    into the current one, converging in O(log n) passes.
    """
    for i in range(n):
        rows[i] |= 1 << i
    changed = True
    while changed:
        changed = False
        for i in range(n):
            acc = rows[i]
            m = acc
            while m:
                j = (m & -m).bit_length() - 1
                m &= m - 1
                acc |= rows[j]
            if acc != rows[i]:
                rows[i] = acc
                changed = True
    return rows


def _rows_to_matrix(rows: list[int], n: int) -> tuple[tuple[bool, ...], ...]:
    return tuple(tuple(bool(rows[i] >> j & 1) for j in range(n)) for i in range(n))


def _matrix_to_rows(leq: tuple[tuple[bool, ...], ...]) -> list[int]:
    return [sum(1 << j for j, v in enumerate(row) if v) for row in leq]


@dataclass(frozen=True)
class FinPreorder:
    """A finite carrier with a reflexive, transitive boolean matrix."""

    carrier: FinSet
    leq: tuple[tuple[bool, ...], ...]

    def __post_init__(self) -> None:
        leq = tuple(tuple(bool(v) for v in row) for row in self.leq)
        object.__setattr__(self, "leq", leq)
        n = self.carrier.size
        if len(leq) != n or any(len(row) != n for row in leq):
            raise ValidationError(f"leq must be a {n}x{n} matrix over the carrier")
        for i in range(n):
            if not leq[i][i]:
                raise ValidationError(
                    f"leq is not reflexive at element {self.carrier.labels[i]!r}"
                )

    @property
    def size(self) -> int:
        return self.carrier.size

    def validate(self) -> None:
        """Full invariant check; names the first offending pair or triple."""
        n, leq, labels = self.size, self.leq, self.carrier.labels
        for i in range(n):
            for j in range(n):
                if not leq[i][j]:
                    continue
                for k in range(n):
                    if leq[j][k] and not leq[i][k]:
                        raise ValidationError(
                            "leq is not transitive: "
                            f"{labels[i]!r} <= {labels[j]!r} and {labels[j]!r} <= {labels[k]!r} "
                            f"but not {labels[i]!r} <= {labels[k]!r}"
                        )

    def related_pairs(self) -> tuple[tuple[int, int], ...]:
        """All pairs p <= q with p != q, in lexicographic order."""
        n = self.size
        return tuple((p, q) for p in range(n) for q in range(n) if p != q and self.leq[p][q])

    def to_json(self) -> dict:
        return {
            "elements": list(self.carrier.labels),
            "leq": [[1 if v else 0 for v in row] for row in self.leq],
        }

    @classmethod
    def from_json(cls, data) -> FinPreorder:
        if not isinstance(data, dict) or not {"elements", "leq"} <= set(data):
            raise ValidationError("order JSON must be an object with 'elements' and 'leq'")
        carrier = FinSet(tuple(data["elements"]))
        leq = tuple(tuple(bool(v) for v in row) for row in data["leq"])
        out = cls(carrier, leq)
        out.validate()
        return out


@dataclass(frozen=True)
class FinPoset(FinPreorder):
    """A finite preorder whose matrix is additionally antisymmetric."""

    def __post_init__(self) -> None:
        super().__post_init__()
        n, leq, labels = self.carrier.size, self.leq, self.carrier.labels
        for i in range(n):
            for j in range(i + 1, n):
                if leq[i][j] and leq[j][i]:
                    raise ValidationError(
                        f"leq is not antisymmetric: {labels[i]!r} <= {labels[j]!r} <= {labels[i]!r}"
                    )


def chain_poset(labels: tuple[str, ...]) -> FinPoset:
    n = len(labels)
    return FinPoset(FinSet(labels), tuple(tuple(i <= j for j in range(n)) for i in range(n)))


def antichain_poset(labels: tuple[str, ...]) -> FinPoset:
    n = len(labels)
    return FinPoset(FinSet(labels), tuple(tuple(i == j for j in range(n)) for i in range(n)))


@dataclass(frozen=True)
class MonotoneMap:
    """An order-preserving map between finite preorders or posets."""

    dom: FinPreorder
    cod: FinPreorder
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.table, tuple):
            object.__setattr__(self, "table", tuple(self.table))
        if len(self.table) != self.dom.size:
            raise ValidationError(
                f"MonotoneMap table has {len(self.table)} entries for a domain of size {self.dom.size}"
            )
        for i, v in enumerate(self.table):
            if not isinstance(v, int) or not 0 <= v < self.cod.size:
                raise ValidationError(
                    f"MonotoneMap table[{i}] = {v!r} is not a valid index into a codomain of size {self.cod.size}"
                )
        bad = _first_monotonicity_failure(self.dom, self.cod, self.table)
        if bad is not None:
            i, j = bad
            raise ValidationError(
                f"map is not monotone: {self.dom.carrier.labels[i]!r} <= {self.dom.carrier.labels[j]!r} "
                f"but images are not ordered"
            )

    def __call__(self, i: int) -> int:
        return self.table[i]

    def then(self, other: MonotoneMap) -> MonotoneMap:
        if self.cod != other.dom:
            raise ValueError("cannot compose: codomain does not match the next domain")
        return MonotoneMap(self.dom, other.cod, tuple(other.table[v] for v in self.table))

    @classmethod
    def identity(cls, x: FinPreorder) -> MonotoneMap:
        return cls(x, x, tuple(range(x.size)))

    @property
    def is_surjective(self) -> bool:
        return set(self.table) == set(range(self.cod.size))

    @property
    def is_injective(self) -> bool:
        return len(set(self.table)) == len(self.table)

    def underlying_fn(self) -> FinFn:
        return FinFn(self.dom.carrier, self.cod.carrier, self.table)

    def to_json(self) -> dict:
        return {"dom": self.dom.to_json(), "cod": self.cod.to_json(), "table": list(self.table)}

    @classmethod
    def from_json(cls, data, poset: bool = True) -> MonotoneMap:
        if not isinstance(data, dict) or not {"dom", "cod", "table"} <= set(data):
            raise ValidationError("MonotoneMap JSON must be an object with 'dom', 'cod' and 'table'")
        kind = FinPoset if poset else FinPreorder
        return cls(kind.from_json(data["dom"]), kind.from_json(data["cod"]), tuple(data["table"]))


def _first_monotonicity_failure(dom, cod, table) -> tuple[int, int] | None:
    for i in range(dom.size):
        for j in range(dom.size):
            if dom.leq[i][j] and not cod.leq[table[i]][table[j]]:
                return i, j
    return None


def is_monotone(dom: FinPreorder, cod: FinPreorder, table: tuple[int, ...]) -> bool:
    """True iff the candidate table preserves the order."""
    if len(table) != dom.size or any(not 0 <= v < cod.size for v in table):
        return False
    return _first_monotonicity_failure(dom, cod, table) is None


def is_order_iso(m: MonotoneMap) -> bool:
    """Bijective, order-preserving and order-reflecting."""
    if not (m.is_injective and m.is_surjective):
        return False
    for i in range(m.dom.size):
        for j in range(m.dom.size):
            if m.cod.leq[m.table[i]][m.table[j]] and not m.dom.leq[i][j]:
                return False
    return True


def posetal_reflection(x: FinPreorder) -> tuple[FinPoset, MonotoneMap]:
    """Quotient a preorder by the cycle equivalence a <= b <= a.

    The image order on the classes is automatically a partial order;
    the returned unit is the projection.  Class labels are the sorted
    member labels joined by "=".
    """
    n = x.size
    uf = _UnionFind(n)
    for i in range(n):
        for j in range(i + 1, n):
            if x.leq[i][j] and x.leq[j][i]:
                uf.union(i, j)
    part = uf.partition(x.carrier)
    labels = tuple("=".join(sorted(x.carrier.labels[i] for i in cls)) for cls in part.classes)
    reps = [cls[0] for cls in part.classes]
    k = len(reps)
    leq = tuple(tuple(x.leq[reps[a]][reps[b]] for b in range(k)) for a in range(k))
    reflected = FinPoset(FinSet(labels), leq)
    unit = MonotoneMap(x, reflected, part.class_of)
    return reflected, unit


def pullback_pos(f: MonotoneMap, g: MonotoneMap) -> tuple[FinPreorder, MonotoneMap, MonotoneMap]:
    """Pullback of ordered carriers: equal-image pairs, componentwise order."""
    if f.cod != g.cod:
        raise ValueError("pullback_pos: the two maps have different codomains")
    elems = [
        (x, y)
        for x in range(f.dom.size)
        for y in range(g.dom.size)
        if f.table[x] == g.table[y]
    ]
    labels = tuple(pair_label(f.dom.carrier.labels[x], g.dom.carrier.labels[y]) for x, y in elems)
    leq = tuple(
        tuple(f.dom.leq[x1][x2] and g.dom.leq[y1][y2] for (x2, y2) in elems)
        for (x1, y1) in elems
    )
    kind = FinPoset if isinstance(f.dom, FinPoset) and isinstance(g.dom, FinPoset) else FinPreorder
    apex = kind(FinSet(labels), leq)
    p0 = MonotoneMap(apex, f.dom, tuple(x for x, _ in elems))
    p1 = MonotoneMap(apex, g.dom, tuple(y for _, y in elems))
    return apex, p0, p1


def kernel_pair_pos(f: MonotoneMap) -> tuple[FinPreorder, MonotoneMap, MonotoneMap]:
    return pullback_pos(f, f)


def coequalizer_preord(f: MonotoneMap, g: MonotoneMap) -> tuple[FinPreorder, MonotoneMap]:
    """Set-level coequalizer with the reflexive-transitive closure order.

    This is the colimit as computed among preorders (θ thin categories);
    the result need not be a poset.
    """
    if f.dom != g.dom or f.cod != g.cod:
        raise ValueError("coequalizer_preord: maps are not parallel")
    y = f.cod
    uf = _UnionFind(y.size)
    for x in range(f.dom.size):
        uf.union(f.table[x], g.table[x])
    part = uf.partition(y.carrier)
    labels = tuple("=".join(sorted(y.carrier.labels[i] for i in cls)) for cls in part.classes)
    k = part.num_classes
    rows = [0] * k
    for i in range(y.size):
        for j in range(y.size):
            if y.leq[i][j]:
                rows[part.class_of[i]] |= 1 << part.class_of[j]
    closure_rows(rows, k)
    coeq = FinPreorder(FinSet(labels), _rows_to_matrix(rows, k))
    proj = MonotoneMap(y, coeq, part.class_of)
    return coeq, proj


def coequalizer_pos(f: MonotoneMap, g: MonotoneMap) -> tuple[FinPoset, MonotoneMap]:
    """Coequalizer among posets: the preorder coequalizer followed by reflection."""
    coeq, proj = coequalizer_preord(f, g)
    reflected, unit = posetal_reflection(coeq)
    return reflected, proj.then(unit)


@dataclass(frozen=True)
class PosClassification:
    epi: bool
    regular_epi: bool

    def to_json(self) -> dict:
        return {"epi": self.epi, "regular_epi": self.regular_epi}


def classify_pos(f: MonotoneMap) -> PosClassification:
    """Epi/regular-epi classification between posets.

    Epi is surjectivity on elements.  Regular epi holds iff the
    comparison from the poset coequalizer of the kernel pair to the
    codomain is an isomorphism of posets.
    """
    if not isinstance(f.dom, FinPoset) or not isinstance(f.cod, FinPoset):
        raise ValueError("classify_pos: domain and codomain must be posets")
    epi = f.is_surjective
    _, p0, p1 = kernel_pair_pos(f)
    q, c = coequalizer_pos(p0, p1)
    comparison = [0] * q.size
    for x in range(f.dom.size):
        comparison[c.table[x]] = f.table[x]
    cmp_map = MonotoneMap(q, f.cod, tuple(comparison))
    return PosClassification(epi=epi, regular_epi=is_order_iso(cmp_map))


def quotient_projection_regular(dom: FinPreorder, table: tuple[int, ...], cod: FinPreorder) -> bool:
    """Direct regular-epi criterion: surjective and the codomain order is
    exactly the reflexive-transitive closure of the image of the domain order."""
    n = cod.size
    if set(table) != set(range(n)):
        return False
    rows = [0] * n
    for i in range(dom.size):
        for j in range(dom.size):
            if dom.leq[i][j]:
                rows[table[i]] |= 1 << table[j]
    closure_rows(rows, n)
    return rows == _matrix_to_rows(cod.leq)


def pullback_projection_regular(
    u_dom: FinPreorder, u_table: tuple[int, ...], r_dom: FinPreorder, r_table: tuple[int, ...]
) -> bool:
    """Fast probe: is the projection of the pullback of ``u`` along ``r``
    onto ``r``'s domain a regular epi?  Works on raw tables, without
    materialising the pullback carrier."""
    elems = [
        (p, s)
        for p in range(u_dom.size)
        for s in range(r_dom.size)
        if u_table[p] == r_table[s]
    ]
    n = r_dom.size
    if {s for _, s in elems} != set(range(n)):
        return False
    rows = [0] * n
    for (p1, s1) in elems:
        for (p2, s2) in elems:
            if u_dom.leq[p1][p2] and r_dom.leq[s1][s2]:
                rows[s1] |= 1 << s2
    closure_rows(rows, n)
    return rows == _matrix_to_rows(r_dom.leq)


# ---------------------------------------------------------------------------
# canonical forms, isomorphism and enumeration


def canonical_perm(leq: tuple[tuple[bool, ...], ...], n: int) -> tuple[int, ...]:
    """A permutation putting the relation matrix into canonical (minimal) form.

    Backtracking over the growing-border reading of the permuted
    matrix, with candidates pre-sorted by degree invariants of the
    relation so that pruning bites early.
    """
    if n == 0:
        return ()
    down = [sum(leq[i]) for i in range(n)]
    up = [sum(leq[j][i] for j in range(n)) for i in range(n)]
    order = sorted(range(n), key=lambda i: (down[i], up[i], i))
    best_key: list[int] | None = None
    best_perm: tuple[int, ...] | None = None

    def extend(perm: tuple[int, ...], key: list[int]) -> None:
        nonlocal best_key, best_perm
        if len(perm) == n:
            if best_key is None or key < best_key:
                best_key, best_perm = key, perm
            return
        for v in order:
            if v in perm:
                continue
            border = []
            for u in perm:
                border.append(1 if leq[u][v] else 0)
                border.append(1 if leq[v][u] else 0)
            border.append(1 if leq[v][v] else 0)
            nk = key + border
            if best_key is not None and nk > best_key[: len(nk)]:
                continue
            extend(perm + (v,), nk)

    extend((), [])
    assert best_perm is not None
    return best_perm


def canonical_key(x: FinPreorder) -> tuple:
    """Isomorphism-invariant key: size plus the canonical matrix, flattened."""
    perm = canonical_perm(x.leq, x.size)
    flat = tuple(x.leq[perm[i]][perm[j]] for i in range(x.size) for j in range(x.size))
    return (x.size, flat)


def are_isomorphic(x: FinPreorder, y: FinPreorder) -> bool:
    return x.size == y.size and canonical_key(x) == canonical_key(y)


def automorphisms(x: FinPreorder) -> list[tuple[int, ...]]:
    """All permutations preserving the relation matrix (sizes here are tiny)."""
    n = x.size
    out = []
    for perm in itertools.permutations(range(n)):
        if all(x.leq[perm[i]][perm[j]] == x.leq[i][j] for i in range(n) for j in range(n)):
            out.append(perm)
    return out


MAX_ENUM_SIZE = 6


def enumerate_posets(n: int) -> list[FinPoset]:
    """All posets on exactly n elements, one canonical representative per
    isomorphism class, in deterministic order.

    Every finite poset admits a linear extension, so it suffices to
    enumerate strict orders contained in the index order.
    """
    if n > MAX_ENUM_SIZE:
        raise BoundError(f"poset enumeration is limited to {MAX_ENUM_SIZE} elements, got {n}")
    if n == 0:
        return [FinPoset(FinSet(()), ())]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    seen = {}
    for mask in range(1 << len(pairs)):
        rel = [[i == j for j in range(n)] for i in range(n)]
        for b, (i, j) in enumerate(pairs):
            if mask >> b & 1:
                rel[i][j] = True
        ok = True
        for i, j in pairs:
            if not rel[i][j]:
                continue
            for k in range(j + 1, n):
                if rel[j][k] and not rel[i][k]:
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        leq = tuple(tuple(row) for row in rel)
        perm = canonical_perm(leq, n)
        canon = tuple(tuple(leq[perm[i]][perm[j]] for j in range(n)) for i in range(n))
        seen.setdefault(canon, FinPoset(FinSet.range(n), canon))
    return [seen[k] for k in sorted(seen)]


def enumerate_preorders(n: int) -> list[FinPreorder]:
    """All preorders on exactly n elements up to isomorphism, canonical forms."""
    if n > 4:
        raise BoundError(f"preorder enumeration is limited to 4 elements, got {n}")
    if n == 0:
        return [FinPreorder(FinSet(()), ())]
    offdiag = [(i, j) for i in range(n) for j in range(n) if i != j]
    seen = {}
    for mask in range(1 << len(offdiag)):
        rel = [[i == j for j in range(n)] for i in range(n)]
        for b, (i, j) in enumerate(offdiag):
            if mask >> b & 1:
                rel[i][j] = True
        ok = True
        for i in range(n):
            for j in range(n):
                if not rel[i][j]:
                    continue
                for k in range(n):
                    if rel[j][k] and not rel[i][k]:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if not ok:
            continue
        leq = tuple(tuple(row) for row in rel)
        perm = canonical_perm(leq, n)
        canon = tuple(tuple(leq[perm[i]][perm[j]] for j in range(n)) for i in range(n))
        seen.setdefault(canon, FinPreorder(FinSet.range(n), canon))
    return [seen[k] for k in sorted(seen)]


def enumerate_monotone(x: FinPreorder, y: FinPreorder) -> Iterator[MonotoneMap]:
    """All monotone maps x -> y in lexicographic table order."""
    n, m = x.size, y.size
    if n == 0:
        yield MonotoneMap(x, y, ())
        return
    if m == 0:
        return
    table = [0] * n

    def rec(k: int) -> Iterator[MonotoneMap]:
        if k == n:
            yield MonotoneMap(x, y, tuple(table))
            return
        for v in range(m):
            ok = True
            for j in range(k):
                if x.leq[j][k] and not y.leq[table[j]][v]:
                    ok = False
                    break
                if x.leq[k][j] and not y.leq[v][table[j]]:
                    ok = False
                    break
            if ok:
                table[k] = v
                yield from rec(k + 1)

    yield from rec(0)


# ---------------------------------------------------------------------------
# the two explicit witnesses


@dataclass(frozen=True)
class StabilityCounterexample:
    """The minimal square showing that pullbacks do not preserve regular
    epimorphisms between posets.

    ``quotient_map`` collapses the middle of two disjoint 2-chains onto
    the 3-chain; pulling it back along the endpoint inclusion yields a
    2-element antichain whose projection is epi but not regular.
    """

    poset_a: FinPoset
    poset_b: FinPoset
    poset_c: FinPoset
    quotient_map: MonotoneMap
    inclusion: MonotoneMap
    pullback: FinPoset
    to_a: MonotoneMap
    pulled_back: MonotoneMap
    quotient_class: PosClassification
    pulled_back_class: PosClassification
    pos_not_regular: bool

    def to_json(self) -> dict:
        strict = [
            [self.pullback.carrier.labels[i], self.pullback.carrier.labels[j]]
            for i, j in self.pullback.related_pairs()
        ]
        return {
            "poset_a": self.poset_a.to_json(),
            "poset_b": self.poset_b.to_json(),
            "poset_c": self.poset_c.to_json(),
            "quotient_map": self.quotient_map.to_json(),
            "inclusion": self.inclusion.to_json(),
            "pullback": self.pullback.to_json(),
            "to_a": self.to_a.to_json(),
            "pulled_back": self.pulled_back.to_json(),
            "pullback_size": self.pullback.size,
            "pullback_strict_pairs": strict,
            "classifications": {
                "quotient_map": self.quotient_class.to_json(),
                "pulled_back": self.pulled_back_class.to_json(),
            },
            "pos_not_regular": self.pos_not_regular,
        }


def stability_counterexample() -> StabilityCounterexample:
    """Build and internally re-check the instability square.

    Failure of any assertion here is a build-breaking defect, not a
    recoverable error.
    """
    labels_a = ("(a,0)", "(a,1)", "(b,0)", "(b,1)")
    leq_a = tuple(
        tuple(i == j or (i, j) in {(0, 1), (2, 3)} for j in range(4)) for i in range(4)
    )
    poset_a = FinPoset(FinSet(labels_a), leq_a)
    poset_b = chain_poset(("0", "1", "2"))
    poset_c = FinPoset(
        FinSet(("0", "2")), ((True, True), (False, True))
    )
    p = MonotoneMap(poset_a, poset_b, (0, 1, 1, 2))
    inc = MonotoneMap(poset_c, poset_b, (0, 2))
    apex, to_a, pulled = pullback_pos(p, inc)
    assert isinstance(apex, FinPoset)
    cls_p = classify_pos(p)
    cls_u = classify_pos(pulled)
    assert apex.size == 2 and not apex.related_pairs()
    assert are_isomorphic(apex, antichain_poset(("0", "2")))
    assert cls_p.epi and cls_p.regular_epi
    assert cls_u.epi and not cls_u.regular_epi
    return StabilityCounterexample(
        poset_a=poset_a,
        poset_b=poset_b,
        poset_c=poset_c,
        quotient_map=p,
        inclusion=inc,
        pullback=apex,
        to_a=to_a,
        pulled_back=pulled,
        quotient_class=cls_p,
        pulled_back_class=cls_u,
        pos_not_regular=True,
    )


@dataclass(frozen=True)
class DivergenceWitness:
    """A parallel pair whose preorder coequalizer is not a poset.

    The extra posetal reflection collapses the 2-cycle to a point, and
    the preorder-level cocone onto the cycle then admits no
    factorization through the poset coequalizer: the reflection step
    destroys the colimit's universal property.
    """

    left: MonotoneMap
    right: MonotoneMap
    preorder_coeq: FinPreorder
    preorder_proj: MonotoneMap
    pos_coeq: FinPoset
    pos_proj: MonotoneMap
    blocking_cocone: MonotoneMap
    factorization_count: int

    def to_json(self) -> dict:
        return {
            "left": self.left.to_json(),
            "right": self.right.to_json(),
            "preorder_coequalizer": self.preorder_coeq.to_json(),
            "preorder_projection": self.preorder_proj.to_json(),
            "preorder_coequalizer_is_poset": False,
            "pos_coequalizer": self.pos_coeq.to_json(),
            "pos_projection": self.pos_proj.to_json(),
            "blocking_cocone": self.blocking_cocone.to_json(),
            "blocking_cocone_coequalizes": True,
            "factorizations_through_pos_coequalizer": self.factorization_count,
            "universal_property_destroyed": self.factorization_count == 0,
        }


def coequalizer_divergence_witness() -> DivergenceWitness:
    """The two-chain identification witness, fully re-verified."""
    x = antichain_poset(("p", "q"))
    y_labels = ("0", "1", "2", "3")
    y_leq = tuple(
        tuple(i == j or (i, j) in {(0, 1), (2, 3)} for j in range(4)) for i in range(4)
    )
    y = FinPoset(FinSet(y_labels), y_leq)
    f = MonotoneMap(x, y, (1, 3))
    g = MonotoneMap(x, y, (2, 0))
    pre_q, pre_proj = coequalizer_preord(f, g)
    pos_q, pos_proj = coequalizer_pos(f, g)
    assert pre_q.size == 2
    assert all(all(row) for row in pre_q.leq), "expected a 2-element cycle"
    assert pos_q.size == 1
    blocking = pre_proj
    assert f.then(blocking).table == g.then(blocking).table
    count = sum(
        1
        for cand in enumerate_monotone(pos_q, pre_q)
        if pos_proj.then(cand).table == blocking.table
    )
    assert count == 0
    return DivergenceWitness(
        left=f,
        right=g,
        preorder_coeq=pre_q,
        preorder_proj=pre_proj,
        pos_coeq=pos_q,
        pos_proj=pos_proj,
        blocking_cocone=blocking,
        factorization_count=count,
    )

"""Poset-indexed families of coslice objects and the comma category.

A :class:`SynObj` is a functor from a finite poset shape into the
coslice over a fixed base; a :class:`SynMor` is a monotone shape map
under which the two decorations agree strictly (on the nose).  The
:class:`CommaCat` instance enumerates these at a bound, supports the
constructions the proof obligations need (pullbacks computed on shapes,
coequalizers of kernel pairs), and is the object under audit in the
no-go pipeline.

Fibers of the shape projection are presented separately as
:class:`FiberCat`, whose morphisms are vertical transformations
(componentwise coslice maps, natural over the shape).  Strict comma
morphisms over an identity shape map exist only between equal objects;
both readings are implemented and tested, neither is conflated with the
other.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .coslice import CoslMor, CoslObj, CosliceCat, coslice_coproduct
from .diagrams import Cone, Diagram, cone_to_point, enumerate_cones, enumerate_diagrams, limit_of_diagram, point_to_cone
from .enumcat import EnumCat, RegularEpiVerdict, Square, is_coequalizer, is_pullback, is_regular_epi_in
from .errors import BoundError, ValidationError
from . import finset as fs
from . import order as od

COMMA_MAX_BOUND = 3
COMMA_MAX_BASE = 2
COMMA_VALUE_CAP = 2


@dataclass(frozen=True)
class SynObj:
    """A functor from a finite poset shape into the coslice over a base.

    ``arr`` is aligned with ``shape.related_pairs()``; identity arrows
    are implied.  Deep functoriality is checked by :meth:`validate`.
    """

    shape: od.FinPoset
    base: fs.FinSet
    obj: tuple[CoslObj, ...]
    arr: tuple[fs.FinFn, ...]

    def __post_init__(self) -> None:
        if len(self.obj) != self.shape.size:
            raise ValidationError("SynObj must decorate every shape element")
        if len(self.arr) != len(self.shape.related_pairs()):
            raise ValidationError("SynObj must decorate every related pair of the shape")

    @cached_property
    def _arr_index(self) -> dict[tuple[int, int], fs.FinFn]:
        return dict(zip(self.shape.related_pairs(), self.arr))

    def cosl_arrow(self, p: int, q: int) -> fs.FinFn:
        if p == q:
            return fs.FinFn.identity(self.obj[p].carrier)
        return self._arr_index[(p, q)]

    def validate(self) -> None:
        labels = self.shape.carrier.labels
        for p, c in enumerate(self.obj):
            if c.base != self.base:
                raise ValidationError(f"decoration at {labels[p]!r} is not over the base")
        for (p, q), fn in self._arr_index.items():
            if fn.dom != self.obj[p].carrier or fn.cod != self.obj[q].carrier:
                raise ValidationError(
                    f"arrow for {labels[p]!r} <= {labels[q]!r} does not match the decorated sets"
                )
            if self.obj[p].arrow.then(fn) != self.obj[q].arrow:
                raise ValidationError(
                    f"decoration triangle for {labels[p]!r} <= {labels[q]!r} does not commute"
                )
        n = self.shape.size
        for p in range(n):
            for q in range(n):
                if not self.shape.leq[p][q]:
                    continue
                for r in range(n):
                    if not self.shape.leq[q][r]:
                        continue
                    if self.cosl_arrow(p, q).then(self.cosl_arrow(q, r)) != self.cosl_arrow(p, r):
                        raise ValidationError(
                            "decoration is not functorial: "
                            f"arr({labels[q]!r}<={labels[r]!r}) o arr({labels[p]!r}<={labels[q]!r}) "
                            f"!= arr({labels[p]!r}<={labels[r]!r})"
                        )

    def to_json(self) -> dict:
        labels = self.shape.carrier.labels
        return {
            "shape": self.shape.to_json(),
            "base": self.base.to_json(),
            "obj": {labels[p]: self.obj[p].arrow.to_json() for p in range(self.shape.size)},
            "arr": {
                f"{labels[p]}<={labels[q]}": fn.to_json()
                for (p, q), fn in zip(self.shape.related_pairs(), self.arr)
            },
        }

    @classmethod
    def from_json(cls, data) -> SynObj:
        if not isinstance(data, dict) or not {"shape", "base", "obj", "arr"} <= set(data):
            raise ValidationError("SynObj JSON must carry 'shape', 'base', 'obj' and 'arr'")
        shape = od.FinPoset.from_json(data["shape"])
        base = fs.FinSet.from_json(data["base"])
        labels = shape.carrier.labels
        try:
            obj = tuple(CoslObj(fs.FinFn.from_json(data["obj"][lab])) for lab in labels)
        except KeyError as exc:
            raise ValidationError(f"SynObj 'obj' is missing element {exc.args[0]!r}") from None
        arrs = []
        for p, q in shape.related_pairs():
            key = f"{labels[p]}<={labels[q]}"
            if key not in data["arr"]:
                raise ValidationError(f"SynObj 'arr' is missing the pair {key!r}")
            arrs.append(fs.FinFn.from_json(data["arr"][key]))
        out = cls(shape, base, obj, tuple(arrs))
        out.validate()
        return out


@dataclass(frozen=True)
class SynMor:
    """A monotone shape map under which decorations agree strictly."""

    src: SynObj
    dst: SynObj
    map: od.MonotoneMap

    def __post_init__(self) -> None:
        if self.map.dom != self.src.shape or self.map.cod != self.dst.shape:
            raise ValidationError("SynMor map does not match the endpoint shapes")
        if self.src.base != self.dst.base:
            raise ValidationError("SynMor endpoints are over different bases")
        labels = self.src.shape.carrier.labels
        for p in range(self.src.shape.size):
            if self.dst.obj[self.map.table[p]] != self.src.obj[p]:
                raise ValidationError(
                    f"strict commutation fails on objects at element {labels[p]!r}"
                )
        for (p, q) in self.src.shape.related_pairs():
            if self.dst.cosl_arrow(self.map.table[p], self.map.table[q]) != self.src.cosl_arrow(p, q):
                raise ValidationError(
                    f"strict commutation fails on the arrow {labels[p]!r} <= {labels[q]!r}"
                )

    def then(self, other: SynMor) -> SynMor:
        if self.dst != other.src:
            raise ValueError("cannot compose comma morphisms with mismatched endpoints")
        return SynMor(self.src, other.dst, self.map.then(other.map))

    @classmethod
    def identity(cls, x: SynObj) -> SynMor:
        return cls(x, x, od.MonotoneMap.identity(x.shape))

    def to_json(self) -> dict:
        return {"map": self.map.to_json()}


def projection(x):
    """The shape projection: SynObj -> FinPoset, SynMor -> MonotoneMap."""
    if isinstance(x, SynObj):
        return x.shape
    if isinstance(x, SynMor):
        return x.map
    raise TypeError(f"projection expects a SynObj or SynMor, got {type(x).__name__}")


def constant_syn_obj(shape: od.FinPoset, deco: CoslObj) -> SynObj:
    """Decorate every shape element with one coslice object and every
    relation with its identity map."""
    ident = fs.FinFn.identity(deco.carrier)
    return SynObj(
        shape,
        deco.base,
        tuple(deco for _ in range(shape.size)),
        tuple(ident for _ in shape.related_pairs()),
    )


def constant_lift(m: od.MonotoneMap, deco: CoslObj) -> SynMor:
    """Lift a monotone map between constantly decorated shapes."""
    return SynMor(constant_syn_obj(m.dom, deco), constant_syn_obj(m.cod, deco), m)


def name_embedding(c: CoslObj) -> SynObj:
    """A coslice object as a one-point family."""
    point = od.FinPoset(fs.FinSet(("0",)), ((True,),))
    return SynObj(point, c.base, (c,), ())


def syn_homs(x: SynObj, y: SynObj) -> tuple[SynMor, ...]:
    """All strict comma morphisms x -> y, in lexicographic table order."""
    n, m = x.shape.size, y.shape.size
    if x.base != y.base:
        return ()
    if n == 0:
        return (SynMor(x, y, od.MonotoneMap(x.shape, y.shape, ())),)
    candidates: list[list[int]] = []
    for p in range(n):
        opts = [q for q in range(m) if y.obj[q] == x.obj[p]]
        if not opts:
            return ()
        candidates.append(opts)
    xleq, yleq = x.shape.leq, y.shape.leq
    xarr, yarr = x._arr_index, y._arr_index
    y_ids: dict[int, fs.FinFn] = {}

    def y_arrow(a: int, b: int) -> fs.FinFn:
        if a != b:
            return yarr[(a, b)]
        fn = y_ids.get(a)
        if fn is None:
            fn = fs.FinFn.identity(y.obj[a].carrier)
            y_ids[a] = fn
        return fn

    out: list[SynMor] = []
    table = [0] * n

    def rec(k: int) -> None:
        if k == n:
            out.append(SynMor(x, y, od.MonotoneMap(x.shape, y.shape, tuple(table))))
            return
        for q in candidates[k]:
            ok = True
            for j in range(k):
                tj = table[j]
                if xleq[j][k] and (not yleq[tj][q] or y_arrow(tj, q) != xarr[(j, k)]):
                    ok = False
                    break
                if xleq[k][j] and (not yleq[q][tj] or y_arrow(q, tj) != xarr[(k, j)]):
                    ok = False
                    break
            if ok:
                table[k] = q
                rec(k + 1)

    rec(0)
    return tuple(out)


# ---------------------------------------------------------------------------
# the comma instance


class CommaCat(EnumCat):
    """Poset-shaped families over one base, as an enumerable category.

    The audit bound b maps to shapes of size <= b + 1 and value
    carriers of size <= min(b, 2): the smallest windows that contain
    the instability witness at b = 3 and exclude it at b = 1, while
    keeping hom enumeration tractable.
    """

    def __init__(self, base: fs.FinSet, bound: int):
        if bound > COMMA_MAX_BOUND:
            raise BoundError(
                f"comma bound {bound} exceeds the maximum {COMMA_MAX_BOUND} "
                f"(the object universe grows super-exponentially with the shape size)"
            )
        if base.size > COMMA_MAX_BASE:
            raise BoundError(f"comma base size {base.size} exceeds the maximum {COMMA_MAX_BASE}")
        self.base = base
        self.bound = bound
        self.shape_bound = bound + 1
        self.value_bound = min(bound, COMMA_VALUE_CAP)
        self.name = (
            f"comma(|A|={base.size}, bound={bound}, "
            f"shapes<={self.shape_bound}, values<={self.value_bound})"
        )
        self._coslice = CosliceCat(base, self.value_bound)
        self._objects_cache: tuple[SynObj, ...] | None = None
        self._id_index: dict[int, int] = {}
        self._hom_cache: dict[tuple[int, int], tuple[SynMor, ...]] = {}
        self._profiles: list[frozenset] = []

    # -- universe ------------------------------------------------------------

    def _decorations(self, shape: od.FinPoset) -> list[SynObj]:
        cos_objs = self._coslice.objects()
        pairs = shape.related_pairs()
        n = shape.size
        if n == 0:
            return [SynObj(shape, self.base, (), ())]
        autos = od.automorphisms(shape)
        pair_pos = {pq: i for i, pq in enumerate(pairs)}
        hom_tables: dict[tuple[int, int], tuple] = {}
        for i, ci in enumerate(cos_objs):
            for j, cj in enumerate(cos_objs):
                hom_tables[(i, j)] = self._coslice.hom(ci, cj)
        out: list[SynObj] = []
        for assign in itertools.product(range(len(cos_objs)), repeat=n):
            arrow_options = [hom_tables[(assign[p], assign[q])] for p, q in pairs]
            if any(not opts for opts in arrow_options):
                continue
            for chosen in itertools.product(*arrow_options):
                if not _functorial(shape, pairs, pair_pos, chosen):
                    continue
                encoding = (
                    assign,
                    tuple(mor.map.table for mor in chosen),
                )
                if len(autos) > 1 and _aut_min_encoding(shape, pairs, pair_pos, assign, chosen, autos) != encoding:
                    continue
                out.append(
                    SynObj(
                        shape,
                        self.base,
                        tuple(cos_objs[a] for a in assign),
                        tuple(mor.map for mor in chosen),
                    )
                )
        return out

    def objects(self):
        if self._objects_cache is None:
            objs: list[SynObj] = []
            for n in range(self.shape_bound + 1):
                for shape in od.enumerate_posets(n):
                    objs.extend(self._decorations(shape))
            self._objects_cache = tuple(objs)
            for i, x in enumerate(self._objects_cache):
                self._id_index[id(x)] = i
                self._profiles.append(frozenset(x.obj))
        return self._objects_cache

    def hom(self, x, y):
        xi = self._id_index.get(id(x))
        yi = self._id_index.get(id(y))
        if xi is None or yi is None:
            return syn_homs(x, y)
        cached = self._hom_cache.get((xi, yi))
        if cached is not None:
            return cached
        if not self._profiles[xi] <= self._profiles[yi]:
            return ()
        out = syn_homs(x, y)
        if out:
            self._hom_cache[(xi, yi)] = out
        return out

    # -- categorical interface -------------------------------------------------

    def identity(self, x):
        return SynMor.identity(x)

    def then(self, f, g):
        return f.then(g)

    def src(self, f):
        return f.src

    def dst(self, f):
        return f.dst

    def grade(self, x):
        return x.shape.size

    def obj_json(self, x):
        return x.to_json()

    def mor_json(self, f):
        return f.to_json()

    # -- constructions -----------------------------------------------------------

    def pullback(self, f: SynMor, g: SynMor):
        """Pullback computed on shapes, with the induced decoration.

        The decoration of a pair is the (necessarily common) decoration
        of its two components; this is the content of the "pullbacks
        are computed in the base" proof obligation, and every use is
        re-checkable through the enumerative pullback checker.
        """
        if f.dst != g.dst:
            raise ValueError("comma pullback needs a common codomain")
        px, py = f.src, g.src
        shape, to_x, to_y = od.pullback_pos(f.map, g.map)
        assert isinstance(shape, od.FinPoset)
        elems = list(zip(to_x.table, to_y.table))
        objs = tuple(px.obj[p] for p, _ in elems)
        arrs = []
        for (i, j) in shape.related_pairs():
            p1, _ = elems[i]
            p2, _ = elems[j]
            arrs.append(px.cosl_arrow(p1, p2))
        apex = SynObj(shape, self.base, objs, tuple(arrs))
        return apex, SynMor(apex, px, to_x), SynMor(apex, py, to_y)

    def coequalizer(self, f, g):
        return None  # only coequalizers of kernel pairs are constructed

    def kernel_pair_coequalizer(self, f: SynMor):
        """Coequalizer of the kernel pair of ``f``: the shape quotient by
        the kernel of the shape map, with the order generated by the
        image order and the decoration restricted along the comparison."""
        x, y = f.src, f.dst
        part = fs.kernel_partition(fs.FinFn(x.shape.carrier, y.shape.carrier, f.map.table))
        reps = [cls[0] for cls in part.classes]
        k = len(reps)
        labels = tuple(
            "=".join(sorted(x.shape.carrier.labels[i] for i in cls)) for cls in part.classes
        )
        rows = [0] * k
        for i in range(x.shape.size):
            for j in range(x.shape.size):
                if x.shape.leq[i][j]:
                    rows[part.class_of[i]] |= 1 << part.class_of[j]
        od.closure_rows(rows, k)
        leq = tuple(tuple(bool(rows[a] >> b & 1) for b in range(k)) for a in range(k))
        shape = od.FinPoset(fs.FinSet(labels), leq)
        objs = tuple(x.obj[reps[c]] for c in range(k))
        arrs = []
        for (a, b) in shape.related_pairs():
            arrs.append(y.cosl_arrow(f.map.table[reps[a]], f.map.table[reps[b]]))
        target = SynObj(shape, self.base, objs, tuple(arrs))
        proj = SynMor(x, target, od.MonotoneMap(x.shape, shape, part.class_of))
        return target, proj

    def regular_epi_decision(self, f: SynMor):
        target, proj = self.kernel_pair_coequalizer(f)
        comparison = [0] * target.shape.size
        for p in range(f.src.shape.size):
            comparison[proj.map.table[p]] = f.map.table[p]
        if not od.is_monotone(target.shape, f.dst.shape, tuple(comparison)):
            return False
        cmp_map = od.MonotoneMap(target.shape, f.dst.shape, tuple(comparison))
        return od.is_order_iso(cmp_map)

    def regular_epi_fast(self, f: SynMor):
        return od.quotient_projection_regular(f.src.shape, f.map.table, f.dst.shape)

    def stability_probe(self, u: SynMor, r: SynMor):
        return od.pullback_projection_regular(u.src.shape, u.map.table, r.src.shape, r.map.table)

    def is_epi(self, f: SynMor):
        return f.map.is_surjective


def _functorial(shape, pairs, pair_pos, chosen) -> bool:
    n = shape.size
    for p in range(n):
        for q in range(n):
            if p == q or not shape.leq[p][q]:
                continue
            fpq = chosen[pair_pos[(p, q)]]
            for r in range(n):
                if r == q or r == p or not shape.leq[q][r]:
                    continue
                fqr = chosen[pair_pos[(q, r)]]
                fpr = chosen[pair_pos[(p, r)]]
                if fpq.then(fqr) != fpr:
                    return False
    return True


def _aut_min_encoding(shape, pairs, pair_pos, assign, chosen, autos):
    best = None
    for sigma in autos:
        a2 = tuple(assign[sigma[p]] for p in range(shape.size))
        t2 = tuple(chosen[pair_pos[(sigma[p], sigma[q])]].map.table for p, q in pairs)
        enc = (a2, t2)
        if best is None or enc < best:
            best = enc
    return best


# ---------------------------------------------------------------------------
# fibers of the shape projection


@dataclass(frozen=True)
class VertMor:
    """A vertical transformation between two families over one shape:
    componentwise coslice maps, natural along the shape's relations."""

    src: SynObj
    dst: SynObj
    components: tuple[fs.FinFn, ...]

    def __post_init__(self) -> None:
        if self.src.shape != self.dst.shape:
            raise ValidationError("vertical transformation needs a common shape")
        if len(self.components) != self.src.shape.size:
            raise ValidationError("one component per shape element expected")

    def validate(self) -> None:
        for p, comp in enumerate(self.components):
            if self.src.obj[p].arrow.then(comp) != self.dst.obj[p].arrow:
                raise ValidationError(f"component {p} does not commute with the base arrows")
        for (p, q) in self.src.shape.related_pairs():
            if self.src.cosl_arrow(p, q).then(self.components[q]) != self.components[p].then(
                self.dst.cosl_arrow(p, q)
            ):
                raise ValidationError(f"naturality fails at the pair ({p},{q})")

    def then(self, other: VertMor) -> VertMor:
        if self.dst != other.src:
            raise ValueError("cannot compose vertical transformations with mismatched endpoints")
        return VertMor(
            self.src,
            other.dst,
            tuple(a.then(b) for a, b in zip(self.components, other.components)),
        )


def vert_homs(x: SynObj, y: SynObj) -> tuple[VertMor, ...]:
    """All vertical transformations x -> y over their common shape."""
    if x.shape != y.shape:
        return ()
    n = x.shape.size
    options = []
    for p in range(n):
        opts = []
        for table in itertools.product(range(y.obj[p].carrier.size), repeat=x.obj[p].carrier.size):
            fn = fs.FinFn(x.obj[p].carrier, y.obj[p].carrier, table)
            if x.obj[p].arrow.then(fn) == y.obj[p].arrow:
                opts.append(fn)
        options.append(opts)
    pairs = x.shape.related_pairs()
    out = []
    for comps in itertools.product(*options):
        if all(
            x.cosl_arrow(p, q).then(comps[q]) == comps[p].then(y.cosl_arrow(p, q))
            for p, q in pairs
        ):
            out.append(VertMor(x, y, comps))
    return tuple(out)


class FiberCat(EnumCat):
    """The fiber of the shape projection over one poset: every family with
    exactly that shape, with vertical transformations as morphisms."""

    def __init__(self, shape: od.FinPoset, base: fs.FinSet, bound: int):
        self.shape = shape
        self.base = base
        self.bound = bound
        self.name = f"fiber(|P|={shape.size}, |A|={base.size}, bound={bound})"
        self._coslice = CosliceCat(base, bound)
        cos_objs = self._coslice.objects()
        pairs = shape.related_pairs()
        pair_pos = {pq: i for i, pq in enumerate(pairs)}
        objs: list[SynObj] = []
        if shape.size == 0:
            objs.append(SynObj(shape, base, (), ()))
        else:
            for assign in itertools.product(range(len(cos_objs)), repeat=shape.size):
                arrow_options = [
                    self._coslice.hom(cos_objs[assign[p]], cos_objs[assign[q]]) for p, q in pairs
                ]
                if any(not opts for opts in arrow_options):
                    continue
                for chosen in itertools.product(*arrow_options):
                    if _functorial(shape, pairs, pair_pos, chosen):
                        objs.append(
                            SynObj(
                                shape,
                                base,
                                tuple(cos_objs[a] for a in assign),
                                tuple(mor.map for mor in chosen),
                            )
                        )
        self._objects = tuple(objs)

    def objects(self):
        return self._objects

    def hom(self, x, y):
        return vert_homs(x, y)

    def identity(self, x):
        return VertMor(x, x, tuple(fs.FinFn.identity(c.carrier) for c in x.obj))

    def then(self, f, g):
        return f.then(g)

    def src(self, f):
        return f.src

    def dst(self, f):
        return f.dst

    def grade(self, x):
        return sum(c.carrier.size for c in x.obj)

    def obj_json(self, x):
        return x.to_json()

    def mor_json(self, f):
        return {"components": [c.to_json() for c in f.components]}


def fiber(shape: od.FinPoset, base: fs.FinSet, bound: int) -> FiberCat:
    """The fiber of the shape projection over ``shape``, enumerable at bound."""
    return FiberCat(shape, base, bound)


@dataclass(frozen=True)
class FiberReport:
    ok: bool
    fiber_objects: int
    coslice_side_objects: int
    hom_pairs_checked: int
    hom_mismatches: int
    roundtrips_checked: int

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "fiber_objects": self.fiber_objects,
            "coslice_side_objects": self.coslice_side_objects,
            "hom_pairs_checked": self.hom_pairs_checked,
            "hom_mismatches": self.hom_mismatches,
            "roundtrips_checked": self.roundtrips_checked,
        }


def fiber_as_coslice_check(shape: od.FinPoset, base: fs.FinSet, bound: int) -> FiberReport:
    """Compare the fiber over ``shape`` with the coslice of the constant
    family inside the category of diagrams over the shape.

    Objects on the coslice side are (diagram, cone with apex the base)
    pairs; morphisms are diagram maps commuting with the cones.  The
    fiber object (F(p), arrows) corresponds to the diagram of carriers
    with the base arrows as cone legs, and each cone corresponds in
    turn to a single point of the limit.
    """
    fib = FiberCat(shape, base, bound)
    fiber_objs = fib.objects()

    coslice_side: list[tuple[Diagram, Cone]] = []
    for d in enumerate_diagrams(shape, bound):
        for cone in enumerate_cones(base, d):
            coslice_side.append((d, cone))

    corresponding = []
    for x in fiber_objs:
        d = Diagram(shape, tuple(c.carrier for c in x.obj), x.arr)
        cone = Cone(base, d, tuple(c.arrow for c in x.obj))
        corresponding.append((d, cone))

    ok = len(coslice_side) == len(fiber_objs)
    key = lambda dc: (
        tuple(s.labels for s in dc[0].objs),
        tuple(f.table for f in dc[0].arrows),
        tuple(leg.table for leg in dc[1].legs),
    )
    ok = ok and sorted(map(key, coslice_side)) == sorted(map(key, corresponding))

    roundtrips = 0
    for d, cone in corresponding:
        point = cone_to_point(cone)
        back = point_to_cone(point, d)
        if tuple(l.table for l in back.legs) != tuple(l.table for l in cone.legs):
            ok = False
        roundtrips += 1

    mismatches = 0
    pairs_checked = 0
    for i, x in enumerate(fiber_objs):
        for j, y in enumerate(fiber_objs):
            pairs_checked += 1
            fiber_side = {tuple(c.table for c in m.components) for m in fib.hom(x, y)}
            dx, cx = corresponding[i]
            dy, cy = corresponding[j]
            diagram_side = set()
            for comps in itertools.product(
                *(
                    [
                        fs.FinFn(dx.objs[p], dy.objs[p], t)
                        for t in itertools.product(range(dy.objs[p].size), repeat=dx.objs[p].size)
                    ]
                    for p in range(shape.size)
                )
            ):
                natural = all(
                    dx.arrow(p, q).then(comps[q]) == comps[p].then(dy.arrow(p, q))
                    for p, q in shape.related_pairs()
                )
                under_base = all(
                    cx.legs[p].then(comps[p]) == cy.legs[p] for p in range(shape.size)
                )
                if natural and under_base:
                    diagram_side.add(tuple(c.table for c in comps))
            if fiber_side != diagram_side:
                mismatches += 1
                ok = False
    return FiberReport(
        ok=ok,
        fiber_objects=len(fiber_objs),
        coslice_side_objects=len(coslice_side),
        hom_pairs_checked=pairs_checked,
        hom_mismatches=mismatches,
        roundtrips_checked=roundtrips,
    )


# ---------------------------------------------------------------------------
# lifted counterexample and the proof obligations


@dataclass(frozen=True)
class LiftedCounterexample:
    pos_square: od.StabilityCounterexample
    syn_a: SynObj
    syn_b: SynObj
    syn_c: SynObj
    syn_pullback: SynObj
    lifted_quotient: SynMor
    lifted_inclusion: SynMor
    lifted_to_a: SynMor
    lifted_pulled_back: SynMor
    verified: dict

    def to_json(self) -> dict:
        return {
            "objects": {
                "a": self.syn_a.to_json(),
                "b": self.syn_b.to_json(),
                "c": self.syn_c.to_json(),
                "pullback": self.syn_pullback.to_json(),
            },
            "arrows": {
                "quotient_map": self.lifted_quotient.to_json(),
                "inclusion": self.lifted_inclusion.to_json(),
                "to_a": self.lifted_to_a.to_json(),
                "pulled_back": self.lifted_pulled_back.to_json(),
            },
            "projection_matches_pos_square": True,
            "verified": self.verified,
        }


def lift_stability_counterexample(base: fs.FinSet, cat: CommaCat | None = None) -> LiftedCounterexample:
    """Decorate the instability square constantly with the identity arrow
    of the base and re-verify every classification inside the comma
    instance at bound."""
    if cat is None:
        cat = CommaCat(base, COMMA_MAX_BOUND)
    if cat.base != base:
        raise ValueError("comma instance is over a different base")
    bundle = od.stability_counterexample()
    deco = CoslObj(fs.FinFn.identity(base))
    syn_a = constant_syn_obj(bundle.poset_a, deco)
    syn_b = constant_syn_obj(bundle.poset_b, deco)
    syn_c = constant_syn_obj(bundle.poset_c, deco)
    syn_pb = constant_syn_obj(bundle.pullback, deco)
    lifted_p = SynMor(syn_a, syn_b, bundle.quotient_map)
    lifted_i = SynMor(syn_c, syn_b, bundle.inclusion)
    lifted_to_a = SynMor(syn_pb, syn_a, bundle.to_a)
    lifted_u = SynMor(syn_pb, syn_c, bundle.pulled_back)

    square = Square(lifted_to_a, lifted_u, lifted_p, lifted_i)
    if not is_pullback(cat, square):
        raise RuntimeError("defect: lifted square failed the pullback checker")
    kp = cat.kernel_pair(lifted_p)
    assert kp is not None
    _, p0, p1 = kp
    if not is_coequalizer(cat, p0, p1, lifted_p):
        raise RuntimeError("defect: lifted quotient map lost its coequalizer certificate")
    u_verdict = is_regular_epi_in(cat, lifted_u, method="search")
    if u_verdict.holds:
        raise RuntimeError("defect: lifted pulled-back map is a regular epi after all")
    verified = {
        "square_is_pullback_at_bound": True,
        "lifted_quotient_regular_epi": {
            "holds": True,
            "method": "kernel_pair_coequalizer_certificate",
        },
        "lifted_pulled_back_epi": cat.is_epi(lifted_u),
        "lifted_pulled_back_regular_epi": {"holds": False, "method": u_verdict.method},
        "pos_not_regular_inherited": True,
    }
    return LiftedCounterexample(
        pos_square=bundle,
        syn_a=syn_a,
        syn_b=syn_b,
        syn_c=syn_c,
        syn_pullback=syn_pb,
        lifted_quotient=lifted_p,
        lifted_inclusion=lifted_i,
        lifted_to_a=lifted_to_a,
        lifted_pulled_back=lifted_u,
        verified=verified,
    )


def check_c1(f: SynMor, g: SynMor, q: SynMor, cat: CommaCat) -> bool:
    """Does a decorated coequalizer diagram remain a coequalizer here?

    Malformed or non-commuting decorations fail at SynMor construction;
    a diagram that is not a coequalizer (at either level) returns False.
    """
    if f.src != g.src or f.dst != g.dst:
        raise ValueError("check_c1: the decorated pair is not parallel")
    if q.src != f.dst:
        raise ValueError("check_c1: the projection does not follow the pair")
    return is_coequalizer(cat, f, g, q)


def check_c2(square: Square, cat: CommaCat) -> bool:
    """Does a decorated pullback square remain a pullback here?"""
    return is_pullback(cat, square)


# ---------------------------------------------------------------------------
# coproduct non-preservation of the one-point embedding


def _is_coproduct(cat: EnumCat, x, y, cop, inx, iny) -> bool:
    for t in cat.objects():
        into_t = cat.hom(cop, t)
        for m1 in cat.hom(x, t):
            for m2 in cat.hom(y, t):
                count = 0
                for med in into_t:
                    if cat.then(inx, med) == m1 and cat.then(iny, med) == m2:
                        count += 1
                        if count > 1:
                            return False
                if count != 1:
                    return False
    return True


@dataclass(frozen=True)
class CoproductWitness:
    coslice_coproduct: CoslObj
    comma_coproduct: SynObj
    coslice_verified: bool
    comma_verified: bool
    embedded_shape_size: int
    comma_shape_size: int

    @property
    def preserved(self) -> bool:
        return self.embedded_shape_size == self.comma_shape_size

    def to_json(self) -> dict:
        return {
            "coslice_coproduct": self.coslice_coproduct.to_json(),
            "coslice_coproduct_verified": self.coslice_verified,
            "comma_coproduct": self.comma_coproduct.to_json(),
            "comma_coproduct_verified": self.comma_verified,
            "embedded_coslice_coproduct_shape_size": self.embedded_shape_size,
            "comma_coproduct_shape_size": self.comma_shape_size,
            "coproduct_preserved_by_embedding": self.preserved,
        }


def coproduct_nonpreservation_witness(base: fs.FinSet, bound: int = 2) -> CoproductWitness:
    """Both coproducts of two copies of the identity arrow, verified by
    enumeration, plus the shape-size obstruction to their isomorphism."""
    x = CoslObj(fs.FinFn.identity(base))
    y = CoslObj(fs.FinFn.identity(base))
    cos_cat = CosliceCat(base, bound)
    cop, inx, iny = coslice_coproduct(x, y)
    coslice_ok = _is_coproduct(cos_cat, x, y, cop, inx, iny)

    comma_cat = CommaCat(base, min(bound, COMMA_MAX_BOUND))
    nx, ny = name_embedding(x), name_embedding(y)
    two = od.antichain_poset(("0", "1"))
    comma_cop = SynObj(two, base, (x, y), ())
    jx = SynMor(nx, comma_cop, od.MonotoneMap(nx.shape, two, (0,)))
    jy = SynMor(ny, comma_cop, od.MonotoneMap(ny.shape, two, (1,)))
    comma_ok = _is_coproduct(comma_cat, nx, ny, comma_cop, jx, jy)

    embedded = name_embedding(cop)
    return CoproductWitness(
        coslice_coproduct=cop,
        comma_coproduct=comma_cop,
        coslice_verified=coslice_ok,
        comma_verified=comma_ok,
        embedded_shape_size=embedded.shape.size,
        comma_shape_size=comma_cop.shape.size,
    )

"""Refinement-indexed arrows out of one base and their closing relations.

Objects pair an arrow out of the base with the equivalence it induces
there.  A morphism exists exactly when the source equivalence refines
the target one; in that case a relation between the codomains closes
the triangle exactly, even when no function does.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import ValidationError
from .finset import FinFn, FinRel, FinSet, Partition, enumerate_fns, kernel_partition, refines


@dataclass(frozen=True)
class RAnObj:
    """An arrow out of the base together with its kernel equivalence."""

    arrow: FinFn
    kernel: Partition

    def __init__(self, arrow: FinFn, kernel: Partition | None = None):
        object.__setattr__(self, "arrow", arrow)
        computed = kernel_partition(arrow)
        if kernel is not None and kernel != computed:
            raise ValidationError("cached kernel does not match the arrow's kernel")
        object.__setattr__(self, "kernel", computed)

    @property
    def base(self) -> FinSet:
        return self.arrow.dom

    def to_json(self) -> dict:
        return {"arrow": self.arrow.to_json()}

    @classmethod
    def from_json(cls, data) -> RAnObj:
        if not isinstance(data, dict) or "arrow" not in data:
            raise ValidationError("refinement object JSON must carry an 'arrow'")
        return cls(FinFn.from_json(data["arrow"]))


def ran_hom_exists(src: RAnObj, dst: RAnObj) -> bool:
    """A morphism exists iff the source kernel refines the target kernel."""
    if src.base != dst.base:
        raise ValueError("ran_hom_exists: objects are over different bases")
    return refines(src.kernel, dst.kernel)


def closing_relation(src: RAnObj, dst: RAnObj) -> FinRel:
    """The relation {(k(a), h(a))} between the codomains.

    Guaranteed, under refinement, to recover the target graph exactly
    when composed after the source graph.
    """
    if not ran_hom_exists(src, dst):
        raise ValueError("closing_relation: source kernel does not refine the target kernel")
    k, h = src.arrow, dst.arrow
    rel = FinRel(k.cod, h.cod, tuple((k.table[a], h.table[a]) for a in range(k.dom.size)))
    if FinRel.from_fn(k).compose(rel) != FinRel.from_fn(h):
        raise AssertionError("defect: closing relation does not close the triangle")
    return rel


def _closing_function_exists(k: FinFn, h: FinFn) -> bool:
    """Is there any function f with f o k = h (total on all of k's codomain)?"""
    for table in itertools.product(range(h.cod.size), repeat=k.cod.size):
        if all(table[k.table[a]] == h.table[a] for a in range(k.dom.size)):
            return True
    return False


@dataclass(frozen=True)
class RAnScanReport:
    """Outcome of the exhaustive comparison between functional and
    refinement-level morphism existence."""

    base_max: int
    cod_max: int
    pairs_scanned: int
    function_implies_refinement_violations: int
    closing_relation_failures: int
    witness_src: RAnObj | None
    witness_dst: RAnObj | None
    witness_verified: bool

    @property
    def ok(self) -> bool:
        return (
            self.function_implies_refinement_violations == 0
            and self.closing_relation_failures == 0
            and self.witness_src is not None
            and self.witness_verified
        )

    def to_json(self) -> dict:
        return {
            "base_max": self.base_max,
            "cod_max": self.cod_max,
            "pairs_scanned": self.pairs_scanned,
            "function_implies_refinement_violations": self.function_implies_refinement_violations,
            "closing_relation_failures": self.closing_relation_failures,
            "refinement_without_function_witness": (
                None
                if self.witness_src is None
                else {
                    "src": self.witness_src.to_json(),
                    "dst": self.witness_dst.to_json(),
                }
            ),
            "witness_verified": self.witness_verified,
            "ok": self.ok,
        }


def an_implies_ran_check(base_max: int = 3, cod_max: int = 3) -> RAnScanReport:
    """Exhaustive scan over bases and codomains up to the bounds.

    Verifies that a closing function always forces refinement, that
    every closing relation satisfies its composition equation exactly,
    and exhibits one pair where refinement holds with no closing
    function.  In the category of sets the only such pairs are the
    degenerate ones with an empty base, a nonempty source codomain and
    an empty target codomain, and the scan finds the first of them.
    """
    pairs_scanned = 0
    dir_violations = 0
    rel_failures = 0
    witness: tuple[RAnObj, RAnObj] | None = None
    for base_n in range(base_max + 1):
        base = FinSet.range(base_n)
        for x_n in range(cod_max + 1):
            xset = FinSet.range(x_n)
            for k in enumerate_fns(base, xset):
                src = RAnObj(k)
                for y_n in range(cod_max + 1):
                    yset = FinSet.range(y_n)
                    for h in enumerate_fns(base, yset):
                        dst = RAnObj(h)
                        pairs_scanned += 1
                        hom = ran_hom_exists(src, dst)
                        fn_exists = _closing_function_exists(k, h)
                        if fn_exists and not hom:
                            dir_violations += 1
                        if hom:
                            rel = closing_relation(src, dst)
                            if FinRel.from_fn(k).compose(rel) != FinRel.from_fn(h):
                                rel_failures += 1
                            if not fn_exists and witness is None:
                                witness = (src, dst)
    verified = False
    if witness is not None:
        src, dst = witness
        verified = ran_hom_exists(src, dst) and not _closing_function_exists(
            src.arrow, dst.arrow
        )
    return RAnScanReport(
        base_max=base_max,
        cod_max=cod_max,
        pairs_scanned=pairs_scanned,
        function_implies_refinement_violations=dir_violations,
        closing_relation_failures=rel_failures,
        witness_src=None if witness is None else witness[0],
        witness_dst=None if witness is None else witness[1],
        witness_verified=verified,
    )

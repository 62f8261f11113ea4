"""Command-line front end: audits, counterexamples, user-data checks.

Exit codes: 0 for a clean result, 3 when an audit found a witness,
2 on usage or validation errors.  All reports are deterministic; a
``--threads`` flag (or the FINCAT_THREADS variable) only changes how
the sweep is partitioned, never what it finds.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import __version__
from .comma import (
    CommaCat,
    LiftedCounterexample,
    fiber_as_coslice_check,
    lift_stability_counterexample,
)
from .coslice import CosliceCat
from .enumcat import CLEAN_VERDICT, RegularityReport, Square, audit_regularity, is_coequalizer, is_pullback
from .errors import BoundError, ValidationError
from .finset import FinFn, FinSet, classify_fn, coequalizer_fn, pullback_fn
from .instances import FinPosCat, FinSetCat
from .jsonutil import canonical_dumps
from .order import (
    FinPoset,
    MonotoneMap,
    classify_pos,
    coequalizer_divergence_witness,
    coequalizer_pos,
    pullback_pos,
    stability_counterexample,
)
from .relan import RAnObj, an_implies_ran_check, closing_relation, ran_hom_exists

EXIT_CLEAN = 0
EXIT_USAGE = 2
EXIT_WITNESS = 3

TEXT_HEADER = f"# fincat {__version__}"


def _emit(data: dict, fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(canonical_dumps(data))
    else:
        sys.stdout.write(TEXT_HEADER + "\n")
        sys.stdout.write(_render_text(data, 0))


def _render_text(data, depth: int) -> str:
    pad = "  " * depth
    lines = []
    if isinstance(data, dict):
        for k, v in data.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_render_text(v, depth + 1))
            else:
                shown = v if not isinstance(v, (dict, list)) else "(empty)"
                lines.append(f"{pad}{k}: {shown}")
    elif isinstance(data, list):
        for v in data:
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                lines.append(_render_text(v, depth + 1))
            else:
                lines.append(f"{pad}- {v}")
    return "\n".join(lines) + ("\n" if depth == 0 else "")


def _thread_count(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("FINCAT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ValidationError(f"FINCAT_THREADS={env!r} is not an integer")
    return 1


def _build_instance(name: str, base_size: int, bound: int):
    if name == "finset":
        return FinSetCat(bound)
    if name == "finpos":
        return FinPosCat(bound)
    if name == "coslice":
        return CosliceCat(FinSet.range(base_size), bound)
    if name == "comma":
        return CommaCat(FinSet.range(base_size), bound)
    raise ValidationError(f"unknown instance {name!r}")


def cmd_audit(args) -> int:
    cat = _build_instance(args.instance, args.base_size, args.bound)
    report = audit_regularity(cat, threads=_thread_count(args))
    _emit(report.to_json_dict(), args.format)
    return EXIT_CLEAN if report.clean else EXIT_WITNESS


def cmd_counterexample(args) -> int:
    if args.target == "pos":
        bundle = stability_counterexample()
        data = bundle.to_json()
        # re-verify the universal property of the square at audit scale
        cat = FinPosCat(4)
        square = Square(bundle.to_a, bundle.pulled_back, bundle.quotient_map, bundle.inclusion)
        if not is_pullback(cat, square):
            raise RuntimeError("defect: counterexample square failed the pullback checker")
        data["verified"] = {
            "pullback_universal_at_bound": 4,
            "quotient_map_regular_epi": bundle.quotient_class.regular_epi,
            "pulled_back_epi_not_regular": bundle.pulled_back_class.epi
            and not bundle.pulled_back_class.regular_epi,
        }
        _emit({"target": "pos", **data}, args.format)
        return EXIT_CLEAN
    if args.target == "comma":
        base = FinSet.range(args.base_size)
        lifted = lift_stability_counterexample(base)
        _emit({"target": "comma", **lifted.to_json()}, args.format)
        return EXIT_CLEAN
    if args.target == "coeq-divergence":
        witness = coequalizer_divergence_witness()
        _emit({"target": "coeq-divergence", **witness.to_json()}, args.format)
        return EXIT_CLEAN
    raise ValidationError(f"unknown counterexample target {args.target!r}")


def _looks_like_order(data) -> bool:
    return isinstance(data, dict) and "elements" in data


def _load_map(data):
    """A FinFn or a MonotoneMap, depending on the payload's dom encoding."""
    if not isinstance(data, dict) or "dom" not in data:
        raise ValidationError("map JSON must carry 'dom', 'cod' and 'table'")
    if _looks_like_order(data["dom"]):
        return MonotoneMap.from_json(data)
    return FinFn.from_json(data)


def cmd_check(args) -> int:
    with open(args.input, "r", encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"input is not valid JSON: {exc}") from None
    query = args.query
    if query == "classify":
        f = _load_map(payload.get("f"))
        if isinstance(f, MonotoneMap):
            cls = classify_pos(f)
            result = {"kind": "finpos", "classification": cls.to_json()}
            if cls.regular_epi:
                cat = FinPosCat(min(4, max(f.dom.size, f.cod.size)))
                _, p0, p1 = pullback_pos(f, f)
                if not is_coequalizer(cat, p0, p1, f):
                    raise RuntimeError("defect: classification failed its checker certificate")
                result["verified"] = {"kernel_pair_coequalizer_at_bound": cat.bound}
        else:
            cls = classify_fn(f)
            result = {"kind": "finset", "classification": cls.to_json()}
        _emit({"query": query, **result}, args.format)
        return EXIT_CLEAN
    if query in ("pullback", "coequalizer"):
        f = _load_map(payload.get("f"))
        g = _load_map(payload.get("g"))
        if isinstance(f, MonotoneMap) != isinstance(g, MonotoneMap):
            raise ValidationError("'f' and 'g' must both be plain functions or both monotone maps")
        if isinstance(f, MonotoneMap):
            cat = FinPosCat(min(4, max(f.dom.size, f.cod.size, g.dom.size, g.cod.size)))
            if query == "pullback":
                apex, p0, p1 = pullback_pos(f, g)
                ok = is_pullback(cat, Square(p0, p1, f, g))
                result = {
                    "kind": "finpos",
                    "apex": apex.to_json(),
                    "proj1": p0.to_json(),
                    "proj2": p1.to_json(),
                    "verified_universal_at_bound": cat.bound if ok else False,
                }
            else:
                q, proj = coequalizer_pos(f, g)
                ok = is_coequalizer(cat, f, g, proj)
                result = {
                    "kind": "finpos",
                    "coequalizer": q.to_json(),
                    "projection": proj.to_json(),
                    "verified_universal_at_bound": cat.bound if ok else False,
                }
        else:
            cat = FinSetCat(min(5, max(f.dom.size, f.cod.size, g.dom.size, g.cod.size)))
            if query == "pullback":
                apex, p0, p1 = pullback_fn(f, g)
                ok = is_pullback(cat, Square(p0, p1, f, g))
                result = {
                    "kind": "finset",
                    "apex": apex.to_json(),
                    "proj1": p0.to_json(),
                    "proj2": p1.to_json(),
                    "verified_universal_at_bound": cat.bound if ok else False,
                }
            else:
                q, proj = coequalizer_fn(f, g)
                ok = is_coequalizer(cat, f, g, proj)
                result = {
                    "kind": "finset",
                    "coequalizer": q.to_json(),
                    "projection": proj.to_json(),
                    "verified_universal_at_bound": cat.bound if ok else False,
                }
        if not result["verified_universal_at_bound"]:
            raise RuntimeError("defect: construction failed its own universal-property checker")
        _emit({"query": query, **result}, args.format)
        return EXIT_CLEAN
    if query == "fibers":
        shape = FinPoset.from_json(payload.get("shape"))
        base = FinSet.from_json(payload.get("base"))
        bound = payload.get("bound", 2)
        report = fiber_as_coslice_check(shape, base, bound)
        _emit({"query": query, **report.to_json()}, args.format)
        return EXIT_CLEAN
    if query == "ran":
        src = RAnObj.from_json(payload.get("src"))
        dst = RAnObj.from_json(payload.get("dst"))
        exists = ran_hom_exists(src, dst)
        result = {"hom_exists": exists}
        if exists:
            rel = closing_relation(src, dst)
            result["closing_relation"] = rel.to_json()
            result["composition_recovers_target"] = True
        _emit({"query": query, **result}, args.format)
        return EXIT_CLEAN
    raise ValidationError(f"unknown query {query!r}")


def cmd_nogo(args) -> int:
    base = FinSet.range(args.base_size)
    threads = _thread_count(args)
    coslice_report = audit_regularity(CosliceCat(base, args.bound), threads=threads)
    comma_report = audit_regularity(CommaCat(base, args.bound), threads=threads)
    certified = coslice_report.clean and not comma_report.clean
    conclusion = "obstruction_certified_at_bound" if certified else "inconclusive"
    data = {
        "coslice_audit": coslice_report.to_json_dict(),
        "comma_audit": comma_report.to_json_dict(),
        "conclusion": conclusion,
        "statement": (
            f"obstruction ingredients certified at bound {args.bound}: the coslice audit is "
            "clean and the comma audit carries a verified witness; a finite audit never "
            "claims the unbounded statement"
            if certified
            else f"inconclusive at bound {args.bound}: the audits did not separate the two instances"
        ),
        "bounds": {"base_size": args.base_size, "bound": args.bound},
        "engine_version": __version__,
    }
    _emit(data, args.format)
    return EXIT_WITNESS if certified else EXIT_CLEAN


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fincat",
        description="Finite-category audits: regularity, counterexamples, user-data checks.",
    )
    parser.add_argument("--version", action="version", version=f"fincat {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_audit = sub.add_parser("audit", help="run a regularity audit over one instance")
    p_audit.add_argument("instance", choices=["finset", "finpos", "coslice", "comma"])
    p_audit.add_argument("--bound", type=int, default=3)
    p_audit.add_argument("--base-size", type=int, default=1)
    p_audit.add_argument("--format", choices=["json", "text"], default="text")
    p_audit.add_argument("--threads", type=int, default=None)
    p_audit.set_defaults(func=cmd_audit)

    p_cex = sub.add_parser("counterexample", help="emit a re-verified counterexample bundle")
    p_cex.add_argument("target", choices=["pos", "comma", "coeq-divergence"])
    p_cex.add_argument("--base-size", type=int, default=1)
    p_cex.add_argument("--format", choices=["json", "text"], default="text")
    p_cex.add_argument("--threads", type=int, default=None)
    p_cex.set_defaults(func=cmd_counterexample)

    p_check = sub.add_parser("check", help="run a construction or classification on user data")
    p_check.add_argument("input", help="path to a JSON payload")
    p_check.add_argument(
        "--query",
        required=True,
        choices=["pullback", "coequalizer", "classify", "fibers", "ran"],
    )
    p_check.add_argument("--format", choices=["json", "text"], default="text")
    p_check.add_argument("--threads", type=int, default=None)
    p_check.set_defaults(func=cmd_check)

    p_nogo = sub.add_parser("nogo", help="run both audits and compose the obstruction report")
    p_nogo.add_argument("--base-size", type=int, default=1)
    p_nogo.add_argument("--bound", type=int, default=3)
    p_nogo.add_argument("--format", choices=["json", "text"], default="text")
    p_nogo.add_argument("--threads", type=int, default=None)
    p_nogo.set_defaults(func=cmd_nogo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ValidationError, BoundError, ValueError, FileNotFoundError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

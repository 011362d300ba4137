"""Handlers behind the ``ssok`` subcommands.

Every handler takes the parsed arguments and the run settings, and returns the
payload to print together with the exit status.
"""
import json
import logging
import sys
from argparse import Namespace
from pathlib import Path
from typing import Any, Dict, Tuple

from src.app.core.config import Settings
from src.app.core.dependencies import get_operad, get_suite_service
from src.app.core.exceptions import SchemaValidationError
from src.app.services.anodyne import AnodyneClass, kan_check, verify_certificate
from src.app.services.anodyne_search import search_decomposition
from src.app.services.categories import FiniteCategory, builtin_corpus, nerve_truncated, pi0, poset_category, twisted_arrow_cat
from src.app.services.constructions import boundary, horn, spine, standard_simplex, subcomplex
from src.app.services.exporters import export, import_file
from src.app.services.extensions import (
    bo_fiber,
    coherence_probe,
    ext_category,
    ext_HA_category,
    strict_ext_fiber,
    unary_orbits,
)
from src.app.services.isomorphism import is_isomorphic
from src.app.services.operad_categories import TupleMorphism, standard_active, total_category
from src.app.services.operads import DiscreteOperad, check_operad_axioms
from src.app.services.shapes import ShapeBuilder
from src.app.services.simplicial_set import SimplicialMap, SimplicialSet

logger = logging.getLogger(__name__)

Result = Tuple[Any, bool]


# argument parsing helpers


def _space(ref: str) -> SimplicialSet:
    """A JSON file, or ``simplex:n``, ``boundary:n``, ``horn:n:k``, ``spine:n``."""
    if ref.endswith(".json"):
        item = import_file(ref)
        if not isinstance(item, SimplicialSet):
            raise SchemaValidationError(f"{ref} does not describe a simplicial set")
        return item
    kind, *numbers = ref.split(":")
    try:
        values = [int(v) for v in numbers]
        builders = {"simplex": standard_simplex, "boundary": boundary, "horn": horn, "spine": spine}
        return builders[kind](*values)
    except (KeyError, ValueError, TypeError) as e:
        raise SchemaValidationError(f"Cannot read simplicial set {ref}", {"expected": "simplex:n|boundary:n|horn:n:k|spine:n"}) from e


def _inclusion(ref: str) -> SimplicialMap:
    """A JSON map file, or a builtin subcomplex of Delta^n such as ``spine:4``."""
    if ref.endswith(".json"):
        item = import_file(ref)
        if not isinstance(item, SimplicialMap):
            raise SchemaValidationError(f"{ref} does not describe a simplicial map")
        return item
    sub = _space(ref)
    n = len(sub.vertices()) - 1
    delta = standard_simplex(n)
    return SimplicialMap.inclusion(subcomplex(delta, sub.ids(), sub.name), delta, f"{sub.name} in Delta^{n}")


def _category(ref: str) -> FiniteCategory:
    """A JSON file, a corpus name such as ``span`` or ``Z/2``, or an ordinal ``[n]``."""
    if ref.endswith(".json"):
        item = import_file(ref)
        if not isinstance(item, FiniteCategory):
            raise SchemaValidationError(f"{ref} does not describe a category")
        return item
    for category in builtin_corpus():
        if category.name == ref:
            return category
    if ref.startswith("[") and ref.endswith("]") and ref[1:-1].isdigit():
        return poset_category(int(ref[1:-1]))
    raise SchemaValidationError(f"Unknown category {ref}", {"known": [c.name for c in builtin_corpus()]})


def _sigma(operad: DiscreteOperad, ref: str) -> TupleMorphism:
    """``id`` or ``id:n`` for an identity, ``m`` or ``m:n`` for the block map <m> -> <n>."""
    color = operad.colors[0]
    head, _, tail = ref.partition(":")
    try:
        if head == "id":
            n = int(tail) if tail else 1
            return total_category(operad, n + 1).identity((color,) * n)
        return standard_active(operad, int(head), int(tail) if tail else 1, color)
    except ValueError as e:
        raise SchemaValidationError(f"Cannot read operation {ref}", {"expected": "id|id:n|m|m:n"}) from e


def _write(path: str, text: str) -> None:
    Path(path).write_text(text)
    logger.info(f"Wrote {path}")


# sset


def sset_command(args: Namespace, config: Settings) -> Result:
    space = _space(args.space)
    if args.action == "show":
        return export(space, args.format), True
    if args.action == "validate":
        space.validate()
        return {"name": space.name, "counts": list(space.counts()), "marked": len(space.marked)}, True
    if args.action == "iso":
        other = _space(args.other)
        found = is_isomorphic(space, other, respect_marking=not args.ignore_marking)
        return {"isomorphic": found}, True
    if args.action == "pi0":
        return {"components": [sorted(c) for c in pi0(space)]}, True
    raise SchemaValidationError(f"Unknown sset action {args.action}")


# anodyne


def anodyne_command(args: Namespace, config: Settings) -> Result:
    if args.action == "search":
        inclusion = _inclusion(args.inclusion)
        target_class = AnodyneClass(args.target_class)
        outcome = search_decomposition(inclusion, target_class, step_budget=args.steps, config=config)
        payload: Dict[str, Any] = {
            "inclusion": inclusion.name,
            "class": target_class.value,
            "status": outcome.status,
            "nodes": outcome.nodes_used,
        }
        if outcome.found:
            payload["steps"] = len(outcome.certificate.steps)
            if args.out:
                _write(args.out, export(outcome.certificate))
        if outcome.witness is not None:
            payload["witness"] = {"category": outcome.witness.category.name, "assignment": outcome.witness.assignment}
        return payload, outcome.status != "budget_exhausted"
    if args.action == "verify":
        certificate = import_file(args.inclusion)
        verdict = verify_certificate(certificate)
        failures = [{"step": f.step, "axiom": f.axiom, "message": f.message} for f in verdict.failures]
        return {"accepted": verdict.accepted, "steps_replayed": verdict.steps_replayed, "failures": failures}, verdict.accepted
    if args.action == "kan":
        verdict = kan_check(_space(args.inclusion), config.KAN_DIM_BOUND)
        return {"is_kan": verdict.is_kan, "dim_bound": verdict.dim_bound, "failure": verdict.failure}, True
    raise SchemaValidationError(f"Unknown anodyne action {args.action}")


# cat


def cat_command(args: Namespace, config: Settings) -> Result:
    if args.action == "shape":
        builder = ShapeBuilder(standard_simplex(args.base))
        diagram = builder.shape(args.target)
        if args.format == "dot":
            return export(diagram.space, "dot"), True
        return {"kind": diagram.kind, "counts": list(diagram.counts()), "labels": diagram.vertex_labels()}, True
    category = _category(args.target)
    if args.action == "nerve":
        return export(nerve_truncated(category, config.NERVE_DIM_DEFAULT), args.format), True
    if args.action == "tw":
        return export(twisted_arrow_cat(category), args.format), True
    if args.action == "pi0":
        return {"components": [sorted(map(str, c)) for c in pi0(category)]}, True
    if args.action == "check":
        problems = category.check_axioms()
        return {"category": category.name, "problems": problems}, not problems
    raise SchemaValidationError(f"Unknown cat action {args.action}")


# operad


def _category_summary(category: FiniteCategory) -> Dict[str, Any]:
    return {
        "name": category.name,
        "objects": len(category.objects),
        "morphisms": len(category.morphisms),
        "pi0": len(pi0(category)),
    }


def operad_command(args: Namespace, config: Settings) -> Result:
    operad = get_operad(args.operad)
    if args.action == "axioms":
        report = check_operad_axioms(operad, config.ARITY_BOUND)
        return {"operad": operad.name, "checked": report.checked, "violations": report.violations}, report.ok
    if args.action == "coherence":
        verdict = coherence_probe(operad, _sigma(operad, args.f), _sigma(operad, args.g))
        payload = {
            "operad": verdict.operad,
            "pi0": verdict.pi0_sizes,
            "pushout": verdict.pushout_holds,
            "necessary_only": verdict.necessary_only,
            "details": verdict.details,
        }
        return payload, True
    sigma = _sigma(operad, args.sigma)
    if args.action == "fiber":
        fiber = strict_ext_fiber(operad, sigma)
        return {"sigma": str(sigma), "size": len(fiber), "fiber": [str(f) for f in fiber]}, True
    if args.action == "orbits":
        report = unary_orbits(operad, sigma)
        return {"sigma": str(sigma), "fiber": len(report.fiber), "group": len(report.group),
                "orbits": report.count, "free": report.free}, True
    builders = {"ext": ext_category, "ext-ha": ext_HA_category, "bo": bo_fiber}
    category = builders[args.action](operad, sigma, normalized=args.normalized)
    if args.format == "dot":
        return export(category, "dot"), True
    return _category_summary(category), True


# suite and export


def suite_command(args: Namespace, config: Settings) -> Result:
    report = get_suite_service(config).run(args.selector)
    print(report.summary_table(), file=sys.stderr)
    return report.to_json_lines(), report.passed


def export_command(args: Namespace, config: Settings) -> Result:
    item = import_file(args.path)
    text = export(item, args.format)
    if args.out:
        _write(args.out, text)
        return {"written": args.out}, True
    return text, True


def render(payload: Any) -> str:
    if isinstance(payload, str):
        return payload
    return json.dumps(payload, indent=2, default=str)

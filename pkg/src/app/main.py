import argparse
import json
import logging
import sys
from typing import List, Optional

from src.app.cli.commands import (
    anodyne_command,
    cat_command,
    export_command,
    operad_command,
    render,
    sset_command,
    suite_command,
)
from src.app.core.config import settings
from src.app.core.dependencies import get_run_settings
from src.app.core.exceptions import SsokError
from src.app.services.anodyne import AnodyneClass
from src.app.services.operads import BUILTIN_OPERADS
from src.app.services.shapes import SHAPE_KINDS
from src.app.services.suite import SELECTORS

logger = logging.getLogger(__name__)

COMMANDS = {
    "sset": sset_command,
    "anodyne": anodyne_command,
    "cat": cat_command,
    "operad": operad_command,
    "suite": suite_command,
    "export": export_command,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ssok",
        description="Finite simplicial sets, anodyne certificates, finite categories and discrete operads",
    )
    parser.add_argument("--budget", type=int, help="search node budget")
    parser.add_argument("--arity-bound", type=int, help="largest arity enumerated in operad constructions")
    parser.add_argument("--dim-bound", type=int, help="dimension bound for Kan checks and nerves")
    parser.add_argument("--threads", type=int, help="parallelism cap, defaults to SSOK_THREADS")
    parser.add_argument("--log-level", default=settings.LOG_LEVEL)
    commands = parser.add_subparsers(dest="command", required=True)

    sset = commands.add_parser("sset", help="build, validate and compare simplicial sets")
    sset.add_argument("action", choices=["show", "validate", "iso", "pi0"])
    sset.add_argument("space", help="JSON file or simplex:n, boundary:n, horn:n:k, spine:n")
    sset.add_argument("other", nargs="?", help="second simplicial set for iso")
    sset.add_argument("--format", choices=["json", "dot"], default="json")
    sset.add_argument("--ignore-marking", action="store_true")

    anodyne = commands.add_parser("anodyne", help="search, verify and Kan checks")
    anodyne.add_argument("action", choices=["search", "verify", "kan"])
    anodyne.add_argument("inclusion", help="map, certificate or simplicial set; or a builtin such as spine:4")
    anodyne.add_argument("--class", dest="target_class", choices=[c.value for c in AnodyneClass],
                         default=AnodyneClass.INNER.value)
    anodyne.add_argument("--steps", type=int, help="step budget")
    anodyne.add_argument("--out", help="write the certificate here")

    cat = commands.add_parser("cat", help="finite categories, nerves, twisted arrows and shapes")
    cat.add_argument("action", choices=["nerve", "tw", "pi0", "check", "shape"])
    cat.add_argument("target", help="category name or JSON file; a shape kind for shape")
    cat.add_argument("--base", type=int, default=0, help="K = Delta^base for shapes")
    cat.add_argument("--format", choices=["json", "dot"], default="json")

    operad = commands.add_parser("operad", help="extension categories, fibers, orbits and brane fibers")
    operad.add_argument("action", choices=["ext", "ext-ha", "fiber", "orbits", "bo", "coherence", "axioms"])
    operad.add_argument("--operad", default="AssInv", help=f"one of {sorted(BUILTIN_OPERADS)} or a JSON file")
    operad.add_argument("--sigma", default="id", help="id, id:n, m or m:n")
    operad.add_argument("--f", default="4:2", help="first map of the coherence square")
    operad.add_argument("--g", default="2:1", help="second map of the coherence square")
    operad.add_argument("--normalized", action="store_true")
    operad.add_argument("--format", choices=["json", "dot"], default="json")

    suite = commands.add_parser("suite", help="run acceptance checks")
    suite.add_argument("selector", choices=SELECTORS, nargs="?", default="all")
    suite.add_argument("--report", help="also write the JSON-lines report here")

    export = commands.add_parser("export", help="re-export a JSON document")
    export.add_argument("path")
    export.add_argument("--format", choices=["json", "dot"], default="json")
    export.add_argument("--out")

    parser.epilog = f"shape kinds: {', '.join(SHAPE_KINDS)}"
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )
    config = get_run_settings({
        "budget": args.budget,
        "arity_bound": args.arity_bound,
        "dim_bound": args.dim_bound,
        "threads": args.threads,
        "report": getattr(args, "report", None),
    })
    try:
        payload, ok = COMMANDS[args.command](args, config)
    except SsokError as e:
        logger.error(f"{e.code}: {e.message}")
        print(json.dumps(e.to_dict(), indent=2, default=str))
        return 1
    except Exception as e:
        logger.error(f"Unexpected error: {e}", exc_info=True)
        print(json.dumps({
            "status": "error",
            "error": {
                "code": "INTERNAL_ERROR",
                "message": "An unexpected error occurred",
                "details": str(e) if config.DEBUG else None,
            },
        }, indent=2))
        return 2
    print(render(payload))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())

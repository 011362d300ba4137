"""Acceptance checks grouped by selector, run into a JSON-lines report."""
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

from src.app.core.config import Settings, settings as default_settings
from src.app.core.exceptions import SsokError
from src.app.schemas.report import CheckResult, SuiteReport
from src.app.services.anodyne import AnodyneClass, kan_check
from src.app.services.anodyne_search import search_decomposition
from src.app.services.categories import builtin_corpus, nerve_truncated, pi0, twisted_arrow_cat
from src.app.services.constructions import boundary, simplex_id, standard_simplex, subcomplex
from src.app.services.extensions import (
    bo_fiber,
    coherence_probe,
    ext_category,
    ext_HA_category,
    gamma_witness,
    strict_ext_fiber,
    unary_orbits,
)
from src.app.services.filtrations import (
    a_m_filtrations,
    certify_chain,
    certify_iota,
    i0_chain,
    suite_appendix_identities,
)
from src.app.services.isomorphism import find_isomorphism
from src.app.services.operad_categories import standard_active, total_category
from src.app.services.operads import BUILTIN_OPERADS, builtin_operad, check_operad_axioms, presentation_closure
from src.app.services.shapes import SHAPE_KINDS, ShapeBuilder, r_map
from src.app.services.simplex_ops import identity
from src.app.services.simplicial_set import SimplicialMap
from src.app.services.twisted import s_lower, tw_simplicial

logger = logging.getLogger(__name__)

SELECTORS = ("all", "appendix", "assinv", "comm", "shapes", "bo")

# (vertices, edges, marked edges) of each shape over Delta^0 and Delta^1
SHAPE_COUNTS: Dict[int, Dict[str, Tuple[int, int, int]]] = {
    0: {"F0": (4, 5, 1), "F1": (4, 6, 1), "F2": (3, 3, 0), "F3": (4, 6, 1), "G": (4, 6, 1)},
    1: {"F0": (6, 12, 3), "F1": (6, 15, 3), "F2": (4, 6, 0), "F3": (6, 15, 3), "G": (6, 19, 2)},
}


@dataclass
class Measured:
    """A computed value with optional supporting details."""

    value: Any
    details: Dict[str, Any] = field(default_factory=dict)


@dataclass
class CheckSpec:
    check_id: str
    anchor: str
    expected: Any
    compute: Callable[[], Any]
    provenance: str = "DERIVED"


class SuiteService:
    """Service building and running the acceptance checks.

    Args:
        config: settings carrying budgets, the thread cap and the report path
    """

    def __init__(self, config: Optional[Settings] = None):
        self.config = config or default_settings

    # running

    def _run(self, spec: CheckSpec) -> CheckResult:
        start = time.perf_counter()
        details: Optional[Dict[str, Any]] = None
        try:
            outcome = spec.compute()
            if isinstance(outcome, Measured):
                computed, details = outcome.value, outcome.details or None
            else:
                computed = outcome
            verdict = "pass" if computed == spec.expected else "fail"
        except SsokError as e:
            logger.error(f"Check {spec.check_id} raised {e.code}: {e.message}", exc_info=True)
            computed, verdict, details = None, "error", e.to_dict()["error"]
        except Exception as e:
            logger.error(f"Check {spec.check_id} crashed: {e}", exc_info=True)
            computed, verdict, details = None, "error", {"code": type(e).__name__, "message": str(e)}
        wall_time = round(time.perf_counter() - start, 3)
        if verdict != "pass":
            logger.warning(f"Check {spec.check_id}: expected {spec.expected!r}, computed {computed!r}")
        return CheckResult(
            check_id=spec.check_id,
            anchor=spec.anchor,
            expected=spec.expected,
            provenance=spec.provenance,
            computed=computed,
            verdict=verdict,
            wall_time=wall_time,
            details=details,
        )

    def run(self, selector: str = "all") -> SuiteReport:
        """Run every check of a selector.

        Raises:
            SsokError: for an unknown selector
        """
        specs = self.checks(selector)
        report = SuiteReport(selector=selector, started_at=datetime.now())
        threads = max(1, self.config.SSOK_THREADS)
        logger.info(f"Step 1: running {len(specs)} checks for selector {selector} on {threads} threads")
        if threads == 1:
            results = [self._run(spec) for spec in specs]
        else:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(self._run, specs))
        report.checks.extend(results)
        failed = sum(1 for c in results if c.verdict != "pass")
        logger.info(f"Step 2: selector {selector} finished, {failed} of {len(results)} checks failed")
        if self.config.REPORT_PATH:
            Path(self.config.REPORT_PATH).write_text(report.to_json_lines() + "\n")
            logger.info(f"Report written to {self.config.REPORT_PATH}")
        return report

    def checks(self, selector: str) -> List[CheckSpec]:
        groups = {
            "assinv": self.assinv_checks,
            "comm": self.comm_checks,
            "appendix": self.appendix_checks,
            "shapes": self.shape_checks,
            "bo": self.bo_checks,
        }
        if selector == "all":
            return [spec for build in groups.values() for spec in build()] + self.sweep_checks()
        if selector not in groups:
            raise SsokError(f"Unknown selector {selector}", {"selectors": list(SELECTORS)})
        return groups[selector]()

    # operads

    def assinv_checks(self) -> List[CheckSpec]:
        """AssInv at the identity of <1>, with the Ass counterparts."""
        assinv = builtin_operad("AssInv")
        ass = builtin_operad("Ass")
        id_assinv = total_category(assinv, 2).identity(("x",))
        id_ass = total_category(ass, 2).identity(("x",))

        def closure() -> Dict[int, int]:
            found = presentation_closure(assinv, [assinv.mu, assinv.tau, assinv.e], 2)
            return {n: len(ops) for n, ops in found.items()}

        def endomorphisms() -> Measured:
            ext = ext_category(assinv, id_assinv, normalized=True)
            ha = ext_HA_category(assinv, id_assinv, normalized=True)
            canonical = ext.objects[0]
            return Measured(
                [len(ext.hom(canonical, canonical)), len(ha.hom(canonical, canonical))],
                {"objects": len(ext.objects)},
            )

        def full_vs_normalized() -> Measured:
            full = ext_category(assinv, id_assinv)
            reduced = ext_category(assinv, id_assinv, normalized=True)
            return Measured(len(pi0(full)) == len(pi0(reduced)), {"full_objects": len(full.objects)})

        return [
            CheckSpec("assinv.fiber", "AssInv: strict extensions of id form a 4-element set", 4,
                      lambda: len(strict_ext_fiber(assinv, id_assinv)), "SOURCE"),
            CheckSpec("assinv.unary", "AssInv: unary operations form Z/2", 2,
                      lambda: len(assinv.unary_operations("x")), "SOURCE"),
            CheckSpec("assinv.orbits", "AssInv: unary orbits on the strict fiber", 2,
                      lambda: unary_orbits(assinv, id_assinv).count),
            CheckSpec("assinv.pi0_ext", "AssInv: Ext(id) has two components", 2,
                      lambda: len(pi0(ext_category(assinv, id_assinv))), "SOURCE"),
            CheckSpec("assinv.pi0_bo", "AssInv: brane fiber over id at pi0", 2,
                      lambda: len(pi0(bo_fiber(assinv, id_assinv)))),
            CheckSpec("assinv.normalized", "AssInv: normalized Ext meets every component", True,
                      full_vs_normalized),
            CheckSpec("assinv.endomorphisms", "AssInv: endomorphisms of the canonical extension, Ext and ExtHA",
                      [1, 2], endomorphisms),
            CheckSpec("assinv.presentation", "AssInv: closure of mu, tau, e through arity 2",
                      {0: 1, 1: 2, 2: 8}, closure),
            CheckSpec("ass.fiber", "Ass: strict extensions of id", 2,
                      lambda: len(strict_ext_fiber(ass, id_ass))),
            CheckSpec("ass.orbits", "Ass: unary orbits on the strict fiber", 2,
                      lambda: unary_orbits(ass, id_ass).count),
            CheckSpec("ass.pi0_ext", "Ass: Ext(id) is a 0-sphere at pi0", 2,
                      lambda: len(pi0(ext_category(ass, id_ass))), "SOURCE"),
        ] + [
            CheckSpec(f"ass.pi0_ext.{m}->{n}", f"Ass: Ext of the block map <{m}> -> <{n}>", m + n,
                      lambda m=m, n=n: len(pi0(ext_category(ass, standard_active(ass, m, n), normalized=True))))
            for m, n in ((2, 1), (3, 1), (2, 2))
        ]

    @staticmethod
    def _axioms(name: str) -> Measured:
        report = check_operad_axioms(builtin_operad(name), 4)
        return Measured(report.ok, {"checked": report.checked, "violations": report.violations[:5]})

    def comm_checks(self) -> List[CheckSpec]:
        """Comm at the identity of <1> and its total category."""
        comm = builtin_operad("Comm")
        total = total_category(comm, 2)
        id_comm = total.identity(("x",))

        def singleton_homs() -> Measured:
            ext = ext_category(comm, id_comm)
            sizes = {len(ext.hom(a, b)) for a in ext.objects for b in ext.objects}
            return Measured(sizes == {1}, {"objects": len(ext.objects), "hom_sizes": sorted(sizes)})

        def witness() -> Measured:
            found = gamma_witness(ext_HA_category(comm, id_comm))
            if found is None:
                return Measured(None)
            return Measured(found.mu_has_retraction, {"mu": str(found.mu)})

        return [
            CheckSpec("comm.fiber", "Comm: strict extensions of id", 1,
                      lambda: len(strict_ext_fiber(comm, id_comm))),
            CheckSpec("comm.pi0_ext", "Comm: Ext(id) is the singleton set", 1,
                      lambda: len(pi0(ext_category(comm, id_comm))), "SOURCE"),
            CheckSpec("comm.singleton_homs", "Comm: every hom-set of Ext(id) is a singleton", True, singleton_homs),
            CheckSpec("comm.gamma_retraction", "Comm: in ExtHA the endomorphism from mu; mu has no retraction",
                      False, witness, "SOURCE"),
            CheckSpec("comm.total_hom", "Comm: hom(<2>, <1>) in the total category", 4,
                      lambda: len(total.hom(("x", "x"), ("x",)))),
        ]

    @staticmethod
    def _coherence(name: str, k: int) -> Measured:
        """Check every composable active f: <m> -> <k>, g: <k> -> <n> with m <= 3 and 1 <= n <= 3."""
        operad = builtin_operad(name)
        total = total_category(operad, 4)
        x = ("x",)
        pairs = 0
        failures: List[str] = []
        for m in range(0, 4):
            for f in total.hom(x * m, x * k, active_only=True):
                for n in range(1, 4):
                    for g in total.hom(x * k, x * n, active_only=True):
                        pairs += 1
                        if not coherence_probe(operad, f, g).pushout_holds:
                            failures.append(f"{g} o {f}")
        return Measured(not failures, {"pairs": pairs, "failures": failures[:5]})

    def sweep_checks(self) -> List[CheckSpec]:
        """Exhaustive sweeps run only under ``all``: operad axioms and the coherence squares."""
        return [
            CheckSpec(f"axioms.{name}", f"{name}: operad axioms through arity 4", True,
                      lambda name=name: self._axioms(name))
            for name in BUILTIN_OPERADS
        ] + [
            CheckSpec(f"coherence.{name}.{k}", f"{name}: extension squares through <{k}> are pushouts at pi0", True,
                      lambda name=name, k=k: self._coherence(name, k))
            for name in ("Comm", "Ass")
            for k in range(1, 4)
        ]

    def bo_checks(self) -> List[CheckSpec]:
        """Orbits, components of Ext and components of the brane fiber agree."""
        specs = []
        for name in BUILTIN_OPERADS:
            operad = builtin_operad(name)
            for m in range(0, 4):
                if not operad.operations(("x",) * m, "x"):
                    continue
                specs.append(
                    CheckSpec(f"bo.{name}.{m}", f"{name}: orbits = pi0 Ext = pi0 BO over <{m}> -> <1>", True,
                              lambda operad=operad, m=m: self._bo_agreement(operad, m))
                )
        return specs

    @staticmethod
    def _bo_agreement(operad, m: int) -> Measured:
        sigma = standard_active(operad, m, 1)
        orbits = unary_orbits(operad, sigma).count
        ext = len(pi0(ext_category(operad, sigma, normalized=True)))
        bo = len(pi0(bo_fiber(operad, sigma, normalized=True)))
        return Measured(orbits == ext == bo, {"orbits": orbits, "pi0_ext": ext, "pi0_bo": bo})

    # anodyne

    def appendix_checks(self) -> List[CheckSpec]:
        """Pushout-join identities, anodyne certificates and Kan recognition."""
        config = self.config

        def appendix() -> Measured:
            report = suite_appendix_identities(config=config)
            halted = report.halted_at
            return Measured(report.passed, {
                "checks": len(report.checks),
                "halted_at": None if halted is None else {"family": halted.family, "params": halted.params},
            })

        def spine_search(n: int) -> Measured:
            delta = standard_simplex(n)
            spine = subcomplex(delta, [simplex_id([str(v), str(v + 1)]) for v in range(n)], f"Sp^{n}")
            outcome = search_decomposition(SimplicialMap.inclusion(spine, delta, f"Sp^{n}"), AnodyneClass.INNER,
                                           config=config, with_witness=False)
            steps = len(outcome.certificate.steps) if outcome.found else 0
            return Measured(outcome.status, {"steps": steps, "nodes": outcome.nodes_used})

        def boundary_rejected() -> Measured:
            inclusion = SimplicialMap.inclusion(boundary(2), standard_simplex(2), "dDelta^2")
            outcome = search_decomposition(inclusion, AnodyneClass.INNER, config=config)
            witness = outcome.witness.category.name if outcome.witness is not None else None
            return Measured([outcome.status, witness is not None], {"witness": witness})

        def chain(filtration, target_class) -> Measured:
            result = certify_chain(filtration, target_class, config)
            return Measured(result.accepted, {
                "failed_stage": result.failed_stage,
                "steps": len(result.certificate.steps) if result.certificate else 0,
            })

        def iota() -> Measured:
            outer, staged = certify_iota(config)
            return Measured([outer.accepted, staged.accepted],
                            {"failed": [outer.failed_stage, staged.failed_stage]})

        specs = [
            CheckSpec("appendix.identities", "pushout-joins of horns and boundaries are horns, total dimension <= 4",
                      True, appendix, "SOURCE"),
        ]
        specs += [
            CheckSpec(f"anodyne.spine.{n}", f"Sp^{n} in Delta^{n} is inner anodyne", "found",
                      lambda n=n: spine_search(n))
            for n in range(2, 6)
        ]
        specs.append(CheckSpec("anodyne.boundary", "dDelta^2 in Delta^2 is not inner anodyne", ["none", True],
                               boundary_rejected))
        for m in range(1, 4):
            spine_filtration, _, closing = a_m_filtrations(m)
            specs += [
                CheckSpec(f"anodyne.A{m}.spine", f"S_{m} in A^{m} through the T stages is marked anodyne", True,
                          lambda f=spine_filtration: chain(f, AnodyneClass.MARKED)),
                CheckSpec(f"anodyne.A{m}.join", f"A^{m} in Delta^{m} * Delta^{m} is marked anodyne", True,
                          lambda f=closing: chain(f, AnodyneClass.MARKED)),
                CheckSpec(f"anodyne.i0~.{m}", f"Delta^{m} x Delta^1 into the join is marked anodyne", True,
                          lambda m=m: chain(i0_chain(m), AnodyneClass.MARKED), "SOURCE"),
            ]
        specs += [
            CheckSpec("anodyne.iota", "K~ in Delta^7: right marked anodyne, staged and direct", [True, True], iota,
                      "SOURCE"),
            CheckSpec("kan.point", "Delta^0 is Kan", True, lambda: kan_check(standard_simplex(0)).is_kan),
            CheckSpec("kan.interval", "Delta^1 is not Kan", False, lambda: kan_check(standard_simplex(1)).is_kan),
        ]
        return specs

    # shapes and twisted arrows

    def shape_checks(self) -> List[CheckSpec]:
        """Shape counts, the section of p, the comparison certificates and Tw consistency."""
        config = self.config
        specs: List[CheckSpec] = []
        for m, table in SHAPE_COUNTS.items():
            for kind in SHAPE_KINDS:
                specs.append(
                    CheckSpec(f"shapes.{kind}.{m}", f"{kind}(Delta^{m}) vertices, edges, marked edges",
                              list(table[kind]),
                              lambda kind=kind, m=m: list(ShapeBuilder(standard_simplex(m)).shape(kind).counts()),
                              "SOURCE")
                )
        specs.append(
            CheckSpec("shapes.G.labels", "G(Delta^1) keeps all 8 vertex labels as aliases", 8,
                      lambda: len(ShapeBuilder(standard_simplex(1)).g.vertex_labels()), "SOURCE")
        )
        specs += [
            CheckSpec(f"shapes.section.{m}", f"p o e = id on F3(Delta^{m})", True,
                      lambda m=m: self._section_splits(m))
            for m in range(3)
        ]
        specs.append(CheckSpec("shapes.r", "r is a map of underlying simplicial sets", True,
                               lambda: not r_map().problems(marked=False)))

        def comparison(kind: str, m: int) -> Measured:
            inclusion = ShapeBuilder(standard_simplex(m)).comparison_map(kind)
            outcome = search_decomposition(inclusion, AnodyneClass.MARKED, config=config, with_witness=False)
            steps = len(outcome.certificate.steps) if outcome.found else 0
            return Measured(outcome.status, {"steps": steps, "nodes": outcome.nodes_used})

        specs += [
            CheckSpec(f"shapes.{kind}.{m}.certificate", f"{kind} for K = Delta^{m} is marked anodyne", "found",
                      lambda kind=kind, m=m: comparison(kind, m), "SOURCE")
            for kind in ("i0", "i1", "i2")
            for m in (0, 1)
        ]
        specs += [
            CheckSpec(f"twisted.nerve.{category.name}", f"Tw(N({category.name})) = N(Tw({category.name})) through 3",
                      True, lambda category=category: self._tw_consistent(category))
            for category in builtin_corpus()
        ]
        specs += [
            CheckSpec(f"twisted.s_lower.{n}", f"s_*(Delta^{n}) = Delta^{2 * n + 1}", True,
                      lambda n=n: find_isomorphism(s_lower(standard_simplex(n)).space, standard_simplex(2 * n + 1),
                                                   respect_marking=False) is not None)
            for n in range(4)
        ]
        return specs

    @staticmethod
    def _section_splits(m: int) -> bool:
        builder = ShapeBuilder(standard_simplex(m))
        composite = builder.p().compose(builder.section_e())
        return all(composite.image_of(x) == (identity(composite.source.dim(x)), x) for x in composite.source.ids())

    @staticmethod
    def _tw_consistent(category) -> Measured:
        left = tw_simplicial(nerve_truncated(category, 7), 3)
        right = nerve_truncated(twisted_arrow_cat(category), 3)
        budget = max(len(left), len(right))
        iso = find_isomorphism(left, right, respect_marking=False, budget=budget)
        return Measured(iso is not None, {"counts": list(left.counts())})


def run_suite(selector: str = "all", config: Optional[Settings] = None) -> SuiteReport:
    """Run the checks of a selector and return their report."""
    return SuiteService(config).run(selector)

from dataclasses import replace

import pytest

from src.app.core.config import Settings
from src.app.core.exceptions import CertificateError, InvalidSimplicialDataError
from src.app.services.anodyne import (
    AnodyneClass,
    GeneratorKind,
    GeneratorSpec,
    generator_map,
    kan_check,
    pushout_join,
    verify_certificate,
)
from src.app.services.anodyne_search import search_decomposition
from src.app.services.constructions import boundary, simplex_id, standard_simplex, subcomplex
from src.app.services.filtrations import a_m_filtrations, certify_chain, certify_iota, horn_cell_identity, i0_chain
from src.app.services.simplicial_set import SimplicialMap


def spine_inclusion(n):
    """The spine of Delta^n as an inclusion of simplicial subsets."""
    delta = standard_simplex(n)
    spine = subcomplex(delta, [simplex_id([str(v), str(v + 1)]) for v in range(n)], f"Sp^{n}")
    return SimplicialMap.inclusion(spine, delta, f"Sp^{n}")


@pytest.fixture
def spine_certificate():
    """Search an inner anodyne certificate for the spine of Delta^3."""
    outcome = search_decomposition(spine_inclusion(3), AnodyneClass.INNER, with_witness=False)
    assert outcome.found
    return outcome.certificate


def test_kan_recognition():
    """Test that a point is Kan and an interval is not."""
    assert kan_check(standard_simplex(0)).is_kan
    verdict = kan_check(standard_simplex(1))
    assert not verdict.is_kan
    assert verdict.failure["n"] == 2


def test_inner_horn_parameters():
    """Test that an outer horn is not an inner horn generator."""
    with pytest.raises(InvalidSimplicialDataError):
        generator_map(GeneratorSpec(GeneratorKind.INNER_HORN, 2, 0))


def test_marked_right_horn_marks_last_edge():
    """Test the marking of the right horn generator."""
    generator = generator_map(GeneratorSpec(GeneratorKind.RIGHT_HORN_MARKED, 2, 2))
    assert generator.target.marked == frozenset({"<1,2>"})
    assert "<1,2>" in generator.source.marked


@pytest.mark.parametrize("n", [2, 3])
def test_spine_is_inner_anodyne(n):
    """Test that the search certifies the spine inclusion."""
    outcome = search_decomposition(spine_inclusion(n), AnodyneClass.INNER, with_witness=False)
    assert outcome.status == "found"
    assert outcome.verdict.accepted
    assert len(outcome.certificate.steps) >= n - 1


def test_boundary_is_not_inner_anodyne():
    """Test that the boundary inclusion has no certificate and a lifting witness."""
    inclusion = SimplicialMap.inclusion(boundary(2), standard_simplex(2), "dDelta^2")
    outcome = search_decomposition(inclusion, AnodyneClass.INNER)
    assert outcome.status == "none"
    assert outcome.witness is not None


def test_search_reports_exhausted_budget():
    """Test that a tiny node budget ends the search without a verdict."""
    outcome = search_decomposition(spine_inclusion(4), AnodyneClass.INNER, node_budget=1)
    assert outcome.status == "budget_exhausted"
    assert not outcome.found


@pytest.mark.parametrize("inclusion,node_budget,status", [
    (spine_inclusion(3), None, "found"),
    (SimplicialMap.inclusion(boundary(2), standard_simplex(2), "dDelta^2"), None, "none"),
    (spine_inclusion(4), 1, "budget_exhausted"),
])
def test_verdict_does_not_depend_on_threads(inclusion, node_budget, status):
    """Test that one and four threads reach the same verdict."""
    verdicts = []
    for threads in (1, 4):
        outcome = search_decomposition(inclusion, AnodyneClass.INNER, node_budget=node_budget,
                                       config=Settings(SSOK_THREADS=threads), with_witness=False)
        verdicts.append(outcome.status)
        if outcome.found:
            assert outcome.verdict.accepted
    assert verdicts == [status, status]


def test_threads_share_one_node_budget():
    """Test that parallel branches draw on a single node budget."""
    outcome = search_decomposition(spine_inclusion(4), AnodyneClass.INNER, node_budget=5,
                                   config=Settings(SSOK_THREADS=4), with_witness=False)
    assert outcome.status == "budget_exhausted"
    assert outcome.nodes_used == 5


def test_certificate_replays(spine_certificate):
    """Test that a searched certificate replays step by step."""
    verdict = verify_certificate(spine_certificate)
    assert verdict.accepted
    assert verdict.steps_replayed == len(spine_certificate.steps)


def test_truncated_certificate_misses_target(spine_certificate):
    """Test that dropping every step leaves a stage short of the target."""
    verdict = verify_certificate(replace(spine_certificate, steps=[]))
    assert not verdict.accepted
    assert verdict.failures[0].axiom == "target"
    with pytest.raises(CertificateError):
        verdict.raise_for_failure()


def test_foreign_generator_is_rejected(spine_certificate):
    """Test that an inner certificate may not use marked horns."""
    first = spine_certificate.steps[0]
    forged = replace(first, generator=GeneratorSpec(GeneratorKind.LEFT_HORN_MARKED, 2, 0))
    verdict = verify_certificate(replace(spine_certificate, steps=[forged] + spine_certificate.steps[1:]))
    assert not verdict.accepted
    assert verdict.failures[0].axiom == "class"
    assert verdict.failures[0].step == 0


def test_pushout_join_of_point_and_interval():
    """Test that the pushout-join of two boundary inclusions is a boundary."""
    point_cell = SimplicialMap.inclusion(boundary(0), standard_simplex(0), "dDelta^0")
    edge_cell = SimplicialMap.inclusion(boundary(1), standard_simplex(1), "dDelta^1")
    joined = pushout_join(point_cell, edge_cell)
    assert joined.source.counts() == (3, 3)
    assert joined.target.counts() == (3, 3, 1)


@pytest.mark.parametrize("n,j,k,horn_first", [(1, 0, 0, True), (1, 1, 1, True), (2, 1, 1, False), (2, 0, 1, True)])
def test_horn_cell_identity(n, j, k, horn_first):
    """Test that a horn joined with a boundary inclusion is again a horn."""
    assert horn_cell_identity(n, j, k, horn_first)


def test_a1_spine_filtration():
    """Test the staged marked certificates of A^1 from its spine and into the join."""
    spine_filtration, _, closing = a_m_filtrations(1)
    spine_result = certify_chain(spine_filtration, AnodyneClass.MARKED)
    assert spine_result.accepted, spine_result.failed_stage
    assert certify_chain(closing, AnodyneClass.MARKED).accepted


def test_a1_spine_filtration_needs_marked_fillers():
    """Test that the T stages of A^1 are out of reach of inner horns alone."""
    spine_filtration, _, _ = a_m_filtrations(1)
    result = certify_chain(spine_filtration, AnodyneClass.INNER)
    assert not result.accepted
    assert result.failed_stage == "T_0"


@pytest.mark.slow
def test_a2_spine_filtration():
    """Test the staged marked certificate of A^2 from its spine."""
    spine_filtration, _, _ = a_m_filtrations(2)
    result = certify_chain(spine_filtration, AnodyneClass.MARKED)
    assert result.accepted, result.failed_stage


@pytest.mark.slow
def test_iota_certificates():
    """Test that K~ in Delta^7 and the staged Sp^7 in K^ are right marked anodyne."""
    outer, staged = certify_iota()
    assert outer.accepted, outer.failed_stage
    assert staged.accepted, staged.failed_stage
    assert staged.failed_stage is None
    assert [segment.status for segment in staged.segments] == ["found"] * 4
    assert staged.certificate.target_class == AnodyneClass.RIGHT_MARKED


@pytest.mark.slow
def test_cylinder_into_join_is_marked_anodyne():
    """Test the marked certificate of the cylinder into Delta^1 * Delta^1."""
    result = certify_chain(i0_chain(1), AnodyneClass.MARKED)
    assert result.accepted, result.failed_stage

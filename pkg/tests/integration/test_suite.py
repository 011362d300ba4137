import json
from unittest.mock import patch

import pytest

from src.app.core.config import Settings
from src.app.core.exceptions import ArityBoundError, SsokError
from src.app.services.suite import SELECTORS, CheckSpec, Measured, SuiteService, run_suite


@pytest.fixture
def service():
    """Create a suite service with default settings."""
    return SuiteService(Settings())


@pytest.fixture
def toy_checks():
    """Create one passing, one failing and one erroring check."""
    def boom():
        raise ArityBoundError("too many morphisms", {"estimate": 10})

    return [
        CheckSpec("toy.pass", "two plus two", 4, lambda: 2 + 2),
        CheckSpec("toy.fail", "measured value", 5, lambda: Measured(4, {"why": "arithmetic"})),
        CheckSpec("toy.error", "raises", True, boom, "SOURCE"),
    ]


def test_verdicts(service, toy_checks):
    """Test pass, fail and error verdicts of single checks."""
    passed, failed, errored = [service._run(spec) for spec in toy_checks]
    assert passed.verdict == "pass"
    assert failed.verdict == "fail"
    assert failed.computed == 4
    assert failed.details == {"why": "arithmetic"}
    assert errored.verdict == "error"
    assert errored.details["code"] == "ARITY_BOUND"
    assert errored.provenance == "SOURCE"


def test_unknown_selector(service):
    """Test that unknown selectors are rejected."""
    with pytest.raises(SsokError):
        service.run("everything")


def test_check_ids_are_unique(service):
    """Test that every check of the full suite has its own id."""
    ids = [spec.check_id for spec in service.checks("all")]
    assert len(ids) == len(set(ids))
    assert {"assinv.fiber", "comm.gamma_retraction", "shapes.G.1", "anodyne.iota"} <= set(ids)


def test_selectors_partition_the_suite(service):
    """Test that the named selectors and the sweeps make up the full suite."""
    named = [spec.check_id for selector in SELECTORS if selector != "all" for spec in service.checks(selector)]
    sweeps = [spec.check_id for spec in service.sweep_checks()]
    assert not set(named) & set(sweeps)
    assert sorted(named + sweeps) == sorted(spec.check_id for spec in service.checks("all"))


def test_sweeps_stay_out_of_named_selectors(service):
    """Test that the axiom and coherence sweeps only run under all."""
    assinv = {spec.check_id for spec in service.checks("assinv")}
    comm = {spec.check_id for spec in service.checks("comm")}
    assert not any(check_id.startswith("axioms.") for check_id in assinv)
    assert not any(check_id.startswith("coherence.") for check_id in comm)
    sweeps = {spec.check_id for spec in service.sweep_checks()}
    assert {"axioms.AssInv", "coherence.Comm.3", "coherence.Ass.3"} <= sweeps


def test_coherence_sweep_covers_every_target():
    """Test the Comm squares through <1> into every <n> with n <= 3."""
    measured = SuiteService._coherence("Comm", 1)
    assert measured.value is True
    assert measured.details["pairs"] == 24
    assert measured.details["failures"] == []


def test_report_file_and_threads(toy_checks, tmp_path):
    """Test the JSON-lines report written on a thread pool."""
    path = tmp_path / "report.jsonl"
    config = Settings(SSOK_THREADS=2, REPORT_PATH=str(path))
    with patch.object(SuiteService, "checks", return_value=toy_checks):
        report = SuiteService(config).run("assinv")
    assert not report.passed
    assert [c.check_id for c in report.checks] == ["toy.pass", "toy.fail", "toy.error"]
    lines = [json.loads(line) for line in path.read_text().splitlines()]
    assert [line["verdict"] for line in lines] == ["pass", "fail", "error"]
    assert report.summary_table().endswith("3 checks, 2 failed")


@pytest.mark.slow
@pytest.mark.parametrize("selector", ["assinv", "comm", "bo"])
def test_operad_selectors_pass(selector):
    """Test that the operad selectors pass end to end."""
    report = run_suite(selector, Settings())
    failing = [(c.check_id, c.expected, c.computed) for c in report.checks if c.verdict != "pass"]
    assert not failing

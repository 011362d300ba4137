from pydantic import BaseModel, Field
from typing import Any, Dict, List, Literal, Optional
from datetime import datetime


class CheckResult(BaseModel):
    """Outcome of one acceptance check."""
    check_id: str
    anchor: str
    expected: Any = None
    provenance: str = "DERIVED"
    computed: Any = None
    verdict: Literal["pass", "fail", "error"]
    wall_time: float = 0.0
    details: Optional[Dict[str, Any]] = None


class SuiteReport(BaseModel):
    """All checks run for one selector."""
    selector: str
    checks: List[CheckResult] = Field(default_factory=list)
    started_at: Optional[datetime] = None

    @property
    def passed(self) -> bool:
        return all(c.verdict == "pass" for c in self.checks)

    def to_json_lines(self) -> str:
        return "\n".join(c.model_dump_json() for c in self.checks)

    def summary_table(self) -> str:
        width = max([len(c.check_id) for c in self.checks] + [5])
        lines = [f"{'check'.ljust(width)}  verdict  expected -> computed"]
        for c in self.checks:
            lines.append(f"{c.check_id.ljust(width)}  {c.verdict.ljust(7)}  {c.expected!r} -> {c.computed!r}")
        failed = sum(1 for c in self.checks if c.verdict != "pass")
        lines.append(f"{len(self.checks)} checks, {failed} failed")
        return "\n".join(lines)

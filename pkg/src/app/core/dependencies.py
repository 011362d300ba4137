from typing import Any, Dict, Optional

from src.app.core.config import Settings, get_settings
from src.app.services.exporters import import_file
from src.app.services.operads import DiscreteOperad, builtin_operad
from src.app.services.suite import SuiteService

# command line flag -> settings fields it overrides
OVERRIDES = {
    "budget": ("SEARCH_NODE_BUDGET",),
    "arity_bound": ("ARITY_BOUND",),
    "dim_bound": ("KAN_DIM_BOUND", "NERVE_DIM_DEFAULT"),
    "threads": ("SSOK_THREADS",),
    "report": ("REPORT_PATH",),
}


def get_run_settings(flags: Optional[Dict[str, Any]] = None) -> Settings:
    """Get settings with the per-run flags applied."""
    update = {}
    for flag, value in (flags or {}).items():
        if value is None:
            continue
        for name in OVERRIDES.get(flag, ()):
            update[name] = value
    return get_settings().model_copy(update=update)


def get_suite_service(config: Optional[Settings] = None) -> SuiteService:
    """Get suite service instance."""
    return SuiteService(config or get_settings())


def get_operad(name_or_path: str) -> DiscreteOperad:
    """Get a builtin operad by name, or load one from a JSON operad document."""
    if name_or_path.endswith(".json"):
        return import_file(name_or_path)
    return builtin_operad(name_or_path)

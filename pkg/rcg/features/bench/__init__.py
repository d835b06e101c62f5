from __future__ import annotations

from .profile import (
    METRIC_FLOOR,
    Metric,
    ProfileCurve,
    metric_value,
    performance_profile,
    ratio_table,
    read_profile_csv,
    write_profile_csv,
)
from .report import emit_profiles, emit_report, plot_profile, read_records, write_records
from .suite import (
    DEFAULT_LINESEARCHES,
    DEFAULT_RULES,
    RunRecord,
    SuiteConfig,
    parse_solver_id,
    read_config_file,
    run_one,
    run_suite,
    solver_id,
)

__all__ = [
    "DEFAULT_LINESEARCHES",
    "DEFAULT_RULES",
    "METRIC_FLOOR",
    "Metric",
    "ProfileCurve",
    "RunRecord",
    "SuiteConfig",
    "emit_profiles",
    "emit_report",
    "metric_value",
    "parse_solver_id",
    "performance_profile",
    "plot_profile",
    "ratio_table",
    "read_config_file",
    "read_profile_csv",
    "read_records",
    "run_one",
    "run_suite",
    "solver_id",
    "write_profile_csv",
    "write_records",
]

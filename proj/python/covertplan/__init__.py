"""Joint jamming-UAV trajectory and transmit-power planning for a covert link.

The heavy lifting lives in the `_core` extension (C++); this package re-exports
its public surface. See the project README for the scenario file format and
the command line interface.
"""

from covertplan._core import (  # noqa: F401
    BcdTraceRow,
    PlanDiagnostics,
    PlanResult,
    PowerSchedule,
    RadiometerSim,
    Scenario,
    ScenarioFileError,
    SlotCoefficients,
    Trajectory,
    average_covert_rate,
    covert_budget,
    covertness_gap,
    false_alarm,
    hover_point,
    load_scenario,
    min_error_rate,
    miss_detection,
    outage_probability,
    plan_ci,
    plan_gm,
    rate_bound,
    simulate_radiometer,
    slot_argmax,
    uav_gain,
    __version__,
)

__all__ = [
    "BcdTraceRow",
    "PlanDiagnostics",
    "PlanResult",
    "PowerSchedule",
    "RadiometerSim",
    "Scenario",
    "ScenarioFileError",
    "SlotCoefficients",
    "Trajectory",
    "average_covert_rate",
    "covert_budget",
    "covertness_gap",
    "false_alarm",
    "hover_point",
    "load_scenario",
    "min_error_rate",
    "miss_detection",
    "outage_probability",
    "plan_ci",
    "plan_gm",
    "rate_bound",
    "simulate_radiometer",
    "slot_argmax",
    "uav_gain",
]

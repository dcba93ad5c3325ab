"""Five-phase induction machine FSMPC simulator."""

from ._pentadrive import (
    MachineParams,
    clarke,
    metrics_csv_header,
    park,
    phase_voltages,
    run_single,
    run_sweep,
    switch_changes,
    thd,
    validate_config,
    vv_table,
    vvv_table,
)

__all__ = [
    "MachineParams",
    "clarke",
    "metrics_csv_header",
    "park",
    "phase_voltages",
    "run_single",
    "run_sweep",
    "switch_changes",
    "thd",
    "validate_config",
    "vv_table",
    "vvv_table",
]

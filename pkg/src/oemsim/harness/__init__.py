"""Figure scenarios, the sweep engine and file I/O."""

from .scenarios import (
    DEFAULT_BASELINE,
    Axis,
    BaselineParameters,
    Observable,
    Scenario,
    scenario_custom,
    scenario_fig2,
    scenario_fig3,
    scenario_fig4,
    scenario_fig5,
)
from .sweep import SweepResult, SweepRow, evaluate_point, run_sweep
from .output import emit_csv, emit_svg_plot, read_csv

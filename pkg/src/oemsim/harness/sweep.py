from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass, field

import numpy as np

from ..constants import CONSTANTS_VERSION
from ..dynamics import ModeIndex, build_diffusion, build_drift, stability_check
from ..entanglement import ZERO_EN, log_negativity, reduce_cm
from ..errors import ConfigError, NumericalError, UnphysicalStateError
from ..physics import derive_couplings, validate_config
from ..steady_state import solve_lyapunov
from .scenarios import Scenario


@dataclass(frozen=True)
class SweepRow:
    axis_value: float
    entanglement: tuple  # one E_N (float) per observable, None when not computed
    spectral_abscissa: float
    stable: bool
    relative_residual: float | None = None
    error: str | None = None
    covariance: np.ndarray | None = field(default=None, repr=False, compare=False)


@dataclass
class SweepResult:
    scenario_id: str
    axis_name: str
    axis_unit: str
    labels: tuple[str, ...]
    rows: list[SweepRow] = field(default_factory=list)
    config_hash: str = ""
    constants_version: str = CONSTANTS_VERSION

    def column(self, label: str) -> list:
        k = self.labels.index(label)
        return [r.entanglement[k] for r in self.rows]

    @property
    def axis_values(self) -> list[float]:
        return [r.axis_value for r in self.rows]


def evaluate_point(
    scenario: Scenario, value: float, backend: str = "schur", keep_covariance: bool = False
) -> SweepRow:
    """Full pipeline at one axis value; failures are recorded, never raised."""
    value = float(value)
    n_obs = len(scenario.observables)
    nothing = (None,) * n_obs
    nan = float("nan")
    try:
        config = scenario.config_at(value)
        violations = validate_config(config)
        if violations:
            return SweepRow(value, nothing, nan, False, error="; ".join(violations))
        derived = derive_couplings(config)
        A = build_drift(config, derived)
        D = build_diffusion(config, derived)
        report = stability_check(A)
        if not report.is_stable:
            return SweepRow(value, nothing, report.spectral_abscissa, False)
        V, diag = solve_lyapunov(A, D, backend=backend, check_stability=False)
        values = []
        for ob in scenario.observables:
            a, b = ModeIndex.microwave(ob.a), ModeIndex.microwave(ob.b)
            e = log_negativity(reduce_cm(V, a, b), a, b).e_n
            values.append(0.0 if e < ZERO_EN else e)
        return SweepRow(
            value, tuple(values), report.spectral_abscissa, True, diag.relative_residual,
            covariance=V if keep_covariance else None,
        )
    except (NumericalError, UnphysicalStateError, ValueError) as exc:
        return SweepRow(value, nothing, nan, False, error=f"{type(exc).__name__}: {exc}")


def run_sweep(
    scenario: Scenario, backend: str = "schur", workers: int = 1, keep_covariance: bool = False
) -> SweepResult:
    """Evaluate every axis point; rows come back sorted by axis value.

    ``workers > 1`` evaluates points in a process pool; the output does not
    depend on scheduling. ``keep_covariance`` attaches each solved matrix to its row.
    """
    violations = scenario.violations()
    if violations:
        raise ConfigError("; ".join(violations))
    values = [float(v) for v in scenario.axis.values()]
    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            n = len(values)
            rows = list(pool.map(evaluate_point, [scenario] * n, values, [backend] * n, [keep_covariance] * n))
    else:
        rows = [evaluate_point(scenario, v, backend, keep_covariance) for v in values]
    rows.sort(key=lambda r: r.axis_value)
    return SweepResult(
        scenario_id=scenario.id,
        axis_name=scenario.axis.name,
        axis_unit=scenario.axis.unit,
        labels=tuple(o.label for o in scenario.observables),
        rows=rows,
        config_hash=scenario.config_hash(),
    )

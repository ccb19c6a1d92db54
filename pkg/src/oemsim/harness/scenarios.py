"""Baseline parameter sets and the standard sweep scenarios."""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from dataclasses import dataclass, replace

import numpy as np

from ..constants import CONSTANTS_VERSION
from ..physics import (
    MechanicalParams,
    MicrowaveCavityParams,
    OpticalParams,
    SystemConfig,
    validate_config,
)

TWO_PI = 2.0 * math.pi
OMEGA_M = TWO_PI * 10e6

SCENARIO_IDS = (
    "fig2_detuning",
    "fig3_multifreq",
    "fig4_temperature",
    "fig5_detuning_coefficient",
    "custom",
)


@dataclass(frozen=True)
class BaselineParameters:
    """Shared parameter set, SI units with angular frequencies."""

    omega_m: float = OMEGA_M
    quality_factor: float = 5e4
    mass: float = 10e-12  # 10 ng
    temperature: float = 15e-3
    drive_wavelength: float = 1550e-9
    kappa_c: float = 0.08 * OMEGA_M
    optical_power: float = 30e-3
    cavity_length: float = 1e-3
    delta_c: float = 0.5 * OMEGA_M
    kappa_w: float = 0.02 * OMEGA_M
    microwave_power: float = 30e-3
    gap: float = 100e-9
    mu: float = 0.008
    omega_w: float = TWO_PI * 9e9
    delta_w: float = 0.5 * OMEGA_M

    def mechanical(self) -> MechanicalParams:
        return MechanicalParams(self.omega_m, self.quality_factor, self.mass, self.temperature)

    def optical(self) -> OpticalParams:
        return OpticalParams(
            self.drive_wavelength, self.kappa_c, self.optical_power, self.cavity_length, self.delta_c
        )

    def cavity(self, omega_w: float, delta_w: float, pair_id: int, sign: int) -> MicrowaveCavityParams:
        return MicrowaveCavityParams(
            omega_w=omega_w,
            kappa_w=self.kappa_w,
            drive_power=self.microwave_power,
            gap=self.gap,
            mu=self.mu,
            delta_w=delta_w,
            pair_id=pair_id,
            sign=sign,
        )

    def system(self, pair_frequencies, pair_detunings=None) -> SystemConfig:
        """One opposite-detuned pair per entry of ``pair_frequencies`` (rad/s).

        ``pair_detunings`` gives the ``+`` member's detuning for each pair and
        defaults to ``delta_w`` for all of them.
        """
        if pair_detunings is None:
            pair_detunings = [self.delta_w] * len(pair_frequencies)
        cavities = []
        for k, (w, d) in enumerate(zip(pair_frequencies, pair_detunings), start=1):
            cavities.append(self.cavity(w, d, k, +1))
            cavities.append(self.cavity(w, -d, k, -1))
        return SystemConfig(self.mechanical(), self.optical(), tuple(cavities))


DEFAULT_BASELINE = BaselineParameters()


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    points: int = 101
    spacing: str = "linear"

    def values(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.points)
        v = np.linspace(self.start, self.stop, self.points)
        if self.start == -self.stop:
            # Make the grid exactly antisymmetric so even/odd checks are exact.
            v = 0.5 * (v - v[::-1])
        return v

    @property
    def unit(self) -> str:
        return AXIS_UNITS[self.name]

    def violations(self) -> list[str]:
        v = []
        if self.name not in AXIS_UNITS:
            v.append(f"axis.name {self.name!r} unknown; choose from {sorted(AXIS_UNITS)}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            v.append("axis bounds must be finite")
        if self.points < 2:
            v.append(f"axis.points must be >= 2 (got {self.points})")
        if self.spacing not in ("linear", "log"):
            v.append(f"axis.spacing must be 'linear' or 'log' (got {self.spacing!r})")
        elif self.spacing == "log" and not (self.start > 0 and self.stop > 0):
            v.append("log axis bounds must be positive")
        return v


@dataclass(frozen=True)
class Observable:
    """Microwave cavity pair (1-based cavity numbers) reported by a sweep."""

    label: str
    a: int
    b: int


def _set_uniform_detuning(config: SystemConfig, value: float) -> SystemConfig:
    w = config.mech.omega_m
    mws = tuple(replace(mw, delta_w=mw.sign * value * w) for mw in config.microwaves)
    return replace(config, microwaves=mws)


def _set_detuning_coefficient(config: SystemConfig, value: float) -> SystemConfig:
    w = config.mech.omega_m
    mws = tuple(
        replace(mw, delta_w=mw.sign * (i // 2 + 1) * value * w) for i, mw in enumerate(config.microwaves)
    )
    return replace(config, microwaves=mws)


def _set_temperature(config: SystemConfig, value: float) -> SystemConfig:
    return replace(config, mech=replace(config.mech, temperature=value))


def _set_optical_detuning(config: SystemConfig, value: float) -> SystemConfig:
    return replace(config, optical=replace(config.optical, delta_c=value * config.mech.omega_m))


AXIS_APPLY = {
    "delta_w": _set_uniform_detuning,
    "detuning_coefficient": _set_detuning_coefficient,
    "temperature": _set_temperature,
    "delta_c": _set_optical_detuning,
}
AXIS_UNITS = {
    "delta_w": "omega_m",
    "detuning_coefficient": "1",
    "temperature": "K",
    "delta_c": "omega_m",
}


@dataclass(frozen=True)
class Scenario:
    id: str
    base_config: SystemConfig
    axis: Axis
    observables: tuple[Observable, ...]

    def config_at(self, value: float) -> SystemConfig:
        return AXIS_APPLY[self.axis.name](self.base_config, float(value))

    def violations(self) -> list[str]:
        v = [f"scenario.id {self.id!r} unknown"] if self.id not in SCENARIO_IDS else []
        v += self.axis.violations()
        v += validate_config(self.base_config)
        n = self.base_config.n_microwave
        for ob in self.observables:
            if not (1 <= ob.a <= n and 1 <= ob.b <= n) or ob.a == ob.b:
                v.append(f"observable {ob.label!r} indexes cavities ({ob.a}, {ob.b}) outside 1..{n}")
        return v

    def config_hash(self) -> str:
        payload = {
            "id": self.id,
            "config": dataclasses.asdict(self.base_config),
            "axis": dataclasses.asdict(self.axis),
            "observables": [dataclasses.asdict(o) for o in self.observables],
            "constants": CONSTANTS_VERSION,
        }
        blob = json.dumps(payload, sort_keys=True, default=repr)
        return hashlib.sha256(blob.encode()).hexdigest()


def _opposite_label(i: int, j: int, sign_i: str, sign_j: str) -> str:
    return f"w{i}{sign_i}/w{j}{sign_j}"


def scenario_fig2(pair_count: int = 2, points: int = 101, baseline: BaselineParameters = DEFAULT_BASELINE) -> Scenario:
    """Identical 9 GHz pairs versus the uniform detuning ``delta_w`` in ``[-omega_m, omega_m]``."""
    if pair_count < 1:
        raise ValueError("pair_count must be >= 1")
    config = baseline.system([baseline.omega_w] * pair_count)
    obs = [Observable(_opposite_label(1, 2, "+", "-"), 1, 2)]
    if pair_count >= 2:
        obs.append(Observable(_opposite_label(1, 3, "+", "+"), 1, 3))
        obs.append(Observable(_opposite_label(2, 4, "-", "-"), 2, 4))
    return Scenario("fig2_detuning", config, Axis("delta_w", -1.0, 1.0, points), tuple(obs))


FIG3_FREQUENCIES_GHZ = (9.0, 37.5, 60.0)


def _fig3_config(baseline, delta_w=None):
    freqs = [TWO_PI * f * 1e9 for f in FIG3_FREQUENCIES_GHZ]
    dets = None if delta_w is None else [delta_w] * len(freqs)
    return baseline.system(freqs, dets)


def _fig3_cavity(tag: str) -> int:
    freq, sign = tag[:-1], tag[-1]
    k = [f"{f:g}" for f in FIG3_FREQUENCIES_GHZ].index(freq)
    return 2 * k + (1 if sign == "+" else 2)


def _fig3_observable(a: str, b: str) -> Observable:
    return Observable(f"{a}/{b}", _fig3_cavity(a), _fig3_cavity(b))


FIG3_WITHIN = (("9+", "9-"), ("37.5+", "37.5-"), ("60+", "60-"))
FIG3_CROSS = (
    ("9+", "37.5-"), ("9-", "37.5+"),
    ("37.5+", "60-"), ("37.5-", "60+"),
    ("9+", "60-"), ("9-", "60+"),
)
FIG3_SAME_SIGN = (("9+", "37.5+"),)


def scenario_fig3(points: int = 101, baseline: BaselineParameters = DEFAULT_BASELINE) -> Scenario:
    """Three pairs at 9, 37.5 and 60 GHz versus the uniform detuning."""
    obs = tuple(_fig3_observable(a, b) for a, b in FIG3_WITHIN + FIG3_CROSS + FIG3_SAME_SIGN)
    return Scenario("fig3_multifreq", _fig3_config(baseline), Axis("delta_w", -1.0, 1.0, points), obs)


FIG4_DELTA_W = -0.1  # in units of omega_m


def scenario_fig4(
    model: str = "fig3",
    pair_count: int = 2,
    points: int = 101,
    baseline: BaselineParameters = DEFAULT_BASELINE,
) -> Scenario:
    """Temperature sweep (1 mK to 250 mK, log-spaced) at ``delta_w = -0.1 omega_m``.

    ``model="fig3"`` uses the three-frequency network; ``model="fig2"`` uses
    ``pair_count`` identical 9 GHz pairs (``pair_count=10`` is the ten-pair variant).
    """
    dw = FIG4_DELTA_W * baseline.omega_m
    if model == "fig3":
        config = _fig3_config(baseline, dw)
        obs = tuple(_fig3_observable(a, b) for a, b in FIG3_WITHIN)
    elif model == "fig2":
        if pair_count < 1:
            raise ValueError("pair_count must be >= 1")
        config = baseline.system([baseline.omega_w] * pair_count, [dw] * pair_count)
        obs = (Observable(_opposite_label(1, 2, "+", "-"), 1, 2),)
    else:
        raise ValueError(f"model must be 'fig2' or 'fig3', got {model!r}")
    return Scenario("fig4_temperature", config, Axis("temperature", 1e-3, 250e-3, points, "log"), obs)


def scenario_fig5(points: int = 101, baseline: BaselineParameters = DEFAULT_BASELINE) -> Scenario:
    """Two 9 GHz pairs; pair k is detuned by ``+-k * DC * omega_m``."""
    config = baseline.system([baseline.omega_w] * 2)
    obs = (
        Observable("w1+/w2-", 1, 2),
        Observable("w3+/w4-", 3, 4),
        Observable("w1+/w3+", 1, 3),
        Observable("w1+/w4-", 1, 4),
    )
    return Scenario(
        "fig5_detuning_coefficient", config, Axis("detuning_coefficient", -1.0, 1.0, points), obs
    )


def scenario_custom(config: SystemConfig, axis: Axis, observables=None) -> Scenario:
    """Arbitrary network; by default every within-pair observable is reported."""
    if observables is None:
        observables = [
            Observable(f"w{i}+/w{i + 1}-", i, i + 1) for i in range(1, config.n_microwave, 2)
        ]
    return Scenario("custom", config, axis, tuple(observables))

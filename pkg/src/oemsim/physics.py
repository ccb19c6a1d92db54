"""Physical parameters and closed-form derived quantities.

Everything here works in SI units with angular frequencies in rad/s.
Unit-suffixed input (``"10 MHz"``, ``"30 mW"``) is handled by
:mod:`oemsim.harness.configio`; the types below only ever hold plain floats.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

from .constants import C_LIGHT, HBAR, K_B
from .errors import NumericalError


@dataclass(frozen=True)
class MechanicalParams:
    omega_m: float  # rad/s
    quality_factor: float
    mass: float  # kg
    temperature: float  # K

    @property
    def kappa_m(self) -> float:
        return self.omega_m / self.quality_factor


@dataclass(frozen=True)
class OpticalParams:
    drive_wavelength: float  # m
    kappa_c: float  # rad/s
    drive_power: float  # W
    cavity_length: float  # m
    delta_c: float  # rad/s, effective detuning

    @property
    def omega_drive(self) -> float:
        return 2.0 * math.pi * C_LIGHT / self.drive_wavelength

    @property
    def omega_cavity(self) -> float:
        return self.omega_drive + self.delta_c


@dataclass(frozen=True)
class MicrowaveCavityParams:
    omega_w: float  # rad/s, cavity resonance
    kappa_w: float  # rad/s
    drive_power: float  # W
    gap: float  # m, equilibrium plate distance d
    mu: float  # capacitance ratio C_d / C_sigma
    delta_w: float  # rad/s, effective detuning
    pair_id: int
    sign: int  # +1 or -1 within the pair

    @property
    def omega_drive(self) -> float:
        # Static-shift correction G_0w * q_s deliberately left out; see bare_detunings.
        return self.omega_w - self.delta_w


@dataclass(frozen=True)
class SystemConfig:
    mech: MechanicalParams
    optical: OpticalParams
    microwaves: tuple[MicrowaveCavityParams, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "microwaves", tuple(self.microwaves))

    @property
    def n_microwave(self) -> int:
        return len(self.microwaves)

    @property
    def dimension(self) -> int:
        return 2 * self.n_microwave + 4


@dataclass(frozen=True)
class DerivedCouplings:
    g_c: float
    g_w: tuple[float, ...]
    nbar_m: float
    n_thermal_w: tuple[float, ...]
    alpha_s: float
    beta_s: tuple[float, ...]
    q_s: float
    e_c: float
    e_w: tuple[float, ...]
    g0_c: float
    g0_w: tuple[float, ...]
    p_s: float = 0.0


def thermal_occupation(omega: float, temperature: float) -> float:
    """Bose-Einstein mean occupation ``1 / (exp(hbar omega / k_B T) - 1)``.

    Returns exactly 0 at ``temperature == 0``.
    """
    if not (math.isfinite(omega) and math.isfinite(temperature)):
        raise ValueError(f"non-finite input: omega={omega!r}, temperature={temperature!r}")
    if omega <= 0:
        raise ValueError(f"omega must be positive, got {omega!r}")
    if temperature < 0:
        raise ValueError(f"temperature must be non-negative, got {temperature!r}")
    if temperature == 0:
        return 0.0
    x = HBAR * omega / (K_B * temperature)
    if x > 700.0:
        # expm1 overflows; exp(-x) is the exact leading term here.
        return math.exp(-x)
    return 1.0 / math.expm1(x)


def _coupling(prefactor, power, kappa, mass, omega_m, omega_drive, delta):
    return prefactor * math.sqrt(
        power * kappa / (mass * omega_m * omega_drive * (kappa**2 + delta**2))
    )


def derive_couplings(config: SystemConfig) -> DerivedCouplings:
    """Effective linearized couplings, steady amplitudes and thermal occupations.

    Amplitudes are taken real and positive (input phases chosen accordingly),
    so ``alpha_s = E_c / |kappa_c + i delta_c|`` and likewise for each ``beta_s``.
    """
    mech, opt = config.mech, config.optical
    zpf = math.sqrt(HBAR / (mech.mass * mech.omega_m))

    w0c = opt.omega_drive
    g0_c = opt.omega_cavity / opt.cavity_length * zpf
    e_c = math.sqrt(2.0 * opt.drive_power * opt.kappa_c / (HBAR * w0c))
    alpha_s = e_c / math.hypot(opt.kappa_c, opt.delta_c)
    g_c = _coupling(
        2.0 * opt.omega_cavity / opt.cavity_length,
        opt.drive_power, opt.kappa_c, mech.mass, mech.omega_m, w0c, opt.delta_c,
    )

    g_w, g0_w, e_w, beta_s, n_w = [], [], [], [], []
    for mw in config.microwaves:
        w0 = mw.omega_drive
        g0_w.append(mw.mu * mw.omega_w / (2.0 * mw.gap) * zpf)
        e = math.sqrt(2.0 * mw.drive_power * mw.kappa_w / (HBAR * w0))
        e_w.append(e)
        beta_s.append(e / math.hypot(mw.kappa_w, mw.delta_w))
        g_w.append(
            _coupling(
                mw.mu * mw.omega_w / mw.gap,
                mw.drive_power, mw.kappa_w, mech.mass, mech.omega_m, w0, mw.delta_w,
            )
        )
        n_w.append(thermal_occupation(mw.omega_w, mech.temperature))

    q_s = (g0_c * alpha_s**2 + sum(g * b**2 for g, b in zip(g0_w, beta_s))) / mech.omega_m

    derived = DerivedCouplings(
        g_c=g_c,
        g_w=tuple(g_w),
        nbar_m=thermal_occupation(mech.omega_m, mech.temperature),
        n_thermal_w=tuple(n_w),
        alpha_s=alpha_s,
        beta_s=tuple(beta_s),
        q_s=q_s,
        e_c=e_c,
        e_w=tuple(e_w),
        g0_c=g0_c,
        g0_w=tuple(g0_w),
    )
    values = [derived.g_c, derived.q_s, *derived.g_w]
    if not all(math.isfinite(v) for v in values):
        raise NumericalError(f"non-finite derived coupling: g_c={g_c}, g_w={g_w}, q_s={q_s}")
    return derived


def bare_detunings(config: SystemConfig, derived: DerivedCouplings):
    """Detunings before the static radiation-pressure shift, for reporting only.

    Returns ``(delta_0c, [delta_0w1, ...])``.
    """
    delta_0c = config.optical.delta_c + derived.g0_c * derived.q_s
    delta_0w = [mw.delta_w + g0 * derived.q_s for mw, g0 in zip(config.microwaves, derived.g0_w)]
    return delta_0c, delta_0w


def _positive(violations, name, value):
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        violations.append(f"{name} must be finite and > 0 (got {value!r})")


def _non_negative(violations, name, value):
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value >= 0):
        violations.append(f"{name} must be finite and >= 0 (got {value!r})")


def validate_config(config: SystemConfig, check_pair_detunings: bool = True) -> list[str]:
    """Return a list of invariant violations; empty means the config is valid."""
    v: list[str] = []
    m = config.mech
    for name in ("omega_m", "quality_factor", "mass", "temperature"):
        _positive(v, f"mechanical.{name}", getattr(m, name))
    if isinstance(m.quality_factor, (int, float)) and 0 < m.quality_factor < 100:
        warnings.warn(
            f"quality factor {m.quality_factor} is low; the Brownian-noise model assumes Q >> 1",
            stacklevel=2,
        )

    o = config.optical
    for name in ("drive_wavelength", "kappa_c", "drive_power", "cavity_length"):
        _positive(v, f"optical.{name}", getattr(o, name))
    if not math.isfinite(o.delta_c):
        v.append(f"optical.delta_c must be finite (got {o.delta_c!r})")

    n = config.n_microwave
    if n < 2:
        v.append(f"microwaves: n must be >= 2 (got {n})")
    if n % 2:
        v.append(f"microwaves: n must be even (got {n})")

    for i, mw in enumerate(config.microwaves):
        tag = f"microwaves[{i}]"
        for name in ("omega_w", "kappa_w", "gap"):
            _positive(v, f"{tag}.{name}", getattr(mw, name))
        # An undriven cavity (zero power, so G_w = 0) is the uncoupled limit, not an error.
        _non_negative(v, f"{tag}.drive_power", mw.drive_power)
        if not (isinstance(mw.mu, (int, float)) and 0 < mw.mu < 1):
            v.append(f"{tag}.mu out of (0,1) (got {mw.mu!r})")
        if not math.isfinite(mw.delta_w):
            v.append(f"{tag}.delta_w must be finite (got {mw.delta_w!r})")
        if mw.sign not in (1, -1):
            v.append(f"{tag}.sign must be +1 or -1 (got {mw.sign!r})")
        elif mw.sign != (1 if i % 2 == 0 else -1):
            v.append(f"{tag}.sign: ordering must be [pair(+), pair(-), ...]")
        if (
            mw.omega_w > 0
            and math.isfinite(mw.delta_w)
            and mw.omega_w - mw.delta_w <= 0
        ):
            v.append(f"{tag}.delta_w: drive frequency omega_w - delta_w must be > 0")

    seen = set()
    for k in range(0, n - 1, 2):
        a, b = config.microwaves[k], config.microwaves[k + 1]
        if a.pair_id != b.pair_id:
            v.append(f"microwaves[{k}], microwaves[{k + 1}]: pair_id mismatch ({a.pair_id} vs {b.pair_id})")
        if a.pair_id in seen:
            v.append(f"microwaves[{k}].pair_id {a.pair_id} used by more than one pair")
        seen.add(a.pair_id)
        if check_pair_detunings and math.isfinite(a.delta_w) and math.isfinite(b.delta_w):
            scale = max(abs(a.delta_w), abs(b.delta_w))
            if abs(a.delta_w + b.delta_w) > 1e-12 * scale:
                v.append(
                    f"microwaves[{k}], microwaves[{k + 1}].delta_w: pair detunings must be opposite "
                    f"({a.delta_w!r} vs {b.delta_w!r})"
                )
    return v

"""Drift and diffusion matrices of the linearized fluctuation dynamics.

State ordering is ``u = [dq, dp, dX_c, dY_c, dX_w1, dY_w1, ..., dX_wn, dY_wn]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EigensolverError, NumericalError, SingularSystemError
from .physics import DerivedCouplings, SystemConfig

MECHANICAL = "mechanical"
OPTICAL = "optical"
MICROWAVE = "microwave"


@dataclass(frozen=True)
class ModeIndex:
    """A mode of the network; ``j`` is the 1-based microwave cavity number."""

    kind: str
    j: int = 0

    def __post_init__(self):
        if self.kind not in (MECHANICAL, OPTICAL, MICROWAVE):
            raise ValueError(f"unknown mode kind {self.kind!r}")
        if self.kind == MICROWAVE and self.j < 1:
            raise ValueError("microwave cavities are numbered from 1")

    @classmethod
    def microwave(cls, j: int) -> "ModeIndex":
        return cls(MICROWAVE, j)

    @property
    def mode(self) -> int:
        """Position in the mode list: 0 mechanical, 1 optical, j+1 for cavity j."""
        if self.kind == MECHANICAL:
            return 0
        if self.kind == OPTICAL:
            return 1
        return self.j + 1

    @property
    def offset(self) -> int:
        """Row of the X (or q) quadrature; the Y (or p) quadrature follows."""
        return 2 * self.mode

    def __str__(self):
        if self.kind == MICROWAVE:
            return f"w{self.j}"
        return "m" if self.kind == MECHANICAL else "c"


def build_drift(config: SystemConfig, derived: DerivedCouplings, positive_mech_damping: bool = False) -> np.ndarray:
    """Drift matrix ``A`` of ``du/dt = A u + noise``.

    The mechanical damping entry ``A[1, 1]`` is ``-kappa_m``. ``positive_mech_damping=True``
    puts ``+kappa_m`` there instead (anti-damping); it exists for comparison only.
    """
    n = config.n_microwave
    dim = 2 * n + 4
    mech, opt = config.mech, config.optical
    A = np.zeros((dim, dim))

    A[0, 1] = mech.omega_m
    A[1, 0] = -mech.omega_m
    A[1, 1] = mech.kappa_m if positive_mech_damping else -mech.kappa_m

    def cavity(row, kappa, delta, g):
        A[row, row] = -kappa
        A[row, row + 1] = delta
        A[row + 1, row] = -delta
        A[row + 1, row + 1] = -kappa
        A[row + 1, 0] = g
        A[1, row] = g

    cavity(2, opt.kappa_c, opt.delta_c, derived.g_c)
    for j, (mw, g) in enumerate(zip(config.microwaves, derived.g_w), start=1):
        cavity(2 * j + 2, mw.kappa_w, mw.delta_w, g)
    A.setflags(write=False)
    return A


def build_diffusion(config: SystemConfig, derived: DerivedCouplings) -> np.ndarray:
    """Diagonal diffusion matrix ``D``; the optical input noise is taken at zero temperature."""
    kappa_c = config.optical.kappa_c
    diag = [0.0, config.mech.kappa_m * (2.0 * derived.nbar_m + 1.0), kappa_c, kappa_c]
    for mw, nth in zip(config.microwaves, derived.n_thermal_w):
        d = mw.kappa_w * (2.0 * nth + 1.0)
        diag += [d, d]
    D = np.diag(diag)
    D.setflags(write=False)
    return D


@dataclass(frozen=True)
class StabilityReport:
    spectral_abscissa: float  # 1/s; nan when only the certificate ran
    is_stable: bool
    method: str
    eigenvalues: np.ndarray | None = None
    certificate_min_eig: float | None = None


def spectrum(A) -> np.ndarray:
    """All eigenvalues of a real dense matrix (LAPACK Hessenberg + shifted QR)."""
    A = np.asarray(A, dtype=float)
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    try:
        return np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigenvalue iteration did not converge: {exc}") from exc


def lyapunov_certificate(A) -> tuple[bool, float]:
    """Solve ``A P + P A^T = -I``; ``A`` is Hurwitz iff ``P`` is positive definite.

    Returns ``(verdict, smallest eigenvalue of P)``. A singular equation means some
    ``lambda_i + lambda_j = 0``, which already rules out asymptotic stability.
    """
    from .steady_state import _solve_vectorized

    A = np.asarray(A, dtype=float)
    try:
        P = _solve_vectorized(A, np.eye(A.shape[0]))
    except SingularSystemError:
        return False, float("nan")
    P = 0.5 * (P + P.T)
    min_eig = float(np.linalg.eigvalsh(P)[0])
    if not np.isfinite(min_eig):
        raise NumericalError("Lyapunov certificate produced non-finite entries")
    return min_eig > 0.0, min_eig


def stability_check(A, method: str = "eigenvalue") -> StabilityReport:
    """Asymptotic stability of ``du/dt = A u``.

    ``method`` is ``"eigenvalue"``, ``"lyapunov_certificate"`` or ``"both"``; with
    ``"both"`` a disagreement between the two verdicts raises :class:`NumericalError`.
    """
    if method not in ("eigenvalue", "lyapunov_certificate", "both"):
        raise ValueError(f"unknown stability method {method!r}")
    A = np.asarray(A, dtype=float)
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")

    eigs = None
    abscissa = float("nan")
    cert_min = None
    if method in ("eigenvalue", "both"):
        eigs = spectrum(A)
        abscissa = float(np.max(eigs.real))
        verdict = abscissa < 0.0
    if method in ("lyapunov_certificate", "both"):
        cert_verdict, cert_min = lyapunov_certificate(A)
        if method == "both" and cert_verdict != verdict:
            raise NumericalError(
                f"stability verdicts disagree: eigenvalue says {verdict} "
                f"(abscissa {abscissa:.3e}), certificate says {cert_verdict} (min eig {cert_min:.3e})"
            )
        verdict = cert_verdict
    return StabilityReport(abscissa, bool(verdict), method, eigs, cert_min)

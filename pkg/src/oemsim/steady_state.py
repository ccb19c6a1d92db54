"""Stationary covariance matrix of the linear Gaussian dynamics.

The steady state solves the continuous Lyapunov equation ``A V + V A^T = -D``.
Two independent solvers are provided (Kronecker-vectorized dense solve and a
complex-Schur Bartels-Stewart sweep), plus two time-domain routes to the same
matrix that serve as test oracles: RK4 integration of
``dV/dt = A V + V A^T + D`` and Simpson quadrature of ``int M(s) D M(s)^T ds``
with ``M(s) = exp(A s)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .dynamics import spectrum, stability_check
from .errors import NumericalError, SingularSystemError, UnstableSystemError

BACKENDS = ("vectorized", "schur")
ACCEPT_RELATIVE_RESIDUAL = 1e-9


@dataclass(frozen=True)
class SolveDiagnostics:
    residual_norm: float
    relative_residual: float
    backend: str


def lyapunov_residual(A, V, D) -> tuple[float, float]:
    """Frobenius residual of ``A V + V A^T + D`` and its scale-free version."""
    R = A @ V + V @ A.T + D
    res = float(np.linalg.norm(R))
    scale = 2.0 * np.linalg.norm(A) * np.linalg.norm(V) + np.linalg.norm(D)
    return res, (res / scale if scale > 0 else res)


def _factor_vectorized(A):
    """LU factors of the Kronecker sum; returns a solver for ``A X + X A^T = -Q``."""
    n = A.shape[0]
    eye = np.eye(n)
    # Row-major vec: vec(A X) = (A kron I) vec X, vec(X A^T) = (I kron A) vec X.
    K = np.kron(A, eye) + np.kron(eye, A)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        try:
            lu, piv = sla.lu_factor(K, check_finite=False)
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise SingularSystemError(str(exc)) from exc
    if np.any(np.diag(lu) == 0.0):
        raise SingularSystemError("Kronecker-sum system is exactly singular")

    def solve(Q):
        x = sla.lu_solve((lu, piv), -np.asarray(Q, dtype=float).ravel(), check_finite=False)
        return x.reshape(n, n)

    return solve


def _factor_schur(A):
    """Bartels-Stewart on the complex Schur form ``A = Z T Z^H``.

    With ``Y = Z^H X Z`` and ``C = Z^H Q Z`` the equation becomes
    ``T Y + Y T^H = -C``; since ``T^H`` is lower triangular the columns of ``Y``
    decouple when solved from last to first.
    """
    T, Z = sla.schur(np.asarray(A, dtype=float), output="complex")
    n = T.shape[0]
    diag = np.diag(T)
    sums = diag[:, None] + diag.conj()[None, :]
    if np.min(np.abs(sums)) == 0.0:
        raise SingularSystemError("eigenvalues lambda_i + conj(lambda_j) = 0; Lyapunov operator is singular")
    Tc = T.conj()
    eye = np.eye(n)

    def solve(Q):
        C = Z.conj().T @ Q @ Z
        Y = np.zeros((n, n), dtype=complex)
        for j in range(n - 1, -1, -1):
            rhs = -C[:, j] - Y[:, j + 1:] @ Tc[j, j + 1:]
            Y[:, j] = sla.solve_triangular(T + Tc[j, j] * eye, rhs, lower=False, check_finite=False)
        return (Z @ Y @ Z.conj().T).real

    return solve


_FACTORS = {"vectorized": _factor_vectorized, "schur": _factor_schur}


def _solve_refined(factor, A, Q, refinements: int = 1):
    """Solve, then correct with the residual using the same factorization.

    One step of refinement matters when V has a wide dynamic range (strongly
    heated modes next to near-vacuum ones): the first solve is accurate only
    relative to the largest entries, the correction restores the small ones.
    """
    A = np.asarray(A, dtype=float)
    Q = np.asarray(Q, dtype=float)
    solve = factor(A)
    X = solve(Q)
    for _ in range(refinements):
        R = A @ X + X @ A.T + Q
        X = X + solve(R)
    return X


def _solve_vectorized(A, Q, refinements: int = 1):
    """Solve ``A X + X A^T = -Q`` as one dense linear system in vec(X)."""
    return _solve_refined(_factor_vectorized, A, Q, refinements)


def _solve_schur(A, Q, refinements: int = 1):
    """Solve ``A X + X A^T = -Q`` by Bartels-Stewart on the complex Schur form."""
    return _solve_refined(_factor_schur, A, Q, refinements)


def solve_lyapunov(A, D, backend: str = "schur", check_stability: bool = True):
    """Stationary covariance matrix ``V`` with ``A V + V A^T = -D``.

    Parameters
    ----------
    A : (N, N) array
        Drift matrix; must be Hurwitz.
    D : (N, N) array
        Diffusion matrix.
    backend : {"schur", "vectorized"}
        ``schur`` (Bartels-Stewart, O(N^3)) is the default; ``vectorized`` solves the
        N^2 x N^2 Kronecker system and is kept as an independent cross-check.
    check_stability : bool
        Refuse non-Hurwitz ``A``. Callers that already ran a stability check may skip it.

    Returns
    -------
    V : (N, N) array
        Symmetrized solution.
    diagnostics : SolveDiagnostics
    """
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}; choose from {BACKENDS}")
    A = np.asarray(A, dtype=float)
    D = np.asarray(D, dtype=float)
    if check_stability:
        report = stability_check(A)
        if not report.is_stable:
            raise UnstableSystemError(report.spectral_abscissa)
    X = _solve_refined(_FACTORS[backend], A, D)
    V = 0.5 * (X + X.T)
    if not np.all(np.isfinite(V)):
        raise NumericalError(f"{backend} Lyapunov solve produced non-finite entries")
    res, rel = lyapunov_residual(A, V, D)
    if rel > ACCEPT_RELATIVE_RESIDUAL:
        raise NumericalError(f"{backend} Lyapunov solve rejected: relative residual {rel:.3e}")
    return V, SolveDiagnostics(res, rel, backend)


def default_time_step(A, t_final: float) -> float:
    """``min(1 / (50 max|lambda|), t_final / 1000)``."""
    rate = float(np.max(np.abs(spectrum(A))))
    candidates = [t_final / 1000.0] if t_final > 0 else []
    if rate > 0:
        candidates.append(1.0 / (50.0 * rate))
    return min(candidates) if candidates else 1.0


def _rk4_loop(A, D, V, h, steps):
    AT = A.T

    def f(X):
        return A @ X + X @ AT + D

    for k in range(steps):
        k1 = f(V)
        k2 = f(V + 0.5 * h * k1)
        k3 = f(V + 0.5 * h * k2)
        k4 = f(V + h * k3)
        V = V + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        V = 0.5 * (V + V.T)
        if not np.all(np.isfinite(V)):
            raise NumericalError(f"RK4 integration blew up at t = {(k + 1) * h:.6e} s")
    return V


def _rk4_power(A, D, V, h, steps):
    # One RK4 step of a linear ODE x' = L x + d is the affine map
    # x -> x + S (L x + d) with S = h sum_{k<4} (hL)^k / (k+1)!.
    # Composing it `steps` times by repeated squaring gives the same iterate.
    n = A.shape[0]
    eye = np.eye(n)
    L = np.kron(A, eye) + np.kron(eye, A)
    hL = h * L
    I = np.eye(n * n)
    S = h * (I + hL / 2.0 + hL @ hL / 6.0 + hL @ hL @ hL / 24.0)
    M, b = I + S @ L, S @ D.ravel()
    x = V.ravel().copy()
    done = 0
    span = 1
    while steps:
        if steps & 1:
            x = M @ x + b
            done += span
            if not np.all(np.isfinite(x)):
                raise NumericalError(f"RK4 integration blew up at t = {done * h:.6e} s")
        steps >>= 1
        if steps:
            M, b = M @ M, M @ b + b
            span *= 2
            if not (np.all(np.isfinite(M)) and np.all(np.isfinite(b))):
                raise NumericalError(f"RK4 integration blew up at t = {span * h:.6e} s")
    X = x.reshape(n, n)
    return 0.5 * (X + X.T)


def integrate_cm_ode(A, D, V0, t_final: float, dt: float | None = None, max_loop_steps: int = 20000):
    """Integrate ``dV/dt = A V + V A^T + D`` from ``V(0) = V0`` with classical RK4.

    The step is ``dt`` shrunk so that it divides ``t_final`` evenly. Up to
    ``max_loop_steps`` steps are taken one at a time (symmetrizing each step);
    longer runs compose the linear one-step map by repeated squaring, which
    yields the same iterate without a Python-level loop.
    """
    A = np.asarray(A, dtype=float)
    D = np.asarray(D, dtype=float)
    V = np.array(V0, dtype=float)
    if t_final < 0:
        raise ValueError("t_final must be >= 0")
    if t_final == 0:
        return V
    if dt is None:
        dt = default_time_step(A, t_final)
    if not dt > 0:
        raise ValueError("dt must be > 0")
    steps = max(1, math.ceil(t_final / dt - 1e-9))
    h = t_final / steps
    if steps <= max_loop_steps:
        return _rk4_loop(A, D, V, h, steps)
    return _rk4_power(A, D, V, h, steps)


# Pade [13/13] coefficients and the matching 1-norm threshold (Higham 2005).
_PADE13 = (
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0, 10559470521600.0, 670442572800.0, 33522128640.0,
    1323241920.0, 40840800.0, 960960.0, 16380.0, 182.0, 1.0,
)
_THETA13 = 5.371920351148152


def matrix_exponential_propagator(A, t: float = 1.0) -> np.ndarray:
    """``exp(A t)`` by scaling and squaring with a [13/13] Pade approximant."""
    X = np.asarray(A, dtype=float) * t
    if not (np.all(np.isfinite(X)) and math.isfinite(t)):
        raise ValueError("non-finite input to the matrix exponential")
    if t < 0:
        raise ValueError("t must be >= 0")
    n = X.shape[0]
    if t == 0:
        return np.eye(n)
    norm = np.linalg.norm(X, 1)
    s = max(0, math.ceil(math.log2(norm / _THETA13))) if norm > 0 else 0
    X = X / 2.0**s
    b = _PADE13
    I = np.eye(n)
    X2 = X @ X
    X4 = X2 @ X2
    X6 = X4 @ X2
    U = X @ (X6 @ (b[13] * X6 + b[11] * X4 + b[9] * X2) + b[7] * X6 + b[5] * X4 + b[3] * X2 + b[1] * I)
    W = X6 @ (b[12] * X6 + b[10] * X4 + b[8] * X2) + b[6] * X6 + b[4] * X4 + b[2] * X2 + b[0] * I
    E = np.linalg.solve(W - U, W + U)
    for _ in range(s):
        E = E @ E
    return E


def covariance_quadrature(A, D, t_final: float, step: float | None = None, base_panels: int = 64):
    """Composite Simpson approximation of ``int_0^T M(s) D M(s)^T ds``.

    Simpson's nodes are translation invariant, so the rule with ``2N`` panels on
    ``[0, 2T0]`` equals the ``N``-panel sum ``I(T0)`` plus ``M(T0) I(T0) M(T0)^T``.
    The interval is therefore built by doubling from a short base interval.
    """
    A = np.asarray(A, dtype=float)
    D = np.asarray(D, dtype=float)
    if t_final <= 0:
        return np.zeros_like(D)
    if step is None:
        step = 0.05 / float(np.max(np.abs(spectrum(A))))
    doublings = max(0, math.ceil(math.log2(t_final / (base_panels * step))))
    t0 = t_final / 2.0**doublings
    panels = max(2, 2 * math.ceil(t0 / step / 2.0))
    h = t0 / panels

    Mh = matrix_exponential_propagator(A, h)
    M = np.eye(A.shape[0])
    total = np.zeros_like(D)
    for i in range(panels + 1):
        w = 1.0 if i in (0, panels) else (4.0 if i % 2 else 2.0)
        total += w * (M @ D @ M.T)
        if i < panels:
            M = Mh @ M
    total *= h / 3.0
    P = M
    for _ in range(doublings):
        total = total + P @ total @ P.T
        P = P @ P
    return 0.5 * (total + total.T)

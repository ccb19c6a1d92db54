"""Bipartite reduction, symplectic spectra and logarithmic negativity.

Quadratures follow ``X = (a + a^dag)/sqrt(2)``, so the vacuum has variance 1/2
and a two-mode Gaussian state is entangled iff the smallest symplectic
eigenvalue of its partial transpose is below 1/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .dynamics import ModeIndex
from .errors import UnphysicalStateError

PHYSICAL_TOL = 1e-9
RADICAND_TOL = 1e-12
ZERO_EN = 1e-12


def _exact(m) -> list[list[Fraction]]:
    return [[Fraction(float(x)) for x in row] for row in np.asarray(m)]


def _det2_exact(m) -> Fraction:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def _det4_exact(m) -> Fraction:
    """Laplace expansion along the first two rows (products of 2x2 minors)."""
    def minor(r0, r1, c0, c1):
        return m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]

    total = Fraction(0)
    for c0, c1 in ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)):
        r0, r1 = (c for c in range(4) if c not in (c0, c1))
        sign = (-1) ** (c0 + c1 + 1)  # rows 0,1 contribute (0+1)
        total += sign * minor(0, 1, c0, c1) * minor(2, 3, r0, r1)
    return total


def det2(m) -> float:
    """Determinant of a 2x2 block, correctly rounded."""
    return float(_det2_exact(_exact(m)))


def det4(m) -> float:
    """Determinant of a 4x4 matrix, correctly rounded."""
    return float(_det4_exact(_exact(m)))


@dataclass(frozen=True)
class BipartiteCM:
    v1: np.ndarray
    v2: np.ndarray
    v3: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        return np.block([[self.v1, self.v3], [self.v3.T, self.v2]])


@dataclass(frozen=True)
class EntanglementResult:
    e_n: float
    eta_minus: float
    sigma: float
    mode_a: object = None
    mode_b: object = None


def _mode_offset(mode) -> int:
    if isinstance(mode, ModeIndex):
        return mode.offset
    return 2 * int(mode)


def reduce_cm(V, a, b) -> BipartiteCM:
    """Keep the rows/columns of modes ``a`` then ``b``; trace out the rest.

    Modes are :class:`ModeIndex` values or plain mode numbers (0 mechanical,
    1 optical, ``j + 1`` for microwave cavity ``j``).
    """
    V = np.asarray(V, dtype=float)
    ia, ib = _mode_offset(a), _mode_offset(b)
    n = V.shape[0]
    if ia == ib:
        raise ValueError("reduce_cm needs two distinct modes")
    for i in (ia, ib):
        if i < 0 or i + 1 >= n:
            raise IndexError(f"mode at row {i} outside a {n}x{n} covariance matrix")
    idx = [ia, ia + 1, ib, ib + 1]
    sub = V[np.ix_(idx, idx)]
    return BipartiteCM(sub[:2, :2].copy(), sub[2:, 2:].copy(), sub[:2, 2:].copy())


def symplectic_form(n_modes: int) -> np.ndarray:
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def symplectic_eigenvalues(V) -> np.ndarray:
    """Symplectic spectrum (ascending), i.e. the moduli of the eigenvalues of ``i Omega V``."""
    V = np.asarray(V, dtype=float)
    dim = V.shape[0]
    if V.ndim != 2 or V.shape[1] != dim:
        raise ValueError("covariance matrix must be square")
    if dim % 2:
        raise ValueError(f"covariance matrix must have even dimension, got {dim}")
    ev = np.abs(np.linalg.eigvals(symplectic_form(dim // 2) @ V))
    # Eigenvalues come in +-i nu pairs; keep one of each.
    return np.sort(ev)[::2]


def is_physical(V, tol: float = PHYSICAL_TOL) -> bool:
    V = np.asarray(V, dtype=float)
    if np.linalg.eigvalsh(0.5 * (V + V.T))[0] <= 0:
        return False
    return bool(symplectic_eigenvalues(V)[0] >= 0.5 - tol)


def _smaller_root(delta: Fraction, detv: Fraction, radicand: Fraction | None = None) -> float:
    """``sqrt`` of the smaller root of ``x^2 - delta x + detv``, via ``detv / x_+``."""
    if radicand is None:
        radicand = max(Fraction(0), delta * delta - 4 * detv)
    x_plus = 0.5 * (float(delta) + math.sqrt(float(radicand)))
    return math.sqrt(max(0.0, float(detv) / x_plus)) if x_plus > 0 else 0.0


def log_negativity(bi: BipartiteCM, mode_a=None, mode_b=None) -> EntanglementResult:
    """Logarithmic negativity of a two-mode Gaussian state.

    ``Sigma = det V1 + det V2 - 2 det V3`` and
    ``eta^- = sqrt((Sigma - sqrt(Sigma^2 - 4 det V)) / 2)``; ``E_N = max(0, -ln 2 eta^-)``.

    The polynomial invariants (block determinants, ``Sigma`` and the radicand)
    are evaluated exactly in rational arithmetic on the floating-point entries.
    For strongly heated modes the entries are orders of magnitude larger than
    the symplectic eigenvalues, and ``det V`` then cancels almost completely, so
    ordinary floating-point evaluation would lose most of its digits. The smaller
    root is taken as ``det V / eta_+^2`` (Vieta) to avoid the final subtraction.
    Exact arithmetic is order independent, so swapping the modes gives a
    bitwise-identical result.
    """
    full = bi.matrix
    m = _exact(full)
    d1, d2 = _det2_exact([r[:2] for r in m[:2]]), _det2_exact([r[2:] for r in m[2:]])
    d3 = _det2_exact([r[2:] for r in m[:2]])
    detv = _det4_exact(m)
    nu_minus = _smaller_root(d1 + d2 + 2 * d3, detv)
    if np.linalg.eigvalsh(full)[0] <= 0 or nu_minus < 0.5 - PHYSICAL_TOL:
        raise UnphysicalStateError(
            f"bipartite CM is unphysical (smallest symplectic eigenvalue {nu_minus:.12g})"
        )
    sigma_q = d1 + d2 - 2 * d3
    radicand_q = sigma_q * sigma_q - 4 * detv
    sigma = float(sigma_q)
    if radicand_q < 0:
        if radicand_q < -RADICAND_TOL * max(1, sigma_q * sigma_q):
            raise UnphysicalStateError(
                f"negative radicand {float(radicand_q):.3e} in partial-transpose spectrum"
            )
        radicand_q = Fraction(0)
    eta = _smaller_root(sigma_q, detv, radicand_q)
    e_n = max(0.0, -math.log(2.0 * eta)) if eta > 0 else math.inf
    return EntanglementResult(e_n, eta, sigma, mode_a, mode_b)


def pairwise_entanglement_map(V, config) -> np.ndarray:
    """Symmetric matrix of ``E_N`` between every two microwave cavities (zero diagonal)."""
    n = config.n_microwave
    out = np.zeros((n, n))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            a, b = ModeIndex.microwave(i), ModeIndex.microwave(j)
            e = log_negativity(reduce_cm(V, a, b), a, b).e_n
            out[i - 1, j - 1] = out[j - 1, i - 1] = e
    return out

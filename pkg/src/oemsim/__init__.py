"""Stationary microwave-pair entanglement in linearized optoelectromechanical networks."""

from .dynamics import ModeIndex, StabilityReport, build_diffusion, build_drift, stability_check
from .entanglement import (
    BipartiteCM,
    EntanglementResult,
    log_negativity,
    pairwise_entanglement_map,
    reduce_cm,
    symplectic_eigenvalues,
)
from .physics import (
    DerivedCouplings,
    MechanicalParams,
    MicrowaveCavityParams,
    OpticalParams,
    SystemConfig,
    bare_detunings,
    derive_couplings,
    thermal_occupation,
    validate_config,
)
from .steady_state import (
    SolveDiagnostics,
    covariance_quadrature,
    integrate_cm_ode,
    matrix_exponential_propagator,
    solve_lyapunov,
)

__version__ = "0.1.0"

class ConfigError(ValueError):
    """Configuration could not be parsed or violates an invariant."""


class NumericalError(RuntimeError):
    """A numerical routine failed or produced an unacceptable result."""


class UnstableSystemError(NumericalError):
    def __init__(self, spectral_abscissa):
        self.spectral_abscissa = spectral_abscissa
        super().__init__(
            f"drift matrix is not stable (spectral abscissa = {spectral_abscissa:.6g} 1/s)"
        )


class SingularSystemError(NumericalError):
    """The linear system behind a matrix-equation solve is singular."""


class EigensolverError(NumericalError):
    """The eigenvalue iteration did not converge."""


class UnphysicalStateError(ValueError):
    """A covariance matrix violates the uncertainty principle."""

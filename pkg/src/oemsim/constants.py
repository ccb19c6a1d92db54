"""Physical constants (CODATA 2018, exact or recommended values), SI units."""

HBAR = 1.054571817e-34  # J s
K_B = 1.380649e-23  # J / K
C_LIGHT = 299792458.0  # m / s

# Bumped whenever a constant or a unit convention changes; recorded in sweep metadata.
CONSTANTS_VERSION = "codata2018-v1"

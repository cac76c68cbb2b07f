"""Default tolerances and resource caps.

Every cutoff used by the numerical routines lives here so tests and the
CLI can state them explicitly instead of burying magic numbers.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Defaults:
    # matrix power cache: |j| beyond this raises TruncationRangeError
    power_cap: int = 64
    # spectral classification band around modulus 1
    classify_tol: float = 1e-9
    # integer-lattice entry test
    integer_tol: float = 1e-9
    # descriptor construction checks
    inverse_product_tol: float = 1e-10
    moduli_product_rtol: float = 1e-8
    # indicator-boundary exclusion for grid sweeps
    boundary_tol: float = 1e-12
    # origin exclusion ball, in units of the grid spacing
    origin_exclusion_spacings: float = 2.0
    # quasi-lattice window budget
    max_window_points: int = 10**6
    # probes landing this close to the complement-cell boundary are excluded
    probe_boundary_tol: float = 1e-9
    # engineering allowance for discretized frame-inequality verdicts
    allowance: float = 0.05
    # minimum resolvable width of a dilated wavelet, in grid samples
    min_scale_samples: int = 4
    # relative magnitude at the grid edge above which a scale is
    # considered aliased (and below which nodes count as support)
    scale_edge_rtol: float = 1e-3


DEFAULTS = Defaults()

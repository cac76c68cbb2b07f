"""wavelattice: wavelet systems over affine quasi-lattices.

Constructs wavelet systems for an arbitrary invertible dilation A and
translation matrix P, and verifies numerically: the Calderon sum
formula, the quasi-lattice structure of the affine sampling set, and
the inequalities linking discrete frame bounds, covolume, and the
semi-continuous wavelet transform norm.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND as KERNEL_BACKEND  # noqa: F401
from .calderon import (CalderonReport, calderon_partial_sum,  # noqa: F401
                       calderon_report, calderon_sum_on_grid)
from .config import DEFAULTS, Defaults  # noqa: F401
from .errors import (ConfigError, NumericError,  # noqa: F401
                     ResourceLimitError, ScaleRangeError, SpectrumDomainError,
                     ToolkitError, TruncationRangeError,
                     UnsupportedDilationError)
from .frames import (AmalgamResult, CoefficientTable,  # noqa: F401
                     CovolumeCheck, FrameBoundsResult, FrameReport,
                     GridFunction, PlancherelCheck, amalgam_maximal_norm,
                     analysis_coefficients, continuous_transform_norm,
                     covolume_inequality_check, frame_bounds_estimate,
                     frame_report, plancherel_identity_check,
                     random_bandlimited, transform_field,
                     transform_scale_energies)
from .group import (GBox, GroupElement, QuasiLatticeWindow,  # noqa: F401
                    SeparationDensityResult, complement_box, contains,
                    covolume_bounds, covolume_quasilattice, decompose,
                    decompose_batch, generate_quasilattice, haar_weight,
                    identity, inverse, make_interior_probes, multiply,
                    rel_sep_count, separation_density_check)
from .linalg import (DilationDescriptor, as_dilation,  # noqa: F401
                     classify_dilation, matrix_power,
                     preserves_integer_lattice)
from .wavelets import (ClosedFormWavelet, FrequencyWavelet,  # noqa: F401
                       GridSpec, IndicatorUnionWavelet, SampledWavelet,
                       WaveletSetReport, builtin_wavelet, load_sampled_wavelet,
                       norm_l2, save_spectrum, scaled_spectrum,
                       verify_wavelet_set)

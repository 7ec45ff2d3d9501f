"""Stationary Gaussian states and entanglement of oscillators in a common bath."""

__version__ = "0.1.0"

from .units import (Geometry, PhysicalConfig, DimensionlessConfig,  # noqa: F401
                    to_dimensionless, pair_distances, load_config)
from .bath import (SpectralDensityModel, spectral_density, renormalization,  # noqa: F401
                   susceptibility_time, noise_matrix)
from .specfun import incomplete_gamma_0, g_function  # noqa: F401
from .response import alpha_matrix, kernel, normal_modes  # noqa: F401
from .covariance import (QuadratureSpec, CovarianceMatrix,  # noqa: F401
                         covariance_blocks, assemble)
from .gaussian import (symplectic_eigenvalues, partial_transpose, Bipartition,  # noqa: F401
                       ppt_separable, log_negativity, classify_tripartite,
                       is_fully_separable, fidelity_thermal, build_report,
                       EntanglementReport)
from .analytic import (AnalyticPairResult, normal_frequencies,  # noqa: F401
                       entanglement_condition, thermal_occupation)
from .errors import (BathentError, ConfigurationError, GeometryError,  # noqa: F401
                     DomainError, ValidityError, SingularityError,
                     QuadratureError, PhysicsError)

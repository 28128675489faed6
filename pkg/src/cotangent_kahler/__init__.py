"""Kahler-Einstein metrics on punctured cotangent bundles of space forms.

The package builds, on the complement of the zero section in the cotangent
bundle of a positively curved space form, the family of metrics

    G = a sqrt(t) g_ij  (horizontal)  +  inverse block  (vertical),
    perturbed radially by a profile v(t) along the momentum,

together with the compatible almost-complex structure, and verifies
numerically that the pair is almost Kahler for every admissible profile,
Kahler exactly at the coupling ``a = sqrt(2c)``, and Einstein exactly on a
two-parameter family of profiles solving a radial Euler equation.
"""

from .base import (
    BaseCurvature,
    MetricJet,
    ModelParams,
    base_curvature,
    christoffel,
    christoffel_derivative,
    conformal_jet,
    integrable_coupling,
    sectional_curvature,
    space_form_metric,
)
from .connection import (
    ConnectionCoeffs,
    ConnectionFiberDerivs,
    connection_coefficients,
    connection_fiber_derivatives,
    connection_on_frame,
    covariant_field_derivative,
    kahler_connection_coefficients,
    koszul_nabla,
    metric_compatibility_residual,
    torsion_residual,
)
from .curvature import (
    CurvatureBlocks,
    RicciBlocks,
    apply_curvature,
    curvature_blocks,
    curvature_fd,
    holomorphic_sectional_curvature,
    mixed_ricci_fd,
    nabla_curvature,
    nabla_curvature_probe,
    pair_symmetry_residual,
    ricci_closed_form,
    ricci_from_blocks,
    second_bianchi_residual,
)
from .einstein import (
    einstein_difference,
    einstein_difference_closed_form,
    einstein_residual,
    euler_ode_residual,
    family_einstein_constant,
    fit_einstein_constant,
    gamma_factor,
)
from .errors import (
    ConfigError,
    GeometryError,
    PositivityError,
    SingularMetricError,
    StencilError,
    ZeroSectionError,
)
from .fd import FDConfig, fd_gradient, fd_partial, fd_second, frame_derivative, frame_gradient
from .mtensor import (
    AdaptedVector,
    BlockBilinear,
    BlockOperator,
    CotangentPoint,
    FiberJets,
    MTensor,
    assemble_metric,
    bundle_metric_fields,
    energy_density,
    fiber_jets,
    frame_bracket,
    horizontal_corrections,
    horizontal_metric,
    vertical_metric,
)
from .profiles import (
    VProfile,
    constant_profile,
    einstein_profile,
    profile_from_name,
    rational_profile,
    v_einstein,
    zero_profile,
)
from .structure import (
    NijenhuisBlocks,
    assemble_complex_structure,
    canonical_coordinate_form,
    complex_structure_squared_residual,
    coordinate_form,
    dform_residual,
    fundamental_form,
    hermitian_residual,
    nijenhuis_closed_form,
    nijenhuis_core,
    nijenhuis_numeric,
)
from .suites import RunConfig, Tolerances, run_suite, run_verification, sample_points

__version__ = "0.1.0"

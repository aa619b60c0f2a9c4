"""Particle paths beneath linear gravity waves on constant-vorticity currents."""

from ._backend import BACKEND, available_backends
from .errors import (
    AsymptoteError,
    BranchAmbiguityError,
    DegenerateCubicError,
    DomainError,
    NoOrbitError,
    NumericalError,
    OutOfValidityWindowError,
    OutputError,
    PeakonValidityError,
    PreconditionError,
    SchemaError,
    StepSizeUnderflowError,
    ValidationError,
    VortexPathsError,
)
from .special_functions import (
    CaseTag,
    EllipticReduction,
    OneReal,
    ThreeReal,
    classify_case,
    elliptic_F,
    elliptic_K,
    jacobi_sn_cn_dn,
    reduce_case1a,
    reduce_case1b_or_case2,
    sextic_coefficients,
    solve_cubic_real,
)
from .stagnation import StagnationKind, StagnationRoot, field_stagnation, find_z_stagnation, stagnation_residual
from .trajectory import (
    Method,
    MethodRequest,
    Trajectory,
    TrajectoryState,
    ZOrbit,
    beta_from_initial,
    closed_form_z_elliptic,
    drift_per_period,
    find_orbit,
    integrate_reference,
    invert_z_quadrature,
    ode_rhs,
    peakon_trajectory,
    reconstruct_x,
    solve,
    turning_points,
    z_period,
    z_rate_squared,
)
from .wave_model import (
    Linearization,
    RootSign,
    VelocityCoefficients,
    WaveParameters,
    coefficients,
    pressure_field,
    surface_elevation,
    velocity_field,
    wave_speed,
    wave_speed_shear,
    wave_speed_still,
)

__version__ = "0.1.0"

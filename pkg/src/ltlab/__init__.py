"""ltlab: desk-scale numerical checks for kinetic-energy inequalities.

The package verifies, constant by constant and step by step, a chain of
lower bounds for the kinetic energy of finite-rank fermionic states:
semiclassical constants, lattice Riesz means and their Berezin-Li-Yau and
Weyl behaviour, local bounds on cubes, stopping-time dyadic partitions with
cube groups, and the assembled Thomas-Fermi-minus-gradient inequality.
"""

from .constants import (
    SemiclassicalConstants,
    eigenvalue_constant,
    eigenvalue_constant_from_kinetic,
    kinetic_constant,
    kinetic_constant_from_eigenvalue,
    unit_ball_volume,
)
from .errors import (
    CubeAlignmentError,
    EnumerationCapError,
    PreconditionError,
    ToleranceError,
)
from .inequalities import (
    CalibrationTable,
    InequalityParams,
    InequalityReport,
    StateFunctionals,
    aggregate_bound,
    calibrate_constant,
    coupled_epsilon,
    default_epsilon_grid,
    holder_pointwise_check,
    local_bound_check,
    lt_ratio,
    main_inequality_check,
    poincare_sobolev_step,
    state_functionals,
)
from .lattice_spectra import (
    Boundary,
    LocalBoundMode,
    LocalBoundResult,
    RieszMeanQuery,
    RieszMeanResult,
    berezin_li_yau_gap,
    binomial_decomposition_check,
    calibrated_local_constant,
    local_kinetic_lower_bound,
    riesz_mean,
    semiclassical_riesz_coefficient,
    weyl_ratio,
)
from .partition import (
    CubeGroup,
    DyadicCube,
    GroupInequalityResult,
    PartitionTree,
    group,
    group_constant,
    group_inequality_check,
    partition_to_json,
    root_cube,
    subdivide,
    write_partition_file,
)
from .states import (
    DensityField,
    OrbitalSet,
    density,
    dilate,
    generate,
    gradient_density,
    gradient_term,
    hoffmann_ostenhof_check,
    kinetic_energy,
    local_gradient_term,
    local_kinetic_energy,
    local_mass,
    local_thomas_fermi_term,
    mixed_corpus,
    read_state_file,
    scale_occupations,
    thomas_fermi_term,
    validate_orthonormal,
    write_state_file,
)

__version__ = "0.1.0"

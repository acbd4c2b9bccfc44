"""Relativistic free-motion arrival-time operator toolkit.

Constructs the one-axis Dirac Hamiltonian and the arrival-time operator in
momentum, position and energy representations on spectral grids, builds
their closed-form eigenspinors and generalized eigenfunctions, and verifies
the algebraic, spectral, limiting and duality identities of the theory.
"""

from .algebra import (
    ALPHA1,
    BETA,
    I2,
    I4,
    METRIC,
    SIGMA1,
    alpha_beta,
    clifford_residual,
    pauli_matrices,
    random_unitary,
    similarity_transform,
    standard_gammas,
)
from .spinors import (
    KinematicPoint,
    PhysParams,
    QuantumNumbers,
    eta,
    phi_momentum,
    u_w_spinors,
    xi_position,
    zeta_limit,
)
from .grids import (
    DiscreteOperator,
    Grid1D,
    GridWaveFunction,
    adjoint,
    diff_matrix,
    inner,
    interior_gaussian_states,
    make_energy_grid,
    make_momentum_grid,
    make_momentum_window,
    make_position_grid,
    spinor_state,
)
from .operators import (
    OperatorSuite,
    build_hamiltonian,
    build_hamiltonian_position,
    build_suite,
    build_toa_energy,
    build_toa_momentum,
    build_toa_momentum_symmetrized,
    build_toa_nonrel,
    build_toa_position,
    commutator_defect,
    energy_image_grid,
    energy_rep_trace_identity,
    kinetic_energy_operator,
    proper_time_nodes,
    symmetrized_defect,
)
from .eigensystem import (
    ToaEigenfunction,
    completeness_check,
    eigen_residual,
    eigfun_by_T,
    eigfun_by_x,
    eigfun_by_xb,
    orthogonality_check,
    truncated_plane_kernel,
    weight_interval,
    weight_momentum,
)
from .selfadjoint import (
    DeficiencyReport,
    boundary_term,
    boundary_term_residual,
    deficiency_indices,
    massless_selfadjoint_check,
    symmetry_defect_energy,
)
from .limits import (
    DualityReport,
    DualityRow,
    EventState,
    LimitSweep,
    dual_equation_report,
    dual_equation_residual,
    duality_table_check,
    default_epsilon_samples,
    event_state,
    nonrel_eigenfunction_limit,
    nonrel_eigenvalue_limit,
)
from .wavepackets import (
    ToaDistribution,
    WavePacket,
    make_gaussian_packet,
    packet_reconstruction_check,
    stationary_phase_peak,
    toa_amplitudes,
)

__version__ = "0.1.0"

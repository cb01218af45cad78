"""Speed of quantum evolution as a measure of asymmetry under time translations.

Asymmetry measures (F_H, Wigner-Yanase skew information, A_min/A_max),
quantum speed limits and their coherence-based generalisations, a
first-crossing solver for the minimum evolution time, and construction and
verification of translationally invariant channels.
"""

from .bounds import bound_report, l1_bound, ml_bound, ml_max_variant, mt_bound, renyi_bound
from .channels import (
    QuantumChannel,
    StinespringDilation,
    apply_channel,
    compose,
    constant_channel,
    dephasing_channel,
    dilation_to_channel,
    harmonic_residual,
    incoherence_residual,
    random_energy_conserving_unitary,
    random_ti_channel,
    unitary_channel,
    verify_incoherent,
    verify_ti,
)
from .config import DEFAULT, Tolerances
from .distinguishability import (
    INFIDELITY,
    PERP,
    RENYI_HALF,
    TRACE,
    Measure,
    infidelity,
    is_perfectly_distinguishable,
    renyi_relative_entropy,
    trace_distance,
)
from .evolution import (
    OrbitSample,
    TauResult,
    evolve,
    instantaneous_acceleration_check,
    instantaneous_speed_check,
    orbit_scan,
    solve_tau,
    speed,
)
from .linalg import commutator, eig_hermitian, matrix_function, trace_norm
from .measures import (
    MeasureReport,
    a_min_max,
    dyson_skew,
    energy_stats,
    f_measure,
    measure_report,
    skew_information,
)
from .states import (
    CompositeLabel,
    DensityMatrix,
    Hamiltonian,
    is_incoherent,
    partial_trace,
    permutation_unitary,
    tensor_hamiltonian,
    tensor_state,
    validate_state,
)

__version__ = "0.1.0"

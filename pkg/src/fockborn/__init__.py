"""fockborn: outcome probabilities from second-quantized phase symmetries.

Observables are modeled as complete rank-1 projector families carrying a
torus of phase unitaries. Lifting those unitaries to a truncated symmetric
Fock space and requiring the trial-averaging functional to be invariant
under the lift pins every outcome probability to the squared overlap with
the prepared state; this package verifies each step of that chain
numerically and simulates the frequency interpretation it formalizes.
"""

from ._version import __version__
from .errors import (
    BadDistribution,
    DegenerateSpectrum,
    DimMismatch,
    FockBornError,
    NotNormalized,
    NotProjector,
    NotSelfAdjoint,
    NotUnitary,
    ParseError,
    ValidationError,
    WindowTooLarge,
    ZeroDenominator,
    ZeroWeight,
)
from .linalg import (
    DEFAULT_TOL,
    ProjectorFamily,
    adjoint,
    commutator_norm,
    is_selfadjoint,
    is_unitary,
    max_abs,
    random_selfadjoint,
    random_unitary,
    spectral_projectors,
    trace_product,
)
from .representation import (
    ObservableSpec,
    TorusRepresentation,
    canonical_representation,
    direction_for_values,
    evaluate,
    generator,
    intertwiner,
    observable_from_selfadjoint,
    outcome_kets,
    permute_angles,
    projector_commutator_norm,
    quantum_equivalent,
    representative_ket,
)
from .fock import (
    FockSpace,
    FockVector,
    SectoredOperator,
    apply,
    dgamma,
    embed_sector,
    enumerate_basis,
    expectation,
    fock_inner,
    gamma,
    number_operator,
    symmetric_power_state,
)
from .verifier import (
    AxiomsReport,
    ConjugationDecomposition,
    InvariantAverage,
    born_probability,
    check_pue,
    conjugate_number_operator,
    cross_term_averages,
    probability_axioms_report,
)
from .ensemble import (
    FrequencyTrace,
    OutcomeSequence,
    cauchy_diagnostic,
    compare_to_born,
    export_traces_csv,
    frequency_trace,
    outcome_block,
    permutation_invariance_check,
    sample_outcomes,
)
from .scenario import Scenario, bundled_scenarios, load_scenario, scenario_from_dict
from .report import (
    Report,
    ReportRecord,
    run_all,
    run_equivalence,
    run_simulate,
    run_verify,
)

__all__ = [name for name in dir() if not name.startswith("_")]

"""Numeric verification of the Born-rule derivation chain.

The chain, at desk scale: fix a preparation observable Psi with a selected
outcome ket psi, lift everything to the truncated symmetric Fock space, and
average counting operators with the matrix-element quotient

    <X>  =  <psi^M| X |psi^M>  /  <psi^M| N_psi |psi^M>,

where psi^M is the M-fold symmetric power of psi and N_psi counts particles
in the psi mode. This functional is linear, normalized so <N_psi> = 1, and
invariant under conjugation by the lifted phase unitaries of Psi. Conjugating
a counting operator N_a by such a lift splits it into a phase-free diagonal
part (overlap-squared weights on the reference counting operators) plus
phase-carrying cross terms whose averages vanish identically; what survives
is <N_a> = |<a|psi>|^2 = Tr(p_a p_psi), checked here to tolerance rather
than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DimMismatch, ZeroDenominator
from .fock import (
    FockSpace,
    SectoredOperator,
    dgamma,
    embed_sector,
    expectation,
    gamma,
    number_operator,
    symmetric_power_state,
)
from .linalg import trace_product
from .representation import (
    ObservableSpec,
    TorusRepresentation,
    evaluate,
    representative_ket,
)


class InvariantAverage:
    """The averaging functional attached to a reference outcome.

    Parameters
    ----------
    reference : ObservableSpec
        The preparation observable Psi.
    initial_index : int
        Which outcome of Psi the ensemble is prepared in.
    particle_count : int
        Ensemble size M, between 1 and the space cutoff.
    space : FockSpace
        Truncated Fock space all operators must live on.
    """

    def __init__(
        self,
        reference: ObservableSpec,
        initial_index: int,
        particle_count: int,
        space: FockSpace,
    ):
        if reference.dim != space.dim:
            raise DimMismatch("reference observable does not fit the Fock space")
        if not 0 <= initial_index < len(reference.family):
            raise ValueError(f"initial_index {initial_index} out of range")
        if not 1 <= particle_count <= space.cutoff:
            raise ValueError(
                f"particle_count must lie in 1..{space.cutoff}, got {particle_count}"
            )
        self.reference = reference
        self.initial_index = int(initial_index)
        self.particle_count = int(particle_count)
        self.space = space
        self.reference_ket = representative_ket(reference.projector(initial_index))
        self.state = embed_sector(
            space,
            self.particle_count,
            symmetric_power_state(self.reference_ket, self.particle_count),
        )
        self.reference_number_op = number_operator(
            reference.projector(initial_index), space
        )
        denominator = expectation(self.reference_number_op, self.state)
        # Analytically M * <psi|p_psi|psi> = M >= 1; anything near zero means
        # the reference data is corrupt.
        if abs(denominator) < 1e-12:
            raise ZeroDenominator("normalizing matrix element vanished")
        self.denominator = denominator

    def average(self, x: SectoredOperator) -> complex:
        """Quotient of matrix elements against the reference power state."""
        if not self.space.compatible(x.space):
            raise DimMismatch("operator lives on a different Fock space")
        return expectation(x, self.state) / self.denominator

    def __repr__(self) -> str:
        return (
            f"InvariantAverage(outcome={self.reference.labels[self.initial_index]!r}, "
            f"particles={self.particle_count})"
        )


@dataclass(frozen=True)
class ConjugationDecomposition:
    """Analytic split of a conjugated counting operator.

    ``diagonal_coeffs[k]`` weights the k-th reference counting operator with
    the overlap probability |<a|psi_k>|^2; ``cross_terms`` holds the lifted
    products ``dgamma(p_m p_a p_k)`` for *ordered* pairs m != k, each paired
    with the phase factor ``exp(i (theta_k - theta_m))`` evaluated at the
    group element used for the conjugation.
    """

    diagonal_coeffs: np.ndarray
    reference_number_ops: tuple[SectoredOperator, ...]
    cross_terms: tuple[tuple[int, int, SectoredOperator], ...]
    phase_factors: np.ndarray = field(repr=False)

    def __post_init__(self):
        coeffs = np.asarray(self.diagonal_coeffs, dtype=float)
        if coeffs.min(initial=0.0) < -1e-10 or coeffs.max(initial=0.0) > 1 + 1e-10:
            raise ValueError("diagonal coefficients must lie in [0, 1]")
        if abs(coeffs.sum() - 1.0) > 1e-10:
            raise ValueError("diagonal coefficients must sum to 1")
        if len(self.phase_factors) != len(self.cross_terms):
            raise DimMismatch("need one phase factor per cross term")

    def reassemble(self) -> SectoredOperator:
        """Diagonal part plus phase-weighted cross terms."""
        out = SectoredOperator.zero(self.reference_number_ops[0].space)
        for coeff, op in zip(self.diagonal_coeffs, self.reference_number_ops):
            out = out + float(coeff) * op
        for phase, (_, _, op) in zip(self.phase_factors, self.cross_terms):
            out = out + complex(phase) * op
        return out


@lru_cache(maxsize=32)
def _conjugation_parts(rep_psi, obs_a, outcome: int, space):
    """Group-element-independent pieces of the conjugation decomposition.

    Cached by object identity; all inputs are immutable after construction,
    so identity is a safe cache key.
    """
    p_a = obs_a.projector(outcome)
    n = len(rep_psi.family)
    coeffs = np.array(
        [trace_product(rep_psi.family[k], p_a).real for k in range(n)]
    )
    ref_ops = tuple(number_operator(rep_psi.family[k], space) for k in range(n))
    cross = tuple(
        (m, k, dgamma(rep_psi.family[m] @ p_a @ rep_psi.family[k], space))
        for m in range(n)
        for k in range(n)
        if m != k
    )
    return coeffs, ref_ops, cross


def conjugate_number_operator(
    rep_psi: TorusRepresentation,
    angles,
    obs_a: ObservableSpec,
    outcome: int,
    space: FockSpace,
) -> tuple[SectoredOperator, ConjugationDecomposition]:
    """Conjugate the counting operator of an outcome by a lifted phase unitary.

    Returns the directly computed ``gamma(U)† N_a gamma(U)`` together with
    its analytic decomposition; reassembling the decomposition reproduces
    the direct computation within rounding.
    """
    if rep_psi.dim != obs_a.dim or rep_psi.dim != space.dim:
        raise DimMismatch("representation, observable and space dims differ")
    angles = np.asarray(angles, dtype=float)
    u = evaluate(rep_psi, angles)
    lifted = gamma(u, space)
    n_a = number_operator(obs_a.projector(outcome), space)
    conjugated = lifted.dagger() @ n_a @ lifted

    coeffs, ref_ops, cross = _conjugation_parts(rep_psi, obs_a, int(outcome), space)
    homomorphism_angles = rep_psi.weights * angles
    phases = np.array(
        [
            np.exp(1j * (homomorphism_angles[k] - homomorphism_angles[m]))
            for (m, k, _) in cross
        ],
        dtype=complex,
    )
    decomposition = ConjugationDecomposition(
        diagonal_coeffs=coeffs,
        reference_number_ops=ref_ops,
        cross_terms=cross,
        phase_factors=phases,
    )
    return conjugated, decomposition


def check_pue(
    avg: InvariantAverage,
    rep_psi: TorusRepresentation,
    x: SectoredOperator,
    samples: int = 100,
    seed=0,
) -> float:
    """Largest drift of the average under sampled conjugations.

    Samples torus points uniformly, conjugates ``x`` by the corresponding
    lifted unitaries and returns ``max |<conjugated x> - <x>|``. For the
    functional to qualify as unitarily invariant this must vanish to
    rounding for every operator.
    """
    rng = np.random.default_rng(seed)
    base = avg.average(x)
    worst = 0.0
    for _ in range(samples):
        angles = rng.uniform(0.0, 2.0 * np.pi, size=len(rep_psi))
        lifted = gamma(evaluate(rep_psi, angles), avg.space)
        value = avg.average(lifted.dagger() @ x @ lifted)
        worst = max(worst, abs(value - base))
    return worst


def cross_term_averages(
    avg: InvariantAverage, decomposition: ConjugationDecomposition
) -> np.ndarray:
    """Averages of all cross terms; each must vanish (magnitude <= 1e-12)."""
    return np.array(
        [avg.average(op) for (_, _, op) in decomposition.cross_terms], dtype=complex
    )


def born_probability(avg: InvariantAverage, obs_a: ObservableSpec, outcome: int) -> float:
    """Probability of an outcome as the average of its counting operator.

    Agrees with the squared overlap |<a|psi>|^2 and with
    ``trace_product(p_a, p_psi)`` within 1e-10.
    """
    if obs_a.dim != avg.space.dim:
        raise DimMismatch("observable does not fit the Fock space")
    n_a = number_operator(obs_a.projector(outcome), avg.space)
    return avg.average(n_a).real


@dataclass(frozen=True)
class AxiomCheck:
    name: str
    measured: float
    threshold: float
    passed: bool


@dataclass(frozen=True)
class AxiomsReport:
    """Outcome of the three probability-axiom checks."""

    checks: tuple[AxiomCheck, ...]

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> AxiomCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def probability_axioms_report(avg: InvariantAverage, obs_a: ObservableSpec) -> AxiomsReport:
    """Check completeness, nonnegativity and the reference delta row.

    * completeness: the outcome probabilities of ``obs_a`` sum to 1
      (within 1e-10);
    * nonnegativity: every probability is >= -1e-12;
    * delta row: averaging the reference observable's own counting
      operators yields the Kronecker delta at the prepared outcome
      (within 1e-10).
    """
    probs = np.array(
        [born_probability(avg, obs_a, n) for n in range(len(obs_a.family))]
    )
    completeness = abs(probs.sum() - 1.0)
    negativity = float(probs.min())
    delta_dev = 0.0
    for k in range(len(avg.reference.family)):
        value = born_probability(avg, avg.reference, k)
        target = 1.0 if k == avg.initial_index else 0.0
        delta_dev = max(delta_dev, abs(value - target))
    checks = (
        AxiomCheck("completeness", completeness, 1e-10, completeness <= 1e-10),
        AxiomCheck("nonnegativity", negativity, -1e-12, negativity >= -1e-12),
        AxiomCheck("reference-delta", delta_dev, 1e-10, delta_dev <= 1e-10),
    )
    return AxiomsReport(checks)

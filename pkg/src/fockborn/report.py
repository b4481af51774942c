"""Check runners and machine-readable reports.

Each runner executes a family of named checks against a scenario and returns
a :class:`Report`. A check failure (or an exception inside a check) becomes a
failed record, never a crash; the CLI exit code is 0 iff every record passed.

Reports serialize to JSON deterministically: given the same scenario and
seed, reruns produce byte-identical output. For that reason the JSON carries
no wall-clock data; timestamps only appear on the human-readable stderr
table.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from ._version import __version__
from .ensemble import (
    cauchy_diagnostic,
    compare_to_born,
    export_traces_csv,
    frequency_trace,
    sample_outcomes,
)
from .fock import FockSpace, gamma, dgamma, number_operator
from .linalg import (
    adjoint,
    commutator_norm,
    max_abs,
    random_selfadjoint,
    random_unitary,
    trace_product,
)
from .representation import (
    canonical_representation,
    intertwiner,
    outcome_kets,
    projector_commutator_norm,
)
from .scenario import Scenario
from .verifier import (
    InvariantAverage,
    born_probability,
    check_pue,
    conjugate_number_operator,
    cross_term_averages,
    probability_axioms_report,
)

DEFAULT_SEED = 0

# Spot-check sample counts used by the runners.
REASSEMBLY_SAMPLES = 20
PUE_SAMPLES = 100
TAIL_WINDOW = 1_000
TAIL_THRESHOLD = 0.01


@dataclass(frozen=True)
class ReportRecord:
    check_name: str
    anchor: str
    measured_value: float | None
    threshold: float | None
    passed: bool
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "check_name": self.check_name,
            "anchor": self.anchor,
            "measured_value": self.measured_value,
            "threshold": self.threshold,
            "pass": self.passed,
            "detail": self.detail,
        }


@dataclass
class Report:
    command: str
    scenario_path: str
    seed: int
    records: list[ReportRecord] = field(default_factory=list)

    @property
    def overall_pass(self) -> bool:
        return all(r.passed for r in self.records)

    def extend(self, other: "Report") -> None:
        self.records.extend(other.records)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "scenario": self.scenario_path,
            "records": [r.to_dict() for r in self.records],
            "overall_pass": self.overall_pass,
            "provenance": {"seed": self.seed, "version": __version__},
        }


def _record_error(name: str, anchor: str, exc: Exception) -> ReportRecord:
    return ReportRecord(
        check_name=name,
        anchor=anchor,
        measured_value=None,
        threshold=None,
        passed=False,
        detail=f"{type(exc).__name__}: {exc}",
    )


def _guarded(records: list, name: str, anchor: str, fn) -> None:
    """Run one check; convert exceptions into failing records."""
    try:
        records.append(fn())
    except Exception as exc:  # noqa: BLE001 - contract: failures become records
        records.append(_record_error(name, anchor, exc))


def _bound_record(name, anchor, measured, threshold, detail="") -> ReportRecord:
    return ReportRecord(
        check_name=name,
        anchor=anchor,
        measured_value=float(measured),
        threshold=float(threshold),
        passed=bool(measured <= threshold),
        detail=detail,
    )


def resolve_seed(scenario: Scenario, override: int | None, env_seed: int | None) -> int:
    """Seed priority: CLI flag, scenario file, environment, fixed default.

    Seeds are taken modulo 2**64 (the generator key width).
    """
    for candidate in (override, scenario.seed, env_seed):
        if candidate is not None:
            return int(candidate) % 2**64
    return DEFAULT_SEED


def _build(scenario: Scenario, particle_count: int | None = None):
    space = FockSpace(scenario.dim, scenario.fock_cutoff)
    m = scenario.fock_cutoff if particle_count is None else particle_count
    avg = InvariantAverage(scenario.observable_psi, scenario.initial_index, m, space)
    return space, avg


def run_verify(scenario: Scenario, seed: int, tolerance_scale: float = 1.0) -> Report:
    """Run the derivation-chain checks and return one record per check."""
    tol = scenario.tolerances.structural * tolerance_scale
    cross_tol = scenario.tolerances.cross_term * tolerance_scale
    report = Report(command="verify", scenario_path="", seed=seed)
    records = report.records
    space = FockSpace(scenario.dim, scenario.fock_cutoff)
    obs_a = scenario.observable_a
    obs_psi = scenario.observable_psi
    rep_psi = canonical_representation(obs_psi)
    k0 = scenario.initial_index

    def born_agreement() -> ReportRecord:
        worst = 0.0
        p_psi = obs_psi.projector(k0)
        kets_a = outcome_kets(obs_a)
        for m in range(1, scenario.fock_cutoff + 1):
            avg = InvariantAverage(obs_psi, k0, m, space)
            for n in range(scenario.dim):
                from_average = born_probability(avg, obs_a, n)
                from_trace = trace_product(obs_a.projector(n), p_psi).real
                overlap = abs(np.vdot(kets_a[:, n], avg.reference_ket)) ** 2
                worst = max(
                    worst,
                    abs(from_average - overlap),
                    abs(from_average - from_trace),
                    abs(overlap - from_trace),
                )
        return _bound_record(
            "born/three-way-agreement",
            "probability equals squared overlap and projector trace, all ensemble sizes",
            worst,
            tol,
        )

    _guarded(records, "born/three-way-agreement", "", born_agreement)

    def axioms() -> list[ReportRecord]:
        avg = InvariantAverage(obs_psi, k0, scenario.fock_cutoff, space)
        axioms_report = probability_axioms_report(avg, obs_a)
        out = []
        for check in axioms_report.checks:
            if check.name == "nonnegativity":
                out.append(
                    ReportRecord(
                        check_name="axioms/nonnegativity",
                        anchor="every outcome probability is nonnegative",
                        measured_value=check.measured,
                        threshold=check.threshold,
                        passed=check.passed,
                        detail="measured minimum probability",
                    )
                )
            else:
                out.append(
                    _bound_record(
                        f"axioms/{check.name}",
                        "probabilities sum to one"
                        if check.name == "completeness"
                        else "preparing an outcome makes its own probability a Kronecker delta",
                        check.measured,
                        check.threshold * tolerance_scale,
                    )
                )
        return out

    try:
        records.extend(axioms())
    except Exception as exc:  # noqa: BLE001
        records.append(_record_error("axioms", "probability axioms", exc))

    def cross_terms() -> ReportRecord:
        avg = InvariantAverage(obs_psi, k0, scenario.fock_cutoff, space)
        worst = 0.0
        for n in range(scenario.dim):
            _, decomposition = conjugate_number_operator(
                rep_psi, np.zeros(scenario.dim), obs_a, n, space
            )
            values = cross_term_averages(avg, decomposition)
            if values.size:
                worst = max(worst, float(np.abs(values).max()))
        return _bound_record(
            "conjugation/cross-term-averages",
            "averaged phase-carrying cross terms vanish",
            worst,
            cross_tol,
        )

    _guarded(records, "conjugation/cross-term-averages", "", cross_terms)

    def reassembly() -> ReportRecord:
        rng = np.random.default_rng([seed, 1])
        worst = 0.0
        for _ in range(REASSEMBLY_SAMPLES):
            angles = rng.uniform(0.0, 2.0 * np.pi, size=scenario.dim)
            for n in range(scenario.dim):
                direct, decomposition = conjugate_number_operator(
                    rep_psi, angles, obs_a, n, space
                )
                worst = max(worst, (direct - decomposition.reassemble()).max_norm())
        return _bound_record(
            "conjugation/reassembly",
            "diagonal plus phase-weighted cross terms equals the conjugated counter",
            worst,
            tol,
        )

    _guarded(records, "conjugation/reassembly", "", reassembly)

    def pue() -> ReportRecord:
        avg = InvariantAverage(obs_psi, k0, scenario.fock_cutoff, space)
        worst = 0.0
        for n in range(scenario.dim):
            n_a = number_operator(obs_a.projector(n), space)
            worst = max(
                worst,
                check_pue(avg, rep_psi, n_a, samples=PUE_SAMPLES, seed=[seed, 2, n]),
            )
        return _bound_record(
            "pue/counting-invariance",
            "average of every counting operator is invariant under lifted phase unitaries",
            worst,
            tol,
        )

    _guarded(records, "pue/counting-invariance", "", pue)

    def functoriality() -> ReportRecord:
        rng = np.random.default_rng([seed, 3])
        worst = 0.0
        for _ in range(5):
            o1 = rng.standard_normal((scenario.dim, scenario.dim)) + 1j * rng.standard_normal(
                (scenario.dim, scenario.dim)
            )
            o2 = rng.standard_normal((scenario.dim, scenario.dim)) + 1j * rng.standard_normal(
                (scenario.dim, scenario.dim)
            )
            worst = max(
                worst, ((gamma(o1, space) @ gamma(o2, space)) - gamma(o1 @ o2, space)).max_norm()
            )
        return _bound_record(
            "second-quantization/functoriality",
            "the multiplicative lift is multiplicative",
            worst,
            tol,
        )

    _guarded(records, "second-quantization/functoriality", "", functoriality)

    def lifted_unitarity() -> ReportRecord:
        rng = np.random.default_rng([seed, 4])
        worst = 0.0
        for _ in range(5):
            u = random_unitary(scenario.dim, rng)
            lifted = gamma(u, space)
            defect = max(
                max_abs(adjoint(b) @ b - np.eye(b.shape[0])) for b in lifted.blocks
            )
            worst = max(worst, defect)
        return _bound_record(
            "second-quantization/unitarity",
            "the multiplicative lift of a unitary is blockwise unitary",
            worst,
            tol,
        )

    _guarded(records, "second-quantization/unitarity", "", lifted_unitarity)

    def derivation() -> ReportRecord:
        rng = np.random.default_rng([seed, 5])
        h_op = random_selfadjoint(scenario.dim, rng)
        eigvals, eigvecs = np.linalg.eigh(h_op)

        def grp(t: float) -> np.ndarray:
            return (eigvecs * np.exp(1j * t * eigvals)) @ adjoint(eigvecs)

        target = 1j * dgamma(h_op, space)
        errors = []
        for h in (1e-3, 1e-4):
            diff = (1.0 / (2.0 * h)) * (gamma(grp(h), space) - gamma(grp(-h), space))
            errors.append((diff - target).max_norm())
        ratio = errors[0] / errors[1]
        return ReportRecord(
            check_name="second-quantization/derivation",
            anchor="central difference of the lifted one-parameter group matches the derivation lift at second order",
            measured_value=float(ratio),
            threshold=200.0,
            passed=bool(50.0 <= ratio <= 200.0),
            detail=f"step errors {errors[0]:.3e}, {errors[1]:.3e}; ratio target 100 in [50, 200]",
        )

    _guarded(records, "second-quantization/derivation", "", derivation)

    return report


def run_equivalence(scenario: Scenario, seed: int, tolerance_scale: float = 1.0) -> Report:
    """Commutation verdict, intertwiner contracts, and the probability
    mismatch witness for non-commuting pairs."""
    tol = scenario.tolerances.structural * tolerance_scale
    report = Report(command="equivalence", scenario_path="", seed=seed)
    records = report.records
    obs_a = scenario.observable_a
    obs_psi = scenario.observable_psi

    equivalent = None

    def verdict() -> ReportRecord:
        nonlocal equivalent
        norm = projector_commutator_norm(obs_a, obs_psi)
        equivalent = norm <= tol
        values_distinct = (
            np.diff(np.sort(obs_a.values)).min(initial=np.inf) > tol
            and np.diff(np.sort(obs_psi.values)).min(initial=np.inf) > tol
        )
        if values_distinct:
            op_norm = commutator_norm(obs_a.selfadjoint(), obs_psi.selfadjoint())
            scale = max(
                1.0,
                float(np.abs(obs_a.values).max() * np.abs(obs_psi.values).max()),
            )
            agree = (op_norm <= tol * scale) == equivalent
            detail = (
                f"{'equivalent' if equivalent else 'not equivalent'}; "
                f"self-adjoint commutator norm {op_norm:.3e} agrees"
            )
        else:
            agree = True
            detail = (
                f"{'equivalent' if equivalent else 'not equivalent'}; "
                "repeated outcome values, operator cross-check skipped"
            )
        return ReportRecord(
            check_name="equivalence/commutation",
            anchor="identity intertwines the representations iff the projector families commute",
            measured_value=float(norm),
            threshold=float(tol),
            passed=bool(agree),
            detail=detail,
        )

    _guarded(records, "equivalence/commutation", "", verdict)

    rng = np.random.default_rng([seed, 6])
    perm = rng.permutation(scenario.dim)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=scenario.dim)

    def unitarity() -> ReportRecord:
        t = intertwiner(obs_a, obs_psi, perm, phases)
        defect = max_abs(adjoint(t) @ t - np.eye(scenario.dim))
        return _bound_record(
            "intertwiner/unitarity",
            "every outcome-permuting intertwiner is unitary",
            defect,
            tol,
        )

    _guarded(records, "intertwiner/unitarity", "", unitarity)

    def outcome_mapping() -> ReportRecord:
        t = intertwiner(obs_a, obs_psi, perm, phases)
        kets_a = outcome_kets(obs_a)
        kets_b = outcome_kets(obs_psi)
        worst = 0.0
        for n in range(scenario.dim):
            image = t @ kets_a[:, n]
            for m in range(scenario.dim):
                overlap = abs(np.vdot(kets_b[:, m], image)) ** 2
                target = 1.0 if m == perm[n] else 0.0
                worst = max(worst, abs(overlap - target))
        return _bound_record(
            "intertwiner/outcome-mapping",
            "intertwiners map outcomes onto outcomes with unit transition probability",
            worst,
            tol,
        )

    _guarded(records, "intertwiner/outcome-mapping", "", outcome_mapping)

    if equivalent is False:

        def witness() -> ReportRecord:
            kets_a = outcome_kets(obs_a)
            kets_b = outcome_kets(obs_psi)
            worst = 0.0
            pair = (0, 0)
            for n in range(scenario.dim):
                for m in range(scenario.dim):
                    direct = abs(np.vdot(kets_b[:, m], kets_a[:, n])) ** 2
                    target = 1.0 if m == perm[n] else 0.0
                    if abs(direct - target) > worst:
                        worst = abs(direct - target)
                        pair = (m, n)
            return ReportRecord(
                check_name="intertwiner/probability-witness",
                anchor="intertwiners change outcome probabilities when the families do not commute",
                measured_value=float(worst),
                threshold=float(tol),
                passed=bool(worst > tol),
                detail=f"witness pair (m={pair[0]}, n={pair[1]})",
            )

        _guarded(records, "intertwiner/probability-witness", "", witness)

    return report


def run_simulate(scenario: Scenario, seed: int, tolerance_scale: float = 1.0):
    """Sample trial outcomes from the derived probabilities and test the
    frequency bridge. Returns ``(report, traces_csv_text)``.

    A failure anywhere (corrupt observables, undistributable probabilities)
    becomes a failed record; the CSV then contains only its header.
    """
    report = Report(command="simulate", scenario_path="", seed=seed)
    records = report.records
    csv_text = "n,outcome_label,count,frequency\n"
    try:
        _, avg = _build(scenario)
        obs_a = scenario.observable_a
        probs = np.array(
            [born_probability(avg, obs_a, n) for n in range(scenario.dim)]
        )
        probs = np.clip(probs, 0.0, None)

        total_dev = abs(probs.sum() - 1.0)
        records.append(
            _bound_record(
                "simulate/distribution-total",
                "derived outcome probabilities form a distribution",
                total_dev,
                scenario.tolerances.structural * tolerance_scale,
            )
        )

        seq = sample_outcomes(probs, scenario.trials, seed)
        sigma_scale = scenario.tolerances.statistical_sigma / 3.0
        window = min(TAIL_WINDOW, scenario.trials)
        for n, label in enumerate(obs_a.labels):
            trace = frequency_trace(seq, n)
            deviation, _ = compare_to_born(trace, float(probs[n]))
            bound = (
                scenario.tolerances.statistical_sigma
                * np.sqrt(probs[n] * (1.0 - probs[n]) / scenario.trials)
                + 1.0 / scenario.trials
            ) * tolerance_scale
            records.append(
                ReportRecord(
                    check_name=f"simulate/born-frequency/{label}",
                    anchor="final relative frequency approaches the derived probability",
                    measured_value=float(deviation),
                    threshold=float(bound),
                    passed=bool(deviation <= bound),
                    detail=f"p={probs[n]!r}, trials={scenario.trials}",
                )
            )
            oscillation = cauchy_diagnostic(trace, window)
            records.append(
                _bound_record(
                    f"simulate/tail-oscillation/{label}",
                    "frequency traces settle: tail oscillation stays small",
                    oscillation,
                    TAIL_THRESHOLD * max(sigma_scale, 1.0) * tolerance_scale,
                    detail=f"window={window}",
                )
            )

        buffer = io.StringIO()
        export_traces_csv(seq, obs_a.labels, buffer)
        csv_text = buffer.getvalue()
    except Exception as exc:  # noqa: BLE001 - contract: failures become records
        records.append(
            _record_error(
                "simulate/run", "sampling from the derived distribution", exc
            )
        )
    return report, csv_text


def run_all(scenario: Scenario, seed: int, tolerance_scale: float = 1.0):
    """verify + equivalence + simulate, merged into a single report."""
    report = run_verify(scenario, seed, tolerance_scale)
    report.command = "all"
    report.extend(run_equivalence(scenario, seed, tolerance_scale))
    simulate_report, csv_text = run_simulate(scenario, seed, tolerance_scale)
    report.extend(simulate_report)
    return report, csv_text

"""Monte Carlo realization of the frequency interpretation of probability.

Outcome sequences are i.i.d. categorical draws; running relative frequencies
are kept as exact integer counts (division deferred to output), so partition
identities hold exactly at every prefix length.

Randomness contract
-------------------
Draws come from the counter-based Philox generator keyed directly by the
64-bit seed: trial i consumes the i-th 64-bit word of the keyed stream, so
any index range can be generated independently (and in parallel) with
bit-identical results. ``outcome_block`` exposes exactly that contract;
``sample_outcomes`` is the full-range special case.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import BadDistribution, WindowTooLarge

_PHILOX_WORDS_PER_BLOCK = 4  # Philox-4x64 emits 4 words per counter value


def _uniform_words(seed: int, start: int, count: int) -> np.ndarray:
    """Uniform [0, 1) doubles for trial indices start..start+count-1."""
    block, offset = divmod(start, _PHILOX_WORDS_PER_BLOCK)
    bit_gen = np.random.Philox(key=seed, counter=block)
    raw = np.asarray(bit_gen.random_raw(offset + count), dtype=np.uint64)[offset:]
    return (raw >> np.uint64(11)) * float(2**-53)


def _check_distribution(probabilities) -> np.ndarray:
    p = np.asarray(probabilities, dtype=float)
    if p.ndim != 1 or p.size < 1:
        raise BadDistribution("probabilities must be a nonempty flat sequence")
    if not np.isfinite(p).all() or p.min() < 0.0:
        raise BadDistribution("probabilities must be finite and nonnegative")
    if abs(p.sum() - 1.0) > 1e-10:
        raise BadDistribution(f"probabilities sum to {p.sum()!r}, not 1")
    return p


def outcome_block(probabilities, seed: int, start: int, count: int) -> np.ndarray:
    """Categorical draws for trial indices ``start .. start+count-1``.

    Deterministic in (probabilities, seed, index); concatenating adjacent
    blocks reproduces a single contiguous generation bit for bit.
    """
    p = _check_distribution(probabilities)
    edges = np.cumsum(p)
    edges[-1] = 1.0  # guard against rounding in the last edge
    u = _uniform_words(int(seed), int(start), int(count))
    return np.searchsorted(edges, u, side="right").astype(np.int64)


@dataclass(frozen=True)
class OutcomeSequence:
    """An i.i.d. outcome record reproducible from its seed."""

    outcomes: np.ndarray
    seed: int

    @property
    def length(self) -> int:
        return int(self.outcomes.size)


def sample_outcomes(probabilities, trials: int, seed: int) -> OutcomeSequence:
    """Draw ``trials`` i.i.d. outcomes from a categorical distribution."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    outcomes = outcome_block(probabilities, seed, 0, trials)
    outcomes.flags.writeable = False
    return OutcomeSequence(outcomes=outcomes, seed=int(seed))


@dataclass(frozen=True)
class FrequencyTrace:
    """Running occurrence counts of one outcome index.

    ``counts[n-1]`` is the number of occurrences among the first n trials;
    frequencies are formed on demand so every stored quantity is an exact
    integer.
    """

    outcome: int
    counts: np.ndarray

    @property
    def length(self) -> int:
        return int(self.counts.size)

    @property
    def values(self) -> np.ndarray:
        """Relative frequencies at every prefix length."""
        return self.counts / np.arange(1, self.counts.size + 1)

    @property
    def final(self) -> float:
        return float(self.counts[-1]) / self.counts.size


def frequency_trace(seq: OutcomeSequence, outcome: int) -> FrequencyTrace:
    """Running relative-frequency trace of one outcome."""
    if outcome < 0:
        raise ValueError("outcome index must be nonnegative")
    counts = np.cumsum(seq.outcomes == outcome).astype(np.int64)
    counts.flags.writeable = False
    return FrequencyTrace(outcome=int(outcome), counts=counts)


def cauchy_diagnostic(trace: FrequencyTrace, window: int) -> float:
    """Tail oscillation of the trace: max |v_n - v_m| over n, m >= N - window."""
    n = trace.length
    if window > n:
        raise WindowTooLarge(f"window {window} exceeds trace length {n}")
    if window < 0:
        raise ValueError("window must be >= 0")
    tail = trace.values[max(n - window, 1) - 1 :]
    return float(tail.max() - tail.min())


def permutation_invariance_check(seq: OutcomeSequence, perm_seed: int) -> bool:
    """Final frequencies are unchanged by shuffling the outcome order.

    Exact integer comparison of final counts between the sequence and a
    random permutation of it, for every outcome index present.
    """
    rng = np.random.default_rng(perm_seed)
    shuffled = rng.permutation(seq.outcomes)
    top = int(seq.outcomes.max(initial=0))
    return all(
        int((seq.outcomes == a).sum()) == int((shuffled == a).sum())
        for a in range(top + 1)
    )


def compare_to_born(trace: FrequencyTrace, p_born: float) -> tuple[float, bool]:
    """Deviation of the final frequency from a target probability.

    Returns ``(deviation, within_bound)`` with the acceptance bound
    ``3 * sqrt(p(1-p)/N) + 1/N``.
    """
    if trace.length < 1:
        raise ValueError("trace is empty")
    n = trace.length
    deviation = abs(trace.final - p_born)
    bound = 3.0 * np.sqrt(p_born * (1.0 - p_born) / n) + 1.0 / n
    return float(deviation), bool(deviation <= bound)


def export_traces_csv(seq: OutcomeSequence, labels, fileobj) -> None:
    """Write running traces for all outcomes as CSV.

    Columns: n, outcome_label, count, frequency. Rows are grouped by outcome
    label, each group ordered by prefix length n.
    """
    writer = csv.writer(fileobj, lineterminator="\n")
    writer.writerow(["n", "outcome_label", "count", "frequency"])
    for index, label in enumerate(labels):
        trace = frequency_trace(seq, index)
        for n, count in enumerate(trace.counts, start=1):
            writer.writerow([n, label, int(count), repr(int(count) / n)])

"""Observables as unitary torus representations.

An observable with N non-degenerate outcomes is carried by a complete family
of N rank-1 projectors plus outcome labels and values. The associated phase
symmetries form a representation of the N-torus,

    U(angles) = sum_n exp(i k_n angles_n) P_n,

with nonzero integer weights ``k_n``. Differentiating along a path through
the identity recovers the self-adjoint operator picture, and intertwiners
between two such representations encode basis permutations with free phases.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    DegenerateSpectrum,
    DimMismatch,
    NotSelfAdjoint,
    ZeroWeight,
)
from .linalg import (
    DEFAULT_TOL,
    ProjectorFamily,
    as_operator,
    max_abs,
)


class ObservableSpec:
    """Outcome labels and real values attached to a complete rank-1 family.

    ``labels`` must be distinct, ``values`` finite reals, one per projector.
    """

    def __init__(self, labels, values, family: ProjectorFamily):
        labels = tuple(str(label) for label in labels)
        values = np.asarray(values, dtype=float)
        if values.ndim != 1:
            raise DimMismatch("values must be a flat sequence of reals")
        if not (len(labels) == values.size == len(family)):
            raise DimMismatch(
                f"got {len(labels)} labels, {values.size} values, "
                f"{len(family)} projectors"
            )
        if len(set(labels)) != len(labels):
            raise ValueError("outcome labels must be distinct")
        if not np.isfinite(values).all():
            raise ValueError("outcome values must be finite")
        self.labels = labels
        self.values = values
        self.family = family

    @property
    def dim(self) -> int:
        return self.family.dim

    def projector(self, n: int) -> np.ndarray:
        return self.family[n]

    def index_of(self, label: str) -> int:
        return self.labels.index(label)

    def selfadjoint(self) -> np.ndarray:
        """The operator carrying value ``values[n]`` on the n-th outcome."""
        return sum(v * p for v, p in zip(self.values, self.family))

    def __repr__(self) -> str:
        return f"ObservableSpec(labels={self.labels!r}, dim={self.dim})"


class TorusRepresentation:
    """Integer weights plus a projector family realizing U(angles)."""

    def __init__(self, weights, family: ProjectorFamily):
        weights = np.asarray(weights)
        if weights.ndim != 1 or weights.size != len(family):
            raise DimMismatch("need one weight per projector")
        if not np.all(weights == np.round(weights)):
            raise ValueError("weights must be integers")
        weights = weights.astype(int)
        if np.any(weights == 0):
            raise ZeroWeight("torus weights must be nonzero")
        self.weights = weights
        self.family = family

    @property
    def dim(self) -> int:
        return self.family.dim

    def __len__(self) -> int:
        return len(self.family)

    def __repr__(self) -> str:
        return f"TorusRepresentation(weights={self.weights.tolist()})"


def evaluate(rep: TorusRepresentation, angles) -> np.ndarray:
    """Evaluate the representation at a torus point (angles in radians)."""
    angles = np.asarray(angles, dtype=float)
    if angles.shape != (len(rep),):
        raise DimMismatch(f"expected {len(rep)} angles, got shape {angles.shape}")
    phases = np.exp(1j * rep.weights * angles)
    return sum(ph * p for ph, p in zip(phases, rep.family))


def generator(rep: TorusRepresentation, rates) -> np.ndarray:
    """Self-adjoint generator along a path with initial rates ``rates``.

    Returns ``sum_n k_n rates_n P_n``, the derivative at the identity of
    ``t -> evaluate(rep, t * rates)`` divided by i.
    """
    rates = np.asarray(rates, dtype=float)
    if rates.shape != (len(rep),):
        raise DimMismatch(f"expected {len(rep)} rates, got shape {rates.shape}")
    return sum(k * r * p for k, r, p in zip(rep.weights, rates, rep.family))


def direction_for_values(rep: TorusRepresentation, values) -> np.ndarray:
    """Path rates making the generator's eigenvalues equal ``values``."""
    values = np.asarray(values, dtype=float)
    if values.shape != (len(rep),):
        raise DimMismatch(f"expected {len(rep)} values, got shape {values.shape}")
    if np.any(rep.weights == 0):
        raise ZeroWeight("cannot solve k_n * rate_n = a_n with a zero weight")
    return values / rep.weights


def observable_from_selfadjoint(op, tol: float = DEFAULT_TOL, labels=None) -> ObservableSpec:
    """Build the observable whose outcomes are the eigenpairs of ``op``.

    ``op`` must be self-adjoint within ``tol`` with all eigenvalue gaps
    larger than ``tol``. Labels default to ``a0, a1, ...`` in ascending
    eigenvalue order.
    """
    op = as_operator(op)
    if max_abs(op - op.conj().T) > tol:
        raise NotSelfAdjoint("input is not self-adjoint within tolerance")
    eigvals, eigvecs = np.linalg.eigh(op)
    if np.diff(eigvals).min(initial=np.inf) <= tol:
        raise DegenerateSpectrum("eigenvalues are not separated beyond tolerance")
    projs = [np.outer(eigvecs[:, k], eigvecs[:, k].conj()) for k in range(eigvals.size)]
    if labels is None:
        labels = tuple(f"a{k}" for k in range(eigvals.size))
    return ObservableSpec(labels, eigvals, ProjectorFamily(projs, tol=tol))


def canonical_representation(obs: ObservableSpec) -> TorusRepresentation:
    """The weight-1 torus representation attached to an observable."""
    return TorusRepresentation(np.ones(len(obs.family), dtype=int), obs.family)


def representative_ket(projector) -> np.ndarray:
    """Deterministic unit vector spanning the range of a rank-1 projector.

    Takes the dominant column, normalized, with the phase fixed so the
    largest-magnitude entry is real and positive.
    """
    p = as_operator(projector)
    col = p[:, int(np.argmax(np.abs(np.diag(p))))]
    ket = col / np.linalg.norm(col)
    lead = ket[int(np.argmax(np.abs(ket)))]
    return ket * (abs(lead) / lead)


def outcome_kets(obs: ObservableSpec) -> np.ndarray:
    """Matrix whose n-th column is the representative ket of outcome n."""
    return np.column_stack([representative_ket(p) for p in obs.family])


def permute_angles(angles, perm) -> np.ndarray:
    """Angle vector matched to a permuted outcome ordering.

    The result ``out`` satisfies ``out[perm[n]] = angles[n]``, the convention
    under which an intertwiner for ``perm`` maps the source representation
    at ``angles`` to the target representation at ``out``.
    """
    angles = np.asarray(angles, dtype=float)
    out = np.empty_like(angles)
    out[np.asarray(perm, dtype=int)] = angles
    return out


def _check_permutation(perm, n: int) -> np.ndarray:
    perm = np.asarray(perm, dtype=int)
    if perm.shape != (n,) or sorted(perm.tolist()) != list(range(n)):
        raise ValueError(f"perm must be a permutation of 0..{n - 1}")
    return perm


def intertwiner(obs_a: ObservableSpec, obs_b: ObservableSpec, perm, phases) -> np.ndarray:
    """Unitary mapping outcome n of ``obs_a`` onto outcome ``perm[n]`` of
    ``obs_b`` with a free phase per outcome.

    Returns ``sum_n exp(i phases[n]) |b_perm[n]><a_n|`` built from the
    representative kets. Any such map intertwines the two weight-1
    representations (with ``permute_angles`` matching the angle arguments)
    but does not preserve outcome overlaps unless the families commute.
    """
    if obs_a.dim != obs_b.dim:
        raise DimMismatch("observables live on different dimensions")
    n = len(obs_a.family)
    perm = _check_permutation(perm, n)
    phases = np.asarray(phases, dtype=float)
    if phases.shape != (n,):
        raise DimMismatch(f"expected {n} phases, got shape {phases.shape}")
    kets_a = outcome_kets(obs_a)
    kets_b = outcome_kets(obs_b)
    out = np.zeros((obs_a.dim, obs_a.dim), dtype=complex)
    for i in range(n):
        out += np.exp(1j * phases[i]) * np.outer(kets_b[:, perm[i]], kets_a[:, i].conj())
    return out


def quantum_equivalent(obs_a: ObservableSpec, obs_b: ObservableSpec, tol: float = DEFAULT_TOL) -> bool:
    """True iff every projector of one observable commutes with every
    projector of the other within ``tol`` (equivalently, the identity map
    intertwines the two canonical representations)."""
    if obs_a.dim != obs_b.dim:
        raise DimMismatch("observables live on different dimensions")
    return projector_commutator_norm(obs_a, obs_b) <= tol


def projector_commutator_norm(obs_a: ObservableSpec, obs_b: ObservableSpec) -> float:
    """Largest max-norm among pairwise projector commutators."""
    worst = 0.0
    for pa in obs_a.family:
        for pb in obs_b.family:
            worst = max(worst, max_abs(pa @ pb - pb @ pa))
    return worst

"""Dense complex linear algebra and spectral utilities.

Vectors and operators are plain complex ``numpy.ndarray`` values. Everything
is dense: target dimensions are single digits for the one-particle space and
at most a few hundred per Fock sector, so sparsity buys nothing here.

Structural checks (unitarity, projector validity, spectral separation) use
an entrywise max-norm with a default tolerance of ``1e-10``, overridable per
call.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import DegenerateSpectrum, DimMismatch, NotProjector, NotUnitary

DEFAULT_TOL = 1e-10


def as_operator(matrix) -> np.ndarray:
    """Coerce to a square complex matrix with finite entries."""
    op = np.asarray(matrix, dtype=complex)
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise DimMismatch(f"expected a square matrix, got shape {op.shape}")
    if not np.isfinite(op).all():
        raise ValueError("operator entries must be finite")
    return op


def as_vector(vec) -> np.ndarray:
    """Coerce to a one-dimensional complex vector with finite entries."""
    v = np.asarray(vec, dtype=complex)
    if v.ndim != 1 or v.size < 1:
        raise DimMismatch(f"expected a nonempty vector, got shape {v.shape}")
    if not np.isfinite(v).all():
        raise ValueError("vector entries must be finite")
    return v


def adjoint(op) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(op, dtype=complex).conj().T


def max_abs(arr) -> float:
    """Entrywise max-norm, the tolerance metric used throughout."""
    arr = np.asarray(arr)
    return 0.0 if arr.size == 0 else float(np.abs(arr).max())


def is_unitary(op, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``op† op`` equals the identity within ``tol``."""
    op = as_operator(op)
    return max_abs(adjoint(op) @ op - np.eye(op.shape[0])) <= tol


def is_selfadjoint(op, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``op`` equals its adjoint within ``tol``."""
    op = as_operator(op)
    return max_abs(op - adjoint(op)) <= tol


def trace_product(a, b) -> complex:
    """Tr(a b), computed without forming the matrix product."""
    a = as_operator(a)
    b = as_operator(b)
    if a.shape != b.shape:
        raise DimMismatch(f"trace_product needs equal dims, got {a.shape} and {b.shape}")
    return complex(np.einsum("ij,ji->", a, b))


def commutator_norm(a, b) -> float:
    """Max-norm of the commutator ``ab - ba``."""
    a = as_operator(a)
    b = as_operator(b)
    if a.shape != b.shape:
        raise DimMismatch(f"commutator needs equal dims, got {a.shape} and {b.shape}")
    return max_abs(a @ b - b @ a)


class ProjectorFamily:
    """A complete family of rank-1 orthogonal projectors.

    Construction validates, within ``tol``: hermiticity and idempotence of
    each member, unit trace (rank 1), pairwise orthogonality, and
    completeness (the members sum to the identity). A valid family therefore
    has exactly ``dim`` members.
    """

    def __init__(self, projectors, tol: float = DEFAULT_TOL):
        mats = tuple(as_operator(p).copy() for p in projectors)
        for p in mats:
            p.setflags(write=False)  # validated members must stay valid
        if not mats:
            raise NotProjector("projector family is empty")
        dim = mats[0].shape[0]
        for i, p in enumerate(mats):
            if p.shape != (dim, dim):
                raise DimMismatch("projectors differ in dimension")
            if max_abs(p - adjoint(p)) > tol:
                raise NotProjector(f"member {i} is not self-adjoint")
            if max_abs(p @ p - p) > tol:
                raise NotProjector(f"member {i} is not idempotent")
            if abs(np.trace(p) - 1.0) > tol:
                raise NotProjector(f"member {i} does not have rank 1")
        for i in range(len(mats)):
            for j in range(i + 1, len(mats)):
                if max_abs(mats[i] @ mats[j]) > tol:
                    raise NotProjector(f"members {i} and {j} are not orthogonal")
        if max_abs(sum(mats) - np.eye(dim)) > tol:
            raise NotProjector("family does not sum to the identity")
        self.projectors = mats
        self.dim = dim

    def __len__(self) -> int:
        return len(self.projectors)

    def __iter__(self):
        return iter(self.projectors)

    def __getitem__(self, n) -> np.ndarray:
        return self.projectors[n]

    def __repr__(self) -> str:
        return f"ProjectorFamily(dim={self.dim}, size={len(self)})"


def spectral_projectors(op, tol: float = DEFAULT_TOL):
    """Decompose a non-degenerate unitary into rank-1 eigenprojectors.

    Returns ``(family, phases)`` where ``phases`` are the eigenphases in
    ascending order on (-pi, pi] and ``sum_n exp(i phases[n]) family[n]``
    reconstructs ``op`` within ``tol``.

    Raises
    ------
    NotUnitary
        If ``op`` is not unitary within ``tol``.
    DegenerateSpectrum
        If two eigenvalues coincide within ``tol``.
    """
    op = as_operator(op)
    if not is_unitary(op, tol):
        raise NotUnitary("input is not unitary within tolerance")
    # Complex Schur form of a normal matrix is diagonal up to rounding, with
    # exactly orthonormal Schur vectors; those are the eigenvectors we want.
    tri, vecs = scipy.linalg.schur(op, output="complex")
    eigvals = np.diag(tri)
    order = np.argsort(np.angle(eigvals))
    eigvals = eigvals[order]
    vecs = vecs[:, order]
    n = eigvals.size
    for i in range(n):
        for j in range(i + 1, n):
            if abs(eigvals[i] - eigvals[j]) <= tol:
                raise DegenerateSpectrum(
                    f"eigenvalues {eigvals[i]:.6g} and {eigvals[j]:.6g} coincide within {tol:g}"
                )
    family = ProjectorFamily(
        [np.outer(vecs[:, k], vecs[:, k].conj()) for k in range(n)], tol=tol
    )
    return family, np.angle(eigvals)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary, via QR of a complex Ginibre matrix."""
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_selfadjoint(dim: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Random self-adjoint matrix with entries on the order of ``scale``."""
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return scale * 0.5 * (z + z.conj().T)

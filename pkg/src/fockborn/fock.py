"""Truncated symmetric (bosonic) Fock space over a finite one-particle space.

Sectors
-------
The space is the direct sum of M-particle sectors for M = 0..cutoff. Sector M
carries the orthonormal occupation basis: one basis vector per occupation
vector (n_1, ..., n_d) with sum M, enumerated by :func:`enumerate_basis`. In
tensor-power coordinates the basis vector for occupation ``n`` is

    sqrt(prod_i n_i! / M!) * sum over distinct arrangements of the modes,

so that coordinates of symmetric powers carry the multinomial normalization
``sqrt(M!/prod n_i!)``.

Lifts
-----
``gamma(O)`` acts as O on every tensor factor (multiplicative lift); its
sector-M block is the restriction of the M-fold tensor power of O to the
symmetric subspace. ``dgamma(O)`` is the Leibniz-rule lift, restricting
``sum_j 1 x .. x O_(j) x .. x 1``. Both are computed by conjugating the full
tensor-power operator with the isometry :meth:`FockSpace.symmetrizer`, which
is exact and cheap at the dimensions this package targets. All lifted
operators conserve particle number, hence :class:`SectoredOperator` stores
one square block per sector and nothing off the diagonal.

Conventions: on the vacuum sector ``gamma`` acts as 1 (empty product) and
``dgamma`` as 0 (empty sum).
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .errors import DimMismatch, NotNormalized, NotProjector
from .linalg import DEFAULT_TOL, adjoint, as_operator, as_vector, max_abs


def enumerate_basis(dim: int, total: int) -> list[tuple[int, ...]]:
    """All occupation vectors of ``total`` particles in ``dim`` modes.

    Ordered reverse-lexicographically, e.g. dim=2, total=2 gives
    ``[(2, 0), (1, 1), (0, 2)]``. Length is C(total + dim - 1, dim - 1).
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if total < 0:
        raise ValueError("total must be >= 0")
    if dim == 1:
        return [(total,)]
    out = []
    for first in range(total, -1, -1):
        for rest in enumerate_basis(dim - 1, total - first):
            out.append((first,) + rest)
    return out


class FockSpace:
    """Bosonic Fock space over C^dim, truncated at ``cutoff`` particles.

    Immutable after construction; basis tables and symmetrizer isometries
    are precomputed lazily and cached.
    """

    def __init__(self, dim: int, cutoff: int):
        if dim < 1:
            raise ValueError("single-particle dimension must be >= 1")
        if cutoff < 0:
            raise ValueError("cutoff must be >= 0")
        self.dim = int(dim)
        self.cutoff = int(cutoff)
        self._bases = tuple(
            tuple(enumerate_basis(self.dim, m)) for m in range(self.cutoff + 1)
        )
        self._indices = tuple(
            {occ: i for i, occ in enumerate(basis)} for basis in self._bases
        )
        self.sector_dims = tuple(len(basis) for basis in self._bases)
        self._symmetrizers: dict[int, np.ndarray] = {}

    def sectors(self) -> range:
        return range(self.cutoff + 1)

    def occupations(self, total: int) -> tuple[tuple[int, ...], ...]:
        """Occupation basis of the ``total``-particle sector."""
        return self._bases[total]

    def occupation_index(self, occupation) -> int:
        """Position of an occupation vector within its sector's basis."""
        occ = tuple(int(n) for n in occupation)
        return self._indices[sum(occ)][occ]

    def compatible(self, other: "FockSpace") -> bool:
        return self.dim == other.dim and self.cutoff == other.cutoff

    def symmetrizer(self, total: int) -> np.ndarray:
        """Isometry from sector ``total`` into the tensor power (C^dim)^total.

        Columns are the occupation basis vectors in product coordinates;
        satisfies ``S† S = I`` exactly up to rounding.
        """
        if total in self._symmetrizers:
            return self._symmetrizers[total]
        d, m = self.dim, total
        iso = np.zeros((d**m, self.sector_dims[m]), dtype=complex)
        for col, occ in enumerate(self.occupations(m)):
            modes = [i for i, n in enumerate(occ) for _ in range(n)]
            weight = math.sqrt(
                math.prod(math.factorial(n) for n in occ) / math.factorial(m)
            )
            for arrangement in set(itertools.permutations(modes)):
                row = 0
                for idx in arrangement:
                    row = row * d + idx
                iso[row, col] = weight
        self._symmetrizers[total] = iso
        return iso

    def __repr__(self) -> str:
        return f"FockSpace(dim={self.dim}, cutoff={self.cutoff})"


class FockVector:
    """Per-sector complex coordinate blocks in the occupation basis."""

    def __init__(self, space: FockSpace, blocks):
        blocks = tuple(np.asarray(b, dtype=complex) for b in blocks)
        if len(blocks) != space.cutoff + 1:
            raise DimMismatch("need one block per sector")
        for m, block in enumerate(blocks):
            if block.shape != (space.sector_dims[m],):
                raise DimMismatch(
                    f"sector {m} block has shape {block.shape}, "
                    f"expected ({space.sector_dims[m]},)"
                )
        self.space = space
        self.blocks = blocks

    @classmethod
    def zero(cls, space: FockSpace) -> "FockVector":
        return cls(space, [np.zeros(n, dtype=complex) for n in space.sector_dims])

    @classmethod
    def basis_state(cls, space: FockSpace, occupation) -> "FockVector":
        """The occupation-basis vector |n_1, ..., n_d>."""
        occ = tuple(int(n) for n in occupation)
        vec = cls.zero(space)
        vec.blocks[sum(occ)][space.occupation_index(occ)] = 1.0
        return vec

    def block(self, total: int) -> np.ndarray:
        return self.blocks[total]

    def norm(self) -> float:
        return math.sqrt(sum(float(np.vdot(b, b).real) for b in self.blocks))

    def __add__(self, other: "FockVector") -> "FockVector":
        _check_same_space(self, other)
        return FockVector(self.space, [a + b for a, b in zip(self.blocks, other.blocks)])

    def __sub__(self, other: "FockVector") -> "FockVector":
        _check_same_space(self, other)
        return FockVector(self.space, [a - b for a, b in zip(self.blocks, other.blocks)])

    def __rmul__(self, scalar) -> "FockVector":
        return FockVector(self.space, [scalar * b for b in self.blocks])


class SectoredOperator:
    """Particle-number-conserving operator: one square block per sector."""

    def __init__(self, space: FockSpace, blocks):
        blocks = tuple(np.asarray(b, dtype=complex) for b in blocks)
        if len(blocks) != space.cutoff + 1:
            raise DimMismatch("need one block per sector")
        for m, block in enumerate(blocks):
            n = space.sector_dims[m]
            if block.shape != (n, n):
                raise DimMismatch(
                    f"sector {m} block has shape {block.shape}, expected ({n}, {n})"
                )
        self.space = space
        self.blocks = blocks

    @classmethod
    def identity(cls, space: FockSpace) -> "SectoredOperator":
        return cls(space, [np.eye(n, dtype=complex) for n in space.sector_dims])

    @classmethod
    def zero(cls, space: FockSpace) -> "SectoredOperator":
        return cls(space, [np.zeros((n, n), dtype=complex) for n in space.sector_dims])

    def block(self, total: int) -> np.ndarray:
        return self.blocks[total]

    def dagger(self) -> "SectoredOperator":
        return SectoredOperator(self.space, [adjoint(b) for b in self.blocks])

    def max_norm(self) -> float:
        return max(max_abs(b) for b in self.blocks)

    def __matmul__(self, other: "SectoredOperator") -> "SectoredOperator":
        _check_same_space(self, other)
        return SectoredOperator(
            self.space, [a @ b for a, b in zip(self.blocks, other.blocks)]
        )

    def __add__(self, other: "SectoredOperator") -> "SectoredOperator":
        _check_same_space(self, other)
        return SectoredOperator(
            self.space, [a + b for a, b in zip(self.blocks, other.blocks)]
        )

    def __sub__(self, other: "SectoredOperator") -> "SectoredOperator":
        _check_same_space(self, other)
        return SectoredOperator(
            self.space, [a - b for a, b in zip(self.blocks, other.blocks)]
        )

    def __rmul__(self, scalar) -> "SectoredOperator":
        return SectoredOperator(self.space, [scalar * b for b in self.blocks])

    def __repr__(self) -> str:
        return f"SectoredOperator(dim={self.space.dim}, cutoff={self.space.cutoff})"


def _check_same_space(a, b) -> None:
    if not a.space.compatible(b.space):
        raise DimMismatch("operands live on different Fock spaces")


def symmetric_power_state(phi, total: int) -> np.ndarray:
    """Occupation-basis coordinates of the M-fold symmetric power of ``phi``.

    ``phi`` must be normalized within 1e-10. The coordinate at occupation
    ``n`` is ``sqrt(M!/prod n_i!) * prod_i phi_i^{n_i}``; the result is again
    a unit vector.
    """
    phi = as_vector(phi)
    if abs(np.linalg.norm(phi) - 1.0) > 1e-10:
        raise NotNormalized("symmetric powers are defined for unit vectors")
    basis = enumerate_basis(phi.size, total)
    coords = np.empty(len(basis), dtype=complex)
    for i, occ in enumerate(basis):
        coeff = math.sqrt(
            math.factorial(total) / math.prod(math.factorial(n) for n in occ)
        )
        coords[i] = coeff * np.prod(
            [phi[mode] ** n for mode, n in enumerate(occ) if n]
        )
    return coords


def embed_sector(space: FockSpace, total: int, block) -> FockVector:
    """Fock vector whose only nonzero block is the given sector block."""
    vec = FockVector.zero(space)
    block = np.asarray(block, dtype=complex)
    if block.shape != (space.sector_dims[total],):
        raise DimMismatch(
            f"sector {total} block has shape {block.shape}, "
            f"expected ({space.sector_dims[total]},)"
        )
    return FockVector(
        space, [block if m == total else vec.blocks[m] for m in space.sectors()]
    )


def _tensor_powers(op: np.ndarray, cutoff: int):
    powers = [np.ones((1, 1), dtype=complex)]
    for _ in range(cutoff):
        powers.append(np.kron(powers[-1], op))
    return powers


def gamma(op, space: FockSpace) -> SectoredOperator:
    """Multiplicative lift of a one-particle operator.

    Sector-M block is the restriction of the M-fold tensor power of ``op``
    to the symmetric subspace; the vacuum block is the scalar 1. Satisfies
    ``gamma(A) @ gamma(B) = gamma(A @ B)`` and maps unitaries to blockwise
    unitaries.
    """
    op = as_operator(op)
    if op.shape[0] != space.dim:
        raise DimMismatch(f"operator dim {op.shape[0]} != space dim {space.dim}")
    blocks = []
    for m, power in enumerate(_tensor_powers(op, space.cutoff)):
        iso = space.symmetrizer(m)
        blocks.append(adjoint(iso) @ power @ iso)
    return SectoredOperator(space, blocks)


def dgamma(op, space: FockSpace) -> SectoredOperator:
    """Derivation (Leibniz-rule) lift of a one-particle operator.

    Sector-M block restricts ``sum_{j=1}^{M} 1 x .. x op_(j) x .. x 1`` to
    the symmetric subspace; the vacuum block is 0. Linear in ``op`` and the
    derivative at t=0 of ``gamma(U(t))`` for any one-parameter group U.
    """
    op = as_operator(op)
    if op.shape[0] != space.dim:
        raise DimMismatch(f"operator dim {op.shape[0]} != space dim {space.dim}")
    d = space.dim
    blocks = [np.zeros((1, 1), dtype=complex)]
    for m in range(1, space.cutoff + 1):
        total = np.zeros((d**m, d**m), dtype=complex)
        for j in range(m):
            total += np.kron(
                np.kron(np.eye(d**j), op), np.eye(d ** (m - j - 1))
            )
        iso = space.symmetrizer(m)
        blocks.append(adjoint(iso) @ total @ iso)
    return SectoredOperator(space, blocks)


def number_operator(projector, space: FockSpace) -> SectoredOperator:
    """Counting operator for the mode singled out by a rank-1 projector.

    On an occupation basis aligned with the projector's eigenbasis it is
    diagonal, with eigenvalue equal to the occupation of that mode.
    """
    p = as_operator(projector)
    if (
        max_abs(p - adjoint(p)) > DEFAULT_TOL
        or max_abs(p @ p - p) > DEFAULT_TOL
        or abs(np.trace(p) - 1.0) > DEFAULT_TOL
    ):
        raise NotProjector("number operators require a rank-1 orthogonal projector")
    return dgamma(p, space)


def apply(op: SectoredOperator, vec: FockVector) -> FockVector:
    """Blockwise matrix-vector product."""
    _check_same_space(op, vec)
    return FockVector(vec.space, [b @ v for b, v in zip(op.blocks, vec.blocks)])


def fock_inner(u: FockVector, v: FockVector) -> complex:
    """Inner product, conjugate-linear in the first argument."""
    _check_same_space(u, v)
    return complex(sum(np.vdot(a, b) for a, b in zip(u.blocks, v.blocks)))


def expectation(op: SectoredOperator, vec: FockVector) -> complex:
    """Matrix element <vec| op |vec>."""
    return fock_inner(vec, apply(op, vec))

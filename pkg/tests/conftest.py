"""Shared builders and brute-force oracles for the test suite.

The oracles here intentionally duplicate no production code paths: states
and operators are built in raw tensor-power coordinates with explicit
permutation averaging, so symmetric-subspace results can be checked against
an independent construction.
"""

import itertools

import numpy as np

from fockborn.linalg import ProjectorFamily, random_unitary
from fockborn.representation import ObservableSpec


def observable_from_basis(basis, values=None, prefix="a"):
    """Observable whose outcome kets are the columns of a unitary."""
    basis = np.asarray(basis, dtype=complex)
    dim = basis.shape[0]
    projectors = [np.outer(basis[:, n], basis[:, n].conj()) for n in range(dim)]
    if values is None:
        values = np.arange(dim, dtype=float)
    labels = [f"{prefix}{n}" for n in range(dim)]
    return ObservableSpec(labels, values, ProjectorFamily(projectors))


def random_observable(dim, rng, prefix="a"):
    """Random observable with Haar basis and well-separated values."""
    values = np.cumsum(rng.uniform(0.5, 1.5, size=dim))
    return observable_from_basis(random_unitary(dim, rng), values, prefix=prefix)


def tensor_power_vector(phi, total):
    """phi^(x)total in raw product coordinates."""
    out = np.ones(1, dtype=complex)
    for _ in range(total):
        out = np.kron(out, np.asarray(phi, dtype=complex))
    return out


def tensor_power_operator(op, total):
    """op^(x)total in raw product coordinates."""
    out = np.ones((1, 1), dtype=complex)
    for _ in range(total):
        out = np.kron(out, np.asarray(op, dtype=complex))
    return out


def one_site_sum_operator(op, total):
    """sum_j 1 x .. x op_(j) x .. x 1 in raw product coordinates."""
    op = np.asarray(op, dtype=complex)
    d = op.shape[0]
    out = np.zeros((d**total, d**total), dtype=complex)
    for j in range(total):
        out += np.kron(
            np.kron(np.eye(d**j), op), np.eye(d ** (total - j - 1))
        )
    return out


def permutation_matrix(d, total, perm):
    """Operator permuting tensor factors: factor j of the output is factor
    perm[j] of the input."""
    size = d**total
    mat = np.zeros((size, size), dtype=complex)
    for idx in itertools.product(range(d), repeat=total):
        permuted = tuple(idx[perm[j]] for j in range(total))
        row = 0
        for i in permuted:
            row = row * d + i
        col = 0
        for i in idx:
            col = col * d + i
        mat[col, row] = 1.0
    return mat


def symmetric_subspace_projector(d, total):
    """Average of all factor permutations: projects onto symmetric tensors."""
    size = d**total
    out = np.zeros((size, size), dtype=complex)
    perms = list(itertools.permutations(range(total)))
    for perm in perms:
        out += permutation_matrix(d, total, perm)
    return out / len(perms)


def oracle_symmetric_basis(d, total, occupations):
    """Occupation basis vectors built by symmetrizing one representative
    arrangement per occupation and normalizing. Independent of the package's
    coefficient-placement construction."""
    proj = symmetric_subspace_projector(d, total)
    cols = []
    for occ in occupations:
        modes = [i for i, n in enumerate(occ) for _ in range(n)]
        rep = np.zeros(d**total, dtype=complex)
        row = 0
        for i in modes:
            row = row * d + i
        rep[row] = 1.0
        sym = proj @ rep
        cols.append(sym / np.linalg.norm(sym))
    return np.column_stack(cols) if cols else np.zeros((d**total, 0), dtype=complex)

"""Shared independent oracles: deliberately slow, straight-line
reimplementations used to cross-check the library's fast paths."""

import itertools

import numpy as np
import pytest


def product_column(mats, digits):
    """Kron chain of one basis column per party, party 1 most significant."""
    col = np.array([1.0 + 0.0j])
    for m, j in zip(mats, digits):
        col = np.kron(col, m[:, j])
    return col


def outcome_oracle(psi, basis):
    """Measurement probabilities via explicit product vectors, O(d^2n)."""
    p = np.empty(psi.d**psi.n)
    for k, digits in enumerate(itertools.product(range(psi.d), repeat=psi.n)):
        v = product_column(basis.u, digits)
        p[k] = abs(np.vdot(v, psi.amp)) ** 2
    return p


def fourier_oracle(p):
    """Direct character sum q(y) = sum_x (-1)^(x.y) p(x), O(4^n)."""
    size = p.size
    q = np.zeros(size)
    for y in range(size):
        for x in range(size):
            q[y] += p[x] * (-1.0) ** bin(x & y).count("1")
    return q


def gf2_rank_oracle(rows):
    """Row-reduction rank over GF(2) on a list of 0/1 lists."""
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                rows[i] = [(a + b) % 2 for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


PAULI_MATS = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def pauli_dense(ps):
    """Dense matrix of a signed Pauli string, party 1 most significant."""
    m = np.array([[ps.sign + 0.0j]])
    for f in ps.factors:
        m = np.kron(m, PAULI_MATS[f])
    return m


@pytest.fixture
def rng():
    return np.random.default_rng(20260816)

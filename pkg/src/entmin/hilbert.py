"""Dense complex linear algebra for small multi-party Hilbert spaces.

States, product measurement bases, reduced density matrices, Schmidt
decomposition and the entropies built on them.  All entropies are in bits.
Everything here is a pure function over immutable inputs; party labels are
1-based and the flat amplitude layout is the big-endian convention of
:mod:`entmin.indexing`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .indexing import check_capacity, parties_to_axes

NORM_TOL = 1e-12
HERM_TOL = 1e-12
UNITARY_TOL = 1e-10
EIG_FLOOR = -1e-10


def _frozen_array(a: np.ndarray) -> np.ndarray:
    out = np.array(a)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class PureState:
    """Pure state of n parties with local dimension d.

    ``amp`` is the dense complex amplitude vector of length d**n in the
    standard product basis, party 1 most significant.
    """

    n: int
    d: int
    amp: np.ndarray

    def __post_init__(self):
        check_capacity(self.n, self.d)
        amp = np.asarray(self.amp, dtype=np.complex128).reshape(-1)
        if amp.size != self.d**self.n:
            raise ValidationError(
                f"amplitude vector has length {amp.size}, expected {self.d}**{self.n}"
            )
        norm2 = float(np.sum(np.abs(amp) ** 2))
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ValidationError(f"state is not normalized: |amp|^2 = {norm2!r}")
        object.__setattr__(self, "amp", _frozen_array(amp))

    @property
    def dim(self) -> int:
        return self.d**self.n

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to an n-axis tensor, axis i-1 for party i."""
        return self.amp.reshape((self.d,) * self.n)

    def nonzero_count(self, tol: float = 1e-12) -> int:
        return int(np.count_nonzero(np.abs(self.amp) > tol))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace matrix on a dim-dimensional space."""

    dim: int
    mat: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.mat, dtype=np.complex128)
        if mat.shape != (self.dim, self.dim):
            raise ValidationError(f"matrix shape {mat.shape} != ({self.dim}, {self.dim})")
        if np.max(np.abs(mat - mat.conj().T)) > HERM_TOL:
            raise ValidationError("matrix is not Hermitian within 1e-12")
        tr = complex(np.trace(mat))
        if abs(tr - 1.0) > HERM_TOL:
            raise ValidationError(f"trace is {tr!r}, expected 1")
        object.__setattr__(self, "mat", _frozen_array(mat))


@dataclass(frozen=True, eq=False)
class ProductBasis:
    """One orthonormal measurement basis per party.

    ``u`` holds n complex d x d unitaries; column j of ``u[i]`` is the j-th
    basis vector of party i+1.
    """

    n: int
    d: int
    u: tuple

    def __post_init__(self):
        if len(self.u) != self.n:
            raise ValidationError(f"got {len(self.u)} basis matrices for {self.n} parties")
        mats = []
        eye = np.eye(self.d)
        for i, m in enumerate(self.u):
            m = np.asarray(m, dtype=np.complex128)
            if m.shape != (self.d, self.d):
                raise ValidationError(f"basis {i + 1} has shape {m.shape}")
            if np.max(np.abs(m.conj().T @ m - eye)) > UNITARY_TOL:
                raise ValidationError(f"basis {i + 1} is not unitary within 1e-10")
            mats.append(_frozen_array(m))
        object.__setattr__(self, "u", tuple(mats))


@dataclass(frozen=True, eq=False)
class SchmidtData:
    """Schmidt spectrum and bases of a two-party state.

    ``coeffs`` are the probabilities p_i (descending); the state is
    sum_i sqrt(p_i) |left_i> x |right_i> with left_i, right_i the columns
    of the two unitaries.
    """

    coeffs: np.ndarray
    left_basis: np.ndarray
    right_basis: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.float64)
        if abs(float(np.sum(c)) - 1.0) > 1e-10:
            raise ValidationError("Schmidt coefficients do not sum to 1")
        if np.any(np.diff(c) > 1e-12):
            raise ValidationError("Schmidt coefficients are not sorted descending")
        object.__setattr__(self, "coeffs", _frozen_array(c))
        object.__setattr__(self, "left_basis", _frozen_array(np.asarray(self.left_basis)))
        object.__setattr__(self, "right_basis", _frozen_array(np.asarray(self.right_basis)))


def identity_basis(n: int, d: int) -> ProductBasis:
    """Standard basis for every party."""
    return ProductBasis(n, d, tuple(np.eye(d, dtype=np.complex128) for _ in range(n)))


def random_state(n: int, d: int, rng: np.random.Generator) -> PureState:
    """Haar-random pure state (normalized complex Gaussian vector)."""
    check_capacity(n, d)
    z = rng.standard_normal(d**n) + 1j * rng.standard_normal(d**n)
    return PureState(n, d, z / np.linalg.norm(z))


def tensor_product(a: PureState, b: PureState) -> PureState:
    """Combined state of a's parties followed by b's parties (same d)."""
    if a.d != b.d:
        raise ValidationError(f"local dimensions differ: {a.d} vs {b.d}")
    check_capacity(a.n + b.n, a.d)
    return PureState(a.n + b.n, a.d, np.kron(a.amp, b.amp))


def outcome_distribution(psi: PureState, b: ProductBasis) -> np.ndarray:
    """Joint outcome probabilities of measuring every party in its basis.

    Entry at flat index (j_1, ..., j_n) is |<psi| B_1(j_1) x ... x B_n(j_n)>|^2.
    Computed by n successive one-party basis rotations, O(n * d**(n+1)).
    """
    if (psi.n, psi.d) != (b.n, b.d):
        raise ValidationError(
            f"state ({psi.n}, {psi.d}) and basis ({b.n}, {b.d}) dimensions differ"
        )
    t = psi.tensor()
    for axis in range(psi.n):
        # Contract axis with u^dagger: new index runs over basis vectors.
        t = np.moveaxis(np.tensordot(b.u[axis].conj().T, t, axes=([1], [axis])), 0, axis)
    p = np.abs(t.reshape(-1)) ** 2
    s = float(np.sum(p))
    if abs(s - 1.0) > 1e-10:
        raise ValidationError(f"outcome probabilities sum to {s!r}")
    return p / s


def _entropy_bits(p: np.ndarray) -> float:
    """Shannon entropy in bits of a clean probability vector (no checks)."""
    pz = p[p > 0.0]
    return float(-np.dot(pz, np.log2(pz)))


def shannon_entropy(p) -> float:
    """Shannon entropy in bits, with the 0 log 0 = 0 convention.

    Rejects vectors with entries below -1e-12 or total weight off 1 by more
    than 1e-9; entries in [-1e-12, 0) are clamped to 0.
    """
    p = np.asarray(p, dtype=np.float64).reshape(-1)
    if p.size and float(np.min(p)) < -1e-12:
        raise ValidationError(f"negative probability {float(np.min(p))!r}")
    s = float(np.sum(p))
    if abs(s - 1.0) > 1e-9:
        raise ValidationError(f"probabilities sum to {s!r}, expected 1")
    return _entropy_bits(np.clip(p, 0.0, None))


def partial_trace(psi: PureState, keep) -> DensityMatrix:
    """Reduced density matrix of the given parties (1-based labels).

    The kept subsystem keeps ascending party order; the rest is traced out.
    """
    axes = parties_to_axes(keep, psi.n)
    if len(axes) == 0 or len(axes) == psi.n:
        raise ValidationError("keep-set must be a nonempty proper subset of the parties")
    other = tuple(a for a in range(psi.n) if a not in axes)
    t = np.transpose(psi.tensor(), axes + other)
    m = t.reshape(psi.d ** len(axes), psi.d ** len(other))
    return DensityMatrix(psi.d ** len(axes), m @ m.conj().T)


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Spectral entropy -sum lambda log2 lambda in bits.

    Eigenvalues in [-1e-10, 0) are clamped to 0; anything lower is rejected
    as a malformed density matrix.
    """
    lam = np.linalg.eigvalsh(rho.mat)
    if float(lam[0]) < EIG_FLOOR:
        raise ValidationError(f"negative eigenvalue {float(lam[0])!r} below clamp floor")
    lam = np.clip(lam, 0.0, 1.0)
    return _entropy_bits(lam)


def schmidt_decompose(psi: PureState) -> SchmidtData:
    """Schmidt decomposition of a two-party state via SVD."""
    if psi.n != 2:
        raise ValidationError(f"Schmidt decomposition needs n = 2, got n = {psi.n}")
    m = psi.amp.reshape(psi.d, psi.d)
    left, sing, vh = np.linalg.svd(m)
    # psi = sum_i s_i |left_i> x |vh_i^T>; rows of vh are the right vectors.
    return SchmidtData(coeffs=sing**2, left_basis=left, right_basis=vh.T)


def schmidt_reconstruct(sd: SchmidtData) -> PureState:
    """Rebuild the two-party state sum_i sqrt(p_i) |l_i> x |r_i>."""
    d = sd.left_basis.shape[0]
    m = (sd.left_basis * np.sqrt(sd.coeffs)) @ sd.right_basis.T
    return PureState(2, d, m.reshape(-1))


def embed_local_dims(psi: PureState, big_d: int) -> PureState:
    """Zero-pad every party's space from dimension d up to big_d."""
    if big_d < psi.d:
        raise ValidationError(f"target dimension {big_d} below current {psi.d}")
    check_capacity(psi.n, big_d)
    t = np.zeros((big_d,) * psi.n, dtype=np.complex128)
    t[(slice(0, psi.d),) * psi.n] = psi.tensor()
    return PureState(psi.n, big_d, t.reshape(-1))


# ---------------------------------------------------------------------------
# State files: {"n": ..., "d": ..., "amp": [[re, im], ...]} in flat order.

def save_state(psi: PureState, path) -> None:
    """Write a state to the JSON state-file format."""
    payload = {
        "n": psi.n,
        "d": psi.d,
        "amp": [[float(a.real), float(a.imag)] for a in psi.amp],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh)


def load_state(path) -> PureState:
    """Read a JSON state file, validating shape and normalization."""
    with open(path) as fh:
        payload = json.load(fh)
    try:
        n, d = int(payload["n"]), int(payload["d"])
        amp = np.array([complex(re, im) for re, im in payload["amp"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed state file {path}: {exc}") from exc
    return PureState(n, d, amp)

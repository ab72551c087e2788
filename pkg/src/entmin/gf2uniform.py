"""GF(2) machinery: bit-string distributions and their parity transform,
k-uniformity tests, graph-state stabilizers, the closed-form reduced density
matrix of a graph state, and the balanced-rank search for maximally uniform
graphs.

Bit strings use the same big-endian packing as flat state indices: party i
of n sits at bit n - i, so party 1 is the most significant bit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, ValidationError
from .hilbert import DensityMatrix, PureState
from .indexing import check_capacity, parties_to_axes
from .states import GraphSpec

DIST_TOL = 1e-10

_PAULI_LETTERS = ("I", "X", "Y", "Z")

# P * Q = i**t R, keyed by (P, Q) -> (t, R)
_PAULI_TABLE = {
    ("I", "I"): (0, "I"), ("I", "X"): (0, "X"), ("I", "Y"): (0, "Y"), ("I", "Z"): (0, "Z"),
    ("X", "I"): (0, "X"), ("X", "X"): (0, "I"), ("X", "Y"): (1, "Z"), ("X", "Z"): (3, "Y"),
    ("Y", "I"): (0, "Y"), ("Y", "X"): (3, "Z"), ("Y", "Y"): (0, "I"), ("Y", "Z"): (1, "X"),
    ("Z", "I"): (0, "Z"), ("Z", "X"): (1, "Y"), ("Z", "Y"): (3, "X"), ("Z", "Z"): (0, "I"),
}


def _hamming_weights(size: int, bits: int) -> np.ndarray:
    """Vector of popcounts for 0 .. size-1."""
    idx = np.arange(size)
    w = np.zeros(size, dtype=np.int64)
    for b in range(bits):
        w += (idx >> b) & 1
    return w


def _masked_parity(idx: np.ndarray, mask: int) -> np.ndarray:
    """Parity of idx & mask, vectorized over an index array."""
    par = np.zeros(idx.size, dtype=np.int64)
    b = 0
    while mask >> b:
        if (mask >> b) & 1:
            par ^= (idx >> b) & 1
        b += 1
    return par


@dataclass(frozen=True, eq=False)
class BitDistribution:
    """Probability distribution over the 2**n strings of n bits."""

    n: int
    p: np.ndarray

    def __post_init__(self):
        check_capacity(self.n, 2)
        p = np.asarray(self.p, dtype=np.float64)
        if p.shape != (1 << self.n,):
            raise ValidationError(f"need {1 << self.n} probabilities, got shape {p.shape}")
        if np.any(p < -DIST_TOL):
            raise ValidationError("negative probability")
        total = float(p.sum())
        if abs(total - 1.0) > DIST_TOL:
            raise ValidationError(f"probabilities sum to {total!r}")
        p = np.clip(p, 0.0, None)
        p.setflags(write=False)
        object.__setattr__(self, "p", p)

    @classmethod
    def from_state(cls, psi: PureState) -> "BitDistribution":
        """Standard-basis outcome distribution of a qubit state."""
        if psi.d != 2:
            raise ValidationError("bit distributions need d = 2")
        return cls(psi.n, np.abs(psi.amp) ** 2)


def walsh_transform(values: np.ndarray) -> np.ndarray:
    """Raw Walsh butterfly on a fresh float copy, O(n 2^n); self-inverse
    up to the factor 2^n."""
    q = np.array(values, dtype=np.float64)
    h = 1
    while h < q.size:
        for start in range(0, q.size, 2 * h):
            a = q[start : start + h].copy()
            b = q[start + h : start + 2 * h].copy()
            q[start : start + h] = a + b
            q[start + h : start + 2 * h] = a - b
        h *= 2
    return q


def fourier(dist: BitDistribution) -> np.ndarray:
    """Parity transform q(y) = sum_x (-1)^(x . y) p(x); q[0] is always 1."""
    return walsh_transform(dist.p)


def inverse_fourier(q: np.ndarray, n: int) -> BitDistribution:
    """Rebuild the distribution from its parity transform."""
    q = np.asarray(q, dtype=np.float64)
    if q.shape != (1 << n,):
        raise ValidationError(f"need {1 << n} coefficients, got shape {q.shape}")
    return BitDistribution(n, walsh_transform(q) / (1 << n))


def is_k_uniform(dist: BitDistribution, k: int, tol: float = DIST_TOL) -> bool:
    """True when every parity of weight 1 .. k is unbiased."""
    if not 0 <= k <= dist.n:
        raise ValidationError(f"k = {k} out of range for n = {dist.n}")
    if k == 0:
        return True
    q = fourier(dist)
    w = _hamming_weights(q.size, dist.n)
    mask = (w >= 1) & (w <= k)
    return bool(np.all(np.abs(q[mask]) <= tol))


def marginal_distribution(dist: BitDistribution, parties) -> BitDistribution:
    """Marginal over a subset of parties (1-based, ascending order kept)."""
    axes = parties_to_axes(parties, dist.n)
    keep = set(axes)
    drop = tuple(a for a in range(dist.n) if a not in keep)
    marg = dist.p.reshape((2,) * dist.n).sum(axis=drop).reshape(-1)
    return BitDistribution(len(axes), marg)


def is_k_uniform_via_marginals(dist: BitDistribution, k: int, tol: float = DIST_TOL) -> bool:
    """Marginal form of the same test: every k-party marginal is uniform."""
    if not 0 <= k <= dist.n:
        raise ValidationError(f"k = {k} out of range for n = {dist.n}")
    if k == 0:
        return True
    flat = 1.0 / (1 << k)
    for parties in itertools.combinations(range(1, dist.n + 1), k):
        marg = marginal_distribution(dist, parties)
        if np.any(np.abs(marg.p - flat) > tol):
            return False
    return True


def parity_constrained_uniform(n: int, checks) -> BitDistribution:
    """Uniform distribution on the strings with even parity on every check set.

    Each check is a collection of 1-based parties whose bits must XOR to
    zero.
    """
    check_capacity(n, 2)
    idx = np.arange(1 << n)
    ok = np.ones(1 << n, dtype=bool)
    for parties in checks:
        mask = 0
        for axis in parties_to_axes(parties, n):
            mask |= 1 << (n - 1 - axis)
        ok &= _masked_parity(idx, mask) == 0
    count = int(ok.sum())
    if count == 0:
        raise ValidationError("parity checks are inconsistent")
    return BitDistribution(n, ok.astype(np.float64) / count)


# ---------------------------------------------------------------------------
# GF(2) linear algebra on adjacency blocks.

@dataclass(frozen=True, eq=False)
class Gf2Matrix:
    """Dense bit matrix over GF(2)."""

    rows: int
    cols: int
    bits: np.ndarray

    def __post_init__(self):
        bits = np.asarray(self.bits, dtype=np.uint8)
        if bits.shape != (self.rows, self.cols):
            raise ValidationError(f"bit block shape {bits.shape} != ({self.rows}, {self.cols})")
        if np.any(bits > 1):
            raise ValidationError("entries must be 0/1")
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_array(cls, arr) -> "Gf2Matrix":
        arr = np.asarray(arr, dtype=np.uint8)
        return cls(arr.shape[0], arr.shape[1], arr)


def gf2_rank(m) -> int:
    """Rank over GF(2) by Gaussian elimination on a uint8 copy."""
    bits = m.bits if isinstance(m, Gf2Matrix) else np.asarray(m, dtype=np.uint8)
    a = np.array(bits, dtype=np.uint8) & 1
    rows, cols = a.shape
    rank = 0
    for c in range(cols):
        pivot = None
        for r in range(rank, rows):
            if a[r, c]:
                pivot = r
                break
        if pivot is None:
            continue
        a[[rank, pivot]] = a[[pivot, rank]]
        for r in np.flatnonzero(a[:, c]):
            if r != rank:
                a[r] ^= a[rank]
        rank += 1
        if rank == rows:
            break
    return rank


def bipartition_blocks(g: GraphSpec, w) -> tuple:
    """Adjacency blocks (A_ww, A_bw) for a white vertex subset w.

    A_ww is the |w| x |w| block inside the white set, A_bw the |b| x |w|
    block from the complement to the white set; vertices ascend in both.
    """
    white_axes = parties_to_axes(w, g.v)
    black_axes = [a for a in range(g.v) if a not in set(white_axes)]
    if not white_axes or not black_axes:
        raise ValidationError("subset must leave both sides nonempty")
    a_ww = g.adj[np.ix_(white_axes, white_axes)]
    a_bw = g.adj[np.ix_(black_axes, white_axes)]
    return Gf2Matrix.from_array(a_ww), Gf2Matrix.from_array(a_bw)


def is_maximally_uniform_graph(g: GraphSpec) -> bool:
    """True when every balanced bipartition block is nondegenerate over GF(2).

    Vertex 1 is pinned to the white side: complementary bipartitions share
    a block up to transpose, so C(2m, m)/2 representatives cover all cases.
    """
    if g.v % 2 != 0:
        raise ValidationError(f"vertex count {g.v} is odd")
    m = g.v // 2
    for rest in itertools.combinations(range(2, g.v + 1), m - 1):
        _, a_bw = bipartition_blocks(g, (1,) + rest)
        if gf2_rank(a_bw) != m:
            return False
    return True


def _rank_int_rows(rows: list) -> int:
    """GF(2) rank of rows packed as ints (destructive on the list)."""
    rank = 0
    for row in rows:
        cur = row
        for piv in rows[:rank]:
            cur = min(cur, cur ^ piv)
        if cur:
            rows[rank] = cur
            rank += 1
    return rank


def search_maximally_uniform(m: int, mode: str = "exhaustive", budget: int = 100_000,
                             seed: int = 0) -> list:
    """Find maximally uniform graphs on 2m vertices.

    Exhaustive mode enumerates all 2^C(2m,2) edge sets, skipping graphs
    with an isolated vertex (their block has a zero row); the 2m <= 8 cap
    keeps that countable, though 2m = 8 is a long run.  Random mode samples
    `budget` graphs with edge probability 1/2 and deduplicates.  Hits come
    back as GraphSpec objects in candidate order.
    """
    if m < 1:
        raise ValidationError(f"need m >= 1, got {m}")
    v = 2 * m
    pairs = list(itertools.combinations(range(v), 2))
    whites = [(0,) + rest for rest in itertools.combinations(range(1, v), m - 1)]
    blacks = [tuple(sorted(set(range(v)) - set(wset))) for wset in whites]

    def adj_is_hit(adj: np.ndarray) -> bool:
        if np.any(adj.sum(axis=0) == 0):
            return False  # isolated vertex: zero row in its bipartition block
        for wset, bset in zip(whites, blacks):
            rows = [int("".join(str(adj[i, j]) for j in wset), 2) for i in bset]
            if _rank_int_rows(rows) != m:
                return False
        return True

    hits = []
    if mode == "exhaustive":
        if v > 8:
            raise CapacityError(f"exhaustive search over 2^{len(pairs)} graphs is out of reach")
        for mask in range(1 << len(pairs)):
            adj = np.zeros((v, v), dtype=np.uint8)
            for bit, (i, j) in enumerate(pairs):
                if (mask >> bit) & 1:
                    adj[i, j] = adj[j, i] = 1
            if adj_is_hit(adj):
                hits.append(GraphSpec(v, adj))
    elif mode == "random":
        rng = np.random.default_rng(seed)
        seen = set()
        for _ in range(budget):
            upper = rng.integers(0, 2, size=len(pairs), dtype=np.uint8)
            adj = np.zeros((v, v), dtype=np.uint8)
            for bit, (i, j) in enumerate(pairs):
                adj[i, j] = adj[j, i] = upper[bit]
            key = adj.tobytes()
            if key in seen:
                continue
            seen.add(key)
            if adj_is_hit(adj):
                hits.append(GraphSpec(v, adj))
    else:
        raise ValidationError(f"unknown mode {mode!r}")
    return hits


# ---------------------------------------------------------------------------
# Stabilizers.

@dataclass(frozen=True, eq=False)
class PauliString:
    """sign times a tensor product of single-qubit factors I, X, Y, Z.

    Only Hermitian strings are representable (sign +1 or -1); composing
    two anticommuting strings raises instead of producing a +/-i phase.
    """

    sign: int
    factors: tuple

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValidationError(f"sign {self.sign!r} must be +1 or -1")
        if not self.factors or any(f not in _PAULI_LETTERS for f in self.factors):
            raise ValidationError(f"bad factor string {self.factors!r}")
        object.__setattr__(self, "factors", tuple(self.factors))

    @property
    def n(self) -> int:
        return len(self.factors)

    def weight(self) -> int:
        return sum(f != "I" for f in self.factors)

    def compose(self, other: "PauliString") -> "PauliString":
        """Product self * other; raises if the result is anti-Hermitian."""
        if other.n != self.n:
            raise ValidationError("length mismatch")
        phase = 0 if self.sign == 1 else 2
        phase += 0 if other.sign == 1 else 2
        out = []
        for a, b in zip(self.factors, other.factors):
            t, r = _PAULI_TABLE[(a, b)]
            phase += t
            out.append(r)
        phase %= 4
        if phase % 2:
            raise ValidationError("product has an imaginary overall phase")
        return PauliString(1 if phase == 0 else -1, tuple(out))

    def apply(self, psi: PureState) -> PureState:
        """Act on a qubit state."""
        if psi.d != 2 or psi.n != self.n:
            raise ValidationError("state shape does not match the operator")
        n = self.n
        xmask = 0
        zymask = 0
        n_y = 0
        for party, f in enumerate(self.factors, start=1):
            bit = 1 << (n - party)
            if f in ("X", "Y"):
                xmask |= bit
            if f in ("Z", "Y"):
                zymask |= bit
            if f == "Y":
                n_y += 1
        idx = np.arange(1 << n)
        signs = np.where(_masked_parity(idx, zymask), -1.0, 1.0)
        coef = self.sign * (1j) ** (n_y % 4)
        out = np.empty_like(psi.amp)
        out[idx ^ xmask] = coef * signs * psi.amp
        return PureState(n, 2, out)


def stabilizer_generators(g: GraphSpec) -> tuple:
    """One generator per vertex: X there, Z on each neighbor, sign +1."""
    gens = []
    for i in range(1, g.v + 1):
        nbrs = set(g.neighbors(i))
        factors = tuple("X" if j == i else ("Z" if j in nbrs else "I")
                        for j in range(1, g.v + 1))
        gens.append(PauliString(1, factors))
    return tuple(gens)


def min_stabilizer_weight(g: GraphSpec) -> int:
    """Smallest support among the 2^v - 1 nonidentity stabilizer elements.

    The product over a generator subset S has X-part S and Z-part the XOR
    of the adjacency rows of S, so the support mask is their union; signs
    do not move the support.  Subsets are walked in Gray-code order to
    update the Z-part one row at a time.
    """
    if g.v > 24:
        raise CapacityError(f"2^{g.v} stabilizer elements is out of reach")
    # vertex with matrix row r sits at mask bit v - 1 - r, like state bits
    rows = [int("".join(str(b) for b in g.adj[i]), 2) for i in range(g.v)]
    best = g.v + 1
    zpart = 0
    prev_gray = 0
    for s in range(1, 1 << g.v):
        gray = s ^ (s >> 1)
        flipped = gray ^ prev_gray  # exactly one bit
        zpart ^= rows[g.v - flipped.bit_length()]
        prev_gray = gray
        w = (gray | zpart).bit_count()
        if w < best:
            best = w
    return best


def graph_reduced_density(g: GraphSpec, w) -> DensityMatrix:
    """Reduced density matrix of a graph state on the kept vertex subset w.

    In the standard basis of the kept block,
        <x| rho |y> = (-1)^(a(x) + a(y)) 2^(-|w|) [A_bw (x xor y) = 0]
    with a the edge quadratic form inside w and A_bw the block from the
    dropped set to w.  Entries are grouped by the syndrome A_bw x rather
    than testing every (x, y) pair; this must agree with the partial-trace
    path through the state vector.
    """
    keep_axes = parties_to_axes(w, g.v)
    if len(keep_axes) >= g.v:
        raise ValidationError("subset must leave at least one vertex out")
    if len(keep_axes) > 14:
        raise CapacityError(f"kept block of {len(keep_axes)} vertices is out of reach")
    k = len(keep_axes)
    size = 1 << k
    x = np.arange(size)
    bits = np.stack([((x >> (k - 1 - t)) & 1) for t in range(k)], axis=1).astype(np.uint8)

    a_ww = np.zeros(size, dtype=np.uint8)
    for s in range(k):
        for t in range(s + 1, k):
            if g.adj[keep_axes[s], keep_axes[t]]:
                a_ww ^= bits[:, s] & bits[:, t]
    d = np.where(a_ww, -1.0, 1.0)

    drop_axes = [a for a in range(g.v) if a not in set(keep_axes)]
    block = g.adj[np.ix_(drop_axes, keep_axes)]
    synd = (bits @ block.T) % 2
    same = np.all(synd[:, None, :] == synd[None, :, :], axis=2)
    mat = (d[:, None] * d[None, :]) * same / size
    return DensityMatrix(size, mat.astype(np.complex128))

"""Minimization of the measurement-outcome Shannon entropy over product bases.

The objective for fixed bases is the entropy of |<j1..jn|Psi>|^2 over all
joint outcomes.  The search alternates over parties: with every other basis
frozen, the state contracts to a d x (d^(n-1)) matrix M and party i's
entropy is that of |u_i^dag M|^2 row by row, so single-party moves are cheap
to probe.  Moves are two-column plane rotations (the exponentials of the
elementary Hermitian generators; per-column phases drop out of the
objective), scored by value only with a parabolic refinement step.

Upper bounds come from the search; rigorous lower bounds from subset von
Neumann entropies.  The product-overlap bound is heuristic unless the found
overlap is corroborated by an analytic value.
"""

from __future__ import annotations

import itertools
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import EntminError, ValidationError
from .hilbert import (
    ProductBasis,
    PureState,
    outcome_distribution,
    partial_trace,
    schmidt_decompose,
    shannon_entropy,
    von_neumann_entropy,
)

AGREE_TOL = 1e-6
THREADS_VAR = "ENTMIN_THREADS"


@dataclass(frozen=True)
class OptConfig:
    restarts: int = 24
    max_sweeps: int = 200
    tol: float = 1e-10
    seed: int = 7
    per_party_steps: int = 2

    def __post_init__(self):
        if self.restarts < 1:
            raise ValidationError(f"restarts = {self.restarts} must be >= 1")
        if self.tol <= 0:
            raise ValidationError(f"tol = {self.tol} must be positive")
        if self.max_sweeps < 1 or self.per_party_steps < 1:
            raise ValidationError("max_sweeps and per_party_steps must be >= 1")


@dataclass(frozen=True, eq=False)
class OptResult:
    s_upper: float
    basis: ProductBasis
    s_lower: float
    lower_bound_witness: str
    converged: bool
    restarts_agreeing: int
    seed: int

    def __post_init__(self):
        if self.s_lower > self.s_upper + 1e-9:
            raise EntminError(
                f"lower bound {self.s_lower} exceeds upper bound {self.s_upper}")
        cap = self.basis.n * math.log2(self.basis.d)
        if not -1e-9 <= self.s_upper <= cap + 1e-9:
            raise EntminError(f"s_upper = {self.s_upper} outside [0, {cap}]")


def _plogp_rows(p: np.ndarray) -> np.ndarray:
    """Entropy in bits along the last axis of a stack of probability rows."""
    return -np.sum(p * np.log2(np.maximum(p, 1e-300)), axis=-1)


def _row_entropy(q: np.ndarray) -> float:
    return float(_plogp_rows(np.abs(q) ** 2))


def _apply_unitary_axis(t: np.ndarray, u: np.ndarray, axis: int) -> np.ndarray:
    out = np.tensordot(u.conj().T, t, axes=([1], [axis]))
    return np.moveaxis(out, 0, axis)


def _contract_except(t: np.ndarray, us, skip: int) -> np.ndarray:
    """Contract every party's basis except one; rows = that party's raw axis."""
    cur = t
    for axis in range(t.ndim):
        if axis != skip:
            cur = _apply_unitary_axis(cur, us[axis], axis)
    d = t.shape[skip]
    return np.moveaxis(cur, skip, 0).reshape(d, -1)


def entropy_for_bases(psi: PureState, b: ProductBasis) -> float:
    """Outcome entropy of measuring psi in the product basis b."""
    if (psi.n, psi.d) != (b.n, b.d):
        raise ValidationError(f"state ({psi.n},{psi.d}) vs basis ({b.n},{b.d})")
    return shannon_entropy(outcome_distribution(psi, b))


def _rotated_rows(qa, qb, theta: float, kind: str):
    c = math.cos(theta)
    s = math.sin(theta)
    if kind == "sym":
        return c * qa - 1j * s * qb, -1j * s * qa + c * qb
    return c * qa + s * qb, -s * qa + c * qb


def _rotate_columns(u: np.ndarray, a: int, b: int, theta: float, kind: str) -> None:
    c = math.cos(theta)
    s = math.sin(theta)
    ca = u[:, a].copy()
    cb = u[:, b].copy()
    if kind == "sym":
        u[:, a] = c * ca + 1j * s * cb
        u[:, b] = 1j * s * ca + c * cb
    else:
        u[:, a] = c * ca + s * cb
        u[:, b] = -s * ca + c * cb


def _optimize_party(u: np.ndarray, m: np.ndarray, passes: int, step: float):
    """Coordinate descent over plane rotations of one party's basis columns.

    A rotation in the (a, b) column plane changes only outcome rows a and b,
    and their probabilities have a closed form in p_a, p_b and one cross
    vector, so probes run on real arrays without rebuilding amplitudes:
      p_a(theta) = cos^2 p_a + sin^2 p_b + 2 sin cos * cr
      p_b(theta) = p_a + p_b - p_a(theta)
    with cr = -Im(q_a conj(q_b)) for the phased rotation and +Re for the
    real one.
    """
    d = u.shape[0]
    q = u.conj().T @ m
    p = np.abs(q) ** 2
    h = _plogp_rows(p)
    c = math.cos(step)
    s = math.sin(step)
    c2, s2, tcs = c * c, s * s, 2.0 * c * s
    for _ in range(passes):
        improved = False
        for a, b in itertools.combinations(range(d), 2):
            cross = q[a] * q[b].conj()
            sum_ab = p[a] + p[b]
            for kind in ("sym", "asym"):
                cr = -cross.imag if kind == "sym" else cross.real
                f0 = h[a] + h[b]
                base = c2 * p[a] + s2 * p[b]
                shift = tcs * cr
                pa_p = base + shift
                pa_m = base - shift
                hh = _plogp_rows(np.stack((pa_p, sum_ab - pa_p,
                                           pa_m, sum_ab - pa_m)))
                cands = [(hh[0] + hh[1], step, hh[0], hh[1]),
                         (hh[2] + hh[3], -step, hh[2], hh[3])]
                curv = cands[0][0] - 2.0 * f0 + cands[1][0]
                if curv > 1e-15:
                    theta = 0.5 * step * (cands[1][0] - cands[0][0]) / curv
                    theta = max(-2.0 * step, min(2.0 * step, theta))
                    if abs(theta) > 1e-12:
                        cf = math.cos(theta)
                        sf = math.sin(theta)
                        pa_r = (cf * cf) * p[a] + (sf * sf) * p[b] \
                            + (2.0 * cf * sf) * cr
                        hr = _plogp_rows(np.stack((pa_r, sum_ab - pa_r)))
                        cands.append((hr[0] + hr[1], theta, hr[0], hr[1]))
                f_best, t_best, ha_new, hb_new = min(
                    cands, key=lambda cc: (cc[0], abs(cc[1])))
                if f_best < f0 - 1e-14:
                    q[a], q[b] = _rotated_rows(q[a], q[b], t_best, kind)
                    _rotate_columns(u, a, b, t_best, kind)
                    p[a] = np.abs(q[a]) ** 2
                    p[b] = np.abs(q[b]) ** 2
                    h[a] = ha_new
                    h[b] = hb_new
                    cross = q[a] * q[b].conj()
                    sum_ab = p[a] + p[b]
                    improved = True
        if not improved:
            break
    return u, float(h.sum())


def _haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def _marginal_eigenbases(psi: PureState) -> list:
    us = []
    for party in range(1, psi.n + 1):
        rho = partial_trace(psi, (party,))
        _, vec = np.linalg.eigh(rho.mat)
        us.append(vec.astype(np.complex128))
    return us


def _initial_bases(psi: PureState, restart: int, seed: int) -> list:
    if restart == 0:
        return [np.eye(psi.d, dtype=np.complex128) for _ in range(psi.n)]
    if restart == 1:
        return _marginal_eigenbases(psi)
    rng = np.random.default_rng([seed, 1, restart])
    return [_haar_unitary(psi.d, rng) for _ in range(psi.n)]


def _run_restart(psi: PureState, restart: int, cfg: OptConfig):
    t = psi.tensor()
    us = _initial_bases(psi, restart, cfg.seed)
    step = 0.6
    m = _contract_except(t, us, 0)
    h_cur = float(sum(_row_entropy((us[0].conj().T @ m)[j]) for j in range(psi.d)))
    converged = False
    stalls = 0
    for _ in range(cfg.max_sweeps):
        h_before = h_cur
        for axis in range(psi.n):
            m = _contract_except(t, us, axis)
            us[axis], h_cur = _optimize_party(us[axis].copy(), m, cfg.per_party_steps, step)
        if h_before - h_cur < cfg.tol:
            # parabolic probes already refine below the step scale, so a
            # couple of shrink-and-retry rounds is enough to call it done
            stalls += 1
            if stalls >= 3:
                converged = True
                break
            step *= 0.15
        else:
            stalls = 0
    return h_cur, us, converged


def _canonical_basis(psi_n: int, d: int, us) -> ProductBasis:
    """Fix per-column phases and column order for reproducible witnesses."""
    fixed = []
    for u in us:
        cols = []
        for j in range(d):
            col = u[:, j].copy()
            k = int(np.argmax(np.abs(col)))
            ph = col[k]
            col = col * (ph.conjugate() / abs(ph))
            first = int(np.flatnonzero(np.abs(col) > 1e-8)[0])
            key = (first,) + tuple(
                (round(float(z.real), 8), round(float(z.imag), 8)) for z in col)
            cols.append((key, col))
        cols.sort(key=lambda kc: kc[0])
        fixed.append(np.stack([c for _, c in cols], axis=1))
    return ProductBasis(psi_n, d, tuple(fixed))


def subset_lower_bound(psi: PureState, x) -> float:
    """Von Neumann entropy of the reduced state on a party subset x."""
    rho = partial_trace(psi, x)
    if rho.dim >= psi.dim:
        raise ValidationError("subset must be proper")
    return von_neumann_entropy(rho)


def best_subset_lower_bound(psi: PureState):
    """Maximize the subset bound over subsets of size <= floor(n/2).

    Complementary subsets share a spectrum, so half sizes suffice.  Returns
    (value, witness subset); the first maximizer in size-then-lexicographic
    order wins.
    """
    best = 0.0
    witness = ()
    for size in range(1, psi.n // 2 + 1):
        for x in itertools.combinations(range(1, psi.n + 1), size):
            val = subset_lower_bound(psi, x)
            if val > best + 1e-12:
                best = val
                witness = x
    return best, witness


def bipartite_exact(psi: PureState):
    """Exact two-party answer: Schmidt entropy and the diagonalizing bases."""
    if psi.n != 2:
        raise ValidationError(f"need exactly 2 parties, got {psi.n}")
    sd = schmidt_decompose(psi)
    value = shannon_entropy(sd.coeffs)
    basis = ProductBasis(2, psi.d, (sd.left_basis, sd.right_basis))
    check = entropy_for_bases(psi, basis)
    if abs(check - value) > 1e-10:
        raise EntminError(f"schmidt bases reproduce {check}, expected {value}")
    return value, basis


def max_product_overlap(psi: PureState, cfg: OptConfig = OptConfig(),
                        extra_seeds=None) -> float:
    """Best found |<Psi|phi_1 .. phi_n>|^2 over unit product vectors.

    Alternating exact updates: with the other factors fixed, the optimal
    phi_i is the normalized partial contraction, so sweeps are monotone.
    Restart 0 starts from the largest-amplitude basis string; extra_seeds
    adds caller-supplied starting product vectors.  The result is an
    empirical maximum: treat -log2 of it as heuristic unless corroborated.
    """
    t = psi.tensor()
    n, d = psi.n, psi.d

    def argmax_seed():
        j = int(np.argmax(np.abs(psi.amp)))
        digits = np.unravel_index(j, t.shape)
        vecs = []
        for i in range(n):
            e = np.zeros(d, dtype=np.complex128)
            e[digits[i]] = 1.0
            vecs.append(e)
        return vecs

    def run(vecs):
        vecs = [v.astype(np.complex128) / np.linalg.norm(v) for v in vecs]
        f_cur = 0.0
        for _ in range(cfg.max_sweeps):
            f_prev = f_cur
            for i in range(n):
                cur = t
                for axis in range(n - 1, -1, -1):
                    if axis != i:
                        cur = np.tensordot(cur, vecs[axis].conj(), axes=([axis], [0]))
                norm = float(np.linalg.norm(cur))
                if norm > 1e-15:
                    vecs[i] = cur / norm
                f_cur = norm**2
            if f_cur - f_prev < cfg.tol:
                break
        return f_cur

    starts = [argmax_seed()]
    for r in range(1, cfg.restarts):
        rng = np.random.default_rng([cfg.seed, 2, r])
        z = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
        starts.append([z[i] for i in range(n)])
    for seed_vec in extra_seeds or []:
        starts.append(list(seed_vec))
    return max(run(v) for v in starts)


def minimize_entropy(psi: PureState, cfg: OptConfig = OptConfig(),
                     include_overlap_bound: bool = False) -> OptResult:
    """Multi-restart alternating minimization of the outcome entropy.

    Restart 0 starts from identity bases, restart 1 from the marginal
    eigenbases (exact for two parties), the rest from seeded Haar draws.
    Deterministic given cfg.seed regardless of thread scheduling; set the
    ENTMIN_THREADS environment variable to run restarts concurrently.
    """
    threads = int(os.environ.get(THREADS_VAR, "1") or "1")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            runs = list(pool.map(lambda r: _run_restart(psi, r, cfg), range(cfg.restarts)))
    else:
        runs = [_run_restart(psi, r, cfg) for r in range(cfg.restarts)]

    best_idx = min(range(len(runs)), key=lambda r: (runs[r][0], r))
    h_best, us_best, converged = runs[best_idx]
    agreeing = sum(1 for h, _, _ in runs if h - h_best <= AGREE_TOL)

    basis = _canonical_basis(psi.n, psi.d, us_best)
    s_upper = entropy_for_bases(psi, basis)

    s_lower, subset = best_subset_lower_bound(psi)
    witness = f"subset {subset}" if subset else "none"
    if include_overlap_bound:
        p = outcome_distribution(psi, basis)
        j = int(np.argmax(p))
        digits = np.unravel_index(j, (psi.d,) * psi.n)
        seed_vecs = [tuple(basis.u[i][:, digits[i]] for i in range(psi.n))]
        m_star = max_product_overlap(psi, cfg, extra_seeds=seed_vecs)
        ov_bound = -math.log2(max(m_star, 1e-300))
        if ov_bound > s_lower:
            s_lower = ov_bound
            witness = f"product-overlap (heuristic), overlap {m_star:.12g}"
    return OptResult(s_upper, basis, s_lower, witness,
                     converged, agreeing, cfg.seed)


def result_to_dict(res: OptResult) -> dict:
    """JSON-ready dict; basis as per-party [re, im] matrices, row-major."""
    basis = [[[[float(z.real), float(z.imag)] for z in row] for row in u]
             for u in res.basis.u]
    return {
        "s_upper": res.s_upper,
        "s_lower": res.s_lower,
        "lower_bound_witness": res.lower_bound_witness,
        "basis": basis,
        "converged": res.converged,
        "restarts_agreeing": res.restarts_agreeing,
        "seed": res.seed,
    }


def result_to_json(res: OptResult) -> str:
    return json.dumps(result_to_dict(res), indent=2)

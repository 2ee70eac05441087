"""Metropolis sampling of domain-wall configurations by local corner flips.

State is kept as two edge arrays rather than vertex types:

    h[i, j]  horizontal edge left of vertex (i, j), j = 0..N
             (j = 0 is the thick left boundary, j = N the thin right one)
    v[i, j]  vertical edge above vertex (i, j), i = 0..N
             (i = 0 is the thick top boundary, i = N the thin bottom one)

A move targets one of the (N-1)^2 interior plaquettes.  The flip toggles the
four edges around the plaquette; starting from a valid configuration this
preserves the ice rule exactly when the four edge states are north = west,
east = south, north != east, i.e. when a thick line turns a corner at the
plaquette's NW vertex or at its SE vertex.  The flip moves that corner to
the opposite vertex.  Acceptance is Metropolis, min(1, ratio), with the
ratio the exact product of the four touched vertex weights after versus
before, so detailed balance holds move by move.  Every accepted move keeps
the configuration in the domain-wall ensemble; reachability of the whole
ensemble from any state is the standard height-function argument and is
checked exhaustively for small N in the test suite.

One sweep runs N^2 proposal slots; each slot holds with probability 1/2
(lazy Metropolis, which keeps the chain aperiodic even when every flip is
forced, as happens at a = b on a lattice with a single plaquette) and
otherwise proposes at a uniformly random plaquette.  Randomness comes from
a splitmix64 stream, so a chain is a pure function of (seed, initial
state): runs are reproducible bit for bit.  Chains with distinct seeds are
independent and may run concurrently; a single chain is strictly
sequential.

The hot loops are JIT-compiled with numba; expect a few seconds of one-time
compilation on first use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numba import njit

from .enumeration import Configuration
from .model import EDGES_BY_TYPE, VertexWeights

#: vertex type indexed by the edge code t*8 + b*4 + l*2 + r; 0 marks an
#: ice-rule violation
_TYPE_OF_CODE = np.zeros(16, dtype=np.int64)
for _t, (_top, _bot, _lft, _rgt) in EDGES_BY_TYPE.items():
    _TYPE_OF_CODE[_top * 8 + _bot * 4 + _lft * 2 + _rgt] = _t

_INV_2_53 = 1.0 / 9007199254740992.0


@njit(cache=True)
def _mix64(state):
    """splitmix64: advance the counter and hash it to one 64-bit output."""
    state = state + np.uint64(0x9E3779B97F4A7C15)
    z = state
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    z = z ^ (z >> np.uint64(31))
    return state, z


@njit(cache=True)
def _vertex_type(h, v, i, j):
    return _TYPE_OF_CODE[v[i, j] * 8 + v[i + 1, j] * 4 + h[i, j] * 2 + h[i, j + 1]]


@njit(cache=True)
def _try_flip(h, v, wt, counts, i, j, u):
    """Propose the corner flip at plaquette (i, j); returns 1 on acceptance.

    Illegal plaquettes leave the state untouched.  ``u`` is the uniform
    variate compared against the exact local weight ratio.
    """
    north = h[i, j + 1]
    south = h[i + 1, j + 1]
    west = v[i + 1, j]
    east = v[i + 1, j + 1]
    if north != west or east != south or north == east:
        return 0
    t00 = _vertex_type(h, v, i, j)
    t01 = _vertex_type(h, v, i, j + 1)
    t10 = _vertex_type(h, v, i + 1, j)
    t11 = _vertex_type(h, v, i + 1, j + 1)
    h[i, j + 1] = 1 - north
    h[i + 1, j + 1] = 1 - south
    v[i + 1, j] = 1 - west
    v[i + 1, j + 1] = 1 - east
    n00 = _vertex_type(h, v, i, j)
    n01 = _vertex_type(h, v, i, j + 1)
    n10 = _vertex_type(h, v, i + 1, j)
    n11 = _vertex_type(h, v, i + 1, j + 1)
    ratio = (wt[n00] * wt[n01] * wt[n10] * wt[n11]) / (wt[t00] * wt[t01] * wt[t10] * wt[t11])
    if u < ratio:
        counts[t00] -= 1
        counts[t01] -= 1
        counts[t10] -= 1
        counts[t11] -= 1
        counts[n00] += 1
        counts[n01] += 1
        counts[n10] += 1
        counts[n11] += 1
        return 1
    h[i, j + 1] = north
    h[i + 1, j + 1] = south
    v[i + 1, j] = west
    v[i + 1, j + 1] = east
    return 0


@njit(cache=True)
def _sweep_once(h, v, wt, counts, state, n):
    state = np.uint64(state)  # signed dispatch would corrupt the bit mixer
    # Lazy Metropolis: each of the N^2 proposal slots flips a fair coin and
    # on heads proposes at a uniformly random plaquette.  The holding
    # probability makes the chain aperiodic even in the degenerate cases
    # (a single plaquette with acceptance 1 alternates with period 2
    # otherwise, e.g. N = 2 at equal a and b weights).
    nf = (n - 1) * (n - 1)
    if nf == 0:
        return state
    for _ in range(n * n):
        state, z1 = _mix64(state)
        state, z2 = _mix64(state)
        if z1 & np.uint64(1):
            continue
        face = int((z1 >> np.uint64(1)) % np.uint64(nf))
        u = float(z2 >> np.uint64(11)) * _INV_2_53
        _try_flip(h, v, wt, counts, face // (n - 1), face % (n - 1), u)
    return state


@njit(cache=True)
def _run_sweeps(h, v, wt, counts, n_sweeps, state):
    state = np.uint64(state)
    n = h.shape[0]
    for _ in range(n_sweeps):
        state = _sweep_once(h, v, wt, counts, state, n)
    return state


@njit(cache=True)
def _run_sweeps_tables(h, v, wt, counts, n_sweeps, state, run_acc, edge_acc, counts_log):
    state = np.uint64(state)
    n = h.shape[0]
    log = counts_log.shape[0] > 0
    for sweep in range(n_sweeps):
        state = _sweep_once(h, v, wt, counts, state, n)
        for r in range(1, n + 1):
            col = n - r
            run = 0
            broken = False
            for i in range(n):
                e = h[i, col]
                edge_acc[r, i] += e
                if not broken:
                    if e == 1:
                        run += 1
                    else:
                        broken = True
            run_acc[r, run] += 1
        if log:
            for t in range(1, 7):
                counts_log[sweep, t - 1] = counts[t]
    return state


@njit(cache=True)
def _run_sweeps_indicator(h, v, wt, counts, n_sweeps, state, col, depth, out):
    state = np.uint64(state)
    n = h.shape[0]
    for sweep in range(n_sweeps):
        state = _sweep_once(h, v, wt, counts, state, n)
        hit = 1
        for i in range(depth):
            if h[i, col] == 0:
                hit = 0
                break
        out[sweep] = hit
    return state


@njit(cache=True)
def _run_sweeps_codes(h, v, wt, counts, n_sweeps, state, codes):
    state = np.uint64(state)
    n = h.shape[0]
    for sweep in range(n_sweeps):
        state = _sweep_once(h, v, wt, counts, state, n)
        code = np.uint64(0)
        for i in range(n):
            for j in range(n):
                code = (code << np.uint64(3)) | np.uint64(_vertex_type(h, v, i, j))
        codes[sweep] = code
    return state


@dataclass
class MarkovState:
    """A point of the chain: edge arrays, cached type counts, RNG position."""

    n: int
    h: np.ndarray
    v: np.ndarray
    counts: np.ndarray
    rng_state: int
    seed: int

    def type_grid(self) -> np.ndarray:
        grid = np.zeros((self.n, self.n), dtype=np.int64)
        for i in range(self.n):
            for j in range(self.n):
                grid[i, j] = _TYPE_OF_CODE[
                    self.v[i, j] * 8 + self.v[i + 1, j] * 4 + self.h[i, j] * 2 + self.h[i, j + 1]
                ]
        return grid


def _weight_vector(w: VertexWeights) -> np.ndarray:
    return np.array([0.0, w.a, w.a, w.b, w.b, w.c, w.c])


def edges_from_types(grid) -> tuple:
    """Edge arrays (h, v) of a type grid; raises on any inconsistency."""
    grid = np.asarray(grid)
    n = grid.shape[0]
    h = np.zeros((n, n + 1), dtype=np.uint8)
    v = np.zeros((n + 1, n), dtype=np.uint8)
    h[:, 0] = 1
    v[0, :] = 1
    for i in range(n):
        for j in range(n):
            top, bottom, left, right = EDGES_BY_TYPE[int(grid[i, j])]
            if v[i, j] != top or h[i, j] != left:
                raise ValueError(f"type grid inconsistent at vertex ({i}, {j})")
            v[i + 1, j] = bottom
            h[i, j + 1] = right
    if h[:, n].any() or v[n, :].any():
        raise ValueError("type grid violates the right or bottom boundary")
    return h, v


def init_extremal(n: int, which: str = "upper", seed: int = 0) -> MarkovState:
    """One of the two extremal domain-wall states.

    "upper": every line turns as early as possible, so the lines crowd the
    top-left corner (crossings above the antidiagonal, empty below).
    "lower": every line is maximally extended, running all the way down and
    then all the way left (the staircase along the main diagonal).
    """
    if n < 1:
        raise ValueError(f"lattice size must be >= 1, got {n}")
    grid = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            if which == "upper":
                grid[i, j] = 2 if i + j < n - 1 else (6 if i + j == n - 1 else 1)
            elif which == "lower":
                grid[i, j] = 3 if i < j else (6 if i == j else 4)
            else:
                raise ValueError(f"unknown extremal state {which!r}")
    h, v = edges_from_types(grid)
    counts = np.bincount(grid.ravel(), minlength=7).astype(np.int64)
    return MarkovState(n=n, h=h, v=v, counts=counts, rng_state=int(np.uint64(seed)), seed=seed)


def sweep(state: MarkovState, w: VertexWeights, n_sweeps: int = 1) -> MarkovState:
    """Advance the chain by ``n_sweeps`` sweeps of N^2 proposals, in place."""
    if n_sweeps < 0:
        raise ValueError(f"sweep count must be >= 0, got {n_sweeps}")
    new_state = _run_sweeps(
        state.h, state.v, _weight_vector(w), state.counts, n_sweeps, np.uint64(state.rng_state)
    )
    state.rng_state = int(new_state)
    return state


def propose(state: MarkovState, face_i: int, face_j: int, u: float, w: VertexWeights) -> bool:
    """Single proposal at plaquette (face_i, face_j) with uniform variate u.

    Exposed for direct testing of the flip rule; does not touch the RNG.
    """
    if not (0 <= face_i < state.n - 1 and 0 <= face_j < state.n - 1):
        raise ValueError(f"plaquette ({face_i}, {face_j}) out of range for N={state.n}")
    accepted = _try_flip(state.h, state.v, _weight_vector(w), state.counts, face_i, face_j, u)
    return bool(accepted)


def to_configuration(state: MarkovState) -> Configuration:
    """Snapshot of the current state as an immutable Configuration."""
    grid = state.type_grid()
    return Configuration(state.n, tuple(tuple(int(t) for t in row) for row in grid))


def default_burn_in(n: int) -> int:
    """Default burn-in, 10 N sweeps; override freely for large lattices."""
    return 10 * n


class EfpEstimate(NamedTuple):
    mean: float
    stderr: float
    samples: int


def estimate_efp(
    n: int,
    r: int,
    s: int,
    w: VertexWeights,
    sweeps: int,
    burn_in: int | None = None,
    seed: int = 0,
    which: str = "upper",
    batches: int = 50,
) -> EfpEstimate:
    """Monte Carlo estimate of F(r, s) with a batch-means standard error.

    ``sweeps`` is the total chain length; the first ``burn_in`` sweeps
    (default 10 N) are discarded and one indicator sample is taken per
    remaining sweep.  Batch means absorb the autocorrelation of consecutive
    sweeps into the quoted error.  Deterministic cases (boundary cuts and
    depths exceeding the line count at the cut) return exactly, without
    consuming randomness.
    """
    if not 0 <= r <= n:
        raise ValueError(f"cut index {r} out of range 0..{n}")
    if not 1 <= s <= n:
        raise ValueError(f"depth {s} out of range 1..{n}")
    burn = default_burn_in(n) if burn_in is None else burn_in
    if not 0 <= burn < sweeps:
        raise ValueError(f"need 0 <= burn_in < sweeps, got {burn} vs {sweeps}")
    if r == n:
        return EfpEstimate(1.0, 0.0, sweeps - burn)
    if s > r:
        # line conservation: the indicator vanishes in every configuration
        return EfpEstimate(0.0, 0.0, sweeps - burn)
    state = init_extremal(n, which, seed)
    wt = _weight_vector(w)
    rng = _run_sweeps(state.h, state.v, wt, state.counts, burn, np.uint64(state.rng_state))
    out = np.zeros(sweeps - burn, dtype=np.uint8)
    rng = _run_sweeps_indicator(state.h, state.v, wt, state.counts, sweeps - burn, np.uint64(rng), n - r, s, out)
    state.rng_state = int(rng)
    mean = float(out.mean())
    n_batches = max(2, min(batches, out.size))
    size = out.size // n_batches
    batch_means = out[: n_batches * size].reshape(n_batches, size).mean(axis=1)
    stderr = float(batch_means.std(ddof=1) / math.sqrt(n_batches))
    return EfpEstimate(mean, stderr, out.size)


class McTable(NamedTuple):
    efp: np.ndarray        # (n+1, n+1): empirical F(r, s)
    edge_freq: np.ndarray  # (n+1, n): thick frequency of row i at cut r
    counts_log: np.ndarray | None
    samples: int
    final_state: MarkovState


def sample_efp_table(
    n: int,
    w: VertexWeights,
    sweeps: int,
    burn_in: int | None = None,
    seed: int = 0,
    which: str = "upper",
    log_counts: bool = False,
) -> McTable:
    """Empirical F(r, s) for all (r, s) plus per-edge thick frequencies.

    One sample per post-burn-in sweep.  With ``log_counts`` the per-sweep
    vertex-type counts n1..n6 are recorded as well (one row per sweep).
    """
    burn = default_burn_in(n) if burn_in is None else burn_in
    if not 0 <= burn < sweeps:
        raise ValueError(f"need 0 <= burn_in < sweeps, got {burn} vs {sweeps}")
    state = init_extremal(n, which, seed)
    wt = _weight_vector(w)
    rng = _run_sweeps(state.h, state.v, wt, state.counts, burn, np.uint64(state.rng_state))
    measure = sweeps - burn
    run_acc = np.zeros((n + 1, n + 1), dtype=np.int64)
    edge_acc = np.zeros((n + 1, n), dtype=np.int64)
    counts_log = np.zeros((measure if log_counts else 0, 6), dtype=np.int64)
    rng = _run_sweeps_tables(
        state.h, state.v, wt, state.counts, measure, np.uint64(rng), run_acc, edge_acc, counts_log
    )
    state.rng_state = int(rng)
    efp = np.zeros((n + 1, n + 1))
    efp[:, 0] = 1.0
    for r in range(1, n + 1):
        tail = 0
        for run in range(n, 0, -1):
            tail += run_acc[r, run]
            efp[r, run] = tail / measure
    efp[n, 1:] = 1.0
    edge_freq = edge_acc / measure
    edge_freq[n, :] = 1.0
    return McTable(efp, edge_freq, counts_log if log_counts else None, measure, state)


def config_code_series(
    n: int,
    w: VertexWeights,
    sweeps: int,
    burn_in: int | None = None,
    seed: int = 0,
    which: str = "upper",
) -> np.ndarray:
    """Per-sweep configuration codes (one uint64 per post-burn-in sweep).

    The encoding packs the N^2 vertex types at 3 bits each, which limits
    this to N <= 4; ``encode_types`` maps exact enumeration output onto the
    same keys.
    """
    if n > 4:
        raise ValueError("configuration code tracking is limited to N <= 4")
    burn = default_burn_in(n) if burn_in is None else burn_in
    if not 0 <= burn < sweeps:
        raise ValueError(f"need 0 <= burn_in < sweeps, got {burn} vs {sweeps}")
    state = init_extremal(n, which, seed)
    wt = _weight_vector(w)
    rng = _run_sweeps(state.h, state.v, wt, state.counts, burn, np.uint64(state.rng_state))
    codes = np.zeros(sweeps - burn, dtype=np.uint64)
    rng = _run_sweeps_codes(state.h, state.v, wt, state.counts, sweeps - burn, np.uint64(rng), codes)
    state.rng_state = int(rng)
    return codes


def config_histogram(
    n: int,
    w: VertexWeights,
    sweeps: int,
    burn_in: int | None = None,
    seed: int = 0,
    which: str = "upper",
) -> dict:
    """Visit counts per configuration, keyed by encoded type grid (N <= 4)."""
    codes = config_code_series(n, w, sweeps, burn_in, seed, which)
    values, counts = np.unique(codes, return_counts=True)
    return {int(code): int(count) for code, count in zip(values, counts)}


def encode_types(grid) -> int:
    """Pack a type grid into the integer key used by ``config_histogram``."""
    code = 0
    for row in grid:
        for t in row:
            code = (code << 3) | int(t)
    return code

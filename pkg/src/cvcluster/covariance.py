"""Numeric Gaussian-state engine: means, covariances, homodyne, witnesses.

States are Gaussian, stored as a mean vector and covariance matrix in
``(X_1, Y_1, ..., X_n, Y_n)`` order with vacuum variance 1/2 per quadrature
(``[X, Y] = i``).  All operations are pure: they return new states.

This engine is deliberately independent of :mod:`cvcluster.ledger`: the two
are cross-checked against each other by the test- and claims-suites, so the
covariance path must not share the symbolic bookkeeping.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gates
from .errors import (
    InternalConsistencyError,
    InvalidSizeError,
    SelfInteractionError,
    SingularMeasurementError,
)
from .gates import Beamsplit, Kerr, Rotate, Squeeze, X, Y

# A homodyne on a quadrature with variance at or below this is rejected.
SINGULAR_TOL = 1e-15
# Allowed violation of the uncertainty relation V + i*Omega/2 >= 0.
UNCERTAINTY_TOL = 1e-9


@dataclass(frozen=True)
class GaussianState:
    """Gaussian state of ``n`` modes: mean (2n,) and covariance (2n, 2n)."""

    n: int
    mean: np.ndarray
    cov: np.ndarray

    def copy(self) -> "GaussianState":
        return GaussianState(self.n, self.mean.copy(), self.cov.copy())


@dataclass(frozen=True)
class HomodyneResult:
    """Outcome of measuring one quadrature and dropping the measured mode.

    ``index_map`` maps surviving old mode numbers to their new 1-based
    positions in the shrunken state.
    """

    state: GaussianState
    outcome: float
    prior_mean: float
    prior_var: float
    index_map: dict[int, int]


def quad_index(mode: int, kind: str) -> int:
    """Flat index of a quadrature in (X_1, Y_1, ..., X_n, Y_n) order."""
    return 2 * (mode - 1) + (0 if kind == X else 1)


def vacuum_state(n: int) -> GaussianState:
    if not isinstance(n, int) or n < 1:
        raise InvalidSizeError(f"state needs at least one mode, got {n!r}")
    return GaussianState(n, np.zeros(2 * n), 0.5 * np.eye(2 * n))


# ---------------------------------------------------------------------------
# Gates
# ---------------------------------------------------------------------------


def _gate_block(gate: gates.Gate, r: float | None) -> tuple[list[int], np.ndarray]:
    """Affected quadrature indices plus the small symplectic block acting on them."""
    if isinstance(gate, (Squeeze, Rotate)):
        mode = gate.mode
        small = gates.gate_matrix(type(gate)(1, *_tail(gate)), 1, r)
        idx = [quad_index(mode, X), quad_index(mode, Y)]
    elif isinstance(gate, (Kerr, Beamsplit)):
        small = gates.gate_matrix(type(gate)(1, 2, *_tail(gate)), 2, r)
        idx = [
            quad_index(gate.l, X),
            quad_index(gate.l, Y),
            quad_index(gate.k, X),
            quad_index(gate.k, Y),
        ]
    else:
        raise TypeError(f"not a gate: {gate!r}")
    if not gates.is_symplectic(small):
        raise InternalConsistencyError(f"gate block for {gate!r} is not symplectic")
    return idx, small


def _tail(gate) -> tuple:
    if isinstance(gate, Squeeze):
        return (gate.direction,)
    if isinstance(gate, Rotate):
        return (gate.theta,)
    if isinstance(gate, Kerr):
        return (gate.g,)
    if isinstance(gate, Beamsplit):
        return (gate.t,)
    return ()


def apply_gate(state: GaussianState, gate: gates.Gate, r: float | None = None) -> GaussianState:
    """Apply one gate; ``r`` supplies the numeric squeezing for Squeeze gates.

    The gate's symplectic block is validated (S Omega S^T = Omega to 1e-12)
    before it touches the state.  Only the affected rows/columns are updated,
    so building large states stays linear in n per gate.
    """
    for m in _gate_modes(gate):
        if not 1 <= m <= state.n:
            raise InvalidSizeError(f"gate touches mode {m} outside 1..{state.n}")
    idx, block = _gate_block(gate, r)
    mean = state.mean.copy()
    cov = state.cov.copy()
    mean[idx] = block @ mean[idx]
    cov[idx, :] = block @ cov[idx, :]
    cov[:, idx] = cov[:, idx] @ block.T
    return GaussianState(state.n, mean, cov)


def _gate_modes(gate: gates.Gate) -> tuple[int, ...]:
    if isinstance(gate, (Squeeze, Rotate)):
        return (gate.mode,)
    return (gate.l, gate.k)


def apply_tape(state: GaussianState, tape, r: float | None = None) -> GaussianState:
    """Apply a sequence of gates (e.g. a ledger register's ``history``)."""
    for gate in tape:
        state = apply_gate(state, gate, r)
    return state


# ---------------------------------------------------------------------------
# Measurement
# ---------------------------------------------------------------------------


def homodyne(
    state: GaussianState,
    mode: int,
    kind: str,
    outcome: float | None = None,
    seed: int | None = None,
) -> HomodyneResult:
    """Measure one quadrature; condition and drop the measured mode.

    The conditional covariance of the survivors is the Schur complement of
    the measured variance, ``A - b b^T / v``, and the conditional mean shifts
    by ``b (outcome - prior_mean) / v``.  When no outcome is supplied one is
    drawn from the prior marginal using ``numpy.random.default_rng(seed)``.
    """
    if not 1 <= mode <= state.n:
        raise InvalidSizeError(f"mode {mode} outside 1..{state.n}")
    if state.n == 1:
        raise InvalidSizeError("homodyne would leave an empty state")
    q = quad_index(mode, kind)
    v = float(state.cov[q, q])
    if v <= SINGULAR_TOL:
        raise SingularMeasurementError(
            f"quadrature ({mode}, {kind}) has variance {v:.3g}; nothing to measure"
        )
    prior_mean = float(state.mean[q])
    if outcome is None:
        rng = np.random.default_rng(seed)
        outcome = float(rng.normal(prior_mean, np.sqrt(v)))
    keep = [i for i in range(2 * state.n) if i not in (q ^ 1, q)]
    # note: q ^ 1 flips the last bit, i.e. the conjugate quadrature index
    b = state.cov[keep, q]
    cov = state.cov[np.ix_(keep, keep)] - np.outer(b, b) / v
    mean = state.mean[keep] + b * (outcome - prior_mean) / v
    index_map = {}
    new = 1
    for old in range(1, state.n + 1):
        if old != mode:
            index_map[old] = new
            new += 1
    return HomodyneResult(GaussianState(state.n - 1, mean, cov), outcome, prior_mean, v, index_map)


# ---------------------------------------------------------------------------
# Second-moment queries
# ---------------------------------------------------------------------------


def variance_of(state: GaussianState, combo) -> float:
    """Variance of a weighted quadrature combination.

    ``combo`` is an iterable of ``(coeff, mode, kind)``.  Repeated
    quadratures are accumulated before evaluation.
    """
    weights: dict[int, float] = {}
    for coeff, mode, kind in combo:
        qi = quad_index(mode, kind)
        weights[qi] = weights.get(qi, 0.0) + coeff
    idx = sorted(weights)
    w = np.array([weights[i] for i in idx])
    sub = state.cov[np.ix_(idx, idx)]
    return float(w @ sub @ w)


def mean_of(state: GaussianState, combo) -> float:
    return float(sum(c * state.mean[quad_index(m, k)] for c, m, k in combo))


def reduced_state(state: GaussianState, modes) -> GaussianState:
    """Trace out everything except ``modes`` (order given is kept)."""
    idx = [quad_index(m, k) for m in modes for k in (X, Y)]
    return GaussianState(len(modes), state.mean[idx].copy(), state.cov[np.ix_(idx, idx)].copy())


def symplectic_eigenvalues(cov: np.ndarray) -> np.ndarray:
    """Symplectic spectrum of a covariance matrix (each value once, ascending)."""
    n = cov.shape[0] // 2
    omega = gates.symplectic_form(n)
    evs = np.abs(np.linalg.eigvals(1j * omega @ cov))
    return np.sort(evs)[::2]


def ppt_min_symplectic_eig(state: GaussianState, pair: tuple[int, int]) -> float:
    """Minimum symplectic eigenvalue after partial transposition of a mode pair.

    Other modes are traced out first.  Values below the vacuum floor 1/2
    witness entanglement across the pair (sufficient for two modes).
    """
    i, j = pair
    if i == j:
        raise SelfInteractionError("pair must be two distinct modes")
    two = reduced_state(state, [i, j])
    flip = np.diag([1.0, 1.0, 1.0, -1.0])
    return float(symplectic_eigenvalues(flip @ two.cov @ flip)[0])


def duan_sum(state: GaussianState, pair: tuple[int, int], gains: tuple[float, float] = (1.0, 1.0)) -> float:
    """EPR-type variance sum Var(X_i + gx X_j) + Var(Y_i - gy Y_j).

    For any separable state this is bounded below by 2 at unit gains
    (vacuum units: 1/2 per quadrature); smaller values witness entanglement.
    """
    i, j = pair
    gx, gy = gains
    return variance_of(state, [(1.0, i, X), (gx, j, X)]) + variance_of(
        state, [(1.0, i, Y), (-gy, j, Y)]
    )


def uncertainty_defect(state: GaussianState) -> float:
    """Most negative eigenvalue of V + i*Omega/2 (>= -tol for physical states)."""
    omega = gates.symplectic_form(state.n)
    h = state.cov + 0.5j * omega
    return float(np.min(np.linalg.eigvalsh(h)))


def is_physical(state: GaussianState, tol: float = UNCERTAINTY_TOL) -> bool:
    return uncertainty_defect(state) >= -tol

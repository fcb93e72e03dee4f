"""Gate vocabulary shared by the symbolic ledger and the covariance engine.

Conventions (used project-wide):

* quadrature order is ``(X_1, Y_1, ..., X_n, Y_n)``;
* ``[X, Y] = i`` and the vacuum has variance 1/2 in each quadrature;
* ``rotate``: ``X' = cos(t) X + sin(t) Y``, ``Y' = -sin(t) X + cos(t) Y``;
* ``beamsplit`` with transmittance ``t`` and ``s = sqrt(t)``, ``c = sqrt(1-t)``:
  ``X_l' = s X_l + c X_k``, ``X_k' = c X_l - s X_k`` (same pattern for Y);
* the cross-Kerr style coupler adds ``g X`` of each partner to the other's Y
  and leaves both X untouched.

Mode indices are 1-based everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SelfInteractionError

# Squeezing directions.  "momentum" squeezes Y (X -> e^{+r} X, Y -> e^{-r} Y);
# "position" squeezes X (X -> e^{-r} X, Y -> e^{+r} Y).
MOMENTUM_SQUEEZED = "momentum"
POSITION_SQUEEZED = "position"

# Quadrature kinds.
X = "x"
Y = "y"


@dataclass(frozen=True)
class Squeeze:
    mode: int
    direction: str = MOMENTUM_SQUEEZED

    def __post_init__(self):
        if self.direction not in (MOMENTUM_SQUEEZED, POSITION_SQUEEZED):
            raise DomainError(f"unknown squeezing direction {self.direction!r}")


@dataclass(frozen=True)
class Kerr:
    """Quadrature coupler: Y_l += g X_k and Y_k += g X_l, X unchanged."""

    l: int
    k: int
    g: float = 1.0

    def __post_init__(self):
        if self.l == self.k:
            raise SelfInteractionError(f"kerr coupling mode {self.l} with itself")


@dataclass(frozen=True)
class Rotate:
    mode: int
    theta: float


@dataclass(frozen=True)
class Beamsplit:
    l: int
    k: int
    t: float = 0.5

    def __post_init__(self):
        if self.l == self.k:
            raise SelfInteractionError(f"beamsplitting mode {self.l} with itself")
        if not 0.0 <= self.t <= 1.0:
            raise DomainError(f"transmittance must lie in [0, 1], got {self.t}")


Gate = Squeeze | Kerr | Rotate | Beamsplit

# Tolerance for the symplectic-form check S @ Omega @ S.T == Omega.
SYMPLECTIC_TOL = 1e-12


def cos_sin(theta: float) -> tuple[float, float]:
    """cos/sin of ``theta`` with exact values at multiples of pi/2.

    Quarter turns are the workhorse rotation in every protocol here; snapping
    them to exact +-1/0 keeps ledger coefficients integral instead of leaving
    1e-17 debris that would survive pruning.
    """
    quarter = theta / (math.pi / 2.0)
    nearest = round(quarter)
    if abs(quarter - nearest) < 1e-12:
        c, s = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)][nearest % 4]
        return c, s
    return math.cos(theta), math.sin(theta)


def symplectic_form(n: int) -> np.ndarray:
    """Return the 2n x 2n symplectic form for (X_1, Y_1, ..., X_n, Y_n) order."""
    omega = np.array([[0.0, 1.0], [-1.0, 0.0]])
    return np.kron(np.eye(n), omega)


def gate_matrix(gate: Gate, n: int, r: float | None = None) -> np.ndarray:
    """Build the 2n x 2n symplectic matrix for ``gate`` on an n-mode system.

    ``r`` is the numeric squeezing parameter; it is only needed for
    :class:`Squeeze` gates (the ledger keeps r symbolic, the covariance
    engine does not).
    """
    s_mat = np.eye(2 * n)
    if isinstance(gate, Squeeze):
        if r is None:
            raise DomainError("numeric r is required to build a squeeze matrix")
        ix, iy = 2 * (gate.mode - 1), 2 * (gate.mode - 1) + 1
        if gate.direction == MOMENTUM_SQUEEZED:
            s_mat[ix, ix] = math.exp(r)
            s_mat[iy, iy] = math.exp(-r)
        else:
            s_mat[ix, ix] = math.exp(-r)
            s_mat[iy, iy] = math.exp(r)
    elif isinstance(gate, Kerr):
        xl, yl = 2 * (gate.l - 1), 2 * (gate.l - 1) + 1
        xk, yk = 2 * (gate.k - 1), 2 * (gate.k - 1) + 1
        s_mat[yl, xk] = gate.g
        s_mat[yk, xl] = gate.g
    elif isinstance(gate, Rotate):
        ix, iy = 2 * (gate.mode - 1), 2 * (gate.mode - 1) + 1
        c, s = cos_sin(gate.theta)
        s_mat[ix, ix] = c
        s_mat[ix, iy] = s
        s_mat[iy, ix] = -s
        s_mat[iy, iy] = c
    elif isinstance(gate, Beamsplit):
        xl, yl = 2 * (gate.l - 1), 2 * (gate.l - 1) + 1
        xk, yk = 2 * (gate.k - 1), 2 * (gate.k - 1) + 1
        s = math.sqrt(gate.t)
        c = math.sqrt(1.0 - gate.t)
        for a, b in ((xl, xk), (yl, yk)):
            s_mat[a, a] = s
            s_mat[a, b] = c
            s_mat[b, a] = c
            s_mat[b, b] = -s
    else:
        raise TypeError(f"not a gate: {gate!r}")
    return s_mat


def is_symplectic(s_mat: np.ndarray, tol: float = SYMPLECTIC_TOL) -> bool:
    """Check S @ Omega @ S.T == Omega to ``tol`` (max-abs deviation)."""
    n2 = s_mat.shape[0]
    if s_mat.shape != (n2, n2) or n2 % 2:
        return False
    omega = symplectic_form(n2 // 2)
    return bool(np.max(np.abs(s_mat @ omega @ s_mat.T - omega)) <= tol)

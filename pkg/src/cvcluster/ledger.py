"""Symbolic Heisenberg-picture ledger for squeezed-vacuum mode networks.

Every quadrature of every mode is stored as an exact linear combination of
the *initial* vacuum operators ``x0_m`` / ``y0_m``.  A term carries an integer
squeezing exponent ``k`` standing for a factor ``e^{k r}`` with a single
symbolic squeezing parameter ``r`` shared by the whole register, plus a real
coefficient.  Gates rewrite these combinations exactly; nothing is sampled
and no numeric ``r`` is needed until a variance is requested.

The payoff is that statements such as "this combination of quadratures has
variance ``0.5 e^{-2r}`` and therefore vanishes for large squeezing" become
exact bookkeeping facts: a combination is a *nullifier* when every surviving
term carries exponent <= -1.

Conventions: ``[X, Y] = i``; vacuum variance 1/2 per quadrature; mode
indices are 1-based; quadrature order (X_1, Y_1, ..., X_n, Y_n) whenever a
flat vector is involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import gates
from .errors import (
    ConsumedModeError,
    InternalConsistencyError,
    InvalidSizeError,
    RecordOwnershipError,
    SelfInteractionError,
    UnsupportedOperationError,
)
from .gates import MOMENTUM_SQUEEZED, POSITION_SQUEEZED, X, Y

# Coefficients smaller than this are dropped after every rewrite.
PRUNE_TOL = 1e-12
# A combination is a nullifier when all terms above this survive at k <= -1.
NULLIFIER_TOL = 1e-9
# Net commutator contributions at nonzero exponent-sum above this are a bug.
COMMUTATOR_TOL = 1e-9

ACTIVE = "active"
CONSUMED = "consumed"


@dataclass(frozen=True)
class Term:
    """One addend ``coeff * e^{exponent * r} * {x0|y0}_mode``."""

    mode: int
    kind: str
    exponent: int
    coeff: float


class QuadExpr:
    """A pruned sum of :class:`Term`, keyed by (mode, kind, exponent).

    The class is a thin mutable wrapper over a dict; ledger operations edit
    expressions in place, everything handed to callers is a copy.
    """

    __slots__ = ("_t",)

    def __init__(self, terms: dict | None = None):
        self._t = dict(terms) if terms else {}

    # -- construction -----------------------------------------------------

    @classmethod
    def unit(cls, mode: int, kind: str, exponent: int = 0, coeff: float = 1.0):
        return cls({(mode, kind, exponent): coeff})

    def copy(self) -> "QuadExpr":
        return QuadExpr(self._t)

    # -- views ------------------------------------------------------------

    def terms(self) -> list[Term]:
        """Terms in canonical (mode, kind, exponent) order."""
        return [
            Term(m, kd, k, c)
            for (m, kd, k), c in sorted(self._t.items())
        ]

    def coeff(self, mode: int, kind: str, exponent: int) -> float:
        return self._t.get((mode, kind, exponent), 0.0)

    def support(self) -> set[int]:
        """Initial-mode indices appearing with a surviving coefficient."""
        return {m for (m, _, _), c in self._t.items() if abs(c) > PRUNE_TOL}

    def is_zero(self) -> bool:
        return not self._t

    def __len__(self) -> int:
        return len(self._t)

    def as_dict(self) -> dict:
        return dict(self._t)

    # -- algebra (in place) ----------------------------------------------

    def add_scaled(self, other: "QuadExpr", c: float = 1.0) -> None:
        t = self._t
        for key, oc in other._t.items():
            val = t.get(key, 0.0) + c * oc
            if abs(val) <= PRUNE_TOL:
                t.pop(key, None)
            else:
                t[key] = val

    def scale(self, c: float) -> None:
        if c == 0.0:
            self._t.clear()
            return
        for key in list(self._t):
            val = self._t[key] * c
            if abs(val) <= PRUNE_TOL:
                del self._t[key]
            else:
                self._t[key] = val

    def shift_exponents(self, dk: int) -> None:
        self._t = {(m, kd, k + dk): c for (m, kd, k), c in self._t.items()}

    # -- algebra (fresh objects, mostly for tests and reports) ------------

    def scaled(self, c: float) -> "QuadExpr":
        out = self.copy()
        out.scale(c)
        return out

    def __add__(self, other: "QuadExpr") -> "QuadExpr":
        out = self.copy()
        out.add_scaled(other)
        return out

    def __sub__(self, other: "QuadExpr") -> "QuadExpr":
        out = self.copy()
        out.add_scaled(other, -1.0)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, QuadExpr):
            return NotImplemented
        return (self - other).is_zero()

    def __repr__(self):
        return f"QuadExpr({render_expr(self)})"


def render_expr(expr: QuadExpr) -> str:
    """Human-readable canonical rendering, e.g. ``e^-r*y0_1 + e^+r*x0_2``."""
    if expr.is_zero():
        return "0"
    chunks = []
    for t in expr.terms():
        mag = f"{abs(t.coeff):.10g}"
        body = "" if mag == "1" else f"{mag}*"
        if t.exponent:
            body += f"e^{t.exponent:+d}r*" if abs(t.exponent) > 1 else f"e^{'+' if t.exponent > 0 else '-'}r*"
        body += f"{t.kind}0_{t.mode}"
        chunks.append(("- " if t.coeff < 0 else "+ ") + body)
    first = chunks[0].replace("+ ", "", 1).replace("- ", "-", 1)
    return " ".join([first] + chunks[1:])


# ---------------------------------------------------------------------------
# Measurement records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MeasurementRecord:
    """Frozen observable captured by measuring one quadrature.

    ``observable`` is the exact expression that was measured; it stays valid
    forever because consumed modes receive no further gates.
    """

    index: int
    mode: int
    kind: str
    observable: QuadExpr
    owner: object = field(repr=False, compare=False, default=None)


# ---------------------------------------------------------------------------
# Register
# ---------------------------------------------------------------------------


class _Mode:
    __slots__ = ("x", "y", "status", "record_index", "recx", "recy")

    def __init__(self, index: int):
        self.x = QuadExpr.unit(index, X)
        self.y = QuadExpr.unit(index, Y)
        self.status = ACTIVE
        self.record_index = None
        # Feed-forward bookkeeping: how much of each measurement record has
        # been folded into this mode's x/y expression (record index -> coeff).
        self.recx: dict[int, float] = {}
        self.recy: dict[int, float] = {}


class Register:
    """A single-threaded mutable bank of modes evolved in the Heisenberg picture.

    Gates mutate the stored expressions; ``history`` keeps the ordered gate
    tape so a numerically identical covariance-matrix state can be rebuilt
    for cross-checking (measurements and displacements are not part of the
    tape — they never change second moments of retained observables).
    """

    def __init__(self, n: int):
        if not isinstance(n, int) or n < 1:
            raise InvalidSizeError(f"register needs at least one mode, got {n!r}")
        self.n = n
        self._modes = [_Mode(i) for i in range(1, n + 1)]
        self.records: list[MeasurementRecord] = []
        self.history: list[gates.Gate] = []

    # -- bookkeeping helpers ----------------------------------------------

    def _mode(self, m: int, *, allow_consumed: bool = False) -> _Mode:
        if not 1 <= m <= self.n:
            raise InvalidSizeError(f"mode {m} outside register 1..{self.n}")
        md = self._modes[m - 1]
        if md.status == CONSUMED and not allow_consumed:
            raise ConsumedModeError(f"mode {m} was consumed by record {md.record_index}")
        return md

    def status(self, mode: int) -> str:
        return self._mode(mode, allow_consumed=True).status

    def active_modes(self) -> list[int]:
        return [i + 1 for i, md in enumerate(self._modes) if md.status == ACTIVE]

    def quad_expr(self, mode: int, kind: str) -> QuadExpr:
        """Copy of the current expression for one quadrature of an active mode."""
        md = self._mode(mode)
        return (md.x if kind == X else md.y).copy()

    def copy(self) -> "Register":
        out = Register.__new__(Register)
        out.n = self.n
        out._modes = []
        for md in self._modes:
            c = _Mode.__new__(_Mode)
            c.x, c.y = md.x.copy(), md.y.copy()
            c.status, c.record_index = md.status, md.record_index
            c.recx, c.recy = dict(md.recx), dict(md.recy)
            out._modes.append(c)
        # Records are frozen; rebinding ownership keeps displace_with usable.
        out.records = [
            MeasurementRecord(r.index, r.mode, r.kind, r.observable, out)
            for r in self.records
        ]
        out.history = list(self.history)
        return out

    # -- gates ------------------------------------------------------------

    def squeeze(self, mode: int, direction: str = MOMENTUM_SQUEEZED) -> "Register":
        """Scale one mode by e^{+-r}: momentum -> (X*e^{+r}, Y*e^{-r})."""
        gate = gates.Squeeze(mode, direction)
        md = self._mode(mode)
        if md.recx or md.recy:
            raise UnsupportedOperationError(
                "squeezing a mode that already carries feed-forward content "
                "would attach the symbolic r to classical records"
            )
        dx = +1 if direction == MOMENTUM_SQUEEZED else -1
        md.x.shift_exponents(dx)
        md.y.shift_exponents(-dx)
        self.history.append(gate)
        return self

    def kerr_couple(self, l: int, k: int, g: float = 1.0) -> "Register":
        """Couple two modes: Y_l += g X_k, Y_k += g X_l (X untouched)."""
        gate = gates.Kerr(l, k, g)
        ml, mk = self._mode(l), self._mode(k)
        # Simultaneous update: X expressions are not modified by this gate,
        # so reading them after updating Y_l would still be a snapshot read;
        # copies make that explicit.
        xl, xk = ml.x.copy(), mk.x.copy()
        ml.y.add_scaled(xk, g)
        mk.y.add_scaled(xl, g)
        for dst, src in ((ml, mk), (mk, ml)):
            for idx, c in src.recx.items():
                dst.recy[idx] = dst.recy.get(idx, 0.0) + g * c
        self.history.append(gate)
        return self

    def rotate(self, mode: int, theta: float) -> "Register":
        """Phase-space rotation X' = cos X + sin Y, Y' = -sin X + cos Y."""
        gate = gates.Rotate(mode, theta)
        md = self._mode(mode)
        c, s = gates.cos_sin(theta)
        ox, oy = md.x, md.y
        nx, ny = ox.scaled(c), ox.scaled(-s)
        nx.add_scaled(oy, s)
        ny.add_scaled(oy, c)
        md.x, md.y = nx, ny
        orx, ory = md.recx, md.recy
        md.recx = _mix(orx, c, ory, s)
        md.recy = _mix(orx, -s, ory, c)
        self.history.append(gate)
        return self

    def paper_minus_90(self, mode: int) -> "Register":
        """The -90 degree local turn used in all correlation sets: (X,Y) -> (-Y, X)."""
        return self.rotate(mode, -math.pi / 2.0)

    def beamsplit(self, l: int, k: int, t: float = 0.5) -> "Register":
        """Mix two modes: X_l' = s X_l + c X_k, X_k' = c X_l - s X_k (same for Y)."""
        gate = gates.Beamsplit(l, k, t)
        ml, mk = self._mode(l), self._mode(k)
        s, c = math.sqrt(t), math.sqrt(1.0 - t)
        for attr, rattr in ((("x"), ("recx")), (("y"), ("recy"))):
            el, ek = getattr(ml, attr), getattr(mk, attr)
            nl, nk = el.scaled(s), el.scaled(c)
            nl.add_scaled(ek, c)
            nk.add_scaled(ek, -s)
            setattr(ml, attr, nl)
            setattr(mk, attr, nk)
            rl, rk = getattr(ml, rattr), getattr(mk, rattr)
            setattr(ml, rattr, _mix(rl, s, rk, c))
            setattr(mk, rattr, _mix(rl, c, rk, -s))
        self.history.append(gate)
        return self

    # -- measurement and feed-forward -------------------------------------

    def measure(self, mode: int, kind: str) -> MeasurementRecord:
        """Consume ``mode`` by measuring one quadrature; returns the record.

        The conjugate quadrature becomes inaccessible (the mode is gone);
        the measured observable survives as classical data.
        """
        md = self._mode(mode)
        expr = (md.x if kind == X else md.y).copy()
        rec = MeasurementRecord(len(self.records), mode, kind, expr, self)
        self.records.append(rec)
        md.status = CONSUMED
        md.record_index = rec.index
        return rec

    def displace_with(self, mode: int, kind: str, coeff: float, record: MeasurementRecord) -> "Register":
        """Feed forward: add ``coeff *`` (measured observable) to a quadrature."""
        if record.owner is not self:
            raise RecordOwnershipError("record belongs to a different register")
        md = self._mode(mode)
        target = md.x if kind == X else md.y
        target.add_scaled(record.observable, coeff)
        book = md.recx if kind == X else md.recy
        book[record.index] = book.get(record.index, 0.0) + coeff
        return self

    # -- linear views ------------------------------------------------------

    def combine(self, parts: list[tuple[float, int, str]]) -> QuadExpr:
        """Weighted sum of current quadratures of active modes."""
        out = QuadExpr()
        for coeff, mode, kind in parts:
            md = self._mode(mode)
            out.add_scaled(md.x if kind == X else md.y, coeff)
        return out

    def frame_combo(self, parts: list[tuple[float, int, str]]) -> list[tuple[float, int, str]]:
        """Resolve a combination to final-frame quadratures, records included.

        Returns (coeff, mode, kind) weights where consumed modes stand for
        their measured quadrature.  This is the bridge the covariance engine
        uses: displaced expressions become plain weight vectors.
        """
        acc: dict[tuple[int, str], float] = {}

        def bump(key, c):
            acc[key] = acc.get(key, 0.0) + c

        for coeff, mode, kind in parts:
            md = self._mode(mode)
            bump((mode, kind), coeff)
            book = md.recx if kind == X else md.recy
            for idx, c in book.items():
                rec = self.records[idx]
                bump((rec.mode, rec.kind), coeff * c)
        return [(c, m, kd) for (m, kd), c in sorted(acc.items()) if abs(c) > PRUNE_TOL]

    def product_partition(self) -> list[tuple[int, ...]]:
        """Minimal blocks of active modes sharing initial-operator support.

        Expressions over disjoint initial modes are statistically independent
        in the vacuum, so distinct blocks factorize; a register is reported
        fully product when every block is a singleton.  (The grouping is
        syntactic: it may merge modes that happen to be product despite
        sharing support, never the reverse.)
        """
        active = self.active_modes()
        parent = {m: m for m in active}

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        owner_of_support: dict[int, int] = {}
        for m in active:
            md = self._mode(m)
            for s in md.x.support() | md.y.support():
                if s in owner_of_support:
                    ra, rb = find(owner_of_support[s]), find(m)
                    if ra != rb:
                        parent[rb] = ra
                else:
                    owner_of_support[s] = m
        blocks: dict[int, list[int]] = {}
        for m in active:
            blocks.setdefault(find(m), []).append(m)
        return sorted(tuple(sorted(b)) for b in blocks.values())

    def rows(self) -> str:
        """Pretty multi-line dump of all active quadrature expressions."""
        lines = []
        for m in self.active_modes():
            md = self._mode(m)
            lines.append(f"X_{m} = {render_expr(md.x)}")
            lines.append(f"Y_{m} = {render_expr(md.y)}")
        return "\n".join(lines)


def _mix(a: dict, ca: float, b: dict, cb: float) -> dict:
    out: dict[int, float] = {}
    for src, c in ((a, ca), (b, cb)):
        if c == 0.0:
            continue
        for k, v in src.items():
            val = out.get(k, 0.0) + c * v
            if abs(val) <= PRUNE_TOL:
                out.pop(k, None)
            else:
                out[k] = val
    return out


def vacuum_register(n: int) -> Register:
    """Fresh n-mode register of unsqueezed vacuum modes."""
    return Register(n)


# ---------------------------------------------------------------------------
# Expression-level analysis
# ---------------------------------------------------------------------------


def is_nullifier(expr: QuadExpr, tol: float = NULLIFIER_TOL) -> bool:
    """True when every term with |coeff| > tol carries exponent <= -1.

    Such a combination has variance proportional to e^{-2r} (or faster) and
    vanishes in the large-squeezing limit.  The zero expression qualifies.
    """
    return all(t.exponent <= -1 for t in expr.terms() if abs(t.coeff) > tol)


def commutator(e1: QuadExpr, e2: QuadExpr) -> float:
    """Commutator of two expressions in units of i (so [x0_m, y0_m] = 1).

    Cross products are grouped by the sum of their squeezing exponents; a
    physical commutator is a pure number, so every nonzero exponent-sum group
    must cancel.  A surviving unbalanced group means the register algebra was
    corrupted and raises :class:`InternalConsistencyError`.
    """
    by_sum: dict[int, float] = {}
    d1, d2 = e1.as_dict(), e2.as_dict()
    for (m1, k1, ex1), c1 in d1.items():
        other = Y if k1 == X else X
        sign = 1.0 if k1 == X else -1.0
        for ex2 in _exponents_of(d2, m1, other):
            c2 = d2[(m1, other, ex2)]
            s = ex1 + ex2
            by_sum[s] = by_sum.get(s, 0.0) + sign * c1 * c2
    for s, val in by_sum.items():
        if s != 0 and abs(val) > COMMUTATOR_TOL:
            raise InternalConsistencyError(
                f"commutator has e^{s:+d}r content {val:.3g}; expressions are "
                "not canonically conjugate"
            )
    return by_sum.get(0, 0.0)


def _exponents_of(d: dict, mode: int, kind: str) -> list[int]:
    return [ex for (m, kd, ex) in d if m == mode and kd == kind]


def variance_formula(expr: QuadExpr, r: float) -> float:
    """Vacuum variance of an expression at numeric squeezing ``r``.

    Distinct initial quadratures are independent with variance 1/2, so the
    result is ``sum over (mode, kind) of (sum_k coeff * e^{k r})^2 * 0.5``.
    """
    groups: dict[tuple[int, str], float] = {}
    for t in expr.terms():
        key = (t.mode, t.kind)
        groups[key] = groups.get(key, 0.0) + t.coeff * math.exp(t.exponent * r)
    return 0.5 * sum(a * a for a in groups.values())

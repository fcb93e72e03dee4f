"""Symbolic engine: rows, gates, records, commutators, closed-form variances."""

import math

import numpy as np
import pytest

from cvcluster import ledger
from cvcluster.errors import (
    ConsumedModeError,
    DomainError,
    InternalConsistencyError,
    InvalidSizeError,
    RecordOwnershipError,
    SelfInteractionError,
    UnsupportedOperationError,
)
from cvcluster.gates import MOMENTUM_SQUEEZED, POSITION_SQUEEZED, X, Y
from cvcluster.ledger import QuadExpr, Register, vacuum_register


def term_dict(expr):
    return {(t.mode, t.kind, t.exponent): t.coeff for t in expr.terms()}


# ---------------------------------------------------------------------------
# construction and squeezing
# ---------------------------------------------------------------------------


def test_vacuum_rows_are_identity():
    reg = vacuum_register(3)
    for m in (1, 2, 3):
        assert term_dict(reg.quad_expr(m, X)) == {(m, X, 0): 1.0}
        assert term_dict(reg.quad_expr(m, Y)) == {(m, Y, 0): 1.0}


def test_register_size_validation():
    with pytest.raises(InvalidSizeError):
        Register(0)
    with pytest.raises(InvalidSizeError):
        vacuum_register(-2)


def test_momentum_squeeze_shifts_exponents():
    """Momentum squeezing stretches X by e^{+r} and shrinks Y by e^{-r}."""
    reg = vacuum_register(1)
    reg.squeeze(1, MOMENTUM_SQUEEZED)
    assert term_dict(reg.quad_expr(1, X)) == {(1, X, 1): 1.0}
    assert term_dict(reg.quad_expr(1, Y)) == {(1, Y, -1): 1.0}


def test_position_squeeze_is_the_mirror_image():
    reg = vacuum_register(1)
    reg.squeeze(1, POSITION_SQUEEZED)
    assert term_dict(reg.quad_expr(1, X)) == {(1, X, -1): 1.0}
    assert term_dict(reg.quad_expr(1, Y)) == {(1, Y, 1): 1.0}


def test_squeeze_rejects_unknown_flavor():
    reg = vacuum_register(1)
    with pytest.raises(DomainError):
        reg.squeeze(1, "sideways")


# ---------------------------------------------------------------------------
# rotations
# ---------------------------------------------------------------------------


def test_quarter_turn_is_exact():
    reg = vacuum_register(1)
    reg.rotate(1, -math.pi / 2.0)
    assert term_dict(reg.quad_expr(1, X)) == {(1, Y, 0): -1.0}
    assert term_dict(reg.quad_expr(1, Y)) == {(1, X, 0): 1.0}


def test_paper_minus_90_matches_radian_form():
    a = vacuum_register(2)
    a.squeeze(1, MOMENTUM_SQUEEZED)
    a.kerr_couple(1, 2, 1.0)
    b = a.copy()
    a.paper_minus_90(2)
    b.rotate(2, -1.5707963267948966)
    for kind in (X, Y):
        assert term_dict(a.quad_expr(2, kind)) == term_dict(b.quad_expr(2, kind))


def test_half_turn_flips_both_signs():
    reg = vacuum_register(1)
    reg.rotate(1, math.pi)
    assert term_dict(reg.quad_expr(1, X)) == {(1, X, 0): -1.0}
    assert term_dict(reg.quad_expr(1, Y)) == {(1, Y, 0): -1.0}


def test_generic_rotation_mixes_with_cos_sin():
    theta = 0.37
    reg = vacuum_register(1)
    reg.rotate(1, theta)
    d = term_dict(reg.quad_expr(1, X))
    assert d[(1, X, 0)] == pytest.approx(math.cos(theta), abs=1e-15)
    assert d[(1, Y, 0)] == pytest.approx(math.sin(theta), abs=1e-15)
    d = term_dict(reg.quad_expr(1, Y))
    assert d[(1, X, 0)] == pytest.approx(-math.sin(theta), abs=1e-15)
    assert d[(1, Y, 0)] == pytest.approx(math.cos(theta), abs=1e-15)


def test_four_quarter_turns_restore_the_frame():
    reg = vacuum_register(1)
    for _ in range(4):
        reg.rotate(1, math.pi / 2.0)
    assert term_dict(reg.quad_expr(1, X)) == {(1, X, 0): 1.0}
    assert term_dict(reg.quad_expr(1, Y)) == {(1, Y, 0): 1.0}


# ---------------------------------------------------------------------------
# beamsplitter and coupling
# ---------------------------------------------------------------------------


def test_balanced_beamsplitter_coefficients():
    reg = vacuum_register(2)
    reg.beamsplit(1, 2, 0.5)
    s = math.sqrt(0.5)
    assert term_dict(reg.quad_expr(1, X)) == {(1, X, 0): pytest.approx(s), (2, X, 0): pytest.approx(s)}
    assert term_dict(reg.quad_expr(2, X)) == {(1, X, 0): pytest.approx(s), (2, X, 0): pytest.approx(-s)}


def test_beamsplit_transmittance_domain():
    reg = vacuum_register(2)
    with pytest.raises(DomainError):
        reg.beamsplit(1, 2, -0.1)
    with pytest.raises(DomainError):
        reg.beamsplit(1, 2, 1.5)


def test_gates_reject_self_interaction():
    reg = vacuum_register(2)
    with pytest.raises(SelfInteractionError):
        reg.beamsplit(1, 1, 0.5)
    with pytest.raises(SelfInteractionError):
        reg.kerr_couple(2, 2, 1.0)


def test_kerr_couple_adds_cross_positions():
    """The coupling adds each partner's position into the other's momentum."""
    reg = vacuum_register(2)
    reg.kerr_couple(1, 2, 1.0)
    assert term_dict(reg.quad_expr(1, Y)) == {(1, Y, 0): 1.0, (2, X, 0): 1.0}
    assert term_dict(reg.quad_expr(2, Y)) == {(2, Y, 0): 1.0, (1, X, 0): 1.0}
    assert term_dict(reg.quad_expr(1, X)) == {(1, X, 0): 1.0}


def test_kerr_gain_scales_the_coupling():
    reg = vacuum_register(2)
    reg.kerr_couple(1, 2, 0.25)
    assert term_dict(reg.quad_expr(1, Y))[(2, X, 0)] == 0.25


def test_mode_bounds_checked():
    reg = vacuum_register(2)
    with pytest.raises(InvalidSizeError):
        reg.rotate(3, 0.1)
    with pytest.raises(InvalidSizeError):
        reg.squeeze(0, MOMENTUM_SQUEEZED)


# ---------------------------------------------------------------------------
# measurement, records, feed-forward
# ---------------------------------------------------------------------------


def test_measure_consumes_the_mode():
    reg = vacuum_register(2)
    rec = reg.measure(1, X)
    assert rec.mode == 1 and rec.kind == X and rec.index == 0
    assert reg.status(1) == ledger.CONSUMED
    assert reg.active_modes() == [2]
    with pytest.raises(ConsumedModeError):
        reg.measure(1, Y)
    with pytest.raises(ConsumedModeError):
        reg.rotate(1, 0.3)


def test_displace_with_applies_record_combination():
    reg = vacuum_register(3)
    reg.squeeze(2, MOMENTUM_SQUEEZED)
    rec = reg.measure(2, Y)
    reg.displace_with(1, X, -1.0, rec)
    d = term_dict(reg.quad_expr(1, X))
    assert d[(1, X, 0)] == 1.0
    assert d[(2, Y, -1)] == -1.0


def test_displace_rejects_foreign_records():
    reg_a = vacuum_register(2)
    reg_b = vacuum_register(2)
    rec = reg_a.measure(1, X)
    with pytest.raises(RecordOwnershipError):
        reg_b.displace_with(2, X, 1.0, rec)


def test_displace_onto_consumed_mode_rejected():
    reg = vacuum_register(2)
    rec = reg.measure(1, X)
    with pytest.raises(ConsumedModeError):
        reg.displace_with(1, Y, 1.0, rec)


def test_squeeze_after_feedforward_unsupported():
    """Squeezing no longer factors once a row carries record content."""
    reg = vacuum_register(2)
    rec = reg.measure(2, Y)
    reg.displace_with(1, X, 0.5, rec)
    with pytest.raises(UnsupportedOperationError):
        reg.squeeze(1, MOMENTUM_SQUEEZED)


def test_records_enumerate_in_order():
    reg = vacuum_register(3)
    r0 = reg.measure(2, X)
    r1 = reg.measure(3, Y)
    assert [r.index for r in reg.records] == [0, 1]
    assert reg.records[0] is r0 and reg.records[1] is r1


# ---------------------------------------------------------------------------
# expression algebra
# ---------------------------------------------------------------------------


def test_quadexpr_add_sub_cancel():
    e1 = QuadExpr({(1, X, 0): 1.0, (2, Y, -1): 2.0})
    e2 = QuadExpr({(1, X, 0): 1.0})
    assert term_dict(e1 - e2) == {(2, Y, -1): 2.0}
    assert term_dict(e2 + e2) == {(1, X, 0): 2.0}


def test_tiny_coefficients_are_pruned():
    e1 = QuadExpr({(1, X, 0): 1.0})
    e2 = QuadExpr({(1, X, 0): 1.0 + 1e-15})
    assert term_dict(e1 - e2) == {}


def test_combine_weighs_rows():
    reg = vacuum_register(2)
    reg.squeeze(1, MOMENTUM_SQUEEZED)
    expr = reg.combine([(2.0, 1, X), (-1.0, 2, Y)])
    assert term_dict(expr) == {(1, X, 1): 2.0, (2, Y, 0): -1.0}


def test_is_nullifier_requires_pure_decay():
    assert ledger.is_nullifier(QuadExpr({(1, Y, -1): 1.0, (2, Y, -2): 0.5}))
    assert ledger.is_nullifier(QuadExpr({}))
    assert not ledger.is_nullifier(QuadExpr({(1, Y, -1): 1.0, (2, X, 0): 1e-6}))
    # below-tolerance residue is ignored
    assert ledger.is_nullifier(QuadExpr({(1, Y, -1): 1.0, (2, X, 1): 1e-12}))


# ---------------------------------------------------------------------------
# commutators
# ---------------------------------------------------------------------------


def test_canonical_commutators():
    reg = vacuum_register(2)
    assert ledger.commutator(reg.quad_expr(1, X), reg.quad_expr(1, Y)) == 1.0
    assert ledger.commutator(reg.quad_expr(1, Y), reg.quad_expr(1, X)) == -1.0
    assert ledger.commutator(reg.quad_expr(1, X), reg.quad_expr(2, Y)) == 0.0


def test_commutators_survive_random_gate_soup():
    """Any gate sequence must keep the canonical algebra intact."""
    rng = np.random.default_rng(4)
    for _ in range(20):
        reg = vacuum_register(4)
        for _ in range(15):
            op = rng.integers(4)
            m = int(rng.integers(1, 5))
            k = int(rng.integers(1, 5))
            if op == 0:
                reg.squeeze(m, MOMENTUM_SQUEEZED if rng.random() < 0.5 else POSITION_SQUEEZED)
            elif op == 1:
                reg.rotate(m, float(rng.uniform(-3, 3)))
            elif op == 2 and m != k:
                reg.beamsplit(m, k, float(rng.uniform(0.05, 0.95)))
            elif op == 3 and m != k:
                reg.kerr_couple(m, k, float(rng.uniform(0.2, 2.0)))
        for a in range(1, 5):
            assert ledger.commutator(reg.quad_expr(a, X), reg.quad_expr(a, Y)) == pytest.approx(1.0, abs=1e-9)
            for b in range(a + 1, 5):
                assert ledger.commutator(reg.quad_expr(a, X), reg.quad_expr(b, X)) == pytest.approx(0.0, abs=1e-9)
                assert ledger.commutator(reg.quad_expr(a, Y), reg.quad_expr(b, Y)) == pytest.approx(0.0, abs=1e-9)
                assert ledger.commutator(reg.quad_expr(a, X), reg.quad_expr(b, Y)) == pytest.approx(0.0, abs=1e-9)


def test_commutator_flags_unbalanced_exponents():
    e1 = QuadExpr({(1, X, 1): 1.0})
    e2 = QuadExpr({(1, Y, 0): 1.0})
    with pytest.raises(InternalConsistencyError):
        ledger.commutator(e1, e2)


# ---------------------------------------------------------------------------
# variance closed form
# ---------------------------------------------------------------------------


def test_variance_of_squeezed_quadrature():
    expr = QuadExpr({(1, Y, -1): 1.0})
    for r in (0.0, 0.5, 1.0, 2.0):
        assert ledger.variance_formula(expr, r) == pytest.approx(0.5 * math.exp(-2 * r))


def test_variance_sums_independent_modes():
    expr = QuadExpr({(1, Y, -1): 1.0, (2, Y, -1): -1.0})
    assert ledger.variance_formula(expr, 1.0) == pytest.approx(math.exp(-2.0))


def test_variance_groups_same_quadrature_before_squaring():
    """Two exponent branches of one initial quadrature add amplitudes, not variances."""
    expr = QuadExpr({(1, X, 1): 1.0, (1, X, -1): -1.0})
    r = 0.7
    amp = math.exp(r) - math.exp(-r)
    assert ledger.variance_formula(expr, r) == pytest.approx(0.5 * amp * amp)


def test_vacuum_variance_is_half():
    expr = QuadExpr({(1, X, 0): 1.0})
    assert ledger.variance_formula(expr, 1.3) == 0.5

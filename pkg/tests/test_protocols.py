"""Builders, the feed-forward solver, and the measurement protocols."""

import itertools
import math

import numpy as np
import pytest

from cvcluster import covariance, graphs, ledger, protocols
from cvcluster.errors import ProtocolPreconditionError, SelfInteractionError
from cvcluster.gates import X, Y
from cvcluster.ledger import QuadExpr


def term_dict(expr):
    return {(t.mode, t.kind, t.exponent): t.coeff for t in expr.terms()}


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------


def test_chain_rows_closed_form():
    reg = protocols.build_graph_state(graphs.chain(4))
    assert term_dict(reg.quad_expr(2, X)) == {(2, X, 1): 1.0}
    assert term_dict(reg.quad_expr(2, Y)) == {
        (2, Y, -1): 1.0,
        (1, X, 1): 1.0,
        (3, X, 1): 1.0,
    }
    # chain ends have one neighbour only
    assert term_dict(reg.quad_expr(1, Y)) == {(1, Y, -1): 1.0, (2, X, 1): 1.0}


def test_star_rows_follow_the_graph():
    g = graphs.star(3)
    reg = protocols.build_graph_state(g)
    hub = g.mode_of(0)
    d = term_dict(reg.quad_expr(hub, Y))
    assert d[(hub, Y, -1)] == 1.0
    for leaf in (1, 2, 3):
        assert d[(g.mode_of(leaf), X, 1)] == 1.0


def test_graph_law_holds_on_a_grid():
    g = graphs.grid(2, 3)
    reg = protocols.build_graph_state(g)
    for v in g.vertices:
        parts = [(1.0, g.mode_of(v), Y)] + [(-1.0, g.mode_of(b), X) for b in g.neighborhood(v)]
        assert ledger.is_nullifier(reg.combine(parts))


def test_covariance_builder_matches_ledger():
    g = graphs.chain(3)
    reg = protocols.build_graph_state(g)
    for r in (0.3, 1.0):
        state = protocols.build_graph_state(g, "covariance", r)
        parts = [(1.0, 2, Y), (-1.0, 1, X), (-1.0, 3, X)]
        assert covariance.variance_of(state, parts) == pytest.approx(
            ledger.variance_formula(reg.combine(parts), r), abs=1e-12
        )


def test_covariance_builder_needs_r():
    with pytest.raises(ProtocolPreconditionError):
        protocols.build_graph_state(graphs.chain(2), "covariance")
    with pytest.raises(ProtocolPreconditionError):
        protocols.build_graph_state(graphs.chain(2), "matrixproduct")


def test_bs_chain_quarter_turned_weights():
    """The four-mode cascade carries the sqrt(2)-weighted correlation set."""
    s2 = math.sqrt(2.0)
    reg = protocols.build_bs_chain(4)
    reg.paper_minus_90(2)
    reg.paper_minus_90(4)
    for parts in (
        [(s2, 1, X), (1.0, 2, X), (s2, 3, X)],
        [(1.0, 3, X), (1.0, 4, X)],
        [(1.0, 1, Y), (-s2, 2, Y)],
        [(s2, 2, Y), (-1.0, 3, Y), (1.0, 4, Y)],
    ):
        expr = reg.combine(parts)
        assert all(abs(t.coeff) <= 1e-12 for t in expr.terms() if t.exponent >= 0)
        assert ledger.is_nullifier(expr)


def test_bs_chain_two_modes_is_epr():
    reg = protocols.build_bs_chain(2)
    reg.paper_minus_90(2)
    assert ledger.is_nullifier(reg.combine([(1.0, 1, X), (1.0, 2, X)]))
    assert ledger.is_nullifier(reg.combine([(1.0, 1, Y), (-1.0, 2, Y)]))


def test_nullifier_basis_spans_n_dimensions():
    for n in (2, 3, 6, 10):
        basis = protocols.nullifier_basis(protocols.build_bs_chain(n))
        assert len(basis) == n
        for w in basis:
            assert ledger.is_nullifier(w.expr)
            assert max(abs(c) for c, _, _ in w.combo) == pytest.approx(1.0)


def test_ghz_optics_unweighted_set():
    for n in (2, 3, 5):
        reg = protocols.build_ghz_optics(n)
        assert ledger.is_nullifier(reg.combine([(1.0, m, X) for m in range(1, n + 1)]))
        for a, b in itertools.combinations(range(1, n + 1), 2):
            assert ledger.is_nullifier(reg.combine([(1.0, a, Y), (-1.0, b, Y)]))


# ---------------------------------------------------------------------------
# feed-forward solver
# ---------------------------------------------------------------------------


def test_solver_finds_the_neighbour_correction():
    g = graphs.chain(3)
    reg = protocols.build_graph_state(g)
    reg.measure(2, X)
    sol = protocols.solve_feedforward(reg, [([(1.0, 1, Y)], None)])
    assert isinstance(sol, protocols.FeedforwardSolution)
    (coeffs,) = sol.coeffs
    assert coeffs == {0: pytest.approx(-1.0)}


def test_solver_reports_infeasibility():
    g = graphs.chain(3)
    reg = protocols.build_graph_state(g)
    reg.measure(2, Y)  # wrong basis: the record cannot cancel an X bond
    sol = protocols.solve_feedforward(reg, [([(1.0, 1, Y)], None)])
    assert isinstance(sol, protocols.Infeasible)
    assert sol.deficiency == sol.equations - sol.rank


def test_solver_allowance_keeps_a_bond():
    g = graphs.chain(3)
    reg = protocols.build_graph_state(g)
    reg.measure(1, X)
    keep = QuadExpr({(3, X, 1): 1.0})
    sol = protocols.solve_feedforward(reg, [([(1.0, 2, Y)], keep)])
    assert isinstance(sol, protocols.FeedforwardSolution)


def test_solver_with_no_records_and_clean_target():
    reg = protocols.build_graph_state(graphs.chain(2))
    sol = protocols.solve_feedforward(
        reg, [([(1.0, 1, Y), (-1.0, 2, X)], None)], records=[]
    )
    assert isinstance(sol, protocols.FeedforwardSolution)
    assert sol.coeffs == [{}]


# ---------------------------------------------------------------------------
# separation protocols
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("n", [2, 3, 4, 7, 12])
def test_disentangle_even_gives_singletons(n):
    g = graphs.chain(n)
    reg = protocols.build_graph_state(g)
    rep = protocols.disentangle_even(reg, g)
    assert rep.success
    assert len(rep.measurements) == n // 2
    assert all(len(block) == 1 for block in rep.partition)


def test_disentangle_matches_covariance_oracle():
    pattern = [(2, X), (4, X)]
    assert protocols.conditional_cov_block_diagonal(5, pattern, 1.0)
    assert not protocols.conditional_cov_block_diagonal(5, [(2, X)], 1.0)


def test_minimal_pattern_is_floor_n_over_2():
    assert protocols.minimal_disentangling_measurements(2) == 1
    assert protocols.minimal_disentangling_measurements(4) == 2
    assert protocols.minimal_disentangling_measurements(5) == 2


def test_disconnect_splits_in_two():
    g = graphs.chain(6)
    reg = protocols.build_graph_state(g)
    rep = protocols.disconnect(reg, g, 4)
    assert rep.success
    assert rep.partition == [(1, 2, 3), (5, 6)]


def test_disconnect_requires_interior_position():
    g = graphs.chain(4)
    reg = protocols.build_graph_state(g)
    with pytest.raises(ProtocolPreconditionError):
        protocols.disconnect(reg, g, 1)


def test_chain_protocols_reject_other_graphs():
    g = graphs.star(3)
    reg = protocols.build_graph_state(g)
    with pytest.raises(ProtocolPreconditionError):
        protocols.disentangle_even(reg, g)


# ---------------------------------------------------------------------------
# pair extraction
# ---------------------------------------------------------------------------


def two_chain_relations_hold(reg, j, k):
    return ledger.is_nullifier(reg.combine([(1.0, j, Y), (-1.0, k, X)])) and \
        ledger.is_nullifier(reg.combine([(1.0, k, Y), (-1.0, j, X)]))


@pytest.mark.parametrize("n,j,k", [(4, 2, 3), (6, 2, 5), (9, 1, 9), (9, 4, 5)])
def test_extract_pair_next_neighbor(n, j, k):
    g = graphs.chain(n)
    reg = protocols.build_graph_state(g)
    rep = protocols.extract_pair(reg, g, j, k)
    assert rep.success
    assert two_chain_relations_hold(reg, j, k)
    assert protocols.pair_epr_projection(reg, (j, k))


def test_extract_pair_inner_teleports_count():
    g = graphs.chain(8)
    reg = protocols.build_graph_state(g)
    rep = protocols.extract_pair(reg, g, 2, 7)
    assert rep.success
    assert "4 inner teleport steps" in rep.details


def test_extract_pair_custom_outer_patterns():
    for n, j, k, outer in (
        (7, 4, 5, protocols.CustomOuter(left=(2, 1), right=(7,))),
        (9, 6, 7, protocols.CustomOuter(left=(4, 2, 1), right=(9,))),
    ):
        g = graphs.chain(n)
        reg = protocols.build_graph_state(g)
        rep = protocols.extract_pair(reg, g, j, k, outer)
        assert rep.success
        assert two_chain_relations_hold(reg, j, k)


def test_extract_pair_incomplete_outer_fails_honestly():
    g = graphs.chain(6)
    reg = protocols.build_graph_state(g)
    rep = protocols.extract_pair(reg, g, 4, 5, protocols.CustomOuter(left=(2, 1)))
    assert not rep.success


def test_extract_pair_validates_positions():
    g = graphs.chain(5)
    reg = protocols.build_graph_state(g)
    with pytest.raises(SelfInteractionError):
        protocols.extract_pair(reg, g, 3, 3)
    with pytest.raises(ProtocolPreconditionError):
        protocols.extract_pair(reg, g, 0, 4)


def test_teleport_shorten_removes_the_second_position():
    """Measuring the next position teleports the head's correlations past it."""
    reg = protocols.build_graph_state(graphs.chain(3))
    order = protocols.teleport_shorten(reg, [1, 2, 3])
    assert order == [1, 3]
    assert two_chain_relations_hold(reg, 1, 3)


# ---------------------------------------------------------------------------
# path reduction
# ---------------------------------------------------------------------------


def test_reduce_grid_to_corner_path():
    g = graphs.grid(3, 3)
    reg = protocols.build_graph_state(g)
    rep = protocols.reduce_graph_to_path(reg, g, 1, 9)
    assert rep.success
    assert len(rep.nullifiers) == 5


def test_reduce_ring_to_path():
    g = graphs.ring(7)
    reg = protocols.build_graph_state(g)
    rep = protocols.reduce_graph_to_path(reg, g, 1, 4)
    assert rep.success


def test_reduce_random_graphs(seed=99):
    rng = np.random.default_rng(seed)
    for _ in range(10):
        n = int(rng.integers(5, 16))
        g = graphs.random_connected_graph(n, 0.3, rng)
        a, b = (int(v) for v in rng.choice(g.vertices, size=2, replace=False))
        reg = protocols.build_graph_state(g)
        rep = protocols.reduce_graph_to_path(reg, g, a, b)
        assert rep.success, rep.details


# ---------------------------------------------------------------------------
# GHZ projections
# ---------------------------------------------------------------------------


def test_star_to_ghz_flavors():
    g = graphs.star(5)
    reg = protocols.build_graph_state(g)
    rep = protocols.star_to_ghz(reg, g)
    assert rep.success
    assert rep.flavor == "total-position"
    assert len(rep.nullifiers) == 5


def test_ring_star_parity_rule():
    for m in (3, 4, 5, 6):
        g = graphs.ring_star(2 * m)
        reg = protocols.build_graph_state(g)
        rep = protocols.ring_star_to_ghz(reg, g)
        if m % 2:
            assert rep.success
            assert len(rep.nullifiers) == m
        else:
            assert not rep.success
            equations, rank = rep.rank_info
            assert equations - rank == 1


def test_ring_star_explicit_measured_set():
    g = graphs.ring_star(10)
    reg = protocols.build_graph_state(g)
    rep = protocols.ring_star_to_ghz(reg, g, measured=[2, 4, 6, 8, 10])
    assert rep.success


def test_alternating_attachment_is_the_only_working_five_spoke():
    """Of all 252 ways to hub five spokes on a ten-ring, only the two
    alternating patterns admit the GHZ projection."""
    winners = []
    for spokes in itertools.combinations(range(1, 11), 5):
        g = graphs.ring_star(10, spokes=spokes)
        reg = protocols.build_graph_state(g)
        if protocols.ring_star_to_ghz(reg, g).success:
            winners.append(spokes)
    assert winners == [(1, 3, 5, 7, 9), (2, 4, 6, 8, 10)]


def test_quarter_turns_reach_ghz_only_up_to_three():
    assert protocols.admits_ghz_under_quarter_turns(2)
    assert protocols.admits_ghz_under_quarter_turns(3)
    assert not protocols.admits_ghz_under_quarter_turns(4)


# ---------------------------------------------------------------------------
# robustness to losing a party
# ---------------------------------------------------------------------------


def test_chain_survives_any_single_discard():
    for n, d in ((4, 1), (4, 4), (5, 3), (6, 3), (6, 6)):
        rep = protocols.chain_pair_after_discard(n, d)
        assert rep.success is True
        assert all(d not in e.support() for e in rep.nullifiers)


def test_ghz_cannot_rescue_a_conjugate_pair():
    for m in (3, 4):
        for d in range(1, m + 1):
            assert protocols.ghz_admits_conjugate_pair(m, d) is False


def test_epr_projection_rejects_product_planes():
    """Two single-mode squeezing conditions are not an EPR plane."""
    reg = ledger.vacuum_register(2)
    reg.squeeze(1, "momentum")
    reg.squeeze(2, "momentum")
    assert protocols.pair_epr_projection(reg, (1, 2)) is False
    reg.kerr_couple(1, 2, 1.0)
    assert protocols.pair_epr_projection(reg, (1, 2)) is True

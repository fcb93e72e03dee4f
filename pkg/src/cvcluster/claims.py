"""Compiled-in claims suite: every headline behaviour, checked from code.

Each claim rebuilds its states from the engines (nothing is read from disk,
so the suite cannot drift from the library), checks one factual statement
at an explicit tolerance, and reports a measured value.  Registers and the
exact quadrature combinations each claim verified are collected into a
shared battery; two closing claims then (a) replay every battery tape on
the covariance engine and compare each combination's variance against the
ledger's closed form at five squeezing values, and (b) re-verify canonical
commutators and uncertainty bounds on every battery register.

Run via ``cvcluster claims`` or :func:`run_claims`.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import covariance, graphs, ledger, protocols
from .errors import InternalConsistencyError
from .gates import X, Y

BRIDGE_RS = (0.0, 0.25, 0.5, 1.0, 2.0)
BRIDGE_TOL = 1e-9
COEFF_TOL = 1e-12


@dataclass
class ClaimResult:
    claim_id: str
    statement: str
    passed: bool
    value: str
    tolerance: str
    details: list[str] = field(default_factory=list)

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"


@dataclass
class BatteryEntry:
    label: str
    reg: ledger.Register
    # (final-frame combo, symbolic expression) pairs actually verified
    pairs: list[tuple[list, ledger.QuadExpr]]


class Battery:
    def __init__(self):
        self.entries: list[BatteryEntry] = []

    def add(self, label: str, reg: ledger.Register, parts_list):
        pairs = [(reg.frame_combo(p), reg.combine(p)) for p in parts_list]
        self.entries.append(BatteryEntry(label, reg, pairs))

    def add_report(self, label: str, reg: ledger.Register, report):
        pairs = list(zip(report.combos, report.nullifiers))
        self.entries.append(BatteryEntry(label, reg, pairs))


# ---------------------------------------------------------------------------
# Individual claims
# ---------------------------------------------------------------------------


def _claim_chain_rows(battery: Battery) -> ClaimResult:
    started = time.perf_counter()
    worst = 0.0
    for n in (2, 5, 25, 100):
        reg = protocols.build_graph_state(graphs.chain(n))
        for m in range(1, n + 1):
            x = reg.quad_expr(m, X)
            expected_x = ledger.QuadExpr({(m, X, 1): 1.0})
            y = reg.quad_expr(m, Y)
            expected_y = ledger.QuadExpr({(m, Y, -1): 1.0})
            for b in (m - 1, m + 1):
                if 1 <= b <= n:
                    expected_y.add_scaled(ledger.QuadExpr({(b, X, 1): 1.0}))
            for diff in (x - expected_x, y - expected_y):
                for t in diff.terms():
                    worst = max(worst, abs(t.coeff))
        if n <= 25:
            battery.add(f"chain({n}) rows", reg,
                        [[(1.0, m, k)] for m in range(1, n + 1) for k in (X, Y)])
    elapsed = time.perf_counter() - started
    return ClaimResult(
        "chain-rows",
        "chain register rows match the closed form for N up to 100",
        worst <= COEFF_TOL and elapsed < 1.0,
        f"max coefficient deviation {worst:.3g} in {elapsed:.3f}s",
        f"{COEFF_TOL:g} on coefficients, 1s wall",
    )


ROTATED_SETS = {
    2: ((2,), [[(1, 1, X), (1, 2, X)], [(1, 1, Y), (-1, 2, Y)]]),
    3: ((2,), [[(1, 1, X), (1, 2, X), (1, 3, X)],
               [(1, 1, Y), (-1, 2, Y)], [(1, 2, Y), (-1, 3, Y)], [(1, 1, Y), (-1, 3, Y)]]),
    4: ((2, 4), [[(1, 1, X), (1, 2, X), (1, 3, X)], [(1, 3, X), (1, 4, X)],
                 [(1, 1, Y), (-1, 2, Y)], [(1, 2, Y), (-1, 3, Y), (1, 4, Y)]]),
}


def _claim_rotated_sets(battery: Battery) -> ClaimResult:
    checked, failed = 0, []
    for n, (turned, combos) in ROTATED_SETS.items():
        reg = protocols.build_graph_state(graphs.chain(n))
        for m in turned:
            reg.paper_minus_90(m)
        for parts in combos:
            checked += 1
            if not ledger.is_nullifier(reg.combine(parts)):
                failed.append(f"N={n}: {parts}")
        battery.add(f"rotated chain({n})", reg, combos)
    return ClaimResult(
        "rotated-sets",
        "quarter-turned correlation sets vanish for chains of 2, 3 and 4",
        not failed,
        f"{checked} combinations, {len(failed)} failing",
        "exact (coefficients pruned at 1e-12)",
        details=failed,
    )


def _claim_graph_law(battery: Battery) -> ClaimResult:
    rng = np.random.default_rng(20260823)
    checked, failed = 0, 0
    for i in range(200):
        n = int(rng.integers(2, 51))
        g = graphs.random_graph(n, float(rng.uniform(0.05, 0.5)), rng)
        reg = protocols.build_graph_state(g)
        combos = []
        for v in g.vertices:
            parts = [(1.0, g.mode_of(v), Y)] + [
                (-1.0, g.mode_of(b), X) for b in g.neighborhood(v)
            ]
            combos.append(parts)
            checked += 1
            if not ledger.is_nullifier(reg.combine(parts)):
                failed += 1
        if i % 10 == 0:  # sampled into the battery to honour the time budget
            battery.add(f"random graph #{i} (|V|={n})", reg, combos)
    return ClaimResult(
        "graph-law",
        "vertex momentum minus neighbour positions vanishes on 200 random graphs",
        failed == 0,
        f"{checked} vertex laws on 200 graphs, {failed} failing",
        "exact",
    )


def _claim_persistency(battery: Battery) -> ClaimResult:
    details, ok = [], True
    for n in range(2, 41):
        g = graphs.chain(n)
        reg = protocols.build_graph_state(g)
        rep = protocols.disentangle_even(reg, g)
        good = rep.success and len(rep.measurements) == n // 2
        ok &= good
        if n in (6, 40):
            battery.add_report(f"disentangled chain({n})", reg, rep)
        if not good:
            details.append(f"N={n}: {rep.details}")
    minima = {n: protocols.minimal_disentangling_measurements(n) for n in range(2, 7)}
    for n, got in minima.items():
        if got != n // 2:
            ok = False
            details.append(f"oracle minimum for N={n}: {got} != {n // 2}")
    return ClaimResult(
        "persistency",
        "floor(N/2) position measurements fully separate chains (N<=40) and "
        "the brute-force oracle finds no smaller pattern (N<=6)",
        ok,
        f"chains 2..40 separated; oracle minima {sorted(minima.values())}",
        "exact partition / exhaustive oracle",
        details=details,
    )


def _claim_pair_extraction(battery: Battery) -> ClaimResult:
    runs, failed, details = 0, 0, []
    for n in range(2, 21):
        g = graphs.chain(n)
        for j in range(1, n + 1):
            for k in range(j + 1, n + 1):
                reg = protocols.build_graph_state(g)
                rep = protocols.extract_pair(reg, g, j, k)
                runs += 1
                if not rep.success:
                    failed += 1
                    details.append(f"N={n} pair ({j},{k}): {rep.details}")
                elif n == 8 or (n == 20 and (j, k) in ((1, 2), (1, 20), (19, 20), (7, 14))):
                    battery.add_report(f"pair ({j},{k}) of chain({n})", reg, rep)
    custom_cases = [
        (7, 4, 5, protocols.CustomOuter(left=(2, 1), right=(7,))),
        (9, 6, 7, protocols.CustomOuter(left=(4, 2, 1), right=(9,))),
    ]
    for n, j, k, outer in custom_cases:
        g = graphs.chain(n)
        reg = protocols.build_graph_state(g)
        rep = protocols.extract_pair(reg, g, j, k, outer)
        runs += 1
        if not rep.success:
            failed += 1
            details.append(f"custom outer N={n} ({j},{k}) failed")
        else:
            battery.add_report(f"custom outer ({j},{k}) of chain({n})", reg, rep)
    return ClaimResult(
        "pair-extraction",
        "every chain pair concentrates to an EPR pair (N<=20, all pairs, "
        "next-neighbour outers; two custom outer patterns included)",
        failed == 0,
        f"{runs} extractions, {failed} failing",
        "nullifier exactness at 1e-9",
        details=details,
    )


def _claim_path_reduction(battery: Battery) -> ClaimResult:
    rng = np.random.default_rng(777)
    runs, failed, details = 0, 0, []
    for i in range(50):
        n = int(rng.integers(4, 21))
        g = graphs.random_connected_graph(n, float(rng.uniform(0.1, 0.4)), rng)
        a, b = (int(v) for v in rng.choice(g.vertices, size=2, replace=False))
        reg = protocols.build_graph_state(g)
        rep = protocols.reduce_graph_to_path(reg, g, a, b)
        runs += 1
        if not rep.success:
            failed += 1
            details.append(f"graph #{i} (|V|={n}) {a}->{b}: {rep.details}")
        else:
            battery.add_report(f"path {a}->{b} in graph #{i}", reg, rep)
    return ClaimResult(
        "path-reduction",
        "50 random connected graphs reduce to exact chain form along a "
        "shortest path between random endpoints",
        failed == 0,
        f"{runs} reductions, {failed} failing",
        "nullifier exactness at 1e-9",
        details=details,
    )


def _claim_ghz_star(battery: Battery) -> ClaimResult:
    failed, details = 0, []
    for m in range(2, 13):
        g = graphs.star(m)
        reg = protocols.build_graph_state(g)
        rep = protocols.star_to_ghz(reg, g)
        if not (rep.success and len(rep.nullifiers) == m):
            failed += 1
            details.append(f"m={m}: {rep.details}")
        if m in (2, 5, 12):
            battery.add_report(f"GHZ from star({m})", reg, rep)
    return ClaimResult(
        "ghz-star",
        "hub momentum measurement projects star(m) onto a GHZ-type state "
        "for m = 2..12",
        failed == 0,
        f"11 stars, {failed} failing",
        "nullifier exactness at 1e-9",
        details=details,
    )


def _claim_parity(battery: Battery) -> ClaimResult:
    ok, details = True, []
    for m in range(3, 13):
        g = graphs.ring_star(2 * m)
        reg = protocols.build_graph_state(g)
        rep = protocols.ring_star_to_ghz(reg, g)
        want = m % 2 == 1
        line = f"family {m} (ring {2 * m}): "
        if rep.success:
            line += "success"
            battery.add_report(f"ring-star family {m}", reg, rep)
        else:
            deficiency = rep.rank_info[0] - rep.rank_info[1]
            line += f"infeasible, rank deficiency {deficiency}"
            if deficiency != 1:
                ok = False
        if rep.success != want:
            ok = False
            line += "  (UNEXPECTED)"
        details.append(line)
    return ClaimResult(
        "parity",
        "alternating-ring GHZ extraction succeeds exactly when the measured "
        "ring count is odd; even counts are rank-deficient by one",
        ok,
        "families 3..12 follow the parity rule",
        "rank computed at 1e-9",
        details=details,
    )


def _claim_bs_chain(battery: Battery) -> ClaimResult:
    ok, details = True, []
    s2 = math.sqrt(2.0)
    reg = protocols.build_bs_chain(4)
    reg.paper_minus_90(2)
    reg.paper_minus_90(4)
    weighted = [
        [(s2, 1, X), (1, 2, X), (s2, 3, X)],
        [(1, 3, X), (1, 4, X)],
        [(1, 1, Y), (-s2, 2, Y)],
        [(s2, 2, Y), (-1, 3, Y), (1, 4, Y)],
    ]
    worst = 0.0
    for parts in weighted:
        expr = reg.combine(parts)
        residual = max(
            (abs(t.coeff) for t in expr.terms() if t.exponent >= 0), default=0.0
        )
        worst = max(worst, residual)
    ok &= worst <= COEFF_TOL
    details.append(f"N=4 rotated correlations: max surviving weight {worst:.3g}")
    battery.add("rotated beamsplitter chain (4)", reg, weighted)
    for n in range(2, 11):
        reg = protocols.build_bs_chain(n)
        basis = protocols.nullifier_basis(reg)
        good = len(basis) == n and all(ledger.is_nullifier(w.expr) for w in basis)
        ok &= good
        details.append(f"N={n}: weighted nullifier basis of size {len(basis)}")
        if n in (2, 7, 10):
            battery.add(f"beamsplitter chain ({n})", reg, [list(w.combo) for w in basis])
    return ClaimResult(
        "bs-chain",
        "the beamsplitter cascade reproduces the sqrt(2)-weighted "
        "correlations at N=4 and a full weighted nullifier basis for N<=10",
        ok,
        f"residual {worst:.3g}; bases N=2..10 complete",
        f"{COEFF_TOL:g} on weights",
        details=details,
    )


def _claim_cross_engine(battery: Battery) -> ClaimResult:
    checks, worst = 0, 0.0
    for entry in battery.entries:
        n = entry.reg.n
        for r in BRIDGE_RS:
            state = covariance.apply_tape(covariance.vacuum_state(n), entry.reg.history, r)
            for combo, expr in entry.pairs:
                numeric = covariance.variance_of(state, combo)
                symbolic = ledger.variance_formula(expr, r)
                worst = max(worst, abs(numeric - symbolic))
                checks += 1
    return ClaimResult(
        "cross-engine",
        "covariance-matrix variances equal the ledger closed form for every "
        "battery combination at r in {0, 0.25, 0.5, 1, 2}",
        worst <= BRIDGE_TOL and checks > 0,
        f"{checks} comparisons, max gap {worst:.3g}",
        f"{BRIDGE_TOL:g}",
    )


def _claim_finite_squeezing(battery: Battery) -> ClaimResult:
    ok, details = True, []
    for r, expect_entangled in ((0.3, True), (0.0, False)):
        state = protocols.build_ghz_optics(3, "covariance", r)
        for pair in ((1, 2), (1, 3), (2, 3)):
            nu = covariance.ppt_min_symplectic_eig(state, pair)
            if expect_entangled:
                good = nu < 0.5 - 1e-12
                verdict = "entangled"
            else:
                good = abs(nu - 0.5) <= BRIDGE_TOL
                verdict = "threshold"
            ok &= good
            details.append(f"r={r}: traced pair {pair}: min symplectic eig "
                           f"{nu:.6f} ({verdict}{'' if good else ' EXPECTED'})")
    reg = protocols.build_ghz_optics(3)
    parts = [[(1.0, m, X) for m in (1, 2, 3)],
             [(1.0, 1, Y), (-1.0, 2, Y)], [(1.0, 2, Y), (-1.0, 3, Y)]]
    battery.add("GHZ optics (3)", reg, parts)
    return ClaimResult(
        "finite-squeezing",
        "tracing one party of the three-party GHZ-type optics state leaves "
        "the pair entangled at r=0.3 and exactly at threshold at r=0",
        ok,
        "6 traced-pair checks",
        "PPT threshold 0.5, equality to 1e-9",
        details=details,
    )


def _claim_hygiene(battery: Battery) -> ClaimResult:
    pair_checks, worst = 0, 0.0
    physical_fails = 0
    for entry in battery.entries:
        reg = entry.reg
        active = reg.active_modes()
        rows = {(m, k): reg.quad_expr(m, k) for m in active for k in (X, Y)}
        for i, m in enumerate(active):
            worst = max(worst, abs(ledger.commutator(rows[(m, X)], rows[(m, Y)]) - 1.0))
            pair_checks += 1
            for mm in active[i + 1:]:
                worst = max(worst, abs(ledger.commutator(rows[(m, X)], rows[(mm, X)])))
                worst = max(worst, abs(ledger.commutator(rows[(m, X)], rows[(mm, Y)])))
                worst = max(worst, abs(ledger.commutator(rows[(m, Y)], rows[(mm, Y)])))
                pair_checks += 3
        state = covariance.apply_tape(
            covariance.vacuum_state(reg.n), reg.history, 0.7
        )
        if not covariance.is_physical(state):
            physical_fails += 1
    return ClaimResult(
        "hygiene",
        "canonical commutators survive every battery gate sequence and the "
        "replayed covariance states respect the uncertainty bound",
        worst <= BRIDGE_TOL and physical_fails == 0,
        f"{pair_checks} commutators (max defect {worst:.3g}); "
        f"{len(battery.entries)} states replayed, {physical_fails} unphysical",
        f"{BRIDGE_TOL:g}",
    )


# ---------------------------------------------------------------------------
# Suite
# ---------------------------------------------------------------------------

_CLAIMS = (
    _claim_chain_rows,
    _claim_rotated_sets,
    _claim_graph_law,
    _claim_persistency,
    _claim_pair_extraction,
    _claim_path_reduction,
    _claim_ghz_star,
    _claim_parity,
    _claim_bs_chain,
    _claim_cross_engine,
    _claim_finite_squeezing,
    _claim_hygiene,
)


@dataclass
class ClaimsOutcome:
    results: list[ClaimResult]
    elapsed: float

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)


def _claim_id(fn) -> str:
    return fn.__name__.replace("_claim_", "").replace("_", "-")


def claim_ids() -> list[str]:
    return [_claim_id(fn) for fn in _CLAIMS]


def run_claims(only: str | None = None) -> ClaimsOutcome:
    """Run the suite (optionally one claim by id) and time it.

    The cross-engine and hygiene claims operate on whatever the earlier
    claims put into the battery, so asking for one of them via ``only``
    still runs (but does not report) the claims that feed it.
    """
    started = time.perf_counter()
    battery = Battery()
    results = []
    known = claim_ids()
    if only is not None and only not in known:
        raise ValueError(f"unknown claim id {only!r}; known: {', '.join(known)}")
    for fn in _CLAIMS:
        cid = _claim_id(fn)
        result = fn(battery)
        if result.claim_id != cid:
            raise InternalConsistencyError(f"claim id mismatch: {cid} vs {result.claim_id}")
        results.append(result)
        if only is not None and cid == only:
            break
    if only is not None:
        results = [r for r in results if r.claim_id == only]
    return ClaimsOutcome(results, time.perf_counter() - started)

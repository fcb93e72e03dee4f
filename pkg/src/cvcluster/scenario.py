"""Line-oriented protocol scripts: parse, pretty-print, execute, report.

The grammar is deliberately flat (one statement per line, ``#`` comments) so
scripts diff cleanly and diagnostics are a (line, column) pair:

    register N
    squeeze <m> momentum|position
    kerr <l> <k> [g=<real>]
    rotate <m> -90|90|180|<real>rad
    bs <l> <k> [t=<real>]
    measure x|y <m> -> <name>
    displace y|x <m> += <coeff>*<name>
    assert nullifier <coeff>*x<m>|y<m> [+|- ...]
    assert product
    print variance <combo> at r=<comma list>

Coefficients accept ``sqrt2`` and ``-sqrt2`` so beamsplitter-chain
assertions are exact by construction.  ``rotate <m> -90`` is the local
quarter turn (X, Y) -> (-Y, X) used throughout the correlation sets.

Execution binds to either engine.  The ledger engine is fully symbolic.
The covariance engine needs a numeric ``r``: it samples measurement
outcomes (seeded), conditions the live state, and verifies every variance
it reports against the ledger's closed form — a cross-engine check built
into ordinary script runs.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from . import covariance, ledger
from .errors import CvClusterError, InternalConsistencyError
from .gates import MOMENTUM_SQUEEZED, POSITION_SQUEEZED, X, Y

SQRT2 = math.sqrt(2.0)
# Numeric and symbolic variances must agree to this when both engines run.
BRIDGE_TOL = 1e-9


class ParseError(CvClusterError):
    """Rejects a script at a precise position, e.g. ``probe.cvq:3:9: expected basis``."""

    def __init__(self, line: int, col: int, expected: str, found: str):
        self.line = line
        self.col = col
        self.expected = expected
        self.found = found
        super().__init__(self.message)

    @property
    def message(self) -> str:
        found = f", found {self.found!r}" if self.found else ""
        return f"expected {self.expected}{found}"

    def render(self, source: str) -> str:
        return f"{source}:{self.line}:{self.col}: {self.message}"


class ScenarioRuntimeError(CvClusterError):
    """A statement failed while executing; carries its source position."""

    def __init__(self, line: int, col: int, message: str):
        self.line = line
        self.col = col
        super().__init__(message)

    def render(self, source: str) -> str:
        return f"{source}:{self.line}:{self.col}: {self}"


# ---------------------------------------------------------------------------
# Statements
# ---------------------------------------------------------------------------


def fmt_num(v: float) -> str:
    """Shortest stable rendering: integers bare, everything else via repr."""
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def fmt_coeff(coeff: float, literal: str | None) -> str:
    if literal is not None:
        return literal
    return fmt_num(coeff)


@dataclass(frozen=True)
class ComboTerm:
    coeff: float
    mode: int
    kind: str
    literal: str | None = None  # "sqrt2" / "-sqrt2" when written that way


def render_combo(terms: tuple[ComboTerm, ...]) -> str:
    chunks = []
    for i, t in enumerate(terms):
        if i == 0:
            chunks.append(f"{fmt_coeff(t.coeff, t.literal)}*{t.kind}{t.mode}")
        else:
            mag = fmt_coeff(abs(t.coeff), t.literal.lstrip("-") if t.literal else None)
            chunks.append(f"{'-' if t.coeff < 0 else '+'} {mag}*{t.kind}{t.mode}")
    return " ".join(chunks)


def combo_parts(terms) -> list[tuple[float, int, str]]:
    return [(t.coeff, t.mode, t.kind) for t in terms]


@dataclass(frozen=True)
class Statement:
    line: int = field(kw_only=True)
    col: int = field(kw_only=True)


@dataclass(frozen=True)
class RegisterStmt(Statement):
    n: int

    def render(self):
        return f"register {self.n}"


@dataclass(frozen=True)
class SqueezeStmt(Statement):
    mode: int
    direction: str

    def render(self):
        return f"squeeze {self.mode} {self.direction}"


@dataclass(frozen=True)
class KerrStmt(Statement):
    l: int
    k: int
    g: float = 1.0
    g_given: bool = False

    def render(self):
        tail = f" g={fmt_num(self.g)}" if self.g_given else ""
        return f"kerr {self.l} {self.k}{tail}"


@dataclass(frozen=True)
class RotateStmt(Statement):
    mode: int
    degrees: int | None = None  # one of -90, 90, 180
    radians: float | None = None

    def angle(self) -> float:
        if self.degrees is not None:
            return math.radians(self.degrees)
        return self.radians

    def render(self):
        if self.degrees is not None:
            return f"rotate {self.mode} {self.degrees}"
        return f"rotate {self.mode} {repr(self.radians)}rad"


@dataclass(frozen=True)
class BeamsplitStmt(Statement):
    l: int
    k: int
    t: float = 0.5
    t_given: bool = False

    def render(self):
        tail = f" t={fmt_num(self.t)}" if self.t_given else ""
        return f"bs {self.l} {self.k}{tail}"


@dataclass(frozen=True)
class MeasureStmt(Statement):
    kind: str
    mode: int
    name: str

    def render(self):
        return f"measure {self.kind} {self.mode} -> {self.name}"


@dataclass(frozen=True)
class DisplaceStmt(Statement):
    kind: str
    mode: int
    coeff: float
    name: str
    literal: str | None = None

    def render(self):
        return f"displace {self.kind} {self.mode} += {fmt_coeff(self.coeff, self.literal)}*{self.name}"


@dataclass(frozen=True)
class AssertNullifierStmt(Statement):
    terms: tuple[ComboTerm, ...]

    def render(self):
        return f"assert nullifier {render_combo(self.terms)}"


@dataclass(frozen=True)
class AssertProductStmt(Statement):
    def render(self):
        return "assert product"


@dataclass(frozen=True)
class PrintVarianceStmt(Statement):
    terms: tuple[ComboTerm, ...]
    rs: tuple[float, ...]

    def render(self):
        rlist = ",".join(fmt_num(r) for r in self.rs)
        return f"print variance {render_combo(self.terms)} at r={rlist}"


@dataclass(frozen=True)
class Scenario:
    statements: tuple[Statement, ...]

    @property
    def n(self) -> int:
        return self.statements[0].n

    def render(self) -> str:
        return "\n".join(s.render() for s in self.statements) + "\n"


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Tok:
    text: str
    col: int


def _tokenize(line: str) -> list[_Tok]:
    body = line.split("#", 1)[0]
    return [_Tok(m.group(), m.start() + 1) for m in re.finditer(r"\S+", body)]


class _LineParser:
    def __init__(self, lineno: int, toks: list[_Tok], line_len: int):
        self.lineno = lineno
        self.toks = toks
        self.pos = 0
        self.end_col = line_len + 1

    def peek(self) -> _Tok | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self, expected: str) -> _Tok:
        tok = self.peek()
        if tok is None:
            raise ParseError(self.lineno, self.end_col, expected, "")
        self.pos += 1
        return tok

    def fail(self, tok: _Tok, expected: str):
        raise ParseError(self.lineno, tok.col, expected, tok.text)

    def done(self):
        tok = self.peek()
        if tok is not None:
            self.fail(tok, "end of line")

    # -- typed takes ------------------------------------------------------

    def take_int(self, expected: str) -> tuple[int, _Tok]:
        tok = self.take(expected)
        try:
            return int(tok.text), tok
        except ValueError:
            self.fail(tok, expected)

    def take_real(self, expected: str) -> tuple[float, _Tok]:
        tok = self.take(expected)
        try:
            return float(tok.text), tok
        except ValueError:
            self.fail(tok, expected)

    def take_keyword(self, word: str):
        tok = self.take(f"'{word}'")
        if tok.text != word:
            self.fail(tok, f"'{word}'")

    def take_basis(self) -> _Tok:
        tok = self.take("basis")
        if tok.text not in (X, Y):
            self.fail(tok, "basis")
        return tok


def _parse_coeff(p: _LineParser, tok: _Tok, text: str, col: int) -> tuple[float, str | None]:
    if text == "sqrt2":
        return SQRT2, "sqrt2"
    if text == "-sqrt2":
        return -SQRT2, "-sqrt2"
    try:
        return float(text), None
    except ValueError:
        raise ParseError(p.lineno, col, "coefficient", text)


def _parse_combo_term(p: _LineParser, tok: _Tok, sign: float) -> ComboTerm:
    if "*" not in tok.text:
        p.fail(tok, "coefficient*quadrature term")
    coeff_text, quad_text = tok.text.split("*", 1)
    coeff, literal = _parse_coeff(p, tok, coeff_text, tok.col)
    quad_col = tok.col + len(coeff_text) + 1
    if not quad_text or quad_text[0] not in (X, Y):
        raise ParseError(p.lineno, quad_col, "basis", quad_text)
    try:
        mode = int(quad_text[1:])
    except ValueError:
        raise ParseError(p.lineno, quad_col + 1, "mode index", quad_text[1:])
    if sign < 0:
        coeff = -coeff
        literal = {None: None, "sqrt2": "-sqrt2", "-sqrt2": "sqrt2"}[literal]
    return ComboTerm(coeff, mode, quad_text[0], literal)


def _parse_combo(p: _LineParser, stop_word: str | None = None) -> tuple[ComboTerm, ...]:
    terms = [_parse_combo_term(p, p.take("combo term"), 1.0)]
    while True:
        tok = p.peek()
        if tok is None or (stop_word is not None and tok.text == stop_word):
            break
        sep = p.take("'+' or '-'")
        if sep.text not in ("+", "-"):
            p.fail(sep, "'+' or '-'")
        sign = 1.0 if sep.text == "+" else -1.0
        terms.append(_parse_combo_term(p, p.take("combo term"), sign))
    return tuple(terms)


def parse_combo(text: str) -> tuple[ComboTerm, ...]:
    """Parse a standalone combination with the statement-level syntax.

    ``1*y1 - 1*x3`` and friends; positions in raised errors use line 1.
    Mode indices are not range-checked here (no register to check against).
    """
    p = _LineParser(1, _tokenize(text), len(text))
    terms = _parse_combo(p)
    p.done()
    return terms


def parse(text: str, source: str = "<scenario>") -> Scenario:
    """Parse a script; raises :class:`ParseError` at the first problem.

    Also enforces the static invariants: exactly one ``register`` statement
    and it comes first, mode indices within range, measurement names bound
    before use and never rebound.
    """
    statements: list[Statement] = []
    n_modes: int | None = None
    names: set[str] = set()

    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = _tokenize(raw)
        if not toks:
            continue
        p = _LineParser(lineno, toks, len(raw.rstrip()))
        head = p.take("statement")

        def mode_tok(expected="mode index") -> int:
            m, tok = p.take_int(expected)
            if n_modes is None or not 1 <= m <= n_modes:
                p.fail(tok, f"mode index in 1..{n_modes}")
            return m

        if head.text == "register":
            if n_modes is not None:
                p.fail(head, "no second register statement")
            n, tok = p.take_int("mode count")
            if n < 1:
                p.fail(tok, "positive mode count")
            p.done()
            n_modes = n
            statements.append(RegisterStmt(n, line=lineno, col=head.col))
            continue
        if n_modes is None:
            p.fail(head, "'register' as the first statement")

        if head.text == "squeeze":
            m = mode_tok()
            d = p.take("'momentum' or 'position'")
            if d.text not in (MOMENTUM_SQUEEZED, POSITION_SQUEEZED):
                p.fail(d, "'momentum' or 'position'")
            p.done()
            statements.append(SqueezeStmt(m, d.text, line=lineno, col=head.col))
        elif head.text == "kerr":
            l = mode_tok()
            k = mode_tok()
            if l == k:
                p.fail(p.toks[p.pos - 1], "a mode distinct from the first")
            g, g_given = 1.0, False
            tok = p.peek()
            if tok is not None:
                if not tok.text.startswith("g="):
                    p.fail(tok, "g=<real>")
                g, _ = _parse_real_option(p, tok, "g=")
                g_given = True
                p.pos += 1
            p.done()
            statements.append(KerrStmt(l, k, g, g_given, line=lineno, col=head.col))
        elif head.text == "rotate":
            m = mode_tok()
            tok = p.take("-90, 90, 180 or <real>rad")
            if tok.text in ("-90", "90", "180"):
                statements.append(
                    RotateStmt(m, degrees=int(tok.text), line=lineno, col=head.col)
                )
            elif tok.text.endswith("rad"):
                try:
                    theta = float(tok.text[:-3])
                except ValueError:
                    p.fail(tok, "-90, 90, 180 or <real>rad")
                statements.append(
                    RotateStmt(m, radians=theta, line=lineno, col=head.col)
                )
            else:
                p.fail(tok, "-90, 90, 180 or <real>rad")
            p.done()
        elif head.text == "bs":
            l = mode_tok()
            k = mode_tok()
            if l == k:
                p.fail(p.toks[p.pos - 1], "a mode distinct from the first")
            t, t_given = 0.5, False
            tok = p.peek()
            if tok is not None:
                if not tok.text.startswith("t="):
                    p.fail(tok, "t=<real>")
                t, _ = _parse_real_option(p, tok, "t=")
                t_given = True
                p.pos += 1
            p.done()
            statements.append(BeamsplitStmt(l, k, t, t_given, line=lineno, col=head.col))
        elif head.text == "measure":
            basis = p.take_basis()
            m = mode_tok()
            p.take_keyword("->")
            name = p.take("record name")
            if not name.text.isidentifier():
                p.fail(name, "record name")
            if name.text in names:
                p.fail(name, "a name not already bound")
            names.add(name.text)
            p.done()
            statements.append(
                MeasureStmt(basis.text, m, name.text, line=lineno, col=head.col)
            )
        elif head.text == "displace":
            basis = p.take_basis()
            m = mode_tok()
            p.take_keyword("+=")
            tok = p.take("coefficient*name")
            if "*" not in tok.text:
                p.fail(tok, "coefficient*name")
            coeff_text, name_text = tok.text.split("*", 1)
            coeff, literal = _parse_coeff(p, tok, coeff_text, tok.col)
            if name_text not in names:
                raise ParseError(
                    p.lineno, tok.col + len(coeff_text) + 1, "a bound record name", name_text
                )
            p.done()
            statements.append(
                DisplaceStmt(
                    basis.text, m, coeff, name_text, literal, line=lineno, col=head.col
                )
            )
        elif head.text == "assert":
            what = p.take("'nullifier' or 'product'")
            if what.text == "nullifier":
                terms = _parse_combo(p)
                _check_combo_modes(p, terms, n_modes)
                p.done()
                statements.append(
                    AssertNullifierStmt(terms, line=lineno, col=head.col)
                )
            elif what.text == "product":
                p.done()
                statements.append(AssertProductStmt(line=lineno, col=head.col))
            else:
                p.fail(what, "'nullifier' or 'product'")
        elif head.text == "print":
            p.take_keyword("variance")
            terms = _parse_combo(p, stop_word="at")
            _check_combo_modes(p, terms, n_modes)
            p.take_keyword("at")
            tok = p.take("r=<comma list>")
            if not tok.text.startswith("r="):
                p.fail(tok, "r=<comma list>")
            try:
                rs = tuple(float(x) for x in tok.text[2:].split(","))
            except ValueError:
                p.fail(tok, "r=<comma list>")
            p.done()
            statements.append(
                PrintVarianceStmt(terms, rs, line=lineno, col=head.col)
            )
        else:
            p.fail(head, "statement keyword")

    if n_modes is None:
        raise ParseError(1, 1, "'register' statement", "")
    return Scenario(tuple(statements))


def _parse_real_option(p: _LineParser, tok: _Tok, prefix: str) -> tuple[float, _Tok]:
    try:
        return float(tok.text[len(prefix):]), tok
    except ValueError:
        p.fail(tok, f"{prefix}<real>")


def _check_combo_modes(p: _LineParser, terms, n_modes: int):
    for t in terms:
        if not 1 <= t.mode <= n_modes:
            raise ParseError(
                p.lineno, p.toks[0].col, f"mode index in 1..{n_modes}", str(t.mode)
            )


def pretty(text: str, source: str = "<scenario>") -> str:
    """Canonical form; ``pretty`` after ``pretty`` is the identity."""
    return parse(text, source).render()


# ---------------------------------------------------------------------------
# Execution
# ---------------------------------------------------------------------------


@dataclass
class RunReport:
    source: str
    engine: str
    r: float | None
    seed: int | None
    statements: int
    events: list[str] = field(default_factory=list)
    failures: list[tuple[int, str]] = field(default_factory=list)
    csv_rows: list[tuple[str, float, float]] = field(default_factory=list)
    asserts_total: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures

    def csv(self) -> str:
        lines = ["combo,r,variance"]
        lines += [f"{c},{fmt_num(r)},{v:.12g}" for c, r, v in self.csv_rows]
        return "\n".join(lines) + "\n"

    def render(self) -> str:
        passed = self.asserts_total - len(self.failures)
        lines = [
            f"scenario: {self.source}",
            f"engine: {self.engine}",
            f"r: {'-' if self.r is None else fmt_num(self.r)}",
            f"seed: {'-' if self.seed is None else self.seed}",
            f"statements: {self.statements}",
        ]
        lines += self.events
        if self.csv_rows:
            lines.append("csv:")
            lines.append(self.csv().rstrip("\n"))
        lines.append(
            f"status: {'pass' if self.ok else 'fail'} "
            f"({passed}/{self.asserts_total} asserts)"
        )
        return "\n".join(lines) + "\n"


LEDGER = "ledger"
COVARIANCE = "covariance"


def execute(
    scn: Scenario,
    engine: str = LEDGER,
    r: float | None = None,
    seed: int | None = None,
    source: str = "<scenario>",
) -> RunReport:
    """Run a scenario and collect assertion results and variance rows.

    The ledger engine is exact and needs no ``r``.  The covariance engine
    conditions a numeric Gaussian state: measurement outcomes are drawn
    from the prior marginal (deterministically under ``seed``), displacements
    move means, and every reported variance is recomputed from the gate tape
    and checked against the ledger's closed form.
    """
    return _run(scn, engine, r, seed, source).report


def ledger_register(scn: Scenario, source: str = "<scenario>") -> ledger.Register:
    """Execute on the exact engine and return the finished register.

    For callers that want to evaluate further combinations against the state
    a script builds (the command-line sweep does this).
    """
    return _run(scn, LEDGER, None, None, source).reg


def _run(scn, engine, r, seed, source) -> "_Execution":
    if engine not in (LEDGER, COVARIANCE):
        raise ScenarioRuntimeError(1, 1, f"unknown engine {engine!r}")
    if engine == COVARIANCE and r is None:
        raise ScenarioRuntimeError(1, 1, "covariance engine requires numeric r")
    exe = _Execution(scn, engine, r, seed, source)
    for stmt in scn.statements:
        try:
            exe.apply(stmt)
        except CvClusterError as err:
            if isinstance(err, (ScenarioRuntimeError, InternalConsistencyError)):
                raise
            raise ScenarioRuntimeError(stmt.line, stmt.col, str(err)) from err
    return exe


class _Execution:
    def __init__(self, scn, engine, r, seed, source):
        self.engine = engine
        self.r = r
        self.reg = ledger.Register(scn.n)
        self.names: dict[str, ledger.MeasurementRecord] = {}
        self.report = RunReport(source, engine, r, seed, len(scn.statements))
        self.state = None
        self.outcomes: dict[str, float] = {}
        self.index_map = {m: m for m in range(1, scn.n + 1)}
        if engine == COVARIANCE:
            self.state = covariance.vacuum_state(scn.n)
            self.rng = np.random.default_rng(seed)

    # -- engine plumbing ---------------------------------------------------

    def _gate(self, fn_name: str, *args):
        getattr(self.reg, fn_name)(*args)
        if self.engine == COVARIANCE:
            gate = self.reg.history[-1]
            mapped = _remap_gate(gate, self.index_map)
            self.state = covariance.apply_gate(self.state, mapped, self.r)

    def _replay_variance(self, parts, r: float) -> float:
        """Variance of a (possibly displaced) combo, two independent ways."""
        combo = self.reg.frame_combo(parts)
        tape_state = covariance.apply_tape(
            covariance.vacuum_state(self.reg.n), self.reg.history, r
        )
        numeric = covariance.variance_of(tape_state, combo)
        symbolic = ledger.variance_formula(self.reg.combine(parts), r)
        if abs(numeric - symbolic) > BRIDGE_TOL:
            raise InternalConsistencyError(
                f"engines disagree on a variance: {numeric!r} vs {symbolic!r}"
            )
        return numeric if self.engine == COVARIANCE else symbolic

    # -- statements --------------------------------------------------------

    def apply(self, stmt: Statement):
        name = type(stmt).__name__
        getattr(self, f"_do_{name}")(stmt)

    def _do_RegisterStmt(self, stmt):
        pass  # the register was allocated up front

    def _do_SqueezeStmt(self, stmt):
        self._gate("squeeze", stmt.mode, stmt.direction)

    def _do_KerrStmt(self, stmt):
        self._gate("kerr_couple", stmt.l, stmt.k, stmt.g)

    def _do_RotateStmt(self, stmt):
        if stmt.degrees == -90:
            self._gate("paper_minus_90", stmt.mode)
        else:
            self._gate("rotate", stmt.mode, stmt.angle())

    def _do_BeamsplitStmt(self, stmt):
        self._gate("beamsplit", stmt.l, stmt.k, stmt.t)

    def _do_MeasureStmt(self, stmt):
        rec = self.reg.measure(stmt.mode, stmt.kind)
        self.names[stmt.name] = rec
        note = ""
        if self.engine == COVARIANCE:
            cur = self.index_map[stmt.mode]
            q = covariance.quad_index(cur, stmt.kind)
            prior_mean = float(self.state.mean[q])
            prior_var = float(self.state.cov[q, q])
            outcome = float(self.rng.normal(prior_mean, math.sqrt(prior_var)))
            res = covariance.homodyne(self.state, cur, stmt.kind, outcome=outcome)
            self.state = res.state
            self.index_map = {
                orig: res.index_map[cur_i]
                for orig, cur_i in self.index_map.items()
                if cur_i != cur
            }
            self.outcomes[stmt.name] = outcome
            note = f" = {outcome:.12g}"
        self.report.events.append(
            f"line {stmt.line}: measure {stmt.kind} {stmt.mode} -> {stmt.name}{note}"
        )

    def _do_DisplaceStmt(self, stmt):
        rec = self.names[stmt.name]
        self.reg.displace_with(stmt.mode, stmt.kind, stmt.coeff, rec)
        if self.engine == COVARIANCE:
            cur = self.index_map[stmt.mode]
            q = covariance.quad_index(cur, stmt.kind)
            self.state.mean[q] += stmt.coeff * self.outcomes[stmt.name]

    def _do_AssertNullifierStmt(self, stmt):
        parts = combo_parts(stmt.terms)
        expr = self.reg.combine(parts)
        ok = ledger.is_nullifier(expr)
        if self.engine == COVARIANCE:
            # Nullifier status is symbolic; the numeric engine contributes a
            # consistency check of the same combination's variance at run r.
            self._replay_variance(parts, self.r)
        self._record_assert(stmt, f"assert nullifier {render_combo(stmt.terms)}", ok)

    def _do_AssertProductStmt(self, stmt):
        partition = self.reg.product_partition()
        ok = all(len(block) == 1 for block in partition)
        if self.engine == COVARIANCE and ok:
            cov = self.state.cov
            for i in range(self.state.n):
                for j in range(i + 1, self.state.n):
                    block = cov[2 * i : 2 * i + 2, 2 * j : 2 * j + 2]
                    if np.max(np.abs(block)) > BRIDGE_TOL:
                        ok = False
        self._record_assert(stmt, "assert product", ok)

    def _do_PrintVarianceStmt(self, stmt):
        combo_text = render_combo(stmt.terms)
        parts = combo_parts(stmt.terms)
        for rv in stmt.rs:
            self.report.csv_rows.append(
                (combo_text, rv, self._replay_variance(parts, rv))
            )
        self.report.events.append(
            f"line {stmt.line}: print variance {combo_text} ({len(stmt.rs)} rows)"
        )

    def _record_assert(self, stmt, text: str, ok: bool):
        self.report.asserts_total += 1
        self.report.events.append(
            f"line {stmt.line}: {text} .. {'pass' if ok else 'FAIL'}"
        )
        if not ok:
            self.report.failures.append((stmt.line, text))


def _remap_gate(gate, index_map):
    from . import gates as G

    if isinstance(gate, G.Squeeze):
        return G.Squeeze(index_map[gate.mode], gate.direction)
    if isinstance(gate, G.Kerr):
        return G.Kerr(index_map[gate.l], index_map[gate.k], gate.g)
    if isinstance(gate, G.Rotate):
        return G.Rotate(index_map[gate.mode], gate.theta)
    if isinstance(gate, G.Beamsplit):
        return G.Beamsplit(index_map[gate.l], index_map[gate.k], gate.t)
    raise InternalConsistencyError(f"unknown gate {gate!r}")


def run_file(path, engine: str = LEDGER, r: float | None = None, seed: int | None = None) -> RunReport:
    """Parse and execute a ``.cvq`` file (UTF-8, LF or CRLF)."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    scn = parse(text, source=str(path))
    return execute(scn, engine=engine, r=r, seed=seed, source=str(path))

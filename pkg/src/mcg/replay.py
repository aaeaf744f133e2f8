"""Script replay: execute statements in order, verdict each assertion,
cross-check with the homology oracle, track the proved element set."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .errors import McgError, NotAnInvolution, WindowTooSmall
from .homology import _support_bound, verify_identity_homology
from .modelfile import load_model
from .models import SurfaceModel
from .permgroup import Permutation, project
from .rewrite import (
    DEFAULT_BUDGET,
    DEFAULT_WINDOW,
    check_involution,
    equivalent,
    reduce_word,
)
from .script import (
    CONVENTIONS_TEXT,
    EvalContext,
    PermSpec,
    ProofScript,
    SAssertEq,
    SAssertInvolution,
    SAssertProjection,
    SGoalset,
    SLet,
    eval_word,
)
from .words import Sym, Word, empty_word, invert


@dataclass
class StatementResult:
    index: int
    line: int
    kind: str
    statement: str
    verdict: str  # ProvedEqual / ProvedDistinct / Unknown / Yes / No / ok / error
    ok: bool
    oracle: str = ""  # homology cross-check, when one ran
    budget_used: int = 0
    witness: str = ""
    wall_ms: float = 0.0

    def json_fields(self) -> dict:
        return {
            "index": self.index,
            "line": self.line,
            "kind": self.kind,
            "statement": self.statement,
            "verdict": self.verdict,
            "ok": self.ok,
            "oracle": self.oracle,
            "budget_used": self.budget_used,
            "witness": self.witness,
        }


@dataclass
class ReplayReport:
    script: str
    model: str
    n: int
    conventions: str
    budget: int
    window: int
    statements: list[StatementResult] = field(default_factory=list)
    wall_s: float = 0.0

    @property
    def passed(self) -> bool:
        return all(s.ok for s in self.statements)

    @property
    def failures(self) -> list[StatementResult]:
        return [s for s in self.statements if not s.ok]

    @property
    def unknowns(self) -> list[StatementResult]:
        return [s for s in self.statements if s.verdict == "Unknown"]


def _goal_equivalent(w: Word, proved: list[tuple[str, Word]], budget: int, window: int):
    # normalization only: goal targets are derived literally by the scripts,
    # and oracle calls per candidate pair would dominate the replay time
    for name, candidate in reversed(proved):
        v = equivalent(candidate, w, budget, window, oracles=False)
        if v.kind == "ProvedEqual":
            return name, v
    return None, None


def replay(
    script: ProofScript,
    n: int | None = None,
    budget: int | None = None,
    window: int = DEFAULT_WINDOW,
    model: SurfaceModel | None = None,
) -> ReplayReport:
    """Run a parsed script; failures do not stop execution."""
    n = n if n is not None else script.default_n()
    if script.param is not None:
        msg = script.param.check(n)
        if msg:
            raise McgError(f"{script.path}: {msg}")
    budget = budget if budget is not None else (script.budget or DEFAULT_BUDGET)
    if model is None:
        model = load_model(script.kind, n if script.kind == "sn" else None)
    ctx = EvalContext(model, n)
    proved: list[tuple[str, Word]] = []
    report = ReplayReport(
        script.path, model.describe(), n, CONVENTIONS_TEXT, budget, window
    )

    t_start = time.perf_counter()
    for idx, stmt in enumerate(script.statements):
        t0 = time.perf_counter()
        res = StatementResult(idx, stmt.line, type(stmt).__name__[1:], stmt.text(), "ok", True)
        try:
            if isinstance(stmt, SLet):
                w = eval_word(stmt.expr, ctx)
                _check_window(w, window)
                # binding reduction is internal representation management,
                # not an assertion: give it a working floor so a starved
                # assertion budget cannot snowball the bound names
                w = reduce_word(w, max(budget, DEFAULT_BUDGET))
                ctx.env[stmt.name] = w
                proved.append((stmt.name, w))
                res.verdict = "bound"
            elif isinstance(stmt, SAssertEq):
                left = eval_word(stmt.left, ctx)
                right = eval_word(stmt.right, ctx)
                _check_window(left, window), _check_window(right, window)
                v = equivalent(left, right, budget, window)
                hom = verify_identity_homology(left, right, window)
                res.verdict = v.kind
                res.oracle = str(hom)
                res.budget_used = getattr(v, "budget_used", 0)
                res.witness = getattr(v, "witness", "") or "; ".join(getattr(v, "trace", ()))
                res.ok = v.kind == "ProvedEqual" and hom.status != "Refuted"
                if v.kind == "ProvedEqual" and hom.status == "Refuted":
                    res.witness = f"ORACLE CONFLICT: {hom.witness}"
                if res.ok:
                    # both sides are proved equal; the right side is the
                    # compact display form, keep that one
                    proved.append((f"eq@{stmt.line}", reduce_word(right, max(budget, DEFAULT_BUDGET))))
            elif isinstance(stmt, SAssertInvolution):
                w = eval_word(stmt.expr, ctx)
                _check_window(w, window)
                k = 0
                while k < len(w.letters) and isinstance(w.letters[k], Sym):
                    k += 1
                if 0 < k < len(w.letters):
                    rho = Word(model, w.letters[:k])
                    x = Word(model, w.letters[k:])
                    v = check_involution(rho, x, budget, window)
                    hom = verify_identity_homology(rho * x * rho, invert(x), window)
                else:
                    v = equivalent(w * w, empty_word(model), budget, window)
                    hom = verify_identity_homology(w * w, empty_word(model), window)
                res.verdict = v.kind
                res.oracle = str(hom)
                res.budget_used = getattr(v, "budget_used", 0)
                res.witness = getattr(v, "witness", "")
                res.ok = v.kind == "ProvedEqual" and hom.status != "Refuted"
                if res.ok:
                    proved.append((f"involution@{stmt.line}", w))
            elif isinstance(stmt, SAssertProjection):
                w = eval_word(stmt.expr, ctx)
                got = project(w)
                want = _perm_of(stmt.perm, model.n)
                res.verdict = "Yes" if got == want else "No"
                res.ok = got == want
                if not res.ok:
                    res.witness = f"projects to {got.cycle_notation()}, expected {want.cycle_notation()}"
            elif isinstance(stmt, SGoalset):
                misses = []
                hits = []
                for g in stmt.goals:
                    w = eval_word(g, ctx)
                    name, _v = _goal_equivalent(w, proved, budget, window)
                    if name is None:
                        misses.append(g.text())
                    else:
                        hits.append(f"{g.text()} <= {name}")
                res.verdict = "Yes" if not misses else "No"
                res.ok = not misses
                res.witness = "; ".join(hits if not misses else ["missing: " + ", ".join(misses)])
            else:
                raise McgError(f"unhandled statement {stmt!r}")
        except NotAnInvolution as e:
            res.verdict, res.ok, res.witness = "NotAnInvolution", False, str(e)
        except WindowTooSmall:
            raise
        except McgError as e:
            res.verdict, res.ok, res.witness = "error", False, str(e)
        res.wall_ms = (time.perf_counter() - t0) * 1000
        report.statements.append(res)
    report.wall_s = time.perf_counter() - t_start
    return report


def _check_window(w: Word, window: int) -> None:
    top, disp = _support_bound((w,))
    if top + disp > window:
        raise WindowTooSmall(
            f"window {window} is below the displacement bound {top + disp} of {w}"
        )


def _perm_of(spec: PermSpec, n: int) -> Permutation:
    if spec.kind == "ncycle":
        return Permutation.from_cycles(n, "(" + " ".join(map(str, range(1, n + 1))) + ")")
    if spec.kind == "identity":
        return Permutation.identity(n)
    return Permutation.from_cycles(n, spec.text())

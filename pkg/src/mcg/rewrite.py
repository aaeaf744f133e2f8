"""Deciding word identities by normalization plus bounded braid search.

The strategy is a deterministic loop:

1. *Symmetry pushing.* Every finite-order symmetry letter is moved to the
   right end of the word; each twist or shift it passes over is relabelled by
   the symmetry's exact label action (``f t_c f~ = t_{f(c)}``). The pushed-out
   tail composes into a single affine automorphism; the models represent
   their symmetry subgroups faithfully on labels, so an identity automorphism
   is the identity element and the tail may be dropped.

2. *Free reduction and commutation sorting.* Twists about disjoint curves
   commute; the word is brought to the lexicographically least representative
   of its trace-equivalence class under a fixed total label order, cancelling
   inverse pairs that become adjacent. This alone settles most derivation
   steps.

3. *Braid moves.* For curves meeting once, the braid relation
   ``A B A = B A B`` and the transport rule ``A^s B^t A^-s = B^-s A^t B^s``
   (its conjugation form) are applied by a best-first search over
   commutation-canonical forms, shortest words first, until the empty word is
   reached or the rewrite budget runs out. Shift letters pass over twists by
   relabelling genus indices where the shift's action is defined.

Failure to normalize is not a proof of distinctness: the decision wrapper
escalates to the homology and end-permutation oracles, whose disagreement is
a certificate, and otherwise reports Unknown.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import BudgetExhausted, ModelMismatch, NotAnInvolution, UndefinedSymmetry
from .labels import CurveLabel, FAMILY_RANK
from .models import AliasMap, Automorphism, SurfaceModel
from .words import Letter, Shift, Sym, Twist, Word, empty_word, invert

DEFAULT_BUDGET = 100_000
DEFAULT_WINDOW = 40


class Budget:
    """Counts rewrite applications against a hard limit."""

    def __init__(self, limit: int):
        self.limit = limit
        self.spent = 0

    def spend(self, k: int = 1) -> None:
        self.spent += k
        if self.spent > self.limit:
            raise BudgetExhausted(self.spent)


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class ProvedEqual:
    kind = "ProvedEqual"
    trace: tuple[str, ...]
    budget_used: int


@dataclass(frozen=True)
class ProvedDistinct:
    kind = "ProvedDistinct"
    oracle: str
    witness: str


@dataclass(frozen=True)
class Unknown:
    kind = "Unknown"
    reason: str
    budget_used: int


Verdict = ProvedEqual | ProvedDistinct | Unknown


# ---------------------------------------------------------------------------
# label geometry helpers


def strand_set(c: CurveLabel) -> frozenset[int]:
    """Ends whose strands the curve touches (sn labels only)."""
    if c.family == "C" and c.index == 0:
        return frozenset((c.end, c.end + 1))  # normalized on use
    return frozenset((c.end,))


def shift_relabel(model: SurfaceModel, h, exp: int, c: CurveLabel) -> CurveLabel | None:
    """Image of a curve under the shift ``h^exp``; None when it would cross
    the central region (the label system has no name for the image)."""
    p, q = h.from_end, h.to_end
    ends = {p, q}
    touched = {model._norm_end(e) for e in strand_set(c)}
    if not (touched & ends):
        return c
    if c.family == "C" and c.index == 0:
        return None
    attract = q if exp > 0 else p
    if c.end == attract:
        return CurveLabel(c.family, c.index + 1, c.end)
    moved = CurveLabel(c.family, c.index - 1, c.end)
    return moved if model.is_valid_curve(moved) and moved.index >= 1 else None


# ---------------------------------------------------------------------------
# rewrite context: per-model caches for the hot paths


class _Ctx:
    def __init__(self, model: SurfaceModel):
        self.model = model
        self._comm: dict[tuple, bool] = {}
        self._key: dict[Letter, tuple] = {}

    def commutes(self, x: Letter, y: Letter) -> bool:
        kx = (x.label, x.__class__) if not isinstance(x, Sym) else (x.name, Sym)
        ky = (y.label, y.__class__) if not isinstance(y, Sym) else (y.name, Sym)
        key = (kx, ky)
        hit = self._comm.get(key)
        if hit is None:
            hit = self._comm[key] = self._commutes(x, y)
            self._comm[(ky, kx)] = hit
        return hit

    def _commutes(self, x: Letter, y: Letter) -> bool:
        if isinstance(x, Sym) or isinstance(y, Sym):
            return False  # blocked symmetry letters are opaque
        if isinstance(x, Twist) and isinstance(y, Twist):
            return self.model.intersection(x.label, y.label) == 0
        if isinstance(x, Shift) and isinstance(y, Shift):
            return x.label == y.label or not (x.label.ends & y.label.ends)
        tw, sh = (x, y) if isinstance(x, Twist) else (y, x)
        touched = {self.model._norm_end(e) for e in strand_set(tw.label)}
        return not (touched & sh.label.ends)

    def key(self, g: Letter) -> tuple:
        hit = self._key.get(g)
        if hit is None:
            hit = self._key[g] = self._sort_key(g)
        return hit

    def _sort_key(self, g: Letter) -> tuple:
        if isinstance(g, Twist):
            c = g.label
            if self.model.kind == "sn":
                return (0, c.end, c.index, FAMILY_RANK[c.family], -g.exp)
            return (0, c.index, 0, FAMILY_RANK[c.family], -g.exp)
        if isinstance(g, Shift):
            return (1, g.label.from_end, g.label.to_end, 0, -g.exp)
        return (2, g.name, g.exp, 0, 0)


_CTXES: dict[int, _Ctx] = {}


def _ctx(model: SurfaceModel) -> _Ctx:
    ctx = _CTXES.get(id(model))
    if ctx is None or ctx.model is not model:
        ctx = _CTXES[id(model)] = _Ctx(model)
    return ctx


# ---------------------------------------------------------------------------
# symmetry pushing


def split_symmetries(
    w: Word, aliases: AliasMap | None = None
) -> tuple[list[Letter], Automorphism, list[Letter]]:
    """(relabelled twist/shift letters, composite automorphism, original
    symmetry letters in order). Raises UndefinedSymmetry when a symmetry
    without a label action (the end swap on sn) must pass over a letter."""
    model = w.model
    aut = Automorphism.identity(model)
    core: list[Letter] = []
    tail: list[Letter] = []
    for g in w.letters:
        if isinstance(g, Sym):
            step = model.automorphism_of_word([(g.name, g.exp)], aliases)
            aut = aut.compose(step)
            tail.append(g)
        elif isinstance(g, Twist):
            core.append(Twist(aut.act_curve(g.label), g.exp))
        else:
            lab, exp = aut.act_shift(g.label, g.exp)
            core.append(Shift(lab, exp))
    return core, aut, tail


def push_symmetries(w: Word, aliases: AliasMap | None = None) -> Word:
    """All symmetry letters moved to the right end; equals ``w`` in the group.
    A tail whose composite label action is the identity is dropped (the
    models act faithfully through their declared label actions)."""
    core, aut, tail = split_symmetries(w, aliases)
    if aut.is_identity():
        tail = []
    return Word(w.model, tuple(core) + tuple(tail))


# ---------------------------------------------------------------------------
# commutation-canonical form


def _cancel_adjacent(letters: list[Letter], budget: Budget) -> tuple[list[Letter], bool]:
    out: list[Letter] = []
    changed = False
    for g in letters:
        if (
            out
            and not isinstance(g, Sym)
            and type(out[-1]) is type(g)
            and out[-1].label == g.label
            and out[-1].exp + g.exp == 0
        ):
            out.pop()
            changed = True
            budget.spend()
        else:
            out.append(g)
    return out, changed


def _left_greedy(ctx: _Ctx, letters: list[Letter]) -> list[Letter]:
    """Lexicographically least trace-equivalent word (left-greedy normal form)."""
    rem = list(letters)
    out: list[Letter] = []
    while rem:
        best_i = 0
        best_key = None
        for p, x in enumerate(rem):
            if all(ctx.commutes(rem[q], x) for q in range(p)):
                k = ctx.key(x)
                if best_key is None or k < best_key:
                    best_key, best_i = k, p
        out.append(rem.pop(best_i))
    return out


_SORT_LENGTH_CAP = 600  # the greedy sort is cubic; beyond this, cancel only


def canonical(model: SurfaceModel, letters: Sequence[Letter], budget: Budget) -> tuple[Letter, ...]:
    """Free reduction + commutation sorting to a fixpoint.

    The greedy sort is idempotent, so the loop exits as soon as one round
    neither cancels nor reorders anything.
    """
    ctx = _ctx(model)
    cur = list(letters)
    while True:
        cur, c1 = _cancel_adjacent(cur, budget)
        if len(cur) > _SORT_LENGTH_CAP:
            return tuple(cur)
        nxt = _left_greedy(ctx, cur)
        moved = nxt != cur
        cur, c2 = _cancel_adjacent(nxt, budget)
        if not (c1 or moved or c2):
            return tuple(cur)


# ---------------------------------------------------------------------------
# braid and shift moves


def _movable(ctx: _Ctx, letters: Sequence[Letter], span: tuple[int, int], skip: int, labels) -> bool:
    """Letters strictly inside span (except position skip) commute with both labels."""
    la, lb = labels
    ta, tb = Twist(la, 1), Twist(lb, 1)
    for p in range(span[0] + 1, span[1]):
        if p == skip:
            continue
        g = letters[p]
        if not (ctx.commutes(g, ta) and ctx.commutes(g, tb)):
            return False
    return True


def _neighbors(model: SurfaceModel, letters: tuple[Letter, ...]) -> Iterator[tuple[str, list[Letter]]]:
    ctx = _ctx(model)
    n = len(letters)
    for j in range(n):
        y = letters[j]
        if not isinstance(y, Twist):
            continue
        for i in range(j):
            x = letters[i]
            if not isinstance(x, Twist):
                continue
            if model.intersection(x.label, y.label) != 1:
                continue
            a, b = x.label, y.label
            for k in range(j + 1, n):
                z = letters[k]
                if not isinstance(z, Twist) or z.label != a:
                    continue
                if not _movable(ctx, letters, (i, k), j, (a, b)):
                    continue
                s, t = x.exp, y.exp
                out = list(letters)
                if z.exp == -s:
                    # A^s B^t A^-s = B^-s A^t B^s
                    out[i], out[j], out[k] = Twist(b, -s), Twist(a, t), Twist(b, s)
                    yield (f"transport@{i}", out)
                elif z.exp == s and t == s:
                    out[i], out[j], out[k] = Twist(b, s), Twist(a, s), Twist(b, s)
                    yield (f"braid@{i}", out)
    if model.kind != "sn":
        return
    for i in range(n):
        g = letters[i]
        if not isinstance(g, Shift):
            continue
        for k in range(n):
            if k == i:
                continue
            t = letters[k]
            if not isinstance(t, Twist) or ctx.commutes(g, t):
                continue
            lo, hi = (i, k) if i < k else (k, i)
            clear = all(
                ctx.commutes(letters[p], g) and ctx.commutes(letters[p], t)
                for p in range(lo + 1, hi)
            )
            if not clear:
                continue
            if i < k:
                img = shift_relabel(model, g.label, g.exp, t.label)
                if img is None:
                    continue
                out = list(letters)
                out[i], out[k] = Twist(img, t.exp), g
                yield (f"shift-right@{i}", out)
            else:
                img = shift_relabel(model, g.label, -g.exp, t.label)
                if img is None:
                    continue
                out = list(letters)
                out[k], out[i] = g, Twist(img, t.exp)
                yield (f"shift-left@{i}", out)


def _search(
    model: SurfaceModel,
    start: tuple[Letter, ...],
    budget: Budget,
    stop_at_empty: bool,
) -> tuple[tuple[Letter, ...], tuple[str, ...]]:
    """Best-first search over canonical forms. Returns the best form reached
    (the empty word if stop_at_empty succeeded) and the move trace to it."""
    ctx = _ctx(model)
    counter = itertools.count()
    seen: dict[tuple[Letter, ...], tuple | None] = {start: None}
    best = start
    best_rank = (len(start), tuple(ctx.key(g) for g in start))
    if stop_at_empty and not start:
        return start, ()
    heap = [(len(start), next(counter), start)]
    while heap:
        _, _, cur = heapq.heappop(heap)
        for desc, raw in _neighbors(model, cur):
            budget.spend()
            new = canonical(model, raw, budget)
            if new in seen:
                continue
            seen[new] = (cur, desc)
            rank = (len(new), tuple(ctx.key(g) for g in new))
            if rank < best_rank:
                best, best_rank = new, rank
            if stop_at_empty and not new:
                return new, _trace(seen, new)
            heapq.heappush(heap, (len(new), next(counter), new))
    return best, _trace(seen, best)


def _trace(seen: dict, node: tuple) -> tuple[str, ...]:
    moves: list[str] = []
    while seen.get(node) is not None:
        node, desc = seen[node]
        moves.append(desc)
    return tuple(reversed(moves))


# ---------------------------------------------------------------------------
# public operations


@dataclass(frozen=True)
class NormalizeResult:
    normalized: bool
    word: Word
    trace: tuple[str, ...]
    budget_used: int


def reduce_word(w: Word, budget: int = DEFAULT_BUDGET) -> Word:
    """Sound reduction to the shortest form found within the budget
    (symmetry push, commutation canonical form, braid minimization); keeps
    bound names from snowballing during replay."""
    b = Budget(budget)
    model = w.model
    try:
        core, aut, tail = split_symmetries(w)
    except UndefinedSymmetry:
        try:
            return Word(model, canonical(model, list(w.letters), b))
        except BudgetExhausted:
            return w
    try:
        form = canonical(model, core, b)
        form, _trace = _search(model, form, b, stop_at_empty=False)
    except BudgetExhausted:
        try:
            form = canonical(model, core, Budget(max(budget, 4 * len(core))))
        except BudgetExhausted:
            form = tuple(core)
    tail_letters = () if aut.is_identity() else tuple(tail)
    return Word(model, form + tail_letters)


def normalize(
    w: Word, budget: int = DEFAULT_BUDGET, aliases: AliasMap | None = None
) -> NormalizeResult:
    """Deterministic canonical-ish form of ``w`` within the budget."""
    model = w.model
    b = Budget(budget)
    try:
        try:
            core, aut, tail = split_symmetries(w, aliases)
        except UndefinedSymmetry:
            form = canonical(model, list(w.letters), b)
            return NormalizeResult(True, Word(model, form), ("symmetry-blocked",), b.spent)
        start = canonical(model, core, b)
        best, trace = _search(model, start, b, stop_at_empty=False)
        tail_letters = () if aut.is_identity() else tuple(tail)
        return NormalizeResult(True, Word(model, best + tail_letters), trace, b.spent)
    except BudgetExhausted:
        return NormalizeResult(False, w, ("budget-exhausted",), b.spent)


def equivalent(
    w1: Word,
    w2: Word,
    budget: int = DEFAULT_BUDGET,
    window: int = DEFAULT_WINDOW,
    aliases: AliasMap | None = None,
    oracles: bool = True,
) -> Verdict:
    """Decide w1 = w2: ProvedEqual via normalization of w1 w2^-1 to the empty
    word, ProvedDistinct via an oracle disagreement, else Unknown."""
    if w1.model is not w2.model:
        raise ModelMismatch("words over different models")
    model = w1.model
    w = w1 * invert(w2)
    b = Budget(budget)
    reason = "not reduced to the empty word"
    try:
        core, aut, _tail = split_symmetries(w, aliases)
        if aut.is_identity():
            start = canonical(model, core, b)
            if not start:
                return ProvedEqual(("canonical",), b.spent)
            best_form, trace = _search(model, start, b, stop_at_empty=True)
            if not best_form:
                return ProvedEqual(trace, b.spent)
        else:
            reason = "symmetry parts differ as label automorphisms"
    except UndefinedSymmetry:
        reason = "word contains a symmetry without a label action"
    except BudgetExhausted:
        reason = "budget exhausted"

    if not oracles:
        return Unknown(reason, b.spent)

    from .homology import verify_identity_homology
    from .permgroup import project

    p1, p2 = project(w1, aliases=aliases), project(w2, aliases=aliases)
    if p1 != p2:
        e = next(e for e in range(1, model.n + 1) if p1(e) != p2(e))
        return ProvedDistinct("projection", f"end {e} maps to {p1(e)} vs {p2(e)}")
    hom = verify_identity_homology(w1, w2, window, aliases=aliases)
    if hom.status == "Refuted":
        return ProvedDistinct("homology", hom.witness)
    return Unknown(reason, b.spent)


def check_involution(
    rho: Word,
    x: Word,
    budget: int = DEFAULT_BUDGET,
    window: int = DEFAULT_WINDOW,
    aliases: AliasMap | None = None,
) -> Verdict:
    """Certify that (rho x)^2 = 1 given rho^2 = 1.

    With rho an involution, rho x rho = x^-1 is exactly the statement that
    rho x has order two.
    """
    if rho.model is not x.model:
        raise ModelMismatch("words over different models")
    rr = equivalent(rho * rho, empty_word(rho.model), budget, window, aliases)
    if rr.kind != "ProvedEqual":
        raise NotAnInvolution(f"conjugator squared is not provably trivial: {rr.kind}")
    return equivalent(rho * x * rho, invert(x), budget, window, aliases)

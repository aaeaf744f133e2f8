"""Exact-integer homology oracle on a finite-genus truncation.

Every handle position carries a symplectic pair of first-homology classes
``a`` (through the handle) and ``b`` (around it) with ``<a, b> = +1``;
distinct positions are orthogonal. Curve classes in this basis:

* ``A``/``A'`` curves map to the ``a`` class of their handle. The two curves
  through one handle are exchanged by an involutive symmetry that preserves
  the pairing, which forces their classes to agree up to sign, so the oracle
  cannot separate them (a necessary-condition checker, not a complete one).
* ``B`` curves map to the ``b`` class.
* The linking curve ``C`` at position k maps to ``a_k - a_{k+1}``; the
  genus-0 ``C`` of an ``sn`` strand links the first handles of two
  neighbouring strands.

A right-handed twist about a curve with class c acts as the transvection
``x -> x + <x, c> c``; the sign convention is pinned by a startup self test
(braid identity on a symplectic pair). Symmetries act by permuting basis
positions; handle shifts translate one or two strands by a genus step and
carry a validity mask excluding columns whose trajectory leaves the window.
A verdict is always relative to the common valid subspace: ``Consistent`` is
a necessary condition, not a proof.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import OutOfWindow, UndefinedSymmetry
from .labels import ChainShift, CurveLabel, ShiftLabel
from .models import AliasMap, Automorphism, SurfaceModel
from .words import Letter, Shift, Twist, Word

# basis keys: ("a"|"b", end, genus) on sn, ("a"|"b", k) on the chain models
Key = tuple
Vec = dict[Key, int]


@dataclass(frozen=True)
class TruncatedBasis:
    """Ordered symplectic basis of a finite-genus truncation."""

    model: SurfaceModel
    window: int

    def __post_init__(self):
        if self.window < 2:
            raise OutOfWindow("window must be at least 2")

    def keys(self) -> list[Key]:
        out: list[Key] = []
        if self.model.kind == "sn":
            for e in range(1, self.model.n + 1):
                for i in range(1, self.window + 1):
                    out.extend((("a", e, i), ("b", e, i)))
        else:
            for k in range(-self.window, self.window + 1):
                out.extend((("a", k), ("b", k)))
        return out

    def in_window(self, key: Key) -> bool:
        if self.model.kind == "sn":
            return 1 <= key[2] <= self.window
        return -self.window <= key[1] <= self.window

    def key_label(self, key: Key) -> str:
        fam = "A" if key[0] == "a" else "B"
        if self.model.kind == "sn":
            return f"{fam}[{key[2]},{key[1]}]-class"
        c = CurveLabel(fam, key[1])
        return f"{self.model.format_curve(c)}-class"

    def class_of(self, c: CurveLabel) -> Vec:
        """Homology class of a curve; positions may lie outside the window
        (callers mask columns whose images do)."""
        m = self.model
        if m.kind == "sn":
            if c.family in ("A", "Ap"):
                return {("a", c.end, c.index): 1}
            if c.family == "B":
                return {("b", c.end, c.index): 1}
            if c.index == 0:
                return {("a", c.end, 1): 1, ("a", m._norm_end(c.end + 1), 1): -1}
            return {("a", c.end, c.index): 1, ("a", c.end, c.index + 1): -1}
        if c.family in ("A", "Ap"):
            return {("a", c.index): 1}
        if c.family == "B":
            return {("b", c.index): 1}
        return {("a", c.index): 1, ("a", c.index + 1): -1}


def pairing(u: Vec, v: Vec) -> int:
    """The skew form: <a_x, b_x> = 1 position-wise."""
    total = 0
    for key, cu in u.items():
        kind = key[0]
        mate = ("b",) + key[1:] if kind == "a" else ("a",) + key[1:]
        cv = v.get(mate)
        if cv:
            total += cu * cv if kind == "a" else -cu * cv
    return total


def _twist_apply(v: Vec, cls: Vec, exp: int) -> Vec:
    s = pairing(v, cls)
    if not s:
        return v
    out = dict(v)
    for key, c in cls.items():
        out[key] = out.get(key, 0) + exp * s * c
        if not out[key]:
            del out[key]
    return out


class _ColumnTracker:
    """Applies a word to one basis vector, right to left, tracking validity."""

    def __init__(self, basis: TruncatedBasis, aliases: AliasMap | None):
        self.basis = basis
        self.model = basis.model
        self.aliases = aliases
        self._classes: dict[CurveLabel, Vec] = {}
        self._auts: dict[tuple[str, int], Automorphism] = {}

    def cls(self, label: CurveLabel) -> Vec:
        hit = self._classes.get(label)
        if hit is None:
            hit = self._classes[label] = self.basis.class_of(label)
        return hit

    def aut(self, name: str, exp: int) -> Automorphism:
        hit = self._auts.get((name, exp))
        if hit is None:
            hit = self._auts[(name, exp)] = self.model.automorphism_of_word(
                [(name, exp)], self.aliases
            )
        return hit

    def _aut_key(self, aut: Automorphism, key: Key) -> Key:
        if self.model.kind == "sn":
            return (key[0], aut._map_end(key[1]), key[2])
        return (key[0], aut._map_index(key[1]))

    def _shift_key(self, h: ShiftLabel, exp: int, key: Key) -> Key | None:
        end = key[1]
        if end not in (h.from_end, h.to_end):
            return key
        attract = h.to_end if exp > 0 else h.from_end
        genus = key[2] + 1 if end == attract else key[2] - 1
        if genus < 1:
            return None  # would cross the central region
        return (key[0], end, genus)

    def apply(self, letters: Sequence[Letter], start: Key) -> Vec | None:
        """Column of the word matrix at ``start``; None when masked out."""
        v: Vec = {start: 1}
        for g in reversed(letters):
            if isinstance(g, Twist):
                v = _twist_apply(v, self.cls(g.label), g.exp)
            elif isinstance(g, Shift):
                out: Vec = {}
                ok = True
                for key, c in v.items():
                    nk = self._shift_key(g.label, g.exp, key)
                    if nk is None or not self.basis.in_window(nk):
                        ok = False
                        break
                    out[nk] = out.get(nk, 0) + c
                if not ok:
                    return None
                v = out
            else:
                aut = self.aut(g.name, g.exp)
                out = {}
                for key, c in v.items():
                    nk = self._aut_key(aut, key)
                    if not self.basis.in_window(nk):
                        return None
                    out[nk] = out.get(nk, 0) + c
                v = out
            if any(not self.basis.in_window(k) for k in v):
                return None
        return v


# ---------------------------------------------------------------------------
# identity verification


@dataclass(frozen=True)
class HomologyResult:
    status: str  # "Consistent" | "Refuted" | "Inconclusive"
    witness: str = ""
    valid_columns: int = 0
    checked_columns: int = 0

    def __str__(self) -> str:
        tail = f" [{self.witness}]" if self.witness else ""
        return f"{self.status}({self.valid_columns}/{self.checked_columns} columns){tail}"


def _support_bound(words: Iterable[Word]) -> tuple[int, int]:
    """(max index magnitude touched, max displacement a column can see).

    The displacement is the number of shift letters (each moves a strand
    position by one) plus, on the chain models, the largest translation part
    of any suffix-composite of the symmetry letters (a column's trajectory
    under the applied prefix is affine, so that maximum bounds how far it
    wanders).
    """
    top, disp = 0, 1
    for w in words:
        shifts = 0
        maxv = 0
        aut = Automorphism.identity(w.model)
        for g in reversed(w.letters):
            if isinstance(g, Twist):
                top = max(top, abs(g.label.index) + 1)
            elif isinstance(g, Shift):
                shifts += 1
            elif w.model.kind != "sn":
                try:
                    step = w.model.automorphism_of_word([(g.name, g.exp)])
                except UndefinedSymmetry:
                    step = None
                if step is not None:
                    aut = step.compose(aut)
                    maxv = max(maxv, abs(aut.v))
                else:
                    maxv = max(maxv, abs(g.exp))
        disp = max(disp, shifts + maxv + 1)
    return top, disp


def verify_identity_homology(
    w1: Word,
    w2: Word,
    window: int,
    aliases: AliasMap | None = None,
) -> HomologyResult:
    """Compare the homology matrices of two words column by column on the
    common valid subspace.

    Columns provably fixed by both words are skipped: on ``sn`` models a
    column whose genus exceeds every touched genus plus the total shift
    displacement never meets a twist class or a shifted strand edge; on the
    chain models the same holds beyond the touched positions plus the total
    translation distance.
    """
    if w1.model is not w2.model:
        return HomologyResult("Inconclusive", "model mismatch")
    model = w1.model
    basis = TruncatedBasis(model, window)
    tracker = _ColumnTracker(basis, aliases)
    top, disp = _support_bound((w1, w2))
    reach = top + disp + 1

    keys = basis.keys()
    if model.kind == "sn":
        keys = [k for k in keys if k[2] <= min(window, reach)]
    else:
        keys = [k for k in keys if abs(k[1]) <= min(window, reach)]

    valid = 0
    try:
        for key in keys:
            c1 = tracker.apply(w1.letters, key)
            c2 = tracker.apply(w2.letters, key)
            if c1 is None or c2 is None:
                continue
            valid += 1
            if c1 != c2:
                witness = (
                    f"{basis.key_label(key)} maps to "
                    f"{_fmt_vec(basis, c1)} vs {_fmt_vec(basis, c2)}"
                )
                return HomologyResult("Refuted", witness, valid, len(keys))
    except UndefinedSymmetry as e:
        return HomologyResult("Inconclusive", str(e))
    if valid == 0:
        return HomologyResult("Inconclusive", "empty valid subspace", 0, len(keys))
    return HomologyResult("Consistent", "", valid, len(keys))


def _fmt_vec(basis: TruncatedBasis, v: Vec) -> str:
    if not v:
        return "0"
    parts = []
    for key in sorted(v):
        c = v[key]
        lab = basis.key_label(key).removesuffix("-class")
        parts.append(("+" if c > 0 else "-") + (f"{abs(c)}*" if abs(c) != 1 else "") + lab)
    s = "".join(parts)
    return s[1:] if s.startswith("+") else s


# ---------------------------------------------------------------------------
# explicit matrices (small windows; debugging and property checks)


@dataclass
class IntMatrix:
    """Sparse exact-integer matrix over a truncated basis with a validity
    mask: only columns in ``valid`` are asserted."""

    basis: TruncatedBasis
    cols: dict[Key, Vec]
    valid: frozenset[Key]

    @staticmethod
    def identity(basis: TruncatedBasis) -> "IntMatrix":
        keys = basis.keys()
        return IntMatrix(basis, {k: {k: 1} for k in keys}, frozenset(keys))

    def column(self, key: Key) -> Vec:
        return self.cols[key]

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        """self applied after other (matrix product self . other)."""
        cols: dict[Key, Vec] = {}
        valid: set[Key] = set()
        for key in other.valid:
            vec = other.cols[key]
            out: Vec = {}
            ok = True
            for k2, c2 in vec.items():
                if k2 not in self.valid:
                    ok = False
                    break
                for k3, c3 in self.cols[k2].items():
                    out[k3] = out.get(k3, 0) + c2 * c3
            if not ok:
                continue
            cols[key] = {k: c for k, c in out.items() if c}
            valid.add(key)
        for key in self.basis.keys():
            cols.setdefault(key, {})
        return IntMatrix(self.basis, cols, frozenset(valid))

    def equal_on_valid(self, other: "IntMatrix") -> tuple[bool, Key | None]:
        for key in self.valid & other.valid:
            if self.cols[key] != other.cols[key]:
                return False, key
        return True, None

    def preserves_pairing(self) -> bool:
        keys = [k for k in self.basis.keys() if k in self.valid]
        base = {k: {k: 1} for k in keys}
        for i, x in enumerate(keys):
            for y in keys[i:]:
                if pairing(self.cols[x], self.cols[y]) != pairing(base[x], base[y]):
                    return False
        return True

    def is_identity_on_valid(self) -> bool:
        return all(self.cols[k] == {k: 1} for k in self.valid)

    def grid(self) -> str:
        """Plain-text integer grid (row-major over the basis order)."""
        keys = self.basis.keys()
        lines = []
        for row in keys:
            lines.append(" ".join(str(self.cols[col].get(row, 0)) for col in keys))
        return "\n".join(lines)


def twist_matrix(basis: TruncatedBasis, c: CurveLabel) -> IntMatrix:
    cls = basis.class_of(c)
    if any(not basis.in_window(k) for k in cls):
        raise OutOfWindow(f"{c!r} lies outside the window {basis.window}")
    out = {k: _twist_apply({k: 1}, cls, 1) for k in basis.keys()}
    return IntMatrix(basis, out, frozenset(basis.keys()))


def symmetry_matrix(
    basis: TruncatedBasis, s: str, aliases: AliasMap | None = None
) -> IntMatrix:
    tracker = _ColumnTracker(basis, aliases)
    aut = basis.model.automorphism_of_word([(s, 1)], aliases)
    cols: dict[Key, Vec] = {}
    valid: set[Key] = set()
    for k in basis.keys():
        nk = tracker._aut_key(aut, k)
        if basis.in_window(nk):
            cols[k] = {nk: 1}
            valid.add(k)
        else:
            cols[k] = {}
    return IntMatrix(basis, cols, frozenset(valid))


def shift_matrix(basis: TruncatedBasis, h: ShiftLabel | ChainShift) -> IntMatrix:
    """Matrix of a handle shift with its edge mask."""
    if basis.window < 3:
        raise OutOfWindow("shift matrices need window >= 3")
    tracker = _ColumnTracker(basis, None)
    cols: dict[Key, Vec] = {}
    valid: set[Key] = set()
    for k in basis.keys():
        if isinstance(h, ChainShift):
            nk = (k[0], k[1] + h.step)
            nk2 = nk if basis.in_window(nk) else None
        else:
            nk2 = tracker._shift_key(h, 1, k)
            if nk2 is not None and not basis.in_window(nk2):
                nk2 = None
        if nk2 is None:
            cols[k] = {}
        else:
            cols[k] = {nk2: 1}
            valid.add(k)
    return IntMatrix(basis, cols, frozenset(valid))


def word_matrix(basis: TruncatedBasis, w: Word, aliases: AliasMap | None = None) -> IntMatrix:
    """Product of the factor matrices in application order, masked columns
    dropped as their trajectories leave the window."""
    tracker = _ColumnTracker(basis, aliases)
    cols: dict[Key, Vec] = {}
    valid: set[Key] = set()
    for k in basis.keys():
        v = tracker.apply(w.letters, k)
        if v is None:
            cols[k] = {}
        else:
            cols[k] = v
            valid.add(k)
    return IntMatrix(basis, cols, frozenset(valid))


def transvection_selftest() -> None:
    """Pin the sign convention: the braid identity must hold exactly on a
    symplectic pair, and transvections must preserve the pairing."""
    a: Vec = {("a", 1): 1}
    b: Vec = {("b", 1): 1}

    def tw(cls: Vec):
        return lambda v: _twist_apply(v, cls, 1)

    ta, tb = tw(a), tw(b)
    for start in (a, b, {("a", 1): 2, ("b", 1): -3}):
        lhs = ta(tb(ta(dict(start))))
        rhs = tb(ta(tb(dict(start))))
        if lhs != rhs:
            raise AssertionError(f"braid identity failed at {start}: {lhs} != {rhs}")
    u, v = ta(a), ta(b)
    if pairing(u, v) != pairing(a, b):
        raise AssertionError("transvection does not preserve the pairing")

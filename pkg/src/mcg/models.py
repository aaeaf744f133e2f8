"""Surface models: curve label systems, intersection data, symmetry actions.

A model is immutable data: a label system (which families exist, which index
ranges are legal), a set of pattern-based adjacency rules giving geometric
intersection numbers in {0, 1}, and the primitive symmetries with their exact
action on labels.

The three shipped models:

``sn``
    n >= 3 ends arranged around a circle, each carrying an outgoing chain of
    handles. Rotation ``R`` advances the end index by one; ``rho1``/``rho2``
    are half-turns whose end maps are reflections ``j -> 2-j`` and
    ``j -> n+1-j`` exchanging the ``A`` and ``A'`` families; ``tau`` swaps two
    neighbouring ends and has no action on the standard label set (its only
    role is its image in the symmetric group on ends).

``jacob``
    one bi-infinite chain of handles, two ends; two half-turns ``tau1``
    (about the gap between handles 0 and 1) and ``tau2`` (about handle 1),
    whose product ``tau2 tau1`` translates the chain by one handle.

``lochness``
    one chain, one end; half-turns ``tau1``/``tau2`` with ``tau1 tau2`` the
    translation. Printed ``A``/``B`` indices skip 0.

Symmetry actions are affine maps on the index line (or end circle) plus an
optional A/A' exchange. The genus-0 ``C`` curve of an ``sn`` strand sits in
the gap between two neighbouring strands, so an orientation-reversing end map
sends the gap ``(j, j+1)`` to the gap ``(s(j)-1, s(j))``; the reindexing is
derived from the end map rather than stored.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

from .errors import InvalidLabel, McgError, UndefinedSymmetry
from .labels import FAMILIES, CurveLabel, ShiftLabel

AliasMap = dict[str, tuple[tuple[str, int], ...]]


# ---------------------------------------------------------------------------
# adjacency rules


@dataclass(frozen=True)
class IndexPattern:
    """Either an offset from the rule variable ("var", off) or a constant."""

    kind: str  # "var" | "const"
    value: int

    def solve(self, actual: int) -> int | None:
        """Return the variable binding that makes this pattern equal actual."""
        if self.kind == "const":
            return None if actual != self.value else Ellipsis  # type: ignore[return-value]
        return actual - self.value

    def apply(self, binding: int | None) -> int:
        if self.kind == "const":
            return self.value
        assert binding is not None
        return binding + self.value


@dataclass(frozen=True)
class LabelPattern:
    family: str
    genus: IndexPattern
    end: IndexPattern | None  # None on chain models


@dataclass(frozen=True)
class AdjacencyRule:
    """``left ~ right``: the two matched curves intersect exactly once."""

    left: LabelPattern
    right: LabelPattern
    text: str = ""

    def partner(self, model: "SurfaceModel", c: CurveLabel) -> CurveLabel | None:
        """If ``c`` matches the left pattern, return the right-hand curve."""
        pat, other = self.left, self.right
        if c.family != pat.family:
            return None
        gi = pat.genus.solve(c.index)
        if gi is None:
            return None
        gbind = None if gi is Ellipsis else gi
        ebind = None
        if pat.end is not None:
            ej = pat.end.solve(c.end)  # type: ignore[arg-type]
            if ej is None:
                return None
            ebind = None if ej is Ellipsis else ej
        genus = other.genus.apply(gbind)
        if pat.end is None:
            out = CurveLabel(other.family, genus)
        else:
            end = model._norm_end(other.end.apply(ebind))  # type: ignore[union-attr]
            out = CurveLabel(other.family, genus, end)
        return out if model.is_valid_curve(out) else None


# ---------------------------------------------------------------------------
# symmetries


@dataclass(frozen=True)
class SymmetrySpec:
    """A primitive symmetry of a model.

    ``affine`` symmetries act on labels through the index map
    ``x -> u*x + v`` (ends for ``sn``, chain coordinate otherwise), with an
    optional A/A' family exchange. ``perm`` symmetries carry only an end
    permutation and admit no label action.
    """

    name: str
    kind: str  # "affine" | "perm"
    u: int = 1
    v: int = 0
    swap: bool = False
    perm: tuple[int, ...] | None = None


@dataclass(frozen=True)
class Automorphism:
    """The label action of a product of affine symmetries.

    Composition is closed: the end (or chain) maps stay affine with
    ``u = +-1`` and the family exchanges accumulate modulo 2. Models whose
    label action is declared here represent their symmetry subgroups
    faithfully, so a product acting as the identity on every label *is* the
    identity mapping class.
    """

    kind: str  # model kind
    n: int
    u: int
    v: int
    swap: bool

    @staticmethod
    def identity(model: "SurfaceModel") -> "Automorphism":
        return Automorphism(model.kind, model.n, 1, 0, False)

    def _norm(self, v: int) -> int:
        return v % self.n if self.kind == "sn" else v

    def is_identity(self) -> bool:
        return self.u == 1 and self._norm(self.v) == 0 and not self.swap

    def compose(self, other: "Automorphism") -> "Automorphism":
        """self after other (``other`` is applied first)."""
        u = self.u * other.u
        v = self._norm(self.u * other.v + self.v)
        return Automorphism(self.kind, self.n, u, v, self.swap ^ other.swap)

    def inverse(self) -> "Automorphism":
        #  x -> u x + v  inverts to  x -> u x - u v   (u in {1,-1})
        return Automorphism(self.kind, self.n, self.u, self._norm(-self.u * self.v), self.swap)

    def _map_index(self, x: int) -> int:
        return self.u * x + self.v

    def _map_end(self, e: int) -> int:
        return (self.u * e + self.v - 1) % self.n + 1

    def act_curve(self, c: CurveLabel) -> CurveLabel:
        fam = c.family
        if self.swap and fam in ("A", "Ap"):
            fam = "Ap" if fam == "A" else "A"
        if self.kind == "sn":
            if c.family == "C" and c.index == 0:
                # gap curve: (j, j+1) -> (s(j), s(j+1)) as an unordered gap
                j = c.end
                m = self._map_end(j) if self.u == 1 else self._map_end(j) - 1
                m = (m - 1) % self.n + 1
                return CurveLabel("C", 0, m)
            return CurveLabel(fam, c.index, self._map_end(c.end))  # type: ignore[arg-type]
        # chain models
        if c.family == "C":
            k = c.index + self.v if self.u == 1 else self.v - c.index - 1
            return CurveLabel("C", k)
        return CurveLabel(fam, self._map_index(c.index))

    def act_shift(self, h: ShiftLabel, exp: int) -> tuple[ShiftLabel, int]:
        if self.kind != "sn":
            raise McgError("shift labels between ends exist only on sn models")
        p, q = self._map_end(h.from_end), self._map_end(h.to_end)
        if p < q:
            return ShiftLabel(p, q), exp
        return ShiftLabel(q, p), -exp

    def end_permutation(self) -> tuple[int, ...]:
        return tuple(self._map_end(e) for e in range(1, self.n + 1))


# ---------------------------------------------------------------------------
# the model proper


@dataclass(frozen=True)
class ValidationIssue:
    check: str
    detail: str

    def __str__(self) -> str:
        return f"{self.check}: {self.detail}"


@dataclass(frozen=True)
class ValidationReport:
    model: str
    window: int
    labels_checked: int
    issues: tuple[ValidationIssue, ...]

    @property
    def ok(self) -> bool:
        return not self.issues

    def __str__(self) -> str:
        head = f"validate {self.model} window={self.window}: {self.labels_checked} labels"
        if self.ok:
            return head + ", no violations"
        lines = [head] + [f"  VIOLATION {i}" for i in map(str, self.issues)]
        return "\n".join(lines)


@dataclass(frozen=True, eq=False)
class SurfaceModel:
    """Immutable surface model: label ranges, adjacency, symmetry actions."""

    kind: str  # "sn" | "jacob" | "lochness"
    n: int  # number of ends (sn: >=3, jacob: 2, lochness: 1)
    rules: tuple[AdjacencyRule, ...]
    symmetries: dict[str, SymmetrySpec]
    aliases: dict[str, tuple[tuple[str, int], ...]] = field(default_factory=dict)
    removed: frozenset[frozenset[CurveLabel]] = field(default_factory=frozenset)
    name: str = ""

    def __post_init__(self):
        if self.kind == "sn" and self.n < 3:
            raise McgError(f"sn model needs n >= 3, got {self.n}")
        # neighbour memo: idempotent values, so concurrent readers may race
        # benignly; the model is otherwise immutable
        object.__setattr__(self, "_ncache", {})

    # -- label plumbing ----------------------------------------------------

    def _norm_end(self, e: int) -> int:
        return (e - 1) % self.n + 1

    def is_valid_curve(self, c: CurveLabel) -> bool:
        if c.family not in FAMILIES:
            return False
        if self.kind == "sn":
            if c.end is None or not (1 <= c.end <= self.n):
                return False
            return c.index >= (0 if c.family == "C" else 1)
        if c.end is not None:
            return False
        if self.kind == "lochness" and c.family == "Ap":
            return False
        return True

    def check_curve(self, c: CurveLabel) -> CurveLabel:
        if not self.is_valid_curve(c):
            raise InvalidLabel(f"{c!r} is not a curve of the {self.describe()} model")
        return c

    def curve(self, family: str, *index: int) -> CurveLabel:
        """Build a curve from printed indices (skip-aware on lochness)."""
        if self.kind == "sn":
            if len(index) != 2:
                raise InvalidLabel(f"{family}{list(index)}: sn curves need [genus,end]")
            g, e = index
            return self.check_curve(CurveLabel(family, g, self._norm_end(e)))
        if len(index) != 1:
            raise InvalidLabel(f"{family}{list(index)}: chain curves take one index")
        (k,) = index
        if self.kind == "lochness" and family in ("A", "B"):
            if k == 0:
                raise InvalidLabel(f"{family}[0]: index 0 is skipped on the one-ended model")
            k = k if k > 0 else k + 1
        return self.check_curve(CurveLabel(family, k))

    def printed_index(self, c: CurveLabel) -> int:
        """Inverse of the skip mapping, for display."""
        if self.kind == "lochness" and c.family in ("A", "B"):
            return c.index if c.index >= 1 else c.index - 1
        return c.index

    def format_curve(self, c: CurveLabel, exp: int = 1) -> str:
        from .labels import family_print

        inv = "~" if exp < 0 else ""
        if self.kind == "sn":
            return f"{family_print(c.family)}{inv}[{c.index},{c.end}]"
        return f"{family_print(c.family)}{inv}[{self.printed_index(c)}]"

    def shift(self, p: int, q: int) -> tuple[ShiftLabel, int]:
        """Canonical (label, sign) for the shift from end p to end q."""
        if self.kind != "sn":
            raise InvalidLabel("h[p,q] shifts exist only on sn models")
        p, q = self._norm_end(p), self._norm_end(q)
        if p == q:
            raise InvalidLabel(f"h[{p},{q}]: repelling and attracting end coincide")
        return (ShiftLabel(p, q), 1) if p < q else (ShiftLabel(q, p), -1)

    def describe(self) -> str:
        return {"sn": f"S({self.n})", "jacob": "Jacob's Ladder", "lochness": "Loch Ness"}[self.kind]

    # -- intersection numbers ---------------------------------------------

    def neighbors(self, c: CurveLabel) -> frozenset[CurveLabel]:
        self.check_curve(c)
        cache: dict = self._ncache  # type: ignore[attr-defined]
        hit = cache.get(c)
        if hit is None:
            hit = cache[c] = self._neighbors_uncached(c)
        return hit

    def _neighbors_uncached(self, c: CurveLabel) -> frozenset[CurveLabel]:
        out: set[CurveLabel] = set()
        for rule in self.rules:
            p = rule.partner(self, c)
            if p is not None and p != c:
                out.add(p)
            q = AdjacencyRule(rule.right, rule.left).partner(self, c)
            if q is not None and q != c:
                out.add(q)
        out = {x for x in out if frozenset((c, x)) not in self.removed}
        return frozenset(out)

    def intersection(self, c1: CurveLabel, c2: CurveLabel) -> int:
        self.check_curve(c1), self.check_curve(c2)
        if c1 == c2:
            return 0
        return 1 if c2 in self.neighbors(c1) else 0

    def without_adjacency(self, c1: CurveLabel, c2: CurveLabel) -> "SurfaceModel":
        """Copy of the model with one adjacency instance deleted (for tests)."""
        pair = frozenset((self.check_curve(c1), self.check_curve(c2)))
        return replace(self, removed=self.removed | {pair})

    # -- symmetries ---------------------------------------------------------

    def symmetry_names(self) -> tuple[str, ...]:
        return tuple(self.symmetries)

    def automorphism(self, name: str, aliases: AliasMap | None = None) -> Automorphism:
        spec = self.symmetries.get(name)
        if spec is not None:
            if spec.kind != "affine":
                raise UndefinedSymmetry(
                    f"{name} acts on the ends only; it has no action on the standard labels"
                )
            return Automorphism(self.kind, self.n, spec.u, spec.v, spec.swap)
        word = None
        if aliases is not None and name in aliases:
            word = aliases[name]
        elif name in self.aliases:
            word = self.aliases[name]
        if word is None:
            raise UndefinedSymmetry(f"unknown symmetry {name!r} in {self.describe()}")
        return self.automorphism_of_word(word, aliases)

    def automorphism_of_word(
        self, letters: Sequence[tuple[str, int]], aliases: AliasMap | None = None
    ) -> Automorphism:
        """Compose the actions of ``(name, exponent)`` letters, leftmost applied last."""
        aut = Automorphism.identity(self)
        for name, exp in letters:
            a = self.automorphism(name, aliases)
            if exp < 0:
                a, exp = a.inverse(), -exp
            step = Automorphism.identity(self)
            for _ in range(exp):
                step = a.compose(step)
            aut = aut.compose(step)
        return aut

    def end_permutation(self, name: str) -> tuple[int, ...]:
        spec = self.symmetries.get(name)
        if spec is None:
            raise UndefinedSymmetry(f"unknown symmetry {name!r} in {self.describe()}")
        if spec.kind == "perm":
            assert spec.perm is not None
            padded = spec.perm + tuple(range(len(spec.perm) + 1, self.n + 1))
            return padded
        if self.kind == "sn":
            return Automorphism(self.kind, self.n, spec.u, spec.v, spec.swap).end_permutation()
        if self.kind == "jacob":
            # chain reflections exchange the two ends, translations fix them
            return (2, 1) if spec.u == -1 else (1, 2)
        return (1,)

    # -- enumeration and validation -----------------------------------------

    def labels_in_window(self, window: int) -> list[CurveLabel]:
        out: list[CurveLabel] = []
        if self.kind == "sn":
            for e in range(1, self.n + 1):
                for fam in FAMILIES:
                    lo = 0 if fam == "C" else 1
                    for i in range(lo, window + 1):
                        out.append(CurveLabel(fam, i, e))
        else:
            fams = [f for f in FAMILIES if not (self.kind == "lochness" and f == "Ap")]
            for fam in fams:
                for k in range(-window, window + 1):
                    out.append(CurveLabel(fam, k))
        return out

    def validate(self, window: int) -> ValidationReport:
        """Exhaustively police the model data inside a genus window.

        Checks the intersection table (symmetry, values, zero self
        intersection), the equivariance of every label-acting symmetry, the
        declared orders (R to the n-th power, squares of the half-turns), and
        the sign bookkeeping of shift conjugation.
        """
        issues: list[ValidationIssue] = []
        labels = self.labels_in_window(window)
        sample = labels[:: max(1, len(labels) // 200)]

        for c1 in sample:
            for c2 in sample:
                a, b = self.intersection(c1, c2), self.intersection(c2, c1)
                if a != b:
                    issues.append(ValidationIssue("symmetry", f"i({c1},{c2})={a} but i({c2},{c1})={b}"))
                if a not in (0, 1):
                    issues.append(ValidationIssue("range", f"i({c1},{c2})={a}"))
            if self.intersection(c1, c1) != 0:
                issues.append(ValidationIssue("self", f"i({c1},{c1}) != 0"))

        affine = {nm: sp for nm, sp in self.symmetries.items() if sp.kind == "affine"}
        for nm in affine:
            aut = self.automorphism(nm)
            # equivariance: the neighbour relation is carried onto itself
            for c in labels:
                img = aut.act_curve(c)
                want = {aut.act_curve(x) for x in self.neighbors(c)}
                got = set(self.neighbors(img))
                # ignore neighbours whose counterpart lies outside any window:
                # actions are total, so the sets must agree exactly
                if want != got:
                    diff = (want ^ got) or {img}
                    issues.append(
                        ValidationIssue(
                            "equivariance",
                            f"{nm}: i({c}, x) not preserved near {sorted(map(repr, diff))}",
                        )
                    )
                    if len(issues) > 40:
                        return ValidationReport(self.describe(), window, len(labels), tuple(issues))

        # orders on labels
        for nm, sp in affine.items():
            aut = self.automorphism(nm)
            if nm == "R":
                power = Automorphism.identity(self)
                for _ in range(self.n):
                    power = aut.compose(power)
                if not power.is_identity():
                    issues.append(ValidationIssue("order", f"R^{self.n} is not the identity"))
            else:
                if not aut.compose(aut).is_identity():
                    issues.append(ValidationIssue("order", f"{nm}^2 is not the identity on labels"))

        # reflection-type symmetries invert shifts and double back cleanly
        if self.kind == "sn":
            h, s = self.shift(1, 2)
            for nm, sp in affine.items():
                if sp.u != -1:
                    continue
                aut = self.automorphism(nm)
                h1, s1 = aut.act_shift(h, s)
                h2, s2 = aut.act_shift(h1, s1)
                if (h2, s2) != (h, s):
                    issues.append(ValidationIssue("shift", f"{nm} applied twice moved {h}"))

        return ValidationReport(self.describe(), window, len(labels), tuple(issues))


# ---------------------------------------------------------------------------
# module-level operation wrappers


def intersection_number(model: SurfaceModel, c1: CurveLabel, c2: CurveLabel) -> int:
    return model.intersection(c1, c2)


def apply_symmetry(
    model: SurfaceModel, s: str, c: CurveLabel, aliases: AliasMap | None = None
) -> CurveLabel:
    return model.automorphism(s, aliases).act_curve(model.check_curve(c))


def apply_symmetry_shift(
    model: SurfaceModel, s: str, h: ShiftLabel, aliases: AliasMap | None = None
) -> tuple[ShiftLabel, int]:
    return model.automorphism(s, aliases).act_shift(h, 1)


def validate_model(model: SurfaceModel, window: int) -> ValidationReport:
    return model.validate(window)

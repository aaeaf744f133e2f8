"""Property sweeps: homology vs intersection data, pairing preservation,
randomized cross-oracle soundness, seeded mutation tests.

The homology shadow of the twist calculus is checked in two layers. First,
for every label pair in a window, the skew pairing of the classes must equal
the declared geometric intersection number, except on the documented
degenerate family: the two curves through one handle (A and A' at the same
position) necessarily carry the same class up to sign, because the
involution exchanging them preserves the symplectic form, so no faithful
assignment can separate them. Second, the transvection consequences
(commuting matrices for pairing zero, the braid identity exactly for pairing
one) are verified concretely on the support vectors of each adjacent pair.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .homology import TruncatedBasis, _twist_apply, pairing, verify_identity_homology
from .models import SurfaceModel
from .rewrite import equivalent
from .words import Letter, Shift, Sym, Twist, Word, word


@dataclass(frozen=True)
class SweepReport:
    name: str
    checked: int
    degenerate_pairs: int
    issues: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.issues

    def __str__(self) -> str:
        head = f"{self.name}: {self.checked} checks"
        if self.degenerate_pairs:
            head += f" ({self.degenerate_pairs} same-handle A/A' pairs, classes coincide)"
        if self.ok:
            return head + ", all passed"
        return head + "\n" + "\n".join(f"  FAIL {i}" for i in self.issues)


def _neg(v: dict) -> dict:
    return {k: -c for k, c in v.items()}


def homology_property_sweep(model: SurfaceModel, window: int) -> SweepReport:
    """Criterion sweep: over every label pair in the window, commutation of
    the twist matrices must match intersection number 0 and the braid
    identity must match intersection number 1, modulo the degenerate
    same-handle A/A' family, which is reported and characterized exactly."""
    basis = TruncatedBasis(model, window + 2)
    labels = model.labels_in_window(window)
    cls = {c: basis.class_of(c) for c in labels}
    issues: list[str] = []
    degenerate = 0
    checked = 0

    for i, c1 in enumerate(labels):
        v1 = cls[c1]
        for c2 in labels[i + 1 :]:
            v2 = cls[c2]
            inter = model.intersection(c1, c2)
            p = abs(pairing(v1, v2))
            checked += 1
            if v1 == v2 or v1 == _neg(v2):
                # identical classes: the matrices are equal, so they commute
                # and satisfy the braid identity vacuously
                same_handle_aa = (
                    {c1.family, c2.family} == {"A", "Ap"}
                    and c1.index == c2.index
                    and c1.end == c2.end
                )
                if not same_handle_aa:
                    issues.append(f"unexpected class collision {c1} vs {c2}")
                elif inter != 0:
                    issues.append(f"declared i({c1},{c2})={inter} but classes coincide")
                else:
                    degenerate += 1
                continue
            # independent classes: transvections commute iff the pairing is 0
            # and satisfy the braid identity iff it is +-1
            if (p == 0) != (inter == 0) or (p == 1) != (inter == 1):
                issues.append(f"i({c1},{c2})={inter} but |<.,.>|={p}")
            if p > 1:
                issues.append(f"pairing magnitude {p} > 1 for {c1},{c2}")
            if len(issues) > 25:
                return SweepReport("homology sweep", checked, degenerate, tuple(issues))

    # concrete matrix checks on every intersecting pair and a sample of
    # disjoint ones: apply both sides to each support vector
    adjacent = [
        (c1, c2)
        for c1 in labels
        for c2 in model.neighbors(c1)
        if c2 in cls and repr(c1) < repr(c2)
    ]
    sample_disjoint = [
        (c1, c2)
        for c1, c2 in zip(labels[::7], labels[5::11])
        if model.intersection(c1, c2) == 0
    ]

    def t(v, c, e=1):
        return _twist_apply(v, c, e)

    for c1, c2 in adjacent:
        v1, v2 = cls[c1], cls[c2]
        for key in set(v1) | set(v2):
            x = {key: 1}
            lhs = t(t(t(x, v1), v2), v1)
            rhs = t(t(t(x, v2), v1), v2)
            checked += 1
            if lhs != rhs:
                issues.append(f"braid identity failed for {c1},{c2} at {key}")
        if all(t(t({k: 1}, v1), v2) == t(t({k: 1}, v2), v1) for k in set(v1) | set(v2)):
            issues.append(f"matrices of {c1},{c2} commute despite i=1")
    for c1, c2 in sample_disjoint:
        v1, v2 = cls[c1], cls[c2]
        for key in set(v1) | set(v2):
            x = {key: 1}
            checked += 1
            if t(t(x, v1), v2) != t(t(x, v2), v1):
                issues.append(f"disjoint pair {c1},{c2} fails to commute at {key}")

    return SweepReport("homology sweep", checked, degenerate, tuple(issues))


def pairing_preservation_sweep(model: SurfaceModel, window: int) -> SweepReport:
    """Every generator matrix preserves the symplectic form exactly.

    For a transvection about class c, columns away from c are untouched and
    the pairing of an untouched column with anything x changes by a multiple
    of <c, .>, so it suffices to check all pairs drawn from the keys pairing
    nontrivially with c together with c's support. Symmetry and shift
    matrices are (partial) position permutations: they preserve the form iff
    each handle block maps onto one handle block, checked per position.
    """
    basis = TruncatedBasis(model, window + 2)
    issues: list[str] = []
    checked = 0

    for c in model.labels_in_window(window):
        cls = basis.class_of(c)
        mates = set()
        for key in cls:
            kind, rest = key[0], key[1:]
            mates.add(key)
            mates.add((("b" if kind == "a" else "a"),) + rest)
        mates = sorted(mates)
        for x in mates:
            for y in mates:
                checked += 1
                mx = _twist_apply({x: 1}, cls, 1)
                my = _twist_apply({y: 1}, cls, 1)
                if pairing(mx, my) != pairing({x: 1}, {y: 1}):
                    issues.append(f"twist about {c} breaks the pairing at ({x},{y})")
                    break

    for name, spec in model.symmetries.items():
        if spec.kind != "affine":
            continue
        aut = model.automorphism(name)
        seen = {}
        for key in basis.keys():
            if model.kind == "sn":
                img = (key[0], aut._map_end(key[1]), key[2])
            else:
                img = (key[0], aut._map_index(key[1]))
            checked += 1
            if img in seen:
                issues.append(f"{name} maps two classes onto {img}")
            seen[img] = key
            if img[0] != key[0]:
                issues.append(f"{name} mixes a/b kinds at {key}")
        # per-handle block coherence gives <Px,Py> = <x,y> for all pairs
    return SweepReport("pairing preservation", checked, 0, tuple(issues))


# ---------------------------------------------------------------------------
# randomized cross-oracle soundness and mutation tests


def random_word(model: SurfaceModel, rng: random.Random, length: int = 6) -> Word:
    letters: list[Letter] = []
    for _ in range(length):
        kind = rng.random()
        if kind < 0.75:
            fam = rng.choice(["A", "Ap", "B", "C"] if model.kind != "lochness" else ["A", "B", "C"])
            if model.kind == "sn":
                genus = rng.randint(0 if fam == "C" else 1, 3)
                label = model.curve(fam, genus, rng.randint(1, model.n))
            else:
                idx = rng.choice([i for i in range(-4, 5) if i != 0 or fam == "C"])
                label = model.curve(fam, idx)
            letters.append(Twist(label, rng.choice((1, -1))))
        elif kind < 0.9 and model.symmetries:
            name = rng.choice(sorted(model.symmetries))
            letters.append(Sym(name, rng.choice((1, -1))))
        elif model.kind == "sn":
            p = rng.randint(1, model.n)
            q = p % model.n + 1
            lab, sg = model.shift(p, q)
            letters.append(Shift(lab, sg * rng.choice((1, -1))))
        else:
            letters.append(Sym("tau1", 1))
    return word(model, letters)


def cross_oracle_random_pairs(
    model: SurfaceModel, pairs: int, seed: int, budget: int = 4000, window: int = 20
) -> tuple[int, int, list[str]]:
    """Generate random word pairs; whenever the engine proves equality,
    neither oracle may disagree (homology must not refute, projections must
    coincide). Returns (checked, proved_equal, violations)."""
    from .permgroup import project
    from .words import invert

    rng = random.Random(seed)
    violations: list[str] = []
    proved = 0
    for _ in range(pairs):
        w1 = random_word(model, rng, rng.randint(1, 7))
        if rng.random() < 0.5:
            # derive an equal pair by conjugation so ProvedEqual occurs
            g = random_word(model, rng, rng.randint(1, 3))
            w2 = g * w1 * invert(g)
        else:
            w2 = random_word(model, rng, rng.randint(1, 7))
        v = equivalent(w1, w2, budget, window, oracles=False)
        if v.kind != "ProvedEqual":
            continue
        proved += 1
        try:
            if project(w1) != project(w2):
                violations.append(f"engine proved {w1} = {w2} but projections differ")
        except Exception:
            pass
        hom = verify_identity_homology(w1, w2, window)
        if hom.status == "Refuted":
            violations.append(f"engine proved {w1} = {w2} but homology refutes: {hom.witness}")
    return pairs, proved, violations


def mutate_assert_words(
    model: SurfaceModel, left: Word, right: Word, seed: int
) -> tuple[Word, Word] | None:
    """Perturb a single twist letter of the right-hand side (index bumped by
    one); None when the side has no twist letter."""
    rng = random.Random(seed)
    positions = [i for i, g in enumerate(right.letters) if isinstance(g, Twist)]
    if not positions:
        return None
    pos = rng.choice(positions)
    g: Twist = right.letters[pos]  # type: ignore[assignment]
    if model.kind == "sn":
        bumped = model.curve(g.label.family, g.label.index, g.label.end % model.n + 1)
    else:
        idx = model.printed_index(g.label) + 1
        if idx == 0 and g.label.family != "C":
            idx = 1
        bumped = model.curve(g.label.family, idx)
    letters = list(right.letters)
    letters[pos] = Twist(bumped, g.exp)
    return left, Word(model, tuple(letters))

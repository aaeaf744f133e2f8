import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mcg.errors import NotAnInvolution
from mcg.homology import TruncatedBasis, word_matrix
from mcg.rewrite import (
    check_involution,
    equivalent,
    normalize,
    push_symmetries,
    reduce_word,
)
from mcg.words import Shift, Sym, Twist, Word, conjugate, empty_word, invert, word


def tw(model, fam, *idx, exp=1):
    return Twist(model.curve(fam, *idx), exp)


def sh(model, p, q, exp=1):
    lab, s = model.shift(p, q)
    return Shift(lab, s * exp)


def W(model, *parts):
    return word(model, parts)


def thmA_f1(model):
    m = (model.n + 1) // 2
    return W(
        model,
        tw(model, "A", 1, 1),
        tw(model, "C", 0, 1),
        tw(model, "B", 1, 4),
        tw(model, "B", 1, 6, exp=-1),
        tw(model, "C", 0, 8, exp=-1),
        tw(model, "Ap", 1, 9, exp=-1),
        sh(model, m + 4, m + 5),
    )


def rho3(model):
    return W(model, Sym("R", 4), Sym("rho1", 1), Sym("R", -4))


# -- normalize ---------------------------------------------------------------


def test_normalize_free_cancellation(sn17):
    w = W(sn17, tw(sn17, "A", 1, 1), tw(sn17, "A", 1, 1, exp=-1))
    assert normalize(w).word.letters == ()


def test_normalize_thmA_product(sn17):
    f3 = W(
        sn17,
        tw(sn17, "A", 1, 1), tw(sn17, "C", 0, 1), tw(sn17, "C", 0, 3),
        tw(sn17, "B", 1, 6, exp=-1), tw(sn17, "B", 1, 8, exp=-1),
        tw(sn17, "Ap", 1, 9, exp=-1), sh(sn17, 13, 14),
    )
    f5 = W(
        sn17,
        tw(sn17, "A", 1, 1), tw(sn17, "C", 0, 1), tw(sn17, "C", 0, 3),
        tw(sn17, "C", 0, 5, exp=-1), tw(sn17, "B", 1, 8, exp=-1),
        tw(sn17, "Ap", 1, 9, exp=-1), sh(sn17, 13, 14),
    )
    expected = W(sn17, tw(sn17, "B", 1, 6), tw(sn17, "C", 0, 5, exp=-1))
    got = normalize(invert(f3) * f5)
    assert got.normalized
    assert got.word == normalize(expected).word


def test_normalize_lochness_product(lochness):
    f5 = W(
        lochness,
        tw(lochness, "A", 8), tw(lochness, "C", 8), tw(lochness, "C", 10),
        tw(lochness, "B", 3, exp=-1), tw(lochness, "B", 5, exp=-1), tw(lochness, "A", 6, exp=-1),
    )
    f6 = W(
        lochness,
        tw(lochness, "A", 8), tw(lochness, "C", 8), tw(lochness, "C", 10),
        tw(lochness, "C", 2, exp=-1), tw(lochness, "B", 5, exp=-1), tw(lochness, "A", 6, exp=-1),
    )
    expected = W(lochness, tw(lochness, "B", 3, exp=-1), tw(lochness, "C", 2))
    assert normalize(f5 * invert(f6)).word == normalize(expected).word


def test_normalize_starved_budget(sn17):
    w = thmA_f1(sn17) * invert(thmA_f1(sn17))
    res = normalize(w, budget=1)
    assert not res.normalized


# -- equivalent ----------------------------------------------------------------


def test_equivalent_reflexive(sn17):
    w = thmA_f1(sn17)
    assert equivalent(w, w).kind == "ProvedEqual"


def test_equivalent_disjoint_commute_trivial_budget(sn17):
    a = W(sn17, tw(sn17, "A", 1, 1), tw(sn17, "B", 1, 5))
    b = W(sn17, tw(sn17, "B", 1, 5), tw(sn17, "A", 1, 1))
    v = equivalent(a, b, budget=10)
    assert v.kind == "ProvedEqual"


def test_equivalent_braid_pair(sn17):
    a, b = tw(sn17, "A", 1, 1), tw(sn17, "B", 1, 1)
    lhs = W(sn17, a, b, a)
    rhs = W(sn17, b, a, b)
    assert equivalent(lhs, rhs).kind == "ProvedEqual"


def test_equivalent_distinct_twists(sn17):
    v = equivalent(W(sn17, tw(sn17, "A", 1, 1)), W(sn17, tw(sn17, "B", 1, 1)))
    assert v.kind == "ProvedDistinct"
    assert v.oracle == "homology"


def test_conjugated_twist_not_equal_to_plain_twist(sn17):
    # A B A~ is the twist about the image curve, not about b itself
    a, b = tw(sn17, "A", 1, 1), tw(sn17, "B", 1, 1)
    v = equivalent(W(sn17, a, b, Twist(a.label, -1)), W(sn17, b))
    assert v.kind == "ProvedDistinct"


def test_braid_move_blocked_by_interleaved_letter(sn17):
    # C[0,1] braids with B[1,1], so the transport over it must not fire;
    # a false identity built on that jump stays unproved
    b, c, a = tw(sn17, "B", 1, 1), tw(sn17, "C", 0, 1), tw(sn17, "A", 1, 1)
    w = W(sn17, b, c, a, Twist(b.label, -1))
    wrong = W(sn17, Twist(a.label, -1), c, a, a)  # what an unguarded jump would give
    v = equivalent(w, wrong)
    assert v.kind != "ProvedEqual"


def test_equivalent_distinct_by_projection(sn17):
    v = equivalent(W(sn17, Sym("R", 1)), empty_word(sn17))
    assert v.kind == "ProvedDistinct"
    assert v.oracle == "projection"


def test_equivalent_unknown_on_starved_budget(sn17):
    w = thmA_f1(sn17)
    v = equivalent(w, w, budget=1)
    assert v.kind == "Unknown"


def test_push_symmetries_moves_syms_right(sn17):
    w = W(sn17, Sym("R", 2), tw(sn17, "A", 1, 1), Sym("R", -1))
    pushed = push_symmetries(w)
    kinds = [type(g).__name__ for g in pushed.letters]
    assert kinds == ["Twist", "Sym", "Sym"]
    assert pushed.letters[0] == tw(sn17, "A", 1, 3)


def test_push_symmetries_cancels_identity_tail(sn17):
    # a conjugation sandwich leaves only the relabelled twist
    w = rho3(sn17) * W(sn17, tw(sn17, "A", 1, 1)) * invert(rho3(sn17))
    pushed = push_symmetries(w)
    assert pushed.letters == (tw(sn17, "Ap", 1, 9),)


def test_word_without_symmetries_unchanged_by_push(sn17):
    w = thmA_f1(sn17)
    assert push_symmetries(w) == w


def test_push_symmetries_preserves_matrix(sn17):
    basis = TruncatedBasis(sn17, 6)
    w = W(sn17, Sym("rho1", 1), tw(sn17, "A", 2, 3), sh(sn17, 4, 5), Sym("R", 3), tw(sn17, "B", 1, 2))
    before = word_matrix(basis, w)
    after = word_matrix(basis, push_symmetries(w))
    ok, key = before.equal_on_valid(after)
    assert ok, key


def test_reduce_word_shrinks_without_changing_value(sn17):
    f1 = thmA_f1(sn17)
    blown = f1 * invert(f1) * f1
    red = reduce_word(blown)
    assert len(red) <= len(f1)
    assert equivalent(red, f1).kind == "ProvedEqual"


# -- check_involution ----------------------------------------------------------


def test_check_involution_thmA(sn17):
    assert check_involution(rho3(sn17), thmA_f1(sn17)).kind == "ProvedEqual"


def test_check_involution_thmC(jacob):
    hh = [Sym("tau2", 1), Sym("tau1", 1)]
    tau3 = word(jacob, hh * 6 + [Sym("tau2", 1)] + [Sym(g.name, -g.exp) for g in reversed(hh * 6)])
    f = W(
        jacob,
        tw(jacob, "A", 1), tw(jacob, "Ap", 6), tw(jacob, "C", 1), tw(jacob, "B", 3),
        tw(jacob, "B", 11, exp=-1), tw(jacob, "C", 12, exp=-1),
        tw(jacob, "Ap", 8, exp=-1), tw(jacob, "A", 13, exp=-1),
    )
    assert check_involution(tau3, f).kind == "ProvedEqual"


def test_check_involution_refuses_non_involution(sn17):
    with pytest.raises(NotAnInvolution):
        check_involution(W(sn17, Sym("R", 1)), thmA_f1(sn17))


def test_check_involution_off_axis_twist_distinct(sn17):
    # conjugating a twist at end 3 by rho1 does not invert it
    rho1 = W(sn17, Sym("rho1", 1))
    x = W(sn17, tw(sn17, "A", 1, 3))
    v = check_involution(rho1, x)
    assert v.kind == "ProvedDistinct"


# -- properties ------------------------------------------------------------------


@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_free_reduction_confluent_under_random_orders(sn17, data):
    # build a random word, reduce via random adjacent cancellations, compare
    rng = random.Random(data.draw(st.integers(0, 10**6)))
    letters = []
    pool = [
        tw(sn17, "A", 1, 1), tw(sn17, "B", 1, 1), tw(sn17, "C", 0, 2), tw(sn17, "A", 2, 3),
    ]
    for _ in range(data.draw(st.integers(0, 10))):
        g = rng.choice(pool)
        letters.append(Twist(g.label, rng.choice((1, -1))))
    w = Word(sn17, tuple(letters))

    def reduce_random(letters):
        letters = list(letters)
        while True:
            spots = [
                i
                for i in range(len(letters) - 1)
                if letters[i].label == letters[i + 1].label
                and letters[i].exp + letters[i + 1].exp == 0
            ]
            if not spots:
                return tuple(letters)
            i = rng.choice(spots)
            del letters[i : i + 2]

    from mcg.words import free_reduce

    expected = free_reduce(w).letters
    for _ in range(5):
        assert reduce_random(w.letters) == expected


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_normalization_sound_against_homology(sn16, jacob, lochness, seed):
    # the whole move machinery (push, commutation, braid transport, shift
    # relabelling) must produce a word the homology oracle cannot separate
    # from the input
    from mcg.homology import verify_identity_homology
    from mcg.sweeps import random_word

    rng = random.Random(seed)
    for model in (sn16, jacob, lochness):
        w = random_word(model, rng, rng.randint(1, 8))
        res = normalize(w, budget=3000)
        hom = verify_identity_homology(w, res.word, 20)
        assert hom.status != "Refuted", (str(w), str(res.word), hom.witness)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_proved_equal_stable_under_rotation(sn17, seed):
    from mcg.sweeps import random_word

    rng = random.Random(seed)
    w1 = random_word(sn17, rng, 4)
    g = random_word(sn17, rng, 2)
    w2 = conjugate(w1, g)
    w2 = g * w1 * invert(g)
    if equivalent(w1, w2, 4000, oracles=False).kind == "ProvedEqual":
        rotated = equivalent(invert(w2) * w1, empty_word(sn17), 4000, oracles=False)
        assert rotated.kind == "ProvedEqual"

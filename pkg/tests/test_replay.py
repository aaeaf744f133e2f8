import pytest
from importlib import resources

from mcg.errors import McgError, WindowTooSmall
from mcg.replay import replay
from mcg.script import CONVENTIONS_ID, parse


def load(name):
    text = resources.files("mcg.data.scripts").joinpath(name + ".mcg").read_text()
    return parse(text, name + ".mcg")


def test_thmA_passes_both_default_n():
    script = load("thmA")
    for n in (17, 19):
        rep = replay(script, n=n)
        assert rep.passed, [str(s.statement) for s in rep.failures]


def test_thmD_passes_including_zero_skip_steps():
    rep = replay(load("thmD"))
    assert rep.passed, [s.statement for s in rep.failures]
    skip_step = next(s for s in rep.statements if "b1b2 = B[1] B~[2]" in s.statement)
    assert skip_step.verdict == "ProvedEqual"


def test_parity_guard():
    with pytest.raises(McgError):
        replay(load("thmA"), n=16)
    with pytest.raises(McgError):
        replay(load("thmB"), n=15)
    with pytest.raises(McgError):
        replay(load("thmA"), n=15)


def test_perturbed_formula_fails_with_homology_witness():
    # corrupt the F2 formula (B[6] -> B[7]) and replay: the statement must
    # fail and the perturbed identity must be refuted by the homology oracle
    text = resources.files("mcg.data.scripts").joinpath("thmA.mcg").read_text()
    needle = "ASSERT_EQ F2 = A[3] C[3] B[6]"
    assert needle in text
    bad = text.replace(needle, "ASSERT_EQ F2 = A[3] C[3] B[7]")
    rep = replay(parse(bad, "thmA-perturbed"), n=17)
    assert not rep.passed
    failing = [s for s in rep.statements if not s.ok]
    assert any("B[7]" in s.statement for s in failing)
    bad_stmt = next(s for s in failing if "B[7]" in s.statement)
    assert bad_stmt.verdict in ("ProvedDistinct", "Unknown")
    assert "Refuted" in bad_stmt.oracle


def test_execution_continues_past_failures():
    text = (
        f"MODEL sn\nPARAM n DEFAULT 17\nCONVENTIONS {CONVENTIONS_ID}\n"
        "ASSERT_EQ A[1] = B[1]\n"
        "ASSERT_EQ A[1] = A[1]\n"
    )
    rep = replay(parse(text))
    assert [s.ok for s in rep.statements] == [False, True]


def test_starved_budget_gives_unknowns():
    rep = replay(load("thmA"), n=17, budget=1)
    assert not rep.passed
    assert rep.unknowns


def test_window_below_displacement_aborts():
    with pytest.raises(WindowTooSmall):
        replay(load("thmA"), n=17, window=5)


def test_every_passing_assert_is_oracle_consistent():
    for name, n in (("thmA", 17), ("thmB", 16), ("thmC", None), ("thmD", None)):
        rep = replay(load(name), n=n)
        for st in rep.statements:
            if st.kind == "AssertEq" and st.ok:
                assert "Refuted" not in st.oracle, st.statement


def test_goalset_reports_source_of_each_goal():
    rep = replay(load("thmC"))
    goal = next(s for s in rep.statements if s.kind == "Goalset")
    assert goal.ok
    assert "<=" in goal.witness

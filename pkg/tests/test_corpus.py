import random

from termsep.corpus import (
    CORPUS_SIGNATURE,
    random_pair,
    random_term,
    replace_at,
    run_corpus,
    strip_parity,
)
from termsep.gf2 import Assign, FlagConst, TweakedAssign
from termsep.terms import App, Var, occurrences, subterm_at, term_size, variables


def test_random_term_respects_budget_and_signature():
    rng = random.Random(1)
    for _ in range(200):
        t = random_term(rng, CORPUS_SIGNATURE, max_nodes=12)
        assert term_size(t) <= 12
        for _, sub in occurrences(t):
            if isinstance(sub, App):
                assert len(sub.args) == CORPUS_SIGNATURE.arity(sub.op)
        assert set(variables(t)) <= {"w", "x", "y", "z"}


def test_random_term_deterministic_per_seed():
    a = random_term(random.Random(42))
    b = random_term(random.Random(42))
    assert a == b


def test_replace_at():
    t = App("g", (Var("x"), App("g", (Var("y"), Var("z")))))
    got = replace_at(t, (("g", 2), ("g", 1)), Var("q"))
    assert got == App("g", (Var("x"), App("g", (Var("q"), Var("z")))))
    assert subterm_at(got, (("g", 2), ("g", 1))) == Var("q")
    assert replace_at(t, (), Var("q")) == Var("q")


def test_random_pair_deterministic():
    assert random_pair(random.Random(9)) == random_pair(random.Random(9))


def test_strip_parity():
    summands = (
        Assign("f", 0, 1, 2),
        TweakedAssign("g", 1, 1, 0),
        FlagConst("g", 2),
    )
    assert strip_parity(summands) == (
        Assign("f", 0, 1, 2),
        Assign("g", 1, 1, 0),
    )


def test_run_corpus_small_clean():
    report = run_corpus(count=60, seed=5)
    assert report.clean
    assert report.unifiable + report.separated == 60
    assert report.unifiable > 0
    assert report.separated > 0
    assert report.failures == []
    assert report.brute_checked + report.brute_skipped == report.separated


def test_run_corpus_zero_count_vacuous():
    report = run_corpus(count=0, seed=5)
    assert report.clean
    assert report.unifiable == report.separated == 0


def test_run_corpus_tamper_detects_corruption():
    report = run_corpus(count=60, seed=5, tamper=True)
    assert not report.clean
    assert report.verification_failures == report.separated > 0
    assert report.verdict_mismatches == 0
    assert len(report.failures) <= 10

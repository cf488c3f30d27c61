import pytest

from termsep.gf2 import check_separation, check_separation_bruteforce
from termsep.models import (
    FiniteModel,
    Inconsistent,
    NegatedEquation,
    NegatedRelation,
    finite_model,
    parse_sentence,
)
from termsep.terms import Signature, TermSyntaxError, Var, parse_term

STAR = Signature({"star": 2})
GCD = Signature({"g": 2, "c": 0, "d": 0})

ANTIASSOC = "!= star(star(x1,x2),x3) star(x1,star(x2,x3))\n"


def test_parse_sentence_mixed():
    text = (
        "# negated atoms, one per line\n"
        "\n"
        "!= g(x,y) x\n"
        "!R(x, g(x,c))\n"
        "!Empty\n"
    )
    got = parse_sentence(text, GCD)
    assert got == [
        NegatedEquation(parse_term("g(x,y)", GCD), Var("x")),
        NegatedRelation("R", (Var("x"), parse_term("g(x,c)", GCD))),
        NegatedRelation("Empty", ()),
    ]
    assert str(got[0]) == "!= g(x,y) x"
    assert str(got[1]) == "!R(x,g(x,c))"
    assert str(got[2]) == "!Empty"


def test_parse_sentence_errors():
    with pytest.raises(TermSyntaxError, match="line 1"):
        parse_sentence("g(x,y) = x\n", GCD)
    with pytest.raises(TermSyntaxError, match="trailing input"):
        parse_sentence("!= g(x,y) x extra\n", GCD)
    with pytest.raises(TermSyntaxError, match="operation, not a relation"):
        parse_sentence("!g(x,y)\n", GCD)
    with pytest.raises(TermSyntaxError, match="unterminated"):
        parse_sentence("!R(x\n", GCD)
    with pytest.raises(TermSyntaxError, match="line 3"):
        parse_sentence("!Ok\n!Fine\n!= x\n", GCD)


def test_antiassociativity_model():
    sentence = parse_sentence(ANTIASSOC, STAR)
    model = finite_model(sentence, STAR)
    assert isinstance(model, FiniteModel)
    assert model.verified
    assert model.algebra.universe_size == 4
    assert len(model.checks) == 1
    check = model.checks[0]
    assert check.certificate.case == "cycle"
    assert check.symbolic
    assert check.exhaustive is True  # 2^(2*3) = 64 assignments, within budget
    s, t = check.equation.left, check.equation.right
    assert check_separation_bruteforce(model.algebra, s, t)


def test_reflexive_equation_is_inconsistent():
    result = finite_model(parse_sentence("!= x x\n", STAR), STAR)
    assert isinstance(result, Inconsistent)
    assert result.equation == NegatedEquation(Var("x"), Var("x"))
    assert result.substitution == {}


def test_unifiable_equation_reports_mgu():
    result = finite_model(parse_sentence("!= g(x,y) g(c,y)\n", GCD), GCD)
    assert isinstance(result, Inconsistent)
    assert result.substitution == {"x": parse_term("c", GCD)}


def test_relations_only_sentence_gives_one_element_model():
    model = finite_model(parse_sentence("!R(x,y)\n!Q\n", GCD), GCD)
    assert isinstance(model, FiniteModel)
    assert model.algebra.universe_size == 1
    assert model.algebra.indices == ()
    assert model.relations == (
        NegatedRelation("R", (Var("x"), Var("y"))),
        NegatedRelation("Q", ()),
    )
    assert model.checks == []
    assert model.verified


def test_product_model_separates_every_equation():
    text = "!= x g(x,y)\n!= c d\n!R(x)\n"
    model = finite_model(parse_sentence(text, GCD), GCD)
    assert isinstance(model, FiniteModel)
    assert model.verified
    assert model.algebra.universe_size == 4
    assert [c.certificate.case for c in model.checks] == ["variable", "conflict"]
    for check in model.checks:
        assert check.symbolic
        assert check.exhaustive is True
        assert check_separation(model.algebra, check.equation.left, check.equation.right)


def test_brute_limit_skips_but_keeps_symbolic_verdict():
    sentence = parse_sentence(ANTIASSOC, STAR)
    model = finite_model(sentence, STAR, brute_limit=4)
    assert isinstance(model, FiniteModel)
    assert model.checks[0].symbolic
    assert model.checks[0].exhaustive is None
    assert model.verified

import random

import pytest

from lcatch.metatheory import GenConfig, _gen_untyped, gen_term
from lcatch.surface import (
    ParseError, expand_defs, expand_term, parse_program, parse_term,
    print_term, print_type,
)
from lcatch.syntax import (
    App, ArrowType, Catch, ConsC, Lam, ListType, LrecC, Nil, Throw, UNIT,
    UNIT_TYPE, Var, alpha_eq, cons,
)

p = parse_term


# ------------- parsing -------------


def test_parse_annotated_lambda():
    assert p("\\x:1. x") == Lam("x", UNIT_TYPE, Var("x"))


def test_parse_catch_throw():
    assert p("catch a. throw a ()") == Catch("a", Throw("a", UNIT))


def test_parse_application_left_associative():
    t = p("lrec r s t u")
    assert t == App(App(App(App(LrecC(), Var("r")), Var("s")), Var("t")), Var("u"))


def test_parse_list_literal():
    assert p("[(), ()]") == cons(UNIT, cons(UNIT, Nil()))


def test_parse_numeral_sugar():
    assert p("#0") == Nil()
    assert p("#2") == cons(UNIT, cons(UNIT, Nil()))


def test_parse_prefix_forms_extend_maximally():
    # catch/lambda/throw swallow the whole rest of their scope
    assert p("catch a. f x") == Catch("a", App(Var("f"), Var("x")))
    assert p("throw a f x") == Throw("a", App(Var("f"), Var("x")))
    assert p("\\x. f x") == Lam("x", None, App(Var("f"), Var("x")))


def test_parse_types():
    t = p("\\f: (1 -> 1) -> [1]. f")
    assert t.annot == ArrowType(ArrowType(UNIT_TYPE, UNIT_TYPE), ListType(UNIT_TYPE))
    t = p("\\f: 1 -> 1 -> 1. f")  # right-associative
    assert t.annot == ArrowType(UNIT_TYPE, ArrowType(UNIT_TYPE, UNIT_TYPE))


def test_parse_comments_and_whitespace():
    src = """
    -- leading comment
    (\\x. -- inline comment
       x) ()
    """
    assert p(src) == App(Lam("x", None, Var("x")), UNIT)


def test_parse_ascription_elaborates_to_identity_application():
    t = p("([] : [1])")
    assert t == App(Lam("_asc", ListType(UNIT_TYPE), Var("_asc")), Nil())


def test_parse_primed_identifiers():
    assert p("x'1") == Var("x'1")


def test_parse_error_positions_are_one_based():
    with pytest.raises(ParseError) as info:
        p("\\x. (x")
    assert info.value.line == 1
    assert info.value.column == 7


def test_parse_error_on_unicode_identifier():
    with pytest.raises(ParseError):
        p("λx. x")


def test_parse_error_reports_expected():
    with pytest.raises(ParseError) as info:
        p("throw . x")
    assert info.value.expected


def test_parse_is_deterministic():
    src = "catch a. throw a (cons () [])"
    assert p(src) == p(src)


# ------------- programs -------------


def test_parse_program_defs_and_main():
    prog = parse_program("def id = \\x. x;\ndef two = id #2;\nmain = two;\n")
    assert [name for name, _ in prog.defs] == ["id", "two"]
    assert prog.main == Var("two")


def test_parse_program_rejects_duplicate_names():
    with pytest.raises(ParseError):
        parse_program("def f = (); def f = [];")


def test_expand_defs_substitutes_earlier_into_later():
    prog = parse_program("def id = \\x. x;\ndef app = id ();\n")
    defs = expand_defs(prog)
    assert alpha_eq(defs[1][1], p("(\\x. x) ()"))


def test_expand_term_uses_scope():
    prog = parse_program("def id = \\x. x;")
    out = expand_term(p("id id"), expand_defs(prog))
    assert alpha_eq(out, p("(\\x. x) (\\x. x)"))


def test_empty_program():
    prog = parse_program("  -- nothing here\n")
    assert prog.defs == [] and prog.main is None


# ------------- printing -------------


def test_print_application_of_lambda():
    assert print_term(p("(\\x. x) ()")) == "(\\x. x) ()"


def test_print_list_sugar():
    assert print_term(cons(UNIT, Nil())) == "[()]"


def test_print_numeral_sugar_only_when_enabled():
    two = cons(UNIT, cons(UNIT, Nil()))
    assert print_term(two) == "[(), ()]"
    assert print_term(two, sugar=True) == "#2"
    assert print_term(Nil(), sugar=True) == "#0"


def test_print_throw_body_is_maximal():
    assert print_term(Throw("a", Var("x"))) == "throw a x"
    assert print_term(Throw("a", App(Var("f"), Var("x")))) == "throw a f x"
    assert print_term(App(Throw("a", Var("x")), Var("y"))) == "(throw a x) y"


def test_print_partial_cons_as_application():
    assert print_term(App(ConsC(), UNIT)) == "cons ()"
    assert print_term(cons(UNIT, Var("t"))) == "cons () t"


def test_print_types():
    assert print_type(ArrowType(ArrowType(UNIT_TYPE, UNIT_TYPE), UNIT_TYPE)) == "(1 -> 1) -> 1"
    assert print_type(ListType(ListType(UNIT_TYPE))) == "[[1]]"


# ------------- round trip -------------


def test_round_trip_untyped_terms():
    rng = random.Random(100)
    for _ in range(800):
        t = _gen_untyped(rng, 14, 0)
        for sugar in (False, True):
            assert alpha_eq(parse_term(print_term(t, sugar=sugar)), t)


def test_round_trip_typed_terms():
    for seed in range(300):
        t = gen_term(GenConfig(seed=seed, max_size=18, typed=True))
        assert alpha_eq(parse_term(print_term(t)), t)

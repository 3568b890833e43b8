import pytest
from hypothesis import given

import gen
from kamio.syntax import (
    Abs, App, CALLCC, ClosednessError, END, EMPTY, Kont, Pair, ParseError,
    READ, TOP, Var, WRITE0, WRITE1, church_numeral, effect_constants,
    free_variables, is_proof_like, parse_process, parse_stack, parse_term,
    pretty, stack_of, substitute,
)


class TestParseTerm:
    def test_identity(self):
        assert parse_term(r"\x. x") == Abs("x", Var("x"))

    def test_application_left_associative(self):
        t = parse_term("read (write0 end) (write1 end) end")
        expected = App(App(App(READ, App(WRITE0, END)), App(WRITE1, END)), END)
        assert t == expected

    def test_curry_fixed_point(self):
        y = parse_term(r"\f. (\x. f (x x)) (\x. f (x x))")
        half = Abs("x", App(Var("f"), App(Var("x"), Var("x"))))
        assert y == Abs("f", App(half, half))

    def test_lambda_body_extends_right(self):
        assert parse_term(r"\x. x x") == Abs("x", App(Var("x"), Var("x")))

    def test_church_sugar(self):
        assert parse_term("#0") == Abs("f", Abs("x", Var("x")))
        assert parse_term("#2") == church_numeral(2)
        assert parse_term("# 3") == church_numeral(3)

    def test_comments_and_whitespace(self):
        assert parse_term("cc -- a comment\n") is CALLCC
        assert parse_term("  ( \n cc )  ") is CALLCC

    def test_kont_atom(self):
        t = parse_term("kont{end :: nil}")
        assert t == Kont(stack_of(END))

    def test_alpha_equivalence_of_parses(self):
        assert parse_term(r"\x. x") == parse_term(r"\y. y")
        assert parse_term(r"\x. \y. x") != parse_term(r"\x. \y. y")

    def test_alpha_equivalence_under_shadowing(self):
        # shadowed binders must not collapse distinct references
        assert parse_term(r"\x. \x. \y. x") != parse_term(r"\x. \x. \y. y")
        assert parse_term(r"\x. \x. x") == parse_term(r"\a. \b. b")
        assert parse_term(r"\x. \x. x") != parse_term(r"\a. \b. a")
        left = parse_term(r"\x. \x. \y. x")
        right = parse_term(r"\a. \b. \c. b")
        assert left == right
        assert hash(left) == hash(right)

    def test_reserved_words_rejected_as_binders(self):
        for word in ("cc", "read", "write0", "write1", "end", "nil", "TOP", "kont"):
            with pytest.raises(ParseError):
                parse_term(rf"\{word}. {word}")

    def test_nil_is_not_a_term(self):
        with pytest.raises(ParseError):
            parse_term("nil")

    def test_error_carries_position_and_expectations(self):
        with pytest.raises(ParseError) as info:
            parse_term("\\x.\n)")
        assert info.value.line == 2
        assert info.value.col == 1
        assert info.value.expected

    def test_trailing_input_rejected(self):
        with pytest.raises(ParseError):
            parse_term("cc )")

    def test_kont_entries_must_be_closed(self):
        with pytest.raises(ClosednessError):
            parse_term(r"\x. kont{x :: nil}")


class TestParseProcess:
    def test_end_nil(self):
        assert parse_process("end * nil") == Pair(END, EMPTY)

    def test_top(self):
        assert parse_process("TOP") is TOP

    def test_lambda_head(self):
        p = parse_process(r"(\x. x) * end :: nil")
        assert p == Pair(Abs("x", Var("x")), stack_of(END))

    def test_head_must_be_closed(self):
        with pytest.raises(ClosednessError):
            parse_process("x * nil")

    def test_stack_entries_must_be_closed(self):
        with pytest.raises(ClosednessError):
            parse_process("end * y :: nil")

    def test_parse_stack(self):
        s = parse_stack("end :: cc :: nil")
        assert list(s) == [END, CALLCC]


class TestPretty:
    def test_process(self):
        assert pretty(Pair(END, EMPTY)) == "end * nil"

    def test_kont_surface_form(self):
        assert pretty(Kont(stack_of(END))) == "kont{end :: nil}"

    def test_self_application(self):
        assert pretty(Abs("x", App(Var("x"), Var("x")))) == r"\x. x x"

    def test_minimal_parens_in_applications(self):
        t = parse_term(r"(\x. x) ((\y. y) end)")
        assert pretty(t) == r"(\x. x) ((\y. y) end)"
        assert pretty(parse_term("a b c")) == "a b c"
        assert pretty(parse_term("a (b c)")) == "a (b c)"

    @given(gen.closed_terms())
    def test_round_trip_terms(self, t):
        assert parse_term(pretty(t)) == t

    @given(gen.open_terms())
    def test_round_trip_open_terms(self, t):
        assert parse_term(pretty(t)) == t

    @given(gen.processes())
    def test_round_trip_processes(self, p):
        assert parse_process(pretty(p)) == p


class TestSubstitute:
    def test_replaces_free_occurrence(self):
        assert substitute(Var("x"), "x", END) is END

    def test_capture_avoidance_renames(self):
        result = substitute(Abs("y", Var("x")), "x", Var("y"))
        assert isinstance(result, Abs)
        assert result.param != "y"
        assert result.body == Var("y")
        assert result == parse_term(r"\z. y")  # alpha-equal reading

    def test_bound_occurrences_shadow(self):
        t = Abs("x", Var("x"))
        assert substitute(t, "x", END) == t

    @given(gen.open_terms(), gen.closed_terms(max_size=8))
    def test_free_variable_bookkeeping(self, body, arg):
        before = free_variables(body)
        result = substitute(body, "x", arg)
        if "x" in before:
            assert free_variables(result) == (before - {"x"}) | free_variables(arg)
        else:
            assert result == body

    @given(gen.open_terms(), gen.closed_terms(max_size=8, effects=False))
    def test_proof_like_stability(self, body, arg):
        if is_proof_like(body) and is_proof_like(arg):
            assert is_proof_like(substitute(body, "x", arg))


class TestProofLike:
    def test_cc_is_proof_like(self):
        assert is_proof_like(CALLCC)

    def test_effects_are_not(self):
        assert not is_proof_like(App(WRITE0, Var("x")))

    def test_continuation_stacks_are_searched(self):
        assert not is_proof_like(Kont(stack_of(END)))
        assert is_proof_like(Kont(stack_of(CALLCC)))

    def test_effect_constant_listing(self):
        t = parse_term(r"\x. read (write0 x) (write1 x) end")
        assert effect_constants(t) == frozenset({"read", "write0", "write1", "end"})


class TestFreeVariables:
    def test_variable(self):
        assert free_variables(Var("x")) == {"x"}

    def test_abstraction_binds(self):
        assert free_variables(Abs("x", Var("x"))) == frozenset()

    def test_mixed(self):
        t = App(Var("x"), Abs("x", Var("x")))
        assert free_variables(t) == {"x"}


class TestStackInvariants:
    def test_push_rejects_open_terms(self):
        with pytest.raises(ClosednessError):
            EMPTY.push(Var("x"))

    def test_pair_rejects_open_head(self):
        with pytest.raises(ClosednessError):
            Pair(Var("x"), EMPTY)

    def test_stack_iteration_order(self):
        s = stack_of(READ, WRITE0, END)
        assert list(s) == [READ, WRITE0, END]
        assert len(s) == 3

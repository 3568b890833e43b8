import random

import pytest
from hypothesis import given
import hypothesis.strategies as st

import gen
from kamio.machine import (
    Action, ExecutionContext, bin_nat, eval_step, exec_step,
    exec_step_labeled, implements_on, nat_of_bin, run,
)
from kamio.syntax import (
    App, END, EMPTY, Pair, READ, TOP, WRITE0, WRITE1,
    parse_process, stack_of,
)


def ctx(text, inp="", out=""):
    return ExecutionContext(parse_process(text), inp, out)


class TestEvalStep:
    def test_push(self):
        p = Pair(App(END, END), EMPTY)
        assert eval_step(p) == Pair(END, stack_of(END))

    def test_pop_substitutes(self):
        p = parse_process(r"(\x. x) * end :: nil")
        assert eval_step(p) == parse_process("end * nil")

    def test_save_captures_stack(self):
        p = parse_process(r"cc * (\x. x) :: end :: nil")
        expected = parse_process(r"(\x. x) * kont{end :: nil} :: end :: nil")
        assert eval_step(p) == expected

    def test_restore_discards_current_stack(self):
        p = parse_process(r"kont{nil} * end :: (\y. y) :: nil")
        assert eval_step(p) == parse_process("end * nil")

    def test_instruction_heads_do_not_evaluate(self):
        assert eval_step(parse_process("end * nil")) is None
        assert eval_step(parse_process("read * end :: end :: end :: nil")) is None
        assert eval_step(parse_process("write0 * end :: nil")) is None

    def test_empty_stack_blocks_pop_save_restore(self):
        assert eval_step(parse_process(r"(\x. x) * nil")) is None
        assert eval_step(parse_process("cc * nil")) is None
        assert eval_step(parse_process("kont{end :: nil} * nil")) is None

    def test_top_has_no_step(self):
        assert eval_step(TOP) is None


class TestExecStep:
    def test_tau_defers_to_eval(self):
        before = ctx(r"(\x. x) end * nil", "01", "1")
        after = exec_step_labeled(before)
        assert after == (Action.TAU, ctx(r"(\x. x) * end :: nil", "01", "1"))

    def test_read_zero(self):
        before = ctx("read * end :: cc :: write0 :: write1 :: nil", "01", "")
        assert exec_step_labeled(before) == (Action.R0, ctx("end * write1 :: nil", "1", ""))

    def test_read_one(self):
        before = ctx("read * end :: cc :: write0 :: nil", "10", "")
        assert exec_step_labeled(before) == (Action.R1, ctx("cc * nil", "0", ""))

    def test_read_empty_input(self):
        before = ctx("read * end :: cc :: write0 :: nil", "", "1")
        assert exec_step_labeled(before) == (Action.REPS, ctx("write0 * nil", "", "1"))

    def test_write_zero_prepends(self):
        before = ctx("write0 * end :: nil", "1", "1")
        assert exec_step_labeled(before) == (Action.W0, ctx("end * nil", "1", "01"))

    def test_write_one_prepends(self):
        before = ctx("write1 * end :: nil", "", "0")
        assert exec_step_labeled(before) == (Action.W1, ctx("end * nil", "", "10"))

    def test_end_discards_stack(self):
        before = ctx("end * cc :: write0 :: nil", "10", "1")
        assert exec_step_labeled(before) == (Action.E, ExecutionContext(TOP, "10", "1"))

    def test_read_needs_three_arguments(self):
        assert exec_step(ctx("read * end :: nil", "0", "")) is None
        assert exec_step(ctx("read * end :: end :: nil", "0", "")) is None

    def test_write_needs_one_argument(self):
        assert exec_step(ctx("write0 * nil")) is None

    def test_top_is_absorbing(self):
        assert exec_step(ExecutionContext(TOP, "0", "1")) is None


class TestRun:
    def test_end_terminates_with_e(self):
        result = run(ctx("end * nil"), 10)
        assert result.outcome == "terminated"
        assert result.final == ExecutionContext(TOP, "", "")
        assert result.trace == (Action.E,)

    def test_write_pipeline(self):
        result = run(ctx("write0 (write1 end) * nil"), 10)
        assert result.outcome == "terminated"
        assert result.final.output == "10"
        assert result.trace == (Action.TAU, Action.W0, Action.TAU, Action.W1, Action.E)

    def test_omega_exhausts_fuel(self):
        result = run(ctx(r"(\x. x x) (\x. x x) * nil"), 100)
        assert result.outcome == "fuel"
        assert result.steps == 100

    def test_stuck_reports_residual(self):
        result = run(ctx("read * nil", "0"), 10)
        assert result.outcome == "stuck"
        assert result.final.input == "0"

    def test_steps_equals_trace_length(self):
        result = run(ctx("write0 (write1 end) * nil", "10"), 100)
        assert result.steps == len(result.trace)

    def test_run_from_top_is_terminated(self):
        result = run(ExecutionContext(TOP, "1", "0"), 5)
        assert result.outcome == "terminated"
        assert result.trace == ()

    def test_json_shape(self):
        payload = run(ctx("end * nil"), 10).to_json()
        assert payload == {
            "outcome": "terminated", "process": "TOP", "input": "",
            "output": "", "steps": 1, "trace": ["e"],
        }


class TestBin:
    @pytest.mark.parametrize("n,expected", [(0, ""), (1, "1"), (2, "10"), (3, "11"), (13, "1101")])
    def test_values(self, n, expected):
        assert bin_nat(n) == expected

    @given(st.integers(0, 10**6))
    def test_round_trip(self, n):
        assert nat_of_bin(bin_nat(n)) == n

    def test_nat_of_bin_rejects_leading_zero(self):
        with pytest.raises(ValueError):
            nat_of_bin("01")


class TestImplementsOn:
    def test_end_implements_zero_to_zero(self):
        assert implements_on(parse_process("end * nil"), {0: 0}, 10).is_verified

    def test_unconsumed_input_refutes(self):
        verdict = implements_on(parse_process("end * nil"), {1: 1}, 10)
        assert verdict.is_refuted
        n, witness = verdict.witness
        assert n == 1
        assert witness.final.input == "1"

    def test_tiny_fuel_is_unknown(self):
        omega = parse_process(r"(\x. x x) (\x. x x) * nil")
        assert implements_on(omega, {0: 0}, 5).is_unknown

    def test_refutation_beats_unknown(self):
        # row 0 diverges (unknown), row 1 terminates wrong: refuted overall
        r = parse_process(r"read * end :: end :: ((\x. x x) (\x. x x)) :: nil")
        assert implements_on(r, {0: 0}, 1000).is_unknown
        verdict = implements_on(r, {0: 0, 1: 1}, 1000)
        assert verdict.is_refuted
        assert verdict.witness[0] == 1


# the seven execution clauses, as independent matchers for overlap checking
def matching_clauses(c: ExecutionContext) -> list[str]:
    matched = []
    p = c.process
    if not isinstance(p, Pair):
        return matched
    t, pi = p.term, p.stack
    if eval_step(p) is not None:
        matched.append("tau")
    if t is READ and len(pi) >= 3:
        if c.input.startswith("0"):
            matched.append("r0")
        if c.input.startswith("1"):
            matched.append("r1")
        if c.input == "":
            matched.append("reps")
    if t is WRITE0 and len(pi) >= 1:
        matched.append("w0")
    if t is WRITE1 and len(pi) >= 1:
        matched.append("w1")
    if t is END:
        matched.append("e")
    return matched


class TestDeterminism:
    def test_clauses_never_overlap(self):
        rng = random.Random(7)
        for _ in range(300):
            c = gen.random_context(rng)
            matched = matching_clauses(c)
            assert len(matched) <= 1, (str(c), matched)
            step = exec_step_labeled(c)
            if matched:
                assert step is not None and step[0].value == matched[0]
            else:
                assert step is None

    @given(gen.contexts())
    def test_exec_step_agrees_with_clause_analysis(self, c):
        matched = matching_clauses(c)
        assert len(matched) <= 1
        step = exec_step_labeled(c)
        assert (step is None) == (not matched)

    @given(gen.processes())
    def test_conservativity_over_eval(self, p):
        q = eval_step(p)
        if q is not None:
            for inp, out in (("", ""), ("10", "1")):
                assert exec_step(ExecutionContext(p, inp, out)) == ExecutionContext(q, inp, out)


class TestRunProperties:
    @given(gen.contexts(), st.integers(0, 60))
    def test_output_grows_input_shrinks(self, c, fuel):
        previous = c
        for _ in range(fuel):
            step = exec_step(previous)
            if step is None:
                break
            assert step.output.endswith(previous.output)
            assert len(step.output) - len(previous.output) in (0, 1)
            assert previous.input.endswith(step.input)
            assert len(previous.input) - len(step.input) in (0, 1)
            previous = step

    @given(gen.contexts(), st.integers(0, 40), st.integers(0, 40))
    def test_fuel_monotonicity(self, c, fuel, extra):
        first = run(c, fuel)
        if first.outcome == "terminated":
            second = run(c, fuel + extra)
            assert second.outcome == "terminated"
            assert second.final == first.final
            assert second.trace == first.trace

"""The evaluation and execution relations of the machine.

Effect-free evaluation rewrites a process by weak head reduction
(push/pop) plus continuation capture and restore.  Execution acts on a
context (process, input bits, output bits): instruction constants in head
position consume input bits or prepend output bits, and `end` discards
the stack and terminates at TOP.  Written bits are prepended, so the
final output string is read verbatim as a most-significant-bit-first
binary numeral.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .syntax import (
    Abs, App, CALLCC, Kont, Pair, Process, READ, TOP,
    WRITE0, WRITE1, END, pretty, substitute,
)
from .verdict import Verdict

__all__ = [
    "DEFAULT_FUEL", "Action", "ExecutionContext", "RunResult",
    "eval_step", "exec_step", "exec_step_labeled", "run",
    "bin_nat", "nat_of_bin", "implements_row", "implements_on",
]

DEFAULT_FUEL = 1_000_000


class Action(Enum):
    """Transition labels; TAU is the silent (effect-free) step."""

    TAU = "tau"
    R0 = "r0"
    R1 = "r1"
    REPS = "reps"
    W0 = "w0"
    W1 = "w1"
    E = "e"


@dataclass(frozen=True)
class ExecutionContext:
    """A process together with remaining input and accumulated output.

    The head of `input` is the next bit to be read; the head of `output`
    is the most recently written bit.
    """

    process: Process
    input: str = ""
    output: str = ""

    def __post_init__(self):
        for field in (self.input, self.output):
            if field.strip("01"):
                raise ValueError(f"input/output must contain only bits: {field!r}")

    def __str__(self):
        return f"({pretty(self.process)}, {self.input!r}, {self.output!r})"


@dataclass(frozen=True)
class RunResult:
    """Outcome of a fuel-bounded run.

    outcome is "terminated" (reached TOP), "stuck" (no step applies), or
    "fuel" (step budget exhausted).  For runs that take at least one step,
    a "terminated" trace always ends with Action.E.
    """

    outcome: str
    final: ExecutionContext
    trace: tuple[Action, ...]

    @property
    def steps(self) -> int:
        return len(self.trace)

    @property
    def terminated(self) -> bool:
        return self.outcome == "terminated"

    def visible_trace(self) -> tuple[Action, ...]:
        return tuple(a for a in self.trace if a is not Action.TAU)

    def to_json(self) -> dict:
        return {
            "outcome": self.outcome,
            "process": pretty(self.final.process),
            "input": self.final.input,
            "output": self.final.output,
            "steps": self.steps,
            "trace": [a.value for a in self.trace],
        }


def eval_step(p: Process) -> Process | None:
    """The unique effect-free successor of p, or None if no rule applies.

    Instruction constants in head position never step here; they only
    step in the execution relation.
    """
    if p is TOP or not isinstance(p, Pair):
        return None
    t, pi = p.term, p.stack
    cls = t.__class__
    if cls is App:
        return Pair(t.fun, pi.push(t.arg))
    if pi.is_empty:
        return None
    if cls is Abs:
        return Pair(substitute(t.body, t.param, pi.head), pi.tail)
    if t is CALLCC:
        rest = pi.tail
        return Pair(pi.head, rest.push(Kont(rest)))
    if cls is Kont:
        return Pair(pi.head, t.stack)
    return None


def exec_step_labeled(c: ExecutionContext) -> tuple[Action, ExecutionContext] | None:
    """One execution step together with its action, or None if stuck."""
    p = c.process
    if p is TOP or not isinstance(p, Pair):
        return None
    t, pi = p.term, p.stack
    if t is END:
        return Action.E, ExecutionContext(TOP, c.input, c.output)
    if t is READ:
        if len(pi) < 3:
            return None
        first = pi.head
        rest1 = pi.tail
        second = rest1.head
        rest2 = rest1.tail
        third = rest2.head
        tail = rest2.tail
        if c.input == "":
            return Action.REPS, ExecutionContext(Pair(third, tail), "", c.output)
        if c.input[0] == "0":
            return Action.R0, ExecutionContext(Pair(first, tail), c.input[1:], c.output)
        return Action.R1, ExecutionContext(Pair(second, tail), c.input[1:], c.output)
    if t is WRITE0:
        if pi.is_empty:
            return None
        return Action.W0, ExecutionContext(Pair(pi.head, pi.tail), c.input, "0" + c.output)
    if t is WRITE1:
        if pi.is_empty:
            return None
        return Action.W1, ExecutionContext(Pair(pi.head, pi.tail), c.input, "1" + c.output)
    q = eval_step(p)
    if q is None:
        return None
    return Action.TAU, ExecutionContext(q, c.input, c.output)


def exec_step(c: ExecutionContext) -> ExecutionContext | None:
    """One execution step, or None if the context is stuck."""
    step = exec_step_labeled(c)
    return None if step is None else step[1]


def run(c: ExecutionContext, fuel: int = DEFAULT_FUEL) -> RunResult:
    """Iterate the execution relation at most `fuel` steps.

    Stops early at TOP ("terminated") or when no step applies ("stuck").
    """
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    trace: list[Action] = []
    for _ in range(fuel):
        if c.process is TOP:
            return RunResult("terminated", c, tuple(trace))
        step = exec_step_labeled(c)
        if step is None:
            return RunResult("stuck", c, tuple(trace))
        action, c = step
        trace.append(action)
    if c.process is TOP:
        return RunResult("terminated", c, tuple(trace))
    if exec_step_labeled(c) is None:
        return RunResult("stuck", c, tuple(trace))
    return RunResult("fuel", c, tuple(trace))


def bin_nat(n: int) -> str:
    """MSB-first base-2 representation; zero is the empty string."""
    if n < 0:
        raise ValueError("bin_nat is defined for naturals only")
    return "" if n == 0 else format(n, "b")


def nat_of_bin(s: str) -> int:
    """Inverse of bin_nat; rejects leading zeros and non-bit characters."""
    if s == "":
        return 0
    if s.strip("01"):
        raise ValueError(f"not a bit string: {s!r}")
    if s[0] == "0":
        raise ValueError(f"leading zero in binary numeral: {s!r}")
    return int(s, 2)


def implements_row(p: Process, n: int, m: int, fuel: int = DEFAULT_FUEL) -> Verdict:
    """Check a single input/output table row: running p on bin(n) must
    terminate with empty residual input and output exactly bin(m)."""
    result = run(ExecutionContext(p, bin_nat(n), ""), fuel)
    if result.outcome == "fuel":
        return Verdict.unknown("fuel", witness=(n, result))
    if result.outcome == "stuck":
        return Verdict.refuted((n, result))
    if result.final.input == "" and result.final.output == bin_nat(m):
        return Verdict.verified()
    return Verdict.refuted((n, result))


def implements_on(p: Process, table: dict[int, int], fuel: int = DEFAULT_FUEL) -> Verdict:
    """Check p against a finite input/output table.

    Verified covers only the supplied rows; it is a bounded proxy for
    implementing the function on its whole domain.
    """
    first_unknown: Verdict | None = None
    for n in sorted(table):
        verdict = implements_row(p, n, table[n], fuel)
        if verdict.is_refuted:
            return verdict
        if verdict.is_unknown and first_unknown is None:
            first_unknown = verdict
    return first_unknown if first_unknown is not None else Verdict.verified()

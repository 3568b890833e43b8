"""Desk-scale classical realizability over the machine with I/O.

A pole is a set of processes closed under predecessors of effect-free
evaluation; here poles are built from finite seed sets or from I/O
specifications (input/output tables, trace disciplines), so membership is
a fuel-bounded three-valued check.  Truth values are finite stack sets, a
term realizes a truth value when pairing it with each member stack lands
in the pole, and entailment between finite predicates is checked by
enumerating realizer tuples.  Every quantification over an infinite set
(all stacks, all realizers, all inputs) is approximated by explicit
samples, and verdicts that relied on a sample say so.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Iterable, Iterator, Mapping

from .machine import (
    Action, DEFAULT_FUEL, ExecutionContext, eval_step, implements_on, run,
)
from .syntax import (
    Abs, App, CALLCC, Pair, Process, Stack, Term, TOP, Var,
    NotProofLike, effect_constants, is_proof_like, parse_process,
    parse_stack, parse_term, pretty,
)
from .verdict import Verdict

__all__ = [
    "TruthValue", "Predicate", "RealizerList", "Sequent", "ContextEntry",
    "Pole", "FinitePole", "FunctionPole", "TracePole", "UnionPole",
    "COPY", "READ_ALL_THEN_WRITE",
    "pole_member", "trace_conforms", "all_inputs",
    "realizes", "implication", "forall_along", "reindex",
    "Connective", "encode", "and_antecedent", "MissingRealizers",
    "check_entailment",
    "Ax", "BotE", "ImpI", "ImpE", "Weaken", "Contract", "Exchange", "Peirce",
    "rule_realizer",
    "consistency_probe", "ConsistencyReport", "CandidateProbe", "AuditEntry",
    "scenario_from_json", "pole_from_json", "run_scenario", "verdict_to_json",
]


class MissingRealizers(Exception):
    """An encoding needs a realizer list for an implication antecedent."""


# ---------------------------------------------------------------------------
# Truth values, predicates, realizer lists


@dataclass(frozen=True)
class TruthValue:
    """A finite set of stacks; bigger sets are `falser`.

    all_stacks marks the list as a sample of the set of all stacks (the
    falsity truth value); checks against such a sample are only ever
    under-approximations and downgrade Verified to sampled-Verified.
    """

    stacks: tuple[Stack, ...]
    all_stacks: bool = False

    @staticmethod
    def of(stacks: Iterable[Stack], all_stacks: bool = False) -> "TruthValue":
        return TruthValue(tuple(dict.fromkeys(stacks)), all_stacks)

    def __iter__(self) -> Iterator[Stack]:
        return iter(self.stacks)

    def __len__(self) -> int:
        return len(self.stacks)

    def union(self, other: "TruthValue") -> "TruthValue":
        return TruthValue.of(self.stacks + other.stacks,
                             self.all_stacks or other.all_stacks)


EMPTY_TRUTH = TruthValue(())


def falsity_sample(stacks: Iterable[Stack]) -> TruthValue:
    """An explicit sample standing in for the set of all stacks."""
    return TruthValue.of(stacks, all_stacks=True)


@dataclass(frozen=True)
class RealizerList:
    """Closed terms designated as known realizers of some truth value;
    a finite stand-in for the full realizer set."""

    terms: tuple[Term, ...]

    def __post_init__(self):
        for t in self.terms:
            if t.fvs:
                raise ValueError(f"realizer is not closed: {pretty(t)}")

    @staticmethod
    def of(terms: Iterable[Term]) -> "RealizerList":
        return RealizerList(tuple(terms))

    def __iter__(self) -> Iterator[Term]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)


@dataclass(frozen=True)
class Predicate:
    """A finite-index family of truth values."""

    index_set: tuple[Any, ...]
    mapping: Mapping[Any, TruthValue]

    def __post_init__(self):
        missing = [i for i in self.index_set if i not in self.mapping]
        if missing:
            raise ValueError(f"predicate is not total: missing {missing!r}")

    @staticmethod
    def of(mapping: Mapping[Any, TruthValue], index_set: Iterable[Any] | None = None) -> "Predicate":
        indices = tuple(index_set) if index_set is not None else tuple(mapping)
        return Predicate(indices, dict(mapping))

    def __call__(self, index) -> TruthValue:
        return self.mapping[index]


# ---------------------------------------------------------------------------
# Poles

COPY = "copy"
READ_ALL_THEN_WRITE = "read_all_then_write"


class Pole:
    """Base class for bounded pole-membership engines."""

    fuel: int

    def member(self, p: Process, fuel: int | None = None) -> Verdict:
        raise NotImplementedError


@dataclass(frozen=True)
class FinitePole(Pole):
    """The saturation closure of a finite seed set: a process is a member
    iff its effect-free evaluation chain reaches a seed within fuel."""

    seeds: frozenset[Process]
    fuel: int = 10_000

    @staticmethod
    def of(seeds: Iterable[Process], fuel: int = 10_000) -> "FinitePole":
        return FinitePole(frozenset(seeds), fuel)

    def member(self, p: Process, fuel: int | None = None) -> Verdict:
        budget = self.fuel if fuel is None else fuel
        seen: set[Process] = set()
        current = p
        while True:
            if current in self.seeds:
                return Verdict.verified()
            if current in seen:
                return Verdict.refuted(current)  # evaluation cycles short of any seed
            seen.add(current)
            successor = eval_step(current)
            if successor is None:
                return Verdict.refuted(current)
            if budget <= 0:
                return Verdict.unknown("fuel", witness=current)
            budget -= 1
            current = successor


@dataclass(frozen=True)
class FunctionPole(Pole):
    """Processes implementing a partial function, bounded to a finite
    table of (input, output) rows.  Verified is an over-approximation:
    only the listed rows are checked."""

    table: tuple[tuple[int, int], ...]
    fuel: int = DEFAULT_FUEL

    @staticmethod
    def of(table: Mapping[int, int], fuel: int = DEFAULT_FUEL) -> "FunctionPole":
        return FunctionPole(tuple(sorted(table.items())), fuel)

    def member(self, p: Process, fuel: int | None = None) -> Verdict:
        verdict = implements_on(p, dict(self.table), self.fuel if fuel is None else fuel)
        if verdict.is_verified:
            return Verdict.verified(sampled=True)  # table rows only, not all of dom(f)
        return verdict


def all_inputs(max_len: int) -> Iterator[str]:
    """All bit strings of length 0..max_len, shortest first."""
    for length in range(max_len + 1):
        for bits in itertools.product("01", repeat=length):
            yield "".join(bits)


def _read_label(bit: str) -> Action:
    return Action.R0 if bit == "0" else Action.R1


def trace_conforms(spec: str, p: Process, input_bits: str, fuel: int) -> Verdict:
    """Does running p on input_bits produce the visible trace the
    discipline requires?  Silent steps are unconstrained throughout.

    copy: strictly alternate reading a bit and writing that same bit,
    then observe the empty input and terminate.

    read_all_then_write: all reads (the input bits, then at least one
    empty-input probe) strictly before all writes, terminal output equal
    to the input string, then terminate.
    """
    result = run(ExecutionContext(p, input_bits, ""), fuel)
    if result.outcome == "fuel":
        return Verdict.unknown("fuel", witness=input_bits)
    visible = result.visible_trace()
    if result.outcome == "stuck":
        return Verdict.refuted((input_bits, visible))
    if spec == COPY:
        expected: list[Action] = []
        for bit in input_bits:
            expected.append(_read_label(bit))
            expected.append(Action.W0 if bit == "0" else Action.W1)
        expected.append(Action.REPS)
        expected.append(Action.E)
        ok = visible == tuple(expected)
    elif spec == READ_ALL_THEN_WRITE:
        reads = [a for a in visible if a in (Action.R0, Action.R1, Action.REPS)]
        boundary = len(reads)
        read_bits = "".join("0" if a is Action.R0 else "1"
                            for a in reads if a is not Action.REPS)
        ok = (visible[:boundary] == tuple(reads)          # no read after a write
              and read_bits == input_bits                  # whole input consumed
              and Action.REPS in reads and reads[-1] is Action.REPS
              and visible[-1] is Action.E
              and all(a in (Action.W0, Action.W1) for a in visible[boundary:-1])
              and result.final.output == input_bits)
    else:
        raise ValueError(f"unknown trace discipline {spec!r}")
    return Verdict.verified() if ok else Verdict.refuted((input_bits, visible))


@dataclass(frozen=True)
class TracePole(Pole):
    """Processes whose visible traces satisfy a discipline on every input
    of bounded length."""

    spec: str
    max_input_len: int = 4
    fuel: int = 100_000

    def member(self, p: Process, fuel: int | None = None) -> Verdict:
        budget = self.fuel if fuel is None else fuel
        first_unknown: Verdict | None = None
        for input_bits in all_inputs(self.max_input_len):
            verdict = trace_conforms(self.spec, p, input_bits, budget)
            if verdict.is_refuted:
                return verdict
            if verdict.is_unknown and first_unknown is None:
                first_unknown = verdict
        if first_unknown is not None:
            return first_unknown
        return Verdict.verified(sampled=True)  # inputs up to max_input_len only


@dataclass(frozen=True)
class UnionPole(Pole):
    """Union of poles: member of any part means member of the union."""

    members: tuple[Pole, ...]
    fuel: int = DEFAULT_FUEL

    def member(self, p: Process, fuel: int | None = None) -> Verdict:
        refutations = []
        unknown = False
        for part in self.members:
            verdict = part.member(p, fuel)
            if verdict.is_verified:
                return Verdict.verified(sampled=verdict.sampled)
            if verdict.is_unknown:
                unknown = True
            else:
                refutations.append(verdict.witness)
        if unknown:
            return Verdict.unknown("fuel")
        return Verdict.refuted(tuple(refutations))


def pole_member(pole: Pole, p: Process, fuel: int | None = None) -> Verdict:
    """Bounded membership check, dispatching on the pole variant."""
    return pole.member(p, fuel)


# ---------------------------------------------------------------------------
# Realizing, connectives, entailment


def realizes(pole: Pole, t: Term, s: TruthValue, fuel: int | None = None) -> Verdict:
    """Does t paired with every stack of s land in the pole?"""
    if t.fvs:
        raise ValueError(f"realizer candidate is not closed: {pretty(t)}")
    sampled = s.all_stacks
    unknown: Verdict | None = None
    for stack in s:
        verdict = pole_member(pole, Pair(t, stack), fuel)
        if verdict.is_refuted:
            return Verdict.refuted(stack)
        if verdict.is_unknown and unknown is None:
            unknown = Verdict.unknown(verdict.reason or "fuel", witness=stack)
        sampled = sampled or verdict.sampled
    if unknown is not None:
        return unknown
    return Verdict.verified(sampled=sampled)


def implication(realizers_of_s: RealizerList, t: TruthValue) -> TruthValue:
    """The truth value S => T as the explicit set {u . pi} built from the
    supplied realizers of S and the stacks of T."""
    stacks = [pi.push(u) for u in realizers_of_s for pi in t]
    return TruthValue.of(stacks)  # explicit now, so the sample flag clears


def forall_along(f: Mapping, theta: Predicate,
                 index_set: Iterable | None = None) -> Predicate:
    """Universal quantification along f: J -> I, as the union of theta
    over each fiber (empty fibers give the empty truth value)."""
    indices = tuple(index_set) if index_set is not None else tuple(dict.fromkeys(f.values()))
    mapping: dict[Any, TruthValue] = {i: EMPTY_TRUTH for i in indices}
    for j in theta.index_set:
        i = f[j]
        if i in mapping:
            mapping[i] = mapping[i].union(theta(j))
    return Predicate(indices, mapping)


def reindex(f: Mapping, phi: Predicate) -> Predicate:
    """Reindexing along f: J -> I: the predicate j |-> phi(f(j))."""
    indices = tuple(f)
    return Predicate(indices, {j: phi(f[j]) for j in indices})


class Connective:
    TOP = "top"
    AND = "and"
    OR = "or"
    NOT = "not"


def and_antecedent(phi_realizers: RealizerList, psi_realizers: RealizerList,
                   bot_sample: TruthValue) -> TruthValue:
    """The antecedent phi => (psi => bot) of the conjunction encoding."""
    return implication(phi_realizers, implication(psi_realizers, bot_sample))


def encode(connective: str, *,
           bot_sample: TruthValue | None = None,
           bot_realizers: RealizerList | None = None,
           phi_realizers: RealizerList | None = None,
           antecedent_realizers: RealizerList | None = None,
           negation_realizers: RealizerList | None = None,
           psi: TruthValue | None = None) -> TruthValue:
    """Expand a derived connective into implications and falsity:

    top        = bot => bot                   (needs bot_realizers)
    not(phi)   = phi => bot                   (needs phi_realizers)
    and(phi,psi) = (phi => (psi => bot)) => bot
                 (needs antecedent_realizers for phi => (psi => bot),
                  buildable via and_antecedent)
    or(phi,psi)  = (phi => bot) => psi        (needs negation_realizers
                  for phi => bot, and psi)
    """
    def need(value, name):
        if value is None:
            raise MissingRealizers(f"encoding {connective!r} needs {name}")
        return value

    if connective == Connective.TOP:
        return implication(need(bot_realizers, "bot_realizers"),
                           need(bot_sample, "bot_sample"))
    if connective == Connective.NOT:
        return implication(need(phi_realizers, "phi_realizers"),
                           need(bot_sample, "bot_sample"))
    if connective == Connective.AND:
        return implication(need(antecedent_realizers, "antecedent_realizers"),
                           need(bot_sample, "bot_sample"))
    if connective == Connective.OR:
        return implication(need(negation_realizers, "negation_realizers"),
                           need(psi, "psi"))
    raise ValueError(f"unknown connective {connective!r}")


@dataclass(frozen=True)
class ContextEntry:
    """A context predicate together with, per index, the terms standing in
    for its realizer set."""

    predicate: Predicate
    realizers: Mapping[Any, RealizerList]

    def realizers_at(self, index) -> RealizerList:
        return self.realizers.get(index, RealizerList(()))


@dataclass(frozen=True)
class Sequent:
    """An entailment instance: context predicates, a conclusion predicate,
    and a candidate realizer (which must be free of instruction constants)."""

    context: tuple[ContextEntry, ...]
    conclusion: Predicate
    candidate: Term

    def __post_init__(self):
        if self.candidate.fvs:
            raise ValueError(f"candidate is not closed: {pretty(self.candidate)}")
        if not is_proof_like(self.candidate):
            raise NotProofLike(
                "candidate contains instruction constants "
                f"{sorted(effect_constants(self.candidate))}")
        for entry in self.context:
            if tuple(entry.predicate.index_set) != tuple(self.conclusion.index_set):
                raise ValueError("all predicates in a sequent share one index set")


def check_entailment(pole: Pole, seq: Sequent, fuel: int | None = None) -> Verdict:
    """Check the candidate against every index, every tuple of context
    realizers, and every conclusion stack.  The first refutation in
    enumeration order (indices, then tuples, then stacks) is reported."""
    unknown: Verdict | None = None
    sampled = False
    for index in seq.conclusion.index_set:
        lists = [tuple(entry.realizers_at(index)) for entry in seq.context]
        conclusion_tv = seq.conclusion(index)
        sampled = sampled or conclusion_tv.all_stacks
        for combo in itertools.product(*lists):
            for pi in conclusion_tv:
                stack = pi
                for u in reversed(combo):
                    stack = stack.push(u)
                verdict = pole_member(pole, Pair(seq.candidate, stack), fuel)
                if verdict.is_refuted:
                    return Verdict.refuted((index, combo, pi))
                if verdict.is_unknown and unknown is None:
                    unknown = Verdict.unknown(verdict.reason or "fuel",
                                              witness=(index, combo, pi))
                sampled = sampled or verdict.sampled
    if unknown is not None:
        return unknown
    return Verdict.verified(sampled=sampled)


# ---------------------------------------------------------------------------
# Rule realizers (the terms used in the admissibility proofs)


@dataclass(frozen=True)
class Ax:
    pass


@dataclass(frozen=True)
class BotE:
    premise: Term


@dataclass(frozen=True)
class ImpI:
    premise: Term


@dataclass(frozen=True)
class ImpE:
    implication_realizer: Term  # realizes Delta |- psi => theta, |Delta| = m
    argument_realizer: Term     # realizes Gamma |- psi, |Gamma| = n
    n: int
    m: int


@dataclass(frozen=True)
class Weaken:
    premise: Term


@dataclass(frozen=True)
class Contract:
    premise: Term


@dataclass(frozen=True)
class Exchange:
    premise: Term
    sigma: tuple[int, ...]  # permutation of 1..n


@dataclass(frozen=True)
class Peirce:
    pass


def _require_proof_like(t: Term) -> Term:
    if t.fvs:
        raise ValueError(f"rule premise must be closed: {pretty(t)}")
    if not is_proof_like(t):
        raise NotProofLike(
            f"rule premise contains instruction constants {sorted(effect_constants(t))}")
    return t


def _apply_vars(t: Term, names: list[str]) -> Term:
    for name in names:
        t = App(t, Var(name))
    return t


def rule_realizer(rule) -> Term:
    """Build the realizer term for a structural or logical rule."""
    match rule:
        case Ax():
            return Abs("x", Var("x"))
        case BotE(premise=t) | ImpI(premise=t):
            # premise and conclusion have the same realizers
            return _require_proof_like(t)
        case Weaken(premise=t):
            return Abs("x", _require_proof_like(t))
        case Contract(premise=t):
            _require_proof_like(t)
            return Abs("x", App(App(t, Var("x")), Var("x")))
        case Exchange(premise=t, sigma=sigma):
            _require_proof_like(t)
            n = len(sigma)
            if sorted(sigma) != list(range(1, n + 1)):
                raise ValueError(f"sigma must permute 1..{n}: {sigma!r}")
            names = [f"x{i}" for i in range(1, n + 1)]
            body = _apply_vars(t, names)
            for i in reversed(sigma):
                body = Abs(names[i - 1], body)
            return body
        case ImpE(implication_realizer=t, argument_realizer=u, n=n, m=m):
            _require_proof_like(t)
            _require_proof_like(u)
            xs = [f"x{i}" for i in range(1, n + 1)]
            ys = [f"y{i}" for i in range(1, m + 1)]
            body = App(_apply_vars(t, ys), _apply_vars(u, xs))
            for name in reversed(xs + ys):
                body = Abs(name, body)
            return body
        case Peirce():
            return CALLCC
        case _:
            raise ValueError(f"unknown rule {rule!r}")


# ---------------------------------------------------------------------------
# Consistency probing


@dataclass(frozen=True)
class CandidateProbe:
    term: Term
    status: str  # "witness_found" | "no_witness_in_sample" | "unknown"
    witness: Stack | None = None


@dataclass(frozen=True)
class AuditEntry:
    process: Process
    has_effect_constant: bool


@dataclass(frozen=True)
class ConsistencyReport:
    """Per-candidate refutation witnesses plus an audit of every process
    the probe saw verified: a consistent pole contains no effect-free
    member other than TOP."""

    probes: tuple[CandidateProbe, ...]
    audit: tuple[AuditEntry, ...]

    @property
    def violations(self) -> tuple[AuditEntry, ...]:
        return tuple(entry for entry in self.audit if not entry.has_effect_constant)

    @property
    def all_witnessed(self) -> bool:
        return all(p.status == "witness_found" for p in self.probes)


def consistency_probe(pole: Pole, candidates: Iterable[Term],
                      stack_samples: Iterable[Stack], fuel: int | None = None,
                      member_samples: Iterable[Process] = ()) -> ConsistencyReport:
    """For each effect-free candidate, search the stack samples for one
    whose pairing is refuted pole membership; also audit every process
    found to be a member (including the optional member_samples) for the
    presence of an instruction constant."""
    stacks = list(stack_samples)
    probes: list[CandidateProbe] = []
    audit: list[AuditEntry] = []

    def note_member(p: Process) -> None:
        if p is not TOP:
            audit.append(AuditEntry(p, bool(effect_constants(p))))

    for t in candidates:
        _require_proof_like(t)
        witness: Stack | None = None
        unknown = False
        for pi in stacks:
            verdict = pole_member(pole, Pair(t, pi), fuel)
            if verdict.is_refuted:
                witness = pi
                break
            if verdict.is_unknown:
                unknown = True
            else:
                note_member(Pair(t, pi))
        if witness is not None:
            probes.append(CandidateProbe(t, "witness_found", witness))
        elif unknown:
            probes.append(CandidateProbe(t, "unknown"))
        else:
            probes.append(CandidateProbe(t, "no_witness_in_sample"))

    for p in member_samples:
        verdict = pole_member(pole, p, fuel)
        if verdict.is_verified:
            note_member(p)

    return ConsistencyReport(tuple(probes), tuple(audit))


# ---------------------------------------------------------------------------
# Scenario files (JSON).  Terms and stacks appear as concrete-syntax
# strings; predicates are lists of {"index": ..., "stacks": [...]} rows.


def pole_from_json(obj: dict) -> Pole:
    kind = obj.get("kind")
    if kind == "finite":
        seeds = [parse_process(s) for s in obj["seeds"]]
        return FinitePole.of(seeds, int(obj.get("fuel", 10_000)))
    if kind == "function":
        table = {int(k): int(v) for k, v in obj["table"].items()}
        return FunctionPole.of(table, int(obj.get("fuel", DEFAULT_FUEL)))
    if kind == "trace":
        spec = obj["spec"]
        if spec not in (COPY, READ_ALL_THEN_WRITE):
            raise ValueError(f"unknown trace discipline {spec!r}")
        return TracePole(spec, int(obj.get("max_input_len", 4)),
                         int(obj.get("fuel", 100_000)))
    if kind == "union":
        return UnionPole(tuple(pole_from_json(m) for m in obj["members"]))
    raise ValueError(f"unknown pole kind {kind!r}")


def _predicate_from_json(rows: list[dict]) -> Predicate:
    mapping = {}
    for row in rows:
        mapping[row["index"]] = TruthValue.of(
            parse_stack(s) for s in row["stacks"])
    return Predicate.of(mapping)


def _realizers_from_json(rows: list[dict]) -> dict[Any, RealizerList]:
    return {row["index"]: RealizerList.of(parse_term(s) for s in row["terms"])
            for row in rows}


@dataclass(frozen=True)
class Scenario:
    kind: str
    pole: Pole
    fuel: int
    sequent: Sequent | None = None
    term: Term | None = None
    truth_value: TruthValue | None = None
    candidates: tuple[Term, ...] = ()
    stack_samples: tuple[Stack, ...] = ()
    member_samples: tuple[Process, ...] = ()


def scenario_from_json(obj: dict) -> Scenario:
    if not isinstance(obj, dict):
        raise ValueError("scenario must be a JSON object")
    kind = obj.get("kind", "entailment")
    pole = pole_from_json(obj["pole"])
    fuel = int(obj.get("fuel", DEFAULT_FUEL))
    if kind == "entailment":
        conclusion = _predicate_from_json(obj["conclusion"])
        context = []
        for entry in obj.get("context", ()):
            predicate = Predicate.of(
                {row["index"]: TruthValue.of(parse_stack(s) for s in row["stacks"])
                 for row in entry["predicate"]},
                index_set=conclusion.index_set)
            context.append(ContextEntry(predicate, _realizers_from_json(entry["realizers"])))
        sequent = Sequent(tuple(context), conclusion, parse_term(obj["candidate"]))
        return Scenario(kind, pole, fuel, sequent=sequent)
    if kind == "realizes":
        tv = TruthValue.of((parse_stack(s) for s in obj["truth_value"]["stacks"]),
                           bool(obj["truth_value"].get("all_stacks", False)))
        return Scenario(kind, pole, fuel, term=parse_term(obj["term"]), truth_value=tv)
    if kind == "consistency":
        return Scenario(
            kind, pole, fuel,
            candidates=tuple(parse_term(s) for s in obj["candidates"]),
            stack_samples=tuple(parse_stack(s) for s in obj["stack_samples"]),
            member_samples=tuple(parse_process(s) for s in obj.get("member_samples", ())))
    raise ValueError(f"unknown scenario kind {kind!r}")


def _json_witness(value):
    if isinstance(value, (Term, Stack, Process)):
        return pretty(value)
    if isinstance(value, Action):
        return value.value
    if isinstance(value, (tuple, list)):
        return [_json_witness(v) for v in value]
    if hasattr(value, "to_json"):
        return value.to_json()
    return value


def verdict_to_json(verdict: Verdict) -> dict:
    out = {"status": verdict.status}
    if verdict.witness is not None:
        out["witness"] = _json_witness(verdict.witness)
    if verdict.reason is not None:
        out["reason"] = verdict.reason
    if verdict.sampled:
        out["sampled"] = True
    return out


def run_scenario(scenario: Scenario) -> tuple[Verdict, dict]:
    """Execute a scenario and return (overall verdict, JSON-able report)."""
    if scenario.kind == "entailment":
        verdict = check_entailment(scenario.pole, scenario.sequent, scenario.fuel)
        return verdict, {"kind": scenario.kind, "verdict": verdict_to_json(verdict)}
    if scenario.kind == "realizes":
        verdict = realizes(scenario.pole, scenario.term, scenario.truth_value, scenario.fuel)
        return verdict, {"kind": scenario.kind, "verdict": verdict_to_json(verdict)}
    report = consistency_probe(scenario.pole, scenario.candidates,
                               scenario.stack_samples, scenario.fuel,
                               scenario.member_samples)
    if report.all_witnessed and not report.violations:
        verdict = Verdict.verified()
    elif any(p.status == "unknown" for p in report.probes):
        verdict = Verdict.unknown("fuel")
    else:
        verdict = Verdict.refuted(
            [pretty(p.term) for p in report.probes if p.status != "witness_found"]
            + [pretty(e.process) for e in report.violations])
    return verdict, {
        "kind": scenario.kind,
        "verdict": verdict_to_json(verdict),
        "candidates": [
            {"term": pretty(p.term), "status": p.status,
             "witness": None if p.witness is None else pretty(p.witness)}
            for p in report.probes],
        "audit": [
            {"process": pretty(e.process), "has_effect_constant": e.has_effect_constant}
            for e in report.audit],
    }

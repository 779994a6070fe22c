"""Fixed-parameter answer-set checking via a normality backdoor.

Given a verified strong backdoor X, a model M of the GL reduct is minimal
iff a linear-time subprocedure succeeds for every subset X1 of X.  The
subprocedure restricts the reduct, computes a least model L, and accepts
when one of five conditions rules out a counterexample model M' with
M' intersect X = X1.
"""
from __future__ import annotations

from dataclasses import dataclass

from .backdoor import verify_strong_backdoor
from .program import (AtomSet, Program, Rule, gl_reduct, is_model,
                      least_model, satisfies)

SUBSET_ATOM_LIMIT = 20


@dataclass(frozen=True)
class RestrictedProgram:
    """Program with heads cleared of x and positive bodies cleared of x1."""

    base: Program
    x: AtomSet
    x1: AtomSet


@dataclass(frozen=True)
class MinCheckOutcome:
    """Verdict of one subprocedure run plus every condition that fired.

    ``fired`` lists, in checking order, the labels among "1", "a", "b",
    "c", "d" that held; several may hold at once and all are reported.
    """

    returned_true: bool
    fired: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.returned_true


@dataclass(frozen=True)
class AnswerSetCheck:
    """Aggregate result of the 2^k subset sweep."""

    is_answer_set: bool
    model_of_reduct: bool
    subsets: tuple[AtomSet, ...]
    outcomes: tuple[MinCheckOutcome, ...]

    def __bool__(self) -> bool:
        return self.is_answer_set

    @property
    def first_failure(self) -> int | None:
        for i, outcome in enumerate(self.outcomes):
            if not outcome.returned_true:
                return i
        return None


def restrict_program(program: Program, x: AtomSet, x1: AtomSet) -> RestrictedProgram:
    """Drop rules whose head meets x1; clear x from heads and x1 from positive bodies.

    Negative bodies are untouched.  Rules that end up completely empty are
    kept: they are unsatisfiable constraints and must stay visible.
    """
    if not x1.issubset(x):
        raise ValueError("x1 must be a subset of x")
    rules = []
    for r in program.rules:
        if r.head.mask & x1.mask:
            continue
        rules.append(Rule(r.head - x, r.pos_body - x1, r.neg_body))
    return RestrictedProgram(Program(program.table, rules), x, x1)


def _subprocedure(reduct: Program, m: AtomSet, x: AtomSet,
                  x1: AtomSet) -> MinCheckOutcome:
    """One MinCheck run against a precomputed GL reduct of the program under m."""
    fired: list[str] = []
    if not x1.issubset(m):
        return MinCheckOutcome(True, ("1",))
    restricted = restrict_program(reduct, x, x1).base
    if not restricted.horn:
        raise AssertionError("restricted reduct is not Horn; backdoor unverified?")
    lm = least_model(restricted)
    # (a) the least model breaks a constraint of the restricted program
    if any(not satisfies(lm, r) for r in restricted.rules if r.is_constraint):
        fired.append("a")
    # (b) the least model leaves m minus x
    if lm.mask & ~(m.mask & ~x.mask):
        fired.append("b")
    # (c) the least model joined with x1 is not a proper subset of m
    lux = lm | x1
    if lux == m or lux.mask & ~m.mask:
        fired.append("c")
    # (d) the least model joined with x1 is not a model of the reduct
    if not is_model(lux, reduct):
        fired.append("d")
    return MinCheckOutcome(bool(fired), tuple(fired))


def mincheck(program: Program, m: AtomSet, x: AtomSet,
             x1: AtomSet) -> MinCheckOutcome:
    """Run the subprocedure for one subset x1, validating its preconditions."""
    if not x1.issubset(x):
        raise ValueError("x1 must be a subset of x")
    if not verify_strong_backdoor(program, x):
        raise ValueError("x is not a strong normality backdoor")
    reduct = gl_reduct(program, m)
    if not is_model(m, reduct):
        raise ValueError("m is not a model of the GL reduct of the program under m")
    return _subprocedure(reduct, m, x, x1)


def backdoor_subsets(program: Program, x: AtomSet) -> tuple[AtomSet, ...]:
    """Subsets of x restricted to at(P), in binary-counter order over ascending ids."""
    atoms = list(x & program.atoms)
    subsets = []
    for counter in range(1 << len(atoms)):
        mask = 0
        for j, atom in enumerate(atoms):
            if counter >> j & 1:
                mask |= 1 << atom
        subsets.append(AtomSet(mask))
    return tuple(subsets)


def is_answer_set(program: Program, m: AtomSet, x: AtomSet,
                  verify: bool = True) -> AnswerSetCheck:
    """Decide whether m is an answer set of program, using backdoor x.

    m must be a model of the GL reduct, and the subprocedure must succeed
    for every subset of x (2^|x intersect at(P)| of them).  Outcomes are
    reported per subset in enumeration order, so the smallest failing
    subset index is reproducible regardless of evaluation strategy.
    """
    if len(x & program.atoms) > SUBSET_ATOM_LIMIT:
        raise ValueError(
            f"backdoor has {len(x & program.atoms)} program atoms, above "
            f"the 2^{SUBSET_ATOM_LIMIT} subset guard")
    if verify and not verify_strong_backdoor(program, x):
        raise ValueError("x is not a strong normality backdoor")
    reduct = gl_reduct(program, m)
    subsets = backdoor_subsets(program, x)
    if not is_model(m, reduct):
        return AnswerSetCheck(False, False, subsets, ())
    outcomes = tuple(_subprocedure(reduct, m, x, x1) for x1 in subsets)
    verdict = all(o.returned_true for o in outcomes)
    return AnswerSetCheck(verdict, True, subsets, outcomes)

"""Boolean formula trees, Tseitin conversion to CNF, and DIMACS output.

Variables are positive integers (DIMACS ids).  The raw node constructors
never simplify; the lowercase builder functions fold constants so that
compile-time facts (backdoor membership, empty conjunctions) disappear
from the tree instead of becoming CNF variables.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Iterable, Mapping, Union


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Var:
    id: int


@dataclass(frozen=True)
class Not:
    child: "Formula"


@dataclass(frozen=True)
class And:
    children: tuple["Formula", ...]

    def __post_init__(self):
        if not self.children:
            raise ValueError("And needs at least one child")


@dataclass(frozen=True)
class Or:
    children: tuple["Formula", ...]

    def __post_init__(self):
        if not self.children:
            raise ValueError("Or needs at least one child")


@dataclass(frozen=True)
class Imp:
    premise: "Formula"
    conclusion: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


Formula = Union[Const, Var, Not, And, Or, Imp, Iff]

TRUE = Const(True)
FALSE = Const(False)


def conj(children: Iterable[Formula]) -> Formula:
    """Conjunction with constant folding; empty conjunctions are true."""
    kept = []
    for child in children:
        if isinstance(child, Const):
            if not child.value:
                return FALSE
            continue
        kept.append(child)
    if not kept:
        return TRUE
    if len(kept) == 1:
        return kept[0]
    return And(tuple(kept))


def disj(children: Iterable[Formula]) -> Formula:
    """Disjunction with constant folding; empty disjunctions are false."""
    kept = []
    for child in children:
        if isinstance(child, Const):
            if child.value:
                return TRUE
            continue
        kept.append(child)
    if not kept:
        return FALSE
    if len(kept) == 1:
        return kept[0]
    return Or(tuple(kept))


def neg(child: Formula) -> Formula:
    if isinstance(child, Const):
        return Const(not child.value)
    if isinstance(child, Not):
        return child.child
    return Not(child)


def imp(premise: Formula, conclusion: Formula) -> Formula:
    if isinstance(premise, Const):
        return conclusion if premise.value else TRUE
    if isinstance(conclusion, Const):
        return TRUE if conclusion.value else neg(premise)
    return Imp(premise, conclusion)


def iff(left: Formula, right: Formula) -> Formula:
    if isinstance(left, Const):
        return right if left.value else neg(right)
    if isinstance(right, Const):
        return left if right.value else neg(left)
    return Iff(left, right)


def evaluate(formula: Formula, assignment: Mapping[int, bool]) -> bool:
    """Truth value under a total assignment of the referenced variables."""
    if isinstance(formula, Const):
        return formula.value
    if isinstance(formula, Var):
        return assignment[formula.id]
    if isinstance(formula, Not):
        return not evaluate(formula.child, assignment)
    if isinstance(formula, And):
        return all(evaluate(c, assignment) for c in formula.children)
    if isinstance(formula, Or):
        return any(evaluate(c, assignment) for c in formula.children)
    if isinstance(formula, Imp):
        return (not evaluate(formula.premise, assignment)
                or evaluate(formula.conclusion, assignment))
    if isinstance(formula, Iff):
        return evaluate(formula.left, assignment) == evaluate(formula.right, assignment)
    raise TypeError(f"not a formula: {formula!r}")


def variables(formula: Formula) -> set[int]:
    out: set[int] = set()
    stack = [formula]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            out.add(node.id)
        elif isinstance(node, Not):
            stack.append(node.child)
        elif isinstance(node, (And, Or)):
            stack.extend(node.children)
        elif isinstance(node, (Imp, Iff)):
            stack.append(node.premise if isinstance(node, Imp) else node.left)
            stack.append(node.conclusion if isinstance(node, Imp) else node.right)
    return out


def node_count(formula: Formula) -> int:
    count = 0
    stack = [formula]
    while stack:
        node = stack.pop()
        count += 1
        if isinstance(node, Not):
            stack.append(node.child)
        elif isinstance(node, (And, Or)):
            stack.extend(node.children)
        elif isinstance(node, Imp):
            stack.append(node.premise)
            stack.append(node.conclusion)
        elif isinstance(node, Iff):
            stack.append(node.left)
            stack.append(node.right)
    return count


def fold_constants(formula: Formula) -> Formula:
    """Rebuild the tree bottom-up through the folding constructors."""
    if isinstance(formula, (Const, Var)):
        return formula
    if isinstance(formula, Not):
        return neg(fold_constants(formula.child))
    if isinstance(formula, And):
        return conj(fold_constants(c) for c in formula.children)
    if isinstance(formula, Or):
        return disj(fold_constants(c) for c in formula.children)
    if isinstance(formula, Imp):
        return imp(fold_constants(formula.premise), fold_constants(formula.conclusion))
    if isinstance(formula, Iff):
        return iff(fold_constants(formula.left), fold_constants(formula.right))
    raise TypeError(f"not a formula: {formula!r}")


@dataclass
class CnfFormula:
    """Clause list over variables 1..n_vars with semantic names for some ids."""

    n_vars: int
    clauses: list[tuple[int, ...]]
    names: dict[int, str]

    def __post_init__(self):
        for clause in self.clauses:
            if not clause:
                raise ValueError("empty clause")
            for lit in clause:
                if lit == 0 or abs(lit) > self.n_vars:
                    raise ValueError(f"literal {lit} out of range")


def tseitin_cnf(formula: Formula, n_reserved: int,
                names: Mapping[int, str] | None = None) -> CnfFormula:
    """Equisatisfiable CNF with fresh labels for composite subformulas.

    Every model of the CNF restricted to the first n_reserved variables
    satisfies the formula, and every model of the formula extends to a CNF
    model.  Constants are folded away first; labels are allocated bottom-up
    left-to-right, so identical inputs give identical clause lists.
    """
    folded = fold_constants(formula)
    clauses: list[tuple[int, ...]] = []
    label_names: dict[int, str] = dict(names) if names else {}
    next_aux = n_reserved + 1

    def fresh() -> int:
        nonlocal next_aux
        aux = next_aux
        next_aux += 1
        label_names.setdefault(aux, f"t{aux}")
        return aux

    def lit_of(node: Formula) -> int:
        if isinstance(node, Var):
            return node.id
        if isinstance(node, Not):
            return -lit_of(node.child)
        if isinstance(node, And):
            lits = [lit_of(c) for c in node.children]
            label = fresh()
            for l in lits:
                clauses.append((-label, l))
            clauses.append(tuple([label] + [-l for l in lits]))
            return label
        if isinstance(node, Or):
            lits = [lit_of(c) for c in node.children]
            label = fresh()
            for l in lits:
                clauses.append((label, -l))
            clauses.append(tuple([-label] + lits))
            return label
        if isinstance(node, Imp):
            a = lit_of(node.premise)
            b = lit_of(node.conclusion)
            label = fresh()
            clauses.append((-label, -a, b))
            clauses.append((label, a))
            clauses.append((label, -b))
            return label
        if isinstance(node, Iff):
            a = lit_of(node.left)
            b = lit_of(node.right)
            label = fresh()
            clauses.append((-label, -a, b))
            clauses.append((-label, a, -b))
            clauses.append((label, a, b))
            clauses.append((label, -a, -b))
            return label
        raise TypeError(f"cannot label {node!r}")

    if isinstance(folded, Const):
        if not folded.value:
            aux = fresh()
            clauses.append((aux,))
            clauses.append((-aux,))
    else:
        clauses.append((lit_of(folded),))
    n_vars = next_aux - 1 if next_aux > n_reserved + 1 else n_reserved
    return CnfFormula(n_vars, clauses, label_names)


def emit_dimacs(cnf: CnfFormula, out: IO[str]) -> None:
    """Write DIMACS CNF: header then one zero-terminated clause per line."""
    out.write(f"p cnf {cnf.n_vars} {len(cnf.clauses)}\n")
    for clause in cnf.clauses:
        out.write(" ".join(map(str, clause)))
        out.write(" 0\n")


def dimacs_text(cnf: CnfFormula) -> str:
    lines = [f"p cnf {cnf.n_vars} {len(cnf.clauses)}"]
    lines.extend(" ".join(map(str, clause)) + " 0" for clause in cnf.clauses)
    return "\n".join(lines) + "\n"

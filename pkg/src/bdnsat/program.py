"""Ground disjunctive logic programs: representation, parsing, reducts, least models.

A program is an ordered list of rules ``H :- B+, not B-`` over a fixed atom
table.  Atom ids are small dense integers assigned in order of first textual
appearance, so every downstream artifact (graphs, covers, formulas, DIMACS)
is deterministic.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple


class ParseError(ValueError):
    """Syntax or structural error in program text, with source position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class AtomSet:
    """Immutable set of atom ids backed by an int bitmask.

    Membership is O(1); iteration yields ids in ascending order.  Set
    operations never inspect an atom table, so results stay valid in the
    owning program's id space.
    """

    __slots__ = ("mask",)

    def __init__(self, mask: int = 0):
        object.__setattr__(self, "mask", mask)

    def __setattr__(self, name, value):
        raise AttributeError("AtomSet is immutable")

    @classmethod
    def of(cls, ids: Iterable[int]) -> "AtomSet":
        mask = 0
        for i in ids:
            mask |= 1 << i
        return cls(mask)

    def __contains__(self, atom_id: int) -> bool:
        return bool(self.mask >> atom_id & 1)

    def __iter__(self) -> Iterator[int]:
        mask = self.mask
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __bool__(self) -> bool:
        return self.mask != 0

    def __eq__(self, other) -> bool:
        return isinstance(other, AtomSet) and self.mask == other.mask

    def __hash__(self) -> int:
        return hash(self.mask)

    def __and__(self, other: "AtomSet") -> "AtomSet":
        return AtomSet(self.mask & other.mask)

    def __or__(self, other: "AtomSet") -> "AtomSet":
        return AtomSet(self.mask | other.mask)

    def __sub__(self, other: "AtomSet") -> "AtomSet":
        return AtomSet(self.mask & ~other.mask)

    def issubset(self, other: "AtomSet") -> bool:
        return self.mask & ~other.mask == 0

    def isdisjoint(self, other: "AtomSet") -> bool:
        return self.mask & other.mask == 0

    def __le__(self, other: "AtomSet") -> bool:
        return self.issubset(other)

    def __lt__(self, other: "AtomSet") -> bool:
        return self.mask != other.mask and self.issubset(other)

    def __repr__(self) -> str:
        return f"AtomSet({{{', '.join(map(str, self))}}})"


EMPTY_SET = AtomSet(0)


class AtomTable:
    """Bijection between atom names and dense ids 0..n-1."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        self.names: tuple[str, ...] = tuple(names)
        self._index = {name: i for i, name in enumerate(self.names)}
        if len(self._index) != len(self.names):
            raise ValueError("duplicate atom names in table")

    def __len__(self) -> int:
        return len(self.names)

    def id_of(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ValueError(f"unknown atom {name!r}") from None

    def name_of(self, atom_id: int) -> str:
        return self.names[atom_id]

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, AtomTable) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def set_of(self, names: Iterable[str]) -> AtomSet:
        return AtomSet.of(self.id_of(n) for n in names)

    def names_of(self, atoms: AtomSet) -> tuple[str, ...]:
        return tuple(self.names[i] for i in atoms)


@dataclass(frozen=True)
class Rule:
    """One rule: head atoms, positive body atoms, negative body atoms."""

    head: AtomSet
    pos_body: AtomSet
    neg_body: AtomSet

    @property
    def atoms(self) -> AtomSet:
        return AtomSet(self.head.mask | self.pos_body.mask | self.neg_body.mask)

    @property
    def is_tautological(self) -> bool:
        return not self.pos_body.isdisjoint(self.head | self.neg_body)

    @property
    def is_normal(self) -> bool:
        return len(self.head) <= 1

    @property
    def is_constraint(self) -> bool:
        return not self.head

    @property
    def is_negation_free(self) -> bool:
        return not self.neg_body

    @property
    def is_horn(self) -> bool:
        return self.is_normal and self.is_negation_free


class Program:
    """Ordered rules over a shared atom table, with derived class flags.

    Instances are immutable; programs derived by reducts or deletions share
    the original table so atom ids keep their meaning.
    """

    def __init__(self, table: AtomTable, rules: Iterable[Rule],
                 tautologies_removed: int = 0, duplicates_removed: int = 0):
        self.table = table
        self.rules: tuple[Rule, ...] = tuple(rules)
        self.tautologies_removed = tautologies_removed
        self.duplicates_removed = duplicates_removed
        atoms_mask = 0
        normal = horn = negation_free = True
        for r in self.rules:
            atoms_mask |= r.atoms.mask
            if len(r.head) > 1:
                normal = False
            if r.neg_body:
                negation_free = False
        horn = normal and negation_free
        self.atoms = AtomSet(atoms_mask)
        self.normal = normal
        self.horn = horn
        self.negation_free = negation_free

    def __len__(self) -> int:
        return len(self.rules)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Program) and self.table == other.table
                and self.rules == other.rules)

    def __hash__(self) -> int:
        return hash((self.table, self.rules))

    @cached_property
    def tight(self) -> bool:
        """True iff the positive dependency graph (head -> positive body) is acyclic."""
        edges: dict[int, set[int]] = {}
        for r in self.rules:
            for x in r.head:
                edges.setdefault(x, set()).update(r.pos_body)
        # iterative three-color DFS
        WHITE, GRAY, BLACK = 0, 1, 2
        color = {v: WHITE for v in self.atoms}
        for start in self.atoms:
            if color[start] != WHITE:
                continue
            stack: list[tuple[int, Iterator[int]]] = [(start, iter(sorted(edges.get(start, ()))))]
            color[start] = GRAY
            while stack:
                node, it = stack[-1]
                advanced = False
                for succ in it:
                    if succ not in color:
                        continue
                    if color[succ] == GRAY:
                        return False
                    if color[succ] == WHITE:
                        color[succ] = GRAY
                        stack.append((succ, iter(sorted(edges.get(succ, ())))))
                        advanced = True
                        break
                if not advanced:
                    color[node] = BLACK
                    stack.pop()
        return True

    def atom_set(self, names: Iterable[str]) -> AtomSet:
        return self.table.set_of(names)

    def atom_names(self, atoms: AtomSet) -> tuple[str, ...]:
        return self.table.names_of(atoms)


class ProgramFlags(NamedTuple):
    normal: bool
    horn: bool
    negation_free: bool
    tight: bool


def classify(program: Program) -> ProgramFlags:
    """Recompute the class flags of a program from its rules."""
    return ProgramFlags(program.normal, program.horn, program.negation_free,
                        program.tight)


# --- parsing ----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""(?P<ws>[ \t\r]+)
      | (?P<comment>%[^\n]*)
      | (?P<newline>\n)
      | (?P<arrow>:-)
      | (?P<pipe>\|)
      | (?P<comma>,)
      | (?P<dot>\.)
      | (?P<ident>[a-z][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)

# "not" is reserved: it marks negative body literals and is not a valid atom name.
_KEYWORD_NOT = "not"


class _Token(NamedTuple):
    kind: str
    value: str
    line: int
    column: int


def _tokenize(text: str) -> Iterator[_Token]:
    line, line_start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}",
                             line, pos - line_start + 1)
        kind = m.lastgroup
        pos = m.end()
        if kind == "newline":
            line += 1
            line_start = pos
            continue
        if kind in ("ws", "comment"):
            continue
        yield _Token(kind, m.group(), line, m.start() - line_start + 1)
    yield _Token("eof", "", line, pos - line_start + 1)


class _RuleNames(NamedTuple):
    head: tuple[str, ...]
    pos_body: tuple[str, ...]
    neg_body: tuple[str, ...]


class _Parser:
    def __init__(self, text: str):
        self._tokens = _tokenize(text)
        self._tok = next(self._tokens)
        self.duplicates = 0

    def _advance(self) -> _Token:
        tok = self._tok
        self._tok = next(self._tokens)
        return tok

    def _expect(self, kind: str) -> _Token:
        if self._tok.kind != kind:
            raise ParseError(f"expected {kind!r}, found {self._tok.value!r}",
                             self._tok.line, self._tok.column)
        return self._advance()

    def _atom(self) -> str:
        tok = self._expect("ident")
        if tok.value == _KEYWORD_NOT:
            raise ParseError("'not' is reserved and cannot name an atom",
                             tok.line, tok.column)
        return tok.value

    def _dedup(self, names: list[str]) -> tuple[str, ...]:
        seen = dict.fromkeys(names)
        self.duplicates += len(names) - len(seen)
        return tuple(seen)

    def parse(self) -> list[_RuleNames]:
        rules = []
        while self._tok.kind != "eof":
            rules.append(self._rule())
        return rules

    def _rule(self) -> _RuleNames:
        start = self._tok
        head: list[str] = []
        if self._tok.kind == "ident":
            head.append(self._atom())
            while self._tok.kind == "pipe":
                self._advance()
                head.append(self._atom())
        pos_body: list[str] = []
        neg_body: list[str] = []
        if self._tok.kind == "arrow":
            self._advance()
            if not head and self._tok.kind == "dot":
                raise ParseError("rule with empty head and empty body",
                                 start.line, start.column)
            self._literal(pos_body, neg_body)
            while self._tok.kind == "comma":
                self._advance()
                self._literal(pos_body, neg_body)
        elif not head:
            raise ParseError(f"expected rule, found {self._tok.value!r}",
                             self._tok.line, self._tok.column)
        self._expect("dot")
        return _RuleNames(self._dedup(head), self._dedup(pos_body),
                          self._dedup(neg_body))

    def _literal(self, pos_body: list[str], neg_body: list[str]) -> None:
        if self._tok.kind == "ident" and self._tok.value == _KEYWORD_NOT:
            self._advance()
            neg_body.append(self._atom())
        else:
            pos_body.append(self._atom())


def parse_program(text: str) -> Program:
    """Parse program text into a Program.

    Tautological rules (pos body meets head or neg body) are dropped during
    ingestion; the count is recorded on the result.  Atom ids follow first
    appearance in the surviving rules.
    """
    parser = _Parser(text)
    raw_rules = parser.parse()
    kept = [r for r in raw_rules if not _names_tautological(r)]
    tautologies = len(raw_rules) - len(kept)
    names: dict[str, None] = {}
    for rule in kept:
        for name in rule.head + rule.pos_body + rule.neg_body:
            names.setdefault(name)
    table = AtomTable(names)
    rules = [Rule(table.set_of(r.head), table.set_of(r.pos_body),
                  table.set_of(r.neg_body)) for r in kept]
    return Program(table, rules, tautologies_removed=tautologies,
                   duplicates_removed=parser.duplicates)


def _names_tautological(rule: _RuleNames) -> bool:
    return bool(set(rule.pos_body) & (set(rule.head) | set(rule.neg_body)))


def pretty(program: Program) -> str:
    """Render a program in the input grammar, one rule per line, atoms by ascending id."""
    lines = []
    for rule in program.rules:
        names = program.table.name_of
        head = " | ".join(names(a) for a in rule.head)
        body = [names(a) for a in rule.pos_body]
        body += [f"not {names(a)}" for a in rule.neg_body]
        if body:
            lines.append(f"{head}{' ' if head else ''}:- {', '.join(body)}.")
        elif head:
            lines.append(f"{head}.")
        else:
            # outside the input grammar; only arises in programs built by atom
            # deletion, never from parsing
            lines.append(":-.")
    return "\n".join(lines) + ("\n" if lines else "")


# --- semantics --------------------------------------------------------------

def satisfies(m: AtomSet, rule: Rule) -> bool:
    """True iff m satisfies the rule: (H u B-) meets m, or B+ is not contained in m."""
    if (rule.head.mask | rule.neg_body.mask) & m.mask:
        return True
    return rule.pos_body.mask & ~m.mask != 0


def is_model(m: AtomSet, program: Program) -> bool:
    return all(satisfies(m, r) for r in program.rules)


def remove_tautologies(program: Program) -> Program:
    """Drop tautological rules, preserving order (answer sets are unchanged)."""
    kept = [r for r in program.rules if not r.is_tautological]
    return Program(program.table, kept,
                   tautologies_removed=len(program.rules) - len(kept))


def gl_reduct(program: Program, m: AtomSet) -> Program:
    """GL reduct: drop rules whose negative body meets m, strip B- from the rest."""
    rules = []
    for r in program.rules:
        if r.neg_body.mask & m.mask:
            continue
        rules.append(Rule(r.head, r.pos_body, EMPTY_SET) if r.neg_body else r)
    return Program(program.table, rules)


def constraints(program: Program) -> tuple[Rule, ...]:
    return tuple(r for r in program.rules if r.is_constraint)


def definite_part(program: Program) -> tuple[Rule, ...]:
    """The non-constraint rules (DH part) of a program."""
    return tuple(r for r in program.rules if not r.is_constraint)


def least_model(program: Program) -> AtomSet:
    """Least model of the non-constraint part of a Horn program.

    Worklist algorithm with per-rule counters of unsatisfied positive body
    atoms; linear in program size.  Constraints are ignored here; callers
    check the result against them if needed.
    """
    if not program.horn:
        raise ValueError("least_model requires a Horn program")
    rules = definite_part(program)
    counts = [len(r.pos_body) for r in rules]
    triggers: dict[int, list[int]] = {}
    for idx, r in enumerate(rules):
        for b in r.pos_body:
            triggers.setdefault(b, []).append(idx)
    derived = 0
    queue = [next(iter(r.head)) for r, c in zip(rules, counts) if c == 0]
    while queue:
        atom = queue.pop()
        bit = 1 << atom
        if derived & bit:
            continue
        derived |= bit
        for idx in triggers.get(atom, ()):
            counts[idx] -= 1
            if counts[idx] == 0:
                head_atom = next(iter(rules[idx].head))
                if not derived >> head_atom & 1:
                    queue.append(head_atom)
    return AtomSet(derived)

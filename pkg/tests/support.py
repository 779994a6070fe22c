"""Shared corpus generation and independent reference computations for tests.

Everything here derives expected values straight from definitions
(fixpoint iteration, exhaustive search, truth tables) so the code under
test is never its own oracle.
"""
from __future__ import annotations

import random
from itertools import combinations

from bdnsat import AtomSet, Program, parse_program
from bdnsat.encoding import VarTable
from bdnsat.mincheck import restrict_program

P1_SOURCE = """\
a | c :- b.
b :- c, not g.
c :- a.
b | c :- e.
h | i :- g, not c.
a | b.
g :- not i.
c.
"""

ATOM_POOL = tuple("abcdefghijklmnop")


def p1() -> Program:
    return parse_program(P1_SOURCE)


def random_program_source(rng: random.Random, max_atoms: int = 7,
                          max_rules: int = 10) -> str:
    """Random ground program text with mixed disjunction and negation."""
    n_atoms = rng.randint(2, max_atoms)
    names = list(ATOM_POOL[:n_atoms])
    lines = []
    for _ in range(rng.randint(1, max_rules)):
        head_size = rng.choices([0, 1, 2, 3], weights=[2, 5, 3, 1])[0]
        pos_size = rng.choices([0, 1, 2], weights=[4, 4, 2])[0]
        neg_size = rng.choices([0, 1, 2], weights=[5, 4, 1])[0]
        if head_size + pos_size == 0 and neg_size == 0:
            head_size = 1
        total = min(head_size + pos_size + neg_size, n_atoms)
        picked = rng.sample(names, total)
        head = picked[:head_size]
        pos = picked[head_size:head_size + pos_size]
        neg = picked[head_size + pos_size:]
        if not head and not pos and not neg:
            head = [rng.choice(names)]
        body = pos + [f"not {a}" for a in neg]
        if body:
            lines.append(f"{' | '.join(head)}{' ' if head else ''}:- {', '.join(body)}.")
        else:
            lines.append(f"{' | '.join(head)}.")
    return "\n".join(lines) + "\n"


def random_program(rng: random.Random, max_atoms: int = 7,
                   max_rules: int = 10) -> Program:
    while True:
        program = parse_program(random_program_source(rng, max_atoms, max_rules))
        if program.rules and program.atoms:
            return program


def random_horn_program(rng: random.Random, max_atoms: int = 8,
                        max_rules: int = 10) -> Program:
    n_atoms = rng.randint(1, max_atoms)
    names = list(ATOM_POOL[:n_atoms])
    lines = []
    for _ in range(rng.randint(1, max_rules)):
        head_size = rng.choices([0, 1], weights=[1, 6])[0]
        pos_size = rng.choices([0, 1, 2, 3], weights=[3, 4, 3, 1])[0]
        if head_size + pos_size == 0:
            head_size = 1
        picked = rng.sample(names, min(head_size + pos_size, n_atoms))
        head, pos = picked[:head_size], picked[head_size:]
        if pos:
            lines.append(f"{''.join(head)}{' ' if head else ''}:- {', '.join(pos)}.")
        else:
            lines.append(f"{head[0]}.")
    return parse_program("\n".join(lines) + "\n")


def corpus(seed: int, count: int, max_atoms: int = 7,
           max_rules: int = 10) -> list[Program]:
    rng = random.Random(seed)
    return [random_program(rng, max_atoms, max_rules) for _ in range(count)]


def rule_names(program: Program) -> list[tuple[frozenset, frozenset, frozenset]]:
    """Structural view of a program: rule triples as frozensets of atom names."""
    return [(frozenset(program.atom_names(r.head)),
             frozenset(program.atom_names(r.pos_body)),
             frozenset(program.atom_names(r.neg_body)))
            for r in program.rules]


def same_rules(left: Program, right: Program) -> bool:
    return sorted(rule_names(left)) == sorted(rule_names(right))


def subsets_of(mask: int):
    """All submasks of mask, ascending."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


def tp_fixpoint(program: Program) -> AtomSet:
    """Least model of the non-constraint part by naive operator iteration."""
    current = 0
    while True:
        step = current
        for r in program.rules:
            if r.head and r.pos_body.mask & ~current == 0:
                step |= r.head.mask
        if step == current:
            return AtomSet(current)
        current = step


def exhaustive_min_vertex_cover(edges: tuple[tuple[int, int], ...]) -> int:
    """Size of a minimum vertex cover, by subset enumeration over the endpoints."""
    vertices = sorted({v for e in edges for v in e})
    for size in range(len(vertices) + 1):
        for combo in combinations(vertices, size):
            chosen = set(combo)
            if all(u in chosen or v in chosen for u, v in edges):
                return size
    return 0


def has_cover_of_size(edges: tuple[tuple[int, int], ...], k: int) -> bool:
    vertices = sorted({v for e in edges for v in e})
    for size in range(min(k, len(vertices)) + 1):
        for combo in combinations(vertices, size):
            chosen = set(combo)
            if all(u in chosen or v in chosen for u, v in edges):
                return True
    return not edges


def positive_cycle_exists(program: Program) -> bool:
    """Exhaustive reachability check for a cycle in the head -> pos-body graph."""
    succ: dict[int, set[int]] = {}
    for r in program.rules:
        for x in r.head:
            succ.setdefault(x, set()).update(r.pos_body)
    for start in succ:
        frontier = set(succ[start])
        seen = set()
        while frontier:
            node = frontier.pop()
            if node == start:
                return True
            if node in seen:
                continue
            seen.add(node)
            frontier.update(succ.get(node, ()))
    return False


def simulate_block_layers(program: Program, x: AtomSet, xi: AtomSet,
                          m: AtomSet, p_layers: int,
                          n_atoms: int) -> list[int]:
    """Layer-by-layer derivation masks for one block, straight from the rules.

    Layer 0 is empty; layer j adds heads of restricted rules whose positive
    body lies in layer j-1 and whose negative body avoids m.
    """
    restricted = restrict_program(program, x, xi).base
    layers = [0]
    for _ in range(p_layers):
        prev = layers[-1]
        cur = prev
        for r in restricted.rules:
            if not r.head:
                continue
            if r.neg_body.mask & m.mask:
                continue
            if r.pos_body.mask & ~prev == 0:
                cur |= r.head.mask
        layers.append(cur)
    return layers


def block_assignment(program: Program, x: AtomSet, xi: AtomSet, block: int,
                     vt: VarTable, m: AtomSet) -> dict[int, bool]:
    """Assignment of all v and block-`block` u variables matching the simulation."""
    layers = simulate_block_layers(program, x, xi, m, vt.p, vt.n_atoms)
    assignment = {vt.v(a).id: a in m for a in range(vt.n_atoms)}
    for j, mask in enumerate(layers):
        for a in range(vt.n_atoms):
            assignment[vt.u(block, j, a).id] = bool(mask >> a & 1)
    return assignment


def padded_backdoor_program(k: int, pairs: int = 8, ballast: int = 30) -> Program:
    """Constant-size program whose smallest backdoor has exactly k atoms.

    k disjoint head disjunctions force a vertex cover of size k; the pairs
    above k degrade to normal rules of the same shape, and a ballast chain
    keeps the per-block encoding cost dominated by k-independent structure.
    Atom and rule counts do not depend on k.
    """
    assert 0 <= k <= pairs
    lines = ["s."]
    prev = "s"
    for j in range(1, ballast + 1):
        lines.append(f"c{j} :- {prev}.")
        prev = f"c{j}"
    for i in range(1, pairs + 1):
        lines.append(f"a{i} | b{i} :- s." if i <= k else f"b{i} :- s.")
    sink_body = ", ".join(f"a{i}, b{i}" for i in range(1, pairs + 1))
    lines.append(f"sink :- {sink_body}.")
    return parse_program("\n".join(lines) + "\n")


def chain_program(n_rules: int) -> Program:
    """Normal negation-free chain of n_rules rules over n_rules atoms."""
    lines = ["x1."]
    lines += [f"x{i + 1} :- x{i}." for i in range(1, n_rules)]
    return parse_program("\n".join(lines) + "\n")


def fit_line_relative(xs: list[float], ys: list[float]) -> tuple[float, float]:
    """Line minimizing the summed squared relative residuals ((ax+b-y)/y)^2.

    Appropriate when the acceptance bound is itself relative: plain least
    squares lets the largest points dictate the line and starves the small
    ones, whose absolute residuals are negligible.
    """
    us = [x / y for x, y in zip(xs, ys)]
    vs = [1.0 / y for y in ys]
    suu = sum(u * u for u in us)
    suv = sum(u * v for u, v in zip(us, vs))
    svv = sum(v * v for v in vs)
    su, sv = sum(us), sum(vs)
    det = suu * svv - suv * suv
    slope = (su * svv - sv * suv) / det
    intercept = (sv * suu - su * suv) / det
    return slope, intercept

"""SAT solving: a built-in DPLL for hermetic runs, or an external process.

The internal solver is deliberately plain (unit propagation through watched
literals, pure-literal elimination during preprocessing, chronological
backtracking, no clause learning); it exists so the pipeline and tests run
without any system solver.  External solvers are invoked as ``<exe>
<cnf-file>`` and read back in SAT-competition output format.
"""
from __future__ import annotations

import os
import re
import subprocess
import tempfile
import time
from dataclasses import dataclass

from .formula import CnfFormula, emit_dimacs

SOLVER_ENV_VAR = "BDNSAT_SOLVER"
DEFAULT_TIMEOUT = 60.0

SAT = "SAT"
UNSAT = "UNSAT"
UNKNOWN = "UNKNOWN"


class SolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class SatResult:
    status: str
    assignment: dict[int, bool] | None = None
    wall_time: float = 0.0
    solver: str = "internal"
    diagnostics: str = ""

    def __post_init__(self):
        if (self.status == SAT) != (self.assignment is not None):
            raise ValueError("assignment present iff status is SAT")


@dataclass(frozen=True)
class SolverConfig:
    mode: str = "internal"  # "internal" | "external"
    executable: str | None = None
    timeout: float = DEFAULT_TIMEOUT

    @classmethod
    def from_environment(cls) -> "SolverConfig":
        exe = os.environ.get(SOLVER_ENV_VAR)
        if exe:
            return cls(mode="external", executable=exe)
        return cls()


def solve(cnf: CnfFormula, config: SolverConfig | None = None) -> SatResult:
    """Dispatch to the configured solver and verify any model returned."""
    if config is None:
        config = SolverConfig.from_environment()
    start = time.monotonic()
    if config.mode == "external":
        if not config.executable:
            raise SolverError("external mode needs an executable path")
        result = _solve_external(cnf, config)
    elif config.mode == "internal":
        result = _solve_internal(cnf, config.timeout)
    else:
        raise SolverError(f"unknown solver mode {config.mode!r}")
    elapsed = time.monotonic() - start
    if result.status == SAT:
        _check_model(cnf, result.assignment)
    return SatResult(result.status, result.assignment, elapsed,
                     result.solver, result.diagnostics)


def _check_model(cnf: CnfFormula, assignment: dict[int, bool]) -> None:
    for var in range(1, cnf.n_vars + 1):
        if var not in assignment:
            raise SolverError(f"model misses variable {var}")
    for clause in cnf.clauses:
        if not any(assignment[abs(l)] == (l > 0) for l in clause):
            raise SolverError(f"model does not satisfy clause {clause}")


# --- internal DPLL ----------------------------------------------------------

def _solve_internal(cnf: CnfFormula, timeout: float) -> SatResult:
    clauses = []
    for clause in cnf.clauses:
        lits = tuple(dict.fromkeys(clause))
        if any(-l in lits for l in lits):
            continue  # tautological clause
        clauses.append(lits)

    n = cnf.n_vars
    value: list[int] = [0] * (n + 1)  # 0 unknown, 1 true, -1 false

    def lit_value(lit: int) -> int:
        v = value[abs(lit)]
        return v if lit > 0 else -v

    # preprocessing: top-level units and pure literals, to fixpoint
    active = list(range(len(clauses)))
    while True:
        changed = False
        still_active = []
        for idx in active:
            if any(lit_value(l) == 1 for l in clauses[idx]):
                continue
            free = [l for l in clauses[idx] if lit_value(l) == 0]
            if not free:
                return SatResult(UNSAT)
            if len(free) == 1:
                value[abs(free[0])] = 1 if free[0] > 0 else -1
                changed = True
                continue
            still_active.append(idx)
        active = still_active
        polarity: dict[int, int] = {}
        for idx in active:
            for l in clauses[idx]:
                if value[abs(l)] != 0:
                    continue
                prev = polarity.get(abs(l))
                cur = 1 if l > 0 else -1
                polarity[abs(l)] = cur if prev in (None, cur) else 2
        for var, pol in sorted(polarity.items()):
            if pol in (1, -1) and value[var] == 0:
                value[var] = pol
                changed = True
        if not changed:
            break

    remaining = [clauses[idx] for idx in active
                 if not any(lit_value(l) == 1 for l in clauses[idx])]
    status = _search(remaining, value, n, timeout)
    if status != SAT:
        return SatResult(status, diagnostics="" if status == UNSAT else "timeout")
    assignment = {v: value[v] == 1 for v in range(1, n + 1)}
    return SatResult(SAT, assignment)


def _search(clauses: list[tuple[int, ...]], value: list[int], n: int,
            timeout: float) -> str:
    """Watched-literal DPLL over the preprocessed clauses, mutating value."""
    deadline = time.monotonic() + timeout
    watches: dict[int, list[int]] = {}
    watched: list[list[int]] = []
    pending: list[int] = []

    def lit_value(lit: int) -> int:
        v = value[abs(lit)]
        return v if lit > 0 else -v

    for idx, clause in enumerate(clauses):
        free = [l for l in clause if lit_value(l) != -1]
        if not free:
            return UNSAT
        if len(free) == 1:
            watched.append([free[0], free[0]])
            pending.append(free[0])
            continue
        watched.append([free[0], free[1]])
        watches.setdefault(free[0], []).append(idx)
        watches.setdefault(free[1], []).append(idx)

    trail: list[int] = []
    decisions: list[tuple[int, int, bool]] = []  # (var, trail length, flipped)

    def assign(lit: int) -> bool:
        var = abs(lit)
        want = 1 if lit > 0 else -1
        if value[var] != 0:
            return value[var] == want
        value[var] = want
        trail.append(var)
        queue = [lit]
        while queue:
            falsified = -queue.pop()
            for idx in list(watches.get(falsified, ())):
                w = watched[idx]
                other = w[1] if w[0] == falsified else w[0]
                if lit_value(other) == 1:
                    continue
                moved = False
                for l in clauses[idx]:
                    if l == other or l == falsified:
                        continue
                    if lit_value(l) != -1:
                        w[0], w[1] = other, l
                        watches[falsified].remove(idx)
                        watches.setdefault(l, []).append(idx)
                        moved = True
                        break
                if moved:
                    continue
                ov = lit_value(other)
                if ov == -1:
                    return False
                if ov == 0:
                    var2 = abs(other)
                    value[var2] = 1 if other > 0 else -1
                    trail.append(var2)
                    queue.append(other)
        return True

    def undo_to(length: int) -> None:
        while len(trail) > length:
            value[trail.pop()] = 0

    conflict = any(not assign(lit) for lit in list(pending))
    if conflict:
        return UNSAT

    next_var = 1
    while True:
        while next_var <= n and value[next_var] != 0:
            next_var += 1
        if next_var > n:
            return SAT
        if time.monotonic() > deadline:
            return UNKNOWN
        decisions.append((next_var, len(trail), False))
        ok = assign(next_var)
        while not ok:
            while decisions and decisions[-1][2]:
                var, length, _ = decisions.pop()
                undo_to(length)
            if not decisions:
                return UNSAT
            var, length, _ = decisions.pop()
            undo_to(length)
            decisions.append((var, length, True))
            ok = assign(-var)
        next_var = 1


# --- external solver --------------------------------------------------------

_STATUS_RE = re.compile(r"^s\s+(SATISFIABLE|UNSATISFIABLE)\s*$", re.M)
_VALUE_RE = re.compile(r"^v\s+(.*)$", re.M)


def parse_solver_output(stdout: str, n_vars: int) -> tuple[str, dict[int, bool] | None]:
    """Parse SAT-competition output: 's' status line and 'v' literal lines."""
    match = _STATUS_RE.search(stdout)
    if match is None:
        return UNKNOWN, None
    if match.group(1) == "UNSATISFIABLE":
        return UNSAT, None
    assignment: dict[int, bool] = {}
    for line in _VALUE_RE.findall(stdout):
        for token in line.split():
            lit = int(token)
            if lit == 0:
                continue
            assignment[abs(lit)] = lit > 0
    for var in range(1, n_vars + 1):
        assignment.setdefault(var, False)
    return SAT, assignment


def _solve_external(cnf: CnfFormula, config: SolverConfig) -> SatResult:
    with tempfile.NamedTemporaryFile("w", suffix=".cnf", prefix="bdnsat-",
                                     delete=False) as handle:
        path = handle.name
        emit_dimacs(cnf, handle)
    try:
        try:
            proc = subprocess.run([config.executable, path],
                                  capture_output=True, text=True,
                                  timeout=config.timeout)
        except subprocess.TimeoutExpired:
            return SatResult(UNKNOWN, solver=config.executable,
                             diagnostics=f"timeout after {config.timeout}s")
        except OSError as exc:
            return SatResult(UNKNOWN, solver=config.executable,
                             diagnostics=f"process failure: {exc}")
        status, assignment = parse_solver_output(proc.stdout, cnf.n_vars)
        if status == UNKNOWN:
            # SAT-competition exit codes are also accepted as signals
            if proc.returncode == 20:
                status = UNSAT
            elif proc.returncode == 10:
                raise SolverError(
                    "solver signalled SAT via exit code but printed no model")
            else:
                return SatResult(UNKNOWN, solver=config.executable,
                                 diagnostics=_trim(proc.stdout + proc.stderr))
        return SatResult(status, assignment, solver=config.executable)
    finally:
        os.unlink(path)


def _trim(text: str, limit: int = 400) -> str:
    return text if len(text) <= limit else text[:limit] + "..."

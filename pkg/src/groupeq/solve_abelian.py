"""Constructive solvers for abelian systems.

Four routes, combined by ``solve_auto``:

* ``solve_mod_p``     — Gaussian elimination over the field of p elements
                        when the group has prime period p.
* ``solve_p_group``   — round-by-round lifting over a bounded p-group:
                        solve the induced system over A/pA, subtract the
                        lift, recurse on pA (one period exponent lower).
* ``solve_bounded``   — primary decomposition: solve on every p-component
                        and recombine coordinates.
* ``solve_divisible`` — square reduction plus Smith normal form, then exact
                        division in Prüfer/rational coordinates.

``EchelonState`` is the incremental variant for equation streams over a
bounded-period group: it keeps, per primary component, a fully reduced
echelon basis with unit pivots modulo p**e, so each new equation is folded
in without reprocessing the truncation.  ``solve_p_group`` retains the
literal round-by-round lifting so the two can be cross-checked.

Every solver verifies its answer against the input system before returning.
Free variables are always assigned 0 and pivots take the lowest-ordered
eligible variable, so outputs are deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .abelian import (
    AbelianGroupDescriptor,
    GroupElement,
    Summand,
    classify,
    element_to_json,
    mod_p_quotient,
    primary_part,
)
from .errors import (
    DependentRow,
    MissingPrimeNonsingularity,
    PSingular,
    SearchSpaceTooLarge,
    Singular,
    UnsupportedGroup,
)
from .intmath import inv_mod
from .systems import (
    AbelianEquation,
    AbelianSystem,
    is_nonsingular,
    is_p_nonsingular,
    reduce_to_square,
    smith_normal_form,
    verify_solution,
)


def _encode_value(value):
    if isinstance(value, GroupElement):
        return element_to_json(value)
    if isinstance(value, tuple):  # Heisenberg triple of ring scalars
        return [
            f"{c.numerator}/{c.denominator}" if isinstance(c, Fraction) else str(c)
            for c in value
        ]
    return value  # table group index


@dataclass(frozen=True)
class Solution:
    """A verified assignment of group elements to variables."""

    assignment: dict[str, GroupElement]

    def __getitem__(self, var: str) -> GroupElement:
        return self.assignment[var]

    def to_json(self) -> dict:
        return {v: _encode_value(a) for v, a in sorted(self.assignment.items())}


def _checked(system: AbelianSystem, assignment: dict[str, GroupElement]) -> Solution:
    assert verify_solution(system, assignment), "solver produced a non-solution"
    return Solution(assignment)


def solve_mod_p(system: AbelianSystem) -> Solution:
    """Solve a p-nonsingular system over a group of prime period p."""
    A = system.group
    if not A.summands:
        return _checked(system, {v: A.zero() for v in system.variables})
    p = A.summands[0].p
    if any(s.kind != "cyclic" or s.p != p or s.e != 1 for s in A.summands):
        raise UnsupportedGroup("solve_mod_p needs every summand equal to Z/p")

    pivots: list[tuple[str, dict[str, int], GroupElement, dict[int, int]]] = []
    for idx, eq in enumerate(system.equations):
        row = {v: k % p for v, k in eq.coeffs.items() if k % p != 0}
        rhs = eq.rhs
        comb = {idx: 1}
        for pv, prow, prhs, pcomb in pivots:
            c = row.get(pv, 0)
            if c == 0:
                continue
            for v, k in prow.items():
                row[v] = (row.get(v, 0) - c * k) % p
            for j, k in pcomb.items():
                comb[j] = (comb.get(j, 0) - c * k) % p
            rhs = rhs - prhs.scale(c)
        row = {v: k for v, k in row.items() if k != 0}
        if not row:
            raise PSingular(p, witness={j: k for j, k in sorted(comb.items()) if k != 0})
        pv = min(row)
        inv = inv_mod(row[pv], p)
        row = {v: (inv * k) % p for v, k in row.items()}
        rhs = rhs.scale(inv)
        comb = {j: (inv * k) % p for j, k in comb.items()}
        for i, (opv, orow, orhs, ocomb) in enumerate(pivots):
            c = orow.get(pv, 0)
            if c == 0:
                continue
            for v, k in row.items():
                orow[v] = (orow.get(v, 0) - c * k) % p
            for j, k in comb.items():
                ocomb[j] = (ocomb.get(j, 0) - c * k) % p
            orow = {v: k for v, k in orow.items() if k != 0}
            pivots[i] = (opv, orow, orhs - rhs.scale(c), ocomb)
        pivots.append((pv, row, rhs, comb))

    assignment = {v: A.zero() for v in system.variables}
    for pv, _, rhs, _ in pivots:
        assignment[pv] = rhs
    return _checked(system, assignment)


def _p_subgroup(A: AbelianGroupDescriptor):
    """pA of a bounded p-group, with the positions of the surviving summands."""
    kept = [(i, s) for i, s in enumerate(A.summands) if s.e >= 2]
    sub = AbelianGroupDescriptor(Summand.cyclic(s.p, s.e - 1) for _, s in kept)
    return sub, tuple(i for i, _ in kept)


def solve_p_group(system: AbelianSystem) -> Solution:
    """Lift a solution through A ⊃ pA ⊃ p²A ⊃ ... for a bounded p-group A.

    Round r solves the induced system over the current quotient mod p,
    subtracts the lifted representatives, checks the residual right-hand
    side is divisible by p (i.e. lies in p**(r+1) * A relative to the
    original group), and descends into pA, whose period exponent is one
    lower.  The answer is the accumulated sum of lifts p**r * c_r.
    """
    A = system.group
    if any(s.kind != "cyclic" for s in A.summands):
        raise UnsupportedGroup("solve_p_group needs a finite direct sum of cyclic p-groups")
    if not A.summands:
        return _checked(system, {v: A.zero() for v in system.variables})
    p = A.summands[0].p
    if any(s.p != p for s in A.summands):
        raise UnsupportedGroup("solve_p_group needs a single prime")

    acc = {v: [0] * len(A.summands) for v in system.variables}
    work = A
    positions = tuple(range(len(A.summands)))
    rhs = [eq.rhs for eq in system.equations]
    coeff_rows = [eq.coeffs for eq in system.equations]
    r = 0
    while work.summands:
        quot = mod_p_quotient(work, p)
        induced = AbelianSystem(
            quot.group,
            [AbelianEquation(row, quot.project(b)) for row, b in zip(coeff_rows, rhs)],
            variables=system.variables,
        )
        base = solve_mod_p(induced)
        lift = {v: quot.section(x) for v, x in base.assignment.items()}
        for v in system.variables:
            for i, c in zip(positions, lift[v].coords):
                acc[v][i] += p**r * int(c)

        sub, kept = _p_subgroup(work)
        residual = []
        for row, b in zip(coeff_rows, rhs):
            for v, k in row.items():
                b = b - lift[v].scale(k)
            for c in b.coords:
                assert int(c) % p == 0, "residual escaped pA during lifting"
            residual.append(sub.element(int(b.coords[i]) // p for i in kept))
        work = sub
        positions = tuple(positions[i] for i in kept)
        rhs = residual
        r += 1

    assignment = {v: A.element(acc[v]) for v in system.variables}
    return _checked(system, assignment)


def solve_bounded(system: AbelianSystem) -> Solution:
    """Solve over a bounded-period group by primary decomposition.

    Requires p-nonsingularity for every prime p dividing the period; other
    primes cannot obstruct solvability over such a group.
    """
    A = system.group
    if not A.is_bounded:
        raise UnsupportedGroup("solve_bounded needs a bounded-period (finite cyclic sum) group")
    matrix = system.matrix()
    parts: dict[int, Solution] = {}
    positions: dict[int, tuple[int, ...]] = {}
    for p in sorted({s.p for s in A.summands}):
        ok, witness = is_p_nonsingular(matrix, p)
        if not ok:
            raise MissingPrimeNonsingularity(p, witness=witness)
        sub, indices = primary_part(A, p)
        component = AbelianSystem(
            sub,
            [
                AbelianEquation(eq.coeffs, sub.element(eq.rhs.coords[i] for i in indices))
                for eq in system.equations
            ],
            variables=system.variables,
        )
        parts[p] = solve_p_group(component)
        positions[p] = indices

    assignment = {}
    for v in system.variables:
        coords = [0] * len(A.summands)
        for p, sol in parts.items():
            for i, c in zip(positions[p], sol.assignment[v].coords):
                coords[i] = c
        assignment[v] = A.element(coords)
    return _checked(system, assignment)


def solve_divisible(system: AbelianSystem) -> Solution:
    """Solve a nonsingular system over a divisible group (Prüfer and Q summands).

    Squares the system if needed, diagonalizes U*M*V = D, transports the
    right-hand sides through U, divides coordinate-wise, and maps back
    through V and the square reduction.
    """
    from .abelian import divide_exact

    A = system.group
    if not A.is_divisible:
        raise UnsupportedGroup("solve_divisible needs every summand divisible")
    ok, witness = is_nonsingular(system.matrix())
    if not ok:
        raise Singular(witness=witness)
    square, back = reduce_to_square(system)

    M = square.matrix()
    U, D, V = smith_normal_form(M)
    k = len(square.equations)
    check = [
        [sum(U[i][a] * M.rows[a][b] for a in range(k)) for b in range(k)] for i in range(k)
    ]
    transformed = [[sum(check[i][a] * V[a][j] for a in range(k)) for j in range(k)] for i in range(k)]
    assert transformed == [row[:] for row in D], "Smith decomposition failed to reproduce D"

    zero = A.zero()
    b = []
    for i in range(k):
        acc = zero
        for j in range(k):
            if U[i][j] != 0:
                acc = acc + square.equations[j].rhs.scale(U[i][j])
        b.append(acc)
    z = []
    for i in range(k):
        d = D[i][i]
        assert d != 0, "zero elementary divisor in a nonsingular system"
        z.append(divide_exact(d, b[i]))
    assignment = {}
    for r, var in enumerate(M.columns):
        acc = zero
        for j in range(k):
            if V[r][j] != 0:
                acc = acc + z[j].scale(V[r][j])
        assignment[var] = acc
    full = back(assignment)
    for v in system.variables:
        full.setdefault(v, zero)
    return _checked(system, full)


def solve_auto(system: AbelianSystem) -> Solution:
    """Dispatch over a mixed group: split off the divisible part, solve the
    bounded reduced part by primary decomposition, and recombine.

    The reduced side checks p-nonsingularity for its period primes, the
    divisible side checks nonsingularity over Q; over the trivial group
    everything is solvable by zeros.
    """
    A = system.group
    info = classify(A)
    if not info.reduced_bounded:
        raise UnsupportedGroup("no solver for groups with integer-line summands")

    solutions = []
    if info.reduced_indices:
        reduced_system = AbelianSystem(
            info.reduced,
            [
                AbelianEquation(
                    eq.coeffs, info.reduced.element(eq.rhs.coords[i] for i in info.reduced_indices)
                )
                for eq in system.equations
            ],
            variables=system.variables,
        )
        solutions.append((info.reduced_indices, solve_bounded(reduced_system)))
    if info.divisible_indices:
        divisible_system = AbelianSystem(
            info.divisible,
            [
                AbelianEquation(
                    eq.coeffs,
                    info.divisible.element(eq.rhs.coords[i] for i in info.divisible_indices),
                )
                for eq in system.equations
            ],
            variables=system.variables,
        )
        solutions.append((info.divisible_indices, solve_divisible(divisible_system)))

    assignment = {}
    for v in system.variables:
        coords = [0] * len(A.summands)
        for indices, sol in solutions:
            for i, c in zip(indices, sol.assignment[v].coords):
                coords[i] = c
        assignment[v] = A.element(coords)
    return _checked(system, assignment)


# -- incremental streaming solver -------------------------------------------------


class _ComponentState:
    """Reduced echelon rows with unit pivots over one primary component Z/p**e."""

    __slots__ = ("p", "modulus", "sub", "indices", "rows")

    def __init__(self, p: int, modulus: int, sub, indices):
        self.p = p
        self.modulus = modulus
        self.sub = sub
        self.indices = indices
        # rows: (pivot var, coeff dict, rhs element of sub, combination of input rows)
        self.rows: list[tuple[str, dict[str, int], GroupElement, dict[int, int]]] = []

    def ingest(self, index: int, eq: AbelianEquation) -> None:
        m = self.modulus
        row = {v: k % m for v, k in eq.coeffs.items() if k % m != 0}
        rhs = self.sub.element(eq.rhs.coords[i] for i in self.indices)
        comb = {index: 1}
        for pv, prow, prhs, pcomb in self.rows:
            c = row.get(pv, 0)
            if c == 0:
                continue
            for v, k in prow.items():
                nk = (row.get(v, 0) - c * k) % m
                if nk:
                    row[v] = nk
                else:
                    row.pop(v, None)
            for j, k in pcomb.items():
                comb[j] = (comb.get(j, 0) - c * k) % m
            rhs = rhs - prhs.scale(c)
        units = [v for v, k in row.items() if k % self.p != 0]
        if not units:
            witness = {j: k % self.p for j, k in sorted(comb.items()) if k % self.p != 0}
            raise DependentRow(self.p, witness=witness)
        pv = min(units)
        inv = inv_mod(row[pv], m)
        row = {v: (inv * k) % m for v, k in row.items() if (inv * k) % m != 0}
        rhs = rhs.scale(inv)
        comb = {j: (inv * k) % m for j, k in comb.items()}
        for i, (opv, orow, orhs, ocomb) in enumerate(self.rows):
            c = orow.get(pv, 0)
            if c == 0:
                continue
            for v, k in row.items():
                nk = (orow.get(v, 0) - c * k) % m
                if nk:
                    orow[v] = nk
                else:
                    orow.pop(v, None)
            for j, k in comb.items():
                ocomb[j] = (ocomb.get(j, 0) - c * k) % m
            self.rows[i] = (opv, orow, orhs - rhs.scale(c), ocomb)
        self.rows.append((pv, row, rhs, comb))

    def value_of(self, var: str) -> GroupElement | None:
        for pv, _, rhs, _ in self.rows:
            if pv == var:
                return rhs
        return None


class EchelonState:
    """Incremental solver state for an equation stream over a bounded group.

    Ingesting equation i of a stream whose every truncation is p-nonsingular
    (for all p dividing the group period) always yields a fresh unit pivot;
    a reduced row with no unit coefficient means the stream broke the
    contract and raises DependentRow with the offending combination.
    """

    def __init__(self, group: AbelianGroupDescriptor):
        if not group.is_bounded:
            raise UnsupportedGroup("streaming needs a bounded-period group")
        self.group = group
        self.count = 0
        self.variables: set[str] = set()
        self.components = []
        for p in sorted({s.p for s in group.summands}):
            sub, indices = primary_part(group, p)
            modulus = max(s.modulus for s in sub.summands)
            self.components.append(_ComponentState(p, modulus, sub, indices))

    def ingest(self, eq: AbelianEquation) -> EchelonState:
        if eq.rhs.descriptor != self.group:
            raise UnsupportedGroup("equation over a different group")
        for comp in self.components:
            comp.ingest(self.count, eq)
        self.count += 1
        self.variables |= eq.variables()
        return self

    def solution(self) -> Solution:
        assignment = {}
        for v in sorted(self.variables):
            coords = [0] * len(self.group.summands)
            for comp in self.components:
                val = comp.value_of(v)
                if val is not None:
                    for i, c in zip(comp.indices, val.coords):
                        coords[i] = c
            assignment[v] = self.group.element(coords)
        return Solution(assignment)


def stream_ingest(state: EchelonState, eq: AbelianEquation) -> EchelonState:
    return state.ingest(eq)


def stream_solution(state: EchelonState) -> Solution:
    return state.solution()


# -- brute force oracle -------------------------------------------------------------


BRUTE_FORCE_LIMIT = 10**7


def brute_force_solve(system: AbelianSystem) -> Solution | None:
    """Exhaustive search over a finite group, in deterministic order.

    Variables are tried in sorted order and elements in coordinate-lattice
    order, so the first solution found is the lexicographically least one.
    Equations are checked as soon as all their variables are assigned.
    Returns None when the whole space is exhausted without a solution.
    """
    A = system.group
    size = A.size()
    if not A.is_bounded:
        raise UnsupportedGroup("brute force needs a finite group")
    variables = system.variables
    if size**max(len(variables), 1) > BRUTE_FORCE_LIMIT:
        raise SearchSpaceTooLarge(f"{size}**{len(variables)} exceeds {BRUTE_FORCE_LIMIT}")

    moduli = [s.modulus for s in A.summands]
    var_index = {v: i for i, v in enumerate(variables)}
    checkpoints: list[list[tuple[list[tuple[int, int]], tuple[int, ...]]]] = [
        [] for _ in range(len(variables) + 1)
    ]
    for eq in system.equations:
        support = [(var_index[v], k) for v, k in sorted(eq.coeffs.items())]
        last = max((i for i, _ in support), default=-1)
        checkpoints[last + 1].append((support, tuple(int(c) for c in eq.rhs.coords)))

    # equations with empty support constrain nothing but their rhs
    for _, rhs in checkpoints[0]:
        if any(c != 0 for c in rhs):
            return None

    domain = list(itertools.product(*(range(m) for m in moduli))) if moduli else [()]
    values: list[tuple[int, ...]] = [None] * len(variables)

    def satisfied(support, rhs) -> bool:
        for j in range(len(moduli)):
            total = 0
            for vi, k in support:
                total += k * values[vi][j]
            if total % moduli[j] != rhs[j]:
                return False
        return True

    def search(depth: int):
        if depth == len(variables):
            return {v: A.element(values[i]) for i, v in enumerate(variables)}
        for candidate in domain:
            values[depth] = candidate
            if all(satisfied(s, r) for s, r in checkpoints[depth + 1]):
                found = search(depth + 1)
                if found is not None:
                    return found
        values[depth] = None
        return None

    assignment = search(0)
    if assignment is None:
        return None
    return _checked(system, assignment)

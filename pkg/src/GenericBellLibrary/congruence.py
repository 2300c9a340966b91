#  Copyright 2026-     GenericBellLibrary Developers
#
#  Licensed under the Apache License, Version 2.0 (the "License");
#  you may not use this file except in compliance with the License.
#  You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
#  Unless required by applicable law or agreed to in writing, software
#  distributed under the License is distributed on an "AS IS" BASIS,
#  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#  See the License for the specific language governing permissions and
#  limitations under the License.

"""Linear congruences over ``Z_d`` and the closed loops of delta constraints.

``Z_d`` is not a field for composite ``d``, so systems are decided with the
integer Smith normal form ``U*A*V = D``: ``A*x + c = 0 (mod d)`` has a
solution iff every transformed constant ``f = U*(-c)`` satisfies
``gcd(s_i, d) | f_i``. A failing row ``i`` gives an explicit certificate:
the combination ``U[i]`` of the rows reduces the system to a single
congruence ``g*y + e = 0 (mod d)`` with ``gcd(g, d)`` not dividing ``e``.
"""

import itertools
import math
from collections import deque, namedtuple

from sympy import Matrix

from .errors import CapacityError, GenericBellException, ValidationError
from .lhv import DeltaConstraint, LhvAssignment
from .logger import logger
from .smith import smith_form

DEFAULT_SUBSET_CAP = 24
WITNESS_CACHE_SIZE = 64

MaxSatisfiable = namedtuple('MaxSatisfiable', 'size subset witness')
_Solution = namedtuple('_Solution', 'witness certificate')


def linear_congruence_solvable(a, b, m):
    """True iff ``a*x = b (mod m)`` has an integer solution.

    That is the case exactly when ``gcd(a, m)`` divides ``b``. For ``a == 0``
    the congruence is solvable iff ``b = 0 (mod m)``.
    """
    a, b, m = int(a), int(b), int(m)
    if m < 1:
        raise ValidationError(f"Modulus must be at least 1, got {m}.")
    if a == 0:
        return b % m == 0
    return b % math.gcd(a, m) == 0


class CongruenceSystem(object):
    """Delta constraints ``A*x + c = 0 (mod d)`` sharing one modulus.

    Variables are the ``(party, setting)`` pairs used by any constraint,
    sorted, and index the columns of :py:attr:`matrix`.
    """

    def __init__(self, constraints):
        self.constraints = list(constraints)
        moduli = {constraint.modulus for constraint in self.constraints}
        if len(moduli) > 1:
            raise ValidationError(
                f"Constraints must share one modulus, got {sorted(moduli)}.")
        self.modulus = moduli.pop() if moduli else None
        self.variables = sorted({var for constraint in self.constraints
                                 for var in constraint.variables})
        columns = {var: index for index, var in enumerate(self.variables)}
        self.matrix = []
        for constraint in self.constraints:
            row = [0] * len(self.variables)
            for var, coefficient in zip(constraint.variables, constraint.coefficients):
                row[columns[var]] += coefficient
            self.matrix.append(row)
        self.constants = [constraint.constant for constraint in self.constraints]

    def __len__(self):
        return len(self.constraints)

    def subsystem(self, indices):
        return CongruenceSystem([self.constraints[i] for i in indices])

    def satisfied_by(self, values):
        """True when ``values`` (variable to integer) satisfies every row."""
        return all(
            (sum(coefficient * values.get(var, 0) for var, coefficient
                 in zip(constraint.variables, constraint.coefficients))
             + constraint.constant) % constraint.modulus == 0
            for constraint in self.constraints)

    def __repr__(self):
        return (f'CongruenceSystem({len(self)} constraints, '
                f'{len(self.variables)} variables, modulus {self.modulus})')


class InfeasibilityCertificate(object):
    """Proof that the constraints ``subset`` cannot hold simultaneously.

    ``multipliers[k]`` is the integer weight of constraint ``subset[k]``.
    The weighted sum has variable coefficients ``coefficients`` with gcd
    ``g`` and constant ``e``, i.e. ``g*y + e = 0 (mod modulus)`` for an
    integer ``y``, which has no solution because ``gcd(g, modulus)`` does
    not divide ``e``.
    """

    def __init__(self, subset, multipliers, variables, coefficients, constant, modulus):
        self.subset = tuple(subset)
        self.multipliers = tuple(multipliers)
        self.variables = tuple(variables)
        self.coefficients = tuple(coefficients)
        self.constant = constant
        self.modulus = modulus

    @property
    def g(self):
        return math.gcd(*self.coefficients) if self.coefficients else 0

    @property
    def e(self):
        return self.constant

    @property
    def support(self):
        """Indices of the constraints with a non-zero multiplier."""
        return tuple(index for index, weight in zip(self.subset, self.multipliers) if weight)

    def reduced_constraint(self):
        """The combined congruence as a :py:class:`DeltaConstraint`."""
        pairs = [(var, c) for var, c in zip(self.variables, self.coefficients) if c]
        return DeltaConstraint([var for var, _ in pairs], [c for _, c in pairs],
                               self.constant, self.modulus)

    def verify(self, system):
        """Recomputes the combination from ``system`` and checks Theorem 1 fails."""
        combined, constant = {}, 0
        for index, weight in zip(self.subset, self.multipliers):
            for var, value in zip(system.variables, system.matrix[index]):
                combined[var] = combined.get(var, 0) + weight * value
            constant += weight * system.constants[index]
        combined = {var: value for var, value in combined.items() if value}
        mine = {var: value for var, value in zip(self.variables, self.coefficients) if value}
        return combined == mine and constant == self.constant and \
            not linear_congruence_solvable(self.g, -self.constant, self.modulus)

    def __str__(self):
        g, e, d = self.g, self.constant, self.modulus
        return f'{self.reduced_constraint()}: {g}y + {e} = 0 (mod {d}) has no solution'

    def __repr__(self):
        return f'InfeasibilityCertificate(subset={self.subset}, g={self.g}, e={self.e})'


def _solve(system, indices=None):
    """Solves ``system`` or returns a certificate for the first failing row.

    ``indices`` are the original constraint numbers of ``system``'s rows
    and are recorded in the certificate.
    """
    indices = tuple(range(len(system))) if indices is None else tuple(indices)
    d = system.modulus
    if not system.constraints:
        return _Solution({}, None)
    form = smith_form(system.matrix)
    target = [-int(value) for value in form.left * Matrix(system.constants)]
    y = [0] * len(system.variables)
    for i, f in enumerate(target):
        s = form.diagonal[i] if i < form.rank else 0
        g = math.gcd(s, d)
        if f % g:
            return _Solution(None, _certificate(system, indices,
                                                [int(w) for w in form.left.row(i)]))
        if i < form.rank and d // g > 1:
            y[i] = (f // g) * pow(s // g, -1, d // g) % (d // g)
    x = [int(value) % d for value in form.right * Matrix(y)]
    witness = dict(zip(system.variables, x))
    if not system.satisfied_by(witness):
        raise GenericBellException(
            f"Smith normal form solution {witness} does not satisfy {system!r}.")
    return _Solution(witness, None)


def _certificate(system, indices, multipliers):
    coefficients = [sum(weight * row[column] for weight, row in zip(multipliers, system.matrix))
                    for column in range(len(system.variables))]
    constant = sum(weight * c for weight, c in zip(multipliers, system.constants))
    return InfeasibilityCertificate(indices, multipliers, system.variables,
                                    coefficients, constant, system.modulus)


def system_solvable(system):
    """True iff ``A*x + c = 0 (mod d)`` has an integer solution."""
    return _solve(system).witness is not None


def solve_system(system):
    """A satisfying assignment ``{variable: value}`` or None.

    Free variables are set to 0, so the result is deterministic.
    """
    return _solve(system).witness


def _check_cap(system, cap):
    if len(system) > cap:
        raise CapacityError(
            f"Subset enumeration over {len(system)} constraints exceeds the "
            f"cap of {cap}.")


def _mask(indices):
    mask = 0
    for index in indices:
        mask |= 1 << index
    return mask


def max_satisfiable_subset(system, cap=DEFAULT_SUBSET_CAP):
    """Largest simultaneously satisfiable subset of ``system``'s constraints.

    Subsets are tried from the largest size down, in lexicographic order
    within a size. A subset containing the support of a known certificate
    is skipped without solving. Returns
    ``MaxSatisfiable(size, subset, witness)``.
    """
    _check_cap(system, cap)
    count = len(system)
    infeasible = []
    solved = 0
    for size in range(count, 0, -1):
        for subset in itertools.combinations(range(count), size):
            mask = _mask(subset)
            if any(known & mask == known for known in infeasible):
                continue
            solved += 1
            solution = _solve(system.subsystem(subset), subset)
            if solution.witness is not None:
                logger.debug(f"Maximum satisfiable subset of size {size} found "
                             f"after {solved} Smith normal form solves.")
                witness = {var: solution.witness.get(var, 0) for var in system.variables}
                return MaxSatisfiable(size, subset, witness)
            infeasible.append(_mask(solution.certificate.support))
    return MaxSatisfiable(0, (), {var: 0 for var in system.variables})


def minimal_infeasible_subsets(system, max_size=None, cap=DEFAULT_SUBSET_CAP):
    """All inclusion-minimal unsolvable subsets with their certificates.

    Subsets are examined by increasing size; supersets of a minimal
    infeasible subset are skipped, and every subset reaching the solver has
    only solvable proper subsets, so each infeasible one is minimal.
    Results are ordered by size, then lexicographically. ``max_size``
    limits the subset size examined.
    """
    _check_cap(system, cap)
    count = len(system)
    largest = count if max_size is None else min(int(max_size), count)
    minimal, masks = [], []
    witnesses = deque(maxlen=WITNESS_CACHE_SIZE)
    for size in range(1, largest + 1):
        for subset in itertools.combinations(range(count), size):
            mask = _mask(subset)
            if any(known & mask == known for known in masks):
                continue
            sub = system.subsystem(subset)
            if any(sub.satisfied_by(witness) for witness in witnesses):
                continue
            solution = _solve(sub, subset)
            if solution.witness is not None:
                witnesses.appendleft(solution.witness)
                continue
            minimal.append(solution.certificate)
            masks.append(mask)
            logger.debug(f"Minimal infeasible subset {subset}: {solution.certificate}.")
    logger.info(f"Found {len(minimal)} minimal infeasible subset(s) of size "
                f"at most {largest}.")
    return minimal


def witness_assignment(witness, parties, settings, dim):
    """Converts a ``{(party, setting): value}`` witness to an LhvAssignment."""
    return LhvAssignment.from_values(witness, parties, settings, dim)


def format_subset(system, subset):
    """Human readable list of the constraints in ``subset``."""
    return ', '.join(str(system.constraints[index]) for index in subset)

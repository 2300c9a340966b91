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

"""Local hidden variable side of the generic Bell inequality.

A deterministic strategy fixes the outcome ``omega^alpha(j, m)`` of every
party ``j`` and setting ``m``. Its Bell value is ``L*d - 1`` where ``L`` is
the fraction of delta constraints ``alpha(1, eta_1) + ... + alpha(N, eta_N)
+ eta~/M = 0 (mod d)`` that hold, one constraint per setting vector with
``M | eta~``. Mixed strategies are convex combinations of deterministic
ones and ``L`` is affine in the mixture, so searching deterministic tables
finds the classical maximum.
"""

import itertools
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from .cyclotomic import PhaseExponent, to_complex
from .errors import BudgetExceeded, ValidationError
from .logger import logger

DEFAULT_BUDGET = 10 ** 8
BLOCK_ELEMENTS = 2 ** 22
LETTERS = 'abcdefghijklmnopqrstuvwxyz'

ClassicalOptimum = namedtuple('ClassicalOptimum', 'l_max witness')


def variable_name(party, setting):
    """Name of ``alpha(party, setting)``: ``a1`` for party 1, setting 0."""
    if setting < len(LETTERS):
        return f'{LETTERS[setting]}{party}'
    return f'x{setting}_{party}'


class LhvAssignment(object):
    """Deterministic outcome table ``alpha(j, m)`` with entries mod ``dim``.

    ``alpha`` is indexed by party (row, parties numbered from 1 in the
    public API) and setting (column, from 0).
    """

    def __init__(self, alpha, dim):
        self.dim = int(dim)
        if self.dim < 2:
            raise ValidationError(f"Dimension must be at least 2, got {dim}.")
        rows = tuple(tuple(int(value) % self.dim for value in row) for row in alpha)
        if not rows or len({len(row) for row in rows}) != 1:
            raise ValidationError("Assignment must be a non-empty rectangular table.")
        self.alpha = rows

    @classmethod
    def from_values(cls, values, parties, settings, dim):
        """Builds an assignment from ``{(party, setting): value}``.

        Missing variables are set to zero.
        """
        alpha = [[0] * settings for _ in range(parties)]
        for (party, setting), value in values.items():
            alpha[party - 1][setting] = value
        return cls(alpha, dim)

    @property
    def parties(self):
        return len(self.alpha)

    @property
    def settings(self):
        return len(self.alpha[0])

    def value(self, party, setting):
        return self.alpha[party - 1][setting]

    def as_dict(self):
        return {variable_name(party, setting): self.value(party, setting)
                for party in range(1, self.parties + 1)
                for setting in range(self.settings)}

    def __eq__(self, other):
        if not isinstance(other, LhvAssignment):
            return NotImplemented
        return (self.dim, self.alpha) == (other.dim, other.alpha)

    def __hash__(self):
        return hash((self.dim, self.alpha))

    def __str__(self):
        columns = []
        for setting in range(self.settings):
            values = ','.join(str(row[setting]) for row in self.alpha)
            columns.append(f'{variable_name(1, setting)[:-1]}=({values})')
        return ' '.join(columns)

    def __repr__(self):
        return f'LhvAssignment({[list(row) for row in self.alpha]}, dim={self.dim})'


class DeltaConstraint(object):
    """``sum(coefficients * alpha(variables)) + constant = 0 (mod modulus)``."""

    def __init__(self, variables, coefficients, constant, modulus):
        self.variables = tuple(tuple(var) for var in variables)
        self.coefficients = tuple(int(c) for c in coefficients)
        if len(self.variables) != len(self.coefficients):
            raise ValidationError("Every variable needs exactly one coefficient.")
        self.constant = int(constant)
        self.modulus = int(modulus)

    @property
    def settings(self):
        """Setting vector ``eta`` when the constraint uses one variable per party."""
        return tuple(setting for _, setting in self.variables)

    def residue(self, assignment):
        total = self.constant
        for (party, setting), coefficient in zip(self.variables, self.coefficients):
            total += coefficient * assignment.value(party, setting)
        return total % self.modulus

    def satisfied(self, assignment):
        return self.residue(assignment) == 0

    def __eq__(self, other):
        if not isinstance(other, DeltaConstraint):
            return NotImplemented
        return (self.variables, self.coefficients, self.constant, self.modulus) == \
            (other.variables, other.coefficients, other.constant, other.modulus)

    def __hash__(self):
        return hash((self.variables, self.coefficients, self.constant, self.modulus))

    def __str__(self):
        terms = []
        for (party, setting), coefficient in zip(self.variables, self.coefficients):
            name = variable_name(party, setting)
            if coefficient == 1:
                terms.append(name)
            elif coefficient == -1:
                terms.append(f'-{name}')
            else:
                terms.append(f'{coefficient}{name}')
        expression = ' + '.join(terms).replace('+ -', '- ')
        if self.constant:
            expression += f' + {self.constant}'
        return f'δ_{self.modulus}({expression})'

    def __repr__(self):
        return f'DeltaConstraint({str(self)})'


def generate_constraints(settings, dim, parties=3):
    """The delta constraints of the ``(parties, settings, dim)`` LHV function.

    One constraint per setting vector ``eta`` with ``settings | eta~``, in
    lexicographic order of ``eta``: ``settings ** (parties - 1)`` in total.
    """
    settings, dim, parties = int(settings), int(dim), int(parties)
    if settings < 2 or dim < 2 or parties < 2:
        raise ValidationError(
            f"Need at least 2 parties, settings and outcomes, got "
            f"({parties}, {settings}, {dim}).")
    constraints = []
    for eta in itertools.product(range(settings), repeat=parties):
        total = sum(eta)
        if total % settings:
            continue
        variables = [(party, setting) for party, setting in enumerate(eta, start=1)]
        constraints.append(
            DeltaConstraint(variables, [1] * parties, total // settings, dim))
    return constraints


def _check_compatible(constraints, assignment):
    for constraint in constraints:
        if constraint.modulus != assignment.dim:
            raise ValidationError(
                f"Constraint modulus {constraint.modulus} does not match "
                f"assignment dimension {assignment.dim}.")
        for party, setting in constraint.variables:
            if not (1 <= party <= assignment.parties
                    and 0 <= setting < assignment.settings):
                raise ValidationError(
                    f"Constraint {constraint} uses {variable_name(party, setting)} "
                    f"which a {assignment.parties}x{assignment.settings} "
                    f"assignment does not have.")


def evaluate_L(constraints, assignment):
    """Fraction of ``constraints`` satisfied by ``assignment``."""
    if not constraints:
        raise ValidationError("Cannot evaluate L without constraints.")
    _check_compatible(constraints, assignment)
    satisfied = sum(1 for constraint in constraints if constraint.satisfied(assignment))
    return Fraction(satisfied, len(constraints))


def classical_bound(l_value, dim):
    """LHV Bell value ``L*d - 1`` as an exact fraction."""
    return Fraction(l_value) * dim - 1


def lhv_bell_value(scenario, assignment):
    """LHV Bell function summed directly over ``n``, ``gamma`` and settings.

    ``(1/M^N) sum_n sum_gamma prod_j sum_eta Omega^(gamma eta)
    omega^(n eta/M) omega^(n alpha(j, eta))``. Equals ``L*d - 1``.
    """
    m, d = scenario.settings, scenario.dim
    if (assignment.parties, assignment.settings, assignment.dim) != \
            (scenario.parties, m, d):
        raise ValidationError(f"Assignment does not match scenario {scenario}.")
    total = 0j
    for n in range(1, d):
        for gamma in range(m):
            product = 1 + 0j
            for party in range(1, scenario.parties + 1):
                product *= sum(
                    to_complex(PhaseExponent(
                        gamma * eta * d + n * eta + n * m * assignment.value(party, eta),
                        m * d))
                    for eta in range(m))
            total += product
    return (total / m ** scenario.parties).real


def _digits(indices, base, width):
    powers = base ** np.arange(width - 1, -1, -1, dtype=np.int64)
    return (indices[:, None] // powers) % base


class _BruteForceSearch(object):
    """Exhaustive search over assignments with ``alpha(1, 0)`` pinned to 0.

    Adding ``c`` to all of party 1's outcomes and subtracting it from party
    2's leaves every constraint unchanged, so pinning loses nothing. The
    last party is enumerated as a numpy table; the other parties form the
    prefix which is split into blocks of consecutive (lexicographic) indices.
    """

    def __init__(self, settings, dim, parties):
        self.settings, self.dim, self.parties = settings, dim, parties
        constraints = generate_constraints(settings, dim, parties)
        self.constraint_count = len(constraints)
        self.etas = np.array([c.settings for c in constraints], dtype=np.int64)
        self.constants = np.array([c.constant for c in constraints], dtype=np.int64)
        self.last_party = _digits(np.arange(dim ** settings, dtype=np.int64),
                                  dim, settings)
        self.last_terms = self.last_party[:, self.etas[:, -1]]
        self.prefix_width = (parties - 1) * settings - 1
        self.prefix_count = dim ** self.prefix_width
        per_prefix = self.last_party.shape[0] * self.constraint_count
        self.block_size = max(1, BLOCK_ELEMENTS // per_prefix)

    def blocks(self):
        for start in range(0, self.prefix_count, self.block_size):
            yield start, min(start + self.block_size, self.prefix_count)

    def _prefix_tables(self, start, stop):
        digits = _digits(np.arange(start, stop, dtype=np.int64), self.dim,
                         self.prefix_width)
        pinned = np.zeros((digits.shape[0], 1), dtype=np.int64)
        return np.hstack([pinned, digits]).reshape(
            digits.shape[0], self.parties - 1, self.settings)

    def search_block(self, block):
        start, stop = block
        prefix = self._prefix_tables(start, stop)
        partial = np.broadcast_to(self.constants, (prefix.shape[0], self.constraint_count)).copy()
        for party in range(self.parties - 1):
            partial += prefix[:, party, self.etas[:, party]]
        satisfied = ((self.last_terms[None, :, :] + partial[:, None, :]) % self.dim == 0)
        counts = satisfied.sum(axis=2)
        best = int(np.argmax(counts))
        row, column = divmod(best, counts.shape[1])
        count = int(counts[row, column])
        return count, prefix[row], self.last_party[column]

    def witness(self, prefix, last):
        alpha = [list(row) for row in prefix] + [list(last)]
        return LhvAssignment(alpha, self.dim)


def brute_force_max(settings, dim, parties=3, budget=DEFAULT_BUDGET, workers=1):
    """Exact classical maximum of ``L`` by exhaustive search.

    Returns ``ClassicalOptimum(l_max, witness)`` where ``witness`` is the
    lexicographically smallest optimal assignment (parties in order,
    settings in order within a party). Raises :py:class:`BudgetExceeded`
    when ``dim ** (parties * settings)`` exceeds ``budget``; the congruence
    oracle is exact and handles those cases.
    """
    settings, dim, parties = int(settings), int(dim), int(parties)
    space = dim ** (parties * settings)
    if space > budget:
        raise BudgetExceeded(
            f"Exhaustive search over {dim}^{parties * settings} = {space} "
            f"assignments exceeds budget {budget}.")
    search = _BruteForceSearch(settings, dim, parties)
    blocks = list(search.blocks())
    logger.info(f"Brute force over ({parties}, {settings}, {dim}): "
                f"{space // dim} assignments after pinning, {len(blocks)} blocks, "
                f"{workers} worker(s).")
    best = None
    progress_step = max(1, len(blocks) // 10)
    with ThreadPoolExecutor(max_workers=max(1, int(workers))) as executor:
        for index, result in enumerate(executor.map(search.search_block, blocks)):
            if best is None or result[0] > best[0]:
                best = result
            if (index + 1) % progress_step == 0:
                logger.debug(f"Brute force progress: {index + 1}/{len(blocks)} blocks, "
                             f"best so far {best[0]}/{search.constraint_count}.")
    count, prefix, last = best
    l_max = Fraction(count, search.constraint_count)
    witness = search.witness(prefix, last)
    logger.info(f"Brute force maximum L = {l_max} with witness {witness}.")
    return ClassicalOptimum(l_max, witness)

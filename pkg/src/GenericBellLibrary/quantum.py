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

"""Generic Bell operator, correlation functions and the GHZ eigenvalue.

The exact path never builds a state vector: every composite observable
``X_1^n(eta_1/M) (x) ... (x) X_N^n(eta_N/M)`` maps ``|k>^N`` to a phase
times ``|k+n>^N``, so GHZ expectation values reduce to sums of phases over
order ``M*d``. The dense path assembles the operator with numpy and is
limited by ``dense_cap`` amplitudes.
"""

import itertools
import math
from fractions import Fraction
from functools import reduce

import numpy as np

from .cyclotomic import CyclotomicSum, PhaseExponent, to_complex
from .errors import DenseSizeError, ValidationError
from .logger import logger
from .observables import DenseOperator, power_X_nu

DEFAULT_DENSE_CAP = 4096
TOLERANCE = 1e-9


class BellScenario(object):
    """An ``(N, M, d)`` scenario: parties, settings per party, outcomes."""
    __slots__ = ('parties', 'settings', 'dim')

    def __init__(self, parties, settings, dim):
        parties, settings, dim = int(parties), int(settings), int(dim)
        for name, value in (('parties', parties), ('settings', settings),
                            ('dimension', dim)):
            if value < 2:
                raise ValidationError(f"Number of {name} must be at least 2, got {value}.")
        object.__setattr__(self, 'parties', parties)
        object.__setattr__(self, 'settings', settings)
        object.__setattr__(self, 'dim', dim)

    def __setattr__(self, name, value):
        raise AttributeError("BellScenario is immutable.")

    @property
    def phase_order(self):
        """Order ``M*d`` in which every phase of the scenario lives."""
        return self.settings * self.dim

    @property
    def hilbert_dim(self):
        return self.dim ** self.parties

    def setting_vectors(self, filtered=True):
        """All setting vectors, only those with ``M | eta~`` when ``filtered``.

        Yielded in lexicographic order.
        """
        for eta in itertools.product(range(self.settings), repeat=self.parties):
            if not filtered or sum(eta) % self.settings == 0:
                yield SettingVector(eta)

    def as_tuple(self):
        return self.parties, self.settings, self.dim

    def __eq__(self, other):
        if not isinstance(other, BellScenario):
            return NotImplemented
        return self.as_tuple() == other.as_tuple()

    def __hash__(self):
        return hash(self.as_tuple())

    def __str__(self):
        return f'({self.parties}, {self.settings}, {self.dim})'

    def __repr__(self):
        return f'BellScenario(parties={self.parties}, settings={self.settings}, dim={self.dim})'


class SettingVector(object):
    """Settings ``(eta_1, ..., eta_N)`` chosen by the parties."""
    __slots__ = ('eta',)

    def __init__(self, eta):
        object.__setattr__(self, 'eta', tuple(int(e) for e in eta))

    def __setattr__(self, name, value):
        raise AttributeError("SettingVector is immutable.")

    @property
    def total(self):
        return sum(self.eta)

    def validate(self, scenario):
        if len(self.eta) != scenario.parties:
            raise ValidationError(
                f"Expected {scenario.parties} settings, got {len(self.eta)}.")
        if any(not 0 <= e < scenario.settings for e in self.eta):
            raise ValidationError(
                f"Settings must be in 0..{scenario.settings - 1}, got {self.eta}.")
        return self

    def __iter__(self):
        return iter(self.eta)

    def __repr__(self):
        return f'SettingVector({self.eta})'


class GhzState(object):
    """``(1/sqrt(d)) sum_k |k>^N``; materialized only by :py:meth:`dense`."""

    def __init__(self, parties, dim):
        self.parties = int(parties)
        self.dim = int(dim)

    def dense(self, dense_cap=DEFAULT_DENSE_CAP):
        size = _check_dense_cap(self.dim, self.parties, dense_cap)
        vector = np.zeros(size, dtype=complex)
        stride = sum(self.dim ** j for j in range(self.parties))
        vector[np.arange(self.dim) * stride] = 1 / math.sqrt(self.dim)
        return vector


def _check_dense_cap(dim, parties, dense_cap):
    size = dim ** parties
    if size > dense_cap:
        raise DenseSizeError(
            f"Dense representation needs {size} amplitudes, cap is {dense_cap}.")
    return size


def _check_level(scenario, n):
    n = int(n)
    if not 1 <= n <= scenario.dim - 1:
        raise ValidationError(f"Level n must be in 1..{scenario.dim - 1}, got {n}.")
    return n


def _as_setting_vector(eta):
    return eta if isinstance(eta, SettingVector) else SettingVector(eta)


def correlation_terms(scenario, n, eta):
    """Unnormalized ``d * E^n(eta)`` as an exact sum of ``d`` phases.

    Party ``j`` contributes ``omega^(-eta_j n / M)`` on ``|k>`` with
    ``k < d-n`` and ``omega^(-eta_j (n-d) / M)`` on the wrapped states.
    """
    n = _check_level(scenario, n)
    eta = _as_setting_vector(eta).validate(scenario)
    d, total = scenario.dim, eta.total
    terms = CyclotomicSum(scenario.phase_order)
    terms.add(-total * n, multiplicity=d - n)
    terms.add(-total * (n - d), multiplicity=n)
    return terms


def correlation(scenario, n, eta):
    """The correlation function ``E^n(eta)`` on the GHZ state."""
    return correlation_terms(scenario, n, eta).evaluate() / scenario.dim


def bell_expectation_terms(scenario):
    """All phases of ``d * M^(N-1) * <psi|B_M|psi>`` after the gamma sum."""
    terms = CyclotomicSum(scenario.phase_order)
    for n in range(1, scenario.dim):
        for eta in scenario.setting_vectors(filtered=True):
            weight = n * eta.total
            for numerator, count in correlation_terms(scenario, n, eta).counts.items():
                terms.add(weight + numerator, multiplicity=count)
    return terms


def bell_expectation_ghz(scenario):
    """``<psi|B_M|psi>`` on the GHZ state, computed from exact phases."""
    terms = bell_expectation_terms(scenario)
    norm = scenario.dim * scenario.settings ** (scenario.parties - 1)
    value = terms.evaluate() / norm
    if abs(value.imag) > TOLERANCE:
        logger.warn(f"GHZ expectation of {scenario} has imaginary residue {value.imag!r}.")
    logger.debug(f"GHZ expectation of {scenario} from {len(terms)} phases: "
                 f"{value.real!r}; all phases trivial: {terms.is_real_integer()}.")
    return value.real


def _raising_operators(scenario, n):
    return [power_X_nu(scenario.dim, Fraction(eta, scenario.settings), n,
                       scenario.settings).dense().entries
            for eta in range(scenario.settings)]


def local_operator(scenario, n, gamma):
    """One party's factor ``sum_eta Omega^(gamma eta) omega^(n eta/M) X^n(eta/M)``."""
    d, m = scenario.dim, scenario.settings
    factor = np.zeros((d, d), dtype=complex)
    for eta, raising in enumerate(_raising_operators(scenario, n)):
        factor += to_complex(PhaseExponent(gamma * eta * d + n * eta, m * d)) * raising
    return factor


def bell_operator_dense(scenario, dense_cap=DEFAULT_DENSE_CAP, analytic_filter=False):
    """Dense generic Bell operator ``B_M`` on the ``d^N`` space.

    Without ``analytic_filter`` the operator is the literal sum over ``n``
    and ``gamma`` of tensor products of :py:func:`local_operator`, scaled by
    ``1/M^N``. With it, the gamma sum is replaced by its closed form and only
    setting vectors with ``M | eta~`` are summed, scaled by ``1/M^(N-1)``.
    """
    _check_dense_cap(scenario.dim, scenario.parties, dense_cap)
    size = scenario.hilbert_dim
    total = np.zeros((size, size), dtype=complex)
    if not analytic_filter:
        for n in range(1, scenario.dim):
            for gamma in range(scenario.settings):
                factor = local_operator(scenario, n, gamma)
                total += reduce(np.kron, [factor] * scenario.parties)
        total /= scenario.settings ** scenario.parties
    else:
        for n in range(1, scenario.dim):
            raising = _raising_operators(scenario, n)
            for eta in scenario.setting_vectors(filtered=True):
                weight = to_complex(PhaseExponent(n * eta.total, scenario.phase_order))
                total += weight * reduce(np.kron, [raising[e] for e in eta])
        total /= scenario.settings ** (scenario.parties - 1)
    logger.debug(f"Assembled dense Bell operator for {scenario} "
                 f"({size}x{size}, analytic filter {analytic_filter}).")
    return DenseOperator(total)


def ghz_eigencheck(scenario, dense_cap=DEFAULT_DENSE_CAP):
    """``||B_M|psi> - (d-1)|psi>||_2`` for the GHZ state ``|psi>``."""
    state = GhzState(scenario.parties, scenario.dim).dense(dense_cap)
    operator = bell_operator_dense(scenario, dense_cap)
    residual = float(np.linalg.norm(operator @ state - (scenario.dim - 1) * state))
    logger.info(f"GHZ eigencheck residual for {scenario}: {residual:.3e}.")
    return residual

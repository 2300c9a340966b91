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

"""Exact arithmetic on roots of unity.

A phase ``exp(2*pi*i*k/L)`` is stored as the integer pair ``(k mod L, L)``.
Products add exponents, powers scale them, and nothing is converted to
floating point until :py:func:`to_complex` or :py:func:`sum_evaluate` is
called.
"""

import math
from collections import Counter
from fractions import Fraction

from .errors import CapacityError, ValidationError

MAX_ORDER = 2 ** 63 - 1


class PhaseExponent(object):
    """The unit phase ``exp(2*pi*i*numerator/order)``.

    Instances are immutable and always normalized to
    ``0 <= numerator < order``. Equality compares the reduced fraction
    ``numerator/order``, so ``PhaseExponent(1, 2) == PhaseExponent(2, 4)``.
    """
    __slots__ = ('_numerator', '_order')

    def __init__(self, numerator, order):
        order = int(order)
        if order < 1:
            raise ValidationError(f"Phase order must be positive, got {order}.")
        if order > MAX_ORDER:
            raise CapacityError(f"Phase order {order} exceeds 64-bit range.")
        self._numerator = int(numerator) % order
        self._order = order

    @classmethod
    def identity(cls):
        return cls(0, 1)

    @property
    def numerator(self):
        return self._numerator

    @property
    def order(self):
        return self._order

    @property
    def turns(self):
        return Fraction(self._numerator, self._order)

    def lift(self, order):
        """Same phase expressed over ``order``, which must be a multiple."""
        if order % self._order:
            raise ValidationError(
                f"Cannot express order {self._order} phase over order {order}.")
        return PhaseExponent(self._numerator * (order // self._order), order)

    def is_identity(self):
        return self._numerator == 0

    def __mul__(self, other):
        return phase_mul(self, other)

    def __pow__(self, n):
        return phase_pow(self, n)

    def __complex__(self):
        return to_complex(self)

    def __eq__(self, other):
        if not isinstance(other, PhaseExponent):
            return NotImplemented
        return self._numerator * other._order == other._numerator * self._order

    def __hash__(self):
        return hash(self.turns)

    def __repr__(self):
        return f'PhaseExponent({self._numerator}, {self._order})'

    def __str__(self):
        return f'{self._numerator} mod {self._order}'


def _checked_lcm(a, b):
    lcm = a // math.gcd(a, b) * b
    if lcm > MAX_ORDER:
        raise CapacityError(f"Common phase order lcm({a}, {b}) exceeds 64-bit range.")
    return lcm


def phase_mul(a, b):
    """Product of two phases over ``lcm(a.order, b.order)``."""
    order = _checked_lcm(a.order, b.order)
    numerator = (a.numerator * (order // a.order)
                 + b.numerator * (order // b.order))
    return PhaseExponent(numerator, order)


def phase_pow(a, n):
    """``a`` raised to the integer power ``n``; negative ``n`` inverts."""
    return PhaseExponent(int(n) * a.numerator, a.order)


def to_complex(a):
    angle = 2 * math.pi * a.numerator / a.order
    return complex(math.cos(angle), math.sin(angle))


class CyclotomicSum(object):
    """A multiset of phases sharing one order ``L``.

    Terms are kept as a :py:class:`collections.Counter` of numerators, so
    sums with many equal phases (the usual case for GHZ expectations) stay
    small. Phases of a smaller order are lifted on insertion.
    """

    def __init__(self, order, terms=()):
        self.order = int(order)
        if self.order < 1:
            raise ValidationError(f"Sum order must be positive, got {order}.")
        self._counts = Counter()
        for term in terms:
            self.add(term)

    def add(self, phase, multiplicity=1):
        if isinstance(phase, int):
            numerator = phase % self.order
        else:
            numerator = phase.lift(self.order).numerator
        self._counts[numerator] += multiplicity
        if not self._counts[numerator]:
            del self._counts[numerator]
        return self

    @property
    def counts(self):
        """Mapping of numerator to multiplicity, numerators sorted."""
        return dict(sorted(self._counts.items()))

    def __len__(self):
        return sum(self._counts.values())

    def __iter__(self):
        for numerator, count in sorted(self._counts.items()):
            for _ in range(count):
                yield PhaseExponent(numerator, self.order)

    def is_real_integer(self):
        """True when every term is the identity phase."""
        return set(self._counts) <= {0}

    def evaluate(self):
        return sum_evaluate(self)

    def __repr__(self):
        return f'CyclotomicSum(order={self.order}, counts={self.counts})'


def sum_evaluate(s):
    """Complex value of a :py:class:`CyclotomicSum`.

    Real and imaginary parts are summed with :py:func:`math.fsum`, which is
    correctly rounded and therefore independent of term order.
    """
    real, imag = [], []
    for numerator, count in sorted(s.counts.items()):
        if numerator == 0:
            real.append(float(count))
            continue
        angle = 2 * math.pi * numerator / s.order
        real.append(count * math.cos(angle))
        imag.append(count * math.sin(angle))
    return complex(math.fsum(real), math.fsum(imag))

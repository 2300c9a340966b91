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

"""Unitary qudit observables as exact generalized permutation operators.

Every observable of the generic Bell operator maps a basis state ``|m>`` to
a phase times ``|m + shift mod d>``. Storing the shift and the ``d`` phases
keeps all phase bookkeeping exact; :py:meth:`GenPermOperator.dense` renders
a numpy matrix for cross-checks only.
"""

import math
from fractions import Fraction

import numpy as np

from .cyclotomic import PhaseExponent, to_complex
from .errors import ValidationError


def _check_dim(d):
    d = int(d)
    if d < 2:
        raise ValidationError(f"Dimension must be at least 2, got {d}.")
    return d


def as_phase_fraction(nu, settings=None):
    """Validates a rational phase value ``nu`` and returns it as a Fraction.

    Floats are rejected because the phase order must be known exactly.
    When ``settings`` (M) is given the reduced denominator must divide 2M,
    which covers ``0, 1/M, ..., (M-1)/M`` and ``1/2``.
    """
    if isinstance(nu, float):
        raise ValidationError(
            f"Phase value must be rational, got float {nu!r}; "
            f"use a Fraction or a string like '1/3'.")
    try:
        nu = Fraction(nu)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ValidationError(f"Invalid rational phase value {nu!r}.")
    if settings is not None and (2 * int(settings)) % nu.denominator:
        raise ValidationError(
            f"Phase value {nu} has denominator {nu.denominator} which does "
            f"not divide 2M = {2 * int(settings)}.")
    return nu


class GenPermOperator(object):
    """Generalized permutation operator on a ``dim``-level system.

    ``|m> -> phases[m] |m + shift mod dim>``. Immutable.
    """
    __slots__ = ('dim', 'shift', 'phases')

    def __init__(self, dim, shift, phases):
        phases = tuple(phases)
        if len(phases) != dim:
            raise ValidationError(
                f"Expected {dim} phases, got {len(phases)}.")
        object.__setattr__(self, 'dim', dim)
        object.__setattr__(self, 'shift', shift % dim)
        object.__setattr__(self, 'phases', phases)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable.")

    def apply(self, m):
        """Returns ``(phase, target)`` for the basis state ``|m>``."""
        m %= self.dim
        return self.phases[m], (m + self.shift) % self.dim

    def __matmul__(self, other):
        """Operator product ``self @ other`` (``other`` acts first)."""
        if other.dim != self.dim:
            raise ValidationError("Operator dimensions differ.")
        phases = []
        for m in range(self.dim):
            first, target = other.apply(m)
            second, _ = self.apply(target)
            phases.append(first * second)
        return GenPermOperator(self.dim, self.shift + other.shift, phases)

    def adjoint(self):
        phases = [None] * self.dim
        for m, phase in enumerate(self.phases):
            phases[(m + self.shift) % self.dim] = phase ** -1
        return GenPermOperator(self.dim, -self.shift, phases)

    def power(self, n):
        if n < 0:
            return self.adjoint().power(-n)
        result = identity(self.dim)
        for _ in range(n):
            result = self @ result
        return result

    def is_diagonal(self):
        return self.shift == 0

    def dense(self):
        matrix = np.zeros((self.dim, self.dim), dtype=complex)
        for m, phase in enumerate(self.phases):
            matrix[(m + self.shift) % self.dim, m] = to_complex(phase)
        return DenseOperator(matrix)

    def equals_up_to_phase(self, other):
        """True if ``self == c * other`` for a single unit phase ``c``."""
        if other.dim != self.dim or other.shift != self.shift:
            return False
        ratios = {mine * theirs ** -1
                  for mine, theirs in zip(self.phases, other.phases)}
        return len(ratios) == 1

    def __eq__(self, other):
        if not isinstance(other, GenPermOperator):
            return NotImplemented
        return (self.dim, self.shift, self.phases) == \
            (other.dim, other.shift, other.phases)

    def __hash__(self):
        return hash((self.dim, self.shift, self.phases))

    def __repr__(self):
        phases = ', '.join(str(p) for p in self.phases)
        return f'GenPermOperator(dim={self.dim}, shift={self.shift}, phases=[{phases}])'


class DenseOperator(object):
    """A ``dim x dim`` complex matrix used for numerical cross-checks."""

    def __init__(self, entries):
        entries = np.asarray(entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValidationError(f"Expected a square matrix, got shape {entries.shape}.")
        self.entries = entries

    @property
    def dim(self):
        return self.entries.shape[0]

    def __matmul__(self, other):
        if isinstance(other, DenseOperator):
            return DenseOperator(self.entries @ other.entries)
        return self.entries @ np.asarray(other)

    def adjoint(self):
        return DenseOperator(self.entries.conj().T)

    def nonzero_count(self, tolerance=1e-12):
        return int(np.count_nonzero(np.abs(self.entries) > tolerance))

    def is_unitary(self, tolerance=1e-10):
        product = self.entries.conj().T @ self.entries
        return bool(np.allclose(product, np.eye(self.dim), atol=tolerance, rtol=0))

    def allclose(self, other, tolerance=1e-10):
        other = other.entries if isinstance(other, DenseOperator) else np.asarray(other)
        return bool(np.allclose(self.entries, other, atol=tolerance, rtol=0))

    def eigenvalues(self):
        return np.linalg.eigvals(self.entries)

    def __repr__(self):
        return f'DenseOperator(dim={self.dim})'


def identity(d):
    d = _check_dim(d)
    return GenPermOperator(d, 0, [PhaseExponent.identity()] * d)


def build_Z(d):
    """Reference observable ``Z = sum_n omega^n |n><n|``."""
    d = _check_dim(d)
    return GenPermOperator(d, 0, [PhaseExponent(m, d) for m in range(d)])


def build_fourier(d):
    """Quantum Fourier transform with entries ``omega^(-nm) / sqrt(d)``."""
    d = _check_dim(d)
    index = np.arange(d)
    exponents = (-np.outer(index, index)) % d
    return DenseOperator(np.exp(2j * np.pi * exponents / d) / math.sqrt(d))


def build_phase_shift(d, nu, settings=None):
    """Phase shift ``P_nu = sum_n omega^(-nu n) |n><n|``."""
    d = _check_dim(d)
    nu = as_phase_fraction(nu, settings)
    order = d * nu.denominator
    return GenPermOperator(
        d, 0, [PhaseExponent(-nu.numerator * m, order) for m in range(d)])


def build_X_nu(d, nu, settings=None):
    """Shifted observable ``X(nu) = P_nu X P_nu^dagger``.

    ``|m> -> omega^(-nu) |m+1>`` for ``m < d-1`` and
    ``|d-1> -> omega^(-nu(1-d)) |0>``.
    """
    return power_X_nu(d, nu, 1, settings)


def build_Y(d):
    """``Y = X(1/2)``; equals minus the Pauli ``sigma_y`` when ``d`` is 2."""
    return build_X_nu(d, Fraction(1, 2))


def power_X_nu(d, nu, n, settings=None):
    """The ``n``-level raising operator ``X^n(nu)`` for ``1 <= n <= d-1``.

    ``|m> -> omega^(-nu(n-d)) |m+n>`` for ``m >= d-n`` and
    ``omega^(-nu n) |m+n>`` otherwise.
    """
    d = _check_dim(d)
    nu = as_phase_fraction(nu, settings)
    n = int(n)
    if not 1 <= n <= d - 1:
        raise ValidationError(f"Level n must be in 1..{d - 1}, got {n}.")
    order = d * nu.denominator
    wrapped = PhaseExponent(-nu.numerator * (n - d), order)
    plain = PhaseExponent(-nu.numerator * n, order)
    phases = [wrapped if m >= d - n else plain for m in range(d)]
    return GenPermOperator(d, n, phases)


def eigenphases(op):
    """Exact spectrum of a generalized permutation operator.

    Each cycle of length ``c`` of the underlying permutation whose phase
    product is ``P`` contributes the ``c`` roots of ``lambda^c = P``.
    Returned sorted by turn.
    """
    d = op.dim
    seen = [False] * d
    spectrum = []
    for start in range(d):
        if seen[start]:
            continue
        product, m, length = PhaseExponent.identity(), start, 0
        while not seen[m]:
            seen[m] = True
            phase, m = op.apply(m)
            product = product * phase
            length += 1
        order = product.order * length
        for k in range(length):
            spectrum.append(PhaseExponent(product.numerator + k * product.order, order))
    return sorted(spectrum, key=lambda phase: phase.turns)

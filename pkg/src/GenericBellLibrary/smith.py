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

"""Smith normal form of integer matrices with unimodular transforms.

Matrices are ``sympy.Matrix`` objects with exact integer entries.
:py:func:`smith_form` returns ``left``, ``right`` and the diagonal with
``left * matrix * right == diag(diagonal)``, each diagonal entry dividing
the next one.
"""

from collections import namedtuple

from sympy import Integer, Matrix

from .errors import ValidationError

SmithForm = namedtuple('SmithForm', 'diagonal left right rank')


def integer_matrix(rows):
    """``rows`` as a mutable ``sympy.Matrix`` of integers."""
    try:
        matrix = Matrix(rows)
    except ValueError as error:
        raise ValidationError(f"Invalid integer matrix: {error}")
    if not all(isinstance(value, Integer) for value in matrix):
        raise ValidationError("Matrix entries must be integers.")
    return matrix


class _Reduction(object):

    def __init__(self, matrix):
        self.a = integer_matrix(matrix)
        self.rows, self.cols = self.a.shape
        self.left = Matrix.eye(self.rows)
        self.right = Matrix.eye(self.cols)

    def swap_rows(self, i, j):
        if i != j:
            self.a.row_swap(i, j)
            self.left.row_swap(i, j)

    def swap_cols(self, i, j):
        if i != j:
            self.a.col_swap(i, j)
            self.right.col_swap(i, j)

    def add_row(self, target, source, factor):
        for m in (self.a, self.left):
            m.row_op(target, lambda value, col: value + factor * m[source, col])

    def add_col(self, target, source, factor):
        for m in (self.a, self.right):
            m.col_op(target, lambda value, row: value + factor * m[row, source])

    def negate_row(self, i):
        for m in (self.a, self.left):
            m.row_op(i, lambda value, col: -value)

    def move_least_to_start(self, s):
        """Moves the smallest non-zero entry of the lower block to ``[s, s]``.

        Returns False when the block is zero.
        """
        block = self.a[s:, s:]
        if block.is_zero_matrix:
            return False
        _, i, j = min((abs(int(block[i, j])), i, j)
                      for i in range(block.rows) for j in range(block.cols)
                      if block[i, j] != 0)
        self.swap_rows(s, s + i)
        self.swap_cols(s, s + j)
        return True

    def move_least_edging_to_start(self, s):
        pos, least = None, abs(self.a[s, s])
        for i in range(s + 1, self.rows):
            value = abs(self.a[i, s])
            if value != 0 and (least == 0 or value < least):
                pos, least = ('row', i), value
        for j in range(s + 1, self.cols):
            value = abs(self.a[s, j])
            if value != 0 and (least == 0 or value < least):
                pos, least = ('col', j), value
        if pos and pos[0] == 'row':
            self.swap_rows(s, pos[1])
        elif pos:
            self.swap_cols(s, pos[1])

    def edging_is_zero(self, s):
        return (self.a[s + 1:, s].is_zero_matrix
                and self.a[s, s + 1:].is_zero_matrix)

    def null_edging(self, s):
        while not self.edging_is_zero(s):
            self.move_least_edging_to_start(s)
            pivot = self.a[s, s]
            for i in range(s + 1, self.rows):
                if self.a[i, s] != 0:
                    self.add_row(i, s, -(self.a[i, s] // pivot))
            for j in range(s + 1, self.cols):
                if self.a[s, j] != 0:
                    self.add_col(j, s, -(self.a[s, j] // pivot))
        if self.a[s, s] < 0:
            self.negate_row(s)

    def ensure_pivot_divides(self, s):
        """Adds a row holding an entry the pivot does not divide.

        Returns True when the edging needs another reduction.
        """
        pivot = self.a[s, s]
        for i in range(s + 1, self.rows):
            for j in range(s + 1, self.cols):
                if self.a[i, j] % pivot != 0:
                    self.add_row(s, i, 1)
                    return True
        return False

    def run(self):
        rank = 0
        for s in range(min(self.rows, self.cols)):
            if not self.move_least_to_start(s):
                break
            self.null_edging(s)
            while self.ensure_pivot_divides(s):
                self.null_edging(s)
            rank = s + 1
        diagonal = [int(self.a[i, i]) for i in range(min(self.rows, self.cols))]
        return SmithForm(diagonal, self.left, self.right, rank)


def smith_form(matrix):
    """Smith normal form ``SmithForm(diagonal, left, right, rank)``.

    ``matrix`` is a ``sympy.Matrix`` or a list of integer rows. ``left``
    and ``right`` are unimodular ``sympy.Matrix`` transforms, the first
    ``rank`` diagonal entries are positive and each divides the next; the
    rest are zero.
    """
    return _Reduction(matrix).run()


def invariant_factors(matrix):
    """The non-zero diagonal entries of the Smith normal form."""
    form = smith_form(matrix)
    return form.diagonal[:form.rank]

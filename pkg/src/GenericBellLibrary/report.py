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

import csv
import json
from fractions import Fraction

from .errors import BudgetExceeded, OracleDisagreement, ValidationError
from .lhv import classical_bound

SCHEMA_VERSION = 1
VIOLATION_TOLERANCE = 1e-12
CSV_HEADER = ('N', 'M', 'd', 'quantum', 'classical_num', 'classical_den', 'violation')

VERIFIED = 'verified'
DISAGREEMENT = 'disagreement'
SINGLE_ORACLE = 'single-oracle'
QUANTUM_ONLY = 'quantum-only'
INVALID = 'invalid'


def _fraction(value):
    if value is None:
        return None
    value = Fraction(value)
    return {'fraction': f'{value.numerator}/{value.denominator}',
            'decimal': float(value)}


class ScenarioReport(object):
    """Outcome of running every phase of one ``(N, M, d)`` scenario.

    Phases that could not run are listed in :py:attr:`skipped` with the
    reason, never silently omitted.
    """

    def __init__(self, parties, settings, dim):
        self.parties = parties
        self.settings = settings
        self.dim = dim
        self.quantum_bound = None
        self.quantum_exact = None
        self.eigencheck_residual = None
        self.constraint_count = None
        self.brute_force_l_max = None
        self.congruence_l_max = None
        self.max_subset = ()
        self.witness = None
        self.certificates = []
        self.fallback = None
        self.skipped = {}
        self.errors = []
        self.timing = {}

    @property
    def scenario(self):
        return self.parties, self.settings, self.dim

    @property
    def brute_force_ran(self):
        return self.brute_force_l_max is not None

    @property
    def congruence_ran(self):
        return self.congruence_l_max is not None

    @property
    def agreement(self):
        """False only when both classical oracles ran and differ."""
        if self.brute_force_ran and self.congruence_ran:
            return self.brute_force_l_max == self.congruence_l_max
        return True

    @property
    def l_max(self):
        if self.brute_force_ran:
            return self.brute_force_l_max
        return self.congruence_l_max

    @property
    def classical_bound(self):
        if self.l_max is None:
            return None
        return classical_bound(self.l_max, self.dim)

    @property
    def violation(self):
        if self.classical_bound is None or self.quantum_bound is None:
            return None
        return self.classical_bound < self.quantum_bound - VIOLATION_TOLERANCE

    @property
    def violation_factor(self):
        """``(quantum + 1)/(classical + 1)``, i.e. ``1/L`` for the GHZ bound."""
        if not self.l_max:
            return None
        return 1 / self.l_max

    @property
    def status(self):
        if self.errors:
            return INVALID
        if not self.agreement:
            return DISAGREEMENT
        if self.brute_force_ran and self.congruence_ran:
            return VERIFIED
        if self.brute_force_ran or self.congruence_ran:
            return SINGLE_ORACLE
        return QUANTUM_ONLY

    def to_dict(self, timing=False):
        data = {
            'scenario': {'parties': self.parties, 'settings': self.settings,
                         'dim': self.dim},
            'status': self.status,
            'quantum_bound': self.quantum_bound,
            'quantum_exact': self.quantum_exact,
            'eigencheck_residual': self.eigencheck_residual,
            'constraint_count': self.constraint_count,
            'l_max': _fraction(self.l_max),
            'classical_bound': _fraction(self.classical_bound),
            'violation': self.violation,
            'violation_factor': _fraction(self.violation_factor),
            'max_subset': list(self.max_subset),
            'witness': self.witness.as_dict() if self.witness else None,
            'brute_force_ran': self.brute_force_ran,
            'congruence_ran': self.congruence_ran,
            'agreement': self.agreement,
            'fallback': self.fallback,
            'certificates': [_certificate_dict(c) for c in self.certificates],
            'skipped': dict(self.skipped),
            'errors': list(self.errors),
        }
        if timing:
            data['timing'] = {phase: round(seconds, 6)
                              for phase, seconds in self.timing.items()}
        return data

    def __str__(self):
        classical = self.classical_bound
        return (f'({self.parties}, {self.settings}, {self.dim}): quantum '
                f'{self.quantum_bound}, classical '
                f'{"n/a" if classical is None else classical}, {self.status}')


def _certificate_dict(certificate):
    return {
        'subset': list(certificate.subset),
        'multipliers': list(certificate.multipliers),
        'congruence': str(certificate.reduced_constraint()),
        'g': certificate.g,
        'e': certificate.e,
        'modulus': certificate.modulus,
    }


def reports_to_json(reports, timing=False):
    """One JSON document with ordered keys for the whole run."""
    document = {
        'schema_version': SCHEMA_VERSION,
        'reports': [report.to_dict(timing) for report in reports],
    }
    return json.dumps(document, sort_keys=True, indent=2) + '\n'


def write_json(reports, path, timing=False):
    with open(path, 'w', encoding='UTF-8', newline='\n') as output:
        output.write(reports_to_json(reports, timing))


def csv_rows(reports):
    yield CSV_HEADER
    for report in reports:
        classical = report.classical_bound
        yield (report.parties, report.settings, report.dim,
               '' if report.quantum_bound is None else repr(report.quantum_bound),
               '' if classical is None else classical.numerator,
               '' if classical is None else classical.denominator,
               '' if report.violation is None else str(report.violation).lower())


def write_csv(reports, path):
    with open(path, 'w', encoding='UTF-8', newline='') as output:
        csv.writer(output, lineterminator='\n').writerows(csv_rows(reports))


def summary_table(reports):
    """Human readable table, one row per scenario."""
    header = ('N', 'M', 'd', 'quantum', 'classical', 'L', 'violation factor', 'status')
    rows = [header]
    for report in reports:
        factor = report.violation_factor
        rows.append((
            str(report.parties), str(report.settings), str(report.dim),
            '-' if report.quantum_bound is None else f'{report.quantum_bound:.6g}',
            '-' if report.classical_bound is None else str(report.classical_bound),
            '-' if report.l_max is None else str(report.l_max),
            '-' if factor is None else f'{float(factor):.4f}',
            report.status,
        ))
    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    return '\n'.join('  '.join(cell.rjust(width) for cell, width in zip(row, widths))
                     for row in rows)


def exit_code(reports):
    """0 on success, then 3 for disagreement, 2 for invalid input and 4
    when no classical oracle completed, in that order of precedence."""
    statuses = {report.status for report in reports}
    if DISAGREEMENT in statuses:
        return OracleDisagreement.exit_code
    if INVALID in statuses:
        return ValidationError.exit_code
    if QUANTUM_ONLY in statuses:
        return BudgetExceeded.exit_code
    return 0

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

import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from fractions import Fraction

from .config import (BooleanEntry, ChoiceEntry, Configuration, IntegerEntry,
                     StringEntry)
from .congruence import (DEFAULT_SUBSET_CAP, CongruenceSystem, max_satisfiable_subset,
                         minimal_infeasible_subsets, witness_assignment)
from .errors import (BudgetExceeded, CapacityError, DenseSizeError,
                     GenericBellException, ValidationError)
from .lhv import DEFAULT_BUDGET, brute_force_max, evaluate_L, generate_constraints
from .logger import flush_background_messages, logger
from .quantum import (DEFAULT_DENSE_CAP, TOLERANCE, BellScenario, bell_expectation_ghz,
                      bell_expectation_terms, ghz_eigencheck)
from .report import ScenarioReport, write_json

METHODS = ('brute', 'congruence', 'both')

DEFAULTS = dict(
    method='both',
    budget=DEFAULT_BUDGET,
    dense_cap=DEFAULT_DENSE_CAP,
    subset_cap=DEFAULT_SUBSET_CAP,
    certificates=False,
    certificate_size=None,
    eigencheck=False,
    workers=1,
    timing=False,
)


class _RunnerConfiguration(Configuration):

    def __init__(self, parties, settings, dim, alias=None):
        super(_RunnerConfiguration, self).__init__(
            index=IntegerEntry(None),
            alias=StringEntry(alias),
            parties=IntegerEntry(parties),
            settings=IntegerEntry(settings),
            dim=IntegerEntry(dim),
            method=ChoiceEntry(METHODS, DEFAULTS['method']),
            budget=IntegerEntry(DEFAULTS['budget']),
            dense_cap=IntegerEntry(DEFAULTS['dense_cap']),
            subset_cap=IntegerEntry(DEFAULTS['subset_cap']),
            certificates=BooleanEntry(DEFAULTS['certificates']),
            certificate_size=IntegerEntry(DEFAULTS['certificate_size']),
            eigencheck=BooleanEntry(DEFAULTS['eigencheck']),
            workers=IntegerEntry(DEFAULTS['workers']),
            timing=BooleanEntry(DEFAULTS['timing']),
        )


class ScenarioRunner(object):
    """Runs the quantum and classical phases of one ``(N, M, d)`` scenario.

    The scenario parameters are validated when the runner is created and
    the remaining options can be changed through :py:attr:`config` until
    :py:meth:`run` is called. The last report is kept in :py:attr:`report`.
    """

    def __init__(self, parties, settings, dim, alias=None, **options):
        self.config = _RunnerConfiguration(parties, settings, dim, alias)
        self.config.update(**options)
        self.scenario = BellScenario(parties, settings, dim)
        self.report = None
        self._system = None

    @property
    def constraints(self):
        return generate_constraints(self.scenario.settings, self.scenario.dim,
                                    self.scenario.parties)

    @property
    def system(self):
        if self._system is None:
            self._system = CongruenceSystem(self.constraints)
        return self._system

    def close(self):
        self.report = None
        self._system = None
        flush_background_messages()

    def run(self):
        report = ScenarioReport(*self.scenario.as_tuple())
        report.constraint_count = self.scenario.settings ** (self.scenario.parties - 1)
        self._run_quantum(report)
        if self.config.eigencheck:
            self._run_eigencheck(report)
        else:
            report.skipped['eigencheck'] = 'not requested'
        method = self.config.method
        if method in ('brute', 'both'):
            self._run_brute_force(report)
        else:
            report.skipped['brute_force'] = 'not requested'
        if method in ('congruence', 'both'):
            self._run_congruence(report)
        else:
            report.skipped['congruence'] = 'not requested'
        if self.config.certificates:
            self._run_certificates(report)
        if not report.agreement:
            logger.warn(f"Classical oracles disagree for {self.scenario}: brute force "
                        f"{report.brute_force_l_max}, congruence {report.congruence_l_max}.")
        logger.info(f"Scenario {report}.")
        self.report = report
        return report

    @contextmanager
    def _timed(self, report, phase):
        start = time.perf_counter()
        try:
            yield
        finally:
            report.timing[phase] = time.perf_counter() - start

    def _run_quantum(self, report):
        with self._timed(report, 'quantum'):
            report.quantum_bound = bell_expectation_ghz(self.scenario)
            report.quantum_exact = bell_expectation_terms(self.scenario).is_real_integer()
        if abs(report.quantum_bound - (self.scenario.dim - 1)) > TOLERANCE:
            logger.warn(f"GHZ expectation {report.quantum_bound!r} of {self.scenario} "
                        f"differs from d-1 = {self.scenario.dim - 1}.")

    def _run_eigencheck(self, report):
        try:
            with self._timed(report, 'eigencheck'):
                report.eigencheck_residual = ghz_eigencheck(self.scenario,
                                                            self.config.dense_cap)
        except DenseSizeError as error:
            report.skipped['eigencheck'] = str(error)
            logger.warn(f"Eigencheck of {self.scenario} skipped: {error}")

    def _run_brute_force(self, report):
        try:
            with self._timed(report, 'brute_force'):
                optimum = brute_force_max(self.scenario.settings, self.scenario.dim,
                                          self.scenario.parties, self.config.budget,
                                          self.config.workers)
        except BudgetExceeded as error:
            report.skipped['brute_force'] = str(error)
            if self.config.method == 'both':
                report.fallback = 'congruence-only'
                logger.warn(f"{error} Falling back to the congruence oracle only.")
            else:
                logger.warn(f"Brute force for {self.scenario} skipped: {error}")
            return
        report.brute_force_l_max = optimum.l_max
        report.witness = optimum.witness

    def _run_congruence(self, report):
        try:
            with self._timed(report, 'congruence'):
                best = max_satisfiable_subset(self.system, self.config.subset_cap)
        except CapacityError as error:
            report.skipped['congruence'] = str(error)
            logger.warn(f"Congruence oracle for {self.scenario} skipped: {error}")
            return
        assignment = witness_assignment(best.witness, *self.scenario.as_tuple())
        l_value = Fraction(best.size, len(self.system))
        if evaluate_L(self.constraints, assignment) < l_value:
            raise GenericBellException(
                f"Congruence witness {assignment} does not satisfy its subset "
                f"{best.subset}.")
        report.congruence_l_max = l_value
        report.max_subset = best.subset
        if report.witness is None:
            report.witness = assignment

    def _run_certificates(self, report):
        try:
            with self._timed(report, 'certificates'):
                report.certificates = minimal_infeasible_subsets(
                    self.system, self.config.certificate_size, self.config.subset_cap)
        except CapacityError as error:
            report.skipped['certificates'] = str(error)
            logger.warn(f"Certificates for {self.scenario} skipped: {error}")


def run_scenario(parties, settings, dim, **options):
    """Runs one scenario and returns its :py:class:`ScenarioReport`.

    Invalid parameters give a report with status ``invalid`` instead of
    an exception, so sweeps record them per scenario. Errors raised while
    running are recorded in the report the same way.
    """
    try:
        runner = ScenarioRunner(parties, settings, dim, **options)
    except ValidationError as error:
        logger.warn(f"Scenario ({parties}, {settings}, {dim}) is invalid: {error}")
        report = ScenarioReport(parties, settings, dim)
        report.errors.append(str(error))
        return report
    try:
        return runner.run()
    except GenericBellException as error:
        logger.warn(f"Scenario {runner.scenario} failed: {error}")
        report = ScenarioReport(*runner.scenario.as_tuple())
        report.errors.append(str(error))
        return report


def sweep(settings_list, dims, output=None, parties=3, **options):
    """One report per ``(M, d)`` pair, ``M`` varying slowest.

    Scenarios run concurrently on ``workers`` threads; the result order
    does not depend on scheduling. When ``output`` is given the reports
    are written there as JSON.
    """
    workers = max(1, int(options.get('workers') or 1))
    pairs = [(settings, dim) for settings in settings_list for dim in dims]
    logger.info(f"Sweeping {len(pairs)} scenario(s) with {workers} worker(s).")
    with ThreadPoolExecutor(max_workers=workers) as executor:
        reports = list(executor.map(
            lambda pair: run_scenario(parties, pair[0], pair[1], **options), pairs))
    flush_background_messages()
    if output:
        write_json(reports, output, bool(options.get('timing')))
        logger.info(f"Wrote {len(reports)} report(s) to {output}.")
    return reports

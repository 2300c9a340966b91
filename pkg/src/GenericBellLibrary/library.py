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

from fractions import Fraction

from robot.api.deco import keyword, library
from robot.utils import is_string, plural_or_not, secs_to_timestr

from .config import (
    BooleanEntry,
    ChoiceEntry,
    Configuration,
    IntegerEntry,
    IntegerListEntry,
    LogLevelEntry,
    RangeEntry,
)
from .congruence import (
    CongruenceSystem,
    format_subset,
    linear_congruence_solvable,
    max_satisfiable_subset,
    minimal_infeasible_subsets,
)
from .errors import OracleDisagreement
from .lhv import brute_force_max, generate_constraints
from .logger import flush_background_messages, logger
from .quantum import BellScenario, bell_expectation_ghz, correlation, ghz_eigencheck
from .report import DISAGREEMENT, summary_table
from .runner import DEFAULTS, METHODS, ScenarioRunner, sweep
from .scenariocache import ScenarioCache
from .version import VERSION


@library(version=VERSION, scope="GLOBAL")
class GenericBellLibrary:
    """GenericBellLibrary is a Robot Framework test library for generic
    multi-setting Bell inequalities of GHZ states.

    The library computes, for ``N`` parties each measuring one of ``M``
    settings with ``d`` outcomes:

    - the quantum value of the generic Bell operator on the GHZ state,
      which is always ``d-1`` (see `Get GHZ Expectation`),
    - the classical (local hidden variable) bound ``L*d-1``, where ``L`` is
      the largest fraction of delta constraints a deterministic outcome
      table can satisfy. ``L`` is found both by exhaustive search and by
      solving linear congruences modulo ``d`` (see `Classical oracles`),
    - the closed loops of constraints that cannot hold together, each with
      a certificate congruence (see `Get Minimal Infeasible Subsets`).

    == Table of contents ==

    - `Scenarios`
    - `Configuration`
    - `Classical oracles`
    - `Exact rationals`
    - `Example`
    - `Importing`
    - `Keywords`

    = Scenarios =

    A scenario is the triple ``(N, M, d)``: parties, settings per party and
    outcomes per setting. All three must be at least ``2``.

    Scenarios are opened with `Open Scenario`, which returns an index.
    Several scenarios can be open at the same time and the active one is
    changed with `Switch Scenario` using the index or an alias. Keywords
    such as `Run Scenario` and `Classical Bound Should Be` operate on the
    active scenario. Keywords taking ``parties``, ``settings`` and ``dim``
    as arguments, like `Get Classical Maximum`, do not need an open
    scenario.

    = Configuration =

    Options can be given when `importing` the library, changed for
    subsequently opened scenarios with `Set Default Configuration` or for
    the active scenario with `Set Scenario Configuration`.

    == Method ==

    Which classical oracles to run: ``brute``, ``congruence`` or ``both``
    (default). With ``both``, a scenario whose exhaustive search would
    exceed `budget` is computed with the congruence oracle only and the
    fallback is recorded in the report.

    == Budget ==

    Maximum number of deterministic assignments ``d^(N*M)`` the brute force
    oracle may cover. Default ``10**8``. Strings like ``10**6`` and
    ``1_000_000`` are accepted.

    == Dense cap ==

    Maximum dimension ``d^N`` of the dense matrices built for the
    eigenvector check. Default ``4096``.

    == Subset cap ==

    Maximum number of constraints for subset enumeration in the congruence
    oracle. Default ``24``.

    == Certificates ==

    When true, `Run Scenario` also enumerates the minimal infeasible
    subsets, at most ``certificate_size`` constraints each when that is
    given.

    == Eigencheck ==

    When true, `Run Scenario` builds the dense Bell operator and checks
    that the GHZ state is its eigenvector with eigenvalue ``d-1``.

    == Workers ==

    Number of threads for the brute force search and for `Run Sweep`.
    Results do not depend on it.

    == Loglevel ==

    Level used for messages logged by the library keywords: ``TRACE``,
    ``DEBUG``, ``INFO`` (default), ``WARN`` or ``NONE``. Messages from the
    oracles below this level are not logged, and ``NONE`` disables logging
    altogether. The level is shared by all imports of the library.

    = Classical oracles =

    The brute force oracle enumerates every outcome table with the first
    outcome of party 1 fixed to 0, which is exact because shifting party
    1 up and party 2 down by the same amount satisfies the same
    constraints. The congruence oracle decides solvability of constraint
    subsets with the integer Smith normal form, which is exact also for
    composite ``d``. When both run, their values of ``L`` must agree;
    otherwise `Run Scenario` fails with an oracle disagreement.

    = Exact rationals =

    ``L`` and the classical bound are rationals. Keywords return them as
    Python ``Fraction`` objects and the ``Should Be`` keywords accept
    strings like ``7/9`` or ``4/3``.

    = Example =

    | ***** Settings *****
    | Library             GenericBellLibrary    method=both
    |
    | ***** Test Cases *****
    | Three Settings Violate Locality In Dimension Three
    |     `Open Scenario`    3    3    3
    |     `Run Scenario`
    |     `Quantum Bound Should Be`    2
    |     `Classical Bound Should Be`    4/3
    |     `Violation Should Be Detected`
    |     [Teardown]    `Close All Scenarios`
    """

    DEFAULT_METHOD = DEFAULTS['method']
    DEFAULT_BUDGET = DEFAULTS['budget']
    DEFAULT_DENSE_CAP = DEFAULTS['dense_cap']
    DEFAULT_SUBSET_CAP = DEFAULTS['subset_cap']
    DEFAULT_LOGLEVEL = "INFO"

    def __init__(
        self,
        method=DEFAULT_METHOD,
        budget=DEFAULT_BUDGET,
        dense_cap=DEFAULT_DENSE_CAP,
        subset_cap=DEFAULT_SUBSET_CAP,
        certificates=False,
        certificate_size=None,
        eigencheck=False,
        workers=1,
        loglevel=DEFAULT_LOGLEVEL,
    ):
        """GenericBellLibrary allows some import time `configuration`.

        If the library is imported without any arguments, the library
        defaults are used:

        | Library | GenericBellLibrary |

        Only arguments that are given are changed. In this example the brute
        force `budget` is lowered so that larger scenarios use the
        congruence oracle only:

        | Library | GenericBellLibrary | budget=10**6 |

        Multiple settings are also possible:

        | Library | GenericBellLibrary | method=congruence | certificates=True | loglevel=DEBUG |
        """
        self._scenarios = ScenarioCache()
        self._config = _DefaultConfiguration(
            method or self.DEFAULT_METHOD,
            budget or self.DEFAULT_BUDGET,
            dense_cap or self.DEFAULT_DENSE_CAP,
            subset_cap or self.DEFAULT_SUBSET_CAP,
            certificates,
            certificate_size,
            eigencheck,
            workers or 1,
            loglevel or self.DEFAULT_LOGLEVEL,
        )
        logger.set_level(self._config.loglevel)

    @property
    def current(self):
        return self._scenarios.current

    @keyword(tags=("configuration",))
    def set_default_configuration(
        self,
        method=None,
        budget=None,
        dense_cap=None,
        subset_cap=None,
        certificates=None,
        certificate_size=None,
        eigencheck=None,
        workers=None,
        loglevel=None,
    ):
        """Update the default `configuration`.

        Please note that using this keyword does not affect the already
        opened scenarios. Use `Set Scenario Configuration` to configure the
        active scenario.

        Only parameters whose value is other than ``None`` are updated.

        | `Set Default Configuration` | method=brute     |
        | `Open Scenario`             | 3                | 2 | 4 |
        | ${config}=                  | `Get Scenario`   |
        | `Should Be Equal`           | ${config.method} | brute |
        """
        self._config.update(
            method=method,
            budget=budget,
            dense_cap=dense_cap,
            subset_cap=subset_cap,
            certificates=certificates,
            certificate_size=certificate_size,
            eigencheck=eigencheck,
            workers=workers,
            loglevel=loglevel,
        )
        logger.set_level(self._config.loglevel)

    @keyword(tags=("configuration",))
    def set_scenario_configuration(
        self,
        method=None,
        budget=None,
        dense_cap=None,
        subset_cap=None,
        certificates=None,
        certificate_size=None,
        eigencheck=None,
        workers=None,
    ):
        """Update the `configuration` of the active scenario.

        Only parameters whose value is other than ``None`` are updated.
        Using the keyword does not affect the other scenarios:

        | `Open Scenario`              | 3              | 3 | 6 |
        | `Set Scenario Configuration` | method=congruence  |
        | `Run Scenario`               |                | # Congruence oracle only |
        """
        self.current.config.update(
            method=method,
            budget=budget,
            dense_cap=dense_cap,
            subset_cap=subset_cap,
            certificates=certificates,
            certificate_size=certificate_size,
            eigencheck=eigencheck,
            workers=workers,
        )

    @keyword(tags=("scenario",))
    def open_scenario(
        self,
        parties: int,
        settings: int,
        dim: int,
        alias=None,
        method=None,
        budget=None,
        certificates=None,
        eigencheck=None,
    ):
        """Opens a new ``(parties, settings, dim)`` scenario.

        The new scenario is made active. Possible existing scenarios are
        left open in the background.

        This keyword returns the index of the new scenario which can be
        used later to switch back to it. Indices start from ``1`` and are
        reset when `Close All Scenarios` is used.

        Optional ``alias`` can be given for the scenario and can be used
        for switching between scenarios, similarly as the index.

        Options not given here are taken from the defaults set on
        `importing` or with `Set Default Configuration`.

        | ${index}=       | `Open Scenario` | 3 | 2 | 4 |
        | `Open Scenario` | 3               | 3 | 3 | alias=qutrit | certificates=True |

        Fails if any of the numbers is smaller than ``2``.
        """
        options = {name: value for name, value in self._config.as_dict().items()
                   if name != 'loglevel'}
        runner = ScenarioRunner(parties, settings, dim, alias, **options)
        runner.config.update(method=method, budget=budget, certificates=certificates,
                             eigencheck=eigencheck)
        index = self._scenarios.register(runner, alias)
        runner.config.update(index=index)
        self._log(f"Opened scenario {runner.scenario} with index {index}.")
        return index

    @keyword(tags=("scenario",))
    def switch_scenario(self, index_or_alias):
        """Switches the active scenario by index or alias.

        This keyword returns the index of the previously active scenario.

        | ${first}=         | `Open Scenario` | 3 | 2 | 2 |
        | `Open Scenario`   | 3               | 3 | 3 | alias=qutrit |
        | `Switch Scenario` | ${first}        |
        | `Switch Scenario` | qutrit          |
        """
        old_index = self._scenarios.current_index
        self._scenarios.switch(index_or_alias)
        return old_index

    @keyword(tags=("scenario",))
    def close_all_scenarios(self):
        """Closes all open scenarios.

        After this keyword the indices returned by `Open Scenario` start
        from ``1`` again. Intended for suite or test teardown.
        """
        self._scenarios.close_all()

    @keyword(tags=("scenario",))
    def get_scenario(self, index_or_alias=None):
        """Returns the configuration of a scenario.

        If ``index_or_alias`` is not given, the active scenario is used.
        The returned object has the attributes ``index``, ``alias``,
        ``parties``, ``settings``, ``dim`` and the `configuration` options.
        """
        if not index_or_alias:
            index_or_alias = self._scenarios.current_index
        config = self._scenarios.get_scenario(index_or_alias).config
        self._log(str(config), self._config.loglevel)
        return config

    @keyword(tags=("scenario",))
    def run_scenario(self):
        """Runs every configured phase of the active scenario.

        The quantum bound is always computed. Classical oracles run as
        selected by `method`; a phase that cannot run because of `budget`,
        `dense cap` or `subset cap` is recorded as skipped with the
        reason.

        Returns a report object with, among others, the attributes
        ``quantum_bound``, ``l_max``, ``classical_bound``, ``violation``,
        ``max_subset``, ``certificates``, ``skipped`` and ``status``.
        The status is ``verified`` when both oracles ran and agree,
        ``single-oracle`` when one ran and ``quantum-only`` when neither
        did.

        Fails with an oracle disagreement if both oracles ran and returned
        different values, which always indicates a bug.

        | `Open Scenario`   | 3                | 3        | 3 |
        | ${report}=        | `Run Scenario`   |
        | `Should Be Equal` | ${report.status} | verified |
        """
        report = self.current.run()
        flush_background_messages()
        for phase, reason in report.skipped.items():
            if reason != 'not requested':
                self._log(f"Phase '{phase}' skipped: {reason}", "WARN")
        if report.timing:
            self._log(f"Run took {secs_to_timestr(sum(report.timing.values()))}.")
        if report.status == DISAGREEMENT:
            raise OracleDisagreement(
                f"Brute force L = {report.brute_force_l_max} but congruence "
                f"L = {report.congruence_l_max} for {self.current.scenario}.")
        return report

    def _last_report(self):
        report = self.current.report
        if report is None:
            raise AssertionError("Scenario has not been run. Use 'Run Scenario' first.")
        return report

    @keyword(tags=("assertion",))
    def quantum_bound_should_be(self, expected, tolerance=1e-9):
        """Fails if the quantum bound of the last run differs from ``expected``.

        Comparison allows ``tolerance`` of absolute error.
        """
        actual = self._last_report().quantum_bound
        if abs(actual - float(Fraction(str(expected)))) > float(tolerance):
            raise AssertionError(f"Quantum bound {actual!r} is not {expected}.")

    @keyword(tags=("assertion",))
    def classical_bound_should_be(self, expected):
        """Fails unless the classical bound is exactly ``expected``.

        ``expected`` can be an integer or a fraction such as ``4/3``.
        """
        actual = self._last_report().classical_bound
        if actual != _as_fraction(expected):
            raise AssertionError(f"Classical bound {actual} is not {expected}.")

    @keyword(tags=("assertion",))
    def l_max_should_be(self, expected):
        """Fails unless the largest satisfiable fraction ``L`` is ``expected``."""
        actual = self._last_report().l_max
        if actual != _as_fraction(expected):
            raise AssertionError(f"L is {actual}, expected {expected}.")

    @keyword(tags=("assertion",))
    def violation_should_be_detected(self):
        """Fails unless the quantum bound exceeds the classical bound."""
        report = self._last_report()
        if not report.violation:
            raise AssertionError(
                f"No violation in {self.current.scenario}: quantum "
                f"{report.quantum_bound}, classical {report.classical_bound}.")

    @keyword(tags=("assertion",))
    def violation_should_not_be_detected(self):
        report = self._last_report()
        if report.violation is None or report.violation:
            raise AssertionError(
                f"Expected no violation in {self.current.scenario}: quantum "
                f"{report.quantum_bound}, classical {report.classical_bound}.")

    @keyword(tags=("classical",))
    def get_constraints(self, settings: int, dim: int, parties: int = 3):
        """Returns the delta constraints of the classical Bell function.

        There is one constraint per setting vector whose sum is divisible
        by ``settings``, in lexicographic order, ``settings**(parties-1)``
        in total. Variables are named ``a1``, ``b1``, ... for settings
        ``0``, ``1``, ... of party ``1``.

        | @{constraints}= | `Get Constraints`   | 2 | 4 |
        | Length Should Be | ${constraints}     | 4 |
        """
        constraints = generate_constraints(settings, dim, parties)
        self._log('\n'.join(str(c) for c in constraints), self._config.loglevel)
        return constraints

    @keyword(tags=("classical",))
    def get_classical_maximum(self, settings: int, dim: int, parties: int = 3,
                              budget=None):
        """Returns ``L`` and a witness assignment found by exhaustive search.

        Fails if ``dim**(parties*settings)`` exceeds ``budget`` (the
        configured `budget` by default).

        | ${l}    | ${witness}=  | `Get Classical Maximum` | 2 | 2 |
        | `Should Be Equal As Strings` | ${l} | 3/4 |
        """
        optimum = brute_force_max(settings, dim, parties,
                                  int(budget or self._config.budget),
                                  self._config.workers)
        flush_background_messages()
        self._log(f"L = {optimum.l_max} with {optimum.witness}.")
        return optimum.l_max, optimum.witness

    @keyword(tags=("classical",))
    def get_max_satisfiable_subset(self, settings: int, dim: int, parties: int = 3):
        """Returns the size, indices and witness of the largest satisfiable
        constraint subset, as computed by the congruence oracle."""
        system = CongruenceSystem(generate_constraints(settings, dim, parties))
        best = max_satisfiable_subset(system, self._config.subset_cap)
        self._log(f"{best.size} of {len(system)} constraint"
                  f"{plural_or_not(len(system))} satisfiable: {best.subset}.")
        self._log(format_subset(system, best.subset), self._config.loglevel)
        return best

    @keyword(tags=("classical",))
    def get_minimal_infeasible_subsets(self, settings: int, dim: int,
                                       parties: int = 3, max_size=None):
        """Returns the inclusion-minimal sets of constraints that cannot hold
        together.

        Each item is a certificate with the attributes ``subset``
        (constraint indices as returned by `Get Constraints`),
        ``multipliers``, ``g``, ``e`` and ``modulus``: the weighted sum of
        the constraints reduces to ``g*y + e = 0 (mod modulus)``, which has
        no integer solution.

        ``max_size`` limits the size of the subsets examined.

        | @{loops}=        | `Get Minimal Infeasible Subsets` | 2 | 4 |
        | Length Should Be | ${loops}                         | 1 |
        """
        system = CongruenceSystem(generate_constraints(settings, dim, parties))
        certificates = minimal_infeasible_subsets(
            system, None if max_size is None else int(max_size), self._config.subset_cap)
        for certificate in certificates:
            self._log(f"{certificate.subset}: {certificate}", self._config.loglevel)
        return certificates

    @keyword(tags=("quantum",))
    def get_correlation(self, parties: int, settings: int, dim: int, n: int, *eta):
        """Returns the GHZ correlation function ``E^n(eta)`` as a complex number.

        ``eta`` are the settings of the parties, one per party.

        | ${e}= | `Get Correlation` | 3 | 2 | 4 | 1 | 0 | 1 | 1 |
        """
        value = correlation(BellScenario(parties, settings, dim), n,
                            [int(e) for e in eta])
        self._log(f"E^{n}{tuple(int(e) for e in eta)} = {value}.")
        return value

    @keyword(tags=("quantum",))
    def get_ghz_expectation(self, parties: int, settings: int, dim: int):
        """Returns the expectation value of the generic Bell operator in the
        GHZ state, computed from exact phases. It equals ``dim - 1``."""
        return bell_expectation_ghz(BellScenario(parties, settings, dim))

    @keyword(tags=("quantum",))
    def get_eigencheck_residual(self, parties: int, settings: int, dim: int,
                                dense_cap=None):
        """Returns ``||B|GHZ> - (d-1)|GHZ>||`` computed with dense matrices.

        Fails if ``dim**parties`` exceeds ``dense_cap`` (the configured
        `dense cap` by default).
        """
        return ghz_eigencheck(BellScenario(parties, settings, dim),
                              int(dense_cap or self._config.dense_cap))

    @keyword(tags=("classical",))
    def linear_congruence_should_be_solvable(self, a: int, b: int, m: int):
        """Fails unless ``a*x = b (mod m)`` has an integer solution."""
        if not linear_congruence_solvable(a, b, m):
            raise AssertionError(f"{a}x = {b} (mod {m}) has no solution.")

    @keyword(tags=("classical",))
    def linear_congruence_should_not_be_solvable(self, a: int, b: int, m: int):
        if linear_congruence_solvable(a, b, m):
            raise AssertionError(f"{a}x = {b} (mod {m}) has a solution.")

    @keyword(tags=("sweep",))
    def run_sweep(self, settings_list, dims, parties: int = 3, output=None):
        """Runs one scenario per ``settings`` and ``dim`` combination.

        ``settings_list`` is a list or a string like ``2,3,4`` and ``dims``
        a range like ``2..6``. Returns the reports, ``settings`` varying
        slowest. When ``output`` is given, the reports are also written
        there as JSON. Invalid scenarios get a report with status
        ``invalid``; they do not stop the sweep.

        | @{reports}=      | `Run Sweep` | 2,3,4 | 2..6 |
        | Length Should Be | ${reports}  | 15    |
        """
        grid = _SweepConfiguration(settings_list, dims)
        options = {name: value for name, value in self._config.as_dict().items()
                   if name != "loglevel"}
        reports = sweep(grid.settings, grid.dims, output, parties, **options)
        self._log(summary_table(reports), self._config.loglevel)
        return reports

    def _log(self, msg, level="INFO"):
        level = self._active_loglevel(level)
        if level != "NONE":
            msg = msg.strip()
            if not msg:
                return
            if logger:
                logger.write(msg, level)
            else:
                print(f"*{level}* {msg}")

    def _active_loglevel(self, level):
        if level is None:
            return self._config.loglevel
        if is_string(level) and level.upper() in [
            "TRACE",
            "DEBUG",
            "INFO",
            "WARN",
            "HTML",
            "NONE",
        ]:
            return level.upper()
        raise AssertionError(f"Invalid log level '{level}'.")


def _as_fraction(value):
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError):
        raise AssertionError(f"Invalid rational '{value}'.")


class _DefaultConfiguration(Configuration):

    def __init__(
        self,
        method,
        budget,
        dense_cap,
        subset_cap,
        certificates,
        certificate_size,
        eigencheck,
        workers,
        loglevel,
    ):
        super(_DefaultConfiguration, self).__init__(
            method=ChoiceEntry(METHODS, method),
            budget=IntegerEntry(budget),
            dense_cap=IntegerEntry(dense_cap),
            subset_cap=IntegerEntry(subset_cap),
            certificates=BooleanEntry(certificates),
            certificate_size=IntegerEntry(certificate_size),
            eigencheck=BooleanEntry(eigencheck),
            workers=IntegerEntry(workers),
            loglevel=LogLevelEntry(loglevel),
        )


class _SweepConfiguration(Configuration):

    def __init__(self, settings, dims):
        super(_SweepConfiguration, self).__init__(
            settings=IntegerListEntry(settings),
            dims=RangeEntry(dims),
        )

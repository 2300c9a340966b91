import io
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from contextlib import redirect_stderr, redirect_stdout
from fractions import Fraction
from functools import reduce
from unittest import mock

import numpy as np
from robot.api.deco import keyword, library
from robot.libraries.BuiltIn import BuiltIn

from GenericBellLibrary import cli, runner
from GenericBellLibrary.congruence import (
    CongruenceSystem,
    linear_congruence_solvable,
    max_satisfiable_subset,
    minimal_infeasible_subsets,
    solve_system,
    system_solvable,
)
from GenericBellLibrary.cyclotomic import CyclotomicSum, PhaseExponent, to_complex
from GenericBellLibrary.lhv import (
    ClassicalOptimum,
    LhvAssignment,
    brute_force_max,
    evaluate_L,
    generate_constraints,
    lhv_bell_value,
)
from GenericBellLibrary.logger import logger
from GenericBellLibrary.observables import (
    build_fourier,
    build_phase_shift,
    build_X_nu,
    build_Y,
    build_Z,
    eigenphases,
    power_X_nu,
)
from GenericBellLibrary.quantum import (
    BellScenario,
    GhzState,
    bell_expectation_ghz,
    bell_operator_dense,
    correlation,
    ghz_eigencheck,
)
from GenericBellLibrary.report import ScenarioReport, exit_code
from GenericBellLibrary.smith import integer_matrix, invariant_factors, smith_form

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _ints(value):
    if isinstance(value, str):
        if '..' in value:
            start, end = value.split('..')
            return list(range(int(start), int(end) + 1))
        return [int(item) for item in value.split(',') if item.strip()]
    return [int(item) for item in value]


def _nus(settings):
    values = {Fraction(1, 2)}
    for m in settings:
        values.update(Fraction(k, m) for k in range(m))
    return sorted(values)


def _close(actual, expected, tolerance, message):
    if not np.allclose(actual, expected, atol=float(tolerance), rtol=0):
        raise AssertionError(message)


@library(scope="GLOBAL")
class ReferenceChecks:
    """Reference computations the library keywords do not expose."""

    @keyword
    def phase(self, numerator, order):
        return PhaseExponent(int(numerator), int(order))

    @keyword
    def phase_should_be(self, phase, numerator, order):
        expected = PhaseExponent(int(numerator), int(order))
        if phase != expected or phase.order != expected.order:
            raise AssertionError(f"{phase!r} != {expected!r}")

    @keyword
    def complex_should_be(self, value, real, imag, tolerance=1e-12):
        if abs(complex(value) - complex(float(real), float(imag))) > float(tolerance):
            raise AssertionError(f"{value} != {real} + {imag}i")

    @keyword
    def evaluate_cyclotomic_sum(self, order, *numerators):
        return CyclotomicSum(int(order), [int(n) for n in numerators]).evaluate()

    @keyword
    def phase_products_should_match_complex_products(self, max_order=12):
        orders = range(1, int(max_order) + 1)
        for a_order, b_order in itertools.product(orders, repeat=2):
            for a_num, b_num in itertools.product(range(a_order), range(b_order)):
                a, b = PhaseExponent(a_num, a_order), PhaseExponent(b_num, b_order)
                product = a * b
                if abs(to_complex(product) - to_complex(a) * to_complex(b)) > 1e-12:
                    raise AssertionError(f"{a!r} * {b!r} = {product!r}")
                if product.order != a_order * b_order // math.gcd(a_order, b_order):
                    raise AssertionError(f"Unexpected order of {a!r} * {b!r}.")
                if not (a ** a_order).is_identity():
                    raise AssertionError(f"{a!r} ** {a_order} is not identity.")
                if abs(abs(to_complex(a)) - 1) > 1e-12:
                    raise AssertionError(f"{a!r} does not have unit modulus.")

    @keyword
    def roots_of_unity_should_sum_to_zero(self, dims="2..24"):
        for d in _ints(dims):
            value = CyclotomicSum(d, range(d)).evaluate()
            if abs(value) > 1e-12:
                raise AssertionError(f"Sum of {d}-th roots is {value}.")

    @keyword
    def sum_should_not_depend_on_order_or_antipodes(self, order=12):
        order = int(order)
        numerators = [0, 1, 1, 5, 7, 11, 3]
        base = CyclotomicSum(order, numerators).evaluate()
        for permutation in itertools.islice(itertools.permutations(numerators), 200):
            if abs(CyclotomicSum(order, permutation).evaluate() - base) > 1e-12:
                raise AssertionError(f"Order {permutation} changes the sum.")
        for numerator in range(order):
            padded = CyclotomicSum(order, numerators).add(numerator).add(
                numerator + order // 2)
            if abs(padded.evaluate() - base) > 1e-12:
                raise AssertionError(f"Antipode pair {numerator} changes the sum.")

    @keyword
    def phase_shift(self, dim, nu, settings=None):
        return build_phase_shift(int(dim), nu, settings)

    @keyword
    def shifted_observable(self, dim, nu, settings=None):
        return build_X_nu(int(dim), nu, settings)

    @keyword
    def raising_operator(self, dim, nu, n, settings=None):
        return power_X_nu(int(dim), nu, int(n), settings)

    @keyword
    def dense_matrix_should_be(self, operator, *rows):
        entries = operator.dense().entries if hasattr(operator, 'dense') else operator.entries
        expected = np.array([[complex(value.strip()) for value in row.split(',')] for row in rows])
        _close(entries, expected, 1e-10, f"Got\n{entries}\nexpected\n{expected}")

    @keyword
    def pauli_reductions_should_hold(self):
        _close(build_Z(2).dense().entries, SIGMA_Z, 1e-15, "Z is not sigma_z.")
        _close(build_X_nu(2, 0).dense().entries, SIGMA_X, 1e-15, "X(0) is not sigma_x.")
        y = build_X_nu(2, Fraction(1, 2)).dense().entries
        if not (np.allclose(y, SIGMA_Y, atol=1e-15) or np.allclose(y, -SIGMA_Y, atol=1e-15)):
            raise AssertionError(f"X(1/2) is not sigma_y up to sign:\n{y}")
        if build_Y(2) != build_X_nu(2, Fraction(1, 2)):
            raise AssertionError("Y is not X(1/2).")
        hadamard = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
        _close(build_fourier(2).entries, hadamard, 1e-12, "F is not Hadamard.")

    @keyword
    def observables_should_be_unitary(self, dims="2..9", settings="2,3,4"):
        for d in _ints(dims):
            _close(build_fourier(d).adjoint().entries @ build_fourier(d).entries,
                   np.eye(d), 1e-10, f"Fourier transform of {d} is not unitary.")
            for nu in _nus(_ints(settings)):
                for n in range(1, d):
                    dense = power_X_nu(d, nu, n).dense()
                    if not dense.is_unitary(1e-10) or dense.nonzero_count() != d:
                        raise AssertionError(f"X^{n}({nu}) in {d} dimensions.")
                if not build_phase_shift(d, nu).dense().is_unitary(1e-10):
                    raise AssertionError(f"P({nu}) in {d} dimensions.")

    @keyword
    def powers_should_match_matrix_powers(self, dims="2..7"):
        for d in _ints(dims):
            for nu in (Fraction(0), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2),
                       Fraction(2, 3), Fraction(3, 4)):
                single = build_X_nu(d, nu).dense().entries
                for n in range(1, d):
                    _close(power_X_nu(d, nu, n).dense().entries,
                           np.linalg.matrix_power(single, n), 1e-10,
                           f"X^{n}({nu}) differs from the matrix power in {d} dimensions.")
                    exact = power_X_nu(d, nu, n) @ power_X_nu(d, nu, d - n)
                    if not exact.is_diagonal():
                        raise AssertionError(f"X^{n} X^{d - n} is not diagonal.")
                    product = exact.dense()
                    _close(np.abs(np.diag(product.entries)), 1, 1e-10,
                           f"X^{n} X^{d - n} has non-unit diagonal.")
                if not build_X_nu(d, nu).power(d).equals_up_to_phase(build_Z(d).power(0)):
                    raise AssertionError(f"X({nu})^{d} is not a multiple of identity.")

    @keyword
    def fourier_should_map_z_to_shift(self, dims="2..9"):
        for d in _ints(dims):
            fourier = build_fourier(d)
            conjugated = fourier @ build_Z(d).dense() @ fourier.adjoint()
            _close(conjugated.entries, build_X_nu(d, 0).dense().entries, 1e-10,
                   f"F Z F^dagger is not X in {d} dimensions.")

    @keyword
    def shifted_observable_should_be_conjugated_shift(self, dims="2..7", settings="2,3,4"):
        for d in _ints(dims):
            shift = build_X_nu(d, 0).dense()
            for nu in _nus(_ints(settings)):
                p = build_phase_shift(d, nu).dense()
                _close(build_X_nu(d, nu).dense().entries,
                       (p @ shift @ p.adjoint()).entries, 1e-10,
                       f"X({nu}) is not P X P^dagger in {d} dimensions.")

    @keyword
    def spectra_should_match_dense_eigenvalues(self, dims="2..7", settings="2,3,4"):
        for d in _ints(dims):
            for m in _ints(settings):
                for k in range(m):
                    op = build_X_nu(d, Fraction(k, m), m)
                    exact = [to_complex(p) for p in eigenphases(op)]
                    dense = op.dense().eigenvalues()
                    for value in exact:
                        if np.min(np.abs(dense - value)) > 1e-9:
                            raise AssertionError(f"{value} not in spectrum of X({k}/{m}).")
                    for value in dense:
                        turns = np.angle(value) / (2 * np.pi) * m * d
                        if abs(turns - round(turns)) > 1e-9:
                            raise AssertionError(f"{value} is not a {m * d}-th root of unity.")
            roots = eigenphases(build_X_nu(d, 0))
            if sorted(p.turns for p in roots) != [Fraction(k, d) for k in range(d)]:
                raise AssertionError(f"Spectrum of X in {d} dimensions: {roots}.")

    @keyword
    def quantum_grid_should_hold(self, parties="2,3,4", settings="2,3,4", dims="2..6",
                                 cap=4096):
        checked = 0
        for n_parties, m, d in itertools.product(_ints(parties), _ints(settings), _ints(dims)):
            if d ** n_parties > int(cap):
                continue
            scenario = BellScenario(n_parties, m, d)
            value = bell_expectation_ghz(scenario)
            if abs(value - (d - 1)) > 1e-9:
                raise AssertionError(f"{scenario}: GHZ expectation {value}.")
            residual = ghz_eigencheck(scenario, int(cap))
            if residual >= 1e-9:
                raise AssertionError(f"{scenario}: residual {residual}.")
            checked += 1
        return checked

    @keyword
    def exact_and_dense_expectation_should_agree(self, parties, settings, dim):
        scenario = BellScenario(parties, settings, dim)
        state = GhzState(scenario.parties, scenario.dim).dense()
        dense = np.vdot(state, bell_operator_dense(scenario) @ state)
        if abs(dense - bell_expectation_ghz(scenario)) > 1e-9:
            raise AssertionError(f"{scenario}: dense {dense}.")
        if abs(np.linalg.norm(state) - 1) > 1e-12:
            raise AssertionError("GHZ state is not normalized.")

    @keyword
    def analytic_filter_should_not_change_operator(self, parties, settings, dim):
        scenario = BellScenario(parties, settings, dim)
        literal = bell_operator_dense(scenario)
        filtered = bell_operator_dense(scenario, analytic_filter=True)
        if not literal.allclose(filtered, 1e-9):
            raise AssertionError(f"{scenario}: filtered operator differs.")
        if np.linalg.norm(literal.entries, 2) < scenario.dim - 1 - 1e-9:
            raise AssertionError(f"{scenario}: operator norm below d-1.")

    @keyword
    def correlations_should_match_dense(self, parties, settings, dim):
        scenario = BellScenario(parties, settings, dim)
        state = GhzState(scenario.parties, scenario.dim).dense()
        for n in range(1, scenario.dim):
            for eta in itertools.product(range(scenario.settings), repeat=scenario.parties):
                factors = [power_X_nu(scenario.dim, Fraction(e, scenario.settings), n)
                           .dense().entries for e in eta]
                dense = np.vdot(state, reduce(np.kron, factors) @ state)
                exact = correlation(scenario, n, eta)
                if abs(dense - exact) > 1e-9 or abs(exact) > 1 + 1e-12:
                    raise AssertionError(f"{scenario} E^{n}{eta}: {exact} vs {dense}.")
                if sum(eta) % scenario.settings == 0:
                    weighted = exact * to_complex(PhaseExponent(n * sum(eta),
                                                                scenario.phase_order))
                    if abs(weighted - 1) > 1e-9:
                        raise AssertionError(f"{scenario} weighted E^{n}{eta} = {weighted}.")

    @keyword
    def assignment_from_settings(self, dim, **columns):
        """Builds an assignment from ``a=0,0,0``, ``b=0,0,1`` style columns."""
        letters = sorted(columns)
        values = [_ints(columns[letter]) for letter in letters]
        return LhvAssignment([list(row) for row in zip(*values)], int(dim))

    @keyword
    def evaluate_l(self, constraints, assignment):
        return evaluate_L(constraints, assignment)

    @keyword
    def lhv_bell_value_should_match_l(self, parties, settings, dim):
        parties, settings, dim = int(parties), int(settings), int(dim)
        scenario = BellScenario(parties, settings, dim)
        constraints = generate_constraints(settings, dim, parties)
        for flat in itertools.product(range(dim), repeat=parties * settings):
            rows = [flat[i * settings:(i + 1) * settings] for i in range(parties)]
            assignment = LhvAssignment(rows, dim)
            expected = float(evaluate_L(constraints, assignment) * dim - 1)
            if abs(lhv_bell_value(scenario, assignment) - expected) > 1e-9:
                raise AssertionError(f"{assignment}: Bell value differs from L*d-1.")

    @keyword
    def pinned_search_should_match_full_search(self, settings, dim, parties=3):
        settings, dim, parties = int(settings), int(dim), int(parties)
        constraints = generate_constraints(settings, dim, parties)
        best = max(
            evaluate_L(constraints, LhvAssignment(
                [flat[i * settings:(i + 1) * settings] for i in range(parties)], dim))
            for flat in itertools.product(range(dim), repeat=parties * settings))
        optimum = brute_force_max(settings, dim, parties)
        if optimum.l_max != best:
            raise AssertionError(f"Pinned search {optimum.l_max}, full search {best}.")
        if evaluate_L(constraints, optimum.witness) != best:
            raise AssertionError(f"Witness {optimum.witness} does not attain {best}.")

    @keyword
    def witness_should_be_shift_invariant(self, settings, dim, workers=1):
        settings, dim = int(settings), int(dim)
        constraints = generate_constraints(settings, dim)
        optimum = brute_force_max(settings, dim, workers=int(workers))
        for shift in range(dim):
            rows = [list(row) for row in optimum.witness.alpha]
            rows[0] = [value + shift for value in rows[0]]
            rows[1] = [value - shift for value in rows[1]]
            shifted = LhvAssignment(rows, dim)
            if evaluate_L(constraints, shifted) != optimum.l_max:
                raise AssertionError(f"Shift by {shift} changes L.")
        return optimum.l_max

    @keyword
    def theorem_one_should_match_residue_search(self):
        for a in range(-6, 7):
            if a == 0:
                continue
            for b, m in itertools.product(range(-6, 7), range(1, 13)):
                expected = any((a * x - b) % m == 0 for x in range(m))
                if linear_congruence_solvable(a, b, m) != expected:
                    raise AssertionError(f"a={a} b={b} m={m}: expected {expected}.")

    @keyword
    def system_solvable_should_match_brute_force(self, settings, dim, parties=3):
        """Checks every subset of the constraint family against exhaustive search."""
        constraints = generate_constraints(int(settings), int(dim), int(parties))
        system = CongruenceSystem(constraints)
        d, variables = int(dim), len(system.variables)
        if d ** variables > 10 ** 6:
            raise AssertionError(f"{d}^{variables} assignments is too many.")
        grid = np.array(list(itertools.product(range(d), repeat=variables)), dtype=np.int64)
        matrix = np.array(system.matrix, dtype=np.int64)
        holds = (grid @ matrix.T + np.array(system.constants)) % d == 0
        for size in range(1, len(system) + 1):
            for subset in itertools.combinations(range(len(system)), size):
                expected = bool(holds[:, list(subset)].all(axis=1).any())
                if system_solvable(system.subsystem(subset)) != expected:
                    raise AssertionError(f"Subset {subset} at d={d}: expected {expected}.")

    @keyword
    def system_should_be_solvable(self, settings, dim, *indices):
        system = CongruenceSystem(generate_constraints(int(settings), int(dim)))
        if indices:
            system = system.subsystem([int(i) for i in indices])
        if not system_solvable(system):
            raise AssertionError(f"{system!r} is not solvable.")
        if not system.satisfied_by(solve_system(system)):
            raise AssertionError(f"Solution of {system!r} does not satisfy it.")

    @keyword
    def system_should_not_be_solvable(self, settings, dim, *indices):
        system = CongruenceSystem(generate_constraints(int(settings), int(dim)))
        if indices:
            system = system.subsystem([int(i) for i in indices])
        if system_solvable(system):
            raise AssertionError(f"{system!r} is solvable.")

    @keyword
    def smith_form_should_be_valid(self, settings, dim):
        matrix = CongruenceSystem(generate_constraints(int(settings), int(dim))).matrix
        form = smith_form(matrix)
        product = form.left * integer_matrix(matrix) * form.right
        for i in range(product.rows):
            for j in range(product.cols):
                expected = form.diagonal[i] if i == j else 0
                if product[i, j] != expected:
                    raise AssertionError(f"U A V differs at ({i}, {j}).")
        for transform in (form.left, form.right):
            if abs(transform.det()) != 1:
                raise AssertionError("Transform is not unimodular.")
        factors = form.diagonal[:form.rank]
        if factors != invariant_factors(matrix):
            raise AssertionError("Invariant factors differ from the Smith form.")
        if any(b % a for a, b in zip(factors, factors[1:])) or min(factors) < 1:
            raise AssertionError(f"Invariant factors {factors} do not form a chain.")
        return factors

    @keyword
    def constraint_indices(self, settings, *etas, parties=3):
        """Indices of the constraints for setting vectors given as ``0,2,2``."""
        constraints = generate_constraints(int(settings), 2, int(parties))
        index = {c.settings: i for i, c in enumerate(constraints)}
        return tuple(sorted(index[tuple(_ints(eta))] for eta in etas))

    @keyword
    def subsets_of(self, certificates):
        return [certificate.subset for certificate in certificates]

    @keyword
    def certificates_should_verify(self, certificates, settings, dim, parties=3):
        system = CongruenceSystem(generate_constraints(int(settings), int(dim), int(parties)))
        for certificate in certificates:
            if not certificate.verify(system):
                raise AssertionError(f"Certificate {certificate!r} does not verify.")
            if system_solvable(system.subsystem(certificate.subset)):
                raise AssertionError(f"Subset {certificate.subset} is solvable.")
            for index in certificate.subset:
                rest = [i for i in certificate.subset if i != index]
                if rest and not system_solvable(system.subsystem(rest)):
                    raise AssertionError(f"Subset {certificate.subset} is not minimal.")

    @keyword
    def monotonicity_should_hold(self, settings, dim, parties=3):
        system = CongruenceSystem(generate_constraints(int(settings), int(dim), int(parties)))
        for certificate in minimal_infeasible_subsets(system):
            for extra in range(len(system)):
                if extra in certificate.subset:
                    continue
                superset = sorted(certificate.subset + (extra,))
                if system_solvable(system.subsystem(superset)):
                    raise AssertionError(f"Superset {superset} is solvable.")
        best = max_satisfiable_subset(system)
        for size in range(1, best.size):
            for subset in itertools.combinations(best.subset, size):
                if not system_solvable(system.subsystem(subset)):
                    raise AssertionError(f"Subset {subset} of the maximum is unsolvable.")

    @keyword
    def run_cli(self, *args):
        """Runs the command line interface in-process.

        Returns the exit code, standard output and standard error.
        """
        stdout, stderr = io.StringIO(), io.StringIO()
        with redirect_stdout(stdout), redirect_stderr(stderr):
            try:
                rc = cli.main(list(args))
            except SystemExit as exit:
                rc = exit.code
        return rc, stdout.getvalue(), stderr.getvalue()

    @keyword
    def run_cli_with_skewed_brute_force(self, *args):
        """Runs the command line interface with a brute force oracle that
        claims one more satisfied constraint than it found."""
        with mock.patch.object(runner, 'brute_force_max', _skewed_brute_force):
            return self.run_cli(*args)

    @keyword
    def sweep_with_failing_witness_check(self, settings, dims):
        """Sweeps with a congruence witness that never satisfies its subset."""
        with mock.patch.object(runner, 'evaluate_L', lambda constraints, assignment: -1):
            return runner.sweep(_ints(settings), _ints(dims))

    @keyword
    def sweep_from_worker_thread(self, settings, dims, workers=2):
        """Runs a sweep from a thread that may not write log messages."""
        with ThreadPoolExecutor(max_workers=1) as executor:
            future = executor.submit(runner.sweep, _ints(settings), _ints(dims),
                                     workers=int(workers))
            return future.result()

    @keyword
    def scenario_report(self, parties, settings, dim, brute_force=None,
                        congruence=None, error=None):
        """A report with the given oracle results, without running anything."""
        report = ScenarioReport(int(parties), int(settings), int(dim))
        report.quantum_bound = float(int(dim) - 1)
        if brute_force is not None:
            report.brute_force_l_max = Fraction(brute_force)
        if congruence is not None:
            report.congruence_l_max = Fraction(congruence)
        if error:
            report.errors.append(error)
        return report

    @keyword
    def exit_code_of(self, *reports):
        return exit_code(list(reports))

    @keyword
    def next_run_should_return(self, report):
        """Makes `Run Scenario` of the active scenario return ``report``."""
        active = BuiltIn().get_library_instance('GenericBellLibrary').current
        active.run = lambda: report

    @keyword
    def background_logger_should_be_in_use(self):
        if not logger.buffers_worker_messages:
            raise AssertionError("robotbackgroundlogger is not in use.")

    @keyword
    def logging_threshold_should_be(self, level):
        if logger.level != level.upper():
            raise AssertionError(f"Logging threshold is {logger.level}, not {level}.")


def _skewed_brute_force(settings, dim, parties=3, budget=None, workers=1):
    optimum = brute_force_max(settings, dim, parties, budget, workers)
    extra = Fraction(1, settings ** (parties - 1))
    return ClassicalOptimum(min(optimum.l_max + extra, Fraction(1)), optimum.witness)

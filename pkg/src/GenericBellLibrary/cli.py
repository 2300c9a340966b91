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

"""Command line interface: ``generic-bell`` and ``python -m GenericBellLibrary``.

Options are layered: defaults, then the JSON file given with ``--config``
(same keys as the long options), then the options themselves.
"""

import argparse
import logging
import sys

from .config import (BooleanEntry, ChoiceEntry, Configuration, ConfigurationException,
                     IntegerEntry, IntegerListEntry, LogLevelEntry, RangeEntry,
                     StringEntry, read_config_file)
from .errors import GenericBellException
from .logger import PYTHON_LEVELS, logger
from .report import exit_code, summary_table, write_csv
from .runner import DEFAULTS, METHODS, sweep
from .version import VERSION

RUN_OPTIONS = ('method', 'budget', 'dense_cap', 'subset_cap', 'certificates',
               'certificate_size', 'eigencheck', 'workers', 'timing')


class _CliConfiguration(Configuration):

    def __init__(self):
        super(_CliConfiguration, self).__init__(
            parties=IntegerEntry(3),
            settings=IntegerListEntry(None),
            dim=IntegerEntry(None),
            dims=RangeEntry(None),
            method=ChoiceEntry(METHODS, DEFAULTS['method']),
            budget=IntegerEntry(DEFAULTS['budget']),
            dense_cap=IntegerEntry(DEFAULTS['dense_cap']),
            subset_cap=IntegerEntry(DEFAULTS['subset_cap']),
            certificates=BooleanEntry(DEFAULTS['certificates']),
            certificate_size=IntegerEntry(DEFAULTS['certificate_size']),
            eigencheck=BooleanEntry(DEFAULTS['eigencheck']),
            workers=IntegerEntry(DEFAULTS['workers']),
            timing=BooleanEntry(DEFAULTS['timing']),
            loglevel=LogLevelEntry('INFO'),
            json=StringEntry(None),
            csv=StringEntry(None),
        )

    @property
    def dim_values(self):
        if self.dims is not None:
            return self.dims
        if self.dim is not None:
            return [self.dim]
        raise ConfigurationException("One of --dim or --dims is required.")

    def run_options(self):
        return {name: getattr(self, name) for name in RUN_OPTIONS}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog='generic-bell',
        description='Quantum and classical bounds of generic multi-setting '
                    'Bell inequalities for GHZ states.',
        epilog='Exit codes: 0 success, 2 invalid input, 3 oracle '
               'disagreement, 4 no classical oracle completed.')
    scenario = parser.add_argument_group('scenario')
    scenario.add_argument('--parties', help='number of parties N (default 3)')
    scenario.add_argument('--settings', help='settings per party M, e.g. 2 or 2,3,4')
    scenario.add_argument('--dim', help='outcomes per setting d')
    scenario.add_argument('--dims', metavar='A..B', help='inclusive range of d')
    oracles = parser.add_argument_group('oracles')
    oracles.add_argument('--method', choices=METHODS)
    oracles.add_argument('--budget', help='brute force assignment budget (default 10**8)')
    oracles.add_argument('--subset-cap', help='maximum constraints for subset enumeration')
    oracles.add_argument('--certificates', action='store_true', default=None,
                         help='include minimal infeasible subsets')
    oracles.add_argument('--certificate-size', metavar='K',
                         help='largest minimal infeasible subset to enumerate')
    oracles.add_argument('--eigencheck', action='store_true', default=None,
                         help='verify the GHZ eigenvalue with dense matrices')
    oracles.add_argument('--dense-cap', help='largest dense dimension d^N (default 4096)')
    oracles.add_argument('--workers', help='worker threads')
    output = parser.add_argument_group('output')
    output.add_argument('--json', metavar='PATH', help='write the full report as JSON')
    output.add_argument('--csv', metavar='PATH', help='write the summary as CSV')
    output.add_argument('--timing', action='store_true', default=None,
                        help='include per-phase wall time in the JSON report')
    output.add_argument('--loglevel', help='TRACE, DEBUG, INFO, WARN or NONE')
    parser.add_argument('--config', metavar='PATH', help='JSON file with default options')
    parser.add_argument('--version', action='version', version=f'%(prog)s {VERSION}')
    return parser


def _python_logger(loglevel):
    log = logging.getLogger('GenericBellLibrary')
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter('%(levelname)s: %(message)s'))
    log.handlers = [handler]
    log.propagate = False
    log.setLevel(PYTHON_LEVELS[loglevel])
    return log


def _read_configuration(args):
    config = _CliConfiguration()
    if args.config:
        config.update(**read_config_file(args.config))
    config.update(**{name: value for name, value in vars(args).items()
                     if name != 'config'})
    if config.settings is None:
        raise ConfigurationException("--settings is required.")
    return config


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _read_configuration(args)
        dims = config.dim_values
    except ConfigurationException as error:
        print(f'{parser.prog}: error: {error}', file=sys.stderr)
        return 2
    try:
        with logger.redirected(_python_logger(config.loglevel), config.loglevel):
            reports = sweep(config.settings, dims, config.json, config.parties,
                            **config.run_options())
        if config.csv:
            write_csv(reports, config.csv)
    except GenericBellException as error:
        print(f'{parser.prog}: error: {error}', file=sys.stderr)
        return error.exit_code
    except OSError as error:
        print(f'{parser.prog}: error: {error}', file=sys.stderr)
        return 1
    print(summary_table(reports))
    return exit_code(reports)

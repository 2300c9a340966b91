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

"""Logging shared by the library, the oracles and the command line tool.

While Robot Framework is running, messages written by worker threads are
buffered by robotbackgroundlogger and written by
:py:func:`flush_background_messages` from the thread running the keyword.
Outside Robot Framework ``robot.api.logger`` forwards messages to Python
logging, which accepts them from any thread. :py:meth:`redirected` sends
everything to a given Python logger instead.
"""

import logging
import threading
from contextlib import contextmanager

from robot.api import logger as robot_logger
from robot.running.context import EXECUTION_CONTEXTS

try:
    from robotbackgroundlogger import BackgroundLogger
except ImportError:
    BackgroundLogger = None

LEVELS = ('TRACE', 'DEBUG', 'INFO', 'WARN', 'NONE')
PYTHON_LEVELS = {
    'TRACE': logging.DEBUG // 2,
    'DEBUG': logging.DEBUG,
    'INFO': logging.INFO,
    'HTML': logging.INFO,
    'WARN': logging.WARNING,
    'NONE': logging.CRITICAL + 1,
}
LOGGING_THREADS = ('MainThread', 'RobotFrameworkTimeoutThread')

logging.addLevelName(PYTHON_LEVELS['TRACE'], 'TRACE')


class ScenarioLogger(object):
    """Writes messages to Robot Framework or Python logging.

    ``trace``, ``debug``, ``info`` and ``warn`` drop messages below
    :py:attr:`level`; ``NONE`` drops all of them. :py:meth:`write`
    is not filtered.
    """

    def __init__(self):
        self.level = 'TRACE'
        self._python_logger = None
        self._background = BackgroundLogger() if BackgroundLogger else None

    @property
    def buffers_worker_messages(self):
        return self._background is not None

    @property
    def logging_threads(self):
        if self._background is not None:
            return tuple(getattr(self._background, 'LOGGING_THREADS', LOGGING_THREADS))
        return LOGGING_THREADS

    def set_level(self, level):
        """Sets the threshold and returns the previous one."""
        level = str(level).upper()
        if level not in LEVELS:
            raise ValueError(f"Invalid log level '{level}'.")
        old, self.level = self.level, level
        return old

    @contextmanager
    def redirected(self, python_logger, level=None):
        """Writes every message to ``python_logger`` while the block runs.

        ``level`` replaces the threshold for the same time.
        """
        previous = self._python_logger, self.level
        self._python_logger = python_logger
        if level is not None:
            self.set_level(level)
        try:
            yield python_logger
        finally:
            self._python_logger, self.level = previous

    def write(self, msg, level='INFO', html=False):
        if self._python_logger is not None:
            self._python_logger.log(PYTHON_LEVELS[level], msg)
        elif self._background is not None and _robot_running():
            self._background.write(msg, level, html)
        else:
            robot_logger.write(msg, level, html)

    def trace(self, msg):
        self._filtered(msg, 'TRACE')

    def debug(self, msg):
        self._filtered(msg, 'DEBUG')

    def info(self, msg):
        self._filtered(msg, 'INFO')

    def warn(self, msg):
        self._filtered(msg, 'WARN')

    def flush(self):
        """Writes messages buffered by worker threads.

        Does nothing outside the thread running the keyword, outside a
        Robot Framework run, or without robotbackgroundlogger.
        """
        if not self.buffers_worker_messages or not _robot_running():
            return
        if threading.current_thread().name not in self.logging_threads:
            return
        self._background.log_background_messages()

    def _filtered(self, msg, level):
        if self.level != 'NONE' and LEVELS.index(level) >= LEVELS.index(self.level):
            self.write(msg, level)


def _robot_running():
    return EXECUTION_CONTEXTS.current is not None


logger = ScenarioLogger()


def flush_background_messages():
    logger.flush()

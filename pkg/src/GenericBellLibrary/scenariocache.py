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

from robot.utils import ConnectionCache


class ScenarioCache(ConnectionCache):
    """Open :py:class:`~GenericBellLibrary.runner.ScenarioRunner` objects by index and alias."""

    def __init__(self):
        ConnectionCache.__init__(self, no_current_msg='No open scenario.')

    def close_all(self):
        for runner in (runner for runner in self._connections if runner):
            runner.close()
        self.empty_cache()
        return self.current

    def get_scenario(self, alias_or_index=None):
        runner = super(ScenarioCache, self).get_connection(alias_or_index)
        if not runner:
            raise RuntimeError(f"Non-existing index or alias '{alias_or_index}'.")
        return runner

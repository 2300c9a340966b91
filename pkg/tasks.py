import subprocess
import sys
from pathlib import Path

from invoke import task
from rellu import Version
from rellu.tasks import clean
from robot.libdoc import libdoc


assert Path.cwd() == Path(__file__).parent


VERSION_PATH = Path("src/GenericBellLibrary/version.py")
VERSION_PATTERN = "VERSION = '(.*)'"


@task
def kw_docs(ctx):
    """Generates the library keyword documentation

    Documentation is generated by using the Libdoc tool.
    """
    libdoc(str(Path("src/GenericBellLibrary")), str(Path("docs/GenericBellLibrary.html")))


@task
def set_version(ctx, version):
    """Set project version in `src/GenericBellLibrary/version.py`` file.

    Args:
        version: Project version to set or ``dev`` to set development version.

    Following PEP-440 compatible version numbers are supported:
    - Final version like 1.0 or 1.1.2.
    - Alpha, beta or release candidate with ``a``, ``b`` or ``rc`` postfix,
      respectively, and an incremented number like 1.0a1 or 1.0.1rc1.
    - Development version with ``.dev`` postfix and an incremented number like
      1.0.dev1 or 1.1a1.dev2.

    When the given version is ``dev``, the existing version number is updated
    to the next suitable development version. For example, 1.0 -> 1.0.1.dev1,
    1.1.1 -> 1.1.2.dev1, 1.2a1 -> 1.2a2.dev1, 1.2.dev1 -> 1.2.dev2.
    """
    version = Version(version, VERSION_PATH, VERSION_PATTERN)
    version.write()
    print(version)


@task
def print_version(ctx):
    """Print the current project version."""
    print(Version(path=VERSION_PATH, pattern=VERSION_PATTERN))


@task
def atest(ctx, suite=None):
    """Runs the acceptance tests.

    Args:
        suite: Run only the suite with this name, for example ``congruence``.
    """
    args = [sys.executable, "atest/run.py"]
    if suite:
        args += ["--suite", suite]
    args.append("atest")
    sys.exit(subprocess.call(args))

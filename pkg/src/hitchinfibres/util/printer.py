import json
import os
import sys
from typing import Mapping

from rich.console import Console
from rich.theme import Theme

from .enums import Verbosity


STYLES = {
    "info": "bright_blue",
    "passed": "bright_green",
    "failed": "bold bright_red",
    "warning": "bright_yellow",
    "error": "bright_red",
    "debug": "bright_cyan",
}


class Printer:

    """Console output gated by a verbosity level.

    Reports go to stdout and are never gated; PASS lines and ``info``
    need :attr:`Verbosity.normal`, ``debug`` needs
    :attr:`Verbosity.debug`. FAIL lines, warnings and errors always
    print. Diagnostics go to stderr so stdout stays machine readable.

    """

    def __init__(self, styles: Mapping[str, str] = None, verbosity=Verbosity.normal):
        self.theme = Theme({**STYLES, **(styles or {})})
        self.verbosity = Verbosity.parse(verbosity)
        self._consoles = {}

    def __call__(self, *args, **kwargs):
        self.print(*args, **kwargs)

    def console(self, stderr=False) -> Console:
        """Console for the current stdout or stderr.

        A new console is made when the stream changes (e.g. under
        ``redirect_stdout``) so terminal detection follows the stream.

        """
        stream = sys.stderr if stderr else sys.stdout
        cached = self._consoles.get(stderr)
        if cached is None or cached[0] is not stream:
            cached = (stream, Console(file=stream, theme=self.theme, highlight=False))
            self._consoles[stderr] = cached
        return cached[1]

    @property
    def is_quiet(self):
        return self.verbosity <= Verbosity.quiet

    @property
    def is_debug(self):
        return self.verbosity >= Verbosity.debug

    def print(self, *args, style=None, sep=" ", stderr=False, **kwargs):
        strings = (str(arg) for arg in args)
        self.console(stderr).print(*strings, style=style, sep=sep, markup=False, **kwargs)

    def print_json(self, payload, stderr=False):
        """Print ``payload`` as indented JSON, preserving key order."""
        text = json.dumps(payload, indent=2, ensure_ascii=False)
        self.print(text, stderr=stderr, soft_wrap=True)

    def info(self, *args, **kwargs):
        if not self.is_quiet:
            self.print(*args, style="info", **kwargs)

    def warning(self, *args, **kwargs):
        self.print(*args, style="warning", stderr=True, **kwargs)

    def error(self, *args, **kwargs):
        self.print(*args, style="error", stderr=True, **kwargs)

    def debug(self, *args, **kwargs):
        if self.is_debug:
            self.print(*args, style="debug", stderr=True, **kwargs)

    def pass_fail(self, label, ok, *details):
        """Print a PASS/FAIL line; failures always print."""
        if ok:
            if not self.is_quiet:
                self.print("PASS", label, *details, style="passed")
        else:
            self.print("FAIL", label, *details, style="failed")


def verbosity_from_environ(environ=None, name="HF_LOG"):
    """Read the verbosity level from the environment.

    Raises:
        ValueError: the variable is set to an unknown level.

    """
    environ = os.environ if environ is None else environ
    value = environ.get(name)
    if value in (None, ""):
        return Verbosity.normal
    return Verbosity.parse(value)


printer = Printer()

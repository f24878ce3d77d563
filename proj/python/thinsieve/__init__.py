"""Python interface to the thinsieve library.

Exact values come back as ``int`` and ``fractions.Fraction``. Groups are
given by a bundled name ("modular", "schottky") or a list of (a, b, c, d)
generators.
"""

from ._thinsieve import *  # noqa: F401,F403
from ._thinsieve import BudgetExceeded, run_cli

__all__ = [name for name in dir() if not name.startswith("_")]


def cli(*args):
    """Run the command-line tool in-process; returns (exit_code, stdout, stderr)."""
    return run_cli([str(a) for a in args])

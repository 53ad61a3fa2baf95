"""
Console entry point: ``parawarm <solve|sweep|bound|approx|bench> ...``.

Each subcommand is a Django management command in core/management/commands;
this wrapper configures Django and turns CommandError into an exit code.
"""

import os
import sys
from typing import List, Optional

SUBCOMMANDS = ('solve', 'sweep', 'bound', 'approx', 'bench')
USAGE = f"usage: parawarm {{{','.join(SUBCOMMANDS)}}} [options]"


def run(argv: Optional[List[str]] = None, stdout=None, stderr=None) -> int:
    """Run one subcommand and return its exit code; diagnostics go to ``stderr``."""
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    if not argv or argv[0] not in SUBCOMMANDS:
        stderr.write(USAGE + '\n')
        return 1

    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'parawarm.settings')
    import django
    from django.core.management import call_command
    from django.core.management.base import CommandError

    django.setup()
    try:
        call_command(argv[0], *argv[1:], stdout=stdout, stderr=stderr)
    except CommandError as exc:
        message = str(exc)
        stderr.write(message if message.startswith('Error') else f"Error: {message}")
        stderr.write('\n')
        return exc.returncode
    return 0


def main():
    sys.exit(run())

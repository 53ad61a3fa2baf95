"""
Shared plumbing for the engine commands.

Exit codes (raised as CommandError.returncode):
    1  usage error, unreadable or malformed input
    2  numerical failure (singular basis, defective matrix, no convergence)
    3  the base problem is infeasible or unbounded
"""

import logging
from dataclasses import fields
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from core.engine.config import config, Tolerances
from core.engine.exceptions import EngineError, NotOptimalError, NumericalError, BasisError
from core.engine.lp_model import parse_lambda_grid, parse_lambda_spec, parse_problem
from core.engine.models import Strategy
from core.engine.service import WarmstartService
from core.reporting import to_csv, to_json, write_output

logger = logging.getLogger(__name__)

EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_NOT_SOLVABLE = 3

TOLERANCE_NAMES = tuple(f.name for f in fields(Tolerances))


class EngineCommand(BaseCommand):
    """Reads a problem file, runs one engine operation and writes a CSV or JSON table."""

    default_format = 'csv'
    columns = ()
    requires_input = True
    requires_system_checks = []

    def add_arguments(self, parser):
        parser.add_argument('input', nargs=None if self.requires_input else '?', help='Problem file (JSON)')
        parser.add_argument('--strategy', choices=Strategy.values, default=Strategy.AUTO.value)
        parser.add_argument(
            '--fallback', choices=[Strategy.SCHUR.value, Strategy.TWEAKED.value], default=Strategy.SCHUR.value,
            help='Strategy used by --strategy auto when E_B is defective',
        )
        parser.add_argument('--seed', type=int, default=None, help='Seed for the tweaked strategy (default PARAWARM_SEED)')
        parser.add_argument('--format', choices=['csv', 'json'], default=self.default_format)
        parser.add_argument('--output', '-o', default=None, help='Output file (default: standard output)')
        parser.add_argument(
            '--tol', action='append', default=[], metavar='NAME=VALUE',
            help=f"Tolerance override; names: {', '.join(TOLERANCE_NAMES)}",
        )
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def tolerances(self, overrides) -> Tolerances:
        values = {}
        for item in overrides:
            name, _, raw = item.partition('=')
            if name not in TOLERANCE_NAMES:
                raise CommandError(f"unknown tolerance {name!r}", returncode=EXIT_USAGE)
            try:
                values[name] = type(getattr(Tolerances, name))(float(raw))
            except ValueError:
                raise CommandError(f"invalid value for tolerance {name}: {raw!r}", returncode=EXIT_USAGE)
        return config.tolerances.with_overrides(**values)

    def read_input(self, path):
        try:
            return Path(path).read_text(encoding='utf-8')
        except OSError as exc:
            raise CommandError(f"cannot read {path}: {exc.strerror or exc}", returncode=EXIT_USAGE)

    def lambdas(self, option, text, required=True):
        if option is not None:
            return parse_lambda_spec(option)
        values = parse_lambda_grid(text) if text is not None else None
        if values is None and required:
            raise CommandError("no lambda values: pass --lambda or add a \"lambda\" block", returncode=EXIT_USAGE)
        return values

    def render(self, payload, rows, output_format):
        if output_format == 'json':
            return to_json(payload)
        return to_csv(rows, self.columns)

    def run(self, lp, text, service, options):
        """Return (json payload, csv rows) for the command."""
        raise NotImplementedError

    def load_problem(self, options):
        if options['input'] is None:
            return None, None
        text = self.read_input(options['input'])
        return parse_problem(text), text

    def handle(self, *args, **options):
        service = WarmstartService(tolerances=self.tolerances(options['tol']))
        try:
            lp, text = self.load_problem(options)
            payload, rows = self.run(lp, text, service, options)
        except NotOptimalError as exc:
            raise CommandError(str(exc), returncode=EXIT_NOT_SOLVABLE)
        except (NumericalError, BasisError) as exc:
            logger.debug(f"Numerical failure details: {exc.details}")
            raise CommandError(f"numerical failure: {exc}", returncode=EXIT_NUMERICAL)
        except EngineError as exc:
            raise CommandError(str(exc), returncode=EXIT_USAGE)

        # Output is only produced once the computation has succeeded.
        return write_output(self.render(payload, rows, options['format']), options['output'])

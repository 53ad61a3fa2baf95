from django.core.management.base import CommandError

from core.engine.exceptions import NotOptimalError
from core.engine.lp_model import parse_lambda_spec
from core.reporting import SOLVE_COLUMNS

from ._base import EngineCommand, EXIT_USAGE


class Command(EngineCommand):
    help = 'Solve P(lambda) with the dense simplex and print the optimal basis and objective'

    default_format = 'json'
    columns = SOLVE_COLUMNS

    def add_command_arguments(self, parser):
        parser.add_argument('--lambda', dest='lam', default='0', help='Single lambda value (default 0)')

    def run(self, lp, text, service, options):
        values = parse_lambda_spec(options['lam'])
        if len(values) != 1:
            raise CommandError(f"solve takes a single lambda, got {len(values)}", returncode=EXIT_USAGE)
        result = service.solve(lp, values[0])
        if not result.is_optimal():
            raise NotOptimalError(f"P({values[0]!r}) is {result.status}", status=result.status)
        payload = result.to_dict()
        return payload, [payload]

from django.core.management.base import CommandError

from core.engine.lp_model import parse_lambda_spec
from core.reporting import BOUND_COLUMNS

from ._base import EngineCommand, EXIT_USAGE


class Command(EngineCommand):
    help = 'Print the certified radius around lambda for the optimal basis of P(0)'

    default_format = 'json'
    columns = BOUND_COLUMNS

    def add_command_arguments(self, parser):
        parser.add_argument('--lambda', dest='lam', default='0', help='Single lambda value (default 0)')
        parser.add_argument('--eps', type=float, required=True, help='Maximal objective deviation')
        parser.add_argument('--direction', type=int, choices=[1, -1], default=1)

    def run(self, lp, text, service, options):
        values = parse_lambda_spec(options['lam'])
        if len(values) != 1:
            raise CommandError(f"bound takes a single lambda, got {len(values)}", returncode=EXIT_USAGE)
        if not options['eps'] > 0:
            raise CommandError("--eps must be positive", returncode=EXIT_USAGE)
        certificate = service.bound(
            lp, values[0], options['eps'], options['direction'],
            strategy=options['strategy'], fallback=options['fallback'], seed=options['seed'],
        )
        payload = certificate.to_dict()
        return payload, [payload]

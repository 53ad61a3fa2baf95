from django.core.management.base import CommandError

from core.reporting import APPROX_COLUMNS, approx_rows

from ._base import EngineCommand, EXIT_USAGE


class Command(EngineCommand):
    help = 'Build a certified piecewise-linear approximation of o*(lambda) on [from, to]'

    default_format = 'json'
    columns = APPROX_COLUMNS

    def add_command_arguments(self, parser):
        parser.add_argument('--from', dest='lo', type=float, required=True)
        parser.add_argument('--to', dest='hi', type=float, required=True)
        parser.add_argument('--eps', type=float, required=True, help='Target error')
        parser.add_argument('--max-points', type=int, default=None, help='Breakpoint budget (default 10000)')
        parser.add_argument('--min-width', type=float, default=None,
                            help='Narrowest interval that is still bisected (default (to-from)/2^20)')

    def run(self, lp, text, service, options):
        if options['hi'] < options['lo']:
            raise CommandError("--to must not be smaller than --from", returncode=EXIT_USAGE)
        if not options['eps'] > 0:
            raise CommandError("--eps must be positive", returncode=EXIT_USAGE)
        approx = service.approximate(
            lp, options['lo'], options['hi'], options['eps'],
            max_points=options['max_points'], min_width=options['min_width'],
            strategy=options['strategy'], fallback=options['fallback'], seed=options['seed'],
        )
        return approx.to_dict(), approx_rows(approx)

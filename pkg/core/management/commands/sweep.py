from core.reporting import SWEEP_COLUMNS

from ._base import EngineCommand


class Command(EngineCommand):
    help = 'Preprocess the optimal basis of P(0) and evaluate it at every requested lambda'

    columns = SWEEP_COLUMNS

    def add_command_arguments(self, parser):
        parser.add_argument('--lambda', dest='lam', default=None,
                            help='from:to:count, a comma list or one value (default: the file\'s "lambda" block)')
        parser.add_argument('--threads', type=int, default=None, help='Worker count (default PARAWARM_THREADS)')
        parser.add_argument('--no-optimality', action='store_true',
                            help='Skip reduced costs; feasible results are reported as upper bounds')
        parser.add_argument('--timings', action='store_true', help='Include wall-clock timings in JSON output')

    def run(self, lp, text, service, options):
        report = service.sweep(
            lp,
            self.lambdas(options['lam'], text),
            strategy=options['strategy'],
            fallback=options['fallback'],
            seed=options['seed'],
            check_optimality=not options['no_optimality'],
            threads=options['threads'],
        )
        payload = report.to_dict()
        if not options['timings']:
            payload.pop('timings')
        return payload, report.to_rows()

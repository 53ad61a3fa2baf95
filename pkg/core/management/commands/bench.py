from django.core.management.base import CommandError

from core.engine.instances import random_instance
from core.engine.models import Strategy
from core.reporting import BENCH_COLUMNS, bench_rows

from ._base import EngineCommand, EXIT_USAGE

WARMSTART_STRATEGIES = [Strategy.EIGEN.value, Strategy.SCHUR.value, Strategy.TWEAKED.value]


class Command(EngineCommand):
    help = 'Time warmstart strategies against per-lambda re-solves'

    columns = BENCH_COLUMNS
    requires_input = False

    def add_command_arguments(self, parser):
        parser.add_argument('--random', type=int, default=None, metavar='M',
                            help='Benchmark a random m x 2m instance instead of an input file')
        parser.add_argument('--lambda', dest='lam', default=None,
                            help='from:to:count, a comma list or one value')
        parser.add_argument('--strategies', nargs='+', choices=WARMSTART_STRATEGIES, default=WARMSTART_STRATEGIES)
        parser.add_argument('--repeats', type=int, default=3)

    def load_problem(self, options):
        if options['random'] is not None:
            if options['random'] < 1:
                raise CommandError("--random needs a positive size", returncode=EXIT_USAGE)
            return random_instance(options['random'], seed=options['seed'] or 0), None
        if options['input'] is None:
            raise CommandError("pass an input file or --random M", returncode=EXIT_USAGE)
        return super().load_problem(options)

    def run(self, lp, text, service, options):
        report = service.benchmark(
            lp,
            self.lambdas(options['lam'], text),
            strategies=options['strategies'],
            repeats=options['repeats'],
            seed=options['seed'],
        )
        return {'m': report.m, 'n': report.n, 'rows': bench_rows(report)}, bench_rows(report)

import click
import pandas as pd
from rothpy import diagnostics
from rothpy import errors
from rothpy import util
from rothpy.cli.runconfig import seed_option


def validate_count(ctx, param, value):
    if value is not None and value < 1:
        raise click.BadParameter('if count is set, it must be >= 1')
    return value


@click.command()
@click.option('--suite', default='core', show_default=True, type=click.Choice(diagnostics.SUITES),
    help='Probe suite to run. acceptance runs every suite except key.')
@click.option('-c', '--count', type=int, metavar='N', callback=validate_count,
    help='Override the corpus size of corpus suites.')
@seed_option
@click.pass_context
@util.quiet_keyboardinterrupt
def verify_cmd(ctx, suite, count):
    """
    Run a named probe suite.

    Exits with status 2 if any probe fails. Suites fix their own grid,
    curve and kernel, only --seed, --threads and --config apply.
    """
    run = ctx.obj
    params = {'suite': suite, 'count': count}
    header = run.header('verify', params)
    run.announce(header)
    try:
        reports = diagnostics.run_suite(suite, settings=run.settings, seed=run.seed,
                                        worker_count=run.threads, count=count)
    except errors.RothpyError as e:
        raise click.ClickException(str(e))

    passed = not any(r.failed for r in reports)
    if run.fmt == 'csv':
        table = pd.DataFrame(
            [{k: r.to_dict()[k] for k in ('name', 'statistic', 'baseline', 'threshold', 'passed')} for r in reports],
            columns=['name', 'statistic', 'baseline', 'threshold', 'passed'],
        )
        run.emit_table(table, header)
    else:
        run.emit_doc({'suite': suite, 'passed': passed, 'reports': [r.to_dict() for r in reports]}, header)
    if not passed:
        ctx.exit(2)

import click
import pandas as pd
from rothpy import errors
from rothpy import sets
from rothpy.cli.runconfig import seed_option

KIND_OPTIONS = {
    sets.RANDOM: {'pieces'},
    sets.PERIODIC: {'period'},
    sets.CANTOR: {'depth', 'ratio'},
    sets.QUADRATIC: {'pieces'},
}


@click.command()
@click.option('-d', '--delta', required=True, type=float, metavar='DELTA',
    help='Density in (0, 1].')
@click.option('--kind', default=sets.RANDOM, show_default=True,
    type=click.Choice((sets.RANDOM,) + sets.KINDS),
    help='Random union of intervals or a structured family.')
@click.option('--pieces', type=int, metavar='N',
    help='Interval count for random and quadratic-avoiding sets. [default: 16 random, 32 quadratic-avoiding]')
@click.option('--period', type=float, metavar='P',
    help='Period of a periodic set, 1/P an integer. [default: 2^-4]')
@click.option('--depth', type=int, metavar='N',
    help='Levels of a cantor-like set. [default: 0]')
@click.option('--ratio', type=float, metavar='R',
    help='Kept piece ratio per level of a cantor-like set.')
@seed_option
@click.pass_obj
def gen_set_cmd(run, delta, kind, pieces, period, depth, ratio):
    """
    Generate a seeded set of density delta.

    Writes the sets JSON format, or CSV columns a, b with --format csv.
    """
    given = {name for name, value in [('pieces', pieces), ('period', period), ('depth', depth),
                                      ('ratio', ratio)] if value is not None}
    unused = sorted(given - KIND_OPTIONS[kind])
    if unused:
        raise click.UsageError(f'--{", --".join(unused)} not valid with --kind {kind}')
    params = {'delta': delta, 'kind': kind, 'pieces': pieces, 'period': period, 'depth': depth, 'ratio': ratio}
    header = run.header('gen-set', {k: v for k, v in params.items() if v is not None})
    run.announce(header)
    try:
        if kind == sets.RANDOM:
            A = sets.random_set(delta, 16 if pieces is None else pieces, seed=run.seed, config=run.torus)
        else:
            extra = {k: v for k, v in params.items() if k in KIND_OPTIONS[kind] and v is not None}
            if kind == sets.QUADRATIC:
                extra.update(seed=run.seed, curve=run.curve)
            A = sets.structured_set(kind, delta, config=run.torus, **extra)
    except errors.RothpyError as e:
        raise click.ClickException(str(e))

    if run.fmt == 'csv':
        run.emit_table(pd.DataFrame(list(A.intervals), columns=['a', 'b']), header)
    else:
        run.emit_set(A, header)

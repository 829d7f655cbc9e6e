import click
from rothpy import conf
from rothpy import errors
from rothpy import fileio
from rothpy import partition
from rothpy.cli.runconfig import set_or_full


def validate_at_least_one(ctx, param, value):
    if value is not None and value < 1:
        raise click.BadParameter(f'{param.name} must be >= 1')
    return value


@click.command()
@click.option('-s', '--set', 'set_path', metavar='FILE', type=click.Path(exists=True, dir_okay=False),
    help='Set in sets JSON format. [default: A = [0, 1]]')
@click.option('--depth', type=int, metavar='N', callback=validate_at_least_one,
    help='Use the dyadic partition (2^-(j+1), 2^-j], j < N. [default: 8]')
@click.option('-p', '--partition', 'partition_path', metavar='FILE',
    type=click.Path(exists=True, dir_okay=False),
    help='Partition JSON file, a list of [lo, hi] intervals.')
@click.option('--c-p', 'c_p', type=float, metavar='C',
    help='Good interval threshold constant. [default: from config, 1e-3]')
@click.option('--big-c-p', 'big_c_p', type=float, metavar='C',
    help='Exceptional count bound constant. [default: from config, 1]')
@click.option('--samples', type=int, metavar='N', callback=validate_at_least_one,
    help='Scales sampled per interval. [default: from config, 4]')
@click.pass_obj
def partition_report_cmd(run, set_path, depth, partition_path, c_p, big_c_p, samples):
    """
    Classify the intervals of an admissible partition as good or exceptional.

    CSV columns: lo, hi, witness, samples, v, good.
    """
    if depth is not None and partition_path:
        raise click.UsageError('use either --depth or --partition, not both')
    try:
        c_p = conf.get_float(run.settings, 'partition', 'c_p') if c_p is None else c_p
        big_c_p = conf.get_float(run.settings, 'partition', 'big_c_p') if big_c_p is None else big_c_p
        samples = conf.get_int(run.settings, 'partition', 'samples_per_j') if samples is None else samples
        if partition_path:
            parts = fileio.read_partition(partition_path)
        else:
            parts = partition.dyadic_partition(8 if depth is None else depth)
        A = set_or_full(run, set_path)
        kernel = run.kernel()
        params = {'set': set_path, 'partition': parts.to_dict(), 'c_p': c_p, 'big_c_p': big_c_p,
                  'samples': samples}
        header = run.header('partition-report', params, kernel)
        run.announce(header)

        report = partition.partition_report(A, run.curve, parts, c_p=c_p, samples_per_j=samples,
                                            big_c_p=big_c_p, kernel=kernel, worker_count=run.threads,
                                            every=run.every)
    except errors.RothpyError as e:
        raise click.ClickException(str(e))

    if run.fmt == 'csv':
        run.emit_table(report.rows, header)
    else:
        run.emit_doc(report.to_dict(), header)
    run.emit_plot(report.rows['hi'], report.rows['v'], header)

import click
from rothpy import averages
from rothpy import errors
from rothpy import util
from rothpy.cli.runconfig import seed_option


def validate_count(ctx, param, value):
    if value < 0:
        raise click.BadParameter(f'{param.name} must be >= 0')
    return value


@click.command()
@click.option('-s', '--set', 'set_path', required=True, metavar='FILE',
    type=click.Path(exists=True, dir_okay=False),
    help='Set in sets JSON format.')
@click.option('-T', '--T', 't_values', type=float, multiple=True, metavar='T',
    help='Window length in (0, 1], may be repeated.')
@click.option('--t-dyadic', nargs=2, type=int, metavar='LO HI',
    help='Dyadic windows 2^-LO down to 2^-HI.')
@click.option('--pins', default=1024, show_default=True, type=int, metavar='N', callback=validate_count,
    help='Number of evenly spaced pins in (0, 1].')
@click.option('--baseline', default=100, show_default=True, type=int, metavar='N', callback=validate_count,
    help='Number of random pins for the baseline value, 0 to skip.')
@click.option('--in-set', is_flag=True,
    help='Only scan pins inside the set.')
@seed_option
@click.pass_obj
@util.quiet_keyboardinterrupt
def scan_pinned_cmd(run, set_path, t_values, t_dyadic, pins, baseline, in_set):
    """
    Pin x maximizing the inf over T of the pinned pattern density.

    CSV columns: T, value (profile of the best pin).
    """
    if t_values and t_dyadic:
        raise click.UsageError('use either --T or --t-dyadic, not both')
    if not t_values and not t_dyadic:
        raise click.UsageError('one of --T or --t-dyadic is required')
    if pins < 1:
        raise click.BadParameter('pins must be >= 1', param_hint='--pins')
    try:
        T_grid = list(averages.as_scale_grid(t_values)) if t_values else util.dyadic_scales(*t_dyadic)
        A = run.read_set(set_path)
        params = {'set': set_path, 'T': T_grid, 'pins': pins, 'baseline': baseline, 'in_set': in_set}
        header = run.header('scan-pinned', params)
        run.announce(header)

        scan = averages.pinned_scan(A, run.curve, T_grid, averages.pin_grid(pins), baseline=baseline,
                                    seed=run.seed, pins_in_set=in_set, worker_count=run.threads,
                                    every=run.every)
    except (errors.RothpyError, ValueError) as e:
        raise click.ClickException(str(e))

    doc = scan.to_dict()
    doc.pop('profile')
    doc['density'] = A.density
    run.emit_table(scan.profile, header, doc=doc)
    run.emit_plot(scan.profile['T'], scan.profile['value'], header)

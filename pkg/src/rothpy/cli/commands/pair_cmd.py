import click
from rothpy import averages
from rothpy import errors
from rothpy.cli.runconfig import dyadic_option_scales, set_or_full


@click.command()
@click.option('-s', '--set', 'set_path', metavar='FILE', type=click.Path(exists=True, dir_okay=False),
    help='Set in sets JSON format. [default: A = [0, 1]]')
@click.option('-r', '--r', 'r_values', type=float, multiple=True, metavar='R',
    help='Scale in (0, 1], may be repeated.')
@click.option('--dyadic', nargs=2, type=int, metavar='LO HI',
    help='Dyadic scales 2^-LO down to 2^-HI.')
@click.option('--mode', type=click.Choice(averages.MODES),
    help='Also report the paired pointwise inf or sup over all scales.')
@click.pass_obj
def pair_cmd(run, set_path, r_values, dyadic, mode):
    """
    Pairing <1_A, B_r(1_A, 1_A)> at each scale.

    CSV columns: r, value.
    """
    scales = dyadic_option_scales(r_values, dyadic)
    try:
        A = set_or_full(run, set_path)
        kernel = run.kernel()
        scales.check(run.torus)
        params = {'set': set_path, 'scales': list(scales), 'mode': mode}
        header = run.header('pair', params, kernel)
        run.announce(header)

        df = averages.pairing_profile(A, run.curve, scales, kernel=kernel)
        doc = {'set': A.to_dict(), 'density': A.density}
        if mode:
            doc['extremal'] = {
                'mode': mode,
                'value': averages.paired_extremal(A, run.curve, scales, mode=mode, kernel=kernel),
            }
    except errors.RothpyError as e:
        raise click.ClickException(str(e))

    run.emit_table(df, header, doc=doc)
    run.emit_plot(df['r'], df['value'], header)

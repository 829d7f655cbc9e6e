import os
import click
from rothpy import conf
from rothpy import errors
from rothpy import fileio
from rothpy import frequency
from rothpy import util


@click.command()
@click.option('-s', '--set', 'set_path', metavar='FILE', type=click.Path(exists=True, dir_okay=False),
    help='Decompose the indicator of a set in sets JSON format.')
@click.option('-g', '--grid', 'grid_path', metavar='FILE', type=click.Path(exists=True, dir_okay=False),
    help='Decompose a grid function JSON file.')
@click.option('-l', '--l', 'l', required=True, type=float, metavar='L',
    help='Low scale index.')
@click.option('-k', '--k', 'k', required=True, type=float, metavar='K',
    help='High scale index, K >= L.')
@click.option('-d', '--delta', type=float, metavar='DELTA',
    help='Density in (0, 1]. [default: density of --set, required with --grid]')
@click.option('-C', '--C', 'big_c', type=float, metavar='C',
    help='Log-factor constant. [default: from config, 3]')
@click.option('--g-side', is_flag=True,
    help='Scale the effective indices by the g-side factor.')
@click.option('--pieces-dir', metavar='DIR',
    help='Also write L.json, M.json and H.json grid functions to DIR.')
@click.pass_obj
def decompose_cmd(run, set_path, grid_path, l, k, delta, big_c, g_side, pieces_dir):
    """
    Low/medium/high frequency split f = f_L + f_M + f_H.

    CSV columns: piece, l2_energy, support_lo, support_hi.
    """
    if bool(set_path) == bool(grid_path):
        raise click.UsageError('exactly one of --set or --grid is required')
    if grid_path and delta is None:
        raise click.UsageError('--delta is required with --grid')
    try:
        if set_path:
            A = run.read_set(set_path)
            f = A.mask
            delta = A.density if delta is None else delta
        else:
            f = fileio.read_grid(grid_path)
        big_c = conf.get_float(run.settings, 'frequency', 'C') if big_c is None else big_c
        factor = conf.get_gside_factor(run.settings, run.curve)
        params = {'set': set_path, 'grid': grid_path, 'l': l, 'k': k, 'delta': delta, 'C': big_c,
                  'g_side': g_side, 'factor': factor}
        header = run.header('decompose', params)
        run.announce(header)

        dec = frequency.decompose_lmh(f, l, k, delta, C=big_c, g_side=g_side, factor=factor)
    except errors.RothpyError as e:
        raise click.ClickException(str(e))

    if pieces_dir:
        util.mkdir_p(pieces_dir)
        for name, piece in dec.pieces.items():
            fileio.write_grid(piece, os.path.join(pieces_dir, f'{name}.json'))
    run.emit_table(dec.energies(), header, doc={'decomposition': dec.params()})

import click
import numpy as np
from rothpy import conf
from rothpy import diagnostics
from rothpy import errors
from rothpy import fileio
from rothpy.cli.runconfig import seed_option


@click.command()
@click.option('-f', '--f', 'f_path', metavar='FILE', type=click.Path(exists=True, dir_okay=False),
    help='First function, grid function JSON. [default: seeded random on [0, 1]]')
@click.option('-g', '--g', 'g_path', metavar='FILE', type=click.Path(exists=True, dir_okay=False),
    help='Second function, grid function JSON. [default: seeded random on [0, 1]]')
@click.option('-k', '--k', 'k', default=3, show_default=True, type=int, metavar='K',
    help='Scale index, r = 2^-K.')
@click.option('--m-lo', default=3, show_default=True, type=int, metavar='M',
    help='First frequency offset.')
@click.option('--m-hi', default=8, show_default=True, type=int, metavar='M',
    help='Last frequency offset.')
@click.option('-p', '--p', 'p', default=0, show_default=True, type=click.IntRange(-1, 1),
    help='g-side index offset.')
@click.option('--raw', is_flag=True,
    help='Fit the slope on raw L1 norms instead of normalized values.')
@seed_option
@click.pass_obj
def probe_decay_cmd(run, f_path, g_path, k, m_lo, m_hi, p, raw):
    """
    Decay of ||B_{2^-k}(f_{k+m}, g_{ek+m+p})||_1 in m.

    CSV columns: m, f_index, g_index, value, normalized, included.
    """
    if m_hi - m_lo < 3:
        raise click.UsageError('--m-lo .. --m-hi must span at least 4 values')
    try:
        rng = np.random.default_rng(run.seed)
        f = fileio.read_grid(f_path) if f_path else diagnostics.random_function(run.torus, rng)
        g = fileio.read_grid(g_path) if g_path else diagnostics.random_function(f.config, rng)
        normalize = conf.get_bool(run.settings, 'diagnostics', 'decay_normalize') and not raw
        factor = conf.get_gside_factor(run.settings, run.curve)
        kernel = run.kernel('frequency')
        params = {'f': f_path, 'g': g_path, 'k': k, 'm_lo': m_lo, 'm_hi': m_hi, 'p': p,
                  'normalize': normalize, 'factor': factor}
        header = run.header('probe-decay', params, kernel)
        run.announce(header)

        report = diagnostics.scale_decay_probe(
            f, g, run.curve, k, range(m_lo, m_hi + 1), p=p, kernel=kernel, normalize=normalize,
            factor=factor, slope_max=conf.get_float(run.settings, 'diagnostics', 'decay_slope_max'),
        )
    except errors.RothpyError as e:
        raise click.ClickException(str(e))

    doc = report.to_dict()
    doc.pop('details')
    column = 'normalized' if normalize else 'value'
    run.emit_table(report.details, header, doc=doc)
    run.emit_plot(report.details['m'], report.details[column], header)

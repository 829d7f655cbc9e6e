import click
from rothpy import averages
from rothpy import conf
from rothpy import errors
from rothpy import fileio
from rothpy import search
from rothpy import util
from rothpy.cli.runconfig import seed_option


@click.command()
@click.option('-d', '--delta', type=float, metavar='DELTA',
    help='Density of the searched sets (required unless --calibrate).')
@click.option('--pieces', default=16, show_default=True, type=int, metavar='N',
    help='Number of intervals in the initial random set.')
@click.option('--steps', type=int, metavar='N',
    help='Annealing steps. [default: from config, 2000]')
@click.option('--t0', type=float, metavar='T',
    help='Initial temperature. [default: from config, 1e-3]')
@click.option('--cooling', type=float, metavar='Q',
    help='Geometric cooling factor in (0, 1). [default: from config, 0.995]')
@click.option('--baseline-sets', default=0, show_default=True, type=int, metavar='N',
    help='Report the median objective of N random sets alongside.')
@click.option('-b', '--best', 'best_path', metavar='FILE',
    help='Write the best set found to FILE in sets JSON format.')
@click.option('--calibrate', type=float, multiple=True, metavar='DELTA',
    help='Run a calibration sweep over this density instead, may be repeated.')
@click.option('--repeats', default=4, show_default=True, type=int, metavar='N',
    help='Searches per density in a calibration sweep.')
@seed_option
@click.pass_obj
@util.quiet_keyboardinterrupt
def search_cmd(run, delta, pieces, steps, t0, cooling, baseline_sets, best_path, calibrate, repeats):
    """
    Simulated annealing search for sets of small paired inf.

    CSV columns: step, objective, accepted, best. With --calibrate: delta,
    objective, runs.
    """
    if delta is None and not calibrate:
        raise click.UsageError('one of --delta or --calibrate is required')
    if calibrate and best_path:
        raise click.UsageError('--best cannot be used with --calibrate')
    if baseline_sets < 0:
        raise click.BadParameter('baseline-sets must be >= 0', param_hint='--baseline-sets')
    s = run.settings
    try:
        cfg = search.SearchConfig(
            delta if delta is not None else calibrate[0],
            pieces=pieces,
            steps=conf.get_int(s, 'search', 'steps') if steps is None else steps,
            t0=conf.get_float(s, 'search', 't0') if t0 is None else t0,
            cooling=conf.get_float(s, 'search', 'cooling') if cooling is None else cooling,
            seed=run.seed,
            scales=averages.ScaleGrid.dyadic(conf.get_int(s, 'search', 'scale_lo'),
                                             conf.get_int(s, 'search', 'scale_hi')),
            curve=run.curve,
            kernel=run.kernel(),
            config=run.torus,
            min_spacing=conf.get_float(s, 'search', 'min_spacing'),
        )
        params = {'search': cfg.to_dict(), 'baseline_sets': baseline_sets,
                  'calibrate': list(calibrate), 'repeats': repeats}
        header = run.header('search', params, cfg.kernel)
        run.announce(header)

        if calibrate:
            calibration = search.calibration_sweep(
                calibrate, repeats, cfg, slope_max=conf.get_float(s, 'search', 'calibration_slope_max'),
                worker_count=run.threads, every=run.every)
            run.emit_table(calibration.table, header, doc=calibration.to_dict())
            run.emit_plot(calibration.table['delta'], calibration.table['objective'], header)
            outcome = 'passed' if calibration.passed else 'failed'
            click.echo(f'Calibration slope {calibration.slope:.4g}, max {calibration.slope_max:g}: {outcome}', err=True)
            return

        result = search.search_extremal(cfg, baseline_sets=baseline_sets, every=run.every)
    except errors.RothpyError as e:
        raise click.ClickException(str(e))

    if best_path:
        fileio.write_set(result.best, best_path, header=header)
    run.emit_table(result.trajectory, header, doc=result.to_dict())
    run.emit_plot(result.trajectory['step'], result.trajectory['objective'], header)

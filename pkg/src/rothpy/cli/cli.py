import sys
import click
from rothpy import averages
from rothpy import conf
from rothpy import errors
from rothpy import util
from rothpy.cli.runconfig import RunConfig
from rothpy.cli.commands.decompose_cmd import decompose_cmd
from rothpy.cli.commands.gen_set_cmd import gen_set_cmd
from rothpy.cli.commands.pair_cmd import pair_cmd
from rothpy.cli.commands.partition_report_cmd import partition_report_cmd
from rothpy.cli.commands.probe_decay_cmd import probe_decay_cmd
from rothpy.cli.commands.scan_pinned_cmd import scan_pinned_cmd
from rothpy.cli.commands.search_cmd import search_cmd
from rothpy.cli.commands.verify_cmd import verify_cmd
from rothpy.cli.commands.version_cmd import version_cmd

CONTEXT_SETTINGS = dict(help_option_names=['-h', '--help'])


def validate_power_of_two(ctx, param, value):
    if value is not None and not util.is_power_of_two(value):
        raise click.BadParameter('N must be a power of two')
    return value


def validate_positive(ctx, param, value):
    if value is not None and value <= 0:
        raise click.BadParameter(f'{param.name} must be > 0')
    return value


@click.group(context_settings=CONTEXT_SETTINGS)
@click.option('--N', 'n', type=int, metavar='N', callback=validate_power_of_two,
    help='Grid resolution, a power of two >= 64. [default: from config, 65536]')
@click.option('--L', 'length', type=float, metavar='L', callback=validate_positive,
    help='Torus circumference. [default: from config, 4.0]')
@click.option('--seed', default=0, show_default=True, type=int,
    help='Seed for every random choice.')
@click.option('--curve', metavar='JSON|FILE',
    help='Curve descriptor as inline JSON or a JSON file. [default: {"family": "monomial", "d": 2}]')
@click.option('--kernel', 'kernel_kind', type=click.Choice(averages.KERNELS),
    help='Kernel for all averages. [default: from config]')
@click.option('-o', '--out', metavar='FILE',
    help='Output file, gzip compressed if it ends with .gz. [default: stdout]')
@click.option('--format', 'fmt', type=click.Choice(['json', 'csv']), default='json', show_default=True,
    help='Output format.')
@click.option('--threads', type=int, metavar='N', callback=validate_positive,
    help='Worker processes for parallel sweeps. [default: from config, 1]')
@click.option('--config', 'config_path', default=conf.CONFIG_FILE, show_default=True, metavar='FILE',
    help='Configuration file.')
@click.option('--plot-data', metavar='FILE',
    help='Also write whitespace separated (x, y) pairs to FILE.')
@click.option('-v', '--verbose', is_flag=True,
    help='Print run parameters to stderr.')
@click.pass_context
def cli(ctx, n, length, seed, curve, kernel_kind, out, fmt, threads, config_path, plot_data, verbose):
    """Numerical workbench for bilinear averages along curves."""
    try:
        ctx.obj = RunConfig.resolve(N=n, L=length, seed=seed, curve=curve, kernel_kind=kernel_kind,
                                    out=out, fmt=fmt, threads=threads, config_path=config_path,
                                    plot_data=plot_data, verbose=verbose)
    except errors.RothpyError as e:
        raise click.ClickException(str(e))


cli.add_command(decompose_cmd, 'decompose')
cli.add_command(gen_set_cmd, 'gen-set')
cli.add_command(pair_cmd, 'pair')
cli.add_command(partition_report_cmd, 'partition-report')
cli.add_command(probe_decay_cmd, 'probe-decay')
cli.add_command(scan_pinned_cmd, 'scan-pinned')
cli.add_command(search_cmd, 'search')
cli.add_command(verify_cmd, 'verify')
cli.add_command(version_cmd, 'version')


def main(argv=None):
    """
    Run the CLI and return an exit code.

    0 on success, 1 on usage or validation errors, 2 when a probe suite
    fails.
    """
    try:
        rv = cli.main(args=argv, prog_name='rothpy', standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.ClickException as e:
        e.show()
        return 1
    except errors.RothpyError as e:
        click.echo(f'Error: {e}', err=True)
        return 1
    except click.Abort:
        click.echo('Aborted!', err=True)
        return 1
    # Exit codes from ctx.exit() come back as the return value
    return rv if isinstance(rv, int) else 0


@util.suppress_sigpipe
def run():
    sys.exit(main())

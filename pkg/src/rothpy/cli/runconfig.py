import json
import sys
import click
import rothpy
from rothpy import averages
from rothpy import conf
from rothpy import curves
from rothpy import errors
from rothpy import fileio
from rothpy import grid
from rothpy import sets


class RunConfig:
    """Resolved global options, passed to subcommands as the click context object."""

    def __init__(self, settings, torus, seed, curve, kernel_kind, out, fmt, threads, plot_data, verbose):
        self.settings = settings
        self.torus = torus
        self.seed = seed
        self.curve = curve
        self.kernel_kind = kernel_kind
        self.out = out
        self.fmt = fmt
        self.threads = threads
        self.plot_data = plot_data
        self.verbose = verbose

    @classmethod
    def resolve(cls, N=None, L=None, seed=0, curve=None, kernel_kind=None, out=None, fmt="json",
                threads=None, config_path=None, plot_data=None, verbose=False):
        settings = conf.get_config(config_path)
        if N is not None:
            settings.set("grid", "N", str(N))
        if L is not None:
            settings.set("grid", "L", str(L))
        torus = grid.TorusConfig(L=conf.get_float(settings, "grid", "L"), N=conf.get_int(settings, "grid", "N"))
        P = curves.parse_curve(curve)
        if threads is None:
            threads = conf.get_int(settings, "run", "threads")
        if threads < 1:
            raise errors.ConfigurationError(f"threads must be >= 1, got {threads}")
        return cls(settings, torus, seed, P, kernel_kind, out, fmt, threads, plot_data, verbose)

    @property
    def every(self):
        """Progress resolution in percent for library sweeps, on with --verbose."""
        return 10.0 if self.verbose else None

    def kernel(self, purpose="density"):
        """--kernel if given, else the configured kernel for purpose ("density" or "frequency")."""
        kind = self.kernel_kind or self.settings.get("kernel", purpose)
        return averages.KernelSpec(kind, self.settings.get("kernel", "support"))

    def read_set(self, path):
        return fileio.read_set(path, config=self.torus)

    def header(self, command, params, kernel=None):
        """Reproducibility header embedded in every output."""
        return {
            "rothpy": rothpy.__version__,
            "command": command,
            "params": params,
            "grid": self.torus.to_dict(),
            "seed": self.seed,
            "curve": self.curve.to_dict(),
            "kernel": kernel.to_dict() if kernel is not None else None,
            "settings": conf.as_dict(self.settings),
        }

    def announce(self, header):
        """Print run parameters to stderr when verbose."""
        if self.verbose:
            print("Run parameters and information:", file=sys.stderr)
            print(json.dumps(header, indent=2, sort_keys=True), file=sys.stderr)
            print("", file=sys.stderr)

    def emit_table(self, df, header, doc=None):
        """Write df as CSV or, with --format json, as doc plus a rows list."""
        if self.fmt == "csv":
            text = fileio.format_table(df, header=header)
        else:
            body = dict(doc or {})
            body["rows"] = df.to_dict(orient="records")
            body["config"] = header
            text = fileio.dumps(body)
        self._write(text)

    def emit_doc(self, doc, header):
        self._write(fileio.dumps(dict(doc, config=header)))

    def emit_set(self, A, header):
        doc = A.to_dict()
        doc["config"] = header
        self._write(fileio.dumps(doc))

    def emit_plot(self, xs, ys, header):
        if self.plot_data:
            fileio.write_plot_data(xs, ys, self.plot_data, header=header)

    def _write(self, text):
        if self.out:
            with fileio.file_open_w(self.out) as fh:
                fh.write(text)
        else:
            click.echo(text, nl=False)


def dyadic_option_scales(r_values, dyadic):
    """Scale list from repeated --r values or a --dyadic LO HI exponent range."""
    if r_values and dyadic:
        raise click.UsageError("use either --r or --dyadic, not both")
    if r_values:
        return averages.as_scale_grid(r_values)
    if dyadic:
        return averages.ScaleGrid.dyadic(*dyadic)
    raise click.UsageError("one of --r or --dyadic is required")


def set_or_full(run, path):
    """Set from path, or [0, 1] when path is None."""
    return run.read_set(path) if path else sets.full(run.torus)


def _override_seed(ctx, param, value):
    if value is not None:
        ctx.find_object(RunConfig).seed = value
    return value


seed_option = click.option('--seed', type=int, metavar='N', expose_value=False, callback=_override_seed,
                           help='Seed for this command, overrides the global --seed.')

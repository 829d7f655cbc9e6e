import click
import rothpy


@click.command()
def version_cmd():
    """Displays version."""
    click.echo(rothpy.__version__)

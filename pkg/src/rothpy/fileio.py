from contextlib import contextmanager
import gzip
import io
import json
import numpy as np
import pandas as pd
from . import errors
from . import grid
from . import partition
from . import sets


@contextmanager
def file_open_r(path):
    """
    Open path for reading text as a context manager.

    If path ends with '.gz' data will be considered gzip compressed.

    Parameters
    -----------
    path: str
        File path.

    Returns
    -------
    Context manager for a text file-like object.
    """
    if path.endswith('.gz'):
        with gzip.open(path, 'rt', encoding="utf-8") as fh:
            yield fh
    else:
        with io.open(path, 'r', encoding="utf-8") as fh:
            yield fh


@contextmanager
def file_open_w(path):
    """
    Open path for writing text as a context manager.

    If path ends with '.gz' data will be gzip compressed. The gzip header
    carries no timestamp or file name, so identical content gives identical
    bytes.

    Parameters
    -----------
    path: str
        File path.

    Returns
    -------
    Context manager for a writable text file-like object.
    """
    with io.open(path, 'wb') as raw:
        if path.endswith('.gz'):
            with gzip.GzipFile(filename="", mode="wb", fileobj=raw, mtime=0) as gz, \
                    io.TextIOWrapper(gz, encoding="utf-8", newline="\n") as fh:
                yield fh
        else:
            with io.TextIOWrapper(raw, encoding="utf-8", newline="\n") as fh:
                yield fh


def _read_text(path):
    try:
        with file_open_r(path) as fh:
            return fh.read()
    except (IOError, EOFError) as e:
        raise errors.FileError(f"File could not be read: {e}")


def _load_json(path):
    try:
        return json.loads(_read_text(path))
    except ValueError as e:
        raise errors.FileError(f"{path} is not valid JSON: {e}")


def dumps(doc):
    """Canonical JSON text, sorted keys, trailing newline. nan and inf become null."""
    return json.dumps(_finite(doc), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _finite(value):
    if isinstance(value, dict):
        return {k: _finite(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if np.isfinite(value) else None
    return value


def read_set(path, config=None, strict=False):
    """Read a DensitySet from the sets JSON format {"intervals": [...], "label": ...}."""
    return sets.DensitySet.from_dict(_load_json(path), config=config, strict=strict)


def write_set(A, path, header=None):
    """Write A in the sets JSON format, with an optional "config" header."""
    doc = A.to_dict()
    if header is not None:
        doc["config"] = header
    with file_open_w(path) as fh:
        fh.write(dumps(doc))


def read_partition(path):
    """
    Read an AdmissiblePartition from JSON, either a list of [lo, hi] pairs or
    {"intervals": [[lo, hi], ...]}.
    """
    doc = _load_json(path)
    intervals = doc.get("intervals") if isinstance(doc, dict) else doc
    if not isinstance(intervals, list):
        raise errors.FileError(f"{path} has no interval list")
    return partition.AdmissiblePartition(intervals)


def read_grid(path):
    return grid.GridFunction.from_json(_read_text(path))


def write_grid(f, path):
    with file_open_w(path) as fh:
        fh.write(f.to_json())
        fh.write("\n")


def write_json(doc, path, header=None):
    """Write doc as canonical JSON, embedding header under "config"."""
    if header is not None:
        doc = dict(doc, config=header)
    with file_open_w(path) as fh:
        fh.write(dumps(doc))


def format_table(df, header=None):
    """CSV text of df, preceded by a '# ' JSON header line if header is given."""
    text = df.to_csv(index=False, lineterminator="\n")
    if header is not None:
        text = "# " + json.dumps(header, sort_keys=True) + "\n" + text
    return text


def write_table(df, path, header=None):
    """Write df as CSV with an optional '# ' prefixed JSON header line."""
    with file_open_w(path) as fh:
        fh.write(format_table(df, header=header))


def read_table(path):
    """
    Read a CSV written by write_table().

    Returns
    -------
    (dict or None, pandas.DataFrame)
        Header and table.
    """
    with file_open_r(path) as fh:
        first = fh.readline()
        header = None
        if first.startswith("# "):
            try:
                header = json.loads(first[2:])
            except ValueError as e:
                raise errors.FileError(f"{path} has a malformed header line: {e}")
            df = pd.read_csv(fh)
        else:
            df = pd.read_csv(io.StringIO(first + fh.read()))
    return header, df


def write_plot_data(xs, ys, path, header=None):
    """Two whitespace separated columns x y, full float precision."""
    data = np.column_stack([np.asarray(xs, dtype=float), np.asarray(ys, dtype=float)])
    comment = json.dumps(header, sort_keys=True) if header is not None else ""
    with file_open_w(path) as fh:
        np.savetxt(fh, data, fmt="%.17g", header=comment)

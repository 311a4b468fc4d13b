"""
Common file and formatting helpers.
"""

import contextlib
import os
import tempfile

from .errors import ArtifactIOError


def format_float(value):
    """Shortest text that reads back to the identical float"""
    return repr(float(value))


def parse_int_list(text):
    """Parse '2,3,4' into [2, 3, 4]"""
    return [int(part) for part in text.split(",") if part.strip()]


def check_readable(path):
    """Raise ArtifactIOError unless path names a readable file"""
    if not path:
        raise ArtifactIOError("Empty path")
    if not os.path.isfile(path):
        raise ArtifactIOError(f"File not found: {path}")


def read_lines(path):
    """
    Read a UTF-8 text file.

    Returns:
        List of (line_no, line) tuples with trailing newlines stripped;
        line numbers are 1-based
    """
    check_readable(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            return [(i, line.rstrip("\r\n")) for i, line in enumerate(f, start=1)]
    except (OSError, UnicodeDecodeError) as e:
        raise ArtifactIOError(f"Cannot read {path}: {e}") from e


@contextlib.contextmanager
def atomic_write(path):
    """
    Write a text file so readers never observe a partial result.

    Usage:
        with atomic_write("model.g2g") as f:
            f.write(text)

    The content goes to a temporary file in the target directory and
    replaces ``path`` only when the block exits without an exception.
    """
    if not path:
        raise ArtifactIOError("Empty path")
    directory = os.path.dirname(os.path.abspath(path))
    try:
        os.makedirs(directory, exist_ok=True)
        fd, tmp_path = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    except OSError as e:
        raise ArtifactIOError(f"Cannot write {path}: {e}") from e

    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            yield f
        os.replace(tmp_path, path)
    except BaseException:
        with contextlib.suppress(OSError):
            os.unlink(tmp_path)
        raise

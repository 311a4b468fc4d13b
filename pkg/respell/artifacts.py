"""
Versioned headers shared by every model file.

A model file starts with:

    \\respell\\
    kind=<kind>
    version=<n>
    key=value
    ...

followed by a blank line and the kind-specific body.
"""

from .errors import FormatVersionMismatch, ModelFormatError
from .utils import read_lines

MAGIC = "\\respell\\"


def write_header(f, kind, version, fields=()):
    """
    Args:
        f: Text file handle
        kind: Artifact kind, e.g. 'char-lm'
        version: Integer format version
        fields: Iterable of (key, value) pairs written in order
    """
    f.write(f"{MAGIC}\nkind={kind}\nversion={version}\n")
    for key, value in fields:
        f.write(f"{key}={value}\n")
    f.write("\n")


def open_artifact(path, kind, version):
    """
    Read a model file and check its header.

    Returns:
        (header dict, iterator over the remaining (line_no, text) pairs)

    Raises:
        ArtifactIOError: unreadable file
        FormatVersionMismatch: wrong kind or version
        ModelFormatError: malformed header
    """
    lines = iter(read_lines(path))
    first = next(lines, None)
    if first is None or first[1] != MAGIC:
        found = "an empty file" if first is None else repr(first[1][:40])
        raise FormatVersionMismatch(f"a {kind} file", found)

    header = {}
    for line_no, text in lines:
        if not text.strip():
            break
        key, sep, value = text.partition("=")
        if not sep:
            raise ModelFormatError(f"{path}:{line_no}: bad header line {text!r}")
        header[key.strip()] = value.strip()
    else:
        raise ModelFormatError(f"{path}: truncated header")

    found_kind = header.get("kind")
    if found_kind != kind:
        raise FormatVersionMismatch(f"kind={kind}", f"kind={found_kind}")
    if header.get("version") != str(version):
        raise FormatVersionMismatch(f"{kind} version {version}", f"version {header.get('version')}")
    return header, lines


def header_int(header, key, path):
    """Fetch an integer header field"""
    try:
        return int(header[key])
    except (KeyError, ValueError) as e:
        raise ModelFormatError(f"{path}: missing or bad header field {key!r}") from e


def header_float(header, key, path):
    """Fetch a float header field"""
    try:
        return float(header[key])
    except (KeyError, ValueError) as e:
        raise ModelFormatError(f"{path}: missing or bad header field {key!r}") from e

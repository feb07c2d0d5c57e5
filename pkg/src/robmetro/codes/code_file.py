# this_file: src/robmetro/codes/code_file.py

"""
Reading and writing plain-text code files.

Format, one generator row per line::

    # Steane X-stabilizer code
    n=7
    1110100
    0111010
    0011101

Lines whose first non-blank character is '#' are comments. The ``n=<N>``
header is optional when rows are present and required for the trivial code,
which has none.
"""

import re
from pathlib import Path

import numpy as np
from loguru import logger

from robmetro.codes.builtin import get_code, is_builtin_name
from robmetro.codes.linear_code import BinaryCode, gf2_rank
from robmetro.errors import CodeFileError

_HEADER = re.compile(r"^n\s*=\s*(\d+)$")
_ROW = re.compile(r"^[01]+$")


def parse_code_text(text: str, path: Path | None = None, name: str | None = None) -> BinaryCode:
    """
    Parse the contents of a code file.

    Raises:
        CodeFileError: Malformed line, inconsistent lengths, missing header
            or a row dependent on the rows above it. The error carries the
            1-based line number.
    """
    n: int | None = None
    rows: list[list[int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        header = _HEADER.match(line)
        if header is not None:
            if n is not None or rows:
                msg = "Header n=<N> must appear once, before any row"
                raise CodeFileError(msg, path, lineno)
            n = int(header.group(1))
            if n < 1:
                msg = "Code length must be positive"
                raise CodeFileError(msg, path, lineno)
            continue
        if not _ROW.match(line):
            msg = f"Expected a row of 0/1 characters, got {line!r}"
            raise CodeFileError(msg, path, lineno)
        if n is None:
            n = len(line)
        elif len(line) != n:
            msg = f"Row has length {len(line)}, expected {n}"
            raise CodeFileError(msg, path, lineno)
        rows.append([int(c) for c in line])
        if gf2_rank(np.array(rows, dtype=np.uint8)) < len(rows):
            msg = f"Row {line} is linearly dependent on the rows above it"
            raise CodeFileError(msg, path, lineno)
    if n is None:
        msg = "Empty code file needs an n=<N> header"
        raise CodeFileError(msg, path)
    label = name or (path.stem if path is not None else "")
    matrix = np.array(rows, dtype=np.uint8).reshape(len(rows), n)
    try:
        return BinaryCode(n=n, generators=matrix, name=label)
    except ValueError as e:
        raise CodeFileError(str(e), path) from e


def load_code(path: Path) -> BinaryCode:
    """Read a code file from disk."""
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        msg = f"Cannot read code file: {e}"
        raise CodeFileError(msg, path) from e
    code = parse_code_text(text, path=path)
    logger.debug(f"Loaded {code!r} from {path}")
    return code


def resolve_code(ref: str) -> BinaryCode:
    """A built-in code name, or else a path to a code file."""
    path = Path(ref)
    if path.is_file():
        return load_code(path)
    if is_builtin_name(ref):
        return get_code(ref)
    msg = f"'{ref}' is neither a built-in code name nor an existing file"
    raise CodeFileError(msg)


def format_code(code: BinaryCode) -> str:
    """Render ``code`` in the code-file format."""
    lines = [f"# {code.name}", f"n={code.n}"]
    lines.extend(str(g) for g in code.generator_vectors)
    return "\n".join(lines) + "\n"

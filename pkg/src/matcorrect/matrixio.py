"""The bit-exact text format for matrices.

Header line ``MPC1 <rows> <cols> <modulus>`` (modulus 0 means wrapping
64-bit arithmetic), then one line of space-separated canonical decimal
integers per row, LF-terminated.  parse(serialize(M)) == M bit-exact.
"""

from __future__ import annotations

from .errors import MatCorrectError
from .matrix import Matrix
from .ring import RingContext

MAGIC = "MPC1"


class FormatError(MatCorrectError):
    """Malformed matrix file."""


def serialize(m: Matrix) -> str:
    lines = [f"{MAGIC} {m.rows} {m.cols} {m.ctx.modulus}"]
    for i in range(m.rows):
        lines.append(" ".join(str(int(v)) for v in m.data[i, :]))
    return "\n".join(lines) + "\n"


def parse(text: str) -> Matrix:
    lines = text.split("\n")
    if not lines or not lines[0].startswith(MAGIC + " "):
        raise FormatError(f"missing {MAGIC} header")
    header = lines[0].split()
    if len(header) != 4:
        raise FormatError(f"bad header {lines[0]!r}")
    try:
        rows, cols, modulus = int(header[1]), int(header[2]), int(header[3])
    except ValueError as exc:
        raise FormatError(f"bad header {lines[0]!r}") from exc
    ctx = RingContext(modulus)
    m = Matrix.zeros(rows, cols, ctx)
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != rows:
        raise FormatError(f"expected {rows} rows, found {len(body)}")
    for i, line in enumerate(body):
        values = line.split()
        if len(values) != cols:
            raise FormatError(f"row {i}: expected {cols} values, found {len(values)}")
        for j, token in enumerate(values):
            value = int(token)
            if modulus > 0 and not 0 <= value < modulus:
                raise FormatError(f"row {i}: value {value} not canonical mod {modulus}")
            if modulus == 0 and not 0 <= value < (1 << 64):
                raise FormatError(f"row {i}: value {value} outside 64 bits")
            m.data[i, j] = ctx.normalize(value)
    return m


def write_file(m: Matrix, path: str) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(serialize(m))


def read_file(path: str) -> Matrix:
    with open(path) as fh:
        return parse(fh.read())

"""
core/serialization.py
Text codecs: the S-box table format, key=value report blocks and CSV run rows.

S-box format:
    line 1      n
    next lines  2^n values, lowercase hex of width ceil(n/4), 16 per line, space separated
    optional    one blank line, then `key=value` lines (ignored by the parser)
"""
import re
from dataclasses import asdict
from pathlib import Path
from typing import Mapping, Optional

from config import MIN_N, MAX_N
from core.exceptions import SBoxFormatError
from core.sbox import SBox, sbox_from_table

VALUES_PER_LINE = 16
_KV_LINE = re.compile(r"^[a-z_][a-z0-9_]*=\S*$")


def hex_width(n: int) -> int:
    return (n + 3) // 4


def format_sbox(s: SBox) -> str:
    width = hex_width(s.n)
    values = [format(v, f"0{width}x") for v in s.tolist()]
    lines = [str(s.n)]
    for start in range(0, len(values), VALUES_PER_LINE):
        lines.append(" ".join(values[start:start + VALUES_PER_LINE]))
    return "\n".join(lines) + "\n"


def format_kv_block(fields: Mapping[str, object]) -> str:
    lines = []
    for key, value in fields.items():
        if isinstance(value, bool):
            value = str(value).lower()
        lines.append(f"{key}={value}")
    return "\n".join(lines) + "\n"


def format_report(report) -> str:
    """key=value block for a PropertyReport (or any dataclass instance)."""
    return format_kv_block(asdict(report))


def parse_sbox(text: str) -> SBox:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise SBoxFormatError("empty S-box file")

    header = lines[0]
    if not re.fullmatch(r"[0-9]+", header):
        raise SBoxFormatError(f"first line must be the bit width, got {header!r}")
    n = int(header)
    if not MIN_N <= n <= MAX_N:
        raise SBoxFormatError(f"bit width {n} outside [{MIN_N}, {MAX_N}]")

    size = 1 << n
    n_lines = -(-size // VALUES_PER_LINE)
    table_lines = lines[1:1 + n_lines]
    if len(table_lines) < n_lines:
        raise SBoxFormatError(f"expected {n_lines} table lines, found {len(table_lines)}")

    width = hex_width(n)
    token = re.compile(rf"[0-9a-f]{{{width}}}")
    values = []
    for lineno, line in enumerate(table_lines, start=2):
        expected = min(VALUES_PER_LINE, size - len(values))
        tokens = line.split(" ")
        if len(tokens) != expected:
            raise SBoxFormatError(f"line {lineno}: expected {expected} values, found {len(tokens)}")
        for tok in tokens:
            if not token.fullmatch(tok):
                raise SBoxFormatError(f"line {lineno}: bad value {tok!r} (want {width} lowercase hex digits)")
            values.append(int(tok, 16))

    trailer = lines[1 + n_lines:]
    if trailer:
        if trailer[0] != "":
            raise SBoxFormatError(f"line {2 + n_lines}: expected a blank line before the report block")
        for offset, line in enumerate(trailer[1:], start=3 + n_lines):
            if not _KV_LINE.match(line):
                raise SBoxFormatError(f"line {offset}: report lines must be key=value, got {line!r}")

    # LengthMismatchError cannot fire here; NotBijectiveError propagates.
    return sbox_from_table(n, values)


def read_sbox_file(path) -> SBox:
    try:
        text = Path(path).read_text(encoding="ascii")
    except UnicodeDecodeError as e:
        raise SBoxFormatError(f"{path}: not an ASCII S-box file ({e})") from e
    return parse_sbox(text)


def write_sbox_file(path, s: SBox, report: Optional[Mapping[str, object]] = None) -> None:
    text = format_sbox(s)
    if report:
        text += "\n" + format_kv_block(report)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="ascii")

"""Plain-text exchange formats: columnar vectors, flat records, CSV curves.

Everything here is deterministic: keys are sorted, floats are written with
repr (shortest round-trip form), and no timestamps or paths enter a record.
"""

from __future__ import annotations

import csv
import io
import json

import numpy as np

__all__ = [
    "format_value",
    "render_record",
    "parse_record",
    "write_record",
    "write_column",
    "read_column",
    "write_columns",
    "read_columns",
    "taylor_to_text",
    "taylor_from_text",
    "write_csv",
    "canonical_json",
]


def format_value(v):
    """Deterministic text form for scalars used in flat records."""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (complex, np.complexfloating)):
        c = complex(v)
        return f"{format_value(c.real)}{'+' if c.imag >= 0 else '-'}{format_value(abs(c.imag))}j"
    return str(v)


def render_record(record: dict) -> str:
    """Flat key=value text, one entry per line, keys sorted."""
    lines = [f"{k}={format_value(record[k])}" for k in sorted(record)]
    return "\n".join(lines) + "\n"


def parse_record(text: str) -> dict:
    """Inverse of render_record; values stay strings except obvious numbers."""
    out = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, raw = line.partition("=")
        raw = raw.strip()
        if raw in ("true", "false"):
            out[key.strip()] = raw == "true"
            continue
        for cast in (int, float, complex):
            try:
                out[key.strip()] = cast(raw)
                break
            except ValueError:
                continue
        else:
            out[key.strip()] = raw
    return out


def write_record(path, record: dict):
    with open(path, "w") as fh:
        fh.write(render_record(record))


def write_column(path, values):
    values = np.asarray(values).ravel()
    with open(path, "w") as fh:
        for v in values:
            fh.write(format_value(v) + "\n")


def read_column(path):
    with open(path) as fh:
        vals = [float(line) for line in fh if line.strip() and not line.startswith("#")]
    return np.array(vals)


def write_columns(path, *columns):
    cols = [np.asarray(c).ravel() for c in columns]
    n = len(cols[0])
    if any(len(c) != n for c in cols):
        raise ValueError("columns must share a length")
    with open(path, "w") as fh:
        for i in range(n):
            fh.write(" ".join(format_value(c[i]) for c in cols) + "\n")


def read_columns(path, count):
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != count:
                raise ValueError(f"expected {count} columns, got {len(parts)}")
            rows.append([float(p) for p in parts])
    arr = np.array(rows)
    return tuple(arr[:, j] for j in range(count))


def taylor_to_text(coeffs) -> str:
    """Columnar (re, im) pairs, one coefficient per line, ascending degree."""
    coeffs = np.asarray(coeffs, dtype=complex).ravel()
    buf = io.StringIO()
    for c in coeffs:
        buf.write(f"{format_value(c.real)} {format_value(c.imag)}\n")
    return buf.getvalue()


def taylor_from_text(text: str):
    coeffs = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        re_s, im_s = line.split()
        coeffs.append(complex(float(re_s), float(im_s)))
    return np.array(coeffs, dtype=complex)


def write_csv(path, header, columns):
    cols = [np.asarray(c).ravel() for c in columns]
    if len(header) != len(cols):
        raise ValueError("header/column count mismatch")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for i in range(len(cols[0])):
            writer.writerow([format_value(c[i]) for c in cols])


def canonical_json(obj) -> str:
    """Sorted-key JSON with no whitespace variance; bit-exact round trips."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))

"""File formats of the lab: field dumps, stored runs and result reports."""

from crflab.io.dumps import (
    decode_field,
    encode_field,
    load_background,
    load_trajectory,
    read_field,
    read_scalar,
    save_background,
    save_trajectory,
    write_field,
)
from crflab.io.reports import (
    SCHEMA_VERSION,
    build_summary,
    write_diagnostics_csv,
    write_pgm,
    write_report,
    write_summary,
)

__all__ = [
    "SCHEMA_VERSION",
    "build_summary",
    "decode_field",
    "encode_field",
    "load_background",
    "load_trajectory",
    "read_field",
    "read_scalar",
    "save_background",
    "save_trajectory",
    "write_diagnostics_csv",
    "write_field",
    "write_pgm",
    "write_report",
    "write_summary",
]

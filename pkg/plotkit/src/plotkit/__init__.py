"""Figure scripts over ddelab CSV outputs.

plotkit never recomputes math: every curve is rendered verbatim from the
files the CLI wrote.  Each script takes CSV paths plus -o <image path> and
emits both PNG and SVG next to each other.
"""

from .csvio import SchemaError, read_columns

__all__ = ["SchemaError", "read_columns"]

"""Figure reproduction for oscgauss CSV outputs."""

from .figures import (
    FIGURE_INPUTS,
    SCHEMAS,
    FigureSpec,
    SchemaMismatchError,
    make_figure,
    read_csv,
)

__all__ = [
    "FIGURE_INPUTS",
    "SCHEMAS",
    "FigureSpec",
    "SchemaMismatchError",
    "make_figure",
    "read_csv",
]

__version__ = "0.1.0"

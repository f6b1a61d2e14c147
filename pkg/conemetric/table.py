"""Typed tables of numbers, printed with tabulate.

Cells are formatted by their column type with a fixed precision before
tabulate sees them, so the printed digits never depend on tabulate's own
number parsing."""

from tabulate import tabulate

import conemetric.utils as utils

# Column type -> (formatter(value, precision), alignment).
COLUMN_TYPES = {
    'str': (lambda value, precision: value, 'left'),
    'int': (lambda value, precision: str(int(value)), 'right'),
    'float': (utils.format_float, 'right'),
    'vector': (utils.format_vector, 'left'),
}


class Table:
    """Rows of cells with a type per column. A cell that is None prints as
    an empty string."""

    def __init__(self, numcols, headers=(), coltypes=None, precision=12):
        """
        Args:
            numcols: Number of columns.
            headers: Optional header row.
            coltypes: Keys of COLUMN_TYPES, one per column. Defaults to
            'str' columns.
            precision: Digits after the decimal point in 'float' and
            'vector' cells.
        """
        coltypes = list(coltypes or ['str'] * numcols)
        assert len(coltypes) == numcols
        assert all(c in COLUMN_TYPES for c in coltypes), (
            'Bad column type in coltypes')
        assert not headers or len(headers) == numcols
        self._coltypes = coltypes
        self._headers = list(headers)
        self._precision = precision
        self._rows = []

    def add_row(self, row):
        assert len(row) <= len(self._coltypes)
        self._rows.append(row)
        return self

    def set_rows(self, rows):
        assert all(len(row) <= len(self._coltypes) for row in rows)
        self._rows = list(rows)
        return self

    def headers(self):
        return self._headers

    def col_align(self):
        return [COLUMN_TYPES[c][1] for c in self._coltypes]

    def list(self):
        """The raw cells, row by row."""
        return self._rows

    def str_list(self):
        """The cells formatted by their column types, row by row."""
        return [[self._format(coltype, cell)
                 for coltype, cell in zip(self._coltypes, row)]
                for row in self._rows]

    def _format(self, coltype, cell):
        if cell is None:
            return ''
        return COLUMN_TYPES[coltype][0](cell, self._precision)

    def string(self, tablefmt='plain'):
        """The table rendered by tabulate in tablefmt; '' when empty."""
        cells = self.str_list()
        if not cells:
            return ''
        return tabulate(cells, headers=self._headers, tablefmt=tablefmt,
                        colalign=self.col_align(), disable_numparse=True)

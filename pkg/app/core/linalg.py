# app/core/linalg.py

"""
Sparse exact Gaussian elimination.

Rows are dicts column -> value, values being Fraction, CycNum, or anything with the
field operations. The echelon form is kept fully reduced: every stored row has pivot
coefficient 1 and no other row contains its pivot column.
"""

import logging
from collections import defaultdict

logger = logging.getLogger(__name__)


def is_zero(x) -> bool:
    test = getattr(x, "is_zero", None)
    return test() if callable(test) else x == 0


def _inv(x):
    inverse = getattr(x, "inverse", None)
    return inverse() if callable(inverse) else 1 / x


class SparseEchelon:
    """Reduced row echelon form with the pivot taken at the largest column of each row."""

    def __init__(self):
        self.rows: dict[int, dict] = {}
        self._occurs: dict[int, set[int]] = defaultdict(set)

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> set[int]:
        return set(self.rows)

    def reduce(self, vec: dict) -> dict:
        """Remainder of vec modulo the row space, free of pivot columns."""
        v = {c: x for c, x in vec.items() if not is_zero(x)}
        for col in [c for c in v if c in self.rows]:
            f = v.pop(col)
            for c, x in self.rows[col].items():
                if c == col:
                    continue
                nv = v[c] - f * x if c in v else -(f * x)
                if is_zero(nv):
                    v.pop(c, None)
                else:
                    v[c] = nv
        return v

    def add_row(self, vec: dict) -> bool:
        """Insert a row; returns False when it was already in the span."""
        v = self.reduce(vec)
        if not v:
            return False
        p = max(v)
        inv = _inv(v[p])
        row = {c: x * inv for c, x in v.items()}
        for q in list(self._occurs.get(p, ())):
            target = self.rows[q]
            f = target.pop(p)
            self._occurs[p].discard(q)
            for c, x in row.items():
                if c == p:
                    continue
                nv = target[c] - f * x if c in target else -(f * x)
                if is_zero(nv):
                    if c in target:
                        del target[c]
                        self._occurs[c].discard(q)
                else:
                    if c not in target:
                        self._occurs[c].add(q)
                    target[c] = nv
        self._occurs.pop(p, None)
        self.rows[p] = row
        for c in row:
            if c != p:
                self._occurs[c].add(p)
        return True

    def basis(self, ncols: int) -> list[int]:
        """Columns without a pivot."""
        return [c for c in range(ncols) if c not in self.rows]

    def solve_for(self, col: int) -> dict | None:
        """The pivot row for col rewritten as col = -(sum of the other entries)."""
        row = self.rows.get(col)
        if row is None:
            return None
        return {c: -x for c, x in row.items() if c != col}

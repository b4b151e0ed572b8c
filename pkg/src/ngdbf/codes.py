"""Parity-check code model: alist parsing and Tanner-graph queries.

A code is held purely as adjacency lists (the Tanner graph), never as a
dense matrix; block lengths of a few thousand symbols are routine and the
decoders only ever walk neighborhoods.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from pathlib import Path

import numpy as np


class AlistError(ValueError):
    """Structural problem in an alist file; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def as_bipolar(values) -> np.ndarray:
    """Validate and convert a {-1,+1} sequence to an int8 array."""
    x = np.asarray(values, dtype=np.int8)
    if x.ndim != 1:
        raise ValueError("bipolar vector must be one-dimensional")
    if not np.all(np.abs(x) == 1):
        raise ValueError("bipolar vector entries must be exactly -1 or +1")
    return x


def bipolar_sign(values) -> np.ndarray:
    """Hard decisions sign(v) with the convention sign(0) = +1."""
    v = np.asarray(values)
    return np.where(v >= 0, 1, -1).astype(np.int8)


@dataclass(frozen=True, eq=False)
class ParityCheckCode:
    """An LDPC code given by its Tanner graph.

    Attributes
    ----------
    n, m : int
        Symbol (column) and check (row) counts, with ``n > m >= 1``.
    col_neighbors : tuple of int arrays
        For each symbol k, the ordered check indices M(k).
    row_neighbors : tuple of int arrays
        For each check i, the ordered symbol indices N(i).

    Instances are immutable after construction and safe to share across
    concurrent frame workers.
    """

    n: int
    m: int
    col_neighbors: tuple
    row_neighbors: tuple

    def __post_init__(self):
        if not (self.n > self.m >= 1):
            raise ValueError(f"need n > m >= 1, got n={self.n}, m={self.m}")
        if len(self.col_neighbors) != self.n or len(self.row_neighbors) != self.m:
            raise ValueError("neighbor list counts do not match n, m")
        for i, row in enumerate(self.row_neighbors):
            if len(row) < 2:
                raise ValueError(f"check {i} has degree {len(row)} < 2")
        for k, col in enumerate(self.col_neighbors):
            if len(col) < 1:
                raise ValueError(f"symbol {k} has degree 0")
        # Membership symmetry: k in N(i)  <=>  i in M(k).
        edges_from_rows = {(i, int(k)) for i, row in enumerate(self.row_neighbors) for k in row}
        edges_from_cols = {(int(i), k) for k, col in enumerate(self.col_neighbors) for i in col}
        if edges_from_rows != edges_from_cols:
            raise ValueError("row/column neighbor lists describe different edge sets")

    @classmethod
    def from_rows(cls, n: int, rows) -> "ParityCheckCode":
        """Build a code from per-check symbol index lists, deriving M(k)."""
        cols = [[] for _ in range(n)]
        for i, row in enumerate(rows):
            for k in row:
                cols[k].append(i)
        return cls(
            n=n,
            m=len(rows),
            col_neighbors=tuple(np.asarray(c, dtype=np.int64) for c in cols),
            row_neighbors=tuple(np.asarray(r, dtype=np.int64) for r in rows),
        )

    # -- basic descriptors -------------------------------------------------

    @property
    def max_dv(self) -> int:
        return max(len(c) for c in self.col_neighbors)

    @property
    def max_dc(self) -> int:
        return max(len(r) for r in self.row_neighbors)

    @property
    def rate(self) -> Fraction:
        return Fraction(self.n - self.m, self.n)

    @property
    def n_edges(self) -> int:
        return sum(len(r) for r in self.row_neighbors)

    def degree_histograms(self):
        """Return ({col_degree: count}, {row_degree: count})."""
        cols = {}
        for c in self.col_neighbors:
            cols[len(c)] = cols.get(len(c), 0) + 1
        rows = {}
        for r in self.row_neighbors:
            rows[len(r)] = rows.get(len(r), 0) + 1
        return cols, rows

    # -- flat edge arrays for vectorized decoding --------------------------

    @cached_property
    def _row_ptr(self) -> np.ndarray:
        degs = [len(r) for r in self.row_neighbors]
        return np.concatenate(([0], np.cumsum(degs))).astype(np.int64)

    @cached_property
    def _row_sym(self) -> np.ndarray:
        """Symbol index per edge, edges grouped by check (row-major)."""
        return np.concatenate(self.row_neighbors).astype(np.int64)

    @cached_property
    def _col_ptr(self) -> np.ndarray:
        degs = [len(c) for c in self.col_neighbors]
        return np.concatenate(([0], np.cumsum(degs))).astype(np.int64)

    @cached_property
    def _col_chk(self) -> np.ndarray:
        """Check index per edge, edges grouped by symbol (column-major)."""
        return np.concatenate(self.col_neighbors).astype(np.int64)

    @cached_property
    def _row_deg(self) -> np.ndarray:
        return np.diff(self._row_ptr)

    @cached_property
    def _col_deg(self) -> np.ndarray:
        return np.diff(self._col_ptr)

    @cached_property
    def _row_to_col_perm(self) -> np.ndarray:
        """Permutation mapping row-major edge ids to column-major order."""
        chk_per_edge = np.repeat(np.arange(self.m, dtype=np.int64), self._row_deg)
        return np.lexsort((chk_per_edge, self._row_sym))

    # -- syndrome operations ------------------------------------------------

    def syndrome(self, x: np.ndarray) -> np.ndarray:
        """Bipolar syndrome: entry i is the product of x over N(i).

        +1 means check i is satisfied.
        """
        if len(x) != self.n:
            raise ValueError(f"decision vector has length {len(x)}, code needs {self.n}")
        return np.multiply.reduceat(x[self._row_sym], self._row_ptr[:-1]).astype(np.int8)

    def is_codeword(self, x: np.ndarray) -> bool:
        """True iff every bipolar syndrome component equals +1."""
        return bool(self.syndrome(x).min() == 1)

    def syndrome_sums(self, s: np.ndarray) -> np.ndarray:
        """Per-symbol sum of adjacent syndrome components, sum over M(k)."""
        if len(s) != self.m:
            raise ValueError(f"syndrome vector has length {len(s)}, code needs {self.m}")
        return np.add.reduceat(s[self._col_chk].astype(np.int32), self._col_ptr[:-1])


# ---------------------------------------------------------------------------
# alist format
# ---------------------------------------------------------------------------


def parse_alist(text: str) -> ParityCheckCode:
    """Parse the standard alist sparse-matrix interchange format.

    Layout: ``n m`` / ``max_dv max_dc`` / n column degrees / m row degrees /
    n column index lists / m row index lists.  File indices are 1-based and
    converted to 0-based here; zero entries inside the index lists are
    padding and are skipped.

    Raises
    ------
    AlistError
        On any malformed record, naming the offending line.
    """
    lines = text.splitlines()

    def ints(lineno: int, expect: int | None = None, what: str = "") -> list:
        if lineno > len(lines):
            raise AlistError(lineno, f"file ends early, expected {what}")
        raw = lines[lineno - 1].split()
        try:
            vals = [int(tok) for tok in raw]
        except ValueError:
            raise AlistError(lineno, f"non-integer token in {what}") from None
        if expect is not None and len(vals) != expect:
            raise AlistError(lineno, f"expected {expect} integers for {what}, got {len(vals)}")
        return vals

    n, m = ints(1, 2, "header 'n m'")
    if not (n > m >= 1):
        raise AlistError(1, f"header requires n > m >= 1, got n={n}, m={m}")
    max_dv, max_dc = ints(2, 2, "header 'max_dv max_dc'")
    col_degs = ints(3, n, "column degrees")
    row_degs = ints(4, m, "row degrees")
    if max(col_degs) != max_dv:
        raise AlistError(3, f"column degrees peak at {max(col_degs)}, header claims {max_dv}")
    if max(row_degs) != max_dc:
        raise AlistError(4, f"row degrees peak at {max(row_degs)}, header claims {max_dc}")
    for k, d in enumerate(col_degs):
        if d < 1:
            raise AlistError(3, f"column {k + 1} declares degree {d} < 1")
    for i, d in enumerate(row_degs):
        if d < 2:
            raise AlistError(4, f"row {i + 1} declares degree {d} < 2")

    def index_list(lineno: int, degree: int, bound: int, what: str) -> np.ndarray:
        vals = ints(lineno, None, what)
        nonzero = [v for v in vals if v != 0]
        if len(nonzero) != degree:
            raise AlistError(
                lineno, f"{what} lists {len(nonzero)} indices, degree {degree} declared"
            )
        for v in nonzero:
            if not (1 <= v <= bound):
                raise AlistError(lineno, f"{what} index {v} outside 1..{bound}")
        if len(set(nonzero)) != degree:
            raise AlistError(lineno, f"{what} contains a duplicate index")
        return np.asarray(nonzero, dtype=np.int64) - 1

    cols = [
        index_list(5 + k, col_degs[k], m, f"column {k + 1}") for k in range(n)
    ]
    rows = [
        index_list(5 + n + i, row_degs[i], n, f"row {i + 1}") for i in range(m)
    ]

    # Cross-check membership symmetry before constructing the code so the
    # error can still point at a file line.
    from_cols = [set() for _ in range(m)]
    for k, col in enumerate(cols):
        for i in col:
            from_cols[int(i)].add(k)
    for i, row in enumerate(rows):
        if set(int(k) for k in row) != from_cols[i]:
            raise AlistError(
                5 + n + i, f"row {i + 1} disagrees with the column lists (asymmetric membership)"
            )

    for extra in range(5 + n + m, len(lines) + 1):
        if extra <= len(lines) and lines[extra - 1].strip():
            raise AlistError(extra, "unexpected trailing content")

    return ParityCheckCode(n=n, m=m, col_neighbors=tuple(cols), row_neighbors=tuple(rows))


def serialize_alist(code: ParityCheckCode) -> str:
    """Render a code back to alist text (irregular lists are zero-padded)."""
    out = [f"{code.n} {code.m}", f"{code.max_dv} {code.max_dc}"]
    out.append(" ".join(str(len(c)) for c in code.col_neighbors))
    out.append(" ".join(str(len(r)) for r in code.row_neighbors))

    def pad(indices, width):
        entries = [str(int(i) + 1) for i in indices]
        entries += ["0"] * (width - len(entries))
        return " ".join(entries)

    out.extend(pad(c, code.max_dv) for c in code.col_neighbors)
    out.extend(pad(r, code.max_dc) for r in code.row_neighbors)
    return "\n".join(out) + "\n"


def load_alist(path) -> ParityCheckCode:
    return parse_alist(Path(path).read_text())

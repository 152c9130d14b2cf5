"""Exact integer matrices, Smith normal form and linear solving.

Everything here works over Python integers, so there is no overflow and no
rounding.  The Smith normal form uses a fixed pivot rule (smallest absolute
value, ties broken by lowest row then lowest column), which makes every
output reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence


@dataclass(frozen=True)
class IntMatrix:
    """An immutable rows x cols integer matrix, stored row-major."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError(
                f"entry count does not match a {self.rows}x{self.cols} matrix"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(len(data), cols, data)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> IntMatrix:
        data = tuple(tuple(int(col[i]) for col in columns) for i in range(rows))
        return cls(rows, len(columns), data)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def diagonal(cls, values: Sequence[int], rows: int | None = None, cols: int | None = None) -> IntMatrix:
        rows = len(values) if rows is None else rows
        cols = len(values) if cols is None else cols
        out = [[0] * cols for _ in range(rows)]
        for i, v in enumerate(values):
            out[i][i] = int(v)
        return cls.from_rows(out, cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> IntMatrix:
        return IntMatrix.from_rows(self.columns(), self.rows)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        ocols = other.columns()
        return IntMatrix.from_rows(
            [[sum(a * b for a, b in zip(r, c)) for c in ocols] for r in self.entries],
            other.cols,
        )

    def apply(self, vec: Sequence) -> list:
        """Matrix times a column vector (entries may be ints or Fractions)."""
        if len(vec) != self.cols:
            raise ValueError("vector length does not match matrix")
        return [sum((a * v for a, v in zip(r, vec) if a), 0) for r in self.entries]

    def __add__(self, other: IntMatrix) -> IntMatrix:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch in matrix sum")
        return IntMatrix.from_rows(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)], self.cols
        )

    def __neg__(self) -> IntMatrix:
        return IntMatrix.from_rows([[-a for a in r] for r in self.entries], self.cols)

    def scale(self, k: int) -> IntMatrix:
        return IntMatrix.from_rows([[k * a for a in r] for r in self.entries], self.cols)

    def hstack(self, other: IntMatrix) -> IntMatrix:
        if self.rows != other.rows:
            raise ValueError("row count mismatch in hstack")
        return IntMatrix.from_rows(
            [r + s for r, s in zip(self.entries, other.entries)], self.cols + other.cols
        )

    def select_rows(self, idx: Iterable[int]) -> IntMatrix:
        return IntMatrix.from_rows([self.entries[i] for i in idx], self.cols)

    def select_columns(self, idx: Iterable[int]) -> IntMatrix:
        idx = list(idx)
        return IntMatrix.from_rows([[r[j] for j in idx] for r in self.entries], len(idx))

    def det(self) -> int:
        """Determinant by fraction-free Bareiss elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = [list(r) for r in self.entries]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1

    def to_text(self) -> str:
        lines = [f"{self.rows} {self.cols}"]
        lines += [" ".join(str(x) for x in r) for r in self.entries]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, source: str = "<matrix>") -> IntMatrix:
        lines = [ln.strip() for ln in text.splitlines()]
        lines = [(i + 1, ln) for i, ln in enumerate(lines) if ln and not ln.startswith("#")]
        if not lines:
            raise ValueError(f"{source}: empty matrix file")
        lineno, head = lines[0]
        try:
            rows, cols = (int(x) for x in head.split())
        except ValueError:
            raise ValueError(f"{source}:{lineno}: expected 'rows cols' header") from None
        body = lines[1:]
        if len(body) != rows:
            raise ValueError(f"{source}: expected {rows} rows, found {len(body)}")
        data = []
        for lineno, ln in body:
            try:
                vals = [int(x) for x in ln.split()]
            except ValueError:
                raise ValueError(f"{source}:{lineno}: non-integer entry") from None
            if len(vals) != cols:
                raise ValueError(f"{source}:{lineno}: expected {cols} entries, found {len(vals)}")
            data.append(vals)
        return cls.from_rows(data, cols)

    def __str__(self) -> str:
        return self.to_text().rstrip()


def _find_pivot(a: list[list[int]], t: int) -> tuple[int, int] | None:
    # smallest |entry| in the block a[t:, t:]; row-major scan gives the tie-break
    best = None
    best_abs = 0
    for i in range(t, len(a)):
        row = a[i]
        for j in range(t, len(row)):
            x = row[j]
            if x:
                ax = x if x > 0 else -x
                if best is None or ax < best_abs:
                    best, best_abs = (i, j), ax
                    if ax == 1:
                        return best
    return best


class _SNFWork:
    """Mutable elimination state with optional transform tracking."""

    def __init__(self, m: IntMatrix, track: str):
        self.a = [list(r) for r in m.entries]
        self.nr, self.nc = m.rows, m.cols
        eye = lambda n: [[int(i == j) for j in range(n)] for i in range(n)]
        self.u = eye(self.nr) if "u" in track else None
        self.ui = eye(self.nr) if "U" in track else None
        self.v = eye(self.nc) if "v" in track else None
        self.vi = eye(self.nc) if "V" in track else None

    def swap_rows(self, i: int, j: int) -> None:
        if i == j:
            return
        a = self.a
        a[i], a[j] = a[j], a[i]
        if self.u is not None:
            self.u[i], self.u[j] = self.u[j], self.u[i]
        if self.ui is not None:
            for r in self.ui:
                r[i], r[j] = r[j], r[i]

    def swap_cols(self, i: int, j: int) -> None:
        if i == j:
            return
        for r in self.a:
            r[i], r[j] = r[j], r[i]
        if self.v is not None:
            for r in self.v:
                r[i], r[j] = r[j], r[i]
        if self.vi is not None:
            self.vi[i], self.vi[j] = self.vi[j], self.vi[i]

    def add_row(self, dst: int, src: int, q: int) -> None:
        # row_dst += q * row_src
        if not q:
            return
        rs, rd = self.a[src], self.a[dst]
        for k, x in enumerate(rs):
            if x:
                rd[k] += q * x
        if self.u is not None:
            rs, rd = self.u[src], self.u[dst]
            for k, x in enumerate(rs):
                if x:
                    rd[k] += q * x
        if self.ui is not None:
            for r in self.ui:
                if r[dst]:
                    r[src] -= q * r[dst]

    def add_col(self, dst: int, src: int, q: int) -> None:
        # col_dst += q * col_src
        if not q:
            return
        for r in self.a:
            if r[src]:
                r[dst] += q * r[src]
        if self.v is not None:
            for r in self.v:
                if r[src]:
                    r[dst] += q * r[src]
        if self.vi is not None:
            rs, rd = self.vi[dst], self.vi[src]
            for k, x in enumerate(rs):
                if x:
                    rd[k] -= q * x

    def negate_row(self, i: int) -> None:
        self.a[i] = [-x for x in self.a[i]]
        if self.u is not None:
            self.u[i] = [-x for x in self.u[i]]
        if self.ui is not None:
            for r in self.ui:
                r[i] = -r[i]

    def run(self) -> int:
        a, nr, nc = self.a, self.nr, self.nc
        t = 0
        while t < min(nr, nc):
            piv = _find_pivot(a, t)
            if piv is None:
                break
            self.swap_rows(t, piv[0])
            self.swap_cols(t, piv[1])
            while True:
                p = a[t][t]
                clean = True
                for r in range(t + 1, nr):
                    if a[r][t]:
                        self.add_row(r, t, -(a[r][t] // p))
                        if a[r][t]:
                            clean = False
                for c in range(t + 1, nc):
                    if a[t][c]:
                        self.add_col(c, t, -(a[t][c] // p))
                        if a[t][c]:
                            clean = False
                if not clean:
                    # a smaller remainder appeared; re-pivot on the block
                    piv = _find_pivot(a, t)
                    self.swap_rows(t, piv[0])
                    self.swap_cols(t, piv[1])
                    continue
                # a unit pivot divides everything, so the scan is only needed otherwise
                bad = None if p in (1, -1) else next(
                    (r for r in range(t + 1, nr) if any(x % p for x in a[r][t + 1:])), None
                )
                if bad is None:
                    break
                self.add_row(t, bad, 1)
            if a[t][t] < 0:
                self.negate_row(t)
            t += 1
        return t


def _as_matrix(rows: list[list[int]] | None, n: int) -> IntMatrix | None:
    return None if rows is None else IntMatrix.from_rows(rows, n)


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, S, V) with U*M*V = S, U and V unimodular.

    S is diagonal with non-negative entries d1 | d2 | ... followed by zeros.

    >>> U, S, V = smith_normal_form(IntMatrix.from_rows([[2, 4], [6, 8]]))
    >>> S.entries
    ((2, 0), (0, 4))
    """
    w = _SNFWork(m, "uv")
    w.run()
    return (
        IntMatrix.from_rows(w.u, m.rows),
        IntMatrix.from_rows(w.a, m.cols),
        IntMatrix.from_rows(w.v, m.cols),
    )


@dataclass(frozen=True)
class SNFData:
    """Smith form of a matrix with the transforms and their inverses."""

    diag: tuple[int, ...]  # nonzero invariant factors, length = rank
    u: IntMatrix
    u_inv: IntMatrix
    v: IntMatrix
    v_inv: IntMatrix

    @property
    def rank(self) -> int:
        return len(self.diag)


@lru_cache(maxsize=256)
def snf_data(m: IntMatrix, row_transforms: bool = True) -> SNFData:
    """Cached Smith form with the transforms U, U^-1, V, V^-1.

    With row_transforms=False only V and V^-1 are tracked (U fields are then
    empty placeholders), which is much cheaper for tall matrices.
    """
    w = _SNFWork(m, "uUvV" if row_transforms else "vV")
    r = w.run()
    diag = tuple(w.a[i][i] for i in range(r) if w.a[i][i])
    empty = IntMatrix.zeros(0, 0)
    return SNFData(
        diag,
        IntMatrix.from_rows(w.u, m.rows) if row_transforms else empty,
        IntMatrix.from_rows(w.ui, m.rows) if row_transforms else empty,
        IntMatrix.from_rows(w.v, m.cols),
        IntMatrix.from_rows(w.vi, m.cols),
    )


def invariant_factors(m: IntMatrix) -> tuple[int, ...]:
    """Nonzero diagonal of the Smith form (no transforms tracked)."""
    w = _SNFWork(m, "")
    r = w.run()
    return tuple(w.a[i][i] for i in range(r) if w.a[i][i])


# Coefficient kinds for linear solving: an int d >= 0 is Z/d (0 means Z);
# QQ is the rationals and QZ is Q/Z.
QQ = "Q"
QZ = "Q/Z"


def _inv_mod(a: int, n: int) -> int:
    return pow(a, -1, n) if n > 1 else 0


def _solve_diag(s: int | None, rhs, kind):
    """Solve s*y = rhs in the given kind; s None means a zero row."""
    if s is None:
        if kind == 0 or kind == QQ:
            ok = rhs == 0
        elif kind == QZ:
            ok = Fraction(rhs).denominator == 1
        else:
            ok = rhs % kind == 0
        return (0 if ok else None)
    if kind == 0:
        return rhs // s if rhs % s == 0 else None
    if kind == QQ:
        return Fraction(rhs) / s
    if kind == QZ:
        return (Fraction(rhs) / s) % 1
    g = gcd(s, kind)
    if rhs % g:
        return None
    mod = kind // g
    return (rhs // g) * _inv_mod((s // g) % mod, mod) % mod if mod > 1 else 0


def solve(a: IntMatrix, rhs: Sequence, kind) -> list | None:
    """Find x with a*x = rhs, working in the coefficient kind.

    Returns None when the system has no solution.  The matrix Smith form is
    cached, so repeated solves against one matrix are cheap.
    """
    if len(rhs) != a.rows:
        raise ValueError("right-hand side has the wrong length")
    if a.cols == 0:
        return [] if all(_solve_diag(None, c, kind) is not None for c in rhs) else None
    d = snf_data(a)
    urhs = d.u.apply(rhs)
    y = []
    for i in range(a.cols):
        if i < d.rank:
            yi = _solve_diag(d.diag[i], urhs[i], kind)
            if yi is None:
                return None
            y.append(yi)
        else:
            y.append(0)
    for i in range(d.rank, a.rows):
        if _solve_diag(None, urhs[i], kind) is None:
            return None
    x = d.v.apply(y)
    if kind == QZ:
        return [Fraction(v) % 1 for v in x]
    if kind not in (0, QQ):
        return [v % kind for v in x]
    return x


def integer_kernel(a: IntMatrix) -> IntMatrix:
    """A basis (as columns) of the integer kernel of a."""
    d = snf_data(a)
    cols = [d.v.column(j) for j in range(d.rank, a.cols)]
    return IntMatrix.from_columns(cols, a.cols)


def image_basis(a: IntMatrix) -> IntMatrix:
    """A basis (as columns) of the lattice spanned by the columns of a."""
    d = snf_data(a)
    # a = U^-1 S V^-1, so the image is spanned by d_i times the first columns of U^-1
    cols = [[d.diag[i] * x for x in d.u_inv.column(i)] for i in range(d.rank)]
    return IntMatrix.from_columns(cols, a.rows)

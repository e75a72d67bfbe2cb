"""Exact integer and rational linear algebra.

Everything here works on Python integers, so entries never overflow. Matrices
act on column vectors; ``A @ x`` is the usual matrix-vector product.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence

import numpy as np

RationalVector = tuple  # tuple[Fraction, ...], canonical by construction


class IntMatrix:
    """Immutable dense matrix of arbitrary-precision integers."""

    __slots__ = ("rows", "cols", "_data", "_hash")

    def __init__(self, data: Iterable[Sequence[int]], cols: Optional[int] = None):
        rows = tuple(tuple(int(x) for x in row) for row in data)
        if cols is None:
            if not rows:
                raise ValueError("cols must be given for a matrix without rows")
            cols = len(rows[0])
        for row in rows:
            if len(row) != cols:
                raise ValueError("ragged matrix")
        self.rows = len(rows)
        self.cols = cols
        self._data = rows
        self._hash = None

    @classmethod
    def from_flat(cls, rows: int, cols: int, entries: Sequence[int]) -> "IntMatrix":
        if len(entries) != rows * cols:
            raise ValueError("entries length must equal rows * cols")
        return cls([entries[i * cols:(i + 1) * cols] for i in range(rows)], cols=cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def diag(cls, entries: Sequence[int]) -> "IntMatrix":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def entries(self) -> tuple[int, ...]:
        return tuple(x for row in self._data for x in row)

    def row(self, i: int) -> tuple[int, ...]:
        return self._data[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self._data)

    def tolist(self) -> list[list[int]]:
        return [list(row) for row in self._data]

    def __iter__(self):
        return iter(self._data)

    def __getitem__(self, idx):
        i, j = idx
        return self._data[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.cols == other.cols and self._data == other._data

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.cols, self._data))
        return self._hash

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()!r})"

    @property
    def T(self) -> "IntMatrix":
        if self.rows == 0:
            return IntMatrix([[] for _ in range(self.cols)], cols=0)
        return IntMatrix(zip(*self._data), cols=self.rows)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same(other)
        return IntMatrix(([a + b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)), cols=self.cols)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same(other)
        return IntMatrix(([a - b for a, b in zip(r, s)] for r, s in zip(self._data, other._data)), cols=self.cols)

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(([-a for a in r] for r in self._data), cols=self.cols)

    def scale(self, c: int) -> "IntMatrix":
        return IntMatrix(([c * a for a in r] for r in self._data), cols=self.cols)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            ocols = list(zip(*other._data)) if other.rows else [()] * other.cols
            return IntMatrix(
                ([sum(a * b for a, b in zip(r, c)) for c in ocols] for r in self._data),
                cols=other.cols,
            )
        vec = tuple(other)
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(r, vec)) for r in self._data)

    def _check_same(self, other: "IntMatrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def is_square(self) -> bool:
        return self.rows == self.cols

    def trace(self) -> int:
        return sum(self._data[i][i] for i in range(min(self.rows, self.cols)))

    def det(self) -> int:
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        return bareiss_det([list(r) for r in self._data])

    def is_unimodular(self) -> bool:
        return self.is_square() and abs(self.det()) == 1


def bareiss_det(a: list[list[int]]) -> int:
    """Fraction-free determinant; ``a`` is consumed."""
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            ri, rk = a[i], a[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * akk - aik * rk[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class SmithDecomposition:
    """``D = U @ A @ V`` with ``D`` in Smith form; ``U_inv`` is kept when requested."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    U_inv: Optional[IntMatrix] = None

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D[i, i] for i in range(min(self.D.rows, self.D.cols)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        """Nonzero diagonal entries different from one."""
        return tuple(d for d in self.diagonal if d > 1)

    def solve(self, b: Sequence[int]) -> Optional[tuple[int, ...]]:
        """Integer solution of ``A x = b`` or ``None`` when none exists."""
        if len(b) != self.U.cols:
            raise ValueError("right-hand side has the wrong length")
        c = self.U @ tuple(b)
        diag = self.diagonal
        y = [0] * self.V.rows
        for i, ci in enumerate(c):
            d = diag[i] if i < len(diag) else 0
            if d == 0:
                if ci:
                    return None
            elif ci % d:
                return None
            else:
                y[i] = ci // d
        return self.V @ y


def smith_normal_form(A: IntMatrix, *, with_inverse: bool = False) -> SmithDecomposition:
    """Smith normal form with unimodular transforms, smallest-pivot strategy.

    ``with_inverse`` additionally accumulates ``U^-1``, which the cohomology
    code needs to lift class coordinates back to cochains.
    """
    m, n = A.rows, A.cols
    a = A.tolist()
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    # transpose of U^-1, so that its column operations become row operations
    UiT = [[int(i == j) for j in range(m)] for i in range(m)] if with_inverse else None

    def row_add(i: int, k: int, c: int) -> None:
        # row_i += c * row_k
        ri, rk = a[i], a[k]
        for j in range(n):
            if rk[j]:
                ri[j] += c * rk[j]
        ui, uk = U[i], U[k]
        for j in range(m):
            if uk[j]:
                ui[j] += c * uk[j]
        if UiT is not None:
            wk, wi = UiT[k], UiT[i]
            for j in range(m):
                if wi[j]:
                    wk[j] -= c * wi[j]

    def row_swap(i: int, k: int) -> None:
        if i != k:
            a[i], a[k] = a[k], a[i]
            U[i], U[k] = U[k], U[i]
            if UiT is not None:
                UiT[i], UiT[k] = UiT[k], UiT[i]

    def row_neg(i: int) -> None:
        a[i] = [-x for x in a[i]]
        U[i] = [-x for x in U[i]]
        if UiT is not None:
            UiT[i] = [-x for x in UiT[i]]

    def col_add(j: int, k: int, c: int) -> None:
        # col_j += c * col_k
        for row in a:
            if row[k]:
                row[j] += c * row[k]
        for row in V:
            if row[k]:
                row[j] += c * row[k]

    def col_swap(j: int, k: int) -> None:
        if j != k:
            for row in a:
                row[j], row[k] = row[k], row[j]
            for row in V:
                row[j], row[k] = row[k], row[j]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        row_swap(t, best[1])
        col_swap(t, best[2])
        while True:
            p = a[t][t]
            for i in range(t + 1, m):
                if a[i][t]:
                    row_add(i, t, -(a[i][t] // p))
            for j in range(t + 1, n):
                if a[t][j]:
                    col_add(j, t, -(a[t][j] // p))
            cand = None
            for i in range(t + 1, m):
                v = a[i][t]
                if v and (cand is None or abs(v) < cand[0]):
                    cand = (abs(v), i, None)
            for j in range(t + 1, n):
                v = a[t][j]
                if v and (cand is None or abs(v) < cand[0]):
                    cand = (abs(v), None, j)
            if cand is not None:
                if cand[1] is not None:
                    row_swap(t, cand[1])
                else:
                    col_swap(t, cand[2])
                continue
            bad = None
            for i in range(t + 1, m):
                row = a[i]
                for j in range(t + 1, n):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_add(t, bad, 1)
        if a[t][t] < 0:
            row_neg(t)
        t += 1

    U_inv = IntMatrix(zip(*UiT), cols=m) if UiT is not None and m else (
        IntMatrix([], cols=0) if UiT is not None else None)
    return SmithDecomposition(
        U=IntMatrix(U, cols=m),
        D=IntMatrix(a, cols=n),
        V=IntMatrix(V, cols=n),
        U_inv=U_inv,
    )


def hermite_normal_form(A: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form ``H = U @ A``.

    Pivots are positive, entries above a pivot lie in ``[0, pivot)``, and zero
    rows are collected at the bottom.
    """
    m, n = A.rows, A.cols
    a = A.tolist()
    U = [[int(i == j) for j in range(m)] for i in range(m)]

    def row_add(i, k, c):
        a[i] = [x + c * y for x, y in zip(a[i], a[k])]
        U[i] = [x + c * y for x, y in zip(U[i], U[k])]

    r = 0
    for j in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if a[i][j]]
            if not nz:
                break
            k = min(nz, key=lambda i: (abs(a[i][j]), i))
            a[r], a[k] = a[k], a[r]
            U[r], U[k] = U[k], U[r]
            if len(nz) == 1:
                break
            for i in range(r + 1, m):
                if a[i][j]:
                    row_add(i, r, -(a[i][j] // a[r][j]))
        if a[r][j] == 0:
            continue
        if a[r][j] < 0:
            a[r] = [-x for x in a[r]]
            U[r] = [-x for x in U[r]]
        for i in range(r):
            q = a[i][j] // a[r][j]
            if q:
                row_add(i, r, -q)
        r += 1
    return IntMatrix(a, cols=n), IntMatrix(U, cols=m)


def kernel_basis(A: IntMatrix) -> IntMatrix:
    """Rows form a saturated basis of ``{x : A x = 0}``."""
    n = A.cols
    if A.rows == 0:
        return IntMatrix.identity(n)
    snf = smith_normal_form(A)
    r = snf.rank
    V = snf.V
    return IntMatrix([V.column(j) for j in range(r, n)], cols=n)


def solve_mod_image(A: IntMatrix, b: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Integer ``x`` with ``A x = b``, or ``None`` if ``b`` is outside the image lattice."""
    if len(b) != A.rows:
        raise ValueError(f"dimension mismatch: A has {A.rows} rows, b has length {len(b)}")
    return smith_normal_form(A).solve(b)


def rank(A: IntMatrix) -> int:
    """Rank over the rationals (fraction-free elimination)."""
    a = [list(r) for r in A if any(r)]
    rk = 0
    col = 0
    while a and col < A.cols:
        piv = next((i for i, r in enumerate(a) if r[col]), None)
        if piv is None:
            col += 1
            continue
        pr = a.pop(piv)
        p = pr[col]
        rest = []
        for r in a:
            c = r[col]
            if c:
                r = [p * x - c * y for x, y in zip(r, pr)]
                g = 0
                for x in r:
                    g = gcd(g, x)
                if g > 1:
                    r = [x // g for x in r]
            if any(r):
                rest.append(r)
        a = rest
        rk += 1
        col += 1
    return rk


def rank_mod_p(A, p: int = 2147483629) -> int:
    """Rank over ``F_p`` of an integer array; vectorised with numpy.

    ``p`` must stay below ``2**31`` so products fit in int64.
    """
    if isinstance(A, IntMatrix):
        # reduce first: entries may exceed int64
        A = [[x % p for x in r] for r in A] if A.rows else np.zeros((0, A.cols), dtype=np.int64)
    M = np.array(A, dtype=np.int64) % p
    if M.ndim != 2 or M.size == 0:
        return 0
    rows, cols = M.shape
    rk = 0
    for c in range(cols):
        if rk == rows:
            break
        nz = np.nonzero(M[rk:, c])[0]
        if nz.size == 0:
            continue
        piv = rk + int(nz[0])
        if piv != rk:
            M[[rk, piv]] = M[[piv, rk]]
        inv = pow(int(M[rk, c]), -1, p)
        M[rk] = (M[rk] * inv) % p
        below = M[rk + 1:, c].copy()
        mask = below != 0
        if mask.any():
            idx = np.nonzero(mask)[0] + rk + 1
            M[idx] = (M[idx] - (below[mask][:, None] * M[rk][None, :]) % p) % p
        rk += 1
    return rk


def rational_inverse(M: Sequence[Sequence]) -> list[list[Fraction]]:
    """Gauss-Jordan inverse over the rationals."""
    n = len(M)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [row[n:] for row in a]


def rational_matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    cols = list(zip(*B))
    return [[sum(x * y for x, y in zip(r, c)) for c in cols] for r in A]


def rational_matvec(A: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(x * y for x, y in zip(r, v)) for r in A)


def as_rational_vector(values: Iterable) -> RationalVector:
    return tuple(Fraction(x) for x in values)

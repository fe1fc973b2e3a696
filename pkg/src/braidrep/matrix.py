"""Dense matrices over the exact rational function field.

Small and unapologetically quadratic: representation matrices stay at
n <= 10 or so (strand counts up to 6, module rank n(n-1)/2 up to 10),
so clarity wins over sparsity tricks.  Entries are RationalFunction;
zero tests are exact, so Gauss-Jordan elimination is valid symbolically.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .errors import ZeroInverse
from .symalg import Polynomial, RationalFunction, as_rf

_ZERO = RationalFunction.zero()
_ONE = RationalFunction.one()


class Matrix:
    __slots__ = ("rows",)

    def __init__(self, rows: Sequence[Sequence]):
        self.rows = tuple(tuple(as_rf(e) for e in row) for row in rows)
        if not self.rows:
            raise ValueError("empty matrix")
        width = len(self.rows[0])
        if any(len(r) != width for r in self.rows):
            raise ValueError("ragged rows")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0])

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, entries: Sequence) -> "Matrix":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def permutation(cls, images: Sequence[int]) -> "Matrix":
        """Matrix sending basis vector e_j to e_{images[j]} (0-based)."""
        n = len(images)
        return cls([[1 if images[j] == i else 0 for j in range(n)] for i in range(n)])

    def entry(self, i: int, j: int) -> RationalFunction:
        return self.rows[i][j]

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.ncols} vs {other.nrows}")
            cols = other.ncols
            out = []
            for i in range(self.nrows):
                row = []
                left = self.rows[i]
                for j in range(cols):
                    acc = _ZERO
                    for k in range(self.ncols):
                        a = left[k]
                        if a.is_zero():
                            continue
                        b = other.rows[k][j]
                        if b.is_zero():
                            continue
                        acc = acc + a * b
                    row.append(acc)
                out.append(row)
            return Matrix(out)
        try:
            scalar = as_rf(other)
        except TypeError:
            return NotImplemented
        return Matrix([[e * scalar for e in row] for row in self.rows])

    def __rmul__(self, other):
        try:
            scalar = as_rf(other)
        except TypeError:
            return NotImplemented
        return Matrix([[scalar * e for e in row] for row in self.rows])

    def __add__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return Matrix(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)]
        )

    def __sub__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return Matrix(
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)]
        )

    def __neg__(self) -> "Matrix":
        return Matrix([[-e for e in row] for row in self.rows])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.nrows != other.nrows or self.ncols != other.ncols:
            return False
        return all(
            a == b for r1, r2 in zip(self.rows, other.rows) for a, b in zip(r1, r2)
        )

    __hash__ = None

    def is_identity(self) -> bool:
        if self.nrows != self.ncols:
            return False
        for i, row in enumerate(self.rows):
            for j, e in enumerate(row):
                if i == j:
                    if not e.is_one():
                        return False
                elif not e.is_zero():
                    return False
        return True

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.rows for e in row)

    def transpose(self) -> "Matrix":
        return Matrix([[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)])

    def det2(self) -> RationalFunction:
        if self.nrows != 2 or self.ncols != 2:
            raise ValueError("det2 wants a 2x2 matrix")
        r = self.rows
        return r[0][0] * r[1][1] - r[0][1] * r[1][0]

    def inverse(self) -> "Matrix":
        """Gauss-Jordan over the function field; exact zero tests make pivoting safe."""
        n = self.nrows
        if n != self.ncols:
            raise ValueError("only square matrices invert")
        if n == 2:
            d = self.det2()
            if d.is_zero():
                raise ZeroInverse("singular matrix")
            r = self.rows
            return Matrix(
                [[r[1][1] / d, -r[0][1] / d], [-r[1][0] / d, r[0][0] / d]]
            )
        work = [list(row) for row in self.rows]
        aug = [
            [(_ONE if i == j else _ZERO) for j in range(n)] for i in range(n)
        ]
        for col in range(n):
            pivot = None
            for r in range(col, n):
                if not work[r][col].is_zero():
                    pivot = r
                    break
            if pivot is None:
                raise ZeroInverse("singular matrix")
            work[col], work[pivot] = work[pivot], work[col]
            aug[col], aug[pivot] = aug[pivot], aug[col]
            inv = work[col][col].inverse()
            work[col] = [e * inv for e in work[col]]
            aug[col] = [e * inv for e in aug[col]]
            for r in range(n):
                if r == col:
                    continue
                f = work[r][col]
                if f.is_zero():
                    continue
                work[r] = [a - f * b for a, b in zip(work[r], work[col])]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
        return Matrix(aug)

    def evaluate(self, assignment: Mapping[str, Fraction]) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(tuple(e.evaluate(assignment) for e in row) for row in self.rows)

    def substitute(self, assignment: Mapping[str, RationalFunction]) -> "Matrix":
        return Matrix([[e.substitute(assignment) for e in row] for row in self.rows])

    def map(self, fn: Callable[[RationalFunction], RationalFunction]) -> "Matrix":
        return Matrix([[fn(e) for e in row] for row in self.rows])

    def variables(self) -> tuple[str, ...]:
        seen: set[str] = set()
        for row in self.rows:
            for e in row:
                seen.update(e.variables())
        return tuple(sorted(seen))

    def to_json(self) -> list[list[dict]]:
        return [[e.to_json() for e in row] for row in self.rows]

    def __str__(self) -> str:
        body = "; ".join(", ".join(str(e) for e in row) for row in self.rows)
        return f"[{body}]"

    def __repr__(self) -> str:
        return f"Matrix({self})"


def conjugate(m: Matrix, d: Matrix) -> Matrix:
    """d^{-1} m d."""
    return d.inverse() * m * d

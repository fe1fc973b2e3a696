"""Lawrence-Krammer-Bigelow matrices and their welded extensions.

Three variants share the basis {x_{i,j} : 1 <= i < j <= n}, ordered
lexicographically: the full two-parameter braid representation, the
one-parameter welded action, and the three-strand two-family extension
carrying an extra unit b.  The welded sigma-action is implemented exactly as
its defining formulas state it; whether it agrees with the full variant at
t = 1 is left to the verification layer to decide, not assumed here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .errors import IndexOutOfRange
from .localrep import ExplicitRep
from .matrix import Matrix
from .presentations import Generator
from .symalg import Polynomial, RationalFunction, as_rf

_ONE = RationalFunction.one()
_T = as_rf(Polynomial.variable("t"))
_Q = as_rf(Polynomial.variable("q"))


def lkb_basis(n: int) -> tuple[tuple[int, int], ...]:
    """Ordered basis index pairs (i, j), 1 <= i < j <= n, lexicographic."""
    if n < 3:
        raise IndexOutOfRange(f"basis needs n >= 3, got {n}")
    return tuple((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1))


def _q_power(m: int) -> RationalFunction:
    return as_rf(Polynomial.variable("q", m))


def _full_action(k: int, i: int, j: int) -> dict[tuple[int, int], RationalFunction]:
    """Image of x_{i,j} under the k-th braid generator, full variant."""
    if (i, j) == (k, k + 1):
        return {(k, k + 1): _T * _Q * _Q}
    if j == k:
        return {(i, k): _ONE - _Q, (i, k + 1): _Q}
    if j == k + 1 and i < k:
        return {(i, k): _ONE, (k, k + 1): _T * _q_power(k - i + 1) * (_Q - 1)}
    if i == k and j > k + 1:
        return {(k, k + 1): _T * _Q * (_Q - 1), (k + 1, j): _Q}
    if i == k + 1:
        return {(k, j): _ONE, (k + 1, j): _ONE - _Q}
    if i < k and j > k + 1:
        return {(i, j): _ONE, (k, k + 1): _T * _q_power(k - i) * (_Q - 1) * (_Q - 1)}
    return {(i, j): _ONE}


def _welded_action(k: int, i: int, j: int) -> dict[tuple[int, int], RationalFunction]:
    """Image of x_{i,j} under the k-th welded crossing, as the formulas print it."""
    if (i, j) == (k, k + 1):
        return {(k, k + 1): _Q * _Q}
    if j == k:
        return {(i, k): _ONE - _Q, (i, k + 1): _Q, (k, k + 1): _Q * (_Q - 1)}
    if j == k + 1 and i < k:
        return {(i, k): _ONE}
    if i == k and j > k + 1:
        return {(k, k + 1): _Q * (_Q - 1), (k, j): _ONE - _Q, (k + 1, j): _Q}
    if i == k + 1:
        return {(k, j): _ONE}
    return {(i, j): _ONE}


def _columns_to_matrix(n: int, action) -> Matrix:
    basis = lkb_basis(n)
    index = {pair: pos for pos, pair in enumerate(basis)}
    size = len(basis)
    rows = [[RationalFunction.zero()] * size for _ in range(size)]
    for col, pair in enumerate(basis):
        for target, coeff in action(*pair).items():
            rows[index[target]][col] = coeff
    return Matrix(rows)


def lkb_matrix(n: int, k: int) -> Matrix:
    """Action matrix of the k-th braid generator on the ordered basis."""
    if n < 3:
        raise IndexOutOfRange(f"need n >= 3, got {n}")
    if not 1 <= k <= n - 1:
        raise IndexOutOfRange(f"generator index {k} outside 1..{n - 1}")
    return _columns_to_matrix(n, lambda i, j: _full_action(k, i, j))


def _welded_sigma(n: int, k: int) -> Matrix:
    return _columns_to_matrix(n, lambda i, j: _welded_action(k, i, j))


def _welded_rho(n: int, k: int) -> Matrix:
    def swap(i: int, j: int):
        a = k + 1 if i == k else (k if i == k + 1 else i)
        b = k + 1 if j == k else (k if j == k + 1 else j)
        return {(min(a, b), max(a, b)): _ONE}

    return _columns_to_matrix(n, swap)


@dataclass(frozen=True)
class LKBRep:
    """One variant's generator images on the pair basis."""

    n: int
    variant: str
    matrices: Mapping[Generator, Matrix]

    @property
    def dim(self) -> int:
        return self.n * (self.n - 1) // 2

    @property
    def basis(self) -> tuple[tuple[int, int], ...]:
        return lkb_basis(self.n)

    def matrix(self, g: Generator) -> Matrix:
        return self.matrices[g]

    def to_explicit(self) -> ExplicitRep:
        families = {g.family for g in self.matrices if g.kind == "r"}
        k = len(families)
        group = "B" if k == 0 else "MkWB"
        side: tuple[Polynomial, ...] = (Polynomial.variable("q"),)
        if self.variant == "full":
            side = (Polynomial.variable("t"), Polynomial.variable("q"))
            group = "B"
        elif self.variant == "m2wb3":
            extra = sorted(
                {v for m in self.matrices.values() for v in m.variables()} - {"q"}
            )
            side = side + tuple(Polynomial.variable(v) for v in extra)
        return ExplicitRep(
            f"lkb-{self.variant}-n{self.n}",
            self.n,
            k,
            dict(self.matrices),
            side,
            group,
        )

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "variant": self.variant,
            "dim": self.dim,
            "basis": [list(pair) for pair in self.basis],
            "matrices": {str(g): m.to_json() for g, m in self.matrices.items()},
        }


def full_lkb(n: int) -> LKBRep:
    """The two-parameter braid-group variant, sigma images only."""
    images = {Generator("s", k): lkb_matrix(n, k) for k in range(1, n)}
    return LKBRep(n, "full", images)


def welded_lkb(n: int) -> LKBRep:
    """One-parameter welded variant: printed sigma formulas, permutation rhos."""
    if n < 3:
        raise IndexOutOfRange(f"need n >= 3, got {n}")
    images: dict[Generator, Matrix] = {}
    for k in range(1, n):
        images[Generator("s", k)] = _welded_sigma(n, k)
        images[Generator("r", k, 0)] = _welded_rho(n, k)
    return LKBRep(n, "welded-t1", images)


def m2wb3_extension(b=None) -> LKBRep:
    """Three-strand extension with a second crossing family carrying unit b.

    The first family restricts to the welded variant.  The second family
    repeats each rho's basis permutation with b-weights: where rho_i^0 swaps
    two basis vectors, rho_i^1 swaps them through the factor pair (b, 1/b).
    Any other pairing of the weighted swaps with the generator indices breaks
    the three-term detour relation between the families.
    """
    unit = as_rf(Polynomial.variable("b")) if b is None else as_rf(b)
    zero = RationalFunction.zero()
    base = welded_lkb(3)
    images: dict[Generator, Matrix] = {
        Generator("s", 1): base.matrix(Generator("s", 1)),
        Generator("s", 2): base.matrix(Generator("s", 2)),
        Generator("r", 1, 0): base.matrix(Generator("r", 1, 0)),
        Generator("r", 2, 0): base.matrix(Generator("r", 2, 0)),
        Generator("r", 1, 1): Matrix([
            [_ONE, zero, zero],
            [zero, zero, unit],
            [zero, unit.inverse(), zero],
        ]),
        Generator("r", 2, 1): Matrix([
            [zero, unit, zero],
            [unit.inverse(), zero, zero],
            [zero, zero, _ONE],
        ]),
    }
    return LKBRep(3, "m2wb3", images)


def full_sigma_at_t1(n: int, k: int) -> Matrix:
    """lkb_matrix with t pinned to 1, for comparison against the welded sigmas."""
    return lkb_matrix(n, k).substitute({"t": _ONE})

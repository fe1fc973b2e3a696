"""Homogeneous local representations assembled from small blocks.

A homogeneous 2-local representation sends every generator of a family
to the same 2x2 block, embedded at rows/columns (i, i+1) of an n x n
identity.  Relation checking is exact: both sides of each relation are
multiplied out over the rational function field and compared entrywise.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Union

from .errors import DimensionMismatch, IndexOutOfRange, UnknownFamily
from .matrix import Matrix
from .presentations import Generator, Presentation, Relation, Word
from .symalg import RationalFunction, as_rf


def _resolve_threads(threads: Optional[int]) -> int:
    if threads is not None:
        return max(1, threads)
    raw = os.environ.get("BRAIDREP_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass(frozen=True)
class LocalRepSpec:
    """A homogeneous 2-local representation: one block per generator family.

    side_conditions lists rational functions that must stay nonzero for
    the blocks to be invertible and the family to be distinct; they are
    metadata only and never enter equality checks.
    """

    name: str
    n: int
    k: int
    sigma_block: Matrix
    rho_blocks: tuple[Matrix, ...] = ()
    side_conditions: tuple[RationalFunction, ...] = ()
    group: str = ""

    def __post_init__(self):
        if self.n < 2:
            raise DimensionMismatch(f"need n >= 2, got {self.n}")
        for b in (self.sigma_block, *self.rho_blocks):
            if b.nrows != 2 or b.ncols != 2:
                raise DimensionMismatch("blocks must be 2x2")
        if len(self.rho_blocks) != self.k:
            raise DimensionMismatch(
                f"k={self.k} but {len(self.rho_blocks)} rho blocks"
            )
        for cond in self.side_conditions:
            if cond.is_zero():
                raise ValueError("side condition is identically zero")

    def block(self, kind: str, family: int = 0) -> Matrix:
        if kind == "s":
            return self.sigma_block
        if family >= self.k or family < 0:
            raise UnknownFamily(
                f"{self.name or 'spec'} has {self.k} rho families, "
                f"family {family} requested"
            )
        return self.rho_blocks[family]

    def with_size(self, n: int) -> "LocalRepSpec":
        return LocalRepSpec(
            self.name, n, self.k, self.sigma_block, self.rho_blocks,
            self.side_conditions, self.group,
        )

    def substitute(self, assignment: Mapping[str, RationalFunction]) -> "LocalRepSpec":
        conds = tuple(
            c.substitute(assignment) for c in self.side_conditions
        )
        live = tuple(c for c in conds if not c.is_zero())
        if len(live) != len(conds):
            raise ValueError("substitution kills a side condition")
        return LocalRepSpec(
            self.name,
            self.n,
            self.k,
            self.sigma_block.substitute(assignment),
            tuple(b.substitute(assignment) for b in self.rho_blocks),
            live,
            self.group,
        )

    def variables(self) -> tuple[str, ...]:
        seen: list[str] = []
        for b in (self.sigma_block, *self.rho_blocks):
            for v in b.variables():
                if v not in seen:
                    seen.append(v)
        return tuple(sorted(seen))

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "group": self.group,
            "n": self.n,
            "k": self.k,
            "blocks": {
                "sigma": self.sigma_block.to_json(),
                **{
                    f"rho^{a}": b.to_json()
                    for a, b in enumerate(self.rho_blocks)
                },
            },
            "side_conditions": [str(c) for c in self.side_conditions],
        }


@dataclass(frozen=True)
class ExplicitRep:
    """Full generator-image table for representations that are not 2-local.

    n is the strand count of the source group; dim is the matrix size,
    which need not equal n (the F-representation uses n+1, LKB n(n-1)/2).
    """

    name: str
    n: int
    k: int
    images: Mapping[Generator, Matrix]
    side_conditions: tuple[RationalFunction, ...] = ()
    group: str = ""

    def __post_init__(self):
        sizes = {(m.nrows, m.ncols) for m in self.images.values()}
        if len(sizes) != 1:
            raise DimensionMismatch(f"mixed image sizes {sorted(sizes)}")
        ((r, c),) = sizes
        if r != c:
            raise DimensionMismatch("images must be square")

    @property
    def dim(self) -> int:
        return next(iter(self.images.values())).nrows

    def substitute(self, assignment: Mapping[str, RationalFunction]) -> "ExplicitRep":
        return ExplicitRep(
            self.name,
            self.n,
            self.k,
            {g: m.substitute(assignment) for g, m in self.images.items()},
            tuple(c.substitute(assignment) for c in self.side_conditions),
            self.group,
        )

    def variables(self) -> tuple[str, ...]:
        seen: set[str] = set()
        for m in self.images.values():
            seen.update(m.variables())
        return tuple(sorted(seen))

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "group": self.group,
            "n": self.n,
            "k": self.k,
            "dim": self.dim,
            "images": {str(g): m.to_json() for g, m in sorted(self.images.items())},
            "side_conditions": [str(c) for c in self.side_conditions],
        }


RepLike = Union[LocalRepSpec, ExplicitRep]


def embed_block(b: Matrix, i: int, n: int) -> Matrix:
    """Identity except rows/columns i, i+1 (1-based), which hold b."""
    if b.nrows != 2 or b.ncols != 2:
        raise DimensionMismatch("embed_block wants a 2x2 block")
    if i < 1 or i > n - 1:
        raise IndexOutOfRange(f"index {i} not in 1..{n - 1}")
    rows = [[as_rf(1 if r == c else 0) for c in range(n)] for r in range(n)]
    for r in range(2):
        for c in range(2):
            rows[i - 1 + r][i - 1 + c] = b.entry(r, c)
    return Matrix(rows)


def rep_image(spec: RepLike, g: Generator) -> Matrix:
    if isinstance(spec, LocalRepSpec):
        return embed_block(spec.block(g.kind, g.family), g.index, spec.n)
    try:
        return spec.images[g]
    except KeyError:
        raise UnknownFamily(f"{spec.name or 'rep'} has no image for {g}") from None


def word_image(spec: RepLike, w: Word) -> Matrix:
    dim = spec.n if isinstance(spec, LocalRepSpec) else spec.dim
    out = Matrix.identity(dim)
    for g, e in w:
        m = rep_image(spec, g)
        out = out * (m if e == 1 else m.inverse())
    return out


@dataclass(frozen=True)
class RelationVerdict:
    relation: Relation
    ok: bool

    def to_json(self) -> dict:
        return {
            "tag": self.relation.tag,
            "relation": str(self.relation),
            "ok": self.ok,
        }


@dataclass(frozen=True)
class VerificationReport:
    name: str
    ok: bool
    verdicts: tuple[RelationVerdict, ...]
    side_conditions: tuple[RationalFunction, ...] = ()

    @property
    def first_violation(self) -> Optional[Relation]:
        for v in self.verdicts:
            if not v.ok:
                return v.relation
        return None

    @property
    def checked(self) -> int:
        return len(self.verdicts)

    def to_json(self) -> dict:
        first = self.first_violation
        return {
            "name": self.name,
            "ok": self.ok,
            "checked": self.checked,
            "first_violation": None if first is None else str(first),
            "side_conditions": [str(c) for c in self.side_conditions],
            "relations": [v.to_json() for v in self.verdicts],
        }


# Relation instances of one tag differ only by an index shift (the blocks
# are position-independent), and commuting pairs with gap >= 2 never
# overlap, so the verdict is computed once per normalized pattern on a
# small window instead of once per instance at full size.

_NormWord = tuple[tuple[str, int, int, int], ...]
_NormKey = tuple[_NormWord, _NormWord]


def _normalize_relation(rel: Relation) -> tuple[_NormKey, int]:
    indices = [g.index for g, _ in rel.lhs] + [g.index for g, _ in rel.rhs]
    base = min(indices)
    spread = max(indices) - base
    distinct = sorted(set(indices))
    # Two separated positions commute identically at any gap >= 2.
    squeeze = (
        len(distinct) == 2 and distinct[1] - distinct[0] >= 2
    )

    def shift(idx: int) -> int:
        if squeeze and idx == distinct[1]:
            return 3
        return idx - base + 1

    def norm(w: Word) -> _NormWord:
        return tuple((g.kind, g.family, shift(g.index), e) for g, e in w)

    window = (3 if squeeze else spread + 1) + 1
    return (norm(rel.lhs), norm(rel.rhs)), window


def _check_pattern(spec: LocalRepSpec, key: _NormKey, window: int) -> bool:
    def side(letters: _NormWord) -> Matrix:
        out = Matrix.identity(window)
        for kind, family, idx, e in letters:
            m = embed_block(spec.block(kind, family), idx, window)
            out = out * (m if e == 1 else m.inverse())
        return out

    lhs, rhs = key
    return side(lhs) == side(rhs)


def verify_relations(
    spec: RepLike,
    relations: Sequence[Relation],
    name: str = "",
    threads: Optional[int] = None,
) -> VerificationReport:
    """Check lhs == rhs exactly for each relation under spec's images."""
    nthreads = _resolve_threads(threads)
    label = name or spec.name

    if isinstance(spec, LocalRepSpec):
        keys = [_normalize_relation(rel) for rel in relations]
        distinct = list(dict.fromkeys(keys))

        def run(item: tuple[_NormKey, int]) -> bool:
            return _check_pattern(spec, item[0], item[1])

        if nthreads > 1 and len(distinct) > 1:
            with ThreadPoolExecutor(max_workers=nthreads) as pool:
                outcomes = list(pool.map(run, distinct))
        else:
            outcomes = [run(item) for item in distinct]
        by_key = dict(zip(distinct, outcomes))
        verdicts = tuple(
            RelationVerdict(rel, by_key[key])
            for rel, key in zip(relations, keys)
        )
    else:
        def check(rel: Relation) -> bool:
            return word_image(spec, rel.lhs) == word_image(spec, rel.rhs)

        if nthreads > 1 and len(relations) > 1:
            with ThreadPoolExecutor(max_workers=nthreads) as pool:
                flags = list(pool.map(check, relations))
        else:
            flags = [check(rel) for rel in relations]
        verdicts = tuple(
            RelationVerdict(rel, ok) for rel, ok in zip(relations, flags)
        )

    return VerificationReport(
        name=label,
        ok=all(v.ok for v in verdicts),
        verdicts=verdicts,
        side_conditions=tuple(spec.side_conditions),
    )


def verify_representation(
    spec: RepLike,
    pres: Presentation,
    threads: Optional[int] = None,
) -> VerificationReport:
    if isinstance(spec, LocalRepSpec):
        if spec.n != pres.n:
            raise DimensionMismatch(
                f"spec has n={spec.n}, presentation has n={pres.n}"
            )
    else:
        if spec.n != pres.n:
            raise DimensionMismatch(
                f"rep is over {spec.n} strands, presentation over {pres.n}"
            )
        for g in pres.generators:
            if g not in spec.images:
                raise UnknownFamily(f"{spec.name or 'rep'} has no image for {g}")
    return verify_relations(spec, pres.relations, threads=threads)

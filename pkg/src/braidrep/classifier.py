"""Derives and solves the polynomial systems behind the 2-local classification.

Each generator family gets a 2x2 block of fresh unknowns; substituting
the blocks into a presentation's relations and expanding entry
differences yields a polynomial system.  The solver explores it by
case-splitting on shallow factors and linear eliminations, then merges
branches that are specializations of one another.  No Groebner bases:
every branch here is a coordinate assignment, so generic-point checks
suffice.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import Optional, Sequence

from .errors import (
    BudgetExceeded,
    DenominatorVanishes,
    InvalidChoice,
    LayoutMismatch,
    ZeroDenominator,
    ZeroInverse,
)
from .localrep import LocalRepSpec, embed_block
from .matrix import Matrix
from .presentations import Presentation, build_presentation
from .symalg import Polynomial, RationalFunction, factor_shallow

_LETTERS = (
    ("a", "b", "c", "d"),
    ("w", "x", "y", "z"),
    ("p", "q", "r", "s"),
    ("f", "g", "h", "i"),
    ("j", "k", "l", "m"),
)


@dataclass(frozen=True)
class BlockLayout:
    """Which unknown letters name the entries of each family's block."""

    k: int

    def __post_init__(self):
        if not 0 <= self.k <= len(_LETTERS) - 1:
            raise LayoutMismatch(
                f"layout letters cover k <= {len(_LETTERS) - 1}, got {self.k}"
            )

    @property
    def variables(self) -> tuple[str, ...]:
        out: list[str] = []
        for fam in range(self.k + 1):
            out.extend(_LETTERS[fam])
        return tuple(out)

    def letters(self, kind: str, family: int = 0) -> tuple[str, ...]:
        if kind == "s":
            return _LETTERS[0]
        if not 0 <= family < self.k:
            raise LayoutMismatch(f"layout has {self.k} rho families")
        return _LETTERS[family + 1]

    def block(self, kind: str, family: int = 0) -> Matrix:
        a, b, c, d = self.letters(kind, family)
        v = Polynomial.variable
        return Matrix([[v(a), v(b)], [v(c), v(d)]])

    def determinants(self) -> tuple[Polynomial, ...]:
        v = Polynomial.variable
        return tuple(
            v(a) * v(d) - v(b) * v(c)
            for a, b, c, d in _LETTERS[: self.k + 1]
        )


@dataclass(frozen=True)
class UnknownBlockSystem:
    layout: BlockLayout
    unknowns: tuple[str, ...]
    equations: tuple[Polynomial, ...]
    invertibility: tuple[Polynomial, ...]


@dataclass(frozen=True)
class SolutionBranch:
    """One closed case: solved variables, and what must stay nonzero."""

    assignment: tuple[tuple[str, RationalFunction], ...]
    disequalities: tuple[Polynomial, ...]
    residual: tuple[Polynomial, ...] = ()

    def as_dict(self) -> dict[str, RationalFunction]:
        return dict(self.assignment)

    def free_variables(self, unknowns: Sequence[str]) -> tuple[str, ...]:
        solved = {v for v, _ in self.assignment}
        return tuple(v for v in unknowns if v not in solved)

    def to_json(self) -> dict:
        return {
            "assignment": {v: str(e) for v, e in self.assignment},
            "disequalities": [str(q) for q in self.disequalities],
        }


def _strip_rational_content(p: Polynomial) -> Polynomial:
    content, _, _ = p.split_content()
    return p.scale(1 / content)


def derive_system(
    pres: Presentation, layout: Optional[BlockLayout] = None
) -> UnknownBlockSystem:
    """Expand every relation into entry-difference polynomials.

    Equations are stored exactly as expanded (no content stripping; the
    solver normalizes on entry) and exact duplicates are removed
    globally.  This convention reproduces the 43/61/57/82 counts.
    """
    families = sorted({g.family for g in pres.generators if g.kind == "r"})
    kmax = families[-1] + 1 if families else 0
    if layout is None:
        layout = BlockLayout(kmax)
    elif layout.k < kmax:
        raise LayoutMismatch(f"presentation uses {kmax} rho families")

    images: dict[tuple[str, int, int], Matrix] = {}

    def image(kind: str, family: int, index: int) -> Matrix:
        key = (kind, family, index)
        if key not in images:
            images[key] = embed_block(layout.block(kind, family), index, pres.n)
        return images[key]

    def side(word) -> Matrix:
        out = Matrix.identity(pres.n)
        for g, e in word:
            m = image(g.kind, g.family, g.index)
            out = out * (m if e == 1 else m.inverse())
        return out

    equations: dict[Polynomial, None] = {}
    for rel in pres.relations:
        lhs, rhs = side(rel.lhs), side(rel.rhs)
        for r in range(pres.n):
            for c in range(pres.n):
                diff = lhs.entry(r, c) - rhs.entry(r, c)
                if diff.is_zero():
                    continue
                if not diff.den.is_constant():
                    raise ValueError("relation difference is not polynomial")
                equations[diff.num] = None

    return UnknownBlockSystem(
        layout, layout.variables, tuple(equations), layout.determinants()
    )


# -- the case-splitting solver -------------------------------------------

_State = tuple[dict[str, RationalFunction], tuple[Polynomial, ...], tuple[Polynomial, ...]]


def _dedup(ps) -> tuple[Polynomial, ...]:
    return tuple(dict.fromkeys(ps))


def _apply_sub(
    subs: dict[str, RationalFunction],
    eqs: Sequence[Polynomial],
    dis: Sequence[Polynomial],
    var: str,
    expr: RationalFunction,
) -> Optional[_State]:
    m = {var: expr}
    try:
        new_subs = {u: val.substitute(m) for u, val in subs.items()}
        new_subs[var] = expr
        new_eqs = tuple(e.substitute(m).num for e in eqs)
        new_dis = tuple(q.substitute(m).num for q in dis)
    except (ZeroDenominator, DenominatorVanishes, ZeroInverse):
        return None
    return new_subs, new_eqs, new_dis


def _simplify(state: _State, vidx: dict[str, int]) -> Optional[_State]:
    subs, eqs, dis = state
    while True:
        scrubbed = []
        for e in eqs:
            if e.is_zero():
                continue
            if e.is_constant():
                return None
            scrubbed.append(_strip_rational_content(e))
        eqs = _dedup(scrubbed)
        kept = []
        for q in dis:
            if q.is_zero():
                return None
            if q.is_constant():
                continue
            kept.append(_strip_rational_content(q))
        dis = _dedup(kept)

        pick = None
        for e in eqs:
            for v in sorted(e.variables(), key=vidx.__getitem__):
                if e.degree_in(v) != 1:
                    continue
                coeff, rest = e.split_linear(v)
                if coeff.is_constant():
                    pick = (v, RationalFunction(rest.scale(-1), coeff))
                    break
            if pick:
                break
        if pick is None:
            return subs, eqs, dis
        applied = _apply_sub(subs, eqs, dis, pick[0], pick[1])
        if applied is None:
            return None
        subs, eqs, dis = applied


def _equation_key(vidx: dict[str, int]):
    def key(e: Polynomial):
        vs = sorted(e.variables(), key=vidx.__getitem__)
        return (
            e.total_degree(),
            len(vs),
            tuple(vidx[v] for v in vs),
            str(e),
        )

    return key


def _split_factors(target: Polynomial, dis: Sequence[Polynomial]) -> list[Polynomial]:
    content, monomial, factors = factor_shallow(target, known=tuple(dis))
    out: list[Polynomial] = []
    for name, power in monomial.exps:
        out.append(Polynomial.variable(name))
    for f, _mult in factors:
        f_norm = _strip_rational_content(f)
        if f_norm not in out:
            out.append(f_norm)
    return out


def solve(system: UnknownBlockSystem, cap: int = 10000) -> tuple[SolutionBranch, ...]:
    """All closed solution branches, merged and in deterministic order."""
    vidx = {v: i for i, v in enumerate(system.unknowns)}
    eq_key = _equation_key(vidx)

    init: _State = (
        {},
        _dedup(
            _strip_rational_content(e)
            for e in system.equations
            if not e.is_zero()
        ),
        _dedup(_strip_rational_content(q) for q in system.invertibility),
    )
    stack: list[_State] = [init]
    closed: list[SolutionBranch] = []
    visited = 0

    while stack:
        visited += 1
        if visited > cap:
            raise BudgetExceeded("solver branches", cap)
        state = _simplify(stack.pop(), vidx)
        if state is None:
            continue
        subs, eqs, dis = state
        if not eqs:
            closed.append(_close(subs, dis, vidx))
            continue

        target = min(eqs, key=eq_key)
        rest = tuple(e for e in eqs if e != target)
        factors = _split_factors(target, dis)

        if len(factors) > 1 or (len(factors) == 1 and factors[0] != target):
            branches: list[_State] = []
            known = set(dis)
            prior: list[Polynomial] = []
            for f in factors:
                if f not in known:
                    branches.append((dict(subs), rest + (f,), dis + tuple(prior)))
                prior.append(f)
            stack.extend(reversed(branches))
            continue

        linear_var = None
        for v in sorted(target.variables(), key=vidx.__getitem__):
            if target.degree_in(v) == 1:
                linear_var = v
                break
        if linear_var is None:
            raise BudgetExceeded(f"no admissible split for {target}", cap)
        coeff, rest_poly = target.split_linear(linear_var)
        general = _apply_sub(
            subs, rest, dis + (_strip_rational_content(coeff),),
            linear_var, RationalFunction(rest_poly.scale(-1), coeff),
        )
        degenerate: _State = (dict(subs), rest + (coeff, rest_poly), dis)
        stack.append(degenerate)
        if general is not None:
            stack.append(general)

    return _merge(closed)


def _close(
    subs: dict[str, RationalFunction],
    dis: Sequence[Polynomial],
    vidx: dict[str, int],
) -> SolutionBranch:
    assignment = tuple(sorted(subs.items(), key=lambda it: vidx[it[0]]))
    key = _equation_key(vidx)
    return SolutionBranch(assignment, tuple(sorted(dis, key=key)))


def specializes(a: SolutionBranch, b: SolutionBranch) -> bool:
    """True if a's generic point satisfies b's equations and disequalities."""
    amap = dict(a.assignment)
    try:
        for v, expr in b.assignment:
            lhs = Polynomial.variable(v).substitute(amap)
            rhs = expr.substitute(amap)
            if lhs != rhs:
                return False
        for q in b.disequalities:
            if q.substitute(amap).is_zero():
                return False
    except (ZeroDenominator, DenominatorVanishes, ZeroInverse):
        return False
    return True


def _merge(branches: Sequence[SolutionBranch]) -> tuple[SolutionBranch, ...]:
    kept: list[SolutionBranch] = []
    for br in branches:
        if any(specializes(br, other) for other in kept):
            continue
        kept = [o for o in kept if not specializes(o, br)]
        kept.append(br)
    return tuple(kept)


# -- linking solver output to the named catalog ----------------------------


def spec_to_branch(spec: LocalRepSpec, layout: Optional[BlockLayout] = None) -> SolutionBranch:
    """Rewrite a catalog spec as a solution branch over layout letters.

    Free parameters that are not layout letters (x0, x2, ...) are renamed
    to the letter of the first block position holding them bare.
    """
    if layout is None:
        layout = BlockLayout(spec.k)
    if layout.k != spec.k:
        raise LayoutMismatch(f"layout k={layout.k}, spec k={spec.k}")
    layout_vars = set(layout.variables)

    positions: list[tuple[str, RationalFunction]] = []
    blocks = [("s", 0, spec.sigma_block)] + [
        ("r", fam, blk) for fam, blk in enumerate(spec.rho_blocks)
    ]
    for kind, fam, blk in blocks:
        letters = layout.letters(kind, fam)
        for pos in range(4):
            entry = blk.entry(pos // 2, pos % 2)
            positions.append((letters[pos], entry))

    rename: dict[str, RationalFunction] = {}
    for letter, entry in positions:
        vs = entry.variables()
        if (
            len(vs) == 1
            and vs[0] not in layout_vars
            and vs[0] not in rename
            and entry == RationalFunction.variable(vs[0])
        ):
            rename[vs[0]] = RationalFunction.variable(letter)

    assignment = []
    for letter, entry in positions:
        renamed = entry.substitute(rename) if rename else entry
        if renamed == RationalFunction.variable(letter):
            continue
        assignment.append((letter, renamed))

    diseqs = []
    for cond in spec.side_conditions:
        renamed = cond.substitute(rename) if rename else cond
        diseqs.append(_strip_rational_content(renamed.num))

    vidx = {v: i for i, v in enumerate(layout.variables)}
    assignment.sort(key=lambda it: vidx[it[0]])
    return SolutionBranch(tuple(assignment), _dedup(diseqs))


def match_branch(branch: SolutionBranch, spec: LocalRepSpec) -> bool:
    layout = BlockLayout(spec.k)
    layout_vars = set(layout.variables)
    used = {v for v, _ in branch.assignment}
    for _, expr in branch.assignment:
        used.update(expr.variables())
    for q in branch.disequalities:
        used.update(q.variables())
    if not used <= layout_vars:
        raise LayoutMismatch(
            f"branch variables {sorted(used - layout_vars)} outside layout"
        )
    other = spec_to_branch(spec, layout)
    return specializes(branch, other) and specializes(other, branch)


@dataclass(frozen=True)
class ClassificationRow:
    family: str
    branch: SolutionBranch

    def to_json(self) -> dict:
        data = self.branch.to_json()
        data["family"] = self.family
        return data


@dataclass(frozen=True)
class Classification:
    group: str
    k: int
    rows: tuple[ClassificationRow, ...]
    unmatched_branches: tuple[SolutionBranch, ...]
    unmatched_families: tuple[str, ...]

    @property
    def count(self) -> int:
        return len(self.rows) + len(self.unmatched_branches)

    @property
    def bijective(self) -> bool:
        return not self.unmatched_branches and not self.unmatched_families

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "k": self.k,
            "count": self.count,
            "bijective": self.bijective,
            "rows": [r.to_json() for r in self.rows],
            "unmatched_branches": [b.to_json() for b in self.unmatched_branches],
            "unmatched_families": list(self.unmatched_families),
        }


def classify_group(group: str, k: int, cap: int = 10000) -> Classification:
    """Solve the n=3 system and put branches in bijection with the catalog."""
    from .catalog import enumerate_families

    if group not in ("MkVB", "MkWB"):
        raise InvalidChoice(f"classification covers MkVB and MkWB, not {group!r}")
    pres = build_presentation(group, 3, k)
    branches = solve(derive_system(pres), cap=cap)
    specs = enumerate_families(group, k, 3)

    rows: list[ClassificationRow] = []
    leftover = list(branches)
    missing: list[str] = []
    for spec in specs:
        hits = [br for br in leftover if match_branch(br, spec)]
        if len(hits) == 1:
            rows.append(ClassificationRow(spec.name, hits[0]))
            leftover.remove(hits[0])
        else:
            missing.append(spec.name)
    return Classification(
        group, k, tuple(rows), tuple(leftover), tuple(missing)
    )


def sample_branch(
    branch: SolutionBranch,
    layout: BlockLayout,
    n: int,
    rng: Random,
    attempts: int = 200,
) -> LocalRepSpec:
    """A numeric spec on the branch: random rationals for the free variables."""
    amap = branch.as_dict()
    free = [v for v in layout.variables if v not in amap]
    for _ in range(attempts):
        point = {
            v: Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for v in free
        }
        try:
            if any(q.evaluate(point) == 0 for q in branch.disequalities):
                continue
            values = {v: expr.evaluate(point) for v, expr in branch.assignment}
        except (DenominatorVanishes, ZeroDenominator):
            continue
        values.update(point)

        def block_at(kind: str, family: int = 0) -> Matrix:
            letters = layout.letters(kind, family)
            return Matrix([
                [values[letters[0]], values[letters[1]]],
                [values[letters[2]], values[letters[3]]],
            ])

        return LocalRepSpec(
            "sampled",
            n,
            layout.k,
            block_at("s"),
            tuple(block_at("r", fam) for fam in range(layout.k)),
        )
    raise BudgetExceeded("branch sampling attempts", attempts)

"""Reducibility, equivalence, and faithfulness probes for verified reps.

Everything here consumes representations that already pass their relation
checks.  The symbolic side is deliberately modest: it can exhibit invariant
vectors and transport specs across diagonal conjugation, nothing more.
Irreducibility is decided only at sampled parameter values, through the
span-closure criterion; faithfulness is approached one-sidedly, by searching
for kernel words and certifying their nontriviality on whitelisted quotients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import Mapping, Optional, Sequence, Union

from .errors import (
    BudgetExceeded,
    DenominatorVanishes,
    DimensionMismatch,
    SingularConjugator,
    ZeroDenominator,
    ZeroInverse,
)
from .localrep import ExplicitRep, LocalRepSpec, RelationVerdict, RepLike, rep_image, verify_relations, word_image
from .matrix import Matrix, conjugate
from .presentations import (
    Generator,
    Presentation,
    QuotientValue,
    Word,
    is_identity_value,
    quotient_eval,
    quotient_value_str,
    valid_quotients,
    word,
    word_str,
)
from .symalg import Polynomial, RationalFunction, as_rf

_ONE = RationalFunction.one()

UNCERTIFIED_NOTE = "no quotient certificate found; nontriviality not machine-checked"


def _as_value(v) -> RationalFunction:
    if isinstance(v, RationalFunction):
        return v
    if isinstance(v, Polynomial):
        return as_rf(v)
    return RationalFunction.constant(Fraction(v))


@dataclass(frozen=True)
class DiagonalConjugator:
    """Invertible diagonal change of basis; entries must be nonzero."""

    entries: tuple[RationalFunction, ...]

    def __post_init__(self):
        ents = tuple(_as_value(e) for e in self.entries)
        if not ents:
            raise SingularConjugator("empty diagonal")
        if any(e.is_zero() for e in ents):
            raise SingularConjugator("zero diagonal entry")
        object.__setattr__(self, "entries", ents)

    @property
    def n(self) -> int:
        return len(self.entries)

    @classmethod
    def identity(cls, n: int) -> "DiagonalConjugator":
        return cls(tuple(_ONE for _ in range(n)))

    @classmethod
    def geometric(cls, base, n: int) -> "DiagonalConjugator":
        """diag(base^(1-n), ..., base^-1, 1): consecutive ratios all equal base."""
        b = _as_value(base)
        ents = [_ONE]
        for _ in range(n - 1):
            ents.append(ents[-1] / b)
        return cls(tuple(reversed(ents)))

    def matrix(self) -> Matrix:
        return Matrix.diagonal(self.entries)

    def ratios(self) -> tuple[RationalFunction, ...]:
        return tuple(self.entries[i + 1] / self.entries[i] for i in range(self.n - 1))


def spec_generators(spec: RepLike) -> tuple[Generator, ...]:
    """Generator list a 2-local spec implicitly represents, in family order."""
    if isinstance(spec, ExplicitRep):
        return tuple(spec.images.keys())
    sigmas = [Generator("s", i) for i in range(1, spec.n)]
    rhos = [
        Generator("r", i, alpha)
        for alpha in range(spec.k)
        for i in range(1, spec.n)
    ]
    return tuple(sigmas + rhos)


def _twist(block: Matrix, ratio: RationalFunction) -> Matrix:
    return Matrix([
        [block.entry(0, 0), block.entry(0, 1) * ratio],
        [block.entry(1, 0) / ratio, block.entry(1, 1)],
    ])


def conjugate_spec(spec: LocalRepSpec, T: DiagonalConjugator) -> Union[LocalRepSpec, ExplicitRep]:
    """Transport spec across T: images become T^-1 (image) T.

    When consecutive diagonal ratios are all equal, every block position sees
    the same twist and the result stays 2-local; otherwise the conjugated
    images are returned explicitly.  Relation verdicts are unaffected either
    way, which callers can re-check with verify_representation.
    """
    if T.n != spec.n:
        raise DimensionMismatch(f"conjugator has {T.n} entries, spec needs {spec.n}")
    extra = tuple(
        e.num for e in T.entries if not e.is_constant()
    )
    conditions = spec.side_conditions + tuple(
        p for p in extra if p not in spec.side_conditions
    )
    ratios = T.ratios()
    if all((r - ratios[0]).is_zero() for r in ratios):
        r = ratios[0]
        return LocalRepSpec(
            spec.name,
            spec.n,
            spec.k,
            _twist(spec.sigma_block, r),
            tuple(_twist(b, r) for b in spec.rho_blocks),
            conditions,
            spec.group,
        )
    t = T.matrix()
    images = {g: conjugate(rep_image(spec, g), t) for g in spec_generators(spec)}
    return ExplicitRep(spec.name, spec.n, spec.k, images, conditions, spec.group)


def find_invariant_vector(spec: LocalRepSpec) -> Optional[tuple[RationalFunction, ...]]:
    """Common fixed vector of all images, searched among geometric vectors.

    The search class is vectors (u^(n-1), ..., u, 1); u = 1 gives the constant
    vector and is tried first.  Such a vector is fixed by every embedded block
    exactly when each 2x2 block fixes (u, 1), which is two linear conditions
    on u per block.  A miss here proves nothing about irreducibility.
    """
    blocks = (spec.sigma_block, *spec.rho_blocks)
    constraints = []
    for b in blocks:
        constraints.append((b.entry(0, 0) - 1, b.entry(0, 1)))
        constraints.append((b.entry(1, 0), b.entry(1, 1) - 1))
    candidates = [_ONE]
    for coeff, const in constraints:
        if not coeff.is_zero():
            candidates.append(-const / coeff)
    for u in candidates:
        if all((coeff * u + const).is_zero() for coeff, const in constraints):
            powers = [_ONE]
            for _ in range(spec.n - 1):
                powers.append(powers[-1] * u)
            return tuple(reversed(powers))
    return None


# ---------------------------------------------------------------------------
# span closure at a sample

_P = (1 << 61) - 1  # Mersenne prime; rank mod _P never exceeds rank over Q


@dataclass(frozen=True)
class BurnsideVerdict:
    """Span-closure outcome at one sample point.

    kind is "Irreducible" when the image algebra attains full dimension n^2,
    "Reducible" when a proper invariant subspace was exhibited (its echelon
    basis is in subspace), and "Inconclusive" when the dimension fell short
    but no rational invariant subspace was found.
    """

    kind: str
    dimension: int
    subspace: tuple[tuple[Fraction, ...], ...] = ()

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "dimension": self.dimension,
            "subspace": [[str(x) for x in row] for row in self.subspace],
        }


def _numeric_spec(spec: RepLike, sample: Mapping[str, Fraction]) -> RepLike:
    assignment = {v: RationalFunction.constant(Fraction(x)) for v, x in sample.items()}
    try:
        numeric = spec.substitute(assignment)
    except (ValueError, ZeroDenominator, DenominatorVanishes) as exc:
        raise DenominatorVanishes(f"sample rejected: {exc}") from exc
    leftover = numeric.variables()
    if leftover:
        raise DenominatorVanishes(f"sample leaves free variables {leftover}")
    return numeric


def _image_tables(numeric: RepLike) -> list[tuple[tuple[Fraction, ...], ...]]:
    mats = []
    for g in spec_generators(numeric):
        img = rep_image(numeric, g)
        try:
            inv = img.inverse()
        except (ZeroInverse, ZeroDenominator) as exc:
            raise DenominatorVanishes(f"image of {g} is singular at the sample") from exc
        mats.append(img.evaluate({}))
        mats.append(inv.evaluate({}))
    return mats


def _mat_mul(a, b, n: int, mod: Optional[int]):
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = 0
            for l in range(n):
                acc += a[i][l] * b[l][j]
            row.append(acc % mod if mod else acc)
        rows.append(tuple(row))
    return tuple(rows)


class _Echelon:
    """Incremental row reduction; rows are flat tuples over Q or GF(p)."""

    def __init__(self, mod: Optional[int]):
        self.mod = mod
        self.pivots: dict[int, tuple] = {}

    def insert(self, vec) -> bool:
        vec = list(vec)
        for j in sorted(self.pivots):
            if vec[j]:
                c = vec[j]
                row = self.pivots[j]
                if self.mod:
                    vec = [(x - c * y) % self.mod for x, y in zip(vec, row)]
                else:
                    vec = [x - c * y for x, y in zip(vec, row)]
        lead = next((j for j, x in enumerate(vec) if x), None)
        if lead is None:
            return False
        c = vec[lead]
        if self.mod:
            cinv = pow(c, self.mod - 2, self.mod)
            vec = [x * cinv % self.mod for x in vec]
        else:
            vec = [x / c for x in vec]
        self.pivots[lead] = tuple(vec)
        return True

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def basis(self) -> tuple[tuple, ...]:
        return tuple(self.pivots[j] for j in sorted(self.pivots))


def _to_modp(x: Fraction) -> int:
    den = x.denominator % _P
    if den == 0:
        raise ZeroDivisionError("denominator divisible by the working prime")
    return x.numerator * pow(den, _P - 2, _P) % _P


def _closure_dim(mats, n: int, mod: Optional[int]) -> tuple[int, list]:
    """Dimension of the unital algebra spanned by products of mats."""
    if mod:
        mats = [tuple(tuple(_to_modp(x) for x in row) for row in m) for m in mats]
    full = n * n
    ech = _Echelon(mod)
    one = Fraction(1) if mod is None else 1
    zero = Fraction(0) if mod is None else 0
    ident = tuple(
        tuple(one if i == j else zero for j in range(n)) for i in range(n)
    )
    queue = []
    for m in [ident] + list(mats):
        if ech.insert(tuple(x for row in m for x in row)):
            queue.append(m)
    while queue and ech.dim < full:
        a = queue.pop(0)
        for m in mats:
            prod = _mat_mul(a, m, n, mod)
            if ech.insert(tuple(x for row in prod for x in row)):
                queue.append(prod)
                if ech.dim == full:
                    break
    return ech.dim, list(mats)


def _orbit_span(vec, mats, n: int) -> _Echelon:
    ech = _Echelon(None)
    queue = []
    if ech.insert(vec):
        queue.append(tuple(vec))
    while queue:
        v = queue.pop(0)
        for m in mats:
            img = tuple(sum(m[i][l] * v[l] for l in range(n)) for i in range(n))
            if ech.insert(img):
                queue.append(img)
    return ech


def burnside_irreducible(spec: RepLike, sample: Mapping[str, Fraction]) -> BurnsideVerdict:
    """Span-closure irreducibility test at one rational sample point.

    Ranks are first taken mod a fixed large prime, which can only undercount;
    a full-dimensional answer is therefore already exact.  Anything smaller is
    recomputed over Q before searching for an invariant subspace among the
    coordinate axes, the all-ones vector, and the geometric invariant-vector
    class.
    """
    numeric = _numeric_spec(spec, sample)
    n = numeric.n if isinstance(numeric, LocalRepSpec) else numeric.dim
    mats = _image_tables(numeric)
    try:
        dim, _ = _closure_dim(mats, n, _P)
    except ZeroDivisionError:
        dim = -1
    if dim == n * n:
        return BurnsideVerdict("Irreducible", dim)
    dim, rational_mats = _closure_dim(mats, n, None)
    if dim == n * n:
        return BurnsideVerdict("Irreducible", dim)
    candidates = [
        tuple(Fraction(1 if i == j else 0) for i in range(n)) for j in range(n)
    ]
    candidates.append(tuple(Fraction(1) for _ in range(n)))
    if isinstance(numeric, LocalRepSpec):
        fixed = find_invariant_vector(numeric)
        if fixed is not None:
            candidates.append(tuple(x.evaluate({}) for x in fixed))
    for v in candidates:
        orbit = _orbit_span(v, rational_mats, n)
        if 0 < orbit.dim < n:
            return BurnsideVerdict("Reducible", dim, orbit.basis())
    return BurnsideVerdict("Inconclusive", dim)


def sample_parameters(spec: RepLike, rng: Random, attempts: int = 200) -> dict[str, Fraction]:
    """Random rational point avoiding side-condition zeros and blowups."""
    names = spec.variables()
    for _ in range(attempts):
        trial = {
            v: Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for v in names
        }
        try:
            _numeric_spec(spec, trial)
        except DenominatorVanishes:
            continue
        return trial
    raise BudgetExceeded("parameter sampling attempts", attempts)


@dataclass(frozen=True)
class GenericVerdict:
    """Family-level irreducibility verdict aggregated over samples."""

    kind: str
    samples: int
    agree: bool
    label: str = "generic (sampled)"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "samples": self.samples,
            "agree": self.agree,
            "label": self.label,
        }


def generic_irreducibility(spec: RepLike, samples: int = 5, seed: int = 0) -> GenericVerdict:
    """Run the span-closure test at several independent samples.

    The per-sample verdicts must all agree before a family-level kind is
    reported; disagreement is reported as Mixed rather than papered over.
    """
    rng = Random(seed)
    kinds = []
    for _ in range(samples):
        point = sample_parameters(spec, rng)
        kinds.append(burnside_irreducible(spec, point).kind)
    agreed = len(set(kinds)) == 1
    return GenericVerdict(kinds[0] if agreed else "Mixed", samples, agreed)


# ---------------------------------------------------------------------------
# kernel witnesses


@dataclass(frozen=True)
class WitnessCertificate:
    """A nonempty word with identity image, plus a nontriviality certificate.

    The certificate is a whitelisted quotient on which the word evaluates away
    from the identity.  When no valid quotient separates the word, quotient
    and quotient_value are None and note explains the gap; such a witness is
    exhibited but not machine-certified.
    """

    word: Word
    image: Matrix
    quotient: Optional[str]
    quotient_value: Optional[QuotientValue]
    note: str = ""

    @property
    def certified(self) -> bool:
        return self.quotient is not None

    def validate(self, spec: RepLike, pres: Presentation) -> bool:
        if not self.word:
            return False
        if not word_image(spec, self.word).is_identity():
            return False
        if self.quotient is None:
            return bool(self.note)
        if self.quotient not in valid_quotients(pres):
            return False
        value = quotient_eval(self.word, self.quotient, pres)
        if value != self.quotient_value:
            return False
        return not is_identity_value(value)

    def to_json(self) -> dict:
        payload = {
            "word": word_str(self.word),
            "image": "identity",
            "quotient": self.quotient,
            "value": None if self.quotient_value is None else quotient_value_str(self.quotient_value),
        }
        if self.note:
            payload["note"] = self.note
        return payload


def kernel_witness(
    spec: RepLike,
    pres: Presentation,
    length: int = 6,
    budget: int = 20000,
) -> Optional[WitnessCertificate]:
    """Search for a certified kernel element of the representation.

    Stages: single generators with identity image, then differences of
    generator pairs with equal images, then breadth-first search over freely
    reduced words up to the given length.  The first candidate separated by a
    valid quotient wins.  A generator-shaped candidate (stages one and two)
    that no quotient separates is kept as a flagged, uncertified fallback;
    unseparated words from the blind search are dropped instead, because they
    are usually relators of the group rather than kernel elements.  None means
    the budget ran out empty-handed.
    """
    quots = valid_quotients(pres)

    def certify(w: Word, img: Matrix) -> WitnessCertificate:
        for q in quots:
            value = quotient_eval(w, q, pres)
            if not is_identity_value(value):
                return WitnessCertificate(w, img, q, value)
        return WitnessCertificate(w, img, None, None, note=UNCERTIFIED_NOTE)

    fallback: Optional[WitnessCertificate] = None
    images = [(g, rep_image(spec, g)) for g in pres.generators]

    for g, img in images:
        if img.is_identity():
            cert = certify(word(g), img)
            if cert.certified:
                return cert
            if fallback is None:
                fallback = cert

    for i, (g, gi) in enumerate(images):
        for h, hi in images[i + 1:]:
            if gi == hi:
                w = word((g, 1), (h, -1))
                cert = certify(w, word_image(spec, w))
                if cert.certified:
                    return cert
                if fallback is None:
                    fallback = cert

    letters = [(g, 1) for g, _ in images] + [(g, -1) for g, _ in images]
    letter_image = {}
    for g, img in images:
        letter_image[(g, 1)] = img
        letter_image[(g, -1)] = img.inverse()
    dim = images[0][1].nrows
    frontier: list[tuple[Word, Matrix]] = [((), Matrix.identity(dim))]
    seen = {str(Matrix.identity(dim))}
    visited = 0
    for _ in range(length):
        grown: list[tuple[Word, Matrix]] = []
        for w, img in frontier:
            for g, e in letters:
                if w and w[-1] == (g, -e):
                    continue
                visited += 1
                if visited > budget:
                    return fallback
                nw = w + ((g, e),)
                nimg = img * letter_image[(g, e)]
                if nimg.is_identity():
                    cert = certify(nw, nimg)
                    if cert.certified:
                        return cert
                    continue
                key = str(nimg)
                if key not in seen:
                    seen.add(key)
                    grown.append((nw, nimg))
        frontier = grown
    return fallback


@dataclass(frozen=True)
class ForbiddenAudit:
    """Per-relation record of which forbidden moves the image satisfies.

    Satisfying a forbidden relation means the representation factors through
    the corresponding bigger quotient; that is evidence of collapsed structure,
    reported as-is.
    """

    name: str
    verdicts: tuple[RelationVerdict, ...]

    @property
    def satisfied_tags(self) -> tuple[str, ...]:
        return tuple(v.relation.tag for v in self.verdicts if v.ok)

    def verdict_for(self, tag: str) -> Optional[bool]:
        for v in self.verdicts:
            if v.relation.tag == tag:
                return v.ok
        return None

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "forbidden": [
                {
                    "tag": v.relation.tag,
                    "relation": str(v.relation),
                    "satisfied": v.ok,
                }
                for v in self.verdicts
            ],
        }


def forbidden_audit(spec: RepLike, pres: Presentation, threads: Optional[int] = None) -> ForbiddenAudit:
    report = verify_relations(spec, pres.forbidden, name=spec.name, threads=threads)
    return ForbiddenAudit(spec.name, report.verdicts)

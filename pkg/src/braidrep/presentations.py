"""Presentations of braid, virtual braid and multi-virtual braid groups.

A presentation here is purely combinatorial: generators, freely reduced
relation words, and a separate list of forbidden-move words that the
group does NOT impose.  Five groups are supported:

  B      classical braid group on n strands
  VB     virtual braid group (one virtual family)
  MkVB   multi-virtual braid group, k virtual families
  MkWB   multi-welded braid group (MkVB plus the over-forbidden move F1)
  MkUB   multi-unrestricted braid group (MkVB plus F1 and F2)

Relation tags name what a relation does ("braid", "detour", ...) so
downstream reports stay readable.  Forbidden moves keep their customary
F1/F2/F3 names; F3 comes in three index patterns tagged F3a/F3b/F3c.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

from .errors import InvalidQuotient, InvalidSize

GROUPS = ("B", "VB", "MkVB", "MkWB", "MkUB")


@dataclass(frozen=True, order=True)
class Generator:
    """sigma_i (kind "s") or rho_i^family (kind "r")."""

    kind: str
    index: int
    family: int = 0

    def __post_init__(self):
        if self.kind not in ("s", "r"):
            raise ValueError(f"unknown generator kind {self.kind!r}")

    def __str__(self) -> str:
        if self.kind == "s":
            return f"s{self.index}"
        return f"r{self.index}^{self.family}"


Letter = tuple[Generator, int]
Word = tuple[Letter, ...]


def _reduce(letters: Iterable[Letter]) -> Word:
    out: list[Letter] = []
    for g, e in letters:
        if e not in (1, -1):
            raise ValueError("letters carry exponent +1 or -1")
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def word(*letters: Union[Generator, Letter]) -> Word:
    """Build a freely reduced word; bare generators mean exponent +1."""
    normal = [(l, 1) if isinstance(l, Generator) else l for l in letters]
    return _reduce(normal)


def word_multiply(u: Word, v: Word) -> Word:
    return _reduce(list(u) + list(v))


def word_inverse(u: Word) -> Word:
    return tuple((g, -e) for g, e in reversed(u))


def word_str(u: Word) -> str:
    if not u:
        return "e"
    parts = []
    for g, e in u:
        parts.append(str(g) if e == 1 else f"{g}^-1")
    return " ".join(parts)


@dataclass(frozen=True)
class Relation:
    lhs: Word
    rhs: Word
    tag: str

    def __str__(self) -> str:
        return f"{word_str(self.lhs)} = {word_str(self.rhs)}"

    def as_pair(self) -> tuple[Word, Word]:
        return (self.lhs, self.rhs)


@dataclass(frozen=True)
class Presentation:
    group: str
    n: int
    k: int
    generators: tuple[Generator, ...]
    relations: tuple[Relation, ...]
    forbidden: tuple[Relation, ...]

    def relation_tags(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for r in self.relations:
            counts[r.tag] = counts.get(r.tag, 0) + 1
        return counts

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "n": self.n,
            "k": self.k,
            "generators": [str(g) for g in self.generators],
            "relations": [{"tag": r.tag, "relation": str(r)} for r in self.relations],
            "forbidden": [{"tag": r.tag, "relation": str(r)} for r in self.forbidden],
        }


def _sigma(i: int) -> Generator:
    return Generator("s", i)


def _rho(i: int, family: int) -> Generator:
    return Generator("r", i, family)


def build_presentation(group: str, n: int, k: int = 1) -> Presentation:
    """Instantiate every relation of the chosen group over valid indices.

    k is ignored for B and VB (a lone virtual family is used for VB).
    """
    if group not in GROUPS:
        raise InvalidSize(f"unknown group {group!r}")
    if n < 2:
        raise InvalidSize(f"n must be at least 2, got {n}")
    if group in ("B", "VB"):
        k = 1
    if k < 1:
        raise InvalidSize(f"k must be at least 1, got {k}")

    families = range(k) if group != "B" else range(0)
    generators = [_sigma(i) for i in range(1, n)]
    for a in families:
        generators.extend(_rho(i, a) for i in range(1, n))

    rels: list[Relation] = []

    # braid relation among the sigmas
    for i in range(1, n - 1):
        rels.append(
            Relation(
                word(_sigma(i), _sigma(i + 1), _sigma(i)),
                word(_sigma(i + 1), _sigma(i), _sigma(i + 1)),
                "braid",
            )
        )
    # distant sigmas commute
    for i in range(1, n):
        for j in range(i + 2, n):
            rels.append(
                Relation(
                    word(_sigma(i), _sigma(j)),
                    word(_sigma(j), _sigma(i)),
                    "sigma-commute",
                )
            )

    if group != "B":
        # each virtual generator is an involution
        for a in families:
            for i in range(1, n):
                rels.append(
                    Relation(word(_rho(i, a), _rho(i, a)), word(), "virtual-involution")
                )
        # distant same-family virtuals commute
        for a in families:
            for i in range(1, n):
                for j in range(i + 2, n):
                    rels.append(
                        Relation(
                            word(_rho(i, a), _rho(j, a)),
                            word(_rho(j, a), _rho(i, a)),
                            "virtual-commute",
                        )
                    )
        # braid relation within each virtual family
        for a in families:
            for i in range(1, n - 1):
                rels.append(
                    Relation(
                        word(_rho(i, a), _rho(i + 1, a), _rho(i, a)),
                        word(_rho(i + 1, a), _rho(i, a), _rho(i + 1, a)),
                        "virtual-braid",
                    )
                )
        # distant sigma and virtual commute
        for a in families:
            for i in range(1, n):
                for j in range(1, n):
                    if abs(i - j) >= 2:
                        rels.append(
                            Relation(
                                word(_sigma(i), _rho(j, a)),
                                word(_rho(j, a), _sigma(i)),
                                "mixed-commute",
                            )
                        )
        # distant virtuals of different families commute
        for a in families:
            for b in families:
                if a == b:
                    continue
                for i in range(1, n):
                    for j in range(i + 2, n):
                        rels.append(
                            Relation(
                                word(_rho(i, a), _rho(j, b)),
                                word(_rho(j, b), _rho(i, a)),
                                "cross-family-commute",
                            )
                        )
        if group == "VB":
            # family-0 pair carries a sigma across (classical detour form)
            for i in range(1, n - 1):
                rels.append(
                    Relation(
                        word(_rho(i, 0), _rho(i + 1, 0), _sigma(i)),
                        word(_sigma(i + 1), _rho(i, 0), _rho(i + 1, 0)),
                        "detour",
                    )
                )
        else:
            for i in range(1, n - 1):
                rels.append(
                    Relation(
                        word(_sigma(i), _rho(i + 1, 0), _rho(i, 0)),
                        word(_rho(i + 1, 0), _rho(i, 0), _sigma(i + 1)),
                        "detour",
                    )
                )
            # the family-0 pair also carries every other family across
            for b in range(1, k):
                for i in range(1, n - 1):
                    rels.append(
                        Relation(
                            word(_rho(i, 0), _rho(i + 1, 0), _rho(i, b)),
                            word(_rho(i + 1, b), _rho(i, 0), _rho(i + 1, 0)),
                            "family-detour",
                        )
                    )

    def f1_instances() -> list[Relation]:
        out = []
        for a in families:
            for i in range(1, n - 1):
                out.append(
                    Relation(
                        word(_sigma(i), _sigma(i + 1), _rho(i, a)),
                        word(_rho(i + 1, a), _sigma(i), _sigma(i + 1)),
                        "F1",
                    )
                )
        return out

    def f2_instances() -> list[Relation]:
        out = []
        for a in families:
            for i in range(1, n - 1):
                out.append(
                    Relation(
                        word(_sigma(i + 1), _sigma(i), _rho(i + 1, a)),
                        word(_rho(i, a), _sigma(i + 1), _sigma(i)),
                        "F2",
                    )
                )
        return out

    def f3_instances() -> list[Relation]:
        out = []
        for b in range(1, k):
            for i in range(1, n - 1):
                out.append(
                    Relation(
                        word(_rho(i, 0), _rho(i + 1, b), _rho(i, b)),
                        word(_rho(i + 1, b), _rho(i, b), _rho(i + 1, 0)),
                        "F3a",
                    )
                )
        for c in range(1, k):
            for b in range(c + 1, k):
                for i in range(1, n - 1):
                    out.append(
                        Relation(
                            word(_rho(i, c), _rho(i + 1, b), _rho(i, b)),
                            word(_rho(i + 1, b), _rho(i, b), _rho(i + 1, c)),
                            "F3b",
                        )
                    )
                    out.append(
                        Relation(
                            word(_rho(i, c), _rho(i + 1, c), _rho(i, b)),
                            word(_rho(i + 1, b), _rho(i, c), _rho(i + 1, c)),
                            "F3c",
                        )
                    )
        return out

    forbidden: list[Relation] = []
    if group == "MkWB":
        rels.extend(f1_instances())
        forbidden = f2_instances() + f3_instances()
    elif group == "MkUB":
        rels.extend(f1_instances())
        rels.extend(f2_instances())
        forbidden = f3_instances()
    elif group == "MkVB":
        forbidden = f1_instances() + f2_instances() + f3_instances()
    elif group == "VB":
        forbidden = f1_instances() + f2_instances()

    return Presentation(
        group=group,
        n=n,
        k=k,
        generators=tuple(generators),
        relations=tuple(rels),
        forbidden=tuple(forbidden),
    )


# -- quotients ----------------------------------------------------------------
#
# A small fixed whitelist of homomorphisms onto the symmetric group or the
# sign group, used to certify that a candidate kernel word is nontrivial in
# the source group.  Validity (every relation maps to identity) is decided
# computationally per presentation and cached.

QUOTIENTS = ("PermAll", "PermRhoOnly", "PermSigmaOnly", "SignSigma")

_PERM_RULES = {
    # quotient name -> (sigma hits the transposition?, rho hits it?)
    "PermAll": (True, True),
    "PermRhoOnly": (False, True),
    "PermSigmaOnly": (True, False),
}


def _transposition(i: int, n: int) -> tuple[int, ...]:
    img = list(range(n))
    img[i - 1], img[i] = img[i], img[i - 1]
    return tuple(img)


def _compose(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """(p after q): x -> p[q[x]]."""
    return tuple(p[q[x]] for x in range(len(p)))


def perm_str(p: Sequence[int]) -> str:
    """Cycle notation with 1-based points; identity prints as 'e'."""
    seen = [False] * len(p)
    cycles = []
    for start in range(len(p)):
        if seen[start] or p[start] == start:
            seen[start] = True
            continue
        cyc = [start]
        seen[start] = True
        nxt = p[start]
        while nxt != start:
            cyc.append(nxt)
            seen[nxt] = True
            nxt = p[nxt]
        cycles.append("(" + " ".join(str(x + 1) for x in cyc) + ")")
    return "".join(cycles) if cycles else "e"


QuotientValue = Union[tuple[int, ...], int]

_validity_cache: dict[tuple[str, str, int, int], Optional[str]] = {}


def _eval_word(w: Word, quotient: str, n: int) -> QuotientValue:
    if quotient == "SignSigma":
        sign = 1
        for g, _ in w:
            if g.kind == "s":
                sign = -sign
        return sign
    sigma_on, rho_on = _PERM_RULES[quotient]
    acc = tuple(range(n))
    for g, _ in w:
        active = sigma_on if g.kind == "s" else rho_on
        if active:
            # a transposition is its own inverse, exponent sign is moot
            acc = _compose(acc, _transposition(g.index, n))
    return acc


def _identity_value(quotient: str, n: int) -> QuotientValue:
    return 1 if quotient == "SignSigma" else tuple(range(n))


def quotient_failure(quotient: str, pres: Presentation) -> Optional[str]:
    """First relation the quotient violates, or None when it is valid."""
    if quotient not in QUOTIENTS:
        raise InvalidQuotient(quotient, "unknown quotient")
    key = (quotient, pres.group, pres.n, pres.k)
    if key not in _validity_cache:
        failure = None
        for rel in pres.relations:
            if _eval_word(rel.lhs, quotient, pres.n) != _eval_word(rel.rhs, quotient, pres.n):
                failure = str(rel)
                break
        _validity_cache[key] = failure
    return _validity_cache[key]


def valid_quotients(pres: Presentation) -> tuple[str, ...]:
    return tuple(q for q in QUOTIENTS if quotient_failure(q, pres) is None)


def quotient_eval(w: Word, quotient: str, pres: Presentation) -> QuotientValue:
    """Image of w under the quotient; rejects quotients the presentation breaks."""
    failure = quotient_failure(quotient, pres)
    if failure is not None:
        raise InvalidQuotient(quotient, failure)
    return _eval_word(w, quotient, pres.n)


def quotient_value_str(value: QuotientValue) -> str:
    if isinstance(value, int):
        return "+1" if value == 1 else "-1"
    return perm_str(value)


def is_identity_value(value: QuotientValue) -> bool:
    if isinstance(value, int):
        return value == 1
    return value == tuple(range(len(value)))

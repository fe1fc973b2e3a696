"""Built-in representation families addressable by name.

Covers the classical 2x2-block families over B_n, the classified
2-local families over the multi-virtual and multi-welded groups, the
Burau representation, and the 3-local F-representation.  Constructors
return fully symbolic specs with their nonvanishing side conditions
attached.
"""

from __future__ import annotations

from itertools import product
from typing import Optional, Sequence

from .errors import InvalidChoice, UnknownName
from .localrep import ExplicitRep, LocalRepSpec
from .matrix import Matrix
from .presentations import Generator
from .symalg import Polynomial, RationalFunction, as_rf

S_TAGS = ("s2", "s3", "id", "s4")
A_TAGS = ("a1", "a2", "a3")

# Distinct free-parameter behavior per family:
#   swap(name)  = antidiag(name, 1/name), its own free parameter
#   bswap       = antidiag(b, 1/b), tied to the b of the sigma block
X_TAGS = ("swap", "id")
Y_TAGS = ("bswap", "swap", "id")


def _var(name: str, e: int = 1) -> Polynomial:
    return Polynomial.variable(name, e)


def swap_block(name: str) -> Matrix:
    return Matrix([[0, _var(name)], [_var(name, -1), 0]])


def antidiag(top, bottom) -> Matrix:
    return Matrix([[0, top], [bottom, 0]])


def _sigma_choice(tag: str) -> tuple[Matrix, tuple[RationalFunction, ...]]:
    b, c, d = _var("b"), _var("c"), _var("d")
    if tag == "id":
        return Matrix.identity(2), ()
    if tag == "s2":
        return Matrix([[1 - b * c, b], [c, 0]]), (as_rf(b * c),)
    if tag == "s3":
        return Matrix([[0, b], [c, 0]]), (as_rf(b * c),)
    if tag == "s4":
        return (
            Matrix([[0, RationalFunction(1 - d, c)], [c, d]]),
            (as_rf(c), as_rf(d - 1)),
        )
    raise InvalidChoice(f"unknown sigma choice {tag!r}")


def _welded_choice(tag: str) -> tuple[Matrix, tuple[RationalFunction, ...]]:
    b, c, d = _var("b"), _var("c"), _var("d")
    if tag == "a1":
        return Matrix([[1 - b * c, b], [c, 0]]), (as_rf(b * c),)
    if tag == "a2":
        return Matrix([[0, b], [c, 0]]), (as_rf(b * c),)
    if tag == "a3":
        return (
            Matrix([[0, b], [RationalFunction(1 - d, b), d]]),
            (as_rf(b), as_rf(d - 1)),
        )
    raise InvalidChoice(f"unknown welded sigma choice {tag!r}")


def _x_names(k: int) -> tuple[str, ...]:
    if k == 2:
        return ("x", "q")
    return tuple(f"x{a}" for a in range(k))


_BETA_BY_CHOICE = {
    ("s2", ("swap", "id")): "beta2",
    ("s3", ("swap", "id")): "beta3",
    ("id", ("swap", "id")): "beta4",
    ("s4", ("swap", "id")): "beta5",
    ("s2", ("swap", "swap")): "beta6",
    ("s3", ("swap", "swap")): "beta7",
    ("id", ("swap", "swap")): "beta8",
    ("s4", ("swap", "swap")): "beta9",
}

_ZETA_BY_CHOICE = {
    ("a1", ("bswap", "id")): "zeta2",
    ("a2", ("swap", "id")): "zeta3",
    ("a3", ("bswap", "id")): "zeta4",
    ("a1", ("bswap", "bswap")): "zeta5",
    ("a2", ("swap", "swap")): "zeta6",
    ("a3", ("bswap", "bswap")): "zeta7",
}


def _mvb_name(k: int, s_tag: str, x_tags: tuple[str, ...]) -> str:
    alias = _BETA_BY_CHOICE.get((s_tag, x_tags))
    if k == 2 and alias:
        return alias
    codes = "".join("s" if t == "swap" else "i" for t in x_tags[1:])
    parts = ["mvb", f"k{k}", s_tag]
    if codes:
        parts.append(f"x{codes}")
    return "-".join(parts)


def _mwb_name(k: int, a_tag: str, y_tags: tuple[str, ...]) -> str:
    alias = _ZETA_BY_CHOICE.get((a_tag, y_tags))
    if k == 2 and alias:
        return alias
    codes = "".join(
        "b" if t == "bswap" else ("s" if t == "swap" else "i")
        for t in y_tags[1:]
    )
    parts = ["mwb", f"k{k}", a_tag]
    if codes:
        parts.append(f"y{codes}")
    return "-".join(parts)


def trivial_family(group: str, n: int, k: int) -> LocalRepSpec:
    if group == "MkVB":
        name = "beta1" if k == 2 else f"mvb-k{k}-trivial"
    elif group == "MkWB":
        name = "zeta1" if k == 2 else f"mwb-k{k}-trivial"
    else:
        raise InvalidChoice(f"no trivial family catalogued for {group}")
    eye = Matrix.identity(2)
    return LocalRepSpec(name, n, k, eye, (eye,) * k, (), group)


def mvb_family(
    n: int, k: int, s_tag: str, x_tags: Sequence[str]
) -> LocalRepSpec:
    """One classified multi-virtual family: sigma choice plus swap/id pattern."""
    if k < 1:
        raise InvalidChoice(f"need k >= 1, got {k}")
    x_tags = tuple(x_tags)
    if len(x_tags) != k:
        raise InvalidChoice(f"need {k} rho choices, got {len(x_tags)}")
    if any(t not in X_TAGS for t in x_tags):
        raise InvalidChoice(f"rho choices must be in {X_TAGS}")
    if x_tags[0] != "swap":
        raise InvalidChoice(
            "the family-0 block must be a swap; identity there is not in "
            "the classification"
        )
    sigma, conds = _sigma_choice(s_tag)
    names = _x_names(k)
    blocks: list[Matrix] = []
    side = list(conds)
    for tag, pname in zip(x_tags, names):
        if tag == "swap":
            blocks.append(swap_block(pname))
            side.append(as_rf(_var(pname)))
        else:
            blocks.append(Matrix.identity(2))
    return LocalRepSpec(
        _mvb_name(k, s_tag, x_tags), n, k, sigma, tuple(blocks),
        tuple(side), "MkVB",
    )


def mwb_family(
    n: int, k: int, a_tag: str, y_tags: Sequence[str]
) -> LocalRepSpec:
    """One classified multi-welded family.

    The sigma choice dictates the legal rho blocks: a1/a3 force every
    nontrivial rho block to antidiag(b, 1/b), while a2 leaves each swap
    its own free parameter.
    """
    if k < 1:
        raise InvalidChoice(f"need k >= 1, got {k}")
    y_tags = tuple(y_tags)
    if len(y_tags) != k:
        raise InvalidChoice(f"need {k} rho choices, got {len(y_tags)}")
    if any(t not in Y_TAGS for t in y_tags):
        raise InvalidChoice(f"rho choices must be in {Y_TAGS}")
    sigma, conds = _welded_choice(a_tag)
    bound = a_tag in ("a1", "a3")
    active = "bswap" if bound else "swap"
    if y_tags[0] != active:
        raise InvalidChoice(
            f"sigma choice {a_tag} forces the family-0 block to {active}"
        )
    if any(t not in (active, "id") for t in y_tags):
        raise InvalidChoice(
            f"sigma choice {a_tag} allows rho blocks {active} or id only"
        )
    names = _x_names(k)
    blocks: list[Matrix] = []
    side = list(conds)
    for tag, pname in zip(y_tags, names):
        if tag == "bswap":
            blocks.append(antidiag(_var("b"), _var("b", -1)))
        elif tag == "swap":
            blocks.append(swap_block(pname))
            side.append(as_rf(_var(pname)))
        else:
            blocks.append(Matrix.identity(2))
    return LocalRepSpec(
        _mwb_name(k, a_tag, y_tags), n, k, sigma, tuple(blocks),
        tuple(side), "MkWB",
    )


def burau(n: int) -> LocalRepSpec:
    t = _var("t")
    block = Matrix([[1 - t, t], [1, 0]])
    return LocalRepSpec("burau", n, 0, block, (), (as_rf(t),), "B")


def bn_family(which: int, n: int) -> LocalRepSpec:
    a, b, c, d = _var("a"), _var("b"), _var("c"), _var("d")
    if which == 1:
        block = Matrix([[a, RationalFunction(1 - a, c)], [c, 0]])
        side = (as_rf(c), as_rf(a - 1))
    elif which == 2:
        block = Matrix([[0, RationalFunction(1 - d, c)], [c, d]])
        side = (as_rf(c), as_rf(d - 1))
    elif which == 3:
        block = Matrix([[0, b], [c, 0]])
        side = (as_rf(b * c),)
    else:
        raise UnknownName(f"bn-beta{which}")
    return LocalRepSpec(f"bn-beta{which}", n, 0, block, (), side, "B")


def f_block() -> Matrix:
    t = _var("t")
    return Matrix([[1, 1, 0], [0, -t, 0], [0, t, 1]])


def f_rep(n: int) -> ExplicitRep:
    """The 3-local representation of B_n on an (n+1)-dimensional space."""
    block = f_block()
    dim = n + 1
    images = {}
    for i in range(1, n):
        rows = [
            [as_rf(1 if r == c else 0) for c in range(dim)]
            for r in range(dim)
        ]
        for r in range(3):
            for c in range(3):
                rows[i - 1 + r][i - 1 + c] = block.entry(r, c)
        images[Generator("s", i)] = Matrix(rows)
    return ExplicitRep("f_rep", n, 0, images, (as_rf(_var("t")),), "B")


def enumerate_families(group: str, k: int, n: int) -> tuple[LocalRepSpec, ...]:
    """Every classified family for the group at this k, catalog order."""
    out = [trivial_family(group, n, k)]
    if group == "MkVB":
        for combo in product(X_TAGS[::-1], repeat=k - 1):
            for s_tag in S_TAGS:
                out.append(mvb_family(n, k, s_tag, ("swap",) + combo))
    elif group == "MkWB":
        for combo in product((False, True), repeat=k - 1):
            for a_tag in A_TAGS:
                active = "bswap" if a_tag in ("a1", "a3") else "swap"
                tags = (active,) + tuple(
                    active if on else "id" for on in combo
                )
                out.append(mwb_family(n, k, a_tag, tags))
    else:
        raise InvalidChoice(f"no classified catalog for group {group!r}")
    return tuple(out)


def expected_family_count(group: str, k: int) -> int:
    if group == "MkVB":
        return 2 ** (k + 1) + 1
    if group == "MkWB":
        return 3 * 2 ** (k - 1) + 1
    raise InvalidChoice(f"no classified catalog for group {group!r}")


def builtin_catalog(
    name: str, n: int, k: Optional[int] = None
) -> LocalRepSpec | ExplicitRep:
    """Resolve a family name to a spec at the requested size."""
    key = name.strip().lower()
    if key == "burau":
        return burau(n)
    if key == "f_rep":
        return f_rep(n)
    if key.startswith("bn-beta") and key[7:] in ("1", "2", "3"):
        return bn_family(int(key[7:]), n)
    if key in ("beta1", "zeta1"):
        if k is not None and k != 2:
            raise InvalidChoice(f"{key} is a k=2 family, got k={k}")
        group = "MkVB" if key == "beta1" else "MkWB"
        return trivial_family(group, n, 2)
    for (s_tag, x_tags), alias in _BETA_BY_CHOICE.items():
        if alias == key:
            if k is not None and k != 2:
                raise InvalidChoice(f"{key} is a k=2 family, got k={k}")
            return mvb_family(n, 2, s_tag, x_tags)
    for (a_tag, y_tags), alias in _ZETA_BY_CHOICE.items():
        if alias == key:
            if k is not None and k != 2:
                raise InvalidChoice(f"{key} is a k=2 family, got k={k}")
            return mwb_family(n, 2, a_tag, y_tags)
    spec = _parse_generated(key, n)
    if spec is not None:
        return spec
    raise UnknownName(name)


def _parse_generated(key: str, n: int) -> Optional[LocalRepSpec]:
    parts = key.split("-")
    if len(parts) < 3 or parts[0] not in ("mvb", "mwb"):
        return None
    if not parts[1].startswith("k") or not parts[1][1:].isdigit():
        return None
    k = int(parts[1][1:])
    if parts[2] == "trivial" and len(parts) == 3:
        return trivial_family("MkVB" if parts[0] == "mvb" else "MkWB", n, k)
    tag = parts[2]
    codes = parts[3][1:] if len(parts) > 3 else ""
    if len(parts) > 4 or len(codes) != max(0, k - 1):
        return None
    if parts[0] == "mvb" and tag not in S_TAGS:
        return None
    if parts[0] == "mwb" and tag not in A_TAGS:
        return None
    if parts[0] == "mvb":
        x_tags = ("swap",) + tuple(
            "swap" if ch == "s" else "id" for ch in codes
        )
        return mvb_family(n, k, tag, x_tags)
    active = "bswap" if tag in ("a1", "a3") else "swap"
    y_tags = (active,) + tuple(
        {"b": "bswap", "s": "swap", "i": "id"}.get(ch, "?") for ch in codes
    )
    return mwb_family(n, k, tag, y_tags)

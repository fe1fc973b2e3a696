"""Exact multivariate Laurent polynomial and rational function arithmetic over Q.

These are the scalars for every matrix in the package.  Polynomials are
sparse maps from Laurent monomials to Fraction coefficients, kept in a
canonical form (no zero coefficients, no zero exponents).  Rational
functions are normalised only by stripping rational and monomial content
from the denominator and by opportunistic exact division; there is no
multivariate gcd, so equality is decided by cross-multiplication, which
is exact and total over an integral domain.

Variable names are plain strings ordered lexicographically.  The term
order used for canonical output and exact division is degree then
reverse-lexicographic (degrevlex).
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Iterable, Mapping, Optional, Sequence, Union

from .errors import DenominatorVanishes, ZeroDenominator, ZeroInverse

Scalar = Union[int, Fraction]


def _coerce_fraction(value: Union[int, Fraction]) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an exact scalar, got {type(value).__name__}")


class Monomial:
    """A Laurent monomial: finitely many variables with nonzero integer exponents."""

    __slots__ = ("_exps", "_hash", "_degree")

    def __init__(self, exps: Union[Mapping[str, int], Iterable[tuple[str, int]]] = ()):
        if isinstance(exps, Mapping):
            items = exps.items()
        else:
            items = exps
        cleaned = tuple(sorted((v, e) for v, e in items if e != 0))
        for v, e in cleaned:
            if not isinstance(v, str) or not isinstance(e, int):
                raise TypeError("monomial wants (str, int) pairs")
        self._exps = cleaned
        self._hash = hash(cleaned)
        self._degree = sum(e for _, e in cleaned)

    @property
    def exps(self) -> tuple[tuple[str, int], ...]:
        return self._exps

    def is_unit(self) -> bool:
        return not self._exps

    def degree(self) -> int:
        return self._degree

    def variables(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self._exps)

    def exponent(self, var: str) -> int:
        for v, e in self._exps:
            if v == var:
                return e
        return 0

    def __mul__(self, other: "Monomial") -> "Monomial":
        merged = dict(self._exps)
        for v, e in other._exps:
            merged[v] = merged.get(v, 0) + e
        return Monomial(merged)

    def inverse(self) -> "Monomial":
        return Monomial({v: -e for v, e in self._exps})

    def __pow__(self, power: int) -> "Monomial":
        return Monomial({v: e * power for v, e in self._exps})

    def divides(self, other: "Monomial") -> bool:
        """True when other / self has no negative exponents."""
        return all(other.exponent(v) >= e for v, e in self._exps)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Monomial) and self._exps == other._exps

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Monomial({dict(self._exps)!r})"

    def __str__(self) -> str:
        if not self._exps:
            return "1"
        parts = []
        for v, e in self._exps:
            parts.append(v if e == 1 else f"{v}^{e}")
        return "*".join(parts)


UNIT_MONOMIAL = Monomial()


def _degrevlex_key(universe: Sequence[str]):
    """Sort key: ascending degree, then degrevlex within a degree."""
    rev = tuple(reversed(universe))

    def key(m: Monomial):
        return (m.degree(), tuple(-m.exponent(v) for v in rev))

    return key


class Polynomial:
    """Sparse Laurent polynomial with Fraction coefficients.

    Instances are treated as immutable; the term dict is never mutated
    after construction.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Fraction] = ()):
        if isinstance(terms, Mapping):
            items = terms.items()
        else:
            items = terms
        cleaned: dict[Monomial, Fraction] = {}
        for m, c in items:
            c = _coerce_fraction(c)
            if c != 0:
                cleaned[m] = c
        self._terms = cleaned
        self._hash: Optional[int] = None

    # -- construction -------------------------------------------------

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls({})

    @classmethod
    def one(cls) -> "Polynomial":
        return cls({UNIT_MONOMIAL: Fraction(1)})

    @classmethod
    def constant(cls, value: Scalar) -> "Polynomial":
        return cls({UNIT_MONOMIAL: _coerce_fraction(value)})

    @classmethod
    def variable(cls, name: str, power: int = 1) -> "Polynomial":
        return cls({Monomial({name: power}): Fraction(1)})

    @classmethod
    def term(cls, coeff: Scalar, exps: Mapping[str, int]) -> "Polynomial":
        return cls({Monomial(exps): _coerce_fraction(coeff)})

    # -- inspection ---------------------------------------------------

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(m.is_unit() for m in self._terms)

    def constant_value(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms[UNIT_MONOMIAL]

    def variables(self) -> tuple[str, ...]:
        seen: set[str] = set()
        for m in self._terms:
            seen.update(m.variables())
        return tuple(sorted(seen))

    def total_degree(self) -> int:
        if self.is_zero():
            return 0
        return max(m.degree() for m in self._terms)

    def degree_in(self, var: str) -> int:
        if self.is_zero():
            return 0
        return max((m.exponent(var) for m in self._terms), default=0)

    def min_exponent(self, var: str) -> int:
        return min((m.exponent(var) for m in self._terms), default=0)

    def leading(self) -> tuple[Monomial, Fraction]:
        """Leading term under degrevlex over this polynomial's variables."""
        if self.is_zero():
            raise ValueError("zero polynomial has no leading term")
        key = _degrevlex_key(self.variables())
        m = max(self._terms, key=key)
        return m, self._terms[m]

    # -- arithmetic ---------------------------------------------------

    def _coerce(self, other) -> Optional["Polynomial"]:
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self._terms)
        for m, c in o._terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s == 0:
                    del out[m]
                else:
                    out[m] = s
        p = Polynomial.__new__(Polynomial)
        p._terms = out
        p._hash = None
        return p

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        p = Polynomial.__new__(Polynomial)
        p._terms = {m: -c for m, c in self._terms.items()}
        p._hash = None
        return p

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self._terms or not o._terms:
            return Polynomial.zero()
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in o._terms.items():
                m = m1 * m2
                c = c1 * c2
                s = out.get(m)
                if s is None:
                    out[m] = c
                else:
                    s = s + c
                    if s == 0:
                        del out[m]
                    else:
                        out[m] = s
        p = Polynomial.__new__(Polynomial)
        p._terms = out
        p._hash = None
        return p

    __rmul__ = __mul__

    def scale(self, value: Scalar) -> "Polynomial":
        c = _coerce_fraction(value)
        if c == 0:
            return Polynomial.zero()
        p = Polynomial.__new__(Polynomial)
        p._terms = {m: co * c for m, co in self._terms.items()}
        p._hash = None
        return p

    def mul_monomial(self, mono: Monomial) -> "Polynomial":
        p = Polynomial.__new__(Polynomial)
        p._terms = {m * mono: c for m, c in self._terms.items()}
        p._hash = None
        return p

    def __pow__(self, power: int) -> "Polynomial":
        if power < 0:
            raise ValueError("use RationalFunction for negative powers")
        result = Polynomial.one()
        base = self
        while power:
            if power & 1:
                result = result * base
            base = base * base if power > 1 else base
            power >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- content and structure -----------------------------------------

    def split_content(self) -> tuple[Fraction, Monomial, "Polynomial"]:
        """Write self = c * m * core with core primitive.

        The rational content c makes the core's coefficients coprime
        integers with positive leading sign; the monomial content m
        collects the minimum exponent of each variable, so the core has
        only nonnegative exponents and mentions each variable with
        exponent zero somewhere.
        """
        if self.is_zero():
            return Fraction(0), UNIT_MONOMIAL, Polynomial.zero()
        from math import gcd

        num_gcd = 0
        den_lcm = 1
        for c in self._terms.values():
            num_gcd = gcd(num_gcd, c.numerator)
            den_lcm = den_lcm * c.denominator // gcd(den_lcm, c.denominator)
        content = Fraction(num_gcd, den_lcm)
        mono = {}
        for v in self.variables():
            mono[v] = self.min_exponent(v)
        mcontent = Monomial(mono)
        inv = mcontent.inverse()
        core_terms = {m * inv: c / content for m, c in self._terms.items()}
        core = Polynomial(core_terms)
        lead_m, lead_c = core.leading()
        if lead_c < 0:
            content = -content
            core = -core
        return content, mcontent, core

    def coefficient_split(self, var: str) -> dict[int, "Polynomial"]:
        """View self as a polynomial in var: power -> coefficient polynomial."""
        out: dict[int, dict[Monomial, Fraction]] = {}
        for m, c in self._terms.items():
            e = m.exponent(var)
            rest = Monomial({v: k for v, k in m.exps if v != var})
            out.setdefault(e, {})[rest] = c
        return {e: Polynomial(t) for e, t in out.items()}

    def split_linear(self, var: str) -> tuple["Polynomial", "Polynomial"]:
        """For self of degree exactly 1 in var, return (A, B) with self = A*var + B."""
        parts = self.coefficient_split(var)
        if max(parts) != 1 or min(parts) < 0:
            raise ValueError(f"not linear in {var}")
        a = parts.get(1, Polynomial.zero())
        b = parts.get(0, Polynomial.zero())
        return a, b

    # -- substitution and evaluation ------------------------------------

    def evaluate(self, assignment: Mapping[str, Scalar]) -> Fraction:
        """Evaluate with every variable bound to an exact rational."""
        total = Fraction(0)
        for m, c in self._terms.items():
            val = c
            for v, e in m.exps:
                if v not in assignment:
                    raise KeyError(f"no value for variable {v}")
                base = _coerce_fraction(assignment[v])
                if base == 0 and e < 0:
                    raise DenominatorVanishes(f"{v} = 0 with negative exponent")
                val = val * base ** e
            total += val
        return total

    def substitute(self, assignment: Mapping[str, "RationalFunction"]) -> "RationalFunction":
        """Replace some variables by rational functions; others stay symbolic."""
        total = RationalFunction.zero()
        for m, c in self._terms.items():
            val = RationalFunction.constant(c)
            for v, e in m.exps:
                if v in assignment:
                    base = as_rf(assignment[v])
                    if base.is_zero() and e < 0:
                        raise DenominatorVanishes(f"{v} -> 0 with negative exponent")
                    val = val * base ** e
                else:
                    val = val * RationalFunction(Polynomial.variable(v, e))
            total = total + val
        return total

    # -- output ---------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        key = _degrevlex_key(self.variables())
        return sorted(self._terms.items(), key=lambda it: key(it[0]))

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        chunks: list[str] = []
        for i, (m, c) in enumerate(self.sorted_terms()):
            neg = c < 0
            mag = -c if neg else c
            if m.is_unit():
                body = str(mag)
            elif mag == 1:
                body = str(m)
            else:
                body = f"{mag}*{m}"
            if i == 0:
                chunks.append(f"-{body}" if neg else body)
            else:
                chunks.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(chunks)

    def __repr__(self) -> str:
        return f"Polynomial({self})"


class RationalFunction:
    """Quotient of Laurent polynomials with a primitive denominator.

    Equality is cross-multiplication, an equivalence relation over an
    integral domain; no canonical form is computed, so instances are not
    hashable.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial = None):
        if den is None:
            den = Polynomial.one()
        if not isinstance(num, Polynomial) or not isinstance(den, Polynomial):
            raise TypeError("RationalFunction wants Polynomial parts")
        if den.is_zero():
            raise ZeroDenominator("zero denominator")
        if num.is_zero():
            self.num = Polynomial.zero()
            self.den = Polynomial.one()
            return
        dc, dm, dcore = den.split_content()
        num = num.mul_monomial(dm.inverse()).scale(1 / dc)
        den = dcore
        if not den.is_constant():
            quo = divide_exact(num, den)
            if quo is not None:
                num, den = quo, Polynomial.one()
            else:
                quo = divide_exact(den, num)
                if quo is not None:
                    # den = num * quo, so num/den = 1/quo
                    qc, qm, qcore = quo.split_content()
                    num = Polynomial.term(Fraction(1) / qc, dict(qm.inverse().exps))
                    den = qcore
        else:
            num = num.scale(1 / den.constant_value())
            den = Polynomial.one()
        self.num = num
        self.den = den

    # -- construction ----------------------------------------------------

    @classmethod
    def zero(cls) -> "RationalFunction":
        return cls(Polynomial.zero())

    @classmethod
    def one(cls) -> "RationalFunction":
        return cls(Polynomial.one())

    @classmethod
    def constant(cls, value: Scalar) -> "RationalFunction":
        return cls(Polynomial.constant(value))

    @classmethod
    def variable(cls, name: str, power: int = 1) -> "RationalFunction":
        return cls(Polynomial.variable(name, power))

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num == self.den

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        return self.num.constant_value() / self.den.constant_value()

    def variables(self) -> tuple[str, ...]:
        return tuple(sorted(set(self.num.variables()) | set(self.den.variables())))

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> Optional["RationalFunction"]:
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Polynomial):
            return RationalFunction(other)
        if isinstance(other, (int, Fraction)):
            return RationalFunction.constant(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        out = RationalFunction.__new__(RationalFunction)
        out.num = -self.num
        out.den = self.den
        return out

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.is_zero() or o.is_zero():
            return RationalFunction.zero()
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroInverse("cannot invert zero")
        return RationalFunction(self.den, self.num)

    def __pow__(self, power: int) -> "RationalFunction":
        if power < 0:
            return self.inverse() ** (-power)
        return RationalFunction(self.num ** power, self.den ** power)

    def __eq__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self.num * o.den) == (o.num * self.den)

    __hash__ = None  # cross-multiplication equality admits no structural hash

    # -- evaluation -----------------------------------------------------------

    def evaluate(self, assignment: Mapping[str, Scalar]) -> Fraction:
        den = self.den.evaluate(assignment)
        if den == 0:
            raise DenominatorVanishes(f"denominator {self.den} vanishes at {dict(assignment)}")
        return self.num.evaluate(assignment) / den

    def substitute(self, assignment: Mapping[str, "RationalFunction"]) -> "RationalFunction":
        den = self.den.substitute(assignment)
        if den.is_zero():
            raise DenominatorVanishes(f"denominator {self.den} vanishes under substitution")
        return self.num.substitute(assignment) / den

    # -- output ------------------------------------------------------------------

    def __str__(self) -> str:
        if self.den == Polynomial.one():
            return str(self.num)
        num = str(self.num)
        den = str(self.den)
        if len(self.num.terms) > 1:
            num = f"({num})"
        if len(self.den.terms) > 1:
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self) -> str:
        return f"RationalFunction({self})"

    def to_json(self) -> dict:
        return {"num": str(self.num), "den": str(self.den)}


def as_rf(value) -> RationalFunction:
    """Coerce an int, Fraction, Polynomial or RationalFunction to a RationalFunction."""
    if isinstance(value, RationalFunction):
        return value
    if isinstance(value, Polynomial):
        return RationalFunction(value)
    if isinstance(value, (int, Fraction)):
        return RationalFunction.constant(value)
    raise TypeError(f"cannot coerce {type(value).__name__} to RationalFunction")


def as_poly(value) -> Polynomial:
    if isinstance(value, Polynomial):
        return value
    if isinstance(value, (int, Fraction)):
        return Polynomial.constant(value)
    if isinstance(value, RationalFunction):
        if value.den == Polynomial.one():
            return value.num
        raise ValueError(f"{value} has a nontrivial denominator")
    raise TypeError(f"cannot coerce {type(value).__name__} to Polynomial")


def variables(names: str) -> list[RationalFunction]:
    """Convenience: 'a b c' -> rational function variables a, b, c."""
    return [RationalFunction.variable(n) for n in names.split()]


# -- division and shallow factoring -------------------------------------------


def divide_exact(p: Polynomial, f: Polynomial) -> Optional[Polynomial]:
    """Exact quotient p / f, or None when f does not divide p.

    Laurent inputs are handled by stripping monomial content first; the
    core division runs over nonnegative exponents where degrevlex is a
    well order.
    """
    if f.is_zero():
        return None
    if p.is_zero():
        return Polynomial.zero()
    if f.is_constant():
        return p.scale(1 / f.constant_value())
    pc, pm, pcore = p.split_content()
    fc, fm, fcore = f.split_content()
    universe = tuple(sorted(set(pcore.variables()) | set(fcore.variables())))
    key = _degrevlex_key(universe)
    flead = max(fcore.terms, key=key)
    fcoeff = fcore.terms[flead]
    quotient: dict[Monomial, Fraction] = {}
    rest = pcore
    while not rest.is_zero():
        rlead = max(rest.terms, key=key)
        if not flead.divides(rlead):
            return None
        qm = rlead * flead.inverse()
        qc = rest.terms[rlead] / fcoeff
        quotient[qm] = qc
        rest = rest - fcore.mul_monomial(qm).scale(qc)
    q = Polynomial(quotient)
    return q.mul_monomial(pm * fm.inverse()).scale(pc / fc)


def _synthetic_divide(p: Polynomial, var: str, root: Fraction) -> Polynomial:
    """Quotient of p by (var - root); caller guarantees divisibility."""
    parts = p.coefficient_split(var)
    top = max(parts)
    coeffs: dict[int, Polynomial] = {}
    carry = Polynomial.zero()
    for e in range(top, 0, -1):
        carry = parts.get(e, Polynomial.zero()) + carry.scale(root)
        coeffs[e - 1] = carry
    out = Polynomial.zero()
    for e, c in coeffs.items():
        out = out + c * Polynomial.variable(var, e)
    return out


def _rational_sqrt(f: Fraction) -> Optional[Fraction]:
    if f <= 0:
        return None
    rn, rd = isqrt(f.numerator), isqrt(f.denominator)
    if rn * rn == f.numerator and rd * rd == f.denominator:
        return Fraction(rn, rd)
    return None


def _square_split(
    p: Polynomial,
) -> Optional[tuple[Fraction, Polynomial, Polynomial]]:
    """p = c1*(a - b)(a + b) for two-term even-exponent p, else None."""
    terms = p.sorted_terms()
    if len(terms) != 2:
        return None
    (m2, c2), (m1, c1) = terms
    if any(e % 2 for _, e in m1.exps) or any(e % 2 for _, e in m2.exps):
        return None
    s = _rational_sqrt(-c2 / c1)
    if s is None:
        return None
    a = Polynomial.term(Fraction(1), {v: e // 2 for v, e in m1.exps})
    b = Polynomial.term(s, {v: e // 2 for v, e in m2.exps})
    return c1, a - b, a + b


def factor_shallow(
    p: Polynomial, known: Sequence[Polynomial] = ()
) -> tuple[Fraction, Monomial, list[tuple[Polynomial, int]]]:
    """Cheap partial factorisation: content, known divisors, linear roots.

    Returns (rational content, monomial content, factors) with
    p == content * monomial * product(f ** m for f, m in factors).
    Factors are primitive with positive leading coefficient and need not
    be irreducible; whatever resists splitting is returned as one factor.
    Detection is limited to exact division by the polynomials in
    ``known``, substitution roots var = +-1, and two-term differences of
    squares.
    """
    if p.is_zero():
        return Fraction(0), UNIT_MONOMIAL, []
    content, mono, core = p.split_content()
    factors: list[tuple[Polynomial, int]] = []

    def push(f: Polynomial, mult: int = 1):
        for i, (g, m) in enumerate(factors):
            if g == f:
                factors[i] = (g, m + mult)
                return
        factors.append((f, mult))

    work = core
    for f in known:
        if f.is_constant():
            continue
        fc, fm, fcore = f.split_content()
        if fcore.is_constant():
            continue
        while True:
            q = divide_exact(work, fcore)
            if q is None:
                break
            qc, qm, work = q.split_content()
            # content and monomial parts of the quotient fold back in
            content *= qc
            mono = mono * qm
            push(fcore)
    changed = True
    while changed:
        changed = False
        for var in work.variables():
            if work.degree_in(var) <= 0:
                continue
            for root in (Fraction(1), Fraction(-1)):
                while True:
                    if work.degree_in(var) <= 0:
                        break
                    probe = work.substitute({var: RationalFunction.constant(root)})
                    if not probe.is_zero():
                        break
                    work = _synthetic_divide(work, var, root)
                    qc, qm, work = work.split_content()
                    content *= qc
                    mono = mono * qm
                    push(Polynomial.variable(var) - Polynomial.constant(root))
                    changed = True
    if work.is_constant():
        content *= work.constant_value()
        return content, mono, factors

    queue = [work]
    while queue:
        f = queue.pop()
        fc, fm, fcore = f.split_content()
        content *= fc
        mono = mono * fm
        if fcore.is_constant():
            continue
        halves = _square_split(fcore)
        if halves is None:
            push(fcore)
        else:
            content *= halves[0]
            queue.extend(halves[1:])
    return content, mono, factors

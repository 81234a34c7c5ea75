"""Value payloads used by the built-in semirings.

Extended naturals saturate at a single INF object; polynomials are kept in
a canonical sorted-term form so equality and hashing are structural, and
positive Boolean expressions are absorption-reduced antichains of variable
sets.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union


class _Infinity:
    """Absorbing infinity for extended naturals and costs."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"

    def __hash__(self):
        return hash("provlog-infinity")

    def __eq__(self, other):
        return isinstance(other, _Infinity)

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return isinstance(other, _Infinity)

    def __gt__(self, other):
        return not isinstance(other, _Infinity)

    def __ge__(self, other):
        return True


INF = _Infinity()

ExtNat = Union[int, _Infinity]


def ext_add(a: ExtNat, b: ExtNat) -> ExtNat:
    if a is INF or b is INF:
        return INF
    return a + b


def ext_mul(a: ExtNat, b: ExtNat) -> ExtNat:
    if a == 0 or b == 0:
        return 0
    if a is INF or b is INF:
        return INF
    return a * b


def ext_leq(a: ExtNat, b: ExtNat) -> bool:
    if b is INF:
        return True
    if a is INF:
        return False
    return a <= b


def parse_extnat(text: str) -> ExtNat:
    text = text.strip()
    if text in ("inf", "infinity", "oo"):
        return INF
    n = int(text)
    if n < 0:
        raise ValueError("extended naturals are non-negative")
    return n


def fmt_extnat(v: ExtNat) -> str:
    return "inf" if v is INF else str(v)


# ---------------------------------------------------------------------------
# Monomials and polynomials
# ---------------------------------------------------------------------------

Monomial = tuple  # of (variable, exponent) pairs, sorted, exponents >= 1

UNIT_MONOMIAL: Monomial = ()


def monomial(variables: Iterable[str]) -> Monomial:
    """Monomial from a variable multiset given as an iterable."""
    counts: dict[str, int] = {}
    for v in variables:
        counts[v] = counts.get(v, 0) + 1
    return tuple(sorted(counts.items()))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    if len(b) == 1:
        (bv, be) = b[0]
        out = []
        placed = False
        for v, e in a:
            if v == bv:
                out.append((v, e + be))
                placed = True
            elif not placed and v > bv:
                out.append((bv, be))
                out.append((v, e))
                placed = True
            else:
                out.append((v, e))
        if not placed:
            out.append((bv, be))
        return tuple(out)
    counts = dict(a)
    for v, e in b:
        counts[v] = counts.get(v, 0) + e
    return tuple(sorted(counts.items()))


def mono_degree(m: Monomial) -> int:
    total = 0
    for _, e in m:
        total += e
    return total


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True when every exponent of `a` is covered by `b`."""
    exps = dict(b)
    return all(exps.get(v, 0) >= e for v, e in a)


def mono_div(b: Monomial, a: Monomial) -> Monomial:
    """b / a; caller guarantees divisibility."""
    counts = dict(b)
    for v, e in a:
        counts[v] -= e
    return tuple(sorted((v, e) for v, e in counts.items() if e > 0))


def mono_key(m: Monomial):
    """Graded-lex sort key: degree first, then the exponent vector."""
    return (mono_degree(m), m)


def fmt_monomial(m: Monomial) -> str:
    if not m:
        return "1"
    return "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)


class Poly:
    """A polynomial in canonical form: graded-lex sorted non-zero terms.

    Coefficients live in one of three domains selected by the owning
    semiring: naturals, naturals with INF, or Booleans clamped to {0, 1}.
    An optional degree cap silently drops higher-degree terms, which keeps
    truncated power-series arithmetic inside a finite object.
    """

    __slots__ = ("terms", "degree_cap")

    def __init__(self, terms: Mapping[Monomial, ExtNat] | Iterable = (), degree_cap=None):
        items = terms.items() if isinstance(terms, Mapping) else terms
        kept: dict[Monomial, ExtNat] = {}
        for m, c in items:
            if c == 0:
                continue
            if degree_cap is not None and mono_degree(m) > degree_cap:
                continue
            kept[m] = ext_add(kept[m], c) if m in kept else c
        self.terms = tuple(sorted(kept.items(), key=lambda t: mono_key(t[0])))
        self.degree_cap = degree_cap

    def coefficient(self, m: Monomial) -> ExtNat:
        for mm, c in self.terms:
            if mm == m:
                return c
        return 0

    def monomials(self) -> tuple[Monomial, ...]:
        return tuple(m for m, _ in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((mono_degree(m) for m, _ in self.terms), default=0)

    def variables(self) -> set[str]:
        return {v for m, _ in self.terms for v, _ in m}

    def map_coefficients(self, fn) -> "Poly":
        return Poly({m: fn(c) for m, c in self.terms}, self.degree_cap)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.terms:
            if not m:
                parts.append(fmt_extnat(c))
            elif c == 1:
                parts.append(fmt_monomial(m))
            else:
                parts.append(f"{fmt_extnat(c)}*{fmt_monomial(m)}")
        return " + ".join(parts)


def poly_const(c: ExtNat, degree_cap=None) -> Poly:
    return Poly({UNIT_MONOMIAL: c}, degree_cap)


def poly_var(name: str, degree_cap=None) -> Poly:
    return Poly({((name, 1),): 1}, degree_cap)


def poly_add(a: Poly, b: Poly, clamp: bool = False) -> Poly:
    cap = a.degree_cap if a.degree_cap is not None else b.degree_cap
    out: dict[Monomial, ExtNat] = dict(a.terms)
    for m, c in b.terms:
        out[m] = ext_add(out.get(m, 0), c)
    if clamp:
        out = {m: 1 for m, c in out.items() if c != 0}
    return Poly(out, cap)


def poly_is_one(p: Poly) -> bool:
    return len(p.terms) == 1 and p.terms[0][0] == () and p.terms[0][1] == 1


def poly_mul(a: Poly, b: Poly, clamp: bool = False) -> Poly:
    cap = a.degree_cap if a.degree_cap is not None else b.degree_cap
    if not a.terms or not b.terms:
        return Poly((), cap)
    if poly_is_one(a) and a.degree_cap == cap:
        return b if b.degree_cap == cap else Poly(dict(b.terms), cap)
    if poly_is_one(b) and b.degree_cap == cap:
        return a if a.degree_cap == cap else Poly(dict(a.terms), cap)
    out: dict[Monomial, ExtNat] = {}
    for m1, c1 in a.terms:
        for m2, c2 in b.terms:
            m = mono_mul(m1, m2)
            if cap is not None and mono_degree(m) > cap:
                continue
            if m in out:
                out[m] = ext_add(out[m], ext_mul(c1, c2))
            else:
                out[m] = ext_mul(c1, c2)
    if clamp:
        out = {m: 1 for m, c in out.items() if c != 0}
    return Poly(out, cap)


def poly_leq(a: Poly, b: Poly) -> bool:
    """Coefficient-wise order; the witness is the coefficient difference."""
    coeffs = dict(b.terms)
    return all(ext_leq(c, coeffs.get(m, 0)) for m, c in a.terms)


def poly_join(a: Poly, b: Poly) -> Poly:
    """Coefficient-wise maximum: the least upper bound for chain coefficients."""
    cap = a.degree_cap if a.degree_cap is not None else b.degree_cap
    out = dict(a.terms)
    for m, c in b.terms:
        prev = out.get(m, 0)
        out[m] = prev if ext_leq(c, prev) else c
    return Poly(out, cap)


def poly_glb(a: Poly, b: Poly) -> Poly:
    cap = a.degree_cap if a.degree_cap is not None else b.degree_cap
    right = dict(b.terms)
    out = {}
    for m, c in a.terms:
        other = right.get(m, 0)
        out[m] = c if ext_leq(c, other) else other
    return Poly(out, cap)


def clamp_poly(p: Poly) -> Poly:
    """Set every non-zero coefficient to one."""
    return Poly({m: 1 for m, _ in p.terms}, p.degree_cap)


def poly_partial_eval_zero(p: Poly, dead_variables: set[str]) -> Poly:
    """Substitute zero for the given variables (drop their monomials)."""
    return Poly(
        {m: c for m, c in p.terms if not any(v in dead_variables for v, _ in m)},
        p.degree_cap,
    )


# ---------------------------------------------------------------------------
# Positive Boolean expressions (monotone DNF antichains)
# ---------------------------------------------------------------------------

PosBool = frozenset  # of frozensets of variable names

POSBOOL_FALSE: PosBool = frozenset()
POSBOOL_TRUE: PosBool = frozenset({frozenset()})


def posbool_reduce(clauses: Iterable[frozenset]) -> PosBool:
    """Keep only inclusion-minimal clauses (absorption)."""
    clauses = list(set(clauses))
    kept = []
    for c in clauses:
        if any(other < c for other in clauses if other != c):
            continue
        if any(other == c for other in kept):
            continue
        kept.append(c)
    return frozenset(kept)


def posbool_var(name: str) -> PosBool:
    return frozenset({frozenset({name})})


def posbool_or(a: PosBool, b: PosBool) -> PosBool:
    return posbool_reduce(set(a) | set(b))


def posbool_and(a: PosBool, b: PosBool) -> PosBool:
    return posbool_reduce({c1 | c2 for c1 in a for c2 in b})


def posbool_implies(a: PosBool, b: PosBool) -> bool:
    """Monotone implication: every clause of `a` is covered by one of `b`."""
    return all(any(cb <= ca for cb in b) for ca in a)


def fmt_posbool(v: PosBool) -> str:
    if v == POSBOOL_FALSE:
        return "false"
    if v == POSBOOL_TRUE:
        return "true"
    clauses = sorted(("&".join(sorted(c)) or "true") for c in v)
    return " | ".join(clauses)


# ---------------------------------------------------------------------------
# Non-negative extended rationals (tropical costs)
# ---------------------------------------------------------------------------

Cost = Union[Fraction, _Infinity]


def parse_cost(text: str) -> Cost:
    text = text.strip()
    if text in ("inf", "infinity", "oo"):
        return INF
    value = Fraction(text)
    if value < 0:
        raise ValueError("costs must be non-negative")
    return value


def fmt_cost(v: Cost) -> str:
    if v is INF:
        return "inf"
    if isinstance(v, Fraction) and v.denominator == 1:
        return str(v.numerator)
    return str(v)


def cost_min(a: Cost, b: Cost) -> Cost:
    if a is INF:
        return b
    if b is INF:
        return a
    return a if a <= b else b


def cost_add(a: Cost, b: Cost) -> Cost:
    if a is INF or b is INF:
        return INF
    return a + b

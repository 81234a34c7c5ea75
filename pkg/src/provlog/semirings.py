"""Commutative semirings: built-in instances, finite table semirings,
law validation, the natural order, joins, and homomorphic evaluation.

Every handle is immutable; values are hashable and canonical so `==` is
semantic equality.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .errors import (
    AxiomViolation,
    InfiniteCoefficientInNonContinuousTarget,
    MalformedSpec,
    UnboundVariable,
)
from .values import (
    INF,
    Poly,
    ext_add,
    ext_mul,
    PosBool,
    POSBOOL_FALSE,
    POSBOOL_TRUE,
    cost_add,
    cost_min,
    ext_leq,
    fmt_cost,
    fmt_extnat,
    fmt_posbool,
    mono_degree,
    parse_cost,
    parse_extnat,
    poly_add,
    poly_const,
    poly_glb,
    poly_join,
    poly_leq,
    poly_mul,
    poly_var,
    posbool_and,
    posbool_implies,
    posbool_or,
    posbool_reduce,
    posbool_var,
)


@dataclass(frozen=True)
class Flags:
    plus_idempotent: bool = False
    times_idempotent: bool = False
    absorptive: bool = False
    positive: bool = False
    omega_continuous: bool = False
    has_finite_joins: bool = False
    has_glb: bool = False


class Semiring:
    """A commutative semiring handle: operations, constants, flags, codec."""

    id: str = "abstract"
    flags: Flags = Flags()
    carrier: Optional[tuple] = None  # finite carriers list their elements
    promotable: bool = False  # growing fixpoint entries may saturate to a sup
    divide_decidable: bool = True  # divide() == None means "no such factor"

    zero = None
    one = None

    def add(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def eq(self, a, b) -> bool:
        return a == b

    def sum(self, values: Iterable):
        total = self.zero
        for v in values:
            total = self.add(total, v)
        return total

    def prod(self, values: Iterable):
        total = self.one
        for v in values:
            total = self.mul(total, v)
        return total

    # -- natural order and lattice structure ------------------------------
    def leq(self, a, b) -> Optional[bool]:
        """a [= b iff some c satisfies a + c = b; None means undecided."""
        if self.carrier is not None:
            return any(self.eq(self.add(a, c), b) for c in self.carrier)
        return None

    def join2(self, a, b):
        """Least upper bound of a pair under the natural order, or None."""
        if self.carrier is not None:
            uppers = [c for c in self.carrier if self.leq(a, c) and self.leq(b, c)]
            least = [u for u in uppers
                     if all(self.leq(u, v) for v in uppers)]
            return least[0] if least else None
        return None

    def glb2(self, a, b):
        if self.carrier is not None:
            lowers = [c for c in self.carrier if self.leq(c, a) and self.leq(c, b)]
            greatest = [l for l in lowers
                        if all(self.leq(v, l) for v in lowers)]
            return greatest[0] if greatest else None
        return None

    def join(self, values: Iterable):
        """Fold of join2; None as soon as a pairwise join is missing."""
        out = None
        for v in values:
            if out is None:
                out = v
            else:
                out = self.join2(out, v)
                if out is None:
                    return None
        return out

    def divide(self, a, b):
        """Some e with b * e = a, or None (no witness or undecidable)."""
        if self.carrier is not None:
            for e in self.carrier:
                if self.eq(self.mul(b, e), a):
                    return e
            return None
        return None

    def omega_multiple(self, v):
        """The supremum of v, v+v, v+v+v, ... (an infinite repeated sum)."""
        if self.eq(self.add(v, v), v):
            return v
        if self.carrier is not None:
            seen = v
            while True:
                nxt = self.add(seen, v)
                if self.eq(nxt, seen):
                    return seen
                seen = nxt
        raise InfiniteCoefficientInNonContinuousTarget(self.id)

    # -- saturation support for diverging fixpoint entries ----------------
    def increased_keys(self, old, new) -> list:
        """Components of the value that strictly grew between two rounds."""
        return [()] if not self.eq(old, new) else []

    def promote(self, value, keys):
        """Replace the given growing components by their chain suprema."""
        raise NotImplementedError

    def key_degree(self, key) -> int:
        return 0

    # -- codec and sampling ------------------------------------------------
    def parse(self, text: str):
        raise NotImplementedError

    def fmt(self, v) -> str:
        return str(v)

    def sample(self, rng: random.Random):
        if self.carrier is not None:
            return rng.choice(self.carrier)
        raise NotImplementedError

    def value_size(self, v) -> int:
        """Rough growth measure used by fixpoint resource guards."""
        return 1

    def sample_nonzero(self, rng: random.Random):
        for _ in range(64):
            v = self.sample(rng)
            if not self.eq(v, self.zero):
                return v
        raise RuntimeError(f"could not sample a non-zero {self.id} value")

    def __repr__(self):
        return f"<semiring {self.id}>"


# ---------------------------------------------------------------------------
# Booleans
# ---------------------------------------------------------------------------

class BoolSemiring(Semiring):
    id = "bool"
    carrier = (False, True)
    zero = False
    one = True
    flags = Flags(plus_idempotent=True, times_idempotent=True, absorptive=True,
                  positive=True, omega_continuous=True,
                  has_finite_joins=True, has_glb=True)

    def add(self, a, b):
        return a or b

    def mul(self, a, b):
        return a and b

    def leq(self, a, b):
        return (not a) or b

    def join2(self, a, b):
        return a or b

    def glb2(self, a, b):
        return a and b

    def divide(self, a, b):
        if b:
            return a
        return False if not a else None

    def parse(self, text):
        text = text.strip().lower()
        if text in ("true", "1"):
            return True
        if text in ("false", "0"):
            return False
        raise ValueError(f"bad boolean literal {text!r}")

    def fmt(self, v):
        return "true" if v else "false"


# ---------------------------------------------------------------------------
# Counting semirings
# ---------------------------------------------------------------------------

class NatSemiring(Semiring):
    """Plain naturals: positive but no infinite sums."""

    id = "nat"
    zero = 0
    one = 1
    flags = Flags(positive=True, has_finite_joins=True, has_glb=True)

    def value_size(self, v):
        return v.bit_length()

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def leq(self, a, b):
        return a <= b

    def join2(self, a, b):
        return max(a, b)

    def glb2(self, a, b):
        return min(a, b)

    def divide(self, a, b):
        if b == 0:
            return 0 if a == 0 else None
        return a // b if a % b == 0 else None

    def parse(self, text):
        n = int(text.strip())
        if n < 0:
            raise ValueError("naturals are non-negative")
        return n

    def sample(self, rng):
        return rng.randint(0, 6)


class NatInfSemiring(Semiring):
    """Naturals completed with an absorbing infinity."""

    id = "nat-inf"
    zero = 0
    one = 1
    flags = Flags(positive=True, omega_continuous=True,
                  has_finite_joins=True, has_glb=True)
    promotable = True

    def value_size(self, v):
        return 1 if v is INF else v.bit_length()

    def add(self, a, b):
        return ext_add(a, b)

    def mul(self, a, b):
        return ext_mul(a, b)

    def leq(self, a, b):
        return ext_leq(a, b)

    def join2(self, a, b):
        return b if ext_leq(a, b) else a

    def glb2(self, a, b):
        return a if ext_leq(a, b) else b

    def divide(self, a, b):
        if b == 0:
            return 0 if a == 0 else None
        if b is INF:
            return 1 if a is INF else None
        if a is INF:
            return INF
        return a // b if a % b == 0 else None

    def omega_multiple(self, v):
        return 0 if v == 0 else INF

    def promote(self, value, keys):
        return INF if keys else value

    def parse(self, text):
        return parse_extnat(text)

    def fmt(self, v):
        return fmt_extnat(v)

    def sample(self, rng):
        return INF if rng.random() < 0.1 else rng.randint(0, 6)


class _InfinityPrime:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf'"


INFP = _InfinityPrime()


class NatInfPrimeSemiring(Semiring):
    """Naturals with two infinities; the second absorbs even the first.

    Used as the target of a non-sup-preserving homomorphism from the
    single-infinity semiring.
    """

    id = "nat-inf-prime"
    zero = 0
    one = 1
    flags = Flags(positive=True, omega_continuous=True,
                  has_finite_joins=True, has_glb=True)
    promotable = True
    divide_decidable = False

    def add(self, a, b):
        if a is INFP or b is INFP:
            return INFP
        if a is INF or b is INF:
            return INF
        return a + b

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        if a is INFP or b is INFP:
            return INFP
        if a is INF or b is INF:
            return INF
        return a * b

    def _rank(self, v):
        if v is INFP:
            return (2, 0)
        if v is INF:
            return (1, 0)
        return (0, v)

    def leq(self, a, b):
        return self._rank(a) <= self._rank(b)

    def join2(self, a, b):
        return b if self.leq(a, b) else a

    def glb2(self, a, b):
        return a if self.leq(a, b) else b

    def omega_multiple(self, v):
        return 0 if v == 0 else INF

    def promote(self, value, keys):
        return INF if keys else value

    def parse(self, text):
        text = text.strip()
        if text == "inf'":
            return INFP
        return parse_extnat(text)

    def fmt(self, v):
        if v is INFP:
            return "inf'"
        return fmt_extnat(v)

    def sample(self, rng):
        r = rng.random()
        if r < 0.08:
            return INF
        if r < 0.16:
            return INFP
        return rng.randint(0, 6)


def embed_nat_inf_into_prime(v):
    """The homomorphism n -> n, inf -> inf' (not sup-preserving)."""
    return INFP if v is INF else v


# ---------------------------------------------------------------------------
# Tropical costs
# ---------------------------------------------------------------------------

class TropicalSemiring(Semiring):
    """Min-plus over non-negative extended rationals."""

    id = "tropical"
    zero = INF
    one = Fraction(0)
    flags = Flags(plus_idempotent=True, absorptive=True, positive=True,
                  omega_continuous=True, has_finite_joins=True, has_glb=True)

    def add(self, a, b):
        return cost_min(a, b)

    def mul(self, a, b):
        return cost_add(a, b)

    def eq(self, a, b):
        return (a is INF and b is INF) or (a is not INF and b is not INF and a == b)

    def leq(self, a, b):
        # a [= b iff min(a, c) = b for some c, i.e. b is at most a.
        if a is INF:
            return True
        if b is INF:
            return False
        return b <= a

    def join2(self, a, b):
        return b if self.leq(a, b) else a

    def glb2(self, a, b):
        return a if self.leq(a, b) else b

    def divide(self, a, b):
        if b is INF:
            return Fraction(0) if a is INF else None
        if a is INF:
            return INF
        return a - b if a >= b else None

    def omega_multiple(self, v):
        return v

    def parse(self, text):
        return parse_cost(text)

    def fmt(self, v):
        return fmt_cost(v)

    def sample(self, rng):
        if rng.random() < 0.08:
            return INF
        return Fraction(rng.randint(0, 12), rng.choice((1, 1, 2)))


# ---------------------------------------------------------------------------
# Positive Boolean expressions
# ---------------------------------------------------------------------------

class PosBoolSemiring(Semiring):
    """Monotone Boolean expressions over free variables, in reduced DNF."""

    id = "posbool-free"
    zero = POSBOOL_FALSE
    one = POSBOOL_TRUE
    flags = Flags(plus_idempotent=True, times_idempotent=True, absorptive=True,
                  positive=True, omega_continuous=True,
                  has_finite_joins=True, has_glb=True)

    def add(self, a, b):
        return posbool_or(a, b)

    def mul(self, a, b):
        return posbool_and(a, b)

    def leq(self, a, b):
        return posbool_implies(a, b)

    def join2(self, a, b):
        return posbool_or(a, b)

    def glb2(self, a, b):
        return posbool_and(a, b)

    def divide(self, a, b):
        return a if posbool_implies(a, b) else None

    def omega_multiple(self, v):
        return v

    def value_size(self, v):
        return len(v) + sum(len(c) for c in v)

    def variable(self, name: str) -> PosBool:
        return posbool_var(name)

    def parse(self, text):
        text = text.strip()
        if text == "true":
            return POSBOOL_TRUE
        if text == "false":
            return POSBOOL_FALSE
        clauses = []
        for clause in text.split("|"):
            names = [n.strip() for n in clause.split("&")]
            if any(not n for n in names):
                raise ValueError(f"bad posbool literal {text!r}")
            clauses.append(frozenset(names))
        return posbool_reduce(clauses)

    def fmt(self, v):
        return fmt_posbool(v)

    def sample(self, rng):
        names = ("u", "v", "w")
        clauses = []
        for _ in range(rng.randint(0, 2)):
            clauses.append(frozenset(rng.sample(names, rng.randint(1, 2))))
        return posbool_reduce(clauses) if clauses else (
            POSBOOL_TRUE if rng.random() < 0.5 else POSBOOL_FALSE)


# ---------------------------------------------------------------------------
# Polynomial semirings
# ---------------------------------------------------------------------------

class PolySemiring(Semiring):
    """Polynomials over fact variables.

    `coeff_domain` selects the coefficient arithmetic:
      * "nat":      naturals (the universal provenance polynomials);
      * "bool":     coefficients clamped to {0, 1};
      * "nat-inf":  naturals with infinity, always degree-truncated, a
                    finite stand-in for formal power series.
    """

    def __init__(self, coeff_domain: str, degree_cap: Optional[int] = None):
        if coeff_domain not in ("nat", "bool", "nat-inf"):
            raise ValueError(coeff_domain)
        if coeff_domain == "nat-inf" and degree_cap is None:
            raise ValueError("power-series values require a degree cap")
        self.coeff_domain = coeff_domain
        self.degree_cap = degree_cap
        self.zero = Poly((), degree_cap)
        self.one = poly_const(1, degree_cap)
        if coeff_domain == "nat":
            self.id = "poly-nat"
            self.flags = Flags(positive=True, has_finite_joins=True, has_glb=True)
        elif coeff_domain == "bool":
            self.id = "poly-bool"
            self.flags = Flags(plus_idempotent=True, positive=True,
                               has_finite_joins=True, has_glb=True)
        else:
            self.id = f"series-trunc:{degree_cap}"
            self.flags = Flags(omega_continuous=True,
                               has_finite_joins=True, has_glb=True)
        self.promotable = coeff_domain == "nat-inf"
        self.divide_decidable = coeff_domain == "nat"

    @property
    def _clamp(self) -> bool:
        return self.coeff_domain == "bool"

    def value_size(self, v):
        coeff_bits = max((c.bit_length() for _, c in v.terms
                          if c is not INF), default=0)
        return len(v.terms) + v.degree() + coeff_bits

    def variable(self, name: str) -> Poly:
        return poly_var(name, self.degree_cap)

    def add(self, a, b):
        return poly_add(a, b, clamp=self._clamp)

    def mul(self, a, b):
        return poly_mul(a, b, clamp=self._clamp)

    def leq(self, a, b):
        return poly_leq(a, b)

    def join2(self, a, b):
        return poly_join(a, b)

    def glb2(self, a, b):
        return poly_glb(a, b)

    def divide(self, a, b):
        if self.coeff_domain != "nat":
            return None
        return _poly_exact_divide(self, a, b)

    def omega_multiple(self, v):
        if self.coeff_domain == "bool":
            return v
        if self.coeff_domain == "nat-inf":
            return v.map_coefficients(lambda c: INF if c != 0 else 0)
        raise InfiniteCoefficientInNonContinuousTarget(self.id)

    def increased_keys(self, old, new):
        before = dict(old.terms)
        out = []
        for m, c in new.terms:
            prev = before.get(m, 0)
            if prev != c and ext_leq(prev, c):
                out.append(m)
        return out

    def promote(self, value, keys):
        keys = set(keys)
        return Poly({m: (INF if m in keys else c) for m, c in value.terms},
                    value.degree_cap)

    def key_degree(self, key):
        return mono_degree(key)

    def parse(self, text):
        return parse_poly(text, self.degree_cap,
                          allow_inf=self.coeff_domain == "nat-inf",
                          clamp=self._clamp)

    def fmt(self, v):
        return str(v)

    def sample(self, rng):
        names = ("u", "v", "w")
        terms = {}
        for _ in range(rng.randint(0, 3)):
            mono = tuple(sorted(
                (name, rng.randint(1, 2))
                for name in rng.sample(names, rng.randint(0, 2))))
            coeff = 1 if self._clamp else rng.randint(1, 3)
            if self.coeff_domain == "nat-inf" and rng.random() < 0.1:
                coeff = INF
            terms[mono] = coeff
        return Poly(terms, self.degree_cap)


def _poly_exact_divide(handle: PolySemiring, a: Poly, b: Poly) -> Optional[Poly]:
    """Exact division over natural coefficients, verified by re-multiplying."""
    from .values import mono_div, mono_divides, mono_key, mono_mul

    if b.is_zero():
        return handle.zero if a.is_zero() else None
    # Long division over integer coefficients, leading terms in graded lex.
    remainder = {m: c for m, c in a.terms}
    quotient: dict = {}
    lead_b, coeff_b = b.terms[-1]
    for _ in range(len(a.terms) * 4 + 8):
        remainder = {m: c for m, c in remainder.items() if c != 0}
        if not remainder:
            break
        lead_a = max(remainder, key=mono_key)
        coeff_a = remainder[lead_a]
        if not mono_divides(lead_b, lead_a) or coeff_a % coeff_b != 0:
            return None
        qm = mono_div(lead_a, lead_b)
        qc = coeff_a // coeff_b
        quotient[qm] = quotient.get(qm, 0) + qc
        for m, c in b.terms:
            key = mono_mul(m, qm)
            remainder[key] = remainder.get(key, 0) - c * qc
    else:
        return None
    result = Poly(quotient, a.degree_cap)
    if any(c < 0 for _, c in result.terms):
        return None
    return result if handle.mul(b, result) == a else None


def parse_poly(text: str, degree_cap=None, allow_inf=False, clamp=False) -> Poly:
    """Parse `2*x*y^2 + y + inf*z` style literals."""
    text = text.strip()
    if text == "0":
        return Poly((), degree_cap)
    terms = {}
    for raw in text.split("+"):
        coeff = 1
        mono: dict[str, int] = {}
        for factor in raw.strip().split("*"):
            factor = factor.strip()
            if not factor:
                raise ValueError(f"bad polynomial literal {text!r}")
            if factor.isdigit():
                coeff = coeff * int(factor) if coeff is not INF else INF
            elif factor in ("inf", "infinity", "oo"):
                if not allow_inf:
                    raise ValueError("infinite coefficients not allowed here")
                coeff = INF
            else:
                name, _, exp = factor.partition("^")
                mono[name] = mono.get(name, 0) + (int(exp) if exp else 1)
        m = tuple(sorted(mono.items()))
        prev = terms.get(m, 0)
        if coeff is INF or prev is INF:
            terms[m] = INF
        else:
            terms[m] = prev + coeff
    if clamp:
        terms = {m: 1 for m, c in terms.items() if c != 0}
    return Poly(terms, degree_cap)


# ---------------------------------------------------------------------------
# Finite table semirings
# ---------------------------------------------------------------------------

class TableSemiring(Semiring):
    """A semiring given by explicit finite addition/multiplication tables."""

    def __init__(self, name: str, carrier: tuple, zero, one, add_table, mul_table):
        self.id = name
        self.carrier = tuple(carrier)
        self.zero = zero
        self.one = one
        self._add = add_table
        self._mul = mul_table
        self._leq = {}
        for a in self.carrier:
            for b in self.carrier:
                self._leq[(a, b)] = any(self._add[(a, c)] == b for c in self.carrier)
        self.flags = self._compute_flags()

    def _compute_flags(self) -> Flags:
        elems = self.carrier
        plus_idem = all(self._add[(a, a)] == a for a in elems)
        times_idem = all(self._mul[(a, a)] == a for a in elems)
        absorptive = all(self._add[(self._mul[(a, b)], a)] == a
                         for a in elems for b in elems)
        positive = all(
            (self._mul[(a, b)] == self.zero) == (a == self.zero or b == self.zero)
            for a in elems for b in elems
        ) and all(
            (self._add[(a, b)] == self.zero) == (a == self.zero and b == self.zero)
            for a in elems for b in elems
        )
        antisym = all(not (self._leq[(a, b)] and self._leq[(b, a)]) or a == b
                      for a in elems for b in elems)
        has_glb = antisym and all(self.glb2(a, b) is not None
                                  for a in elems for b in elems)
        has_joins = antisym and all(self.join2(a, b) is not None
                                    for a in elems for b in elems)
        # A finite carrier whose natural order is a partial order has all
        # chain suprema (chains stabilize), so it counts as omega-continuous.
        return Flags(plus_idempotent=plus_idem, times_idempotent=times_idem,
                     absorptive=absorptive, positive=positive,
                     omega_continuous=antisym,
                     has_finite_joins=has_joins, has_glb=has_glb)

    def add(self, a, b):
        return self._add[(a, b)]

    def mul(self, a, b):
        return self._mul[(a, b)]

    def leq(self, a, b):
        return self._leq[(a, b)]

    def join2(self, a, b):
        uppers = [c for c in self.carrier if self._leq[(a, c)] and self._leq[(b, c)]]
        least = [u for u in uppers if all(self._leq[(u, v)] for v in uppers)]
        return least[0] if least else None

    def glb2(self, a, b):
        lowers = [c for c in self.carrier if self._leq[(c, a)] and self._leq[(c, b)]]
        greatest = [l for l in lowers if all(self._leq[(v, l)] for v in lowers)]
        return greatest[0] if greatest else None

    def parse(self, text):
        text = text.strip()
        if text not in self.carrier:
            raise ValueError(f"{text!r} is not in the carrier of {self.id}")
        return text

    def sample(self, rng):
        return rng.choice(self.carrier)


def load_table_semiring(doc, name: str = "table") -> TableSemiring:
    """Build and validate a semiring from a table document.

    Document shape: ``{"carrier": [...], "zero": "0", "one": "1",
    "add": {"a,b": "c", ...}, "mul": {...}, "default": {"add": "x", "mul": "y"}}``.
    Identity and annihilation cells (zero+x, one*x, zero*x) are filled in
    automatically; remaining unlisted cells fall back to the defaults.
    """
    if isinstance(doc, str):
        doc = json.loads(doc)
    try:
        carrier = tuple(doc["carrier"])
        zero = doc["zero"]
        one = doc["one"]
    except (KeyError, TypeError) as exc:
        raise MalformedSpec(f"table document missing {exc}") from exc
    if len(set(carrier)) != len(carrier):
        raise MalformedSpec("carrier has duplicates")
    if zero not in carrier or one not in carrier:
        raise MalformedSpec("zero/one must be carrier members")
    defaults = doc.get("default", {})

    def build(op_name: str, identity, annihilator=None):
        table = {}
        for a in carrier:
            table[(identity, a)] = a
            table[(a, identity)] = a
            if annihilator is not None:
                table[(annihilator, a)] = annihilator
                table[(a, annihilator)] = annihilator
        for key, value in doc.get(op_name, {}).items():
            a, _, b = key.partition(",")
            a, b = a.strip(), b.strip()
            if a not in carrier or b not in carrier or value not in carrier:
                raise MalformedSpec(f"{op_name}[{key}] = {value} leaves the carrier")
            table[(a, b)] = value
            table.setdefault((b, a), value)
        fallback = defaults.get(op_name)
        for a in carrier:
            for b in carrier:
                if (a, b) not in table:
                    if fallback is None:
                        raise MalformedSpec(f"{op_name} cell ({a},{b}) undefined")
                    table[(a, b)] = fallback
        return table

    add_table = build("add", identity=zero)
    mul_table = build("mul", identity=one, annihilator=zero)
    handle = TableSemiring(name, carrier, zero, one, add_table, mul_table)
    report = validate_semiring(handle)
    if not report.ok:
        law, witness = report.violations[0]
        raise AxiomViolation(law, witness)
    return handle


# ---------------------------------------------------------------------------
# Law validation
# ---------------------------------------------------------------------------

@dataclass
class ValidationReport:
    semiring_id: str
    exhaustive: bool
    violations: list  # (law, witness) pairs
    observed_flags: dict  # flag -> (value, counterexample or None)

    @property
    def ok(self) -> bool:
        return not self.violations


_LAWS: list[tuple[str, int, Callable]] = [
    ("add_associative", 3, lambda s, a, b, c: s.eq(s.add(a, s.add(b, c)), s.add(s.add(a, b), c))),
    ("add_commutative", 2, lambda s, a, b: s.eq(s.add(a, b), s.add(b, a))),
    ("add_identity", 1, lambda s, a: s.eq(s.add(a, s.zero), a)),
    ("mul_associative", 3, lambda s, a, b, c: s.eq(s.mul(a, s.mul(b, c)), s.mul(s.mul(a, b), c))),
    ("mul_commutative", 2, lambda s, a, b: s.eq(s.mul(a, b), s.mul(b, a))),
    ("mul_identity", 1, lambda s, a: s.eq(s.mul(a, s.one), a)),
    ("distributive", 3, lambda s, a, b, c: s.eq(s.mul(a, s.add(b, c)), s.add(s.mul(a, b), s.mul(a, c)))),
    ("zero_annihilates", 1, lambda s, a: s.eq(s.mul(a, s.zero), s.zero)),
]

_FLAG_CHECKS: list[tuple[str, int, Callable]] = [
    ("plus_idempotent", 1, lambda s, a: s.eq(s.add(a, a), a)),
    ("times_idempotent", 1, lambda s, a: s.eq(s.mul(a, a), a)),
    ("absorptive", 2, lambda s, a, b: s.eq(s.add(s.mul(a, b), a), a)),
    ("positive", 2, lambda s, a, b: (
        s.eq(s.mul(a, b), s.zero) == (s.eq(a, s.zero) or s.eq(b, s.zero))
        and s.eq(s.add(a, b), s.zero) == (s.eq(a, s.zero) and s.eq(b, s.zero)))),
]


def validate_semiring(handle: Semiring, sample_budget: int = 300,
                      seed: int = 0) -> ValidationReport:
    """Check the semiring laws and flag claims.

    Finite carriers are checked exhaustively; infinite ones by seeded
    random sampling up to `sample_budget` tuples per law.
    """
    exhaustive = handle.carrier is not None
    if exhaustive:
        pools = {n: list(itertools.product(handle.carrier, repeat=n)) for n in (1, 2, 3)}
    else:
        rng = random.Random(seed)
        pools = {
            n: [tuple(handle.sample(rng) for _ in range(n)) for _ in range(sample_budget)]
            for n in (1, 2, 3)
        }

    violations = []
    for law, nargs, check in _LAWS:
        for args in pools[nargs]:
            if not check(handle, *args):
                violations.append((law, args))
                break

    observed = {}
    for flag, nargs, check in _FLAG_CHECKS:
        witness = None
        for args in pools[nargs]:
            if not check(handle, *args):
                witness = args
                break
        observed[flag] = (witness is None, witness)
        claimed = getattr(handle.flags, flag)
        if claimed and witness is not None:
            violations.append((f"flag:{flag}", witness))

    if exhaustive:
        for a in handle.carrier:
            for b in handle.carrier:
                if handle.leq(a, b) and handle.leq(b, a) and not handle.eq(a, b):
                    observed["natural_order_partial"] = (False, (a, b))
                    break
        observed.setdefault("natural_order_partial", (True, None))

    return ValidationReport(handle.id, exhaustive, violations, observed)


# ---------------------------------------------------------------------------
# Natural order and homomorphic evaluation
# ---------------------------------------------------------------------------

def natural_order_leq(handle: Semiring, a, b) -> Optional[bool]:
    """Three-valued natural order: True, False, or None for undecided."""
    return handle.leq(a, b)


def _repeat_add(handle: Semiring, v, n: int):
    """n-fold sum by doubling."""
    if n == 0:
        return handle.zero
    acc = None
    power = v
    while n:
        if n & 1:
            acc = power if acc is None else handle.add(acc, power)
        n >>= 1
        if n:
            power = handle.add(power, power)
    return acc


def _repeat_mul(handle: Semiring, v, n: int):
    if n == 0:
        return handle.one
    acc = None
    power = v
    while n:
        if n & 1:
            acc = power if acc is None else handle.mul(acc, power)
        n >>= 1
        if n:
            power = handle.mul(power, power)
    return acc


def eval_valuation(source_poly: Poly, target: Semiring, nu: dict) -> object:
    """Homomorphic image of a polynomial under a variable valuation.

    Infinite coefficients become the target's saturated repeated sum and
    are only allowed into omega-continuous targets.
    """
    total = target.zero
    for m, coeff in source_poly.terms:
        mv = target.one
        for name, exp in m:
            if name not in nu:
                raise UnboundVariable(name)
            mv = target.mul(mv, _repeat_mul(target, nu[name], exp))
        if coeff is INF:
            if not target.flags.omega_continuous:
                raise InfiniteCoefficientInNonContinuousTarget(target.id)
            term = target.omega_multiple(mv)
        else:
            term = _repeat_add(target, mv, coeff)
        total = target.add(total, term)
    return total


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

BOOL = BoolSemiring()
NAT = NatSemiring()
NAT_INF = NatInfSemiring()
NAT_INF_PRIME = NatInfPrimeSemiring()
TROPICAL = TropicalSemiring()
POSBOOL = PosBoolSemiring()
POLY_NAT = PolySemiring("nat")
POLY_BOOL = PolySemiring("bool")

DEFAULT_SERIES_DEGREE_CAP = 8


def series_trunc(degree_cap: int = DEFAULT_SERIES_DEGREE_CAP) -> PolySemiring:
    return PolySemiring("nat-inf", degree_cap)


def get_semiring(identifier: str) -> Semiring:
    """Resolve a semiring id like `nat`, `series-trunc:6` or `table:<path>`."""
    base = {
        "bool": BOOL,
        "nat": NAT,
        "nat-inf": NAT_INF,
        "tropical": TROPICAL,
        "posbool-free": POSBOOL,
        "poly-nat": POLY_NAT,
        "poly-bool": POLY_BOOL,
    }
    if identifier in base:
        return base[identifier]
    if identifier.startswith("series-trunc"):
        _, _, cap = identifier.partition(":")
        return series_trunc(int(cap) if cap else DEFAULT_SERIES_DEGREE_CAP)
    if identifier.startswith("table:"):
        path = identifier[len("table:"):]
        with open(path, encoding="utf-8") as fh:
            return load_table_semiring(fh.read(), name=f"table:{path}")
    raise ValueError(f"unknown semiring id {identifier!r}")

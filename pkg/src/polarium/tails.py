"""Laurent tails over tame extensions and truncated Laurent windows.

A Tail is a finite family of covector coefficients c_q indexed by rational
exponents q >= 0 with denominator dividing the conductor m; the term q
stands for c_q * t^(-q) * dt/t. Covectors live on the character side of the
ambient root datum (fundamental-weight coordinates), so pairing with a
coroot is an integer dot product on the coefficients.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .cyclo import CycloNumber, cyclo_from_json, cyclo_to_json, root_of_unity
from .errors import InvalidArgumentError, PrecisionError
from .linalg import dot_int
from .rootdata import RootDatum, WeylElement

Covector = tuple[CycloNumber, ...]


def covector(values, dim: int | None = None) -> Covector:
    """Coerce rationals/CycloNumbers into a covector tuple."""
    out = tuple(
        v if isinstance(v, CycloNumber) else CycloNumber.from_rational(Fraction(v))
        for v in values
    )
    if dim is not None and len(out) != dim:
        raise InvalidArgumentError(f"covector has length {len(out)}, expected {dim}")
    return out


class Tail:
    """An element of t*/t*_tn: finitely many covector terms at exponents q >= 0."""

    __slots__ = ("rd", "m", "terms")

    def __init__(self, rd: RootDatum, m: int, terms: dict):
        if m < 1:
            raise InvalidArgumentError(f"conductor must be >= 1, got {m}")
        self.rd = rd
        self.m = m
        clean: dict[Fraction, Covector] = {}
        for q, c in terms.items():
            q = Fraction(q)
            if q < 0:
                raise InvalidArgumentError(f"exponent {q} negative; tails live at q >= 0")
            if (q * m).denominator != 1:
                raise InvalidArgumentError(f"exponent {q} has denominator not dividing m={m}")
            c = covector(c, rd.dim)
            if not all(x.is_zero() for x in c):
                clean[q] = c
        self.terms = clean

    @staticmethod
    def zero(rd: RootDatum, m: int = 1) -> "Tail":
        return Tail(rd, m, {})

    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> list[Fraction]:
        return sorted(self.terms)

    def depth(self) -> Fraction | None:
        return max(self.terms) if self.terms else None

    def lift_conductor(self, m2: int) -> "Tail":
        if m2 % self.m != 0:
            raise InvalidArgumentError(f"{self.m} does not divide {m2}")
        return Tail(self.rd, m2, dict(self.terms))

    def add(self, other: "Tail") -> "Tail":
        if other.rd is not self.rd and other.rd.roots != self.rd.roots:
            raise InvalidArgumentError("tails over different root data")
        m = lcm(self.m, other.m)
        terms: dict[Fraction, list] = {q: list(c) for q, c in self.terms.items()}
        for q, c in other.terms.items():
            if q in terms:
                terms[q] = [a + b for a, b in zip(terms[q], c)]
            else:
                terms[q] = list(c)
        return Tail(self.rd, m, terms)

    def scale(self, factor) -> "Tail":
        return Tail(self.rd, self.m, {q: [factor * x for x in c] for q, c in self.terms.items()})

    def weyl_act(self, w: WeylElement) -> "Tail":
        mat = w.covector_matrix()
        out = {}
        for q, c in self.terms.items():
            out[q] = tuple(dot_int(row, c) for row in mat)
        return Tail(self.rd, self.m, out)

    def restrict(self, lo, hi, include_lo: bool, include_hi: bool) -> "Tail":
        """Terms with exponent inside the band; bounds may be None for +-inf."""
        kept = {}
        for q, c in self.terms.items():
            if lo is not None and (q < lo or (q == lo and not include_lo)):
                continue
            if hi is not None and (q > hi or (q == hi and not include_hi)):
                continue
            kept[q] = c
        return Tail(self.rd, self.m, kept)

    def expected_twist(self) -> "Tail":
        """Each term q scaled by zeta_m^(q*m): the equivariance reference."""
        out = {}
        for q, c in self.terms.items():
            z = root_of_unity(self.m, int(q * self.m) % self.m, self.m) if self.m > 1 \
                else CycloNumber.one()
            out[q] = tuple(z * x for x in c)
        return Tail(self.rd, self.m, out)

    def __eq__(self, other):
        if not isinstance(other, Tail):
            return NotImplemented
        if set(self.terms) != set(other.terms):
            return False
        return all(
            all(a == b for a, b in zip(self.terms[q], other.terms[q])) for q in self.terms
        )

    __hash__ = None

    def __repr__(self):
        if not self.terms:
            return "Tail(0)"
        bits = [f"t^-{q}*{tuple(map(repr, c))}" for q, c in sorted(self.terms.items())]
        return f"Tail(m={self.m}; " + " + ".join(bits) + ")"


class ScalarTail:
    """A finite scalar tail in omega(E)/omega(O_E), same normalization."""

    __slots__ = ("m", "terms")

    def __init__(self, m: int, terms: dict):
        self.m = m
        clean = {}
        for q, c in terms.items():
            q = Fraction(q)
            if not (isinstance(c, CycloNumber) and c.is_zero()):
                clean[q] = c if isinstance(c, CycloNumber) else CycloNumber.from_rational(c)
        self.terms = clean

    def is_zero(self) -> bool:
        return not self.terms

    def depth(self) -> Fraction | None:
        return max(self.terms) if self.terms else None

    def __eq__(self, other):
        if not isinstance(other, ScalarTail):
            return NotImplemented
        return set(self.terms) == set(other.terms) and all(
            self.terms[q] == other.terms[q] for q in self.terms
        )

    __hash__ = None

    def __repr__(self):
        if not self.terms:
            return "ScalarTail(0)"
        return "ScalarTail(" + " + ".join(f"{c!r}*t^-{q}" for q, c in sorted(self.terms.items())) + ")"


def pair_coroot(tail: Tail, coroot) -> ScalarTail:
    """The scalar tail <d(coroot), tail>, zero terms dropped."""
    return ScalarTail(tail.m, {q: dot_int(coroot, c) for q, c in tail.terms.items()})


def depth(s: ScalarTail) -> Fraction | None:
    return s.depth()


def tail_arith(a: Tail, b, op: str):
    """Dispatch used by the CLI: op in {add, scale, weyl_act}."""
    if op == "add":
        return a.add(b)
    if op == "scale":
        return a.scale(b)
    if op == "weyl_act":
        return a.weyl_act(b)
    raise InvalidArgumentError(f"unknown tail operation {op!r}")


def is_equivariant(tail: Tail, w: WeylElement, m: int) -> bool:
    """Fixed-point condition for the torus presented by (w, m)."""
    lifted = tail if tail.m == m else tail.lift_conductor(lcm(tail.m, m))
    return lifted.weyl_act(w) == lifted.expected_twist()


# -- truncated Laurent series -------------------------------------------


class LaurentWindow:
    """Coefficients on [lo, hi) with explicit precision; exponents in (1/den)Z."""

    __slots__ = ("den", "lo", "hi", "terms")

    def __init__(self, lo, hi, terms: dict | None = None, den: int = 1):
        lo, hi = Fraction(lo), Fraction(hi)
        if hi <= lo:
            raise InvalidArgumentError(f"empty window [{lo}, {hi})")
        for bound in (lo, hi):
            if (bound * den).denominator != 1:
                raise InvalidArgumentError(f"bound {bound} not a multiple of 1/{den}")
        self.den = den
        self.lo = lo
        self.hi = hi
        clean = {}
        for q, c in (terms or {}).items():
            q = Fraction(q)
            if not (lo <= q < hi):
                raise InvalidArgumentError(f"exponent {q} outside window [{lo}, {hi})")
            if (q * den).denominator != 1:
                raise InvalidArgumentError(f"exponent {q} not a multiple of 1/{den}")
            c = c if isinstance(c, CycloNumber) else CycloNumber.from_rational(Fraction(c))
            if not c.is_zero():
                clean[q] = c
        self.terms = clean

    def coeff(self, q) -> CycloNumber:
        return self.terms.get(Fraction(q), CycloNumber.zero())

    def valuation(self) -> Fraction | None:
        """Least exponent with a nonzero coefficient, None when zero on the window."""
        return min(self.terms) if self.terms else None

    def effective_valuation(self) -> Fraction:
        v = self.valuation()
        return v if v is not None else self.hi

    def is_zero_on_window(self) -> bool:
        return not self.terms

    def neg(self) -> "LaurentWindow":
        return LaurentWindow(self.lo, self.hi, {q: -c for q, c in self.terms.items()}, self.den)

    def add(self, other: "LaurentWindow") -> "LaurentWindow":
        den = lcm(self.den, other.den)
        lo = min(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if hi <= lo:
            raise PrecisionError("windows do not overlap")
        terms: dict[Fraction, CycloNumber] = {}
        for src in (self, other):
            for q, c in src.terms.items():
                if lo <= q < hi:
                    terms[q] = terms.get(q, CycloNumber.zero()) + c
        return LaurentWindow(lo, hi, terms, den)

    def sub(self, other: "LaurentWindow") -> "LaurentWindow":
        return self.add(other.neg())

    def mul(self, other: "LaurentWindow") -> "LaurentWindow":
        den = lcm(self.den, other.den)
        va, vb = self.effective_valuation(), other.effective_valuation()
        lo = self.lo + other.lo
        hi = min(self.hi + vb, other.hi + va)
        if hi <= lo:
            raise PrecisionError("product window collapsed")
        terms: dict[Fraction, CycloNumber] = {}
        for qa, ca in self.terms.items():
            for qb, cb in other.terms.items():
                q = qa + qb
                if lo <= q < hi:
                    terms[q] = terms.get(q, CycloNumber.zero()) + ca * cb
        return LaurentWindow(lo, hi, terms, den)

    def scale(self, factor) -> "LaurentWindow":
        return LaurentWindow(self.lo, self.hi,
                             {q: factor * c for q, c in self.terms.items()}, self.den)

    def shift(self, k) -> "LaurentWindow":
        """Multiply by t^k."""
        k = Fraction(k)
        den = lcm(self.den, k.denominator)
        return LaurentWindow(self.lo + k, self.hi + k,
                             {q + k: c for q, c in self.terms.items()}, den)

    def scale_exponents(self, r) -> "LaurentWindow":
        """Substitute t -> t^(1/r) viewed on exponents: q maps to q*r."""
        r = Fraction(r)
        if r <= 0:
            raise InvalidArgumentError("exponent scale must be positive")
        den = lcm(self.den * r.denominator, r.denominator)
        return LaurentWindow(self.lo * r, self.hi * r,
                             {q * r: c for q, c in self.terms.items()},
                             int(den))

    def truncate(self, lo=None, hi=None) -> "LaurentWindow":
        lo = self.lo if lo is None else max(self.lo, Fraction(lo))
        hi = self.hi if hi is None else min(self.hi, Fraction(hi))
        return LaurentWindow(lo, hi,
                             {q: c for q, c in self.terms.items() if lo <= q < hi}, self.den)

    def __eq__(self, other):
        if not isinstance(other, LaurentWindow):
            return NotImplemented
        return (self.lo, self.hi) == (other.lo, other.hi) and set(self.terms) == set(other.terms) \
            and all(self.terms[q] == other.terms[q] for q in self.terms)

    __hash__ = None

    def __repr__(self):
        body = " + ".join(f"{c!r}*t^{q}" for q, c in sorted(self.terms.items())) or "0"
        return f"LaurentWindow[{self.lo},{self.hi})({body})"


# -- JSON ---------------------------------------------------------------

def tail_to_json(tail: Tail) -> dict:
    return {
        "m": tail.m,
        "terms": [
            {"q": str(q), "coeff": [cyclo_to_json(x) for x in c]}
            for q, c in sorted(tail.terms.items())
        ],
    }


def tail_from_json(rd: RootDatum, doc: dict) -> Tail:
    terms = {}
    for entry in doc.get("terms", []):
        coeff = [
            cyclo_from_json(x) if isinstance(x, dict) else CycloNumber.from_rational(Fraction(x))
            for x in entry["coeff"]
        ]
        terms[Fraction(entry["q"])] = coeff
    return Tail(rd, int(doc.get("m", 1)), terms)


def scalar_tail_to_json(s: ScalarTail) -> dict:
    return {"m": s.m,
            "terms": [{"q": str(q), "coeff": cyclo_to_json(c)} for q, c in sorted(s.terms.items())]}


def window_to_json(w: LaurentWindow) -> dict:
    return {
        "lo": str(w.lo), "hi": str(w.hi), "den": w.den,
        "terms": [{"q": str(q), "coeff": cyclo_to_json(c)} for q, c in sorted(w.terms.items())],
    }


def window_from_json(doc: dict) -> LaurentWindow:
    terms = {}
    for entry in doc.get("terms", []):
        c = entry["coeff"]
        terms[Fraction(entry["q"])] = cyclo_from_json(c) if isinstance(c, dict) \
            else CycloNumber.from_rational(Fraction(c))
    return LaurentWindow(Fraction(doc["lo"]), Fraction(doc["hi"]), terms, int(doc.get("den", 1)))

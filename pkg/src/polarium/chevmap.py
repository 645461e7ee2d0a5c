"""Type-A characteristic map at series level and the bit-exact SL2 verifier.

The SL2 stratum index n counts pole order against the torus lattice (the
quadratic-differential side), while tails count dt/t exponents; the two
gradings differ by 1 on the split torus and by 1/2 on the ramified one, and
the cross-check converts explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cyclo import CycloNumber, sqrt_cyclo
from .errors import InvalidArgumentError, NoSqrtInBaseField, PrecisionError
from .polar import classify
from .rootdata import build
from .tails import LaurentWindow, Tail
from .tori import TorusClass, split_torus_class

_A1 = None


def _a1():
    global _A1
    if _A1 is None:
        _A1 = build("A1")
    return _A1


def charpoly_map(diag: list[LaurentWindow], hi=None) -> list[LaurentWindow]:
    """Elementary symmetric functions e_2..e_n of trace-free diagonal entries."""
    if len(diag) < 2:
        raise InvalidArgumentError("need at least two diagonal entries")
    total = diag[0]
    for entry in diag[1:]:
        total = total.add(entry)
    if not total.is_zero_on_window():
        raise InvalidArgumentError("diagonal entries do not sum to zero")
    # e_k via the product expansion, tracked with full precision bookkeeping.
    lo = min(d.lo for d in diag)
    window_hi = min(d.hi for d in diag)
    one = LaurentWindow(0, window_hi - min(lo, Fraction(0)) + 1, {Fraction(0): 1},
                        den=diag[0].den)
    elems: list[LaurentWindow] = [one]
    for entry in diag:
        nxt = [elems[0]]
        for k in range(1, len(elems) + 1):
            term = elems[k - 1].mul(entry)
            if k < len(elems):
                term = elems[k].add(term)
            nxt.append(term)
        elems = nxt
    out = elems[2:]
    if hi is not None:
        out = [e.truncate(hi=hi) for e in out]
    return out


def sqrt_series(a: LaurentWindow) -> LaurentWindow:
    """Canonical square root on the guaranteed window.

    The leading exponent must be even in the window lattice and the leading
    coefficient a supported square (see sqrt_cyclo); the root's first nonzero
    coefficient is positive, which pins the branch.
    """
    v = a.valuation()
    if v is None:
        raise PrecisionError("series is zero on its window; valuation unknown")
    if (v * a.den) % 2 != 0:
        raise NoSqrtInBaseField(f"odd leading valuation {v}")
    lead = a.coeff(v)
    s0 = sqrt_cyclo(lead)
    step = Fraction(1, a.den)
    rel_hi = a.hi - v
    inv_lead = lead.inverse()
    u = {}
    q = step
    while q < rel_hi:
        c = a.coeff(v + q)
        if not c.is_zero():
            u[q] = c * inv_lead
        q += step
    # Coefficientwise recursion for sqrt(1 + u).
    s_rel: dict[Fraction, CycloNumber] = {Fraction(0): CycloNumber.one()}
    half = Fraction(1, 2)
    q = step
    while q < rel_hi:
        acc = u.get(q, CycloNumber.zero())
        p = step
        while p < q:
            left, right = s_rel.get(p), s_rel.get(q - p)
            if left is not None and right is not None:
                acc = acc - left * right
            p += step
        val = half * acc
        if not val.is_zero():
            s_rel[q] = val
        q += step
    terms = {v / 2 + q: s0 * c for q, c in s_rel.items()}
    return LaurentWindow(v / 2, v / 2 + rel_hi, terms, a.den)


@dataclass(frozen=True)
class Sl2Stratum:
    kind: str  # split-toral | nonsplit-toral | G-zero
    n: int | None = None

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        if self.n is not None:
            out["n"] = self.n
        return out


def sl2_stratum(a: LaurentWindow) -> Sl2Stratum:
    """Closed-form stratum of a quadratic differential a(dt)^2 by valuation."""
    v = a.valuation()
    if v is None:
        if a.hi > -1:
            return Sl2Stratum("G-zero")
        raise PrecisionError("window ends before exponent -1; stratum unknown")
    if v.denominator != 1:
        raise InvalidArgumentError("stratum defined for integral-exponent input")
    v = int(v)
    if v >= -1:
        return Sl2Stratum("G-zero")
    if v % 2 == 0:
        return Sl2Stratum("split-toral", -v // 2)
    return Sl2Stratum("nonsplit-toral", (-v - 1) // 2)


def _tail_from_series(b: LaurentWindow, m: int) -> Tail:
    """The tail of diag(b, -b) dt in dt/t exponents, truncated at q >= 0."""
    rd = _a1()
    terms = {}
    for p, c in b.terms.items():
        q = -(p + 1)
        if q >= 0:
            terms[q] = (2 * c,)
    return Tail(rd, m, terms)


def _nonsplit_class() -> TorusClass:
    rd = _a1()
    s_alpha = rd.weyl_elements()[1]
    return TorusClass(rd, s_alpha, 2)


def sl2_crosscheck(a: LaurentWindow) -> bool:
    """Lift through the characteristic map and compare with the closed form.

    The lift solves -b^2 = a (split torus when the valuation is even, the
    ramified torus after t = tau^2 when odd), classifies the resulting tail,
    and matches stratum kind and index against sl2_stratum.
    """
    table = sl2_stratum(a)
    neg_a = a.neg()
    v = neg_a.valuation()
    rd = _a1()
    if v is None:
        lifted_kind, lifted_n = "G-zero", None
    elif int(v) % 2 == 0:
        b = sqrt_series(neg_a)
        lam = _tail_from_series(b, 1)
        datum = classify(split_torus_class(rd), lam)
        if datum.lam.is_zero():
            lifted_kind, lifted_n = "G-zero", None
        else:
            lifted_kind = "split-toral"
            lifted_n = int(datum.lam.depth() + 1)
    else:
        b_tau = sqrt_series(neg_a.scale_exponents(2))
        b = b_tau.scale_exponents(Fraction(1, 2))
        lam = _tail_from_series(b, 2)
        datum = classify(_nonsplit_class(), lam)
        if datum.lam.is_zero():
            lifted_kind, lifted_n = "G-zero", None
        else:
            lifted_kind = "nonsplit-toral"
            lifted_n = int(datum.lam.depth() + Fraction(1, 2))
    return (table.kind, table.n) == (lifted_kind, lifted_n)


# -- the default verification grid ---------------------------------------

GRID_VALUATIONS = range(-8, 3)
GRID_LEADS = (
    Fraction(1), Fraction(-1), Fraction(2), Fraction(-2),
    Fraction(1, 2), Fraction(-1, 2), Fraction(4), Fraction(-4),
)
GRID_PATTERNS = ((), (1,), (2, -1))  # extra coefficients at offsets 1, 2, ...


def default_grid(width: int = 6) -> list[LaurentWindow]:
    """Deterministic windows covering every stratum boundary case."""
    grid = []
    for v in GRID_VALUATIONS:
        for lead in GRID_LEADS:
            for pattern in GRID_PATTERNS:
                terms = {Fraction(v): lead}
                for off, c in enumerate(pattern, start=1):
                    terms[Fraction(v + off)] = Fraction(c)
                grid.append(LaurentWindow(v, v + width, terms))
    # All-zero windows on both sides of the decidability line.
    grid.append(LaurentWindow(-1, 4, {}))
    return grid


def verify_sl2(grid: list[LaurentWindow] | None = None) -> dict:
    """Run the SL2 partition table and the cross-check over a grid."""
    grid = default_grid() if grid is None else grid
    counts = {"split-toral": 0, "nonsplit-toral": 0, "G-zero": 0}
    violations = []
    for k, a in enumerate(grid):
        stratum = sl2_stratum(a)
        counts[stratum.kind] += 1
        v = a.valuation()
        expected = _expected_from_valuation(v, a.hi)
        if (stratum.kind, stratum.n) != expected:
            violations.append({"point": k, "kind": "stratum-table",
                               "got": stratum.to_json()})
        if not sl2_crosscheck(a):
            violations.append({"point": k, "kind": "crosscheck"})
    return {"points": len(grid), "stratum_counts": counts, "violations": violations}


def _expected_from_valuation(v, hi) -> tuple:
    if v is None:
        return ("G-zero", None) if hi > -1 else ("unknown", None)
    v = int(v)
    if v >= -1:
        return ("G-zero", None)
    if v % 2 == 0:
        return ("split-toral", -v // 2)
    return ("nonsplit-toral", (-v - 1) // 2)

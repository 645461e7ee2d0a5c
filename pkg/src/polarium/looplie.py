"""Matrix realization of split type-A loop algebras: Moy-Prasad gradings at
rational apartment points, symplectic break forms, the graded lattice with
its linear character, and the tangent-level moveability checks.

Dual-side objects are represented on the same graded monomial basis via the
residue-trace pairing with the dt/t twist: a dual element is a finite family
of matrices M_p t^p standing for (sum M_p t^p) dt/t, so pairing against a
monomial Y t^n reads off tr(M_(-n) Y).

Twisted tori enter through the cyclic-shift presentation X = N + t*E(n,1)
(the principal order-n class); its powers span the twisted Cartan and every
computation stays rational.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import lcm

from .cyclo import CycloNumber
from .errors import (InternalInvariantViolation, InvalidArgumentError,
                     UnsupportedFeatureError)
from .linalg import in_span, nullspace, rank
from .polar import PolarDatum
from .rootdata import RootDatum
from .tails import Tail
from .yuseq import YuLadder, extract

Matrix = tuple[tuple[CycloNumber, ...], ...]
Gen = tuple[str, int]  # ("r", root index) or ("h", torus index)
Monomial = tuple[Gen, int]

_ZERO = CycloNumber.zero()
_ONE = CycloNumber.one()


def _require_type_a(rd: RootDatum) -> int:
    if len(rd.factors) != 1 or rd.factors[0][0] != "A" or rd.torus_rank:
        raise UnsupportedFeatureError(
            f"matrix realization covers split type A only, got {rd.type_label()}"
        )
    return rd.factors[0][1] + 1


def _zero_matrix(n: int) -> list[list[CycloNumber]]:
    return [[_ZERO for _ in range(n)] for _ in range(n)]


def _freeze(m) -> Matrix:
    return tuple(tuple(row) for row in m)


def _mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    out = _zero_matrix(n)
    for i in range(n):
        for k in range(n):
            if not a[i][k].is_zero():
                for j in range(n):
                    if not b[k][j].is_zero():
                        out[i][j] = out[i][j] + a[i][k] * b[k][j]
    return _freeze(out)


def _mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return _freeze([[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)])


def _commutator(a: Matrix, b: Matrix) -> Matrix:
    return _mat_sub(_mat_mul(a, b), _mat_mul(b, a))


def _trace_product(a: Matrix, b: Matrix) -> CycloNumber:
    n = len(a)
    total = _ZERO
    for i in range(n):
        for j in range(n):
            if not a[i][j].is_zero() and not b[j][i].is_zero():
                total = total + a[i][j] * b[j][i]
    return total


class DualLoopElement:
    """Finite family p -> matrix standing for (sum M_p t^p) dt/t."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict):
        self.n = n
        self.terms = {Fraction(p): _freeze(m) for p, m in terms.items()
                      if any(not x.is_zero() for row in m for x in row)}

    def pair(self, mat: Matrix, exponent) -> CycloNumber:
        m = self.terms.get(Fraction(-exponent))
        return _trace_product(m, mat) if m is not None else _ZERO

    def restrict_exponents(self, keep) -> "DualLoopElement":
        """Keep dual exponents q = -p selected by the predicate."""
        return DualLoopElement(self.n, {p: m for p, m in self.terms.items() if keep(-p)})

    def is_zero(self) -> bool:
        return not self.terms


class Realization:
    """A polar datum realized inside sl_n((t)) at an apartment point."""

    def __init__(self, datum: PolarDatum, ladder: YuLadder, x=None):
        rd = datum.rd
        self.n = _require_type_a(rd)
        self.rd = rd
        self.datum = datum
        self.ladder = ladder
        self.twisted = not datum.torus.w.is_identity()
        self._x_powers = None
        if self.twisted:
            self._init_twisted(x)
        else:
            self._init_split(x)
        self._position_map()
        self.dual = self._realize_dual()

    # -- setup ---------------------------------------------------------

    def _init_split(self, x) -> None:
        rd = self.rd
        self.x = tuple(Fraction(v) for v in x) if x is not None \
            else tuple(Fraction(0) for _ in range(rd.dim))
        self.level_of_root = {idx: self.ladder.level_of_root(idx)
                              for idx in range(len(rd.roots))}

    def _init_twisted(self, x) -> None:
        datum, rd = self.datum, self.rd
        if datum.levi:
            raise UnsupportedFeatureError("twisted realization covers toral data only")
        m = datum.torus.m
        if m != self.n:
            raise UnsupportedFeatureError(
                "twisted realization covers the principal (Coxeter) class only"
            )
        if len(datum.lam.terms) != 1:
            raise UnsupportedFeatureError(
                "twisted realization covers single-term homogeneous tails only"
            )
        rho = rd.rho_coweight()
        expected = tuple(v / m for v in rho)
        if x is not None and tuple(Fraction(v) for v in x) != expected:
            raise InvalidArgumentError(
                "twisted realization requires the barycentric point rho_vee/m"
            )
        self.x = expected
        self.level_of_root = {idx: 1 for idx in range(len(rd.roots))}

    def _position_map(self) -> None:
        """Match abstract roots with off-diagonal matrix positions."""
        n, rd = self.n, self.rd
        coords = {}
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                vec = tuple(
                    (1 if k == i else 0) - (1 if k + 1 == i else 0)
                    - (1 if k == j else 0) + (1 if k + 1 == j else 0)
                    for k in range(n - 1)
                )
                coords[vec] = (i, j)
        self.position = {}
        for idx, root in enumerate(rd.roots):
            self.position[idx] = coords[root]

    def _realize_dual(self) -> DualLoopElement:
        if self.twisted:
            return self._realize_dual_twisted()
        return self._realize_dual_split()

    def _realize_dual_split(self) -> DualLoopElement:
        n = self.n
        terms: dict[Fraction, list] = {}
        for q, cov in self.datum.lam.terms.items():
            if q.denominator != 1:
                raise UnsupportedFeatureError("split realization needs integral exponents")
            d = [_ZERO] * n
            for i in range(n):
                acc = _ZERO
                for k in range(i, n - 1):
                    acc = acc + cov[k]
                d[i] = acc
            trace = d[0]
            for v in d[1:]:
                trace = trace + v
            shift = Fraction(1, n) * trace
            mat = _zero_matrix(n)
            for i in range(n):
                mat[i][i] = d[i] - shift
            terms[-q] = mat
        return DualLoopElement(n, terms)

    def _realize_dual_twisted(self) -> DualLoopElement:
        # X = shift matrix with t in the corner; X^(n-i) t^(-1-j) has pure
        # grading degree -q and is regular semisimple exactly when gcd(i,n)=1.
        n = self.n
        (q, _cov), = self.datum.lam.terms.items()
        i = int(q * n) % n
        j = int(q - Fraction(i, n))
        power = self.x_powers()[n - i - 1]
        terms = {Fraction(p - 1 - j): m for p, m in power.items()}
        return DualLoopElement(n, terms)

    def x_powers(self) -> list[dict[int, Matrix]]:
        """Matrix polynomials X^1 .. X^(n-1) spanning the twisted Cartan."""
        if getattr(self, "_x_powers", None) is not None:
            return self._x_powers
        n = self.n
        base = _zero_matrix(n)
        for a in range(n - 1):
            base[a][a + 1] = _ONE
        corner = _zero_matrix(n)
        corner[n - 1][0] = _ONE
        x_poly = {0: _freeze(base), 1: _freeze(corner)}
        out = [x_poly]
        for _ in range(n - 2):
            cur = out[-1]
            nxt: dict[int, Matrix] = {}
            for p1, m1 in cur.items():
                for p2, m2 in x_poly.items():
                    prod = _mat_mul(m1, m2)
                    if p1 + p2 in nxt:
                        nxt[p1 + p2] = _freeze([[a + b for a, b in zip(r1, r2)]
                                                for r1, r2 in zip(nxt[p1 + p2], prod)])
                    else:
                        nxt[p1 + p2] = prod
            out.append(nxt)
        self._x_powers = out
        return out

    # -- graded combinatorics -------------------------------------------

    def root_height(self, idx: int) -> Fraction:
        return Fraction(sum(a * b for a, b in zip(self.x, self.rd.roots[idx])))

    def degree(self, mono: Monomial) -> Fraction:
        (kind, idx), n = mono
        if kind == "r":
            return self.root_height(idx) + n
        return Fraction(n)

    def generators(self) -> list[Gen]:
        gens: list[Gen] = [("r", idx) for idx in range(len(self.rd.roots))]
        gens += [("h", k) for k in range(self.n - 1)]
        return gens

    def monomials_at_degree(self, deg: Fraction) -> list[Monomial]:
        out = []
        for gen in self.generators():
            if gen[0] == "r":
                shift = deg - self.root_height(gen[1])
            else:
                shift = Fraction(deg)
            if shift.denominator == 1:
                out.append((gen, int(shift)))
        return out

    def degree_step(self) -> Fraction:
        return Fraction(1, self.n) if self.twisted else _degree_step_split(self)

    def gen_matrix(self, gen: Gen) -> Matrix:
        n = self.n
        mat = _zero_matrix(n)
        if gen[0] == "r":
            i, j = self.position[gen[1]]
            mat[i][j] = _ONE
        else:
            k = gen[1]
            mat[k][k] = _ONE
            mat[k + 1][k + 1] = -_ONE
        return _freeze(mat)

    def matrix_to_coords(self, mat: Matrix) -> dict[Gen, CycloNumber]:
        """Expand a trace-zero matrix in the generator basis."""
        n = self.n
        out: dict[Gen, CycloNumber] = {}
        pos_to_root = {pos: idx for idx, pos in self.position.items()}
        for i in range(n):
            for j in range(n):
                if i != j and not mat[i][j].is_zero():
                    out[("r", pos_to_root[(i, j)])] = mat[i][j]
        acc = _ZERO
        for k in range(n - 1):
            acc = acc + mat[k][k]
            if not acc.is_zero():
                out[("h", k)] = acc
        return out

    def bracket_monomials(self, u: Monomial, v: Monomial) -> dict[Monomial, CycloNumber]:
        (gu, nu), (gv, nv) = u, v
        comm = _commutator(self.gen_matrix(gu), self.gen_matrix(gv))
        return {(gen, nu + nv): c for gen, c in self.matrix_to_coords(comm).items()}

    def pair_dual_monomial(self, mono: Monomial, dual: DualLoopElement | None = None) -> CycloNumber:
        dual = dual or self.dual
        gen, n = mono
        return dual.pair(self.gen_matrix(gen), n)

    def pair_dual_bracket(self, u: Monomial, v: Monomial,
                          dual: DualLoopElement | None = None) -> CycloNumber:
        dual = dual or self.dual
        total = _ZERO
        for mono, c in self.bracket_monomials(u, v).items():
            val = self.pair_dual_monomial(mono, dual)
            if not val.is_zero():
                total = total + c * val
        return total

    # -- M-part ----------------------------------------------------------

    def m_lines_at_degree(self, deg: Fraction) -> list[dict[Monomial, CycloNumber]]:
        """Graded lines of the levi Cartan/Levi part at the given degree."""
        if not self.twisted:
            out = []
            for mono in self.monomials_at_degree(deg):
                (kind, idx), _n = mono
                if kind == "h" or idx in self.datum.levi:
                    out.append({mono: _ONE})
            return out
        n = self.n
        k = int((deg * n) % n)
        if k == 0:
            return []
        j = int(deg - Fraction(k, n))
        line: dict[Monomial, CycloNumber] = {}
        for p, mat in self.x_powers()[k - 1].items():
            for gen, c in self.matrix_to_coords(mat).items():
                line[(gen, p + j)] = c
        return [line]

    def m_line_in_lattice(self, deg: Fraction) -> bool:
        """Whether the twisted Cartan line at this degree lies in (LM)_{>=0}."""
        n = self.n
        k = int((deg * n) % n)
        if k == 0:
            return False
        return deg - Fraction(k, n) >= 0


def _degree_step_split(real: Realization) -> Fraction:
    den = 1
    for idx in range(len(real.rd.roots)):
        den = lcm(den, real.root_height(idx).denominator)
    return Fraction(1, den)


def mp_graded_piece(rd: RootDatum, x, degree) -> list[dict]:
    """Generators of the graded piece at the given degree for point x."""
    _require_type_a(rd)
    deg = Fraction(degree)
    x = tuple(Fraction(v) for v in x)
    out = []
    for idx, root in enumerate(rd.roots):
        shift = deg - Fraction(sum(a * b for a, b in zip(x, root)))
        if shift.denominator == 1:
            out.append({"root": idx, "n": int(shift)})
    if deg.denominator == 1:
        for k in range(rd.ss_rank):
            out.append({"torus": k, "n": int(deg)})
    return out


def vj_split(ladder: YuLadder) -> list[dict]:
    """Assignment of root/torus directions to the ladder complements."""
    d = ladder.datum
    if not d.torus.w.is_identity():
        raise UnsupportedFeatureError("direction split is defined for split presentations")
    out = [{"roots": sorted(ladder.levels[0]), "torus": True}]
    for j in range(1, len(ladder.levels)):
        out.append({"roots": sorted(ladder.levels[j] - ladder.levels[j - 1]), "torus": False})
    return out


# -- the graded lattice -------------------------------------------------


class JLattice:
    """The graded subalgebra assembled from half-depth thresholds.

    Pure monomial directions follow per-level degree bounds; at break degrees
    the lattice contains only the chosen Lagrangian (plus the Levi line).
    Exponent adjustments support corrupted variants for negative controls.
    """

    def __init__(self, real: Realization, kind: str = "J",
                 lagrangians: dict | None = None, adjust: dict | None = None):
        if kind not in ("J", "K"):
            raise InvalidArgumentError(f"lattice kind must be J or K, got {kind}")
        self.real = real
        self.kind = kind
        self.adjust = dict(adjust or {})
        self.breaks = list(real.ladder.breaks)
        self.half_depths = list(real.ladder.half_depths)
        self.break_pieces: list[dict] = []
        if kind == "J":
            self._assemble_breaks(lagrangians or {})

    # level bound: monomials of level j enter strictly above this degree
    def _level_bound(self, j: int) -> Fraction:
        if j == 0:
            return Fraction(0)
        return self.half_depths[j - 1] if self.kind == "J" else self.breaks[j - 1]

    def _pure_rule(self, mono: Monomial) -> bool:
        real = self.real
        (kind, idx), n = mono
        n += self.adjust.get((kind, idx), 0)
        deg = real.degree(((kind, idx), n))
        if real.twisted:
            return deg > self._level_bound(1)
        j = 0 if kind == "h" else real.level_of_root[idx]
        if j == 0:
            return deg >= 0
        return deg > self._level_bound(j)

    def _assemble_breaks(self, chosen: dict) -> None:
        real = self.real
        for j in range(1, len(real.ladder.levels)):
            s = self.half_depths[j - 1]
            piece = v_piece_at_degree(real, j, s)
            if not piece["vectors"]:
                continue
            form = symplectic_form_on_piece(real, j, piece)
            lag = chosen.get(j)
            if lag is None:
                lag = lagrangian(form)
            vectors = [_coords_to_map(piece, coords) for coords in lag]
            self.break_pieces.append({
                "j": j, "degree": s, "piece": piece, "form": form, "lagrangian": vectors,
            })

    def piece_at_degree(self, deg: Fraction) -> tuple[list[Monomial], list[tuple]]:
        """Monomial basis of the ambient graded slot plus lattice vectors.

        The returned vectors are independent: contributions already inside the
        accumulated span (a Lagrangian line next to its own pure monomial, say)
        are dropped.
        """
        real = self.real
        monos = real.monomials_at_degree(deg)
        index = {m: i for i, m in enumerate(monos)}
        vectors: list[tuple] = []

        def push(vec):
            if vec is not None and not all(c.is_zero() for c in vec) \
                    and not in_span(vectors, tuple(vec)):
                vectors.append(tuple(vec))

        for m in monos:
            if self._pure_rule(m):
                vec = [_ZERO] * len(monos)
                vec[index[m]] = _ONE
                push(vec)
        if real.twisted and real.m_line_in_lattice(deg):
            for line in real.m_lines_at_degree(deg):
                push(_map_to_coords(line, index))
        for rec in self.break_pieces:
            if rec["degree"] == deg:
                for line in rec["lagrangian"]:
                    push(_map_to_coords(line, index))
        return monos, vectors

    def contains_coords(self, deg: Fraction, coords: dict) -> bool:
        monos, vectors = self.piece_at_degree(deg)
        index = {m: i for i, m in enumerate(monos)}
        target = _map_to_coords(coords, index)
        if target is None:
            return False
        return in_span(vectors, target)

    def window_basis(self, lo: int, hi: int) -> list[dict[Monomial, CycloNumber]]:
        """Independent lattice basis vectors with all exponents inside [lo, hi]."""
        real = self.real
        degrees = sorted({real.degree((gen, n))
                          for gen in real.generators() for n in range(lo, hi + 1)})
        out = []
        for deg in degrees:
            monos, vectors = self.piece_at_degree(deg)
            for vec in vectors:
                line = {monos[i]: c for i, c in enumerate(vec) if not c.is_zero()}
                if all(lo <= m[1] <= hi for m in line):
                    out.append(line)
        return out

    def with_adjust(self, gen: Gen, steps: int) -> "JLattice":
        """Corrupted copy: direction bound moved by the given exponent steps."""
        adjust = dict(self.adjust)
        adjust[gen] = adjust.get(gen, 0) + steps
        out = JLattice.__new__(JLattice)
        out.real = self.real
        out.kind = self.kind
        out.adjust = adjust
        out.breaks = self.breaks
        out.half_depths = self.half_depths
        out.break_pieces = self.break_pieces
        return out

    def to_json(self) -> dict:
        real = self.real
        thresholds = []
        for gen in real.generators():
            n = -4 * max([1] + [int(b) + 1 for b in self.breaks])
            while not self._pure_rule((gen, n)):
                n += 1
            entry = {"q": str(real.degree((gen, n)))}
            if gen[0] == "r":
                entry["root"] = gen[1]
            else:
                entry["torus"] = gen[1]
            thresholds.append(entry)
        lagrangians = []
        for rec in self.break_pieces:
            from .cyclo import cyclo_to_json
            lagrangians.append({
                "j": rec["j"],
                "degree": str(rec["degree"]),
                "basis": [
                    [{"root": m[0][1] if m[0][0] == "r" else None,
                      "torus": m[0][1] if m[0][0] == "h" else None,
                      "n": m[1], "coeff": cyclo_to_json(c)} for m, c in line.items()]
                    for line in rec["lagrangian"]
                ],
            })
        return {"kind": self.kind, "thresholds": thresholds, "lagrangians": lagrangians,
                "breaks": [str(b) for b in self.breaks]}


def _map_to_coords(line: dict, index: dict) -> tuple | None:
    vec = [_ZERO] * len(index)
    for mono, c in line.items():
        if mono not in index:
            return None
        vec[index[mono]] = c
    return tuple(vec)


def _coords_to_map(piece: dict, coords) -> dict:
    out = {}
    for basis_line, c in zip(piece["vectors"], coords):
        if isinstance(c, CycloNumber) and c.is_zero():
            continue
        for mono, val in basis_line.items():
            cur = out.get(mono, _ZERO)
            out[mono] = cur + c * val
    return {m: c for m, c in out.items() if not c.is_zero()}


# -- complements and symplectic forms ------------------------------------


def v_piece_at_degree(real: Realization, j: int, deg: Fraction) -> dict:
    """Basis of the level-j complement directions at a fixed degree.

    Split case: monomials whose root sits in level j but not below. Twisted
    case: the trace-orthogonal complement of the Cartan line inside the slot.
    """
    monos = real.monomials_at_degree(deg)
    index = {m: i for i, m in enumerate(monos)}
    if not real.twisted:
        vectors = []
        levels = real.ladder.levels
        for m in monos:
            (kind, idx), _n = m
            if kind != "r":
                continue
            if idx in levels[j] and (j == 0 or idx not in levels[j - 1]):
                line = [_ZERO] * len(monos)
                line[index[m]] = _ONE
                vectors.append({m: _ONE})
        return {"monomials": monos, "vectors": vectors, "degree": deg}
    if j != 1:
        raise InvalidArgumentError("twisted toral ladders have a single complement level")
    # Constraints: trace-orthogonality to every Cartan power as Laurent polys.
    constraints = []
    powers = real.x_powers()
    for k in range(1, real.n):
        rows: dict[int, list] = {}
        for col, m in enumerate(monos):
            gen_mat = real.gen_matrix(m[0])
            for p, xmat in powers[k - 1].items():
                val = _trace_product(gen_mat, xmat)
                if not val.is_zero():
                    rows.setdefault(m[1] + p, [_ZERO] * len(monos))
                    rows[m[1] + p][col] = rows[m[1] + p][col] + val
        constraints.extend(rows.values())
    kernel = nullspace(constraints, len(monos)) if constraints else []
    vectors = [
        {monos[i]: c for i, c in enumerate(vec) if not c.is_zero()} for vec in kernel
    ]
    expected = len(monos) - len(real.m_lines_at_degree(deg))
    if len(vectors) != expected:
        raise InternalInvariantViolation(
            f"complement dimension {len(vectors)} != expected {expected} at degree {deg}"
        )
    return {"monomials": monos, "vectors": vectors, "degree": deg}


def symplectic_form_on_piece(real: Realization, j: int, piece: dict) -> list[list[CycloNumber]]:
    vectors = piece["vectors"]
    band = real.ladder.components[j - 1]
    exponents = set(band.support())
    dual = real.dual.restrict_exponents(lambda q: q in exponents)
    k = len(vectors)
    form = [[_ZERO] * k for _ in range(k)]
    for a in range(k):
        for b in range(k):
            total = _ZERO
            for mu, cu in vectors[a].items():
                for mv, cv in vectors[b].items():
                    val = real.pair_dual_bracket(mu, mv, dual)
                    if not val.is_zero():
                        total = total + cu * cv * val
            form[a][b] = total
    for a in range(k):
        if not form[a][a].is_zero():
            raise InternalInvariantViolation("symplectic form has nonzero diagonal")
        for b in range(k):
            if not (form[a][b] + form[b][a]).is_zero():
                raise InternalInvariantViolation("symplectic form is not alternating")
    if rank([list(row) for row in form]) != k:
        raise InternalInvariantViolation("symplectic form is degenerate on the break piece")
    return form


def symplectic_form(datum: PolarDatum, ladder: YuLadder | None, j: int, x=None):
    """Alternating nondegenerate matrix on the level-j break piece."""
    ladder = ladder or extract(datum)
    real = Realization(datum, ladder, x)
    s = ladder.half_depths[j - 1]
    piece = v_piece_at_degree(real, j, s)
    if not piece["vectors"]:
        raise InvalidArgumentError(f"break piece at level {j} is zero")
    return symplectic_form_on_piece(real, j, piece), piece, real


def lagrangian(form: list[list[CycloNumber]]) -> list[list[CycloNumber]]:
    """Greedy symplectic basis; returns coordinates of the first-half span."""
    k = len(form)
    if k % 2:
        raise InternalInvariantViolation("break piece has odd dimension")
    basis = [[(_ONE if i == j else _ZERO) for j in range(k)] for i in range(k)]

    def pairing(u, v):
        total = _ZERO
        for a in range(k):
            if u[a].is_zero():
                continue
            for b in range(k):
                if not v[b].is_zero() and not form[a][b].is_zero():
                    total = total + u[a] * v[b] * form[a][b]
        return total

    remaining = list(basis)
    first_half = []
    while remaining:
        u = remaining.pop(0)
        pick = next((idx for idx, v in enumerate(remaining)
                     if not pairing(u, v).is_zero()), None)
        if pick is None:
            raise InternalInvariantViolation("degenerate form in Lagrangian construction")
        v = remaining.pop(pick)
        scale = pairing(u, v).inverse()
        v = [scale * c for c in v]
        reduced = []
        for w in remaining:
            cu, cv = pairing(u, w), pairing(v, w)
            w2 = [wc - cu * vc for wc, vc in zip(w, v)]
            w2 = [wc + cv * uc for wc, uc in zip(w2, u)]
            reduced.append(w2)
        remaining = reduced
        first_half.append(u)
    for u in first_half:
        for v in first_half:
            if not pairing(u, v).is_zero():
                raise InternalInvariantViolation("Lagrangian output is not isotropic")
    return first_half


def build_j_lattice(datum: PolarDatum, ladder: YuLadder | None = None, x=None,
                    lagrangians: dict | None = None, window: int | None = None) -> JLattice:
    """Assemble the graded lattice and verify bracket closure at truncation."""
    ladder = ladder or extract(datum)
    real = Realization(datum, ladder, x)
    lattice = JLattice(real, "J", lagrangians)
    lo, hi = _default_window(ladder, window)
    bad = bracket_closure_violations(lattice, lo, hi, stop_early=True)
    if bad:
        raise InternalInvariantViolation(f"lattice not closed under bracket: {bad[0]}")
    return lattice


def _default_window(ladder: YuLadder, window: int | None) -> tuple[int, int]:
    if window is not None:
        return -window, window
    top = max([Fraction(1)] + list(ladder.breaks))
    return -(int(top) + 1), int(top) + 2


def bracket_closure_violations(lattice: JLattice, lo: int, hi: int,
                               stop_early: bool = False) -> list[dict]:
    """Pairs of window basis vectors whose bracket leaves the lattice."""
    real = lattice.real
    basis = lattice.window_basis(lo, hi)
    out = []
    for a in range(len(basis)):
        for b in range(a + 1, len(basis)):
            coords: dict[Monomial, CycloNumber] = {}
            for mu, cu in basis[a].items():
                for mv, cv in basis[b].items():
                    for mono, c in real.bracket_monomials(mu, mv).items():
                        cur = coords.get(mono, _ZERO)
                        coords[mono] = cur + cu * cv * c
            coords = {m: c for m, c in coords.items() if not c.is_zero()}
            if not coords:
                continue
            if any(not (lo <= m[1] <= hi) for m in coords):
                continue  # outside the verifiable truncation
            deg = real.degree(next(iter(coords)))
            if not lattice.contains_coords(deg, coords):
                out.append({"left": _mono_json(basis[a]), "right": _mono_json(basis[b]),
                            "degree": str(deg)})
                if stop_early:
                    return out
    return out


def psi_lambda_check(lattice: JLattice, lam: Tail | None = None,
                     window: int | None = None) -> bool:
    """Whether residue pairing with the tail kills all brackets of the lattice."""
    real = lattice.real
    if lam is not None and lam != real.datum.lam:
        raise InvalidArgumentError("tail does not belong to the lattice's datum")
    lo, hi = _default_window(real.ladder, window)
    basis = lattice.window_basis(lo, hi)
    for a in range(len(basis)):
        for b in range(a, len(basis)):
            total = _ZERO
            for mu, cu in basis[a].items():
                for mv, cv in basis[b].items():
                    val = real.pair_dual_bracket(mu, mv)
                    if not val.is_zero():
                        total = total + cu * cv * val
            if not total.is_zero():
                return False
    return True


def _mono_json(line: dict) -> list:
    return [[list(m[0]), m[1], repr(c)] for m, c in sorted(line.items())]


# -- moveability ---------------------------------------------------------


def moveability_check(datum: PolarDatum, ladder: YuLadder | None = None,
                      x=None, variant: str = "J", window: int | None = None) -> dict:
    """Tangent-level coset-matching check.

    Degree by degree, the pairing <lam, [X, u]> between the non-Levi part of
    the group lattice and the non-Levi part of the coset lattice must be a
    perfect square block; per-degree ranks are reported. Full rank everywhere
    is the linearized form of the statement that conjugation by the lattice
    group sweeps the coset onto its Levi part.
    """
    if variant not in ("J", "K"):
        raise InvalidArgumentError(f"variant must be J or K, got {variant}")
    ladder = ladder or extract(datum)
    real = Realization(datum, ladder, x)
    lattice = JLattice(real, variant)
    top = max([Fraction(1)] + list(ladder.breaks))
    gamma_max = top + 1
    step = real.degree_step()

    # K couples strictly positive codegrees only; J reaches down to the break
    # blocks, where Lagrangian rows pair with the residual half of the slot.
    if variant == "K":
        gamma_min = step
    else:
        gamma_min = -max([Fraction(0)] + list(ladder.half_depths))
    candidates = set()
    k = 0
    while k * step <= gamma_max:
        if k * step >= gamma_min:
            candidates.add(k * step)
        k += 1
    k = -1
    while k * step >= gamma_min:
        candidates.add(k * step)
        k -= 1
    if variant == "J":
        for rec in lattice.break_pieces:
            candidates.add(rec["degree"] - lattice.breaks[rec["j"] - 1])
    gammas = sorted(candidates)

    blocks = []
    defects = 0
    for gamma in gammas:
        rows = _group_complement_rows(real, lattice, gamma)
        cols = _coset_complement_cols(real, lattice, variant, gamma)
        if not rows and not cols:
            continue
        matrix = []
        for xline in rows:
            row = []
            for phi in cols:
                total = _ZERO
                for mu, cu in xline.items():
                    for mv, cv in phi.items():
                        val = real.pair_dual_bracket(mu, mv)
                        if not val.is_zero():
                            total = total + cu * cv * val
                row.append(total)
            matrix.append(row)
        r = rank(matrix) if rows and cols else 0
        ok = len(rows) == len(cols) == r
        if not ok:
            defects += 1
        blocks.append({"gamma": str(gamma), "rows": len(rows), "cols": len(cols),
                       "rank": r, "full": ok})
    return {
        "variant": variant,
        "type": real.rd.type_label(),
        "blocks": blocks,
        "rank_defects": defects,
        "full_rank": defects == 0,
    }


def _group_complement_rows(real: Realization, lattice: JLattice, gamma: Fraction) -> list[dict]:
    """Lattice vectors outside the Levi whose principal target is codegree gamma."""
    rows = []
    if not real.twisted:
        for idx, j in real.level_of_root.items():
            if j == 0:
                continue
            delta = gamma + lattice.breaks[j - 1]
            shift = delta - real.root_height(idx)
            if shift.denominator != 1:
                continue
            mono = (("r", idx), int(shift))
            if lattice._pure_rule(mono):
                rows.append({mono: _ONE})
        for rec in lattice.break_pieces:
            if rec["degree"] == gamma + lattice.breaks[rec["j"] - 1]:
                rows.extend(rec["lagrangian"])
        return rows
    delta = gamma + lattice.breaks[0]
    monos = real.monomials_at_degree(delta)
    if not monos:
        return rows
    index = {m: i for i, m in enumerate(monos)}
    span = []
    for line in real.m_lines_at_degree(delta):
        vec = _map_to_coords(line, index)
        if vec is not None:
            span.append(vec)
    in_lattice = [m for m in monos if lattice._pure_rule(m)]
    covered = len(in_lattice) == len(monos)
    for rec in lattice.break_pieces:
        if rec["degree"] == delta:
            rows.extend(rec["lagrangian"])
    for m in in_lattice:
        vec = [_ZERO] * len(monos)
        vec[index[m]] = _ONE
        if not in_span(span, tuple(vec)):
            span.append(tuple(vec))
            rows.append({m: _ONE})
    return rows


def _coset_complement_cols(real: Realization, lattice: JLattice, variant: str,
                           gamma: Fraction) -> list[dict]:
    """Functional basis of the coset lattice's non-Levi part at codegree gamma."""
    eta = -gamma
    monos = real.monomials_at_degree(eta)
    if not monos:
        return []
    index = {m: i for i, m in enumerate(monos)}
    constraints = []
    if variant == "J":
        _, vectors = lattice.piece_at_degree(eta)
        constraints.extend(list(v) for v in vectors)
    else:
        if eta >= 0:
            return []
    for line in real.m_lines_at_degree(eta):
        vec = _map_to_coords(line, index)
        if vec is not None:
            constraints.append(list(vec))
    if not real.twisted:
        for m in monos:
            (kind, idx), _n = m
            if kind == "h" or idx in real.datum.levi:
                vec = [_ZERO] * len(monos)
                vec[index[m]] = _ONE
                constraints.append(vec)
    kernel = nullspace(constraints, len(monos)) if constraints else \
        [tuple(_ONE if i == k else _ZERO for i in range(len(monos))) for k in range(len(monos))]
    return [
        {monos[i]: c for i, c in enumerate(vec) if not c.is_zero()} for vec in kernel
    ]


# -- graded regularity search --------------------------------------------


def _char_poly(mat: list[list[Fraction]]) -> list[Fraction]:
    """Characteristic polynomial by the Faddeev-LeVerrier recursion."""
    n = len(mat)
    coeffs = [Fraction(1)]  # leading term x^n
    m_cur = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        for i in range(n):
            m_cur[i][i] += coeffs[-1]
        m_next = [[sum(mat[i][l] * m_cur[l][j] for l in range(n)) for j in range(n)]
                  for i in range(n)]
        c = -Fraction(sum(m_next[i][i] for i in range(n)), k)
        coeffs.append(c)
        m_cur = m_next
    return coeffs[::-1]  # ascending order


def _poly_deriv(p: list[Fraction]) -> list[Fraction]:
    return [i * c for i, c in enumerate(p)][1:]


def _resultant(p: list[Fraction], q: list[Fraction]) -> Fraction:
    """Sylvester resultant via fraction Gaussian elimination."""
    dp, dq = len(p) - 1, len(q) - 1
    if dp < 1 or dq < 1:
        return Fraction(1)
    size = dp + dq
    rows = []
    for i in range(dq):
        rows.append([Fraction(0)] * i + p[::-1] + [Fraction(0)] * (size - dp - 1 - i))
    for i in range(dp):
        rows.append([Fraction(0)] * i + q[::-1] + [Fraction(0)] * (size - dq - 1 - i))
    det = Fraction(1)
    for col in range(size):
        piv = next((r for r in range(col, size) if rows[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        det *= rows[col][col]
        inv = 1 / rows[col][col]
        for r in range(col + 1, size):
            if rows[r][col] != 0:
                f = rows[r][col] * inv
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
    return det


def graded_piece_directions(rd: RootDatum, m: int) -> list:
    """Directions of the residual graded piece at class -1 mod m."""
    n = _require_type_a(rd)
    rho = rd.rho_coweight()
    target = (-1) % m
    dirs = []
    for idx, root in enumerate(rd.roots):
        height = sum(a * b for a, b in zip(rho, root))
        if int(height) % m == target:
            dirs.append(("r", idx))
    if target == 0:
        dirs.extend(("h", k) for k in range(n - 1))
    return dirs


def eigen_regular_check(rd: RootDatum, m: int, max_samples: int = 3000) -> bool:
    """Brute-force search for a regular semisimple element in the -1 graded class."""
    n = _require_type_a(rd)
    datum_positions = {}
    coords = {}
    for i in range(n):
        for j in range(n):
            if i != j:
                vec = tuple(
                    (1 if k == i else 0) - (1 if k + 1 == i else 0)
                    - (1 if k == j else 0) + (1 if k + 1 == j else 0)
                    for k in range(n - 1)
                )
                coords[vec] = (i, j)
    dirs = graded_piece_directions(rd, m)
    if not dirs:
        return False

    def assemble(sample) -> list[list[Fraction]]:
        mat = [[Fraction(0)] * n for _ in range(n)]
        for c, (kind, idx) in zip(sample, dirs):
            if kind == "r":
                i, j = coords[rd.roots[idx]]
                mat[i][j] += Fraction(c)
            else:
                mat[idx][idx] += Fraction(c)
                mat[idx + 1][idx + 1] -= Fraction(c)
        return mat

    tried = 0
    for sample in product((1, 2, 3, 5), repeat=len(dirs)):
        tried += 1
        if tried > max_samples:
            break
        p = _char_poly(assemble(sample))
        if _resultant(p, _poly_deriv(p)) != 0:
            return True
    return False


def eigen_regular_agrees(rd: RootDatum, m: int) -> bool:
    from .tori import regular_numbers

    return eigen_regular_check(rd, m) == (m in regular_numbers(rd)["regular"])

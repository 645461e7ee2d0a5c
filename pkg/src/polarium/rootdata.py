"""Split root data and Weyl groups: the combinatorial substrate.

Coordinates: the character lattice carries the fundamental-weight basis of
each simple factor (so a simple root is the corresponding Cartan column) and
the cocharacter lattice carries the dual simple-coroot basis, followed by
central-torus coordinates on which everything acts trivially. With these
bases the canonical pairing is the plain integer dot product.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InvalidArgumentError, ResourceLimitError, UnsupportedFeatureError

IntVec = tuple[int, ...]

WEYL_ORDER_BOUND = 100_000

_SIMPLE_RANKS = {"A": 1, "B": 2, "C": 2, "D": 3, "G": 2}


def _cartan_matrix(letter: str, n: int) -> list[list[int]]:
    if letter == "G":
        if n != 2:
            raise UnsupportedFeatureError("G admits only rank 2")
        return [[2, -1], [-3, 2]]
    c = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    if letter in ("A", "B", "C"):
        for i in range(n - 1):
            c[i][i + 1] = -1
            c[i + 1][i] = -1
        if letter == "B" and n >= 2:
            c[n - 1][n - 2] = -2
        if letter == "C" and n >= 2:
            c[n - 2][n - 1] = -2
    elif letter == "D":
        for i in range(n - 2):
            c[i][i + 1] = -1
            c[i + 1][i] = -1
        c[n - 3][n - 1] = -1
        c[n - 1][n - 3] = -1
    else:
        raise UnsupportedFeatureError(f"unsupported Cartan type {letter}")
    return c


def _parse_type(spec) -> tuple[list[tuple[str, int]], int]:
    """Accepts "A2", "G2", or [["A",2],["torus",1],...]."""
    if isinstance(spec, str):
        letter, rank = spec[0].upper(), spec[1:]
        if not rank.isdigit():
            raise InvalidArgumentError(f"malformed type label {spec!r}")
        return [(letter, int(rank))], 0
    factors: list[tuple[str, int]] = []
    torus = 0
    for entry in spec:
        name, rank = entry[0], int(entry[1])
        if name.lower() == "torus":
            torus += rank
        else:
            factors.append((name.upper(), rank))
    return factors, torus


class RootDatum:
    """A split root datum with full root/coroot enumeration."""

    def __init__(self, type_spec):
        factors, torus_rank = _parse_type(type_spec)
        for letter, n in factors:
            if letter not in _SIMPLE_RANKS:
                raise UnsupportedFeatureError(f"unsupported Cartan type {letter}{n}")
            if n < _SIMPLE_RANKS[letter]:
                raise UnsupportedFeatureError(f"{letter}{n} below minimal rank")
        self.factors = tuple(factors)
        self.torus_rank = torus_rank
        self.ss_rank = sum(n for _, n in factors)
        self.dim = self.ss_rank + torus_rank
        if self.dim == 0:
            raise InvalidArgumentError("empty root datum")

        # Block-diagonal Cartan matrix, entries <alpha_i^vee, alpha_j>.
        r = self.ss_rank
        cartan = [[0] * r for _ in range(r)]
        offset = 0
        for letter, n in factors:
            block = _cartan_matrix(letter, n)
            for i in range(n):
                for j in range(n):
                    cartan[offset + i][offset + j] = block[i][j]
            offset += n
        self.cartan = tuple(tuple(row) for row in cartan)

        self.simple_roots = tuple(
            tuple(cartan[k][j] for k in range(r)) + (0,) * torus_rank for j in range(r)
        )
        self.simple_coroots = tuple(
            tuple(1 if k == i else 0 for k in range(self.dim)) for i in range(r)
        )
        self._close_roots()
        self._weyl_cache: list[WeylElement] | None = None
        self._reflection_cache: dict[IntVec, int] | None = None

    # -- construction ----------------------------------------------------

    def _close_roots(self) -> None:
        pairs = {(self.simple_roots[i], self.simple_coroots[i]) for i in range(self.ss_rank)}
        frontier = list(pairs)
        while frontier:
            root, coroot = frontier.pop()
            for i in range(self.ss_rank):
                n_root = self._reflect_root(i, root)
                n_coroot = self._reflect_coroot(i, coroot)
                if (n_root, n_coroot) not in pairs:
                    pairs.add((n_root, n_coroot))
                    frontier.append((n_root, n_coroot))
        simple = list(zip(self.simple_roots, self.simple_coroots))
        rest = sorted(p for p in pairs if p not in set(simple))
        ordered = simple + rest
        self.roots = tuple(p[0] for p in ordered)
        self.coroots = tuple(p[1] for p in ordered)
        self.root_index = {root: k for k, root in enumerate(self.roots)}
        for root, coroot in ordered:
            assert self.pairing(coroot, root) == 2, "coroot normalization broken"

    def _reflect_root(self, i: int, x: IntVec) -> IntVec:
        # s_i on the character side: x - <alpha_i^vee, x> alpha_i.
        c = x[i]
        alpha = self.simple_roots[i]
        return tuple(xv - c * av for xv, av in zip(x, alpha))

    def _reflect_coroot(self, i: int, y: IntVec) -> IntVec:
        c = self.pairing(y, self.simple_roots[i])
        cov = self.simple_coroots[i]
        return tuple(yv - c * cv for yv, cv in zip(y, cov))

    # -- basic queries -----------------------------------------------------

    @staticmethod
    def pairing(coweight, weight) -> int:
        return sum(a * b for a, b in zip(coweight, weight))

    def coroot_of(self, root_idx: int) -> IntVec:
        return self.coroots[root_idx]

    def negative_of(self, root_idx: int) -> int:
        return self.root_index[tuple(-v for v in self.roots[root_idx])]

    def type_label(self) -> str:
        parts = [f"{letter}{n}" for letter, n in self.factors]
        if self.torus_rank:
            parts.append(f"T{self.torus_rank}")
        return "x".join(parts) if parts else "T0"

    def coxeter_number(self) -> int:
        if len(self.factors) != 1 or self.torus_rank:
            raise InvalidArgumentError("Coxeter number defined for a single simple factor")
        return len(self.roots) // self.ss_rank

    def rho_coweight(self) -> tuple[Fraction, ...]:
        """The rational coweight pairing to 1 with every simple root."""
        r = self.ss_rank
        aug = [[Fraction(self.cartan[k][j]) for k in range(r)] + [Fraction(1)]
               for j in range(r)]
        for col in range(r):
            piv = next(i for i in range(col, r) if aug[i][col] != 0)
            aug[col], aug[piv] = aug[piv], aug[col]
            inv = 1 / aug[col][col]
            aug[col] = [v * inv for v in aug[col]]
            for i in range(r):
                if i != col and aug[i][col] != 0:
                    f = aug[i][col]
                    aug[i] = [v - f * w for v, w in zip(aug[i], aug[col])]
        return tuple(aug[k][r] for k in range(r)) + (Fraction(0),) * self.torus_rank

    # -- Weyl group --------------------------------------------------------

    def simple_reflection_matrix(self, i: int) -> tuple[IntVec, ...]:
        n = self.dim
        cols = []
        for j in range(n):
            e = [1 if k == j else 0 for k in range(n)]
            c = self.pairing(e, self.simple_roots[i])
            for k in range(n):
                e[k] -= c * self.simple_coroots[i][k]
            cols.append(e)
        return tuple(tuple(cols[j][k] for j in range(n)) for k in range(n))

    def weyl_elements(self) -> list["WeylElement"]:
        """The full Weyl group, identity first, closed under composition."""
        if self._weyl_cache is not None:
            return self._weyl_cache
        n = self.dim
        identity = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
        gens = [self.simple_reflection_matrix(i) for i in range(self.ss_rank)]
        seen = {identity}
        order = [identity]
        frontier = [identity]
        while frontier:
            mat = frontier.pop(0)
            for g in gens:
                prod = _mat_mul(g, mat)
                if prod not in seen:
                    if len(seen) >= WEYL_ORDER_BOUND:
                        raise ResourceLimitError(
                            f"Weyl group larger than bound {WEYL_ORDER_BOUND}"
                        )
                    seen.add(prod)
                    order.append(prod)
                    frontier.append(prod)
        self._weyl_cache = [WeylElement(self, m) for m in order]
        return self._weyl_cache

    def identity_element(self) -> "WeylElement":
        return self.weyl_elements()[0]

    def reflection_matrices(self) -> dict[tuple[IntVec, ...], int]:
        """Map from reflection matrix to the index of a root it reflects."""
        if self._reflection_cache is None:
            out = {}
            n = self.dim
            for idx, (root, coroot) in enumerate(zip(self.roots, self.coroots)):
                cols = []
                for j in range(n):
                    e = [1 if k == j else 0 for k in range(n)]
                    c = self.pairing(e, root)
                    for k in range(n):
                        e[k] -= c * coroot[k]
                    cols.append(e)
                mat = tuple(tuple(cols[j][k] for j in range(n)) for k in range(n))
                out.setdefault(mat, idx)
            self._reflection_cache = out
        return self._reflection_cache

    def __repr__(self):
        return f"RootDatum({self.type_label()}, {len(self.roots)} roots)"


def _mat_mul(a, b):
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n)
    )


def _mat_inv_int(a):
    """Inverse of an integer matrix with determinant +-1."""
    n = len(a)
    aug = [[Fraction(a[i][j]) for j in range(n)] + [Fraction(1 if i == j else 0) for j in range(n)]
           for i in range(n)]
    for col in range(n):
        piv = next(i for i in range(col, n) if aug[i][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [v - f * w for v, w in zip(aug[i], aug[col])]
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            v = aug[i][n + j]
            assert v.denominator == 1
            row.append(int(v))
        out.append(tuple(row))
    return tuple(out)


class WeylElement:
    """A Weyl group element as an integer matrix on the cocharacter lattice."""

    __slots__ = ("rd", "matrix", "_inv", "_cov", "_perm", "_order")

    def __init__(self, rd: RootDatum, matrix):
        self.rd = rd
        self.matrix = tuple(tuple(row) for row in matrix)
        self._inv = None
        self._cov = None
        self._perm = None
        self._order = None

    def inverse_matrix(self):
        if self._inv is None:
            self._inv = _mat_inv_int(self.matrix)
        return self._inv

    def covector_matrix(self):
        """Action on the character side: transpose of the inverse."""
        if self._cov is None:
            inv = self.inverse_matrix()
            n = len(inv)
            self._cov = tuple(tuple(inv[j][i] for j in range(n)) for i in range(n))
        return self._cov

    def apply_coweight(self, y):
        return tuple(sum(r * v for r, v in zip(row, y)) for row in self.matrix)

    def apply_weight(self, x):
        return tuple(sum(r * v for r, v in zip(row, x)) for row in self.covector_matrix())

    def root_permutation(self) -> tuple[int, ...]:
        if self._perm is None:
            perm = []
            for root in self.rd.roots:
                image = self.apply_weight(root)
                if image not in self.rd.root_index:
                    raise InvalidArgumentError("matrix does not permute the roots")
                perm.append(self.rd.root_index[image])
            self._perm = tuple(perm)
        return self._perm

    def order(self) -> int:
        if self._order is None:
            n = len(self.matrix)
            identity = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
            power, k = self.matrix, 1
            while power != identity:
                power = _mat_mul(self.matrix, power)
                k += 1
            self._order = k
        return self._order

    def compose(self, other: "WeylElement") -> "WeylElement":
        return WeylElement(self.rd, _mat_mul(self.matrix, other.matrix))

    def is_identity(self) -> bool:
        return all(self.matrix[i][j] == (1 if i == j else 0)
                   for i in range(len(self.matrix)) for j in range(len(self.matrix)))

    def __eq__(self, other):
        return isinstance(other, WeylElement) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"WeylElement{self.matrix}"


def build(type_spec) -> RootDatum:
    """Construct the split root datum for a type label."""
    return RootDatum(type_spec)


def q_closure(rd: RootDatum, subset) -> frozenset[int]:
    """Roots lying in the rational span of the given root subset."""
    indices = sorted(set(subset))
    if not indices:
        return frozenset()
    basis: list[list[Fraction]] = []
    for idx in indices:
        _span_insert(basis, [Fraction(v) for v in rd.roots[idx]])
    out = set()
    for k, root in enumerate(rd.roots):
        if _span_contains(basis, [Fraction(v) for v in root]):
            out.add(k)
    return frozenset(out)


def is_q_closed(rd: RootDatum, subset) -> bool:
    return q_closure(rd, subset) == frozenset(subset)


def _span_insert(basis: list[list[Fraction]], vec: list[Fraction]) -> None:
    vec = _span_reduce(basis, vec)
    if any(vec):
        lead = next(i for i, v in enumerate(vec) if v)
        inv = 1 / vec[lead]
        basis.append([v * inv for v in vec])
        basis.sort(key=lambda row: next(i for i, v in enumerate(row) if v))


def _span_reduce(basis, vec):
    vec = list(vec)
    for row in basis:
        lead = next(i for i, v in enumerate(row) if v)
        if vec[lead]:
            f = vec[lead]
            vec = [v - f * w for v, w in zip(vec, row)]
    return vec


def _span_contains(basis, vec) -> bool:
    return not any(_span_reduce(basis, vec))


def stable_under(rd: RootDatum, w: WeylElement, subset) -> bool:
    perm = w.root_permutation()
    s = set(subset)
    return all(perm[i] in s for i in s)


# -- JSON ---------------------------------------------------------------

def rootdatum_to_json(rd: RootDatum) -> dict:
    spec = [[letter, n] for letter, n in rd.factors]
    if rd.torus_rank:
        spec.append(["torus", rd.torus_rank])
    if len(spec) == 1 and spec[0][0] != "torus":
        return {"type": f"{spec[0][0]}{spec[0][1]}"}
    return {"type": spec}


def rootdatum_from_json(doc: dict) -> RootDatum:
    return build(doc["type"])

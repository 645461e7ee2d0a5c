import random
from fractions import Fraction as F

import pytest

from polarium.cyclo import CycloNumber
from polarium.errors import InternalInvariantViolation, InvalidArgumentError
from polarium.looplie import (Realization, bracket_closure_violations,
                              build_j_lattice, eigen_regular_agrees,
                              eigen_regular_check, lagrangian,
                              moveability_check, mp_graded_piece,
                              psi_lambda_check, symplectic_form, vj_split)
from polarium.polar import PolarDatum, classify, epipelagic_datum
from polarium.tails import Tail
from polarium.tori import split_torus_class
from polarium.yuseq import YuLadder, extract

from .oracles import LaurentMatrix, cyclo_rank

ONE = CycloNumber.one()


def rho_over(rd, k):
    return tuple(v / k for v in rd.rho_coweight())


def sl2_depth_one(a1):
    d = classify(split_torus_class(a1), Tail(a1, 1, {F(1): [1]}))
    return d, extract(d)


def sl3_two_break(a2):
    d = classify(split_torus_class(a2), Tail(a2, 1, {F(2): [3, 0], F(1): [-1, 2]}))
    return d, extract(d)


# -- gradings ------------------------------------------------------------


def test_mp_graded_piece_sl2(a1):
    x = rho_over(a1, 2)
    half = mp_graded_piece(a1, x, F(1, 2))
    assert half == [{"root": 0, "n": 0}, {"root": 1, "n": 1}]
    assert mp_graded_piece(a1, x, F(0)) == [{"torus": 0, "n": 0}]
    assert mp_graded_piece(a1, (F(0),), F(1, 2)) == []


def test_graded_additivity(a1, a2):
    rng = random.Random(13)
    for rd, datum_fn in ((a1, sl2_depth_one), (a2, sl3_two_break)):
        d, ladder = datum_fn(rd)
        real = Realization(d, ladder, rho_over(rd, 2))
        gens = real.generators()
        for _ in range(40):
            u = (gens[rng.randrange(len(gens))], rng.randint(-2, 2))
            v = (gens[rng.randrange(len(gens))], rng.randint(-2, 2))
            result = real.bracket_monomials(u, v)
            for mono, c in result.items():
                assert not c.is_zero()
                assert real.degree(mono) == real.degree(u) + real.degree(v)


def test_vj_split_examples(a1, a2):
    d, ladder = sl3_two_break(a2)
    split = vj_split(ladder)
    assert split == [
        {"roots": [], "torus": True},
        {"roots": [1, 4], "torus": False},
        {"roots": [0, 2, 3, 5], "torus": False},
    ]
    g0 = classify(split_torus_class(a2), Tail.zero(a2))
    assert vj_split(extract(g0)) == [{"roots": sorted(range(6)), "torus": True}]
    d1, lad1 = sl2_depth_one(a1)
    assert vj_split(lad1)[1] == {"roots": [0, 1], "torus": False}


# -- symplectic forms ----------------------------------------------------


def test_symplectic_sl2_matches_residue_oracle(a1):
    d, ladder = sl2_depth_one(a1)
    form, piece, real = symplectic_form(d, ladder, 1, rho_over(a1, 2))
    assert piece["monomials"] == [(("r", 0), 0), (("r", 1), 1)]
    # independent residue-trace oracle
    dual = LaurentMatrix(2, {-1: [[F(1, 2), 0], [0, F(-1, 2)]]})
    e = LaurentMatrix.monomial(2, 0, 1, 0)
    f = LaurentMatrix.monomial(2, 1, 0, 1)
    expected = e.commutator(f).residue_pair(dual)
    assert expected == 1
    assert form[0][1] == expected
    assert form[1][0] == -expected
    assert form[0][0].is_zero() and form[1][1].is_zero()


def test_symplectic_no_break_precondition(a1):
    d, ladder = sl2_depth_one(a1)
    with pytest.raises(InvalidArgumentError):
        symplectic_form(d, ladder, 1, (F(0),))  # integral grading: piece is zero


def test_symplectic_sl3_both_breaks(a2):
    d, ladder = sl3_two_break(a2)
    x = rho_over(a2, 2)
    for j in (1, 2):
        form, piece, _ = symplectic_form(d, ladder, j, x)
        k = len(form)
        assert k == 2
        for a in range(k):
            assert form[a][a].is_zero()
            for b in range(k):
                assert (form[a][b] + form[b][a]).is_zero()
        assert cyclo_rank([list(r) for r in form]) == k


def test_lagrangian_outputs(a1):
    d, ladder = sl2_depth_one(a1)
    form, piece, _ = symplectic_form(d, ladder, 1, rho_over(a1, 2))
    lag = lagrangian(form)
    assert len(lag) == 1
    assert [repr(c) for c in lag[0]] == ["1*z1^0", "0"]
    assert lagrangian([]) == []
    # block form of two hyperbolic planes: 2-dimensional isotropic output
    z, one, two = CycloNumber.zero(), ONE, CycloNumber.from_rational(2)
    block = [
        [z, one, z, z],
        [-one, z, z, z],
        [z, z, z, two],
        [z, z, -two, z],
    ]
    lag4 = lagrangian(block)
    assert len(lag4) == 2

    def pairing(u, v):
        total = CycloNumber.zero()
        for i in range(4):
            for j in range(4):
                total = total + u[i] * v[j] * block[i][j]
        return total

    for u in lag4:
        for v in lag4:
            assert pairing(u, v).is_zero()


def test_lagrangian_rejects_degenerate():
    z = CycloNumber.zero()
    with pytest.raises(InternalInvariantViolation):
        lagrangian([[z, z], [z, z]])


# -- the lattice ---------------------------------------------------------


def test_build_sl2_depth_one_table(a1):
    d, ladder = sl2_depth_one(a1)
    J = build_j_lattice(d, ladder, rho_over(a1, 2))
    # J = t.O + e.O + f.t^2 O
    assert J.contains_coords(F(0), {(("h", 0), 0): ONE})
    assert J.contains_coords(F(1, 2), {(("r", 0), 0): ONE})
    assert not J.contains_coords(F(1, 2), {(("r", 1), 1): ONE})
    assert J.contains_coords(F(3, 2), {(("r", 1), 2): ONE})
    assert not J.contains_coords(F(-1), {(("h", 0), -1): ONE})
    assert psi_lambda_check(J)


def test_build_epipelagic_equals_positive_part(a1, a2):
    for rd, m in ((a1, 2), (a2, 3)):
        d = epipelagic_datum(rd, m)
        ladder = extract(d)
        J = build_j_lattice(d, ladder)
        real = J.real
        step = F(1, real.n)
        deg = -2
        while deg <= 2:
            monos = real.monomials_at_degree(F(deg))
            _, vectors = J.piece_at_degree(F(deg))
            expected = len(monos) if deg > 0 else 0
            assert len(vectors) == expected, (rd.type_label(), deg)
            deg += step
        assert psi_lambda_check(J)


def test_build_full_datum_nonneg_part(a2):
    g0 = classify(split_torus_class(a2), Tail.zero(a2))
    J = build_j_lattice(g0, extract(g0), tuple(F(0) for _ in range(2)))
    assert J.contains_coords(F(0), {(("r", 0), 0): ONE})
    assert not J.contains_coords(F(-1), {(("r", 0), -1): ONE})
    assert psi_lambda_check(J)


def test_sl3_two_break_lattice(a2):
    d, ladder = sl3_two_break(a2)
    J = build_j_lattice(d, ladder, rho_over(a2, 2))
    assert len(J.break_pieces) == 2
    assert psi_lambda_check(J)


def test_psi_oracle_sl3_epipelagic(a2):
    # independent check that the realized dual is X^2 t^-1 and pairs as claimed
    d = epipelagic_datum(a2, 3)
    real = Realization(d, extract(d))
    dual = LaurentMatrix(3, {
        -1: [[0, 0, 1], [0, 0, 0], [0, 0, 0]],
        0: [[0, 0, 0], [1, 0, 0], [0, 1, 0]],
    })
    for (gen, n) in [(("r", 0), 0), (("r", 1), 0), (("r", 2), 1)]:
        mat = real.gen_matrix(gen)
        mono = LaurentMatrix(3, {n: [[x.as_rational() for x in row] for row in mat]})
        assert real.pair_dual_monomial((gen, n)).as_rational() \
            == mono.residue_pair(dual)


def test_negative_controls_each_golden(a1, a2):
    goldens = []
    d1, lad1 = sl2_depth_one(a1)
    goldens.append((d1, lad1, rho_over(a1, 2)))
    e1 = epipelagic_datum(a1, 2)
    goldens.append((e1, extract(e1), None))
    e2 = epipelagic_datum(a2, 3)
    goldens.append((e2, extract(e2), None))
    d3, lad3 = sl3_two_break(a2)
    goldens.append((d3, lad3, rho_over(a2, 2)))
    for d, ladder, x in goldens:
        J = build_j_lattice(d, ladder, x)
        assert psi_lambda_check(J)
        assert not bracket_closure_violations(J, -3, 4)
        base_size = len(J.window_basis(-3, 4))
        for gen in [("r", 0), ("r", 1), ("h", 0)]:
            # smallest enlarging perturbation of this direction's threshold
            lowered = None
            for steps in (1, 2, 3):
                candidate = J.with_adjust(gen, steps)
                if len(candidate.window_basis(-3, 4)) > base_size:
                    lowered = candidate
                    break
            assert lowered is not None, (d, gen)
            broke = bool(bracket_closure_violations(lowered, -3, 4)) \
                or not psi_lambda_check(lowered)
            assert broke, (d, gen)


def test_raised_threshold_breaks_closure(a1):
    # pushing the torus part above the bracket targets must break closure
    d, ladder = sl2_depth_one(a1)
    J = build_j_lattice(d, ladder, rho_over(a1, 2))
    raised = J.with_adjust(("h", 0), -3)
    assert bracket_closure_violations(raised, -3, 4)


# -- moveability ----------------------------------------------------------


def test_moveability_full_rank_goldens(a1, a2):
    d1, lad1 = sl2_depth_one(a1)
    e1 = epipelagic_datum(a1, 2)
    e2 = epipelagic_datum(a2, 3)
    d3, lad3 = sl3_two_break(a2)
    cases = [
        (d1, lad1, rho_over(a1, 2)),
        (e1, extract(e1), None),
        (e2, extract(e2), None),
        (d3, lad3, rho_over(a2, 2)),
    ]
    for d, ladder, x in cases:
        for variant in ("J", "K"):
            report = moveability_check(d, ladder, x, variant=variant)
            assert report["full_rank"], (d, variant, report)
            assert report["blocks"], "window must produce at least one block"


def test_moveability_negative_control(a2):
    lam = Tail(a2, 1, {F(1): [1, 0]})  # kills alpha_2: not G-regular
    bad = PolarDatum(split_torus_class(a2), frozenset(), lam, validate=False)
    ladder = YuLadder(bad, [F(1)], [frozenset(), frozenset(range(6))],
                      [lam, Tail.zero(a2)], validate=False)
    report = moveability_check(bad, ladder, variant="K")
    assert not report["full_rank"]
    assert report["rank_defects"] >= 1


# -- graded regularity search ---------------------------------------------


def test_eigen_regular_examples(a1, a2):
    assert eigen_regular_check(a1, 2)
    assert eigen_regular_check(a2, 3)
    assert not eigen_regular_check(a2, 5)
    for rd, ms in ((a1, (2,)), (a2, (2, 3, 5))):
        for m in ms:
            assert eigen_regular_agrees(rd, m)

import pytest

from polarium.errors import InvalidArgumentError
from polarium.rootdata import build
from polarium.tori import (conjugacy_classes, is_springer_regular,
                           list_torus_classes, make_torus_class,
                           regular_class_of_order, regular_numbers,
                           springer_regular_sampled, split_torus_class)

from .oracles import eigen_dims_by_charpoly


def test_make_torus_class_a1(a1):
    s = a1.weyl_elements()[1]
    tc = make_torus_class(a1, s, 2)
    assert [len(tc.eigenspaces[i]) for i in range(2)] == [0, 1]
    assert tc.is_elliptic()


def test_make_torus_class_identity(a2):
    tc = split_torus_class(a2)
    assert len(tc.eigenspaces[0]) == a2.dim


def test_period_must_kill_w(a2):
    w = a2.weyl_elements()[1]
    with pytest.raises(InvalidArgumentError):
        make_torus_class(a2, w, 3)


def test_period_may_be_multiple_of_order(a1):
    s = a1.weyl_elements()[1]
    tc = make_torus_class(a1, s, 4)
    # eigenvalue -1 = zeta_4^2 sits at index 2 of the refined grading
    assert [len(tc.eigenspaces[i]) for i in range(4)] == [0, 0, 1, 0]


def test_eigenspace_dims_match_charpoly_oracle(a2, b2, g2):
    for rd in (a2, b2, g2):
        for tc in list_torus_classes(rd):
            dims = [len(tc.eigenspaces[i]) for i in range(tc.m)]
            oracle = eigen_dims_by_charpoly(
                [list(row) for row in tc.w.covector_matrix()], tc.m)
            assert dims == oracle


def test_coxeter_class_dims(a2):
    cox = regular_class_of_order(a2, 3)
    assert cox is not None
    assert [len(cox.eigenspaces[i]) for i in range(3)] == [0, 1, 1]


def test_class_counts(a1, a2, b2):
    assert len(list_torus_classes(a1)) == 2
    assert len(list_torus_classes(a2)) == 3
    assert len(list_torus_classes(b2)) == 5


def test_conjugacy_classes_partition(b2):
    classes = conjugacy_classes(b2)
    seen = set()
    for cls in classes:
        for w in cls:
            assert w.matrix not in seen
            seen.add(w.matrix)
    assert len(seen) == len(b2.weyl_elements())


def test_springer_regular_examples(a1, a2):
    s = make_torus_class(a1, a1.weyl_elements()[1], 2)
    assert is_springer_regular(s)
    assert is_springer_regular(split_torus_class(a2))
    # reflections in A2 are regular of order 2
    refl = next(tc for tc in list_torus_classes(a2) if tc.m == 2)
    assert is_springer_regular(refl)


def test_sampled_oracle_agreement(a1, a2, a3, b2, g2):
    for rd in (a1, a2, a3, b2, g2):
        for tc in list_torus_classes(rd):
            assert is_springer_regular(tc) == springer_regular_sampled(tc)


def test_regular_numbers_tables(a1, a2, a3, b2, g2):
    assert regular_numbers(a1) == {"regular": [1, 2], "elliptic": [2]}
    assert regular_numbers(a2) == {"regular": [1, 2, 3], "elliptic": [3]}
    assert regular_numbers(a3) == {"regular": [1, 2, 3, 4], "elliptic": [4]}
    assert regular_numbers(b2) == {"regular": [1, 2, 4], "elliptic": [2, 4]}
    assert regular_numbers(g2) == {"regular": [1, 2, 3, 6], "elliptic": [2, 3, 6]}


def test_coxeter_number_always_regular(a1, a2, a3, b2, g2):
    for rd in (a1, a2, a3, b2, g2):
        h = rd.coxeter_number()
        assert h in regular_numbers(rd)["regular"]


def test_elliptic_iff_no_fixed_covector(b2):
    for tc in list_torus_classes(b2):
        assert tc.is_elliptic() == (len(tc.eigenspaces[0]) == 0)


def test_torus_rank_blocks_ellipticity():
    rd = build([["A", 1], ["torus", 1]])
    for tc in list_torus_classes(rd):
        assert not tc.is_elliptic()

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nilmodels.field import (
    INFINITE,
    BadMode,
    FactorizationTooHard,
    FieldMode,
    Residue,
    ZeroElement,
    exact_sqrt,
    is_square,
    least_nonresidue,
    rational_class_in_mode,
    same_class,
    square_class,
    square_class_count,
    squarefree_part,
)

# Human-scale constants: x*y^2 stays inside the default factorization bound.
nonzero_rationals = st.fractions(min_value=-1000, max_value=1000, max_denominator=1000).filter(
    lambda x: x and abs(x.numerator) <= 1000
)


def test_squarefree_representative_over_q():
    assert square_class(12, "Q").representative == 3
    assert square_class(18, "Q").representative == 2
    assert square_class(Fraction(-12, 50), "Q").representative == -6


def test_real_class_is_sign():
    assert square_class(-5, "R").representative == -1
    assert square_class(Fraction(1, 7), "R").representative == 1


def test_f7_nonsquare():
    cls = square_class(3, "F7")
    assert not cls.trivial
    assert cls.representative == Residue(3, 7)
    assert {x for x in range(1, 7) if square_class(x, "F7").trivial} == {1, 2, 4}


def test_class_counts():
    assert square_class_count("C") == 1
    assert square_class_count("R") == 2
    assert square_class_count("F11") == 2
    assert square_class_count("Q") == INFINITE


def test_rational_class_in_mode_examples():
    assert rational_class_in_mode(8, "R").representative == 1
    assert rational_class_in_mode(-3, "C").trivial
    assert rational_class_in_mode(18, "Q").representative == 2
    with pytest.raises(BadMode):
        rational_class_in_mode(2, "F5")


def test_zero_and_char_two_rejected():
    with pytest.raises(ZeroElement):
        square_class(0, "Q")
    with pytest.raises(BadMode):
        FieldMode.parse("F2")
    with pytest.raises(BadMode):
        FieldMode.parse("F9")
    with pytest.raises(BadMode):
        FieldMode.parse("Z")


def test_large_prime_cofactor_is_fine_but_semiprime_is_refused():
    assert squarefree_part(10**12 + 39) == 10**12 + 39
    assert squarefree_part((10**12 + 39) ** 2 * 6) == 6
    with pytest.raises(FactorizationTooHard):
        squarefree_part(1000003 * 1000033)


def test_least_nonresidue():
    assert [least_nonresidue(p) for p in (3, 5, 7, 11, 13, 17, 23)] == [2, 2, 3, 2, 2, 3, 5]


def test_exact_sqrt():
    assert exact_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert exact_sqrt(2) is None
    assert exact_sqrt(-1) is None
    r = exact_sqrt(Residue(4, 5), "F5")
    assert r * r == Residue(4, 5)
    assert exact_sqrt(Residue(2, 5), "F5") is None


def test_parse_scalar_and_format():
    f5 = FieldMode.parse("F5")
    assert f5.parse_scalar("2 mod 5") == Residue(2, 5)
    assert f5.parse_scalar("7") == Residue(2, 5)
    with pytest.raises(BadMode):
        f5.parse_scalar("2 mod 7")
    q = FieldMode.parse("Q")
    assert q.format(q.parse_scalar("-6/4")) == "-3/2"
    assert str(FieldMode.parse("F13")) == "F13"


def test_residue_arithmetic():
    a, b = Residue(3, 7), Residue(5, 7)
    assert a + b == Residue(1, 7)
    assert a * b == Residue(1, 7)
    assert a / b * b == a
    assert -a == Residue(4, 7)
    assert Residue(Fraction(1, 2), 7) == Residue(4, 7)
    with pytest.raises(ZeroDivisionError):
        a / Residue(0, 7)
    with pytest.raises(BadMode):
        a + Residue(1, 5)


@given(nonzero_rationals, nonzero_rationals)
def test_class_unchanged_by_square_factor(x, y):
    assert square_class(x * y * y, "Q") == square_class(x, "Q")
    assert same_class(x, x * y * y, "R")


@given(nonzero_rationals, nonzero_rationals)
def test_same_class_iff_quotient_square(x, y):
    assert same_class(x, y, "Q") == is_square(x / y, "Q")


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_fp_classes_split_evenly(p):
    counts = {}
    for x in range(1, p):
        rep = square_class(x, f"F{p}").representative
        counts[rep] = counts.get(rep, 0) + 1
    assert sorted(counts.values()) == [(p - 1) // 2] * 2


@given(nonzero_rationals)
def test_rational_class_modes(x):
    assert rational_class_in_mode(x, "C") == rational_class_in_mode(1, "C")
    assert rational_class_in_mode(x, "R").representative == (1 if x > 0 else -1)
    assert rational_class_in_mode(x, "Q") == square_class(x, "Q")

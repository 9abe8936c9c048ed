import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nilmodels.algebra import BadDimension, MinimalAlgebra, NotNilpotent
from nilmodels.classify import (
    FAMILIES,
    REGISTRY,
    ParameterNotAllowed,
    UnknownLabel,
    canonical_model,
    classify,
    enumerate_classes,
    family_member,
    homotopy_equivalent,
    parse_label,
)
from nilmodels.multilinear import identity

from paper_data import COUNTS_LOW, DEGENERATIONS
from strategies import ALL_LABELS, DIM6_LABELS, model, scrambled


def rows(alg):
    return alg.rows()


def test_canonical_model_examples():
    assert rows(canonical_model("L6_4")) == ["0", "0", "0", "x1x2", "x1x3", "x2x3"]
    assert rows(canonical_model("L6_8[a=-1]", "R"))[5] == "x2x4 - x3x5"
    with pytest.raises(ParameterNotAllowed):
        canonical_model("L6_2[a=-1]", "C")
    with pytest.raises(ParameterNotAllowed):
        canonical_model("L6_12[a=4]", "Q")
    with pytest.raises(ParameterNotAllowed):
        canonical_model("L6_4[a=2]")
    with pytest.raises(ParameterNotAllowed):
        canonical_model("L6_8")
    with pytest.raises(UnknownLabel):
        canonical_model("L6_99")


def test_label_strings():
    assert str(parse_label("L6_8[a=-1]")) == "L6_8[a=-1]"
    assert str(parse_label("L6_2[a=20]")) == "L6_2[a=5]"
    assert str(parse_label("L6_2[a]")) == "L6_2[a]"
    assert str(parse_label("L6_17[a=3]", "F7")) == "L6_17[a=3 mod 7]"
    assert parse_label("L3+A3").dim == 6


@pytest.mark.parametrize("mode,dim,count", [("F5", 6, 34), ("C", 6, 30), ("Q", 5, 9), ("R", 6, 34)])
def test_enumerate_counts(mode, dim, count):
    assert len(enumerate_classes(mode, dim)) == count


@pytest.mark.parametrize("dim,count", sorted(COUNTS_LOW.items()))
def test_low_dimensional_counts(dim, count):
    for mode in ("Q", "R", "C", "F3"):
        assert len(enumerate_classes(mode, dim)) == count


def test_q_lists_families_symbolically():
    labels = [str(lab) for lab in enumerate_classes("Q", 6)]
    assert len(labels) == 28 + 4  # 28 rigid classes, four families
    assert {lab for lab in labels if lab.endswith("[a]")} == {f"{n}[a]" for n in FAMILIES}


@pytest.mark.parametrize("label", ALL_LABELS)
def test_registry_fixed_point(label):
    alg = model(label)
    res = classify(alg, "R")
    assert str(res.label) == label
    assert [list(r) for r in res.matrix] == identity(alg.n)


def test_scrambled_l620():
    rng = random.Random(7)
    a = canonical_model("L6_20")
    while True:
        g = [[Fraction(rng.randint(-3, 3)) for _ in range(6)] for _ in range(6)]
        try:
            b = a.change_basis(g)
            break
        except ZeroDivisionError:
            continue
    assert classify(b).name == "L6_20"


def test_f3_family_example():
    a = MinimalAlgebra.from_strings(["", "", "", "", "x1x3+2*x2x4", "x1x4+x2x3"], "F3")
    res = classify(a)
    assert res.name == "L6_2"
    assert not res.label.parameter.trivial
    assert str(res.label) == "L6_2[a=2 mod 3]"


def test_errors():
    with pytest.raises(BadDimension):
        classify(MinimalAlgebra(7, [None] * 7))
    with pytest.raises(NotNilpotent):
        classify(MinimalAlgebra.from_strings(["", "x1x2"]))


def test_witness_incomplete_over_r():
    res = classify(family_member("L6_2", 2), "R")
    assert str(res.label) == "L3+L3"
    assert not res.witness_complete
    res = classify(family_member("L6_17", 3), "R")
    assert str(res.label) == "L6_17[a=1]"
    assert not res.witness_complete
    assert res.target == family_member("L6_17", 3)


@pytest.mark.parametrize("name", sorted(FAMILIES))
@pytest.mark.parametrize("a,rep", [(20, 5), (-12, -3), (Fraction(1, 3), 3), (Fraction(-18, 49), -2)])
def test_family_parameter_classes_over_q(name, a, rep):
    assert str(classify(family_member(name, a)).label) == f"{name}[a={rep}]"


@pytest.mark.parametrize("name,base", sorted(FAMILIES.items()))
def test_square_parameter_collapses(name, base):
    got = classify(family_member(name, 4)).label
    assert str(got) == (base if base else f"{name}[a=1]")


@pytest.mark.parametrize("name,target", sorted(DEGENERATIONS.items()))
def test_degenerations(name, target):
    assert str(classify(family_member(name, 0)).label) == target


def test_homotopy_examples():
    a, b = family_member("L6_17", 2), family_member("L6_17", 1)
    assert homotopy_equivalent(a, b, "R")
    assert not homotopy_equivalent(a, b, "Q")
    assert homotopy_equivalent(a, a, "Q")
    assert homotopy_equivalent(family_member("L6_2", 5), family_member("L6_2", 20), "Q")
    assert not homotopy_equivalent(family_member("L6_2", 2), family_member("L6_2", 3), "Q")
    assert homotopy_equivalent(family_member("L6_2", 2), family_member("L6_2", 3), "C")
    assert not homotopy_equivalent(canonical_model("L6_4"), canonical_model("L5_1"), "Q")


@settings(max_examples=150)
@given(scrambled())
def test_soundness_over_q(case):
    label, _, b, _ = case
    res = classify(b, "R")
    assert str(res.label) == label
    assert b.change_basis(res.matrix) == res.target


@settings(max_examples=100)
@given(scrambled(mode="F5"))
def test_soundness_over_f5(case):
    _, a, b, _ = case
    ref = classify(a)
    res = classify(b)
    assert res.label == ref.label
    assert b.change_basis(res.matrix) == canonical_model(res.label, "F5")


@settings(max_examples=100)
@given(st.sampled_from(DIM6_LABELS), st.data())
def test_branch_predicates_ignore_the_splitting(label, data):
    """Unipotent changes that keep every W_k move the complements but not the answer."""
    a = model(label)
    filt = a.filtration
    level = [k for k, f in enumerate(filt.signature) for _ in range(f)]
    # canonical generators are listed layer by layer
    assert filt.basis == tuple(tuple(r) for r in identity(6))
    g = identity(6)
    for j in range(6):
        for i in range(6):
            if level[i] < level[j] or (level[i] == level[j] and i < j):
                g[j][i] = Fraction(data.draw(st.integers(-2, 2)))
    assert str(classify(a.change_basis(g), "R").label) == label


def test_registry_signatures_match_filtration():
    for name, (dim, sig, _) in REGISTRY.items():
        if name in FAMILIES:
            alg = family_member(name, -1 if name in ("L6_2", "L6_12") else 1)
        else:
            alg = canonical_model(name)
        assert alg.filtration.signature == tuple(sig), name

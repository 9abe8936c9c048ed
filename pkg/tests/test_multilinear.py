import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nilmodels.algebra import MinimalAlgebra
from nilmodels.field import FieldMode, Q
from nilmodels.multilinear import (
    DegreeOverflow,
    ExteriorElement,
    LinearMap,
    NoSolution,
    Subspace,
    generator,
    identity,
    image,
    kernel,
    mat_inv,
    mat_mul,
    mat_rank,
    preimage,
    solve,
    wedge,
)

from strategies import ALL_LABELS, invertible, model

x = [generator(6, i) for i in range(6)]


def test_wedge_basics():
    assert wedge(x[0], x[1]) == ExteriorElement(6, 2, {(0, 1): Fraction(1)})
    assert wedge(x[1], x[0]) == -wedge(x[0], x[1])
    assert not wedge(x[0], x[0])
    phi = wedge(x[0], x[1]) + wedge(x[2], x[3])
    assert wedge(phi, phi) == ExteriorElement(6, 4, {(0, 1, 2, 3): Fraction(2)})


def test_wedge_degree_overflow():
    top = ExteriorElement(3, 3, {(0, 1, 2): Fraction(1)})
    with pytest.raises(DegreeOverflow):
        wedge(top, generator(3, 0))


def test_from_terms_sorts_with_sign():
    e = ExteriorElement.from_terms(4, [(1, (2, 0)), (3, (1, 3))])
    assert e.coeffs == {(0, 2): -1, (1, 3): 3}
    assert str(e) == "-x1x3 + 3*x2x4"


def test_json_round_trip():
    e = ExteriorElement.from_terms(5, [(Fraction(-2, 3), (0, 4)), (1, (1, 2))])
    assert ExteriorElement.from_json(5, e.to_json()) == e


def test_kernel_examples():
    zero = LinearMap([[0, 0]] * 3, 2)
    assert kernel(zero).dim == 3
    assert kernel(LinearMap(identity(3), 3)).dim == 0
    l3 = MinimalAlgebra.from_strings(["", "", "x1x2"])
    assert kernel(l3.d_map(1), 3, 1) == Subspace.span([generator(3, 0), generator(3, 1)])


def test_preimage_examples():
    l4 = MinimalAlgebra.from_strings(["", "", "x1x2", "x1x3"])
    d1 = l4.d_map(1)
    full2 = Subspace.full(4, 2)
    assert preimage(d1, full2, 4, 1).dim == 4
    assert preimage(d1, Subspace.zero(4, 2), 4, 1) == kernel(d1, 4, 1)
    lower = Subspace.span([wedge(generator(4, a), generator(4, b)) for a in range(3) for b in range(a + 1, 3)])
    assert preimage(d1, lower, 4, 1) == Subspace.full(4, 1)


def test_solve_examples():
    l3 = MinimalAlgebra.from_strings(["", "", "x1x2"])
    v = solve(l3.d_map(1), wedge(generator(3, 0), generator(3, 1)))
    assert v == [0, 0, 1]
    assert solve(LinearMap(identity(3), 3), [1, 2, 3]) == [1, 2, 3]
    assert solve(LinearMap([[0, 0]] * 2, 2), [1, 0]) is NoSolution


def test_subspace_operations():
    a = Subspace.span([x[0], x[1]])
    b = Subspace.span([x[1], x[2]])
    assert a.intersect(b) == Subspace.span([x[1]])
    assert (a + b).dim == 3
    assert Subspace.span([x[0] + x[1], x[0] - x[1]]) == a
    comp = a.complement_in(Subspace.full(6, 1))
    assert (a + Subspace(6, 1, comp)).dim == 6


def test_fp_linear_algebra():
    f7 = FieldMode.parse("F7")
    m = [[f7(1), f7(2)], [f7(3), f7(4)]]
    inv = mat_inv(m, f7)
    assert mat_mul(m, inv) == identity(2, f7)
    assert mat_rank([[f7(1), f7(2)], [f7(2), f7(4)]]) == 1


@given(st.integers(1, 6), st.data())
def test_echelon_form_is_canonical(k, data):
    rng = random.Random(data.draw(st.integers(0, 10**6)))
    rows = [[Fraction(rng.randint(-3, 3)) for _ in range(15)] for _ in range(k)]
    mix = data.draw(invertible(k))
    mixed = mat_mul(mix, rows)
    assert Subspace(6, 2, rows) == Subspace(6, 2, mixed)


@given(st.integers(1, 8), st.integers(1, 8), st.integers(0, 10**6))
def test_rank_nullity(m, n, seed):
    rng = random.Random(seed)
    f = LinearMap([[Fraction(rng.randint(-1, 1)) for _ in range(m)] for _ in range(n)], m)
    assert kernel(f).dim + image(f).dim == f.dim
    for v in kernel(f).rows:
        assert not any(f.apply(v))


@pytest.mark.parametrize("label", ALL_LABELS)
def test_d_squared_is_zero(label):
    alg = model(label)
    for k in range(alg.n - 1):
        comp = alg.d_map(k + 1).compose(alg.d_map(k))
        assert all(not any(c) for c in comp.cols)

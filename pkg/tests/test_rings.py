import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hse.rings import (
    CoefRing,
    DualElement,
    Ideal,
    RATIONALS,
    RingError,
    RingMatrix,
    block_diag,
    leibniz_minor,
    minors,
    parse_element,
    parse_ring,
)


def eps_ring(n=2):
    return CoefRing("trunc_local", ("e",), order=n)


def test_truncated_arithmetic():
    R = parse_ring("Q[x]/(x^2)")
    x = R.gen(0)
    one = R.one
    assert (one + x) * (one - x) == one
    assert x * x == R.zero


def test_eps_square_zero():
    R = eps_ring(2)
    e = R.gen(0)
    assert not (e * e)


def test_parse_ring_descriptors():
    assert parse_ring("Q").kind == "field"
    R = parse_ring("Q[x1..x4]/(m^5)")
    assert R.varnames == ("x1", "x2", "x3", "x4") and R.order == 5
    P = parse_ring("poly(x1..x3, trunc=6)")
    assert P.kind == "poly" and P.trunc == 6
    P2 = parse_ring("poly(a,b)")
    assert P2.varnames == ("a", "b") and P2.trunc is None


def test_element_string_roundtrip():
    R = parse_ring("poly(x,y)")
    f = R.element({(2, 0): Fraction(1, 2), (1, 1): Fraction(-3), (0, 0): Fraction(4)})
    assert parse_element(R, str(f)) == f
    assert parse_element(R, "0") == R.zero


def test_dual_element_eval_and_d():
    R = eps_ring(3)
    e = R.gen(0)
    # z = (1 + t^2 e) + (t e) dt
    z = DualElement(R, {0: R.one, 2: e}, {1: e})
    assert z.evaluate(Fraction(1)) == R.one + e
    dz = z.d()
    assert dz.p == {}
    assert dz.q == {1: e * 2}
    # d^2 = 0
    assert not dz.d().q and not dz.d().p


def test_minors_zero_and_identity():
    R = RATIONALS
    zero = RingMatrix(R, ("r1", "r2"), ("c1", "c2"))
    assert minors(zero, 1).is_zero()
    ident = RingMatrix(R, ("r1", "r2"), ("c1", "c2"))
    ident.set(0, 0, R.one)
    ident.set(1, 1, R.one)
    ideal = minors(ident, 2)
    assert len(ideal.generators) == 1 and ideal.generators[0] == R.one
    assert minors(ident, 0).generators[0] == R.one  # unit ideal
    assert minors(ident, 3).is_zero()  # oversized


def test_torus_resonance_matrix_minors():
    # blockdiag([x1; x2], [-x2, x1]) over Q[x1,x2]: 2-minors span (x1^2, x1x2, x2^2)
    R = parse_ring("poly(x1,x2)")
    x1, x2 = R.gen(0), R.gen(1)
    top = RingMatrix(R, ("e1", "e2"), ("1",))
    top.set(0, 0, x1)
    top.set(1, 0, x2)
    bottom = RingMatrix(R, ("e12",), ("e1", "e2"))
    bottom.set(0, 0, -x2)
    bottom.set(0, 1, x1)
    block = block_diag(top, bottom)
    ideal = minors(block, 2)
    expected = Ideal.from_list(R, [x1 * x1, x1 * x2, x2 * x2])
    assert ideal.mutually_contains(expected) is True


def test_ideal_membership_artinian():
    R = eps_ring(2)
    e = R.gen(0)
    I = Ideal.from_list(R, [e])
    assert I.contains(e) is True
    assert I.contains(R.one) is False
    assert Ideal.zero(R).is_zero()


def test_ideal_membership_poly_homogeneous():
    R = parse_ring("poly(x1,x2)")
    x1, x2 = R.gen(0), R.gen(1)
    I = Ideal.from_list(R, [x1 * x1, x1 * x2, x2 * x2])
    assert I.contains(x1 ** 3) is True  # x1 * x1^2
    assert I.contains(x1) is False  # homogeneous data: conclusive
    assert I.contains(x1 * x2 * x2) is True


def test_ideal_membership_inconclusive_inhomogeneous():
    R = parse_ring("poly(x)")
    x = R.gen(0)
    I = Ideal.from_list(R, [x + x * x])
    # x is in the ideal via (1 - x + x^2 - ...) only at high degree: a bounded
    # solve fails and the data is inhomogeneous, so the test must stay open
    assert I.contains(x, degree_bound=2) is None


def test_initial_form():
    R = parse_ring("poly(x,y)")
    x, y = R.gen(0), R.gen(1)
    f = x + x * x
    assert f.initial_form() == x
    g = x * y + y * y
    assert g.initial_form() == g  # already homogeneous
    with pytest.raises(RingError):
        R.zero.initial_form()


def test_laplace_vs_leibniz_random():
    rng = random.Random(7)
    R = parse_ring("Q[x,y]/(m^3)")
    for _ in range(20):
        mat = RingMatrix(R, tuple("r%d" % i for i in range(4)), tuple("c%d" % j for j in range(4)))
        for i in range(4):
            for j in range(4):
                terms = {}
                for mono in [(0, 0), (1, 0), (0, 1), (1, 1)]:
                    c = rng.randint(-2, 2)
                    if c:
                        terms[mono] = Fraction(c)
                mat.set(i, j, R.element(terms))
        from hse.rings import MinorEngine

        engine = MinorEngine(mat)
        rows = (0, 1, 2, 3)
        assert engine.minor(rows, rows) == leibniz_minor(mat, rows, rows)
        rows3 = (0, 2, 3)
        cols3 = (1, 2, 3)
        assert engine.minor(rows3, cols3) == leibniz_minor(mat, rows3, cols3)


def test_artinian_membership_matches_bruteforce():
    rng = random.Random(3)
    R = parse_ring("Q[a,b]/(m^3)")
    basis = R.monomial_basis()
    for _ in range(10):
        g1 = R.element({m: Fraction(rng.randint(-1, 1)) for m in basis})
        g2 = R.element({m: Fraction(rng.randint(-1, 1)) for m in basis})
        f = g1 * R.gen(0) + g2 * R.element(2)
        I = Ideal.from_list(R, [g1, g2])
        assert I.contains(f) is True


@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(0, 3), st.integers(0, 3))
@settings(max_examples=60)
def test_poly_arith_commutes(a, b, e1, e2):
    R = parse_ring("poly(u,v)")
    f = R.element({(e1, 0): Fraction(a)}) + R.gen(1)
    g = R.element({(0, e2): Fraction(b)}) + R.gen(0)
    assert f * g == g * f
    assert f + g == g + f
    assert (f - f) == R.zero

from fractions import Fraction

from hypothesis import given, settings, strategies as st

from hse.fixtures import heisenberg_cdga
from hse.grading import BasisElement, GradedSpace
from hse.multimap import MultiMap, evaluate_on_vectors, identity_map, tensor_compose
from hse.scalars import format_scalar, parse_scalar


@given(st.integers(-10**12, 10**12), st.integers(1, 10**9))
def test_scalar_string_roundtrip(num, den):
    q = Fraction(num, den)
    assert parse_scalar(format_scalar(q)) == q


def odd_space(n=3):
    return GradedSpace([BasisElement(f"a{i}", 1) for i in range(n)])


def test_antisym_storage_reconstructs_by_sign():
    space = odd_space()
    mm = MultiMap(space, space, 2, 0, "antisym")
    mm.add(("a0", "a1"), "a2", Fraction(1))
    # odd-odd transposition: sgn * koszul = (-1)(-1) = +1
    assert mm.get(("a1", "a0")) == {"a2": Fraction(1)}
    even = GradedSpace([BasisElement("b0", 2), BasisElement("b1", 2), BasisElement("c", 4)])
    m2 = MultiMap(even, even, 2, 0, "antisym")
    m2.add(("b0", "b1"), "c", Fraction(1))
    assert m2.get(("b1", "b0")) == {"c": Fraction(-1)}
    # repeated even label: forced zero
    assert m2.get(("b0", "b0")) == {}


def test_add_accumulates_and_cancels():
    space = odd_space()
    mm = MultiMap(space, space, 2, 0, "antisym")
    mm.add(("a0", "a1"), "a2", Fraction(1))
    mm.add(("a1", "a0"), "a2", Fraction(-1))  # same orbit, sign +1: cancels
    assert mm.is_zero()


def test_module_symmetry_leaves_last_slot_alone():
    alg = GradedSpace([BasisElement("x", 1), BasisElement("y", 1)])
    mod = GradedSpace([BasisElement("m", 0), BasisElement("n", 2)])
    from hse.grading import combine_spaces

    comb = combine_spaces(alg, mod)
    mm = MultiMap(comb, mod, 3, -1, "antisym_algebra")
    mm.add(("x", "y", "m"), "n", Fraction(2))
    assert mm.get(("y", "x", "m")) == {"n": Fraction(2)}  # odd-odd swap: +1
    assert mm.get(("x", "y", "m")) == {"n": Fraction(2)}


def test_tensor_compose_crossing_signs():
    # h of degree -1 crossing an odd argument must flip the sign
    alg = heisenberg_cdga()
    mu2 = alg.product_map()
    h = MultiMap(alg.space, alg.space, 1, -1)
    h.add(("xy",), "z", Fraction(1))
    comp = tensor_compose(mu2, [None, h])
    # slot-2 factor crosses slot-1 input: sign (-1)^{deg}
    assert comp.get(("x", "xy")) == {lab: -c for lab, c in mu2.get(("x", "z")).items()}
    assert comp.get(("1", "xy")) == mu2.get(("1", "z"))


def test_evaluate_on_vectors_bilinearity():
    alg = heisenberg_cdga()
    mu2 = alg.product_map()
    vx = {"x": Fraction(2), "y": Fraction(3)}
    vz = {"z": Fraction(1, 2)}
    out = evaluate_on_vectors(mu2, [vx, vz])
    expected = {}
    for la, ca in vx.items():
        for lab, c in mu2.get((la, "z")).items():
            expected[lab] = expected.get(lab, Fraction(0)) + ca * Fraction(1, 2) * c
    assert out == {k: v for k, v in expected.items() if v}


@settings(max_examples=40)
@given(st.data())
def test_identity_tensor_compose_is_identity(data):
    alg = heisenberg_cdga()
    mu2 = alg.product_map()
    ident = identity_map(alg.space)
    slot = data.draw(st.sampled_from([0, 1]))
    inners = [None, None]
    inners[slot] = ident
    comp = tensor_compose(mu2, inners)
    keys = data.draw(st.lists(st.sampled_from(sorted(mu2.table)), max_size=5))
    for key in keys:
        assert comp.get(key) == mu2.get(key)


@settings(max_examples=60)
@given(st.data())
def test_antisym_lookup_respects_random_permutations(data):
    from hse.signs import all_permutations, antisym_sign

    space = GradedSpace(
        [BasisElement("p", 1), BasisElement("q", 1),
         BasisElement("u", 2), BasisElement("w", 4)]
    )
    mm = MultiMap(space, space, 3, -1, "antisym")
    mm.add(("p", "q", "u"), "w", Fraction(3))
    key = ("p", "q", "u")
    sigma = data.draw(st.sampled_from(all_permutations(3)))
    permuted = tuple(key[i] for i in sigma)
    degs = tuple(space.deg(l) for l in key)
    sign = antisym_sign(sigma, degs)
    expected = {"w": Fraction(3) * sign}
    assert mm.get(permuted) == expected

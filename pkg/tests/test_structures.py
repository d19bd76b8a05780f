from fractions import Fraction

import pytest

from hse.fixtures import (
    adjoint_pair,
    cdga_pair,
    exterior_cdga,
    heisenberg_cdga,
    heisenberg_lie_dgla,
    random_cdga,
    solvable_dgla,
)
from hse.grading import BasisElement, GradedSpace
from hse.multimap import MultiMap
from hse.structures import (
    AInfAlgebra,
    InfMorphism,
    StructureError,
    algebra_to_module,
    antisymmetrize,
    jacobi_check,
    module_check,
    morphism_check,
    morphism_algebra_to_pair,
    morphism_pair_to_algebra,
    pair_to_algebra,
    stasheff_check,
)


def test_heisenberg_dims():
    alg = heisenberg_cdga()
    assert alg.space.dims() == {0: 1, 1: 3, 2: 3, 3: 1}


def test_heisenberg_passes_stasheff():
    rep = stasheff_check(heisenberg_cdga().ainf(), 4)
    assert rep.ok, rep.first().describe()


def test_exterior_passes_stasheff():
    rep = stasheff_check(exterior_cdga(3).ainf(), 4)
    assert rep.ok


def test_zero_structure_passes():
    space = GradedSpace([BasisElement("a", 1)])
    rep = stasheff_check(AInfAlgebra(space, {}), 4)
    assert rep.ok


def test_perturbed_product_fails_stasheff():
    alg = heisenberg_cdga()
    prod = alg.product_map()
    prod.add(("x", "y"), "xz", Fraction(1))  # breaks associativity
    bad = AInfAlgebra(alg.space, {1: alg.differential_map(), 2: prod})
    rep = stasheff_check(bad, 3)
    assert not rep.ok
    assert any(v.arity == 3 for v in rep.violations) or any(
        v.arity == 2 for v in rep.violations
    )


def test_random_cdgas_pass_stasheff():
    for seed in range(6):
        alg = random_cdga(seed)
        rep = stasheff_check(alg.ainf(), 4)
        assert rep.ok, f"seed {seed}: {rep.first().describe()}"


def test_antisymmetrize_kills_commutative_products():
    # the commutator bracket of a graded-commutative algebra must vanish;
    # this is the check that pins the antisym sign convention
    lalg = antisymmetrize(exterior_cdga(2).ainf())
    assert 2 not in lalg.brackets


def test_antisymmetrize_commutator_rule_noncommutative():
    # free associative algebra on one odd generator, truncated above deg 2
    space = GradedSpace([BasisElement("1", 0), BasisElement("a", 1), BasisElement("aa", 2)])
    prod = MultiMap(space, space, 2, 0)
    for lab in ("1", "a", "aa"):
        prod.add(("1", lab), lab, Fraction(1))
        if lab != "1":
            prod.add((lab, "1"), lab, Fraction(1))
    prod.add(("a", "a"), "aa", Fraction(1))
    alg = AInfAlgebra(space, {2: prod})
    assert stasheff_check(alg, 3).ok
    lalg = antisymmetrize(alg)
    # l2(a,a) = aa - (-1)^{1*1} aa = 2 aa
    assert lalg.brackets[2].get(("a", "a")) == {"aa": Fraction(2)}
    # l2(1,a) = 1a - a1 = 0
    assert lalg.brackets[2].get(("1", "a")) == {}


def test_antisymmetrize_heisenberg_passes_jacobi():
    lalg = antisymmetrize(heisenberg_cdga().ainf())
    rep = jacobi_check(lalg, 4)
    assert rep.ok, rep.first().describe()


def test_heisenberg_lie_dgla_jacobi():
    rep = jacobi_check(heisenberg_lie_dgla(), 3)
    assert rep.ok


def test_solvable_dgla_jacobi():
    rep = jacobi_check(solvable_dgla(), 4)
    assert rep.ok, rep.first().describe()


def test_cdga_pair_module_check():
    pair = cdga_pair(heisenberg_cdga())
    rep = module_check(pair.module, 4)
    assert rep.ok, rep.first().describe()


def test_adjoint_pair_module_check():
    pair = adjoint_pair(solvable_dgla())
    rep = module_check(pair.module, 4)
    assert rep.ok, rep.first().describe()
    pair2 = adjoint_pair(heisenberg_lie_dgla())
    rep2 = module_check(pair2.module, 4)
    assert rep2.ok, rep2.first().describe()


def test_pair_to_algebra_jacobi_and_roundtrip():
    pair = cdga_pair(heisenberg_cdga())
    combined, emb = pair_to_algebra(pair)
    rep = jacobi_check(combined, 3)
    assert rep.ok, rep.first().describe()
    back = algebra_to_module(combined, emb)
    for n, mm in pair.module.actions.items():
        assert back.module.actions[n].equals(mm)
    for n, mm in pair.algebra.brackets.items():
        assert back.algebra.brackets[n].equals(mm)


def test_identity_morphism_passes_all_kinds():
    alg = heisenberg_cdga().ainf()
    from hse.multimap import identity_map

    ident = InfMorphism("ainf", alg, alg, {1: identity_map(alg.space)})
    assert morphism_check(ident, 4).ok

    lalg = antisymmetrize(alg)
    id_l = MultiMap(lalg.space, lalg.space, 1, 0, "antisym")
    for e in lalg.space.elements:
        id_l.add((e.label,), e.label, Fraction(1))
    mor = InfMorphism("linf", lalg, lalg, {1: id_l})
    assert morphism_check(mor, 4).ok


def test_dgla_morphism_passes_linf_check():
    # an honest dgla map: rescaling the Heisenberg Lie algebra
    lalg = heisenberg_lie_dgla()
    f1 = MultiMap(lalg.space, lalg.space, 1, 0, "antisym")
    f1.add(("E",), "E", Fraction(2))
    f1.add(("F",), "F", Fraction(1))
    f1.add(("Z",), "Z", Fraction(2))
    mor = InfMorphism("linf", lalg, lalg, {1: f1})
    rep = morphism_check(mor, 3)
    assert rep.ok, rep.first().describe()


def test_non_chain_map_fails_at_arity_one():
    alg = heisenberg_cdga().ainf()
    f1 = MultiMap(alg.space, alg.space, 1, 0)
    for e in alg.space.elements:
        f1.add((e.label,), e.label, Fraction(1))
    f1.add(("x",), "x", Fraction(1))  # doubles x: not a chain map for d(z)=xy
    mor = InfMorphism("ainf", alg, alg, {1: f1})
    rep = morphism_check(mor, 2)
    assert not rep.ok


def test_module_identity_morphism_and_scaling():
    pair = cdga_pair(heisenberg_cdga())
    g1 = MultiMap(pair.module.combined, pair.module.space, 1, 0)
    for e in pair.module.space.elements:
        g1.add((e.label,), e.label, Fraction(3))
    mor = InfMorphism("module", pair.module, pair.module, {1: g1})
    rep = morphism_check(mor, 3)
    assert rep.ok, rep.first().describe()


def test_pair_morphism_roundtrip_and_check():
    pair = cdga_pair(heisenberg_cdga())
    combined, emb = pair_to_algebra(pair)
    # identity pair morphism
    f1 = MultiMap(pair.algebra.space, pair.algebra.space, 1, 0, "antisym")
    for e in pair.algebra.space.elements:
        f1.add((e.label,), e.label, Fraction(1))
    g1 = MultiMap(pair.module.combined, pair.module.space, 1, 0)
    for e in pair.module.space.elements:
        g1.add((e.label,), e.label, Fraction(1))
    f = InfMorphism("linf", pair.algebra, pair.algebra, {1: f1})
    g = InfMorphism("module", pair.module, pair.module, {1: g1})
    fg = morphism_pair_to_algebra(f, g, emb, emb, combined, combined)
    rep = morphism_check(fg, 3)
    assert rep.ok, rep.first().describe()
    f2, g2 = morphism_algebra_to_pair(fg, emb, emb, pair, pair)
    assert f2.components[1].equals(f1)
    assert g2.components[1].equals(g1)


def test_antisymmetrize_rejects_broken_input():
    alg = heisenberg_cdga()
    prod = alg.product_map()
    prod.add(("x", "y"), "xz", Fraction(1))
    bad = AInfAlgebra(alg.space, {1: alg.differential_map(), 2: prod})
    with pytest.raises(StructureError):
        antisymmetrize(bad, check_arity=3)

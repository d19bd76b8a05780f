from fractions import Fraction

import pytest

from hse.fixtures import (
    cdga_pair,
    exterior_cdga,
    heisenberg_cdga,
    random_cdga,
    weight_zero_offender_cdga,
)
from hse.resonance import (
    ResonanceError,
    binary_resonance_ideal,
    canonical_minimal_pair,
    dga_resonance_ideal,
    resonance_ideal,
    subtorus_hypothesis_check,
    tangent_cone_check,
    tangent_cone_check_dga,
    universal_complex,
)
from hse.rings import Ideal, parse_ring
from hse.transfer import transfer_pair


def torus_pair():
    return transfer_pair(cdga_pair(exterior_cdga(2)), 4).pair


def heis_pair(weights=False, arity=5):
    return transfer_pair(cdga_pair(heisenberg_cdga(weights)), arity,
                         use_weights=weights).pair


def test_torus_resonance_ideal():
    pair = torus_pair()
    res = resonance_ideal(pair, 1, 1, exact=True, n_samples=100, seed=5)
    R = res.ideal.ring
    x1, x2 = R.gen(0), R.gen(1)
    expected = Ideal.from_list(R, [x1 * x1, x1 * x2, x2 * x2])
    assert res.ideal.mutually_contains(expected) is True
    assert res.consistent
    # locus is exactly the origin
    for s in res.samples:
        origin = all(c == "0" for c in s["point"].values())
        assert s["in_locus"] == origin


def test_all_maps_zero_gives_zero_ideal():
    pair = torus_pair()
    # module degree 0 has dim 1; i=0,k=1 uses only adjacent blocks
    from hse.structures import LInfModule, LInfPair

    empty = LInfPair(pair.algebra, LInfModule(pair.algebra, pair.module.space, {}))
    res = resonance_ideal(empty, 1, 1, exact=True)
    assert res.ideal.is_zero()


def test_heisenberg_two_level_resonance():
    # H-level with mu_2 only: every class resonates (ideal zero)
    pair = heis_pair()
    resH = binary_resonance_ideal(pair, 1, 1, n_samples=50, seed=3)
    assert resH.ideal.is_zero()
    assert all(s["in_locus"] for s in resH.samples)
    # dga-level: germ at 0 is the origin alone (nonzero points all miss)
    resA = dga_resonance_ideal(heisenberg_cdga().ainf(), 1, 1, n_samples=100, seed=4)
    assert not resA.ideal.is_zero()
    for s in resA.samples:
        origin = all(c == "0" for c in s["point"].values())
        assert s["in_locus"] == origin


def test_torus_dga_resonance_matches_h_level():
    # formal dga: the two computations mutually contain each other
    resA = dga_resonance_ideal(exterior_cdga(2).ainf(), 1, 1, n_samples=30)
    pair = torus_pair()
    resH = resonance_ideal(pair, 1, 1, exact=True, n_samples=30)
    # rings are both poly(x1,x2); compare via a common ring
    R = resH.ideal.ring
    gens_a = [R.element(dict(g.terms)) for g in resA.ideal.generators]
    lifted = Ideal.from_list(R, gens_a)
    assert resH.ideal.mutually_contains(lifted) is True


def test_universal_complex_exact_vs_truncated():
    pair = heis_pair()
    exact = universal_complex(pair, exact=True)
    trunc = universal_complex(pair, trunc=2)
    exact.validate_square_zero()
    trunc.validate_square_zero()
    for i in pair.module.space.degrees():
        me, mt = exact.matrix(i), trunc.matrix(i)
        for r in range(len(me.rows)):
            for c in range(len(me.cols)):
                full = me.data[r][c]
                cut = mt.data[r][c]
                for d in range(0, 3):
                    assert full.homogeneous_part(d).terms == cut.homogeneous_part(d).terms


def test_specialization_matches_pointwise_oracle():
    from hse.resonance import pointwise_twisted_matrices

    pair = heis_pair()
    ucx = universal_complex(pair, exact=True)
    pt = {lab: Fraction(j + 1, 2) for j, lab in enumerate(ucx.variables)}
    coords = [pt[lab] for lab in ucx.variables]
    mats = pointwise_twisted_matrices(pair, pt)
    for i in pair.module.space.degrees():
        evaluated = ucx.matrix(i).evaluate(coords)
        assert evaluated == mats.get(i, evaluated)


def test_tangent_cone_certificate_heisenberg():
    pair = heis_pair()
    for i in (1, 2):
        for k in range(1, pair.module.space.dim(i) + 1):
            size = pair.module.space.dim(i) - k + 1
            if size > 3:
                continue
            rep = tangent_cone_check(pair, i, k)
            assert rep.ok, rep.failures[:2]


def test_tangent_cone_certificate_formal_and_random():
    rep = tangent_cone_check_dga(exterior_cdga(2).ainf(), 1, 1)
    assert rep.ok and rep.nonzero_linear > 0
    for seed in (0, 3):
        alg = random_cdga(seed).ainf()
        rep = tangent_cone_check_dga(alg, 1, 1, max_arity=5)
        assert rep.ok, rep.failures[:2]


def test_subtorus_check_certifies_weighted_heisenberg():
    pair = heis_pair(weights=True)
    rep = subtorus_hypothesis_check(pair)
    assert rep.certified
    assert rep.n0 == 2 * 3 + 2
    assert rep.n0_empirical <= rep.n0
    # exact-mode flag feeds resonance_ideal
    res = resonance_ideal(pair, 1, 1, n0=rep.n0, n_samples=20)
    assert res.complex.mode == "exact"


def test_subtorus_check_refuses_weight_zero_class():
    pair = transfer_pair(cdga_pair(weight_zero_offender_cdga()), 3, use_weights=True).pair
    rep = subtorus_hypothesis_check(pair)
    assert not rep.certified
    assert rep.offenders


def test_subtorus_check_no_weights_reports():
    rep = subtorus_hypothesis_check(heis_pair())
    assert not rep.certified


def test_resonance_needs_mode():
    pair = heis_pair()
    with pytest.raises(ResonanceError):
        resonance_ideal(pair, 1, 1)

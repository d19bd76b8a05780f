import random
from fractions import Fraction

import pytest

from hse.deformation import (
    DeformationError,
    HomotopyWitness,
    TPoly,
    construct_gauge_witness,
    def_ik_membership,
    homotopy_witness_check,
    jump_ideal_pair,
    mc_check,
    sample_mc,
    tangent_space,
    twist_algebra,
    twist_module,
    twisted_differential,
)
from hse.fixtures import (
    cdga_pair,
    cdga_zero_bracket_dgla,
    exterior_cdga,
    heisenberg_cdga,
    random_cdga,
    solvable_dgla,
    adjoint_pair,
)
from hse.rings import parse_ring, parse_element
from hse.structures import jacobi_check, module_check
from hse.transfer import transfer_pair


def eps(n):
    return parse_ring(f"Q[e]/(e^{n})")


def heis_pair_minimal(max_arity=4):
    return transfer_pair(cdga_pair(heisenberg_cdga()), max_arity).pair


def test_mc_zero_passes():
    alg = cdga_zero_bracket_dgla(heisenberg_cdga())
    ok, res = mc_check(alg, eps(3), {})
    assert ok


def test_mc_abelian_everything_passes():
    # minimal pair algebra of a cdga: all brackets vanish
    pair = heis_pair_minimal()
    R = eps(3)
    e = R.gen(0)
    omega = {lab: e for lab in pair.algebra.space.labels()
             if pair.algebra.space.deg(lab) == 1}
    ok, _ = mc_check(pair.algebra, R, omega)
    assert ok


def test_mc_nonclosed_direction_fails():
    alg = cdga_zero_bracket_dgla(heisenberg_cdga())
    R = eps(2)
    e = R.gen(0)
    ok, res = mc_check(alg, R, {"a.z": e})
    assert not ok
    assert any(v for v in res.values())  # residual is d(z) e = xy e


def test_mc_rejects_constant_terms():
    alg = cdga_zero_bracket_dgla(heisenberg_cdga())
    R = eps(2)
    with pytest.raises(DeformationError):
        mc_check(alg, R, {"a.x": R.one})


def test_twist_zero_is_identity_tensor():
    alg = solvable_dgla()
    R = eps(3)
    tw = twist_algebra(alg, R, {})
    assert set(tw.brackets) == set(alg.brackets)
    for n, m in alg.brackets.items():
        for key, row in m.entries():
            got = tw.brackets[n].get(key)
            assert set(got) == set(row)
            for lab, c in row.items():
                assert got[lab] == R.element(c)


def test_twist_passes_jacobi_over_ring():
    alg = solvable_dgla()
    R = eps(3)
    e = R.gen(0)
    omega = {"f": e}  # [f,f]=0 and d=0: Maurer-Cartan
    tw = twist_algebra(alg, R, omega)
    rep = jacobi_check(tw, 3)
    assert rep.ok, rep.first().describe()


def test_twisted_differential_heisenberg_pair():
    pair = cdga_pair(heisenberg_cdga())
    R = eps(2)
    e = R.gen(0)
    omega = {"a.x": e}
    twisted, complex_ = twist_module(pair, R, omega)
    complex_.validate_square_zero()
    # d_w on m.y = d(y) + x*y*e = xy e
    mat = complex_.matrix(1)
    col = mat.cols.index("m.y")
    row = mat.rows.index("m.xy")
    assert mat.data[row][col] == e
    # m.z has honest differential d(z) = xy plus the twist term x z e
    colz = mat.cols.index("m.z")
    assert mat.data[row][colz] == R.one
    rowxz = mat.rows.index("m.xz")
    assert mat.data[rowxz][colz] == e


def test_dw_squared_zero_random_mc():
    rng = random.Random(11)
    count = 0
    for seed in range(4):
        pair = transfer_pair(cdga_pair(random_cdga(seed)), 4).pair
        for N in (2, 3, 4):
            R = eps(N)
            for _ in range(5):
                omega = sample_mc(pair.algebra, R, rng)
                if omega is None:
                    continue
                _, complex_ = twist_module(pair, R, omega)
                complex_.validate_square_zero()
                count += 1
    assert count >= 20


def test_jump_ideal_conventions_minimal_pair():
    pair = heis_pair_minimal()
    R = eps(2)
    e = R.gen(0)
    omega = {}
    # k = 0: always a member (J has oversized minors -> zero ideal)
    for i in (0, 1, 2, 3):
        assert def_ik_membership(pair, R, omega, i, 0) is True
    # k > dim: unit ideal -> not a member
    for i in (0, 1, 2, 3):
        h_i = pair.module.space.dim(i)
        assert def_ik_membership(pair, R, omega, i, h_i + 1) is False
    # omega = 0: member iff dim H^i >= k (here H = M, minimal)
    for i in (0, 1, 2, 3):
        h_i = pair.module.space.dim(i)
        for k in range(0, h_i + 1):
            assert def_ik_membership(pair, R, omega, i, k) is True


def test_tangent_space_cases():
    pair = heis_pair_minimal()
    # h_1 = dim H^1 M = 2
    ts_full = tangent_space(pair, 1, 1)
    assert ts_full.kind == "full"
    ts_empty = tangent_space(pair, 1, 3)
    assert ts_empty.kind == "empty"
    ts_kernel = tangent_space(pair, 1, 2)
    assert ts_kernel.kind == "kernel"
    # all m_2 products with one degree-1 input vanish except against H^0/H^2
    # agreement with brute-force membership over Q[e]/e^2 tested below


def test_tangent_space_agrees_with_membership():
    pair = heis_pair_minimal()
    R = eps(2)
    e = R.gen(0)
    h1 = [lab for lab in pair.algebra.space.labels() if pair.algebra.space.deg(lab) == 1]
    for i in (1, 2):
        h_i = pair.module.space.dim(i)
        ts = tangent_space(pair, i, h_i)
        kernel_set = set()
        if ts.kind == "kernel":
            kernel_vecs = ts.basis
        elif ts.kind == "full":
            kernel_vecs = [{lab: Fraction(1)} for lab in h1]
        else:
            kernel_vecs = []
        # directions: basis vectors and sums of two basis vectors
        directions = [{lab: Fraction(1)} for lab in h1]
        directions += [{h1[0]: Fraction(1), h1[1]: Fraction(1)}]
        for vec in directions:
            omega = {lab: c * e for lab, c in vec.items()}
            member = def_ik_membership(pair, R, omega, i, h_i)
            # membership iff vec lies in the span of kernel_vecs
            from hse import linalg

            cols = [[kv.get(lab, Fraction(0)) for lab in h1] for kv in kernel_vecs]
            target = [vec.get(lab, Fraction(0)) for lab in h1]
            in_kernel = linalg.in_span(cols, target) is not None
            assert member == in_kernel, (i, vec, member, in_kernel)


def test_witness_constant_is_reflexive():
    pair = heis_pair_minimal()
    R = eps(3)
    e = R.gen(0)
    omega = {lab: e for lab in pair.algebra.space.labels()
             if pair.algebra.space.deg(lab) == 1}
    witness = HomotopyWitness(R, {lab: TPoly.const(R, v) for lab, v in omega.items()}, {})
    ok, why = homotopy_witness_check(pair.algebra, R, witness, omega, omega)
    assert ok, why


def test_abelian_witness_forces_equal_endpoints():
    pair = heis_pair_minimal()
    R = eps(2)
    e = R.gen(0)
    omega1 = {"a.h1_0": e}
    omega2 = {"a.h1_1": e}
    # any witness shape with constant-free z'' cannot bridge distinct MC
    # elements here: z' must be t-constant
    witness = HomotopyWitness(
        R,
        {"a.h1_0": TPoly(R, {0: e, 1: -e}), "a.h1_1": TPoly(R, {1: e})},
        {},
    )
    ok, why = homotopy_witness_check(pair.algebra, R, witness, omega1, omega2)
    assert not ok


def test_gauge_witness_on_solvable_dgla():
    alg = solvable_dgla()
    R = eps(3)
    e = R.gen(0)
    omega = {"f": e}
    lam = {"e": e}
    witness, omega2 = construct_gauge_witness(alg, R, omega, lam)
    ok, why = homotopy_witness_check(alg, R, witness, omega, omega2)
    assert ok, why
    assert omega2  # the flow actually moves the element


def test_gauge_pairs_have_equal_jump_ideals():
    # dgl pair: solvable dgla acting on itself; gauge-equivalent twists give
    # identical jump ideal families
    alg = solvable_dgla()
    pair = adjoint_pair(alg)
    R = eps(3)
    e = R.gen(0)
    omega = {"f": e}
    lam = {"e": e}
    _, omega2 = construct_gauge_witness(alg, R, omega, lam)
    for i in alg.space.degrees():
        for k in range(0, pair.module.space.dim(i) + 2):
            I1 = jump_ideal_pair(pair, R, omega, i, k)
            I2 = jump_ideal_pair(pair, R, omega2, i, k)
            assert I1.mutually_contains(I2) is True, (i, k)


def test_twist_by_sampled_mc_passes_jacobi():
    # twisting by any Maurer-Cartan element is again a structure
    from hse.fixtures import affine_plane_dgla

    rng = random.Random(21)
    hits = 0
    for alg in (solvable_dgla(), affine_plane_dgla()):
        for N in (2, 3):
            R = eps(N)
            omega = sample_mc(alg, R, rng)
            if omega is None:
                continue
            tw = twist_algebra(alg, R, omega)
            rep = jacobi_check(tw, 3)
            assert rep.ok, rep.first().describe()
            hits += 1
    assert hits >= 3

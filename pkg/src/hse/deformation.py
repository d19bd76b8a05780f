"""Maurer-Cartan elements over Artinian rings, twisting, twisted complexes
and their cohomology jump ideals, homotopy witnesses in A[t,dt], and the
Zariski tangent-space computation for the jump functors.

All sums of the shape sum_n (1/n!) map_n(omega, ..., omega, -) are finite:
the entries of omega lie in the maximal ideal, so nilpotency bounds the
range, and the structure maps have finite arity support anyway.  The bound
is computed up front, never guessed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .grading import GradedSpace
from .multimap import MultiMap, evaluate_on_vectors
from .rings import CoefRing, Ideal, RingMatrix, block_diag, minors, RElem
from .scalars import factorial_inverse
from .structures import LInfAlgebra, LInfModule, LInfPair, pair_to_algebra


class DeformationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Maurer-Cartan elements

@dataclass
class MCElement:
    ring: CoefRing
    vector: dict[str, RElem]

    def to_json(self) -> dict:
        return {
            "ring": self.ring.describe(),
            "entries": {lab: str(v) for lab, v in sorted(self.vector.items())},
        }


def _check_mc_shape(alg: LInfAlgebra, ring: CoefRing, omega: dict[str, RElem]) -> None:
    for lab, val in omega.items():
        if lab not in alg.space:
            raise DeformationError(f"unknown label {lab!r} in MC element")
        if alg.space.deg(lab) != 1:
            raise DeformationError(f"MC entries must sit in degree 1, got {lab!r}")
        if val.constant_term():
            raise DeformationError(f"MC entry at {lab!r} has a constant term")


def _omega_power_bound(ring: CoefRing, cap: int) -> int:
    """Largest number of maximal-ideal factors that can survive, capped by
    what the arity support leaves room for."""
    if cap < 0:
        return -1
    if ring.is_artinian:
        return min(cap, ring.nilpotency_order() - 1)
    return cap


def mc_residual(alg: LInfAlgebra, ring: CoefRing, omega: dict[str, RElem]) -> dict[str, RElem]:
    _check_mc_shape(alg, ring, omega)
    bound = _omega_power_bound(ring, alg.max_arity())
    acc: dict[str, RElem] = {}
    for n in range(1, bound + 1):
        ln = alg.brackets.get(n)
        if ln is None:
            continue
        vec = evaluate_on_vectors(ln, [omega] * n)
        inv = factorial_inverse(n)
        for lab, v in vec.items():
            total = acc.get(lab, ring.zero) + v * inv
            if total:
                acc[lab] = total
            else:
                acc.pop(lab, None)
    return acc


def mc_check(alg: LInfAlgebra, ring: CoefRing, omega: dict[str, RElem]) -> tuple[bool, dict]:
    res = mc_residual(alg, ring, omega)
    return (not res), res


# ---------------------------------------------------------------------------
# twisting

def twist_brackets(
    brackets: dict[int, MultiMap], space: GradedSpace, ring: CoefRing,
    omega: dict[str, RElem], symmetry: str = "antisym",
) -> dict[int, MultiMap]:
    """l^w_n = sum_i (1/i!) l_{i+n}(w^i, -): same basis, ring coefficients."""
    if not brackets:
        return {}
    max_arity = max(brackets)
    omega_vec = dict(omega)
    out: dict[int, MultiMap] = {}
    from .structures import iter_sorted_tuples

    for n in range(1, max_arity + 1):
        table = MultiMap(space, space, n, 2 - n, symmetry)
        any_entry = False
        # every i-term has the same total degree: inputs + (2 - n)
        sums = {d - (2 - n) for d in space.degrees()}
        i_max = _omega_power_bound(ring, max_arity - n)
        for T in iter_sorted_tuples(space, n, sums):
            acc: dict[str, RElem] = {}
            for i in range(0, i_max + 1):
                li = brackets.get(i + n)
                if li is None:
                    continue
                inv = factorial_inverse(i)
                vecs = [omega_vec] * i + [{t: ring.one} for t in T]
                res = evaluate_on_vectors(li, vecs)
                for lab, v in res.items():
                    total = acc.get(lab, ring.zero) + v * inv
                    if total:
                        acc[lab] = total
                    else:
                        acc.pop(lab, None)
            for lab, v in acc.items():
                if v:
                    table.add(T, lab, v)
                    any_entry = True
        if any_entry:
            out[n] = table
    return out


def twist_algebra(
    alg: LInfAlgebra, ring: CoefRing, omega: dict[str, RElem], verify: bool = True,
) -> LInfAlgebra:
    """The twisted L-infinity structure on L (x) A for an MC element."""
    if verify:
        ok, res = mc_check(alg, ring, omega)
        if not ok:
            raise DeformationError(f"not a Maurer-Cartan element; residual {_fmt_vec(res)}")
    brackets = twist_brackets(alg.brackets, alg.space, ring, omega, "antisym")
    return LInfAlgebra(alg.space, brackets)


def _fmt_vec(vec: dict) -> str:
    return "{" + ", ".join(f"{k}: {v}" for k, v in sorted(vec.items())) + "}"


# ---------------------------------------------------------------------------
# twisted complexes and jump ideals

@dataclass
class TwistedComplex:
    ring: CoefRing
    space: GradedSpace
    matrices: dict[int, RingMatrix]

    def matrix(self, i: int) -> RingMatrix:
        got = self.matrices.get(i)
        if got is not None:
            return got
        rows = tuple(e.label for e in self.space.basis_of_degree(i + 1))
        cols = tuple(e.label for e in self.space.basis_of_degree(i))
        return RingMatrix(self.ring, rows, cols)

    def validate_square_zero(self) -> None:
        for i in sorted(self.space.degrees()):
            comp = self.matrix(i + 1).compose(self.matrix(i))
            if not comp.is_zero():
                raise DeformationError(f"twisted differential fails d^2 = 0 at degree {i}")

    def jump_ideal(self, i: int, k: int) -> Ideal:
        """J^i_k = I_{dim M^i - k + 1} of d^{i-1} (+) d^i."""
        size = self.space.dim(i) - k + 1
        block = block_diag(self.matrix(i - 1), self.matrix(i))
        return minors(block, size)


def twisted_differential(
    module: LInfModule, ring: CoefRing, omega: dict[str, RElem]
) -> TwistedComplex:
    """d_w(xi) = sum_n (1/n!) m_{n+1}(w^n, xi) as matrices per degree."""
    space = module.space
    max_arity = max(module.actions, default=0)
    n_max = _omega_power_bound(ring, max_arity - 1)
    columns: dict[str, dict[str, RElem]] = {}
    omega_vec = dict(omega)
    for xi in space.elements:
        acc: dict[str, RElem] = {}
        for n in range(0, n_max + 1):
            m_map = module.actions.get(n + 1)
            if m_map is None:
                continue
            vecs = [omega_vec] * n + [{xi.label: ring.one}]
            res = evaluate_on_vectors(m_map, vecs)
            inv = factorial_inverse(n)
            for lab, v in res.items():
                total = acc.get(lab, ring.zero) + v * inv
                if total:
                    acc[lab] = total
                else:
                    acc.pop(lab, None)
        columns[xi.label] = acc
    matrices: dict[int, RingMatrix] = {}
    for i in space.degrees():
        rows = tuple(e.label for e in space.basis_of_degree(i + 1))
        cols = tuple(e.label for e in space.basis_of_degree(i))
        mat = RingMatrix(ring, rows, cols)
        for j, col in enumerate(cols):
            for lab, v in columns[col].items():
                if lab in rows:
                    mat.set(rows.index(lab), j, v)
                elif v:
                    raise DeformationError(
                        f"twisted differential leaves the degree window: {col} -> {lab}")
        matrices[i] = mat
    return TwistedComplex(ring, space, matrices)


def twist_module(
    pair: LInfPair, ring: CoefRing, omega: dict[str, RElem], verify: bool = True,
) -> tuple[dict[int, MultiMap], TwistedComplex]:
    """Twisted module structure maps and the twisted complex (M (x) A, d_w).

    Verifies that (w, 0) is Maurer-Cartan in the pair algebra L (+) M, that
    the extracted d_w is the restriction of the twisted differential of
    L (+) M, and that d_w squares to zero.
    """
    if verify:
        ok, res = mc_check(pair.algebra, ring, omega)
        if not ok:
            raise DeformationError(f"not Maurer-Cartan; residual {_fmt_vec(res)}")
        combined, _ = pair_to_algebra(pair)
        ok2, res2 = mc_check(combined, ring, dict(omega))
        if not ok2:
            raise DeformationError("(omega, 0) fails Maurer-Cartan in L (+) M")

    module = pair.module
    omega_vec = dict(omega)
    twisted: dict[int, MultiMap] = {}
    from .structures import iter_sorted_tuples

    max_arity = max(module.actions, default=0)
    mod_degs = set(module.space.degrees())
    for n in range(1, max_arity + 1):
        symmetry = "antisym_algebra" if n > 1 else "none"
        table = MultiMap(module.combined, module.space, n, 2 - n, symmetry)
        got = False
        i_max = _omega_power_bound(ring, max_arity - n)
        for xi in module.space.elements:
            if n == 1:
                heads = [()]
            else:
                # every i-term lands in degree sum(T) + 2 - n
                sums = {d - (2 - n) - xi.deg for d in mod_degs}
                heads = list(iter_sorted_tuples(pair.algebra.space, n - 1, sums))
            for Ta in heads:
                T = Ta + (xi.label,)
                acc: dict[str, RElem] = {}
                for i in range(0, i_max + 1):
                    m_map = module.actions.get(i + n)
                    if m_map is None:
                        continue
                    vecs = [omega_vec] * i + [{t: ring.one} for t in T]
                    res = evaluate_on_vectors(m_map, vecs)
                    inv = factorial_inverse(i)
                    for lab, v in res.items():
                        total = acc.get(lab, ring.zero) + v * inv
                        if total:
                            acc[lab] = total
                        else:
                            acc.pop(lab, None)
                for lab, v in acc.items():
                    if v:
                        table.add(T, lab, v)
                        got = True
        if got:
            twisted[n] = table

    complex_ = twisted_differential(module, ring, omega)
    if verify:
        m1 = twisted.get(1)
        for i in complex_.space.degrees():
            mat = complex_.matrix(i)
            for j, col in enumerate(mat.cols):
                expect = m1.get((col,)) if m1 is not None else {}
                for r, row_lab in enumerate(mat.rows):
                    got_val = mat.data[r][j]
                    want = expect.get(row_lab, ring.zero)
                    if got_val != want:
                        raise DeformationError("twisted differential mismatch with m_1^w")
        complex_.validate_square_zero()
    return twisted, complex_


def jump_ideal_pair(
    pair: LInfPair, ring: CoefRing, omega: dict[str, RElem], i: int, k: int,
    verify: bool = True,
) -> Ideal:
    _, complex_ = twist_module(pair, ring, omega, verify=verify)
    return complex_.jump_ideal(i, k)


def def_ik_membership(
    pair: LInfPair, ring: CoefRing, omega: dict[str, RElem], i: int, k: int,
    verify: bool = True,
) -> bool:
    """omega lies in Def^i_k iff the jump ideal of the twisted complex is 0."""
    return jump_ideal_pair(pair, ring, omega, i, k, verify=verify).is_zero()


# ---------------------------------------------------------------------------
# polynomials in t with ring coefficients (for A[t,dt] witnesses)

class TPoly:
    """Even coefficient polynomials in t over a CoefRing."""

    __slots__ = ("ring", "c")

    def __init__(self, ring: CoefRing, c: dict[int, RElem] | None = None):
        self.ring = ring
        self.c = {k: v for k, v in (c or {}).items() if v}

    @staticmethod
    def const(ring: CoefRing, value: RElem) -> "TPoly":
        return TPoly(ring, {0: value})

    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        return isinstance(other, TPoly) and self.c == other.c

    def __neg__(self):
        return TPoly(self.ring, {k: -v for k, v in self.c.items()})

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        out = dict(self.c)
        for k, v in other.c.items():
            s = out.get(k, self.ring.zero) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return TPoly(self.ring, out)

    __radd__ = __add__

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TPoly(self.ring, {k: v * other for k, v in self.c.items()})
        out: dict[int, RElem] = {}
        for k1, v1 in self.c.items():
            for k2, v2 in other.c.items():
                s = out.get(k1 + k2, self.ring.zero) + v1 * v2
                if s:
                    out[k1 + k2] = s
                else:
                    out.pop(k1 + k2, None)
        return TPoly(self.ring, out)

    __rmul__ = __mul__

    def derivative(self) -> "TPoly":
        return TPoly(self.ring, {k - 1: v * k for k, v in self.c.items() if k >= 1})

    def evaluate(self, t: Fraction) -> RElem:
        total = self.ring.zero
        for k, v in self.c.items():
            total = total + v * (Fraction(t) ** k)
        return total

    def coefficient(self, k: int) -> RElem:
        return self.c.get(k, self.ring.zero)


@dataclass
class HomotopyWitness:
    """z(t, dt) = z'(t) + z''(t) dt with z' in L^1 (x) m[t], z'' in L^0 (x) m[t]."""
    ring: CoefRing
    t_part: dict[str, TPoly]
    dt_part: dict[str, TPoly]

    def endpoints(self) -> tuple[dict[str, RElem], dict[str, RElem]]:
        at0 = {lab: p.evaluate(Fraction(0)) for lab, p in self.t_part.items()}
        at1 = {lab: p.evaluate(Fraction(1)) for lab, p in self.t_part.items()}
        return (
            {lab: v for lab, v in at0.items() if v},
            {lab: v for lab, v in at1.items() if v},
        )


def _witness_terms(alg: LInfAlgebra, ring: CoefRing, witness: HomotopyWitness):
    """The two components of sum (1/n!) l_n(z, ..., z) in L (x) m[t,dt].

    Terms with two dt slots die; a dt factor in slot i crosses the odd
    degree-1 elements in slots i+1..n, contributing (-1)^(n-i).
    """
    bound = _omega_power_bound(ring, alg.max_arity())
    tz = witness.t_part
    dz = witness.dt_part
    even_acc: dict[str, TPoly] = {}
    odd_acc: dict[str, TPoly] = {}
    zero_t = TPoly(ring)

    def bump(acc, lab, val):
        s = acc.get(lab, zero_t) + val
        if s:
            acc[lab] = s
        else:
            acc.pop(lab, None)

    for n in range(1, bound + 1):
        ln = alg.brackets.get(n)
        if ln is None:
            continue
        inv = factorial_inverse(n)
        vecs_t = [tz] * n
        res = evaluate_on_vectors(ln, vecs_t)
        for lab, v in res.items():
            bump(even_acc, lab, v * inv)
        for i in range(1, n + 1):
            vecs = [tz] * (i - 1) + [dz] + [tz] * (n - i)
            res = evaluate_on_vectors(ln, vecs)
            sign = -1 if (n - i) % 2 else 1
            for lab, v in res.items():
                bump(odd_acc, lab, v * (inv * sign))
    return even_acc, odd_acc


def homotopy_witness_check(
    alg: LInfAlgebra, ring: CoefRing,
    witness: HomotopyWitness,
    omega1: dict[str, RElem], omega2: dict[str, RElem],
) -> tuple[bool, str]:
    """Verify the Maurer-Cartan equation in A[t,dt] and both endpoints."""
    for lab in witness.t_part:
        if alg.space.deg(lab) != 1:
            return False, f"t-part label {lab!r} not in degree 1"
    for lab in witness.dt_part:
        if alg.space.deg(lab) != 0:
            return False, f"dt-part label {lab!r} not in degree 0"
    for part in (witness.t_part, witness.dt_part):
        for lab, poly in part.items():
            for k, v in poly.c.items():
                if v.constant_term():
                    return False, f"witness coefficient at {lab!r} leaves the maximal ideal"

    even_acc, odd_acc = _witness_terms(alg, ring, witness)
    if any(even_acc.values()):
        return False, "t-component of the Maurer-Cartan equation fails"
    want = {lab: p.derivative() for lab, p in witness.t_part.items() if p.derivative()}
    keys = set(want) | set(odd_acc)
    for lab in keys:
        if odd_acc.get(lab, TPoly(ring)) != want.get(lab, TPoly(ring)):
            return False, "dt-component does not match dz'/dt"
    at0, at1 = witness.endpoints()
    o1 = {lab: v for lab, v in omega1.items() if v}
    o2 = {lab: v for lab, v in omega2.items() if v}
    if at0 != o1:
        return False, "witness does not start at omega_1"
    if at1 != o2:
        return False, "witness does not end at omega_2"
    return True, "ok"


def construct_gauge_witness(
    alg: LInfAlgebra, ring: CoefRing, omega: dict[str, RElem],
    lam: dict[str, RElem], max_t_degree: int = 40,
) -> tuple[HomotopyWitness, dict[str, RElem]]:
    """Flow a Maurer-Cartan element along a degree-0 gauge direction.

    z'' := lambda (constant in t) and z' solves dz'/dt = (dt-component of the
    Maurer-Cartan sum) by Picard iteration from z'(0) = omega; nilpotency
    terminates the iteration.  The full witness equation is re-verified
    before returning, so a convention bug cannot produce a bogus witness.
    """
    for lab, v in lam.items():
        if alg.space.deg(lab) != 0:
            raise DeformationError("gauge direction must sit in degree 0")
        if v.constant_term():
            raise DeformationError("gauge direction must lie in the maximal ideal")
    ok, res = mc_check(alg, ring, omega)
    if not ok:
        raise DeformationError("gauge flow needs a Maurer-Cartan start point")

    t_part: dict[str, TPoly] = {
        lab: TPoly.const(ring, v) for lab, v in omega.items() if v
    }
    dt_part: dict[str, TPoly] = {lab: TPoly.const(ring, v) for lab, v in lam.items() if v}

    # Picard step k sets the t^(k+1) coefficients from the t^k coefficient of
    # the dt-component, which only involves coefficients up to t^k.
    for k in range(0, max_t_degree):
        witness = HomotopyWitness(ring, t_part, dt_part)
        _, odd_acc = _witness_terms(alg, ring, witness)
        for lab, poly in odd_acc.items():
            target = poly.coefficient(k) * Fraction(1, k + 1)
            entry = t_part.get(lab, TPoly(ring))
            if entry.coefficient(k + 1) == target:
                continue
            newc = dict(entry.c)
            if target:
                newc[k + 1] = target
            else:
                newc.pop(k + 1, None)
            t_part[lab] = TPoly(ring, newc)
        if all(max(p.c, default=0) <= k for p in t_part.values()) and all(
            max(p.c, default=0) <= k - 1 for p in odd_acc.values()
        ):
            break

    witness = HomotopyWitness(ring, {k: v for k, v in t_part.items() if v},
                              {k: v for k, v in dt_part.items() if v})
    _, omega2 = witness.endpoints()
    good, why = homotopy_witness_check(alg, ring, witness, omega, omega2)
    if not good:
        raise DeformationError(f"gauge flow failed to produce a witness: {why}")
    ok2, _ = mc_check(alg, ring, omega2)
    if not ok2:
        raise DeformationError("gauge flow endpoint is not Maurer-Cartan")
    return witness, omega2


# ---------------------------------------------------------------------------
# tangent spaces of the jump functors

@dataclass
class TangentSpace:
    kind: str  # "full" | "empty" | "kernel"
    h_i: int
    basis: list[dict[str, Fraction]]

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "h_i": self.h_i,
            "basis": [
                {lab: str(c) for lab, c in vec.items()} for vec in self.basis
            ],
        }


def tangent_space(pair: LInfPair, i: int, k: int) -> TangentSpace:
    """Zariski tangent space of Def^i_k at the origin for a minimal pair.

    k < h_i: the full H^1; k > h_i: empty; k = h_i: the kernel of the map
    H^1 -> Hom(M^{i-1}, M^i) (+) Hom(M^i, M^{i+1}) built from the binary
    action.
    """
    if 1 in pair.algebra.brackets or 1 in pair.module.actions:
        raise DeformationError("tangent space formula needs a minimal pair")
    h_i = pair.module.space.dim(i)
    h1 = [e.label for e in pair.algebra.space.elements if e.deg == 1]
    if k > h_i:
        return TangentSpace("empty", h_i, [])
    if k < h_i:
        return TangentSpace("full", h_i, [{lab: Fraction(1)} for lab in h1])
    m2 = pair.module.actions.get(2)
    rows: list[list[Fraction]] = []
    for j in (i - 1, i):
        for src in pair.module.space.basis_of_degree(j):
            for tgt in pair.module.space.basis_of_degree(j + 1):
                row = []
                for lab in h1:
                    coef = Fraction(0)
                    if m2 is not None:
                        coef = m2.get((lab, src.label)).get(tgt.label, Fraction(0))
                    row.append(coef)
                rows.append(row)
    if not rows:
        return TangentSpace("full", h_i, [{lab: Fraction(1)} for lab in h1])
    kernel = linalg.kernel_basis(rows, len(h1))
    basis = [
        {h1[t]: vec[t] for t in range(len(h1)) if vec[t]} for vec in kernel
    ]
    return TangentSpace("kernel", h_i, basis)


# ---------------------------------------------------------------------------
# seeded Maurer-Cartan sampling (single-variable truncated rings)

def sample_mc(
    alg: LInfAlgebra, ring: CoefRing, rng: random.Random, attempts: int = 40,
) -> dict[str, RElem] | None:
    """A random Maurer-Cartan element over Q[e]/(e^N), solved order by order.

    Returns None when the obstruction system is inconsistent for all
    sampled leading terms.
    """
    if ring.kind != "trunc_local" or ring.nvars != 1:
        raise DeformationError("the sampler supports single-variable truncated rings")
    order = ring.order
    h1 = [e.label for e in alg.space.elements if e.deg == 1]
    deg2 = [e.label for e in alg.space.elements if e.deg == 2]
    l1 = alg.brackets.get(1)
    d_cols = []
    for lab in h1:
        vec = l1.get((lab,)) if l1 is not None else {}
        d_cols.append([Fraction(vec.get(t, 0)) for t in deg2])
    d_rows = [[d_cols[j][t] for j in range(len(h1))] for t in range(len(deg2))]
    closed = linalg.kernel_basis(d_rows, len(h1)) if deg2 else [
        [Fraction(1) if i == j else Fraction(0) for i in range(len(h1))]
        for j in range(len(h1))
    ]
    if not closed:
        return None

    for _ in range(attempts):
        # leading term: random combination of closed degree-1 directions
        coefs = [Fraction(0)] * len(h1)
        for vec in closed:
            c = Fraction(rng.randint(-2, 2))
            if c:
                coefs = [a + c * b for a, b in zip(coefs, vec)]
        layers: list[list[Fraction]] = [coefs]
        good = True
        for s in range(2, order):
            omega = _layers_to_vector(ring, h1, layers + [[Fraction(0)] * len(h1)])
            res = mc_residual(alg, ring, omega)
            rhs = [Fraction(0)] * len(deg2)
            for t, lab in enumerate(deg2):
                val = res.get(lab)
                if val is not None:
                    rhs[t] = val.terms.get((s,), Fraction(0))
            if not any(rhs):
                layers.append([Fraction(0)] * len(h1))
                continue
            sol = linalg.in_span(d_cols, [-c for c in rhs])
            if sol is None:
                good = False
                break
            layers.append(list(sol))
        if not good:
            continue
        omega = _layers_to_vector(ring, h1, layers)
        ok, _ = mc_check(alg, ring, omega)
        if ok and any(bool(v) for v in omega.values()):
            return omega
    return None


def _layers_to_vector(ring: CoefRing, labels: list[str], layers) -> dict[str, RElem]:
    out: dict[str, RElem] = {}
    for j, lab in enumerate(labels):
        terms = {}
        for s, layer in enumerate(layers, start=1):
            if layer[j]:
                terms[(s,)] = layer[j]
        val = ring.element(terms)
        if val:
            out[lab] = val
    return out

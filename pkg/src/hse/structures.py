"""A-infinity / L-infinity algebras, modules, pairs, morphisms, and their
identity checkers.

Structure maps are stored sparsely with finite arity support; an absent
arity is the zero map.  Checkers evaluate the defining identities exactly on
every basis tuple whose output degree is populated, and report the full
violation list (sign debugging needs more than a boolean).

The antisymmetric convention throughout is signature times Koszul sign
(``signs.antisym_sign``).  Under the pure-Koszul reading of the sign chi the
commutator bracket of a graded-commutative algebra would not antisymmetrize
to zero, so that reading is rejected; both signs remain available in
``signs``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .grading import GradedSpace, combine_spaces
from .multimap import MultiMap
from .signs import antisym_sign, compositions as _compositions, unshuffles


# ---------------------------------------------------------------------------
# reports

@dataclass(frozen=True)
class Violation:
    arity: int
    inputs: tuple[str, ...]
    residual: dict

    def describe(self) -> str:
        parts = ", ".join(f"{lab}: {c}" for lab, c in sorted(self.residual.items()))
        return f"arity {self.arity} at {self.inputs}: {parts}"


@dataclass(frozen=True)
class CheckReport:
    name: str
    ok: bool
    max_arity: int
    violations: tuple[Violation, ...] = ()
    detail: str = ""

    def first(self) -> Violation | None:
        return self.violations[0] if self.violations else None

    def to_json(self) -> dict:
        return {
            "check": self.name,
            "ok": self.ok,
            "max_arity": self.max_arity,
            "violations": [
                {"arity": v.arity, "inputs": list(v.inputs),
                 "residual": {k: str(c) for k, c in sorted(v.residual.items())}}
                for v in self.violations
            ],
            "detail": self.detail,
        }


class StructureError(ValueError):
    pass


# ---------------------------------------------------------------------------
# structures

class AInfAlgebra:
    """Products nu_n of arity n and shift 2-n; no symmetry imposed."""

    def __init__(self, space: GradedSpace, products: dict[int, MultiMap]):
        self.space = space
        self.products = {n: m for n, m in products.items() if m is not None and not m.is_zero()}
        for n, m in self.products.items():
            if m.arity != n or m.shift != 2 - n:
                raise StructureError(f"product nu_{n} has arity {m.arity}, shift {m.shift}")
            if m.symmetry != "none":
                raise StructureError("A-infinity products carry no symmetry flag")

    def max_arity(self) -> int:
        return max(self.products, default=0)


class LInfAlgebra:
    """Brackets l_n of arity n and shift 2-n, graded antisymmetric."""

    def __init__(self, space: GradedSpace, brackets: dict[int, MultiMap]):
        self.space = space
        self.brackets = {n: m for n, m in brackets.items() if m is not None and not m.is_zero()}
        for n, m in self.brackets.items():
            if m.arity != n or m.shift != 2 - n:
                raise StructureError(f"bracket l_{n} has arity {m.arity}, shift {m.shift}")
            if m.symmetry != "antisym":
                raise StructureError("L-infinity brackets must be antisym maps")

    def max_arity(self) -> int:
        return max(self.brackets, default=0)


class LInfModule:
    """Actions m_n on (n-1) algebra slots and one final module slot.

    ``combined`` is the disjoint union of the algebra and module bases; maps
    are stored over it with symmetry in the algebra slots only.
    """

    def __init__(self, algebra: LInfAlgebra, space: GradedSpace, actions: dict[int, MultiMap]):
        overlap = set(algebra.space.labels()) & set(space.labels())
        if overlap:
            raise StructureError(f"algebra and module labels overlap: {sorted(overlap)}")
        self.algebra = algebra
        self.space = space
        self.combined = combine_spaces(algebra.space, space)
        self.actions = {n: m for n, m in actions.items() if m is not None and not m.is_zero()}
        for n, m in self.actions.items():
            if m.arity != n or m.shift != 2 - n:
                raise StructureError(f"action m_{n} has arity {m.arity}, shift {m.shift}")
            if n > 1 and m.symmetry != "antisym_algebra":
                raise StructureError("module actions must be antisym in algebra slots")

    def max_arity(self) -> int:
        return max(max(self.actions, default=0), self.algebra.max_arity())


@dataclass
class LInfPair:
    algebra: LInfAlgebra
    module: LInfModule

    def __post_init__(self):
        if self.module.algebra is not self.algebra:
            raise StructureError("pair module must be a module over the pair algebra")


class InfMorphism:
    """Components f_k of shift 1-k between structures of matching kind."""

    def __init__(self, kind: str, source, target, components: dict[int, MultiMap]):
        if kind not in ("ainf", "linf", "module"):
            raise StructureError(f"unknown morphism kind {kind!r}")
        self.kind = kind
        self.source = source
        self.target = target
        self.components = {k: m for k, m in components.items() if m is not None and not m.is_zero()}
        for k, m in self.components.items():
            if m.arity != k or m.shift != 1 - k:
                raise StructureError(f"component f_{k} has arity {m.arity}, shift {m.shift}")

    def max_arity(self) -> int:
        return max(self.components, default=0)


# ---------------------------------------------------------------------------
# tuple enumeration

def _feasible_sums(space: GradedSpace, arity: int, shift: int) -> set[int]:
    """Input degree totals whose identity output degree is populated."""
    return {d - shift for d in space.degrees()}


def iter_tuples(space: GradedSpace, arity: int, sums: set[int]):
    """All label tuples with total degree in sums, degree-pruned."""
    elements = space.elements
    if not elements or not sums:
        return
    degs = sorted({e.deg for e in elements})
    dmin, dmax = degs[0], degs[-1]
    smin, smax = min(sums), max(sums)
    labels = [(e.label, e.deg) for e in elements]

    def rec(slot: int, prefix: tuple[str, ...], total: int):
        remaining = arity - slot
        if remaining == 0:
            if total in sums:
                yield prefix
            return
        if total + remaining * dmin > smax or total + remaining * dmax < smin:
            return
        for lab, d in labels:
            yield from rec(slot + 1, prefix + (lab,), total + d)

    yield from rec(0, (), 0)


def iter_sorted_tuples(space: GradedSpace, arity: int, sums: set[int]):
    """Nondecreasing tuples (by basis order), skipping repeated even labels.

    Sufficient for identities that are graded antisymmetric in all slots:
    values elsewhere follow formally by the sign rules.
    """
    elements = space.elements
    n = len(elements)
    if not elements or not sums:
        return
    degs = [e.deg for e in elements]
    dmin, dmax = min(degs), max(degs)
    smin, smax = min(sums), max(sums)

    def rec(slot: int, start: int, prefix: tuple[str, ...], total: int, last: int):
        remaining = arity - slot
        if remaining == 0:
            if total in sums:
                yield prefix
            return
        if total + remaining * dmin > smax or total + remaining * dmax < smin:
            return
        for i in range(start, n):
            e = elements[i]
            if i == last and e.deg % 2 == 0:
                continue  # repeated even label: identity vanishes formally
            yield from rec(slot + 1, i, prefix + (e.label,), total + e.deg, i)

    yield from rec(0, 0, (), 0, -1)


# ---------------------------------------------------------------------------
# residuals

def _accumulate(acc: dict, vec: dict, factor) -> None:
    for lab, c in vec.items():
        total = acc.get(lab, 0) + factor * c
        if total:
            acc[lab] = total
        else:
            acc.pop(lab, None)


def stasheff_residual(products: dict[int, MultiMap], space: GradedSpace,
                      T: tuple[str, ...]) -> dict:
    """Sum over p+q+r=n of (-1)^(p+qr) nu_{p+r+1}(1^p x nu_q x 1^r) at T."""
    n = len(T)
    degs = [space.deg(l) for l in T]
    acc: dict = {}
    for q in range(1, n + 1):
        inner = products.get(q)
        if inner is None:
            continue
        for p in range(0, n - q + 1):
            r = n - q - p
            outer = products.get(p + r + 1)
            if outer is None:
                continue
            sign = -1 if (p + q * r) % 2 else 1
            if q % 2 and sum(degs[:p]) % 2:
                sign = -sign  # nu_q crossing the first p inputs
            row, s0 = inner.get_ref(T[p:p + q])
            if row is None:
                continue
            for mid, c in row.items():
                out_vec = outer.get(T[:p] + (mid,) + T[p + q:])
                if out_vec:
                    _accumulate(acc, out_vec, sign * s0 * c)
    return acc


def jacobi_residual(brackets: dict[int, MultiMap], space: GradedSpace,
                    T: tuple[str, ...]) -> dict:
    """Sum over (i,j,sigma) of chi(sigma) (-1)^(i(j-1)) l_j(l_i x 1^(j-1)) at T."""
    n = len(T)
    degs = tuple(space.deg(l) for l in T)
    acc: dict = {}
    for i in range(1, n + 1):
        j = n + 1 - i
        inner = brackets.get(i)
        outer = brackets.get(j)
        if inner is None or outer is None:
            continue
        for sigma in unshuffles(i, n):
            chi = antisym_sign(sigma, degs)
            sign = chi if (i * (j - 1)) % 2 == 0 else -chi
            Ts = tuple(T[k] for k in sigma)
            row, s0 = inner.get_ref(Ts[:i])
            if row is None:
                continue
            for mid, c in row.items():
                out_vec = outer.get((mid,) + Ts[i:])
                if out_vec:
                    _accumulate(acc, out_vec, sign * s0 * c)
    return acc


def module_residual(module: LInfModule, T: tuple[str, ...]) -> dict:
    """Module identity residual at T = (algebra..., module-last).

    Convention split: when sigma(i) = n the inner map takes the module
    element and the term is rotated with the kappa sign; when sigma(n) = n
    the inner map is the algebra bracket l_i.
    """
    n = len(T)
    space = module.combined
    degs = tuple(space.deg(l) for l in T)
    acc: dict = {}
    last = n - 1
    for i in range(1, n + 1):
        j = n + 1 - i
        for sigma in unshuffles(i, n):
            chi = antisym_sign(sigma, degs)
            base = chi if (i * (j - 1)) % 2 == 0 else -chi
            Ts = tuple(T[k] for k in sigma)
            if sigma[i - 1] == last:
                inner = module.actions.get(i)
                outer = module.actions.get(j)
                if inner is None or outer is None:
                    continue
                head = sum(degs[k] for k in sigma[:i])
                tail = sum(degs[k] for k in sigma[i:])
                kappa = -1 if (j - 1) % 2 else 1
                if (i + head) % 2 and tail % 2:
                    kappa = -kappa
                row, s0 = inner.get_ref(Ts[:i])
                if row is None:
                    continue
                for mid, c in row.items():
                    out_vec = outer.get(Ts[i:] + (mid,))
                    if out_vec:
                        _accumulate(acc, out_vec, base * kappa * s0 * c)
            else:
                inner = module.algebra.brackets.get(i)
                outer = module.actions.get(j)
                if inner is None or outer is None:
                    continue
                row, s0 = inner.get_ref(Ts[:i])
                if row is None:
                    continue
                for mid, c in row.items():
                    out_vec = outer.get((mid,) + Ts[i:])
                    if out_vec:
                        _accumulate(acc, out_vec, base * s0 * c)
    return acc


# ---------------------------------------------------------------------------
# checkers

def stasheff_check(alg: AInfAlgebra, max_arity: int) -> CheckReport:
    violations = []
    for n in range(1, max_arity + 1):
        sums = _feasible_sums(alg.space, n, 3 - n)
        for T in iter_tuples(alg.space, n, sums):
            res = stasheff_residual(alg.products, alg.space, T)
            if res:
                violations.append(Violation(n, T, res))
    return CheckReport("stasheff", not violations, max_arity, tuple(violations))


def jacobi_check(alg: LInfAlgebra, max_arity: int) -> CheckReport:
    violations = []
    for n in range(1, max_arity + 1):
        sums = _feasible_sums(alg.space, n, 3 - n)
        for T in iter_sorted_tuples(alg.space, n, sums):
            res = jacobi_residual(alg.brackets, alg.space, T)
            if res:
                violations.append(Violation(n, T, res))
    return CheckReport("jacobi", not violations, max_arity, tuple(violations))


def module_check(module: LInfModule, max_arity: int) -> CheckReport:
    violations = []
    alg_space = module.algebra.space
    for n in range(1, max_arity + 1):
        out_degs = set(module.space.degrees())
        for xi in module.space.elements:
            sums = {d - (3 - n) - xi.deg for d in out_degs}
            if n == 1:
                T = (xi.label,)
                res = module_residual(module, T)
                if res:
                    violations.append(Violation(n, T, res))
                continue
            for Ta in iter_sorted_tuples(alg_space, n - 1, sums):
                T = Ta + (xi.label,)
                res = module_residual(module, T)
                if res:
                    violations.append(Violation(n, T, res))
    return CheckReport("module", not violations, max_arity, tuple(violations))


def _ainf_morphism_residual(mor: InfMorphism, T: tuple[str, ...]) -> dict:
    src: AInfAlgebra = mor.source
    tgt: AInfAlgebra = mor.target
    space = src.space
    n = len(T)
    degs = [space.deg(l) for l in T]
    acc: dict = {}
    # left side: f_{p+r+1} (1^p x nu_q x 1^r)
    for q in range(1, n + 1):
        inner = src.products.get(q)
        if inner is None:
            continue
        for p in range(0, n - q + 1):
            r = n - q - p
            comp = mor.components.get(p + r + 1)
            if comp is None:
                continue
            sign = -1 if (p + q * r) % 2 else 1
            if q % 2 and sum(degs[:p]) % 2:
                sign = -sign
            row, s0 = inner.get_ref(T[p:p + q])
            if row is None:
                continue
            for mid, c in row.items():
                out_vec = comp.get(T[:p] + (mid,) + T[p + q:])
                if out_vec:
                    _accumulate(acc, out_vec, sign * s0 * c)
    # right side, subtracted: nu'_k (f_{i_1} x ... x f_{i_k})
    for k in range(1, n + 1):
        target_map = tgt.products.get(k)
        if target_map is None:
            continue
        for comp_profile in _compositions(n, k):
            comps = [mor.components.get(i) for i in comp_profile]
            if any(c is None for c in comps):
                continue
            eps = 0
            for t, it in enumerate(comp_profile):
                eps += (k - t - 1) * (it - 1)
            sign = -1 if eps % 2 else 1
            # Koszul: factor t (degree 1-i_t) crosses earlier raw inputs
            _rhs_blocks(acc, target_map, comps, comp_profile, T, degs, -sign)
    return acc


def _rhs_blocks(acc, target_map, comps, profile, T, degs, factor):
    """Accumulate factor * nu'(f_{i_1}(block_1), ...) over consecutive blocks."""
    k = len(profile)
    offsets = [0]
    for size in profile:
        offsets.append(offsets[-1] + size)

    def rec(t: int, mids: tuple[str, ...], coef):
        if t == k:
            vec = target_map.get(mids)
            if vec:
                _accumulate(acc, vec, coef)
            return
        block = T[offsets[t]:offsets[t + 1]]
        row, s0 = comps[t].get_ref(block)
        if row is None:
            return
        sign = 1
        if (1 + profile[t]) % 2 and sum(degs[:offsets[t]]) % 2:
            sign = -1
        for mid, c in row.items():
            rec(t + 1, mids + (mid,), coef * sign * s0 * c)

    rec(0, (), factor)


def _linf_morphism_residual(mor: InfMorphism, T: tuple[str, ...]) -> dict:
    src: LInfAlgebra = mor.source
    tgt: LInfAlgebra = mor.target
    space = src.space
    n = len(T)
    degs = tuple(space.deg(l) for l in T)
    acc: dict = {}
    for i in range(1, n + 1):
        j = n + 1 - i
        inner = src.brackets.get(i)
        comp = mor.components.get(j)
        if inner is None or comp is None:
            continue
        for sigma in unshuffles(i, n):
            chi = antisym_sign(sigma, degs)
            sign = chi if (i * (j - 1)) % 2 == 0 else -chi
            Ts = tuple(T[k] for k in sigma)
            row, s0 = inner.get_ref(Ts[:i])
            if row is None:
                continue
            for mid, c in row.items():
                out_vec = comp.get((mid,) + Ts[i:])
                if out_vec:
                    _accumulate(acc, out_vec, sign * s0 * c)
    # right side: blocks with increasing minima, sign epsilon and Koszul crossings
    for j in range(1, n + 1):
        target_map = tgt.brackets.get(j)
        if target_map is None:
            continue
        for profile in _compositions(n, j):
            comps = [mor.components.get(kt) for kt in profile]
            if any(c is None for c in comps):
                continue
            eps = 0
            for t, kt in enumerate(profile):
                eps += (j - t - 1) * (kt - 1)
            base = -1 if eps % 2 else 1
            _linf_rhs_partitions(acc, target_map, comps, profile, T, degs, -base)
    return acc


def _linf_rhs_partitions(acc, target_map, comps, profile, T, degs, factor):
    """Blocks of the given sizes with increasing minima and increasing insides."""
    n = len(T)
    j = len(profile)

    def rec(t: int, remaining: tuple[int, ...], mids: tuple[str, ...],
            perm: tuple[int, ...], coef):
        if t == j:
            chi = antisym_sign(perm, degs)
            vec = target_map.get(mids)
            if vec:
                _accumulate(acc, vec, coef * chi)
            return
        size = profile[t]
        # block must contain the smallest remaining index to normalize order
        head = remaining[0]
        for rest_block in combinations(remaining[1:], size - 1):
            block = (head,) + rest_block
            labels = tuple(T[p] for p in block)
            row, s0 = comps[t].get_ref(labels)
            if row is None:
                continue
            sign = 1
            if (1 + size) % 2 and sum(degs[p] for p in perm) % 2:
                sign = -1
            new_remaining = tuple(x for x in remaining if x not in block)
            for mid, c in row.items():
                rec(t + 1, new_remaining, mids + (mid,), perm + block,
                    coef * sign * s0 * c)

    rec(0, tuple(range(n)), (), (), factor)


def _module_morphism_residual(mor: InfMorphism, T: tuple[str, ...]) -> dict:
    """Module-morphism identity over a fixed algebra (identity on L).

    Left side follows the module convention split; on the right the module
    element's block feeds the last slot of the target action and all other
    blocks are forced to size one through the identity of L.
    """
    src: LInfModule = mor.source
    tgt: LInfModule = mor.target
    space = src.combined
    n = len(T)
    degs = tuple(space.deg(l) for l in T)
    last = n - 1
    acc: dict = {}
    for i in range(1, n + 1):
        j = n + 1 - i
        comp = mor.components.get(j)
        if comp is None:
            continue
        for sigma in unshuffles(i, n):
            chi = antisym_sign(sigma, degs)
            base = chi if (i * (j - 1)) % 2 == 0 else -chi
            Ts = tuple(T[k] for k in sigma)
            if sigma[i - 1] == last:
                inner = src.actions.get(i)
                if inner is None:
                    continue
                head = sum(degs[k] for k in sigma[:i])
                tail = sum(degs[k] for k in sigma[i:])
                kappa = -1 if (j - 1) % 2 else 1
                if (i + head) % 2 and tail % 2:
                    kappa = -kappa
                row, s0 = inner.get_ref(Ts[:i])
                if row is None:
                    continue
                for mid, c in row.items():
                    out_vec = comp.get(Ts[i:] + (mid,))
                    if out_vec:
                        _accumulate(acc, out_vec, base * kappa * s0 * c)
            else:
                inner = src.algebra.brackets.get(i)
                if inner is None:
                    continue
                row, s0 = inner.get_ref(Ts[:i])
                if row is None:
                    continue
                for mid, c in row.items():
                    out_vec = comp.get((mid,) + Ts[i:])
                    if out_vec:
                        _accumulate(acc, out_vec, base * s0 * c)
    # right side: m'_j(xi_{tau(1)}, ..., f_k(module block))
    for k in range(1, n + 1):
        comp = mor.components.get(k)
        if comp is None:
            continue
        j = n - k + 1
        outer = tgt.actions.get(j)
        if outer is None:
            continue
        for others in combinations(range(n - 1), k - 1):
            block = others + (last,)
            singles = tuple(p for p in range(n - 1) if p not in others)
            perm = singles + block
            chi = antisym_sign(perm, degs)
            sign = 1
            if (1 + k) % 2 and sum(degs[p] for p in singles) % 2:
                sign = -1
            row, s0 = comp.get_ref(tuple(T[p] for p in block))
            if row is None:
                continue
            labels_single = tuple(T[p] for p in singles)
            for mid, c in row.items():
                out_vec = outer.get(labels_single + (mid,))
                if out_vec:
                    _accumulate(acc, out_vec, -chi * sign * s0 * c)
    return acc


def morphism_check(mor: InfMorphism, max_arity: int) -> CheckReport:
    violations = []
    if mor.kind == "ainf":
        space = mor.source.space
        residual = lambda T: _ainf_morphism_residual(mor, T)
        iterator = lambda n, sums: iter_tuples(space, n, sums)
        tgt_space = mor.target.space
    elif mor.kind == "linf":
        space = mor.source.space
        residual = lambda T: _linf_morphism_residual(mor, T)
        iterator = lambda n, sums: iter_sorted_tuples(space, n, sums)
        tgt_space = mor.target.space
    else:
        src: LInfModule = mor.source
        if src.algebra is not mor.target.algebra:
            raise StructureError("module morphism endpoints must share the algebra")
        space = src.combined
        tgt_space = mor.target.space
        residual = lambda T: _module_morphism_residual(mor, T)

        def iterator(n, sums):
            for xi in src.space.elements:
                if n == 1:
                    yield (xi.label,)
                    continue
                sub = {s - xi.deg for s in sums}
                for Ta in iter_sorted_tuples(src.algebra.space, n - 1, sub):
                    yield Ta + (xi.label,)

    for n in range(1, max_arity + 1):
        sums = {d - (2 - n) for d in tgt_space.degrees()}
        for T in iterator(n, sums):
            res = residual(T)
            if res:
                violations.append(Violation(n, T, res))
    return CheckReport(f"morphism-{mor.kind}", not violations, max_arity, tuple(violations))


# ---------------------------------------------------------------------------
# constructions

def antisymmetrize(alg: AInfAlgebra, check_arity: int | None = None) -> LInfAlgebra:
    """The A-oo to L-oo functor: l_n = sum over permutations of chi . nu_n."""
    from .multimap import antisymmetrization

    if check_arity is not None:
        rep = stasheff_check(alg, check_arity)
        if not rep.ok:
            raise StructureError(f"antisymmetrize: input fails Stasheff: {rep.first().describe()}")
    brackets = {n: antisymmetrization(m) for n, m in alg.products.items()}
    out = LInfAlgebra(alg.space, brackets)
    if check_arity is not None:
        rep = jacobi_check(out, check_arity)
        if not rep.ok:
            raise StructureError(f"antisymmetrize: output fails Jacobi: {rep.first().describe()}")
    return out


def antisymmetrize_morphism(
    mor: InfMorphism, source_l: LInfAlgebra, target_l: LInfAlgebra,
) -> InfMorphism:
    """The A-oo to L-oo functor on morphisms: each component is summed over
    permutations with the antisym sign, between the antisymmetrized
    endpoints."""
    from .multimap import antisymmetrization

    comps = {k: antisymmetrization(m) for k, m in mor.components.items()}
    comps = {k: m for k, m in comps.items() if not m.is_zero()}
    return InfMorphism("linf", source_l, target_l, comps)


@dataclass(frozen=True)
class PairEmbedding:
    """Bookkeeping for an L (+) M algebra: which labels form each block."""
    algebra_labels: tuple[str, ...]
    module_labels: tuple[str, ...]
    algebra_space: GradedSpace
    module_space: GradedSpace


def pair_to_algebra(pair: LInfPair) -> tuple[LInfAlgebra, PairEmbedding]:
    """The canonical L-infinity structure on L (+) M.

    Stored canonically: all-algebra entries are the brackets, entries with
    the module element last are the actions; every other ordering follows by
    graded antisymmetry, which reproduces exactly the displayed sign
    (-1)^(n - i + |xi_i| sum |a_k|) of the construction.
    """
    alg = pair.algebra
    mod = pair.module
    combined = mod.combined
    maps: dict[int, MultiMap] = {}
    arities = set(alg.brackets) | set(mod.actions)
    for n in arities:
        j = MultiMap(combined, combined, n, 2 - n, "antisym")
        ln = alg.brackets.get(n)
        if ln is not None:
            for key, row in ln.entries():
                for lab, c in row.items():
                    j.add(key, lab, c)
        mn = mod.actions.get(n)
        if mn is not None:
            for key, row in mn.entries():
                for lab, c in row.items():
                    j.add(key, lab, c)
        maps[n] = j
    emb = PairEmbedding(
        tuple(alg.space.labels()), tuple(mod.space.labels()), alg.space, mod.space
    )
    return LInfAlgebra(combined, maps), emb


def algebra_to_module(alg: LInfAlgebra, emb: PairEmbedding) -> LInfPair:
    """Recover the pair from an L (+) M algebra; errors if the splitting is
    not respected (mixed entries that cannot belong to a pair structure)."""
    alg_set = set(emb.algebra_labels)
    mod_set = set(emb.module_labels)
    brackets: dict[int, MultiMap] = {}
    actions: dict[int, MultiMap] = {}
    base_alg_space = alg.space.restricted_to(alg_set)
    base_mod_space = alg.space.restricted_to(mod_set)

    for n, j in alg.brackets.items():
        ln = MultiMap(base_alg_space, base_alg_space, n, 2 - n, "antisym")
        mn = MultiMap(combine_spaces(base_alg_space, base_mod_space), base_mod_space,
                      n, 2 - n, "antisym_algebra" if n > 1 else "none")
        for key, row in j.entries():
            n_mod = sum(1 for l in key if l in mod_set)
            if n_mod == 0:
                for lab, c in row.items():
                    if lab in mod_set:
                        raise StructureError(
                            f"splitting not respected: algebra inputs {key} hit module output {lab}")
                    ln.add(key, lab, c)
            elif n_mod == 1:
                if key[-1] not in mod_set:
                    raise StructureError(
                        f"splitting not respected: canonical key {key} has interior module slot")
                for lab, c in row.items():
                    if lab in alg_set:
                        raise StructureError(
                            f"splitting not respected: module input {key} hits algebra output {lab}")
                    mn.add(key, lab, c)
            else:
                if row:
                    raise StructureError(
                        f"splitting not respected: {key} has {n_mod} module slots with nonzero value")
        if not ln.is_zero():
            brackets[n] = ln
        if not mn.is_zero():
            actions[n] = mn
    algebra = LInfAlgebra(base_alg_space, brackets)
    module = LInfModule(algebra, base_mod_space, actions)
    return LInfPair(algebra, module)


def morphism_pair_to_algebra(
    f: InfMorphism, g: InfMorphism, src_emb: PairEmbedding, tgt_emb: PairEmbedding,
    src_alg: LInfAlgebra, tgt_alg: LInfAlgebra,
) -> InfMorphism:
    """(f (+) g): components are f on all-algebra tuples, g with module last."""
    comps: dict[int, MultiMap] = {}
    for n in set(f.components) | set(g.components):
        mm = MultiMap(src_alg.space, tgt_alg.space, n, 1 - n, "antisym")
        fn = f.components.get(n)
        if fn is not None:
            for key, row in fn.entries():
                for lab, c in row.items():
                    mm.add(key, lab, c)
        gn = g.components.get(n)
        if gn is not None:
            for key, row in gn.entries():
                for lab, c in row.items():
                    mm.add(key, lab, c)
        comps[n] = mm
    return InfMorphism("linf", src_alg, tgt_alg, comps)


def morphism_algebra_to_pair(
    mor: InfMorphism, src_emb: PairEmbedding, tgt_emb: PairEmbedding,
    src_pair: LInfPair, tgt_pair: LInfPair,
) -> tuple[InfMorphism, InfMorphism]:
    """Split an L (+) M morphism back into its algebra and module components."""
    src_mod_set = set(src_emb.module_labels)
    tgt_mod_set = set(tgt_emb.module_labels)
    f_comps: dict[int, MultiMap] = {}
    g_comps: dict[int, MultiMap] = {}
    for n, comp in mor.components.items():
        fn = MultiMap(src_pair.algebra.space, tgt_pair.algebra.space, n, 1 - n, "antisym")
        gn = MultiMap(src_pair.module.combined, tgt_pair.module.space, n, 1 - n,
                      "antisym_algebra" if n > 1 else "none")
        for key, row in comp.entries():
            n_mod = sum(1 for l in key if l in src_mod_set)
            if n_mod == 0:
                for lab, c in row.items():
                    if lab not in tgt_mod_set:
                        fn.add(key, lab, c)
            elif n_mod == 1 and key[-1] in src_mod_set:
                for lab, c in row.items():
                    if lab in tgt_mod_set:
                        gn.add(key, lab, c)
        if not fn.is_zero():
            f_comps[n] = fn
        if not gn.is_zero():
            g_comps[n] = gn
    f = InfMorphism("linf", src_pair.algebra, tgt_pair.algebra, f_comps)
    g = InfMorphism("module", src_pair.module, tgt_pair.module, g_comps)
    return f, g

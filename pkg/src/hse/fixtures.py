"""Desk-scale fixtures: exterior algebras, the Heisenberg cdga, seeded
random cdgas, and small dgla pairs.

Random cdgas are built quotient-free from a two-layer generator pattern:
closed degree-1 generators, plus generators whose differential is a random
combination of products of closed ones.  d^2 = 0 and associativity then
hold by construction, no completion step needed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .grading import BasisElement, GradedSpace, combine_spaces, prefix_space
from .multimap import MultiMap
from .structures import AInfAlgebra, LInfAlgebra, LInfModule, LInfPair, StructureError


@dataclass(frozen=True)
class FixtureDescriptor:
    name: str
    seed: int = 0
    dims: tuple[int, ...] = ()
    weights: bool = False


class Cdga:
    """A finite graded-commutative dga presented by monomials in generators.

    Monomials are sorted generator index tuples (odd generators never
    repeat); the label of a monomial is the concatenation of the generator
    names, "1" for the unit.
    """

    def __init__(self, gens: list[tuple[str, int, int | None]], max_degree: int,
                 differentials: dict[str, list[tuple[Fraction, tuple[int, ...]]]] | None = None):
        # gens: (name, degree, weight or None)
        self.gens = gens
        self.max_degree = max_degree
        self.monomials = self._enumerate_monomials()
        weighted = any(w is not None for _, _, w in gens)
        elements = []
        for mono in self.monomials:
            deg = sum(gens[i][1] for i in mono)
            weight = sum(gens[i][2] for i in mono) if weighted else None
            elements.append(BasisElement(self.label(mono), deg, weight))
        self.space = GradedSpace(elements)
        self.differentials = differentials or {}
        self._monoset = set(self.monomials)

    def _enumerate_monomials(self) -> list[tuple[int, ...]]:
        # odd generators square to zero; even ones repeat within the window
        monos = [()]
        for i, (_, deg, _) in enumerate(self.gens):
            max_power = 1 if deg % 2 else self.max_degree // max(deg, 1)
            new = []
            for m in monos:
                total = sum(self.gens[k][1] for k in m)
                for power in range(0, max_power + 1):
                    if total + power * deg <= self.max_degree:
                        new.append(m + (i,) * power)
            monos = new
        return sorted(monos, key=lambda m: (sum(self.gens[k][1] for k in m), m))

    def label(self, mono: tuple[int, ...]) -> str:
        if not mono:
            return "1"
        return "".join(self.gens[i][0] for i in mono)

    def mono_of_label(self, label: str) -> tuple[int, ...]:
        for m in self.monomials:
            if self.label(m) == label:
                return m
        raise KeyError(label)

    def multiply_monos(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[Fraction, tuple[int, ...]] | None:
        """Graded-commutative product of two monomials, or None if it dies."""
        merged = list(a) + list(b)
        sign = 1
        # bubble-sort by generator index, tracking odd crossings
        arr = merged[:]
        degof = lambda i: self.gens[i][1]
        for i in range(len(arr)):
            for j in range(len(arr) - 1, i, -1):
                if arr[j - 1] > arr[j]:
                    if degof(arr[j - 1]) % 2 and degof(arr[j]) % 2:
                        sign = -sign
                    arr[j - 1], arr[j] = arr[j], arr[j - 1]
        for u, v in zip(arr, arr[1:]):
            if u == v and degof(u) % 2:
                return None  # odd square
        mono = tuple(arr)
        if mono not in self._monoset:
            return None
        return Fraction(sign), mono

    def product_map(self) -> MultiMap:
        mm = MultiMap(self.space, self.space, 2, 0)
        for a in self.monomials:
            for b in self.monomials:
                res = self.multiply_monos(a, b)
                if res is None:
                    continue
                coef, mono = res
                mm.add((self.label(a), self.label(b)), self.label(mono), coef)
        return mm

    def differential_map(self) -> MultiMap:
        """Extend the generator differentials by the graded Leibniz rule."""
        mm = MultiMap(self.space, self.space, 1, 1)
        for mono in self.monomials:
            image = self._d_mono(mono)
            for coef, target in image:
                mm.add((self.label(mono),), self.label(target), coef)
        return mm

    def _d_mono(self, mono: tuple[int, ...]) -> list[tuple[Fraction, tuple[int, ...]]]:
        out: list[tuple[Fraction, tuple[int, ...]]] = []
        for pos, gi in enumerate(mono):
            dg = self.differentials.get(self.gens[gi][0])
            if not dg:
                continue
            # Leibniz sign: d crosses the first `pos` factors
            sign = 1
            for k in mono[:pos]:
                if self.gens[k][1] % 2:
                    sign = -sign
            rest = mono[:pos] + mono[pos + 1:]
            for coef, dmono in dg:
                left = self._mono_times(dmono, rest, pos)
                if left is not None:
                    c2, m2 = left
                    out.append((coef * sign * c2, m2))
        # merge duplicates
        acc: dict[tuple[int, ...], Fraction] = {}
        for c, m in out:
            acc[m] = acc.get(m, Fraction(0)) + c
        return [(c, m) for m, c in acc.items() if c]

    def _mono_times(self, dmono: tuple[int, ...], rest: tuple[int, ...], pos: int):
        # product dmono * rest, but dmono replaces position `pos`; reuse the
        # commutative multiply after splitting rest around pos
        head = rest[:pos]
        tail = rest[pos:]
        first = self.multiply_monos(head, dmono)
        if first is None:
            return None
        c1, m1 = first
        second = self.multiply_monos(m1, tail)
        if second is None:
            return None
        c2, m2 = second
        return c1 * c2, m2

    def ainf(self) -> AInfAlgebra:
        products = {2: self.product_map()}
        d = self.differential_map()
        if not d.is_zero():
            products[1] = d
        return AInfAlgebra(self.space, products)


def exterior_cdga(n: int, weights: bool = False) -> Cdga:
    """The exterior algebra on n degree-1 generators, zero differential."""
    names = ["x", "y", "z", "u", "v", "w"][:n] if n <= 6 else [f"e{i}" for i in range(1, n + 1)]
    gens = [(name, 1, 1 if weights else None) for name in names]
    return Cdga(gens, n)


def heisenberg_cdga(weights: bool = False) -> Cdga:
    """Lambda(x, y, z) with dz = xy; cohomology dims (1, 2, 2, 1)."""
    gens = [
        ("x", 1, 1 if weights else None),
        ("y", 1, 1 if weights else None),
        ("z", 1, 2 if weights else None),
    ]
    return Cdga(gens, 3, {"z": [(Fraction(1), (0, 1))]})


def weight_zero_offender_cdga() -> Cdga:
    """Exterior on two generators, one of weight zero in degree 1."""
    gens = [("x", 1, 0), ("y", 1, 1)]
    return Cdga(gens, 2)


def random_cdga(seed: int, dims: tuple[int, ...] | None = None) -> Cdga:
    """Seeded two-layer cdga; dims, when given, must match the generated
    monomial dimensions (raises otherwise).

    With three or more generators the split is biased so that at least one
    generator carries a nonzero differential (nonformal, Massey-bearing
    fixtures); two-generator requests are necessarily formal.
    """
    rng = random.Random(seed)
    k = dims[1] if dims and len(dims) > 1 else rng.choice([3, 3, 2])
    max_degree = (len(dims) - 1) if dims else 3
    names = [f"g{i}" for i in range(1, k + 1)]
    gens = [(name, 1, None) for name in names]
    differentials: dict[str, list[tuple[Fraction, tuple[int, ...]]]] = {}
    if k >= 3 and max_degree >= 2:
        n_closed = rng.randint(2, k - 1)
        pair_pool = list(combinations(range(n_closed), 2))
        for gi in range(n_closed, k):
            terms = []
            while not terms:
                terms = [
                    (Fraction(c), pair)
                    for pair in pair_pool
                    for c in [rng.choice([-2, -1, 0, 1, 1, 2])]
                    if c
                ]
            differentials[names[gi]] = terms
    alg = Cdga(gens, max_degree, differentials)
    if dims is not None:
        actual = tuple(alg.space.dim(d) for d in range(len(dims)))
        if actual != tuple(dims):
            raise StructureError(f"unsatisfiable dims: requested {dims}, generated {actual}")
    return alg


# ---------------------------------------------------------------------------
# pairs and dglas

def cdga_zero_bracket_dgla(alg: Cdga, prefix: str = "a.") -> LInfAlgebra:
    """A cdga viewed as a dgla: the commutator bracket vanishes, so only the
    differential survives."""
    space = prefix_space(alg.space, prefix)
    d = alg.differential_map()
    brackets: dict[int, MultiMap] = {}
    if not d.is_zero():
        l1 = MultiMap(space, space, 1, 1, "antisym")
        for key, row in d.entries():
            for lab, c in row.items():
                l1.add((prefix + key[0],), prefix + lab, c)
        brackets[1] = l1
    return LInfAlgebra(space, brackets)


def cdga_pair(alg: Cdga) -> LInfPair:
    """The dgl pair (A, A): zero bracket, module action by multiplication."""
    return ainf_cdga_pair(alg.ainf())


def ainf_cdga_pair(alg: AInfAlgebra) -> LInfPair:
    """The dgl pair (A, A) of a commutative dga given as structure constants.

    The zero-bracket reading is only valid for graded-commutative products;
    the module identity check at arity 3 enforces that.
    """
    from .structures import module_check

    if set(alg.products) - {1, 2}:
        raise StructureError("pair construction expects a dga (nu_1, nu_2 only)")
    a_space = prefix_space(alg.space, "a.")
    m_space = prefix_space(alg.space, "m.")
    d = alg.products.get(1)
    brackets: dict[int, MultiMap] = {}
    if d is not None:
        l1 = MultiMap(a_space, a_space, 1, 1, "antisym")
        for key, row in d.entries():
            for lab, c in row.items():
                l1.add(("a." + key[0],), "a." + lab, c)
        brackets[1] = l1
    algebra = LInfAlgebra(a_space, brackets)
    combined = combine_spaces(a_space, m_space)
    actions: dict[int, MultiMap] = {}
    if d is not None:
        m1 = MultiMap(combined, m_space, 1, 1, "none")
        for key, row in d.entries():
            for lab, c in row.items():
                m1.add(("m." + key[0],), "m." + lab, c)
        actions[1] = m1
    prod = alg.products.get(2)
    if prod is not None:
        m2 = MultiMap(combined, m_space, 2, 0, "antisym_algebra")
        for key, row in prod.entries():
            for lab, c in row.items():
                m2.add(("a." + key[0], "m." + key[1]), "m." + lab, c)
        actions[2] = m2
    module = LInfModule(algebra, m_space, actions)
    rep = module_check(module, 3)
    if not rep.ok:
        raise StructureError(
            "zero-bracket pair needs a graded-commutative product: "
            + rep.first().describe())
    return LInfPair(algebra, module)


def heisenberg_lie_dgla() -> LInfAlgebra:
    """The 3-dimensional Heisenberg Lie algebra in degree 0, zero differential."""
    space = GradedSpace([
        BasisElement("E", 0), BasisElement("F", 0), BasisElement("Z", 0),
    ])
    l2 = MultiMap(space, space, 2, 0, "antisym")
    l2.add(("E", "F"), "Z", Fraction(1))
    return LInfAlgebra(space, {2: l2})


def solvable_dgla() -> LInfAlgebra:
    """Two-dimensional dgla with [e, f] = f, e in degree 0 and f in degree 1."""
    space = GradedSpace([BasisElement("e", 0), BasisElement("f", 1)])
    l2 = MultiMap(space, space, 2, 0, "antisym")
    l2.add(("e", "f"), "f", Fraction(1))
    return LInfAlgebra(space, {2: l2})


def affine_plane_dgla() -> LInfAlgebra:
    """Abelian degree-0 part acting on a 2-dim degree-1 part: [e1, f_i] = f_i
    and [e2, f1] = f2; a 4-dim dgla with a rich gauge action."""
    space = GradedSpace([
        BasisElement("e1", 0), BasisElement("e2", 0),
        BasisElement("f1", 1), BasisElement("f2", 1),
    ])
    l2 = MultiMap(space, space, 2, 0, "antisym")
    l2.add(("e1", "f1"), "f1", Fraction(1))
    l2.add(("e1", "f2"), "f2", Fraction(1))
    l2.add(("e2", "f1"), "f2", Fraction(1))
    return LInfAlgebra(space, {2: l2})


def adjoint_pair(alg: LInfAlgebra, prefix: str = "ad.") -> LInfPair:
    """A dgla acting on a relabeled copy of itself by the bracket."""
    if alg.max_arity() > 2:
        raise StructureError("adjoint pair fixture expects a dgla")
    mod_space = prefix_space(alg.space, prefix)
    combined = combine_spaces(alg.space, mod_space)
    actions: dict[int, MultiMap] = {}
    l1 = alg.brackets.get(1)
    if l1 is not None:
        m1 = MultiMap(combined, mod_space, 1, 1, "none")
        for key, row in l1.entries():
            for lab, c in row.items():
                m1.add((prefix + key[0],), prefix + lab, c)
        actions[1] = m1
    l2 = alg.brackets.get(2)
    if l2 is not None:
        m2 = MultiMap(combined, mod_space, 2, 0, "antisym_algebra")
        for a in alg.space.elements:
            for b in alg.space.elements:
                vec = l2.get((a.label, b.label))
                for lab, c in vec.items():
                    m2.add((a.label, prefix + b.label), prefix + lab, c)
        actions[2] = m2
    module = LInfModule(alg, mod_space, actions)
    return LInfPair(alg, module)


# ---------------------------------------------------------------------------
# descriptor dispatch

def generate_fixture(desc: FixtureDescriptor):
    """Resolve a descriptor to a structure package-like object."""
    name = desc.name
    if name.startswith("exterior"):
        n = int(name.removeprefix("exterior(").rstrip(")")) if "(" in name else 2
        return exterior_cdga(n, desc.weights).ainf()
    if name == "torus2":
        return exterior_cdga(2, desc.weights).ainf()
    if name == "heisenberg":
        return heisenberg_cdga(desc.weights).ainf()
    if name == "heisenberg-pair":
        return cdga_pair(heisenberg_cdga(desc.weights))
    if name == "random":
        return random_cdga(desc.seed, desc.dims or None).ainf()
    if name == "random-pair":
        return cdga_pair(random_cdga(desc.seed, desc.dims or None))
    raise StructureError(f"unknown fixture {name!r}")

"""Sparse degree-homogeneous multilinear maps given by structure constants.

A MultiMap of arity n and shift s sends degree-(d_1, ..., d_n) inputs to
degree d_1 + ... + d_n + s.  The coefficient table maps input label tuples
to sparse output vectors; zero entries are never stored.  Coefficients are
usually Fractions but any commutative-ring element type with +, *, unary -
and truthiness works (the deformation modules feed ring elements through
the same code).

Symmetry handling:

* ``none`` - the table is the whole map (A-infinity products, chain maps).
* ``antisym`` - graded antisymmetric under the signature-times-Koszul sign;
  only tuples sorted by the input space's basis order are stored, other
  orderings are reconstructed by sign.
* ``antisym_algebra`` - module maps: antisymmetric in all slots but the
  last, which is the module slot; the stored keys have the leading slots
  sorted.
"""

from __future__ import annotations

from fractions import Fraction

from .grading import GradedSpace
from .signs import sort_with_sign

SYMMETRIES = ("none", "antisym", "antisym_algebra")


class MultiMap:
    def __init__(
        self,
        space_in: GradedSpace,
        space_out: GradedSpace,
        arity: int,
        shift: int,
        symmetry: str = "none",
    ):
        if arity < 1:
            raise ValueError("arity must be >= 1")
        if symmetry not in SYMMETRIES:
            raise ValueError(f"unknown symmetry {symmetry!r}")
        self.space_in = space_in
        self.space_out = space_out
        self.arity = arity
        self.shift = shift
        self.symmetry = symmetry
        self.table: dict[tuple[str, ...], dict[str, object]] = {}
        self._canon_cache: dict[tuple[str, ...], tuple[tuple[str, ...], int]] = {}

    # -- construction ------------------------------------------------------

    def add(self, key: tuple[str, ...], out_label: str, coef) -> None:
        """Accumulate one term; the key is canonicalized first."""
        if not coef:
            return
        if len(key) != self.arity:
            raise ValueError(f"key arity {len(key)} != {self.arity}")
        ckey, sign = self._canonical(key)
        if sign == 0:
            return
        if sign == -1:
            coef = -coef
        row = self.table.setdefault(ckey, {})
        total = row.get(out_label, 0) + coef
        if total:
            row[out_label] = total
        else:
            row.pop(out_label, None)
            if not row:
                del self.table[ckey]

    def add_vector(self, key: tuple[str, ...], vector: dict[str, object], scale=1) -> None:
        for out_label, coef in vector.items():
            self.add(key, out_label, coef * scale if scale != 1 else coef)

    def _canonical(self, key: tuple[str, ...]) -> tuple[tuple[str, ...], int]:
        if self.symmetry == "none":
            return key, 1
        cached = self._canon_cache.get(key)
        if cached is not None:
            return cached
        space = self.space_in
        if self.symmetry == "antisym":
            part = key
            tail: tuple[str, ...] = ()
        else:
            part = key[:-1]
            tail = key[-1:]
        degs = tuple(space.deg(l) for l in part)
        sorted_part, sign = sort_with_sign(part, degs, space.order_index)
        result = (sorted_part + tail, sign)
        self._canon_cache[key] = result
        return result

    # -- lookup ------------------------------------------------------------

    def get(self, key: tuple[str, ...]) -> dict[str, object]:
        """The output vector at an arbitrary (not necessarily sorted) key."""
        row, sign = self.get_ref(key)
        if row is None:
            return {}
        if sign == 1:
            return dict(row)
        return {lab: -c for lab, c in row.items()}

    def get_ref(self, key: tuple[str, ...]):
        """(stored row, sign) without copying; row is None when zero.

        Hot-path variant of get(); callers must not mutate the row.
        """
        ckey, sign = self._canonical(key)
        row = self.table.get(ckey)
        if not row or sign == 0:
            return None, 0
        return row, sign

    def is_zero(self) -> bool:
        return not self.table

    def entries(self):
        """Iterate stored (canonical key, output vector) pairs."""
        return self.table.items()

    def support_degrees(self) -> set[tuple[int, ...]]:
        return {tuple(self.space_in.deg(l) for l in key) for key in self.table}

    # -- algebra -----------------------------------------------------------

    def scaled(self, factor) -> "MultiMap":
        out = MultiMap(self.space_in, self.space_out, self.arity, self.shift, self.symmetry)
        if factor:
            for key, row in self.table.items():
                out.table[key] = {lab: factor * c for lab, c in row.items()}
        return out

    def plus(self, other: "MultiMap") -> "MultiMap":
        if (self.arity, self.shift, self.symmetry) != (other.arity, other.shift, other.symmetry):
            raise ValueError("cannot add maps of different arity/shift/symmetry")
        out = MultiMap(self.space_in, self.space_out, self.arity, self.shift, self.symmetry)
        for src in (self, other):
            for key, row in src.table.items():
                for lab, c in row.items():
                    out.add(key, lab, c)
        return out

    def equals(self, other: "MultiMap") -> bool:
        if self.arity != other.arity:
            return False
        keys = set(self.table) | set(other.table)
        for key in keys:
            if self.get(key) != other.get(key):
                return False
        return True

    def audit_shift(self) -> list[str]:
        """Entries violating the declared degree shift (label-level report)."""
        bad = []
        for key, row in self.table.items():
            in_deg = sum(self.space_in.deg(l) for l in key)
            for lab in row:
                if self.space_out.deg(lab) != in_deg + self.shift:
                    bad.append(f"{key} -> {lab}")
        return bad

    def audit_weights(self) -> list[str]:
        """Entries landing outside the weight-sum component."""
        if not (self.space_in.weighted and self.space_out.weighted):
            return []
        bad = []
        for key, row in self.table.items():
            w_in = sum(self.space_in.weight(l) for l in key)
            for lab in row:
                if self.space_out.weight(lab) != w_in:
                    bad.append(f"{key} -> {lab}")
        return bad


def identity_map(space: GradedSpace) -> MultiMap:
    mm = MultiMap(space, space, 1, 0)
    for e in space.elements:
        mm.add((e.label,), e.label, Fraction(1))
    return mm


def zero_map(space_in: GradedSpace, space_out: GradedSpace, arity: int, shift: int,
             symmetry: str = "none") -> MultiMap:
    return MultiMap(space_in, space_out, arity, shift, symmetry)


def postcompose(linear: MultiMap, mm: MultiMap) -> MultiMap:
    """linear o mm for arity-1 linear; no signs arise at the output."""
    if linear.arity != 1:
        raise ValueError("postcompose needs an arity-1 map")
    out = MultiMap(mm.space_in, linear.space_out, mm.arity, mm.shift + linear.shift, mm.symmetry)
    for key, row in mm.table.items():
        for mid, c in row.items():
            for lab, d in linear.get((mid,)).items():
                out.add(key, lab, c * d)
    return out


def tensor_compose(outer: MultiMap, inners: list[MultiMap | None]) -> MultiMap:
    """outer o (M_1 x ... x M_k) with None meaning an identity slot.

    Evaluation follows the Koszul rule: the factor in slot t crosses the raw
    inputs of the earlier slots, contributing (-1)^(shift_t * deg) per
    crossed input of odd degree.  The outer map must have symmetry "none";
    antisymmetric outers are consumed by the unshuffle machinery instead.
    """
    if outer.symmetry != "none":
        raise ValueError("tensor_compose requires a plain (non-symmetric) outer map")
    if len(inners) != outer.arity:
        raise ValueError("slot count mismatch")

    space_in = None
    for m in inners:
        if m is not None:
            space_in = m.space_in
            break
    if space_in is None:
        raise ValueError("all-identity tensor_compose is pointless; use the outer map")
    for m in inners:
        if m is not None and m.symmetry != "none":
            raise ValueError("inner maps must be plain tables")

    arities = [1 if m is None else m.arity for m in inners]
    shifts = [0 if m is None else m.shift for m in inners]
    total_arity = sum(arities)
    total_shift = outer.shift + sum(shifts)

    # index inner tables by output label
    indexed: list[dict[str, list[tuple[tuple[str, ...], object]]] | None] = []
    for m in inners:
        if m is None:
            indexed.append(None)
            continue
        by_out: dict[str, list[tuple[tuple[str, ...], object]]] = {}
        for key, row in m.table.items():
            for lab, c in row.items():
                by_out.setdefault(lab, []).append((key, c))
        indexed.append(by_out)

    result = MultiMap(space_in, outer.space_out, total_arity, total_shift)
    deg_in = space_in.deg

    for okey, orow in outer.table.items():
        # choices[t]: list of (input chunk, coefficient) producing okey[t]
        choices = []
        ok = True
        for t, mid_label in enumerate(okey):
            if indexed[t] is None:
                choices.append([((mid_label,), 1)])
            else:
                opts = indexed[t].get(mid_label)
                if not opts:
                    ok = False
                    break
                choices.append(opts)
        if not ok:
            continue

        def expand(t: int, chunks: tuple[tuple[str, ...], ...], coef, odd_prefix: int):
            if t == len(choices):
                key = tuple(lab for chunk in chunks for lab in chunk)
                for lab, c in orow.items():
                    result.add(key, lab, coef * c)
                return
            for chunk, c in choices[t]:
                sign = -1 if (shifts[t] % 2 and odd_prefix % 2) else 1
                chunk_odd = sum(deg_in(l) for l in chunk) % 2
                expand(t + 1, chunks + (chunk,), coef * c * sign, odd_prefix + chunk_odd)

        expand(0, (), 1, 0)
    return result


def compose_multimaps(outer: MultiMap, inner: MultiMap, slot: int) -> MultiMap:
    """Plug `inner` into one slot of `outer` (slots count from 1).

    The Koszul sign from the inner map's degree shift crossing the earlier
    arguments is included; the result has arity
    outer.arity + inner.arity - 1.
    """
    if not 1 <= slot <= outer.arity:
        raise ValueError(f"slot {slot} out of range for arity {outer.arity}")
    inners: list[MultiMap | None] = [None] * outer.arity
    inners[slot - 1] = inner
    return tensor_compose(outer, inners)


def antisymmetrization(nu: MultiMap) -> MultiMap:
    """Sum over all permutations with the antisym sign: the A-oo to L-oo functor
    on one component, l(a_1..a_n) = sum_sigma chi(sigma) nu(a_{sigma(1)}..a_{sigma(n)})."""
    from .signs import all_permutations, antisym_sign

    space = nu.space_in
    out = MultiMap(space, nu.space_out, nu.arity, nu.shift, "antisym")
    n = nu.arity
    for sigma in all_permutations(n):
        inverse = [0] * n
        for pos, i in enumerate(sigma):
            inverse[i] = pos
        for ukey, row in nu.table.items():
            # T with (T[sigma[0]], ..) = ukey, i.e. T[sigma[p]] = ukey[p]
            T = tuple(ukey[inverse[i]] for i in range(n))
            degs = tuple(space.deg(l) for l in T)
            sign = antisym_sign(sigma, degs)
            for lab, c in row.items():
                out.add(T, lab, sign * c)
    return out


def evaluate_on_vectors(mm: MultiMap, vectors: list[dict[str, object]]):
    """Evaluate on coefficient vectors (labels -> even ring elements).

    The coefficients must be even/central, so no Koszul signs arise from
    them; this matches l_n^A = l_n (x) id_A for the ring-tensored structures.
    """
    if len(vectors) != mm.arity:
        raise ValueError("vector count mismatch")
    out: dict[str, object] = {}

    def rec(t: int, labels: tuple[str, ...], coef):
        if t == mm.arity:
            for lab, c in mm.get(labels).items():
                total = out.get(lab, 0) + coef * c
                if total:
                    out[lab] = total
                else:
                    out.pop(lab, None)
            return
        for lab, c in vectors[t].items():
            if c:
                rec(t + 1, labels + (lab,), coef * c)

    rec(0, (), 1)
    return out

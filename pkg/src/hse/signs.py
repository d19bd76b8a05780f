"""Permutations and graded sign conventions.

A permutation is a tuple ``sigma`` of length n over 0..n-1; applying it to a
tuple T yields ``(T[sigma[0]], ..., T[sigma[n-1]])``, matching the classical
notation (a_{sigma(1)}, ..., a_{sigma(n)}).

Two signs coexist on purpose.  ``koszul_sign`` is the pure Koszul product:
each transposition of adjacent entries of degrees d, e contributes
(-1)^(d*e).  ``antisym_sign`` multiplies in the ordinary signature; that is
the sign under which the commutator bracket of a graded-commutative algebra
antisymmetrizes to zero, and it is the convention used by every
antisymmetric structure map in this package.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, permutations

Permutation = tuple[int, ...]


def is_permutation(sigma: Permutation) -> bool:
    return sorted(sigma) == list(range(len(sigma)))


def identity_perm(n: int) -> Permutation:
    return tuple(range(n))


@lru_cache(maxsize=None)
def perm_sign(sigma: Permutation) -> int:
    """Ordinary signature via inversion count."""
    inv = 0
    n = len(sigma)
    for i in range(n):
        for j in range(i + 1, n):
            if sigma[i] > sigma[j]:
                inv += 1
    return -1 if inv % 2 else 1


@lru_cache(maxsize=None)
def _koszul_core(sigma: Permutation, parities: tuple[int, ...]) -> int:
    seq = list(sigma)
    sign = 1
    for i in range(len(seq)):
        for j in range(len(seq) - 1, i, -1):
            if seq[j - 1] > seq[j]:
                if parities[seq[j - 1]] and parities[seq[j]]:
                    sign = -sign
                seq[j - 1], seq[j] = seq[j], seq[j - 1]
    return sign


def koszul_sign(sigma: Permutation, degrees: list[int] | tuple[int, ...]) -> int:
    """Koszul sign of sigma on elements whose original degrees are `degrees`.

    Defined by a_{sigma(1)} x ... x a_{sigma(n)} = sign * (a_1 x ... x a_n):
    bubble the permuted sequence back to identity, each adjacent swap of
    entries with original indices u, v contributing (-1)^(deg_u * deg_v).
    Independent of the chosen decomposition; only parities matter, so the
    core is memoized.
    """
    if len(degrees) != len(sigma):
        raise ValueError("degree list length does not match permutation arity")
    return _koszul_core(tuple(sigma), tuple(d % 2 for d in degrees))


def antisym_sign(sigma: Permutation, degrees: list[int] | tuple[int, ...]) -> int:
    """Signature times Koszul sign: the antisymmetric convention."""
    return perm_sign(tuple(sigma)) * koszul_sign(sigma, degrees)


@lru_cache(maxsize=None)
def unshuffles(i: int, n: int) -> tuple[Permutation, ...]:
    """All (i, n-i)-unshuffles: sigma increasing on the first i and last n-i slots."""
    if not 1 <= i <= n:
        raise ValueError(f"unshuffle block size {i} out of range for n={n}")
    result = []
    universe = range(n)
    for first in combinations(universe, i):
        rest = tuple(k for k in universe if k not in first)
        result.append(first + rest)
    return tuple(result)


def epsilon_exponent(profile: tuple[int, ...]) -> int:
    """The morphism sign exponent (j-1)(k_1-1) + (j-2)(k_2-1) + ... + (k_{j-1}-1)."""
    j = len(profile)
    return sum((j - t - 1) * (profile[t] - 1) for t in range(j))


def block_permutations(
    profile: tuple[int, ...], n: int, min_first: bool = False
) -> list[tuple[Permutation, int]]:
    """Permutations preserving order within consecutive blocks of the given sizes.

    Returns (sigma, epsilon) pairs; epsilon depends only on the profile.  With
    ``min_first`` the blocks are additionally required to have increasing
    minima, so that each unordered block partition is enumerated exactly once
    (needed when the target map is antisymmetric in the block outputs).
    """
    if any(k < 1 for k in profile) or sum(profile) != n:
        raise ValueError(f"profile {profile} does not sum to {n}")
    eps = epsilon_exponent(profile)
    results: list[tuple[Permutation, int]] = []

    def rec(remaining: tuple[int, ...], blocks: list[tuple[int, ...]], t: int) -> None:
        if t == len(profile):
            sigma = tuple(x for block in blocks for x in block)
            results.append((sigma, eps))
            return
        size = profile[t]
        for chosen in combinations(remaining, size):
            if min_first and blocks and chosen[0] < blocks[-1][0]:
                continue
            rest = tuple(x for x in remaining if x not in chosen)
            rec(rest, blocks + [chosen], t + 1)

    rec(tuple(range(n)), [], 0)
    return results


@lru_cache(maxsize=None)
def all_permutations(n: int) -> tuple[Permutation, ...]:
    return tuple(permutations(range(n)))


def compositions(n: int, k: int):
    """Ordered compositions of n into k positive parts."""
    if k < 1 or k > n:
        return
    if k == 1:
        yield (n,)
        return
    for first in range(1, n - k + 2):
        for rest in compositions(n - first, k - 1):
            yield (first,) + rest


def theta_exponent(profile: tuple[int, ...]) -> int:
    """The p-kernel sign exponent sum_{i<j} r_i (r_j + 1)."""
    k = len(profile)
    return sum(
        profile[i] * (profile[j] + 1) for i in range(k) for j in range(i + 1, k)
    )


def sort_with_sign(labels: tuple[str, ...], degrees: tuple[int, ...], order_index) -> tuple[tuple[str, ...], int]:
    """Stable-sort labels by order_index, returning (sorted, antisym sign).

    Returns sign 0 when the tuple repeats an even-degree label: a graded
    antisymmetric map vanishes there.  Repeated odd labels are fine (their
    transposition sign is +1 under antisym_sign).
    """
    n = len(labels)
    idx = sorted(range(n), key=lambda i: (order_index(labels[i]), i))
    seen: set[str] = set()
    for lab, deg in zip(labels, degrees):
        if lab in seen and deg % 2 == 0:
            return tuple(labels[i] for i in idx), 0
        seen.add(lab)
    # With S the sorted tuple, labels = S o tau where tau[i] is the position
    # of i in idx; then map(labels) = antisym_sign(tau, degs(S)) * map(S).
    tau = [0] * n
    for pos, i in enumerate(idx):
        tau[i] = pos
    sorted_labels = tuple(labels[i] for i in idx)
    sorted_degrees = tuple(degrees[i] for i in idx)
    return sorted_labels, antisym_sign(tuple(tau), sorted_degrees)

"""Independent reference implementations the tests check against.

Everything here deliberately avoids the library's optimized paths: field
multiplication is bit-by-bit carry-less reduction, decodability is the rank
of surviving generator columns, and minimal repair enumerates every subset
of the survivors in size order.
"""

from __future__ import annotations

import itertools

from blrc.linalg import GfMatrix, rank, span_coefficients


def clmul_reduce(a: int, b: int, poly: int, m: int) -> int:
    acc = 0
    while b:
        if b & 1:
            acc ^= a
        b >>= 1
        a <<= 1
    for bit in range(acc.bit_length() - 1, m - 1, -1):
        if (acc >> bit) & 1:
            acc ^= poly << (bit - m)
    return acc


def decodable_by_generator(code, erased) -> bool:
    """Direct definition: the surviving columns of G must span the data
    space."""
    survivors = [b for b in range(1, code.n + 1) if b not in erased]
    M = GfMatrix(
        [code.generator_column(b) for b in survivors], code.field
    ).transpose()
    return rank(M) == code.k


def minimal_repair_all_subsets(code, erased):
    """Size-ordered search over every survivor subset; first feasible
    subset wins.  Returns (cost, helper tuple) or None."""
    erased = tuple(sorted(erased))
    survivors = [b for b in range(1, code.n + 1) if b not in erased]
    gcols = {b: code.generator_column(b) for b in range(1, code.n + 1)}
    for size in range(len(survivors) + 1):
        for subset in itertools.combinations(survivors, size):
            M = GfMatrix(
                [[gcols[h][i] for h in subset] for i in range(code.k)],
                code.field,
            )
            if all(
                span_coefficients(M, gcols[e]) is not None for e in erased
            ):
                return size, subset
    return None


def min_distance_by_patterns(code) -> int:
    """Smallest erasure count with an unrecoverable pattern, checked with
    the generator-column rank definition."""
    for f in range(1, code.r + 2):
        for pattern in itertools.combinations(range(1, code.n + 1), f):
            if not decodable_by_generator(code, pattern):
                return f
    raise AssertionError("no undecodable pattern found")


def random_valid_code(rng, n, k, w, field):
    """Rejection-sample a valid balanced LRC, or None if the parameters
    never produce one within a few tries."""
    from blrc.code import CodeSpec, ConstructionError, assign_coefficients
    from blrc.search import random_support

    spec = CodeSpec(n, k, w, field)
    for _ in range(20):
        support = random_support(spec, seed=rng.randrange(2**60))
        try:
            return assign_coefficients(
                support, spec, seed=rng.randrange(2**60)
            )
        except ConstructionError:
            continue
    return None

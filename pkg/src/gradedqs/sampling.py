"""Seeded random inputs for the verification suites.

Every sampler takes a ``random.Random`` so a suite is a pure function of its
seed.  Polynomials are kept small (bounded degree, coefficients and number of
terms) so exact arithmetic stays fast while still mixing several degrees.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .matrices import GroupCase, MatrixG, sigma
from .poly import GradedPoly
from .rings import CoefficientRing
from .words import ElemGen, ElemWord


@dataclass(frozen=True)
class SampleBounds:
    max_degree: int = 3
    max_coeff: int = 9
    max_terms: int = 4


DEFAULT_BOUNDS = SampleBounds()


def random_coeff(rng: random.Random, ring: CoefficientRing, bounds: SampleBounds = DEFAULT_BOUNDS, nonzero=False):
    while True:
        c = rng.randint(-bounds.max_coeff, bounds.max_coeff)
        c = ring.coerce(c)
        if not nonzero or c != 0:
            return c


def random_monomial(rng: random.Random, nvars: int, degree: int) -> Tuple[int, ...]:
    exp = [0] * nvars
    for _ in range(degree):
        exp[rng.randrange(nvars)] += 1
    return tuple(exp)


def random_poly(
    rng: random.Random,
    ring: CoefficientRing,
    nvars: int,
    bounds: SampleBounds = DEFAULT_BOUNDS,
    min_degree: int = 0,
    nonzero: bool = False,
) -> GradedPoly:
    """Sparse random polynomial; ``min_degree=1`` gives an element of A_+."""
    lo = min_degree if nvars else 0
    hi = bounds.max_degree if nvars else 0
    while True:
        terms = {}
        for _ in range(rng.randint(1, bounds.max_terms)):
            d = rng.randint(lo, max(lo, hi))
            terms[random_monomial(rng, nvars, d)] = random_coeff(rng, ring, bounds)
        p = GradedPoly(ring, nvars, terms)
        if not nonzero or not p.is_zero():
            return p


def random_scalar_poly(rng, ring, nvars, bounds=DEFAULT_BOUNDS) -> GradedPoly:
    return GradedPoly.constant(ring, nvars, random_coeff(rng, ring, bounds))


def generator_indices(case, n: int) -> List[Tuple[int, int]]:
    """Canonical (i, j) pairs indexing the generators of the given case."""
    case = GroupCase.parse(case)
    out = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                continue
            if case is GroupCase.LINEAR:
                out.append((i, j))
            elif case is GroupCase.SYMPLECTIC and (i == sigma(j) or i < j):
                out.append((i, j))
            elif case is GroupCase.ORTHOGONAL and i != sigma(j) and i < j:
                out.append((i, j))
    return out


def random_indices(rng: random.Random, case, n: int) -> Tuple[int, int]:
    """Random (i, j) valid for :meth:`ElemGen.make`, not necessarily canonical."""
    case = GroupCase.parse(case)
    while True:
        i, j = rng.randint(1, n), rng.randint(1, n)
        if i == j:
            continue
        if case is GroupCase.ORTHOGONAL and i == sigma(j):
            continue
        return i, j


def random_gen(rng, case, n, arg) -> ElemGen:
    i, j = random_indices(rng, case, n)
    return ElemGen.make(case, n, i, j, arg)


def random_word(
    rng: random.Random,
    case,
    n: int,
    ring: CoefficientRing,
    nvars: int,
    length: int,
    bounds: SampleBounds = DEFAULT_BOUNDS,
) -> ElemWord:
    """Word of the given length with arbitrary (mixed-degree) arguments."""
    like = GradedPoly.constant(ring, nvars, 0)
    gens = [random_gen(rng, case, n, random_poly(rng, ring, nvars, bounds)) for _ in range(length)]
    if not gens:
        return ElemWord.empty(case, n, like)
    return ElemWord(GroupCase.parse(case), n, tuple(gens), like)


def random_level_word(
    rng: random.Random,
    case,
    n: int,
    ring: CoefficientRing,
    nvars: int,
    max_length: int = 8,
    bounds: SampleBounds = DEFAULT_BOUNDS,
) -> ElemWord:
    """A word whose value is congruent to I modulo A_+.

    Take m random generators with mixed arguments, then append the inverse of
    their degree-zero part; the total length is 2m <= max_length.
    """
    m = rng.randint(1, max(1, max_length // 2))
    head = random_word(rng, case, n, ring, nvars, m, bounds)
    return head + head.plus_eval(0).inverse()


def random_degree_zero_word(rng, case, n, ring, nvars, length, bounds=DEFAULT_BOUNDS) -> ElemWord:
    like = GradedPoly.constant(ring, nvars, 0)
    gens = [
        random_gen(rng, case, n, random_scalar_poly(rng, ring, nvars, bounds)) for _ in range(length)
    ]
    if not gens:
        return ElemWord.empty(case, n, like)
    return ElemWord(GroupCase.parse(case), n, tuple(gens), like)


def random_det_one_matrix(rng, case, n, ring, nvars, max_length=6, bounds=DEFAULT_BOUNDS) -> MatrixG:
    return random_word(rng, case, n, ring, nvars, rng.randint(1, max_length), bounds).evaluate()


def random_matrix(rng, n, ring, nvars, bounds=DEFAULT_BOUNDS) -> MatrixG:
    return MatrixG([[random_poly(rng, ring, nvars, bounds) for _ in range(n)] for _ in range(n)])


# ---------------------------------------------------------------------------
# words over a localization


def random_local_level_word(
    rng: random.Random,
    case,
    n: int,
    s: int,
    nvars: int,
    ring: CoefficientRing,
    max_cores: int = 3,
    max_k: int = 3,
    bounds: SampleBounds = DEFAULT_BOUNDS,
) -> ElemWord:
    """Product of conjugates eps ge(p / s^k) eps^-1 over A_s with eps of degree
    zero and p in A_+, so the value is level and carries real denominators."""
    from .localization import LocalizedPoly, localize

    like = localize(GradedPoly.constant(ring, nvars, 0), s)
    word = ElemWord.empty(case, n, like)
    for _ in range(rng.randint(1, max_cores)):
        eps = random_degree_zero_word(rng, case, n, ring, nvars, rng.randint(0, 2), bounds)
        eps = eps.map_args(lambda z: localize(z, s)) if eps.gens else ElemWord.empty(case, n, like)
        p = random_poly(rng, ring, nvars, bounds, min_degree=1, nonzero=True)
        core = ElemWord.of([random_gen(rng, case, n, LocalizedPoly(s, p, rng.randint(1, max_k)))])
        word = word + eps + core + eps.inverse()
    return word


def inject_denominators(
    rng: random.Random,
    word: ElemWord,
    s: int,
    max_k: int = 2,
    bounds: SampleBounds = DEFAULT_BOUNDS,
) -> ElemWord:
    """The same matrix as ``word`` written over A_s with denominators:
    some generators ge(z) become ge(q) ge(z - q) with q = p / s^k, p in A_+."""
    from .localization import LocalizedPoly, localize

    like = word.like
    gens: List[ElemGen] = []
    for g in word.gens:
        z = localize(g.arg, s)
        if rng.random() < 0.6:
            p = random_poly(rng, like.ring, like.nvars, bounds, min_degree=1, nonzero=True)
            q = LocalizedPoly(s, p, rng.randint(1, max_k))
            gens.append(g.with_arg(q))
            gens.append(g.with_arg(z - q))
        else:
            gens.append(g.with_arg(z))
    if not gens:
        return ElemWord.empty(word.case, word.n, localize(like, s))
    return ElemWord(word.case, word.n, tuple(gens), localize(like, s))


def pick_primes(rng: random.Random, pool: Sequence[int], r: int) -> List[int]:
    return sorted(rng.sample(list(pool), r))

"""Random inputs shared by the test modules."""
import random
from fractions import Fraction

from hznf import algebra as alg
from hznf.algebra import AlgebraElement, Grading, ParamChange, ScalarSeries


def rnd(rng: random.Random) -> Fraction:
    n = 0
    while n == 0:
        n = rng.randint(-5, 5)
    return Fraction(n, rng.randint(1, 4))


def random_field(rng, max_grade, density=1.0, rotation=1):
    """Nonparametric field with a nonzero ``E^1_1`` term."""
    terms = {key: rnd(rng) for key in alg.all_keys_upto(max_grade, Grading(()))
             if rng.random() < density}
    terms[(1, 1, ())] = rnd(rng)
    return AlgebraElement(terms, rotation=rotation)


def random_state_generator(rng, max_grade=4, q=0, grading=None, max_param_deg=None):
    g = grading or Grading.uniform(q)
    terms = {}
    for key in alg.all_keys_upto(max_grade, g, max_param_deg):
        l, k, m = key
        if l == k == 0 and sum(m) <= 1:
            continue
        if rng.random() < 0.4:
            terms[key] = rnd(rng)
    return AlgebraElement(terms, q=q)


def random_time(rng, max_grade=4, q=0, grading=None, max_param_deg=None):
    g = grading or Grading.uniform(q)
    terms = {key: rnd(rng) for key in alg.all_keys_upto(max_grade, g, max_param_deg)
             if rng.random() < 0.4}
    return ScalarSeries(terms, q=q)


def random_param_change(rng, q, max_deg=2):
    comps = [{} for _ in range(q)]
    g = Grading.uniform(q)
    for i in range(q):
        for m, _ in alg.param_monomials(g, max_deg, max_deg):
            if sum(m) >= 2 and rng.random() < 0.5:
                comps[i][m] = rnd(rng)
    return ParamChange(comps, q)


def random_parametric_field(rng, q=3, max_grade=12, max_param_deg=3, weight=5):
    """Generic unfolding: nonzero ``E^1_1``, ``E^0_2`` and a full-rank
    block of linear ``E^0_k mu_j`` terms."""
    g = Grading.uniform(q, weight)
    terms = {}
    for key in alg.all_keys_upto(max_grade, g, max_param_deg):
        l, k, m = key
        if l == k == 0 and not any(m):
            continue
        if rng.random() < 0.35:
            terms[key] = rnd(rng)
    terms[(1, 1, (0,) * q)] = rnd(rng)
    terms[(0, 2, (0,) * q)] = rnd(rng)
    for j in range(q):
        for k in range(3):
            terms[(0, k, tuple(int(i == j) for i in range(q)))] = rnd(rng)
    return AlgebraElement(terms, rotation=1, q=q)


def random_monomial(rng, q=0, max_k=4):
    k = rng.randint(0, max_k)
    l = rng.randint(0, k)
    m = tuple(rng.randint(0, 2) for _ in range(q))
    if l == k == 0 and not any(m):
        k = l = 1
    return AlgebraElement({(l, k, m): rnd(rng)}, q=q)


def random_scalar_monomial(rng, q=0, max_k=3):
    k = rng.randint(0, max_k)
    l = rng.randint(0, k)
    m = tuple(rng.randint(0, 2) for _ in range(q))
    return ScalarSeries({(l, k, m): rnd(rng)}, q=q, allow_constant=True)

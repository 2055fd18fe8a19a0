"""Test helpers shared by several modules."""

import random
from fractions import Fraction


def perturb_on_hyperplane(c, f, bound: Fraction, rng: random.Random, den: int = 997):
    """Perturb every component of ``c`` by less than ``bound`` keeping ``f . c`` fixed.

    Components off the support of ``f`` move freely in ``(-bound, bound)``.
    On the support, draws in ``(-bound/2, bound/2)`` are corrected by an even
    share of the residual, itself below ``bound/2`` in magnitude.
    """
    support = [k for k, x in enumerate(f) if x]
    delta = []
    for k in range(len(c)):
        width = bound if k not in support else bound / 2
        delta.append(width * Fraction(rng.randint(-(den - 1), den - 1), den))
    residual = sum(f[k] * delta[k] for k in support)
    norm = sum(f[k] * f[k] for k in support)
    for k in support:
        delta[k] -= residual * f[k] / norm
    assert sum(f[k] * delta[k] for k in support) == 0
    assert all(abs(x) < bound for x in delta)
    return tuple(x + y for x, y in zip(c, delta))

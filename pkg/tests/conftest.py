import math

import numpy as np
from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


def sample_units(rng: np.random.Generator, q: int, p: int, count: int) -> list:
    out = []
    while len(out) < count:
        c = int(rng.integers(1, q))
        if c % p != 0:
            out.append(c)
    return out


def primitive_exponents(m) -> list:
    return [c for c in range(1, m.phi) if c % m.p != 0]


def even_primitive_exponents(m) -> list:
    return [c for c in range(2, m.phi, 2) if c % m.p != 0]


def brute_unit_sum(chi, n: int) -> complex:
    """Reference Gauss sum: plain Python loop, cmath phases."""
    import cmath

    q = chi.modulus.q
    total = 0j
    for t in range(1, q):
        if t % chi.modulus.p == 0:
            continue
        total += complex(chi(t)) * cmath.exp(2j * cmath.pi * n * t / q)
    return total

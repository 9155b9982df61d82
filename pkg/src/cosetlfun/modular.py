"""Modular arithmetic mod odd prime powers.

Everything downstream works inside the unit group of Z/p^k, which is cyclic
for odd p.  The modulus object fixes a generator once and stores the full
discrete-log table, so character evaluation and exponential sums reduce to
table lookups with exact integer angle arithmetic.
"""

from __future__ import annotations

import cmath
import math
from functools import cached_property, lru_cache

import numpy as np

from .errors import InvalidModulus, NotInvertible, NotOneUnit

MAX_MODULUS = 2**40

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond the 2^40 modulus cap."""
    if n < 2:
        return False
    for b in _MR_BASES:
        if n == b:
            return True
        if n % b == 0:
            return False
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for b in _MR_BASES:
        x = pow(b, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def mod_inverse(a: int, m) -> int:
    """Inverse of a modulo m (an int or a PrimePowerModulus), in [0, m)."""
    m = m.q if isinstance(m, PrimePowerModulus) else int(m)
    if m <= 0:
        raise InvalidModulus(f"modulus must be positive, got {m}")
    try:
        return pow(a, -1, m)
    except ValueError:
        raise NotInvertible(f"{a} shares a factor with {m}") from None


def jacobi_symbol(a: int, q: int) -> int:
    """Jacobi symbol (a|q) for odd q >= 1, by binary reciprocity."""
    if q < 1 or q % 2 == 0:
        raise InvalidModulus(f"Jacobi symbol needs odd positive q, got {q}")
    a %= q
    result = 1
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if q % 8 in (3, 5):
                result = -result
        a, q = q, a
        if a % 4 == 3 and q % 4 == 3:
            result = -result
        a %= q
    return result if q == 1 else 0


def epsilon_q(q: int) -> complex:
    """The quadratic Gauss sum sign: 1 for q = 1 mod 4, i for q = 3 mod 4."""
    if q % 2 == 0:
        raise InvalidModulus(f"sign factor undefined for even q = {q}")
    return (1 + 0j) if q % 4 == 1 else 1j


def signed_lift(x: int, mod: int) -> int:
    """Representative of x mod `mod` of least absolute value (mod odd)."""
    r = x % mod
    return r - mod if 2 * r > mod else r


def root_of_unity(num: int, den: int) -> complex:
    """e(num/den) with the angle reduced exactly before leaving integers."""
    return cmath.exp(2j * cmath.pi * ((num % den) / den))


def divisor_count(n: int) -> int:
    """Number of divisors of n >= 1, by trial-division factorization."""
    if n < 1:
        raise ValueError(f"divisor count needs n >= 1, got {n}")
    count = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            count *= e + 1
        d += 1 if d == 2 else 2
    if n > 1:
        count *= 2
    return count


class PrimePowerModulus:
    """An odd prime power q = p^k with a fixed generator of (Z/q)*.

    The discrete-log table is built eagerly: O(q) memory, intended for the
    desk-scale grids q <= 10^6 the verification suites run on.
    """

    def __init__(self, p: int, k: int):
        if k < 1:
            raise InvalidModulus(f"exponent must be >= 1, got {k}")
        if p < 3 or p % 2 == 0 or not is_prime(p):
            raise InvalidModulus(f"{p} is not an odd prime")
        q = p**k
        if q > MAX_MODULUS:
            raise InvalidModulus(f"q = {p}^{k} exceeds the 2^40 cap")
        self.p = p
        self.k = k
        self.q = q
        self.phi = p ** (k - 1) * (p - 1)
        self.generator = self._least_generator()
        self.dlog = self._build_dlog()

    def _least_generator(self) -> int:
        # A generator mod p^2 generates mod every p^k (p odd), so testing
        # against p^min(k,2) identifies the least generator mod p^k.
        m = self.p ** min(self.k, 2)
        phi = m // self.p * (self.p - 1) if m > self.p else self.p - 1
        prime_factors = set()
        n, d = phi, 2
        while d * d <= n:
            if n % d == 0:
                prime_factors.add(d)
                while n % d == 0:
                    n //= d
            d += 1
        if n > 1:
            prime_factors.add(n)
        g = 2
        while True:
            if all(pow(g, phi // r, m) != 1 for r in prime_factors):
                return g
            g += 1

    def _build_dlog(self) -> np.ndarray:
        table = np.full(self.q, -1, dtype=np.int64)
        t = 1
        for i in range(self.phi):
            table[t] = i
            t = t * self.generator % self.q
        table.setflags(write=False)
        return table

    def __repr__(self) -> str:
        return f"PrimePowerModulus({self.p}, {self.k})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PrimePowerModulus)
            and (self.p, self.k) == (other.p, other.k)
        )

    def __hash__(self) -> int:
        return hash((self.p, self.k))

    @cached_property
    def units(self) -> np.ndarray:
        """All units mod q, ascending."""
        u = np.nonzero(self.dlog >= 0)[0].astype(np.int64)
        u.setflags(write=False)
        return u

    @cached_property
    def unit_dlogs(self) -> np.ndarray:
        d = self.dlog[self.units]
        d.setflags(write=False)
        return d

    @cached_property
    def phi_roots(self) -> np.ndarray:
        """Table of e(j/phi) for j in [0, phi)."""
        return np.exp(2j * np.pi * np.arange(self.phi) / self.phi)

    @cached_property
    def q_roots(self) -> np.ndarray:
        """Table of e(j/q) for j in [0, q)."""
        return np.exp(2j * np.pi * np.arange(self.q) / self.q)

    def index_of(self, t: int) -> int:
        """Discrete log of the unit t to the fixed generator."""
        d = int(self.dlog[t % self.q])
        if d < 0:
            raise NotInvertible(f"{t} is not a unit mod {self.q}")
        return d


@lru_cache(maxsize=64)
def modulus(p: int, k: int) -> PrimePowerModulus:
    """Shared immutable modulus instances; tables are built once."""
    return PrimePowerModulus(p, k)


def padic_log(x: int, m: PrimePowerModulus) -> int:
    """Unit-normalized p-adic logarithm of x = 1 mod p.

    Returns L in [0, p^(k-1)) with log(x) = p*L mod p^k, where log is the
    alternating series sum (-1)^(i+1) (x-1)^i / i.  Terms are divided by
    their exact power of p before reduction, so every step stays integral.
    """
    p, k, q = m.p, m.k, m.q
    x %= q
    if x % p != 1:
        raise NotOneUnit(f"{x} is not 1 mod {p}")
    if k == 1:
        return 0
    y = x - 1
    # Terms with index beyond i_max have valuation i - v_p(i) >= k and
    # vanish mod p^k; `slack` digits of head-room keep the exact division
    # by p^v_p(i) faithful after reduction.
    slack = 1
    while p**slack <= k + slack + 2:
        slack += 1
    i_max = k + slack + 2
    big = q * p**slack
    total = 0
    power = 1
    for i in range(1, i_max + 1):
        v_i = 0
        u = i
        while u % p == 0:
            u //= p
            v_i += 1
        power = power * y % big
        term = power // (p**v_i) * mod_inverse(u, q) % q
        if i % 2 == 0:
            term = -term
        total = (total + term) % q
    assert total % p == 0, "p-adic log of a 1-unit is divisible by p"
    return (total // p) % (p ** (k - 1))

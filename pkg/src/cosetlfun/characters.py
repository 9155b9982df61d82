"""Dirichlet characters mod p^k and their cosets.

A character is pinned down by one exponent c in Z/phi(q): it sends the fixed
generator g to e(c/phi(q)).  Conductors, parity and products are then integer
bookkeeping on c.  The unit-group filtration by level-j subgroups gives the
cosets everything downstream averages over, and the logarithm parameter from
`postnikov_ell` linearizes characters on 1-units.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateConductor,
    InvalidModulus,
    NotPrimitive,
    PreconditionViolated,
)
from .modular import PrimePowerModulus, mod_inverse, padic_log, root_of_unity


def phi_prime_power(p: int, j: int) -> int:
    """Euler phi of p^j, with phi(1) = 1."""
    return p ** (j - 1) * (p - 1) if j >= 1 else 1


@dataclass(frozen=True)
class DirichletCharacter:
    """Character mod p^k sending the generator to e(c/phi)."""

    modulus: PrimePowerModulus
    c: int

    def __post_init__(self):
        object.__setattr__(self, "c", self.c % self.modulus.phi)

    def __call__(self, n: int) -> complex:
        m = self.modulus
        d = int(m.dlog[n % m.q])
        if d < 0:
            return 0j
        return root_of_unity(self.c * d, m.phi)

    @property
    def is_principal(self) -> bool:
        return self.c == 0

    @property
    def is_even(self) -> bool:
        # chi(-1) = e(c * (phi/2) / phi) = (-1)^c
        return self.c % 2 == 0

    @property
    def conductor(self) -> int:
        """Smallest p^f the character factors through (1 for principal)."""
        if self.c == 0:
            return 1
        p, k = self.modulus.p, self.modulus.k
        v = 0
        c = self.c
        while c % p == 0:
            c //= p
            v += 1
        return p ** (k - v)

    @property
    def is_primitive(self) -> bool:
        return self.conductor == self.modulus.q

    def conjugate(self) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, -self.c)

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        if self.modulus != other.modulus:
            raise InvalidModulus("can only multiply characters of one modulus")
        return DirichletCharacter(self.modulus, self.c + other.c)

    def value_table(self) -> np.ndarray:
        """chi(n) for n = 0..q-1 as a complex array, zero off the units."""
        m = self.modulus
        out = np.zeros(m.q, dtype=np.complex128)
        angles = self.c * m.unit_dlogs % m.phi
        out[m.units] = m.phi_roots[angles]
        return out

    def to_dict(self) -> dict:
        return {"p": self.modulus.p, "k": self.modulus.k, "c": self.c}


def postnikov_ell(chi: DirichletCharacter) -> int:
    """Logarithm parameter ell in Z/p^(k-1) with chi(1+px) = e_q(ell*log(1+px)).

    On the generator 1+p of the 1-units, chi(1+p) = e(c*ind(1+p)/phi) collapses
    to e(m/p^(k-1)) with m = c * ind(1+p)/(p-1); matching e(ell*u/p^(k-1)),
    where p*u = log(1+p), pins ell = m * u^(-1).  Both sides are homomorphisms
    on the cyclic 1-unit group, so agreement on 1+p is agreement everywhere.
    """
    m = chi.modulus
    p, k = m.p, m.k
    if k < 2:
        raise DegenerateConductor("logarithm parameter needs k >= 2")
    pk1 = p ** (k - 1)
    t1 = m.index_of(1 + p)
    assert t1 % (p - 1) == 0, "1+p lies in the index-(p-1) subgroup"
    s = t1 // (p - 1)
    u = padic_log(1 + p, m)
    return chi.c * s % pk1 * mod_inverse(u, pk1) % pk1


def character_with_ell(
    m: PrimePowerModulus, ell: int, even: bool | None = None
) -> DirichletCharacter:
    """A character mod p^k with the requested logarithm parameter.

    The exponent is fixed mod p^(k-1) by ell; an optional parity pick uses the
    remaining freedom c -> c + p^(k-1).
    """
    p, k = m.p, m.k
    if k < 2:
        raise DegenerateConductor("logarithm parameter needs k >= 2")
    pk1 = p ** (k - 1)
    t1 = m.index_of(1 + p)
    s = t1 // (p - 1)
    u = padic_log(1 + p, m)
    c = ell % pk1 * u % pk1 * mod_inverse(s, pk1) % pk1
    if even is not None and c % 2 != (0 if even else 1):
        c += pk1  # p^(k-1) is odd, so this flips parity and keeps ell
    chi = DirichletCharacter(m, c)
    assert postnikov_ell(chi) == ell % pk1
    return chi


@dataclass(frozen=True)
class CosetSpec:
    """A coset base * H_{p^j} of the level-j subgroup, with a parity filter.

    H_{p^j} is the group of characters mod p^k of conductor dividing p^j,
    i.e. exponents divisible by p^(k-j); it has phi(p^j) elements.
    """

    base: DirichletCharacter
    j: int
    parity: str = "all"

    def __post_init__(self):
        if not 0 <= self.j <= self.base.modulus.k:
            raise PreconditionViolated(
                f"level j = {self.j} outside [0, {self.base.modulus.k}]"
            )
        if self.parity not in ("all", "even", "odd"):
            raise PreconditionViolated(f"unknown parity filter {self.parity!r}")
        if not self.base.is_primitive:
            raise NotPrimitive("coset base must be primitive")

    @property
    def subgroup_modulus(self) -> int:
        return self.base.modulus.p**self.j

    @property
    def subgroup_order(self) -> int:
        return phi_prime_power(self.base.modulus.p, self.j)


def enumerate_coset(spec: CosetSpec) -> tuple[DirichletCharacter, ...]:
    """Members of the coset, parity-filtered, ascending in exponent."""
    m = spec.base.modulus
    step = m.p ** (m.k - spec.j)
    want = {"all": (0, 1), "even": (0,), "odd": (1,)}[spec.parity]
    exponents = sorted(
        (spec.base.c + i * step) % m.phi
        for i in range(spec.subgroup_order)
    )
    return tuple(
        DirichletCharacter(m, c) for c in exponents if c % 2 in want
    )

"""Shift-and-average inequalities for finite complex sequences.

The classical inequality bounds |sum a_n|^2 by shifted autocorrelations; its
proof runs through an amplifier kernel and Parseval, and the multiplicative
analog shifts by multiples of a divisor of the modulus so that the whole
character coset can be averaged at once.  All three identities are computed
exactly (convolutions and correlations of finite arrays), never by numerical
quadrature of the underlying integrals.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .characters import CosetSpec, DirichletCharacter, enumerate_coset, phi_prime_power
from .errors import BadShiftBound, PreconditionViolated


@dataclass(frozen=True)
class FiniteSequence:
    """Complex coefficients indexed n = support_start .. support_start+len-1."""

    support_start: int
    coefficients: tuple[complex, ...]

    def __post_init__(self):
        if len(self.coefficients) < 1:
            raise PreconditionViolated("sequence needs at least one coefficient")
        for z in self.coefficients:
            z = complex(z)
            if not (math.isfinite(z.real) and math.isfinite(z.imag)):
                raise PreconditionViolated("coefficients must be finite")

    def __len__(self) -> int:
        return len(self.coefficients)

    @property
    def support_end(self) -> int:
        # inclusive
        return self.support_start + len(self.coefficients) - 1

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coefficients, dtype=np.complex128)


def random_sequence(
    length: int, rng: np.random.Generator, support_start: int = 1
) -> FiniteSequence:
    """Seeded random coefficients, uniform on the unit square [0,1)+[0,1)i."""
    u = rng.random(length)
    v = rng.random(length)
    return FiniteSequence(support_start, tuple(u + 1j * v))


def shifted_autocorrelation(a: FiniteSequence, h: int) -> complex:
    """sum_n a_{n+h} * conj(a_n) over the overlap of the two supports."""
    arr = a.as_array()
    n = arr.size
    if abs(h) >= n:
        return 0j
    if h >= 0:
        # vdot conjugates its first argument
        return complex(np.vdot(arr[: n - h], arr[h:]))
    return complex(np.vdot(arr[-h:], arr[: n + h]))


def _symmetric_shift_sum(a: FiniteSequence, weight) -> float:
    """sum_{|h| < H} weight(|h|) * C(h), folded pairwise so it is exactly real.

    C(-h) = conj(C(h)), so the h and -h terms sum to 2*Re(weight * C(h)).
    """
    total = weight(0) * shifted_autocorrelation(a, 0).real
    h = 1
    while True:
        w = weight(h)
        if w is None:
            break
        total += 2.0 * w * shifted_autocorrelation(a, h).real
        h += 1
    return total


def vdc_inequality_check(a: FiniteSequence, H: int) -> tuple[float, float]:
    """Both sides of the shift inequality |sum a_n|^2 <= (1+N/H) * weighted sum.

    The sequence must be supported on [1, N].  Returns (lhs, rhs); the caller
    asserts lhs <= rhs within a tiny relative slack.
    """
    if H < 1:
        raise BadShiftBound(f"shift count H = {H} must be >= 1")
    if a.support_start != 1:
        raise PreconditionViolated("inequality is stated for support [1, N]")
    N = len(a)
    arr = a.as_array()
    lhs = abs(arr.sum()) ** 2

    def weight(h: int):
        if h >= H:
            return None
        return 1.0 - h / H

    rhs = (1.0 + N / H) * _symmetric_shift_sum(a, weight)
    return float(lhs), float(rhs)


def dirichlet_kernel(H: int, x: float) -> complex:
    """sum_{1 <= h <= H} e(hx) with e(x) = exp(2 pi i x)."""
    if H < 1:
        raise BadShiftBound(f"kernel length H = {H} must be >= 1")
    return sum(cmath.exp(2j * cmath.pi * h * x) for h in range(1, H + 1))


def amplified_l2_identity(a: FiniteSequence, H: int) -> tuple[float, float]:
    """Mean square of the amplified sum, by Parseval and by autocorrelations.

    lhs expands the coefficient sequence of the product (kernel of length H
    times the generating polynomial of a) via discrete convolution and sums
    squared moduli; rhs is sum_{|h|<H} (H-|h|) C(h).  The two are equal as an
    identity, so agreement is to rounding error only.
    """
    if H < 1:
        raise BadShiftBound(f"kernel length H = {H} must be >= 1")
    conv = np.convolve(np.ones(H, dtype=np.complex128), a.as_array())
    lhs = float(np.sum(np.abs(conv) ** 2))

    def weight(h: int):
        if h >= H:
            return None
        return float(H - h)

    rhs = _symmetric_shift_sum(a, weight)
    return lhs, rhs


def twisted_sum(a: FiniteSequence, chi: DirichletCharacter) -> complex:
    """sum_n a_n chi(n) over the support."""
    q = chi.modulus.q
    table = chi.value_table()
    idx = np.arange(a.support_start, a.support_end + 1) % q
    return complex(np.sum(a.as_array() * table[idx]))


def coset_shift_identity(
    a: FiniteSequence, chi: DirichletCharacter, j: int
) -> tuple[float, float]:
    """Coset mean square vs shifted-by-q0 autocorrelations; exact identity.

    lhs sums |sum_n a_n eta(n)|^2 over the full coset of chi by the level-j
    subgroup.  Orthogonality collapses this to phi(p^j) times the sum of
    autocorrelations of b_n = a_n chi(n) at shifts divisible by q0 = p^j.
    """
    m = chi.modulus
    spec = CosetSpec(chi, j, "all")
    lhs = 0.0
    for eta in enumerate_coset(spec):
        lhs += abs(twisted_sum(a, eta)) ** 2

    q0 = m.p**j
    table = chi.value_table()
    idx = np.arange(a.support_start, a.support_end + 1) % m.q
    b = FiniteSequence(
        a.support_start, tuple(a.as_array() * table[idx])
    )
    h_max = (len(a) - 1) // q0

    rhs = shifted_autocorrelation(b, 0).real
    for h in range(1, h_max + 1):
        rhs += 2.0 * shifted_autocorrelation(b, h * q0).real
    rhs *= phi_prime_power(m.p, j)
    return float(lhs), float(rhs)

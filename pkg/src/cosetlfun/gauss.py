"""Gauss sums mod p^k: brute force, closed forms, and coset averages.

The closed forms collapse the full phi(q)-term sum to a single explicitly
indexed summand once k >= 2, with the logarithm parameter steering which
residue survives.  Averages of normalized Gauss sums over cosets of the
level-j subgroup then localize to delta conditions on that parameter, in
two regimes depending on where j sits relative to k/2 and k/3.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from functools import lru_cache

from .characters import (
    CosetSpec,
    DirichletCharacter,
    enumerate_coset,
    phi_prime_power,
    postnikov_ell,
)
from .errors import (
    NotPrimitive,
    OddBase,
    PreconditionViolated,
    RegimeMismatch,
    SharedFactor,
    UnsupportedRegime,
)
from .modular import (
    PrimePowerModulus,
    epsilon_q,
    jacobi_symbol,
    mod_inverse,
    root_of_unity,
)
from .report import VerificationReport, verification_row


@dataclass(frozen=True)
class GaussSumResult:
    """A Gauss sum value together with how it was obtained."""

    value: complex
    method: str
    q: int
    twist: int = 1


def gauss_sum_brute(chi: DirichletCharacter, n: int = 1) -> complex:
    """Direct sum of chi(t) e_q(n t) over units t mod q.

    Angles are reduced exactly in integers before the table lookup, so every
    term is a correctly rounded root of unity.
    """
    m = chi.modulus
    n %= m.q
    if chi.c * (m.phi - 1) < 2**62 and n * (m.q - 1) < 2**62:
        ang_chi = chi.c * m.unit_dlogs % m.phi
        ang_e = n * m.units % m.q
        return complex((m.phi_roots[ang_chi] * m.q_roots[ang_e]).sum())
    # big-modulus fallback: plain integer arithmetic never overflows
    total = 0j
    for t, d in zip(m.units.tolist(), m.unit_dlogs.tolist()):
        total += root_of_unity(chi.c * d * m.q + n * t * m.phi, m.phi * m.q)
    return total


def quadratic_gauss_closed(a: int, b: int, q: int) -> complex:
    """Closed form of sum_x e_q(a x^2 + b x) for odd q and gcd(a, q) = 1.

    Equals q^(1/2) eps_q (a|q) e_q(-(4a)^(-1) b^2), the complete-the-square
    evaluation.
    """
    eps = epsilon_q(q)  # validates parity of q
    if math.gcd(a, q) != 1:
        raise SharedFactor(f"gcd({a}, {q}) != 1")
    shift = -mod_inverse(4 * a, q) * b * b
    return math.sqrt(q) * eps * jacobi_symbol(a, q) * root_of_unity(shift, q)


def gauss_sum_odoni(
    chi: DirichletCharacter, rep_shift: int = 0
) -> GaussSumResult:
    """Closed-form Gauss sum for primitive chi mod p^k, k >= 2.

    For k = 2n the sum collapses to p^n chi(t0) e_q(t0) at the single
    residue t0 = -ell mod p^n.  For k = 2n+1 (p >= 5 only) an extra
    quadratic Gauss factor appears.  The summand only depends on t0 mod
    p^n; `rep_shift` moves t0 by multiples of p^n to exercise that.
    """
    m = chi.modulus
    p, k, q = m.p, m.k, m.q
    if k < 2:
        raise UnsupportedRegime("no closed form at k = 1")
    if k % 2 == 1 and p == 3:
        raise UnsupportedRegime("odd k needs p >= 5")
    if not chi.is_primitive:
        raise NotPrimitive("closed form needs a primitive character")
    ell = postnikov_ell(chi)
    n_half = k // 2
    pn = p**n_half
    t0 = (-ell) % pn + rep_shift * pn
    core = chi(t0) * root_of_unity(t0, q)
    if k % 2 == 0:
        return GaussSumResult(pn * core, "odoni_even", q)
    w = (ell + t0) // pn  # integer: t0 = -ell mod p^n
    sign = jacobi_symbol(-2 * ell, p)
    corr = root_of_unity(mod_inverse(2 * ell, p) * w * w, p)
    value = epsilon_q(p) * pn * math.sqrt(p) * sign * core * corr
    return GaussSumResult(value, "odoni_odd", q)


def root_number(chi: DirichletCharacter) -> complex:
    """tau(chi) / (i^a q^(1/2)) with a the parity bit; modulus 1 if primitive."""
    m = chi.modulus
    tau = gauss_sum_brute(chi)
    eps = tau / math.sqrt(m.q)
    return eps if chi.is_even else eps / 1j


def gauss_ratio_check(
    chi1: DirichletCharacter, chi2: DirichletCharacter, m: int
) -> VerificationReport:
    """Check tau(chi1, m)/tau(chi2, m) = (chi1 chibar2)(-ell_1 / m).

    Valid when both characters are primitive mod p^k and their ratio has
    conductor dividing p^ceil(k/2).
    """
    mod = chi1.modulus
    if mod != chi2.modulus:
        raise PreconditionViolated("characters must share a modulus")
    if not (chi1.is_primitive and chi2.is_primitive):
        raise NotPrimitive("ratio formula needs primitive characters")
    if m % mod.p == 0:
        raise PreconditionViolated(f"twist {m} shares a factor with {mod.q}")
    prod = chi1 * chi2.conjugate()
    half_up = mod.p ** ((mod.k + 1) // 2)
    if prod.conductor > half_up:
        raise PreconditionViolated(
            f"ratio conductor {prod.conductor} exceeds {half_up}"
        )
    start = time.perf_counter()
    brute = gauss_sum_brute(chi1, m) / gauss_sum_brute(chi2, m)
    ell1 = postnikov_ell(chi1)
    closed = prod(-ell1 * mod_inverse(m, mod.q))
    row = verification_row(
        f"q={mod.q} c1={chi1.c} c2={chi2.c} m={m % mod.q}",
        brute,
        closed,
        start,
    )
    return VerificationReport("gauss-ratio", [row])


def near_one_root_number_check(m: PrimePowerModulus) -> VerificationReport:
    """Gauss sums on the coset pinned by ell = -1 mod p^n, k = 2n.

    Every member has tau = p^n e_q(1): the collapsed summand sits at t0 = 1
    and the character factor drops out.
    """
    from .characters import character_with_ell

    if m.k % 2 != 0:
        raise PreconditionViolated("near-one construction needs even k")
    n_half = m.k // 2
    base = character_with_ell(m, m.p ** (m.k - 1) - 1)
    expected = m.p**n_half * root_of_unity(1, m.q)
    rows = []
    for psi in enumerate_coset(CosetSpec(base, n_half, "all")):
        start = time.perf_counter()
        rows.append(
            verification_row(
                f"q={m.q} c={psi.c}",
                gauss_sum_brute(psi),
                expected,
                start,
            )
        )
    return VerificationReport("near-one", rows)


@lru_cache(maxsize=32)
def _coset_epsilon_terms(
    spec: CosetSpec,
) -> tuple[tuple[DirichletCharacter, complex], ...]:
    # eps(eta) is reused across twists; cache per coset
    rootq = math.sqrt(spec.base.modulus.q)
    return tuple(
        (eta, gauss_sum_brute(eta) / rootq) for eta in enumerate_coset(spec)
    )


def _require_eps_average_args(spec: CosetSpec, m: int):
    mod = spec.base.modulus
    if not spec.base.is_even:
        raise OddBase("epsilon averages are stated for even base characters")
    if spec.parity != "even":
        raise PreconditionViolated("epsilon averages run over the even coset")
    if mod.k < 2:
        raise PreconditionViolated("need k >= 2")
    if not 1 <= spec.j < mod.k:
        raise PreconditionViolated(f"level {spec.j} outside [1, k)")
    if m % mod.p == 0:
        raise PreconditionViolated(f"twist {m} not a unit mod {mod.p}")


def coset_epsilon_average(spec: CosetSpec, m: int) -> complex:
    """Brute sum of eps(eta) conj(eta(m)) over the even coset members."""
    _require_eps_average_args(spec, m)
    return complex(
        sum(
            eps * eta(m).conjugate()
            for eta, eps in _coset_epsilon_terms(spec)
        )
    )


def coset_epsilon_average_closed(spec: CosetSpec, m: int, regime: str) -> complex:
    """Closed form of the eps average in the linear or quadratic regime.

    linear   (k/2 <= j < k):   q^(1/2) phi(p^j)/(2 p^j) *
        sum_{±} e_q(±m) [ell = ∓m mod p^(k-j)]
    quadratic (k/3 <= j <= k/2, p >= 5):   phi(p^j)/2 * (-2 ell|q) eps_q *
        sum_{±} e_q(±m) [ell = ∓m mod p^j] e_{p^(k-2j)}((2 ell)^(-1) w^2),
        w = (ell ± m)/p^j.
    """
    _require_eps_average_args(spec, m)
    mod = spec.base.modulus
    p, k, q, j = mod.p, mod.k, mod.q, spec.j
    ell = postnikov_ell(spec.base)
    size = phi_prime_power(p, j)
    if regime == "linear":
        if not math.ceil(k / 2) <= j < k:
            raise RegimeMismatch(f"linear window needs k/2 <= {j} < {k}")
        pkj = p ** (k - j)
        total = 0j
        for sign in (1, -1):
            if (ell + sign * m) % pkj == 0:
                total += root_of_unity(sign * m, q)
        return math.sqrt(q) * size / (2 * p**j) * total
    if regime == "quadratic":
        if p < 5:
            raise RegimeMismatch("quadratic window needs p >= 5")
        if not math.ceil(k / 3) <= j <= k // 2:
            raise RegimeMismatch(f"quadratic window needs k/3 <= {j} <= k/2")
        pj = p**j
        big_q = p ** (k - 2 * j)
        total = 0j
        for sign in (1, -1):
            if (ell + sign * m) % pj != 0:
                continue
            w = (ell + sign * m) // pj
            term = root_of_unity(sign * m, q)
            if big_q > 1:
                term *= root_of_unity(mod_inverse(2 * ell, big_q) * w * w, big_q)
            total += term
        return size / 2 * jacobi_symbol(-2 * ell, q) * epsilon_q(q) * total
    raise RegimeMismatch(f"unknown regime {regime!r}")

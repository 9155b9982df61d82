"""Second-moment predictions for central L-values along cosets.

The moment of |L(1/2)|^2 over the even part of a level-j coset splits into
a diagonal main term plus a secondary term steered by the minimal lifts of
the base character's logarithm parameter.  Two prediction windows overlap
at k = 2j, where the two secondary formulas agree exactly (and are made to
agree bit-for-bit in doubles here).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .characters import (
    CosetSpec,
    DirichletCharacter,
    enumerate_coset,
    phi_prime_power,
    postnikov_ell,
)
from .errors import (
    DegenerateConductor,
    NotPrimitive,
    OddCharacter,
    PreconditionViolated,
    RegimeMismatch,
)
from .lcentral import digamma, euler_gamma, l_value
from .modular import (
    PrimePowerModulus,
    divisor_count,
    jacobi_symbol,
    mod_inverse,
    signed_lift,
)


@dataclass(frozen=True)
class RecipeParams:
    """Minimal lifts of the logarithm parameter and the prediction window."""

    q: int
    q0: int
    ell: int
    a_chi: int
    b_chi: int
    regime: str  # thm11 | thm12 | both | none


def classify_regime(k: int, j: int) -> str:
    if k == 2 * j:
        return "both"
    if j < k < 2 * j:
        return "thm11"
    if 2 * j < k <= 3 * j:
        return "thm12"
    return "none"


def recipe_params(chi: DirichletCharacter, j: int) -> RecipeParams:
    """Signed minimal lifts a (mod p^(k-j)) and b (mod p^j) of ell."""
    m = chi.modulus
    if m.k < 2:
        raise DegenerateConductor("recipe needs k >= 2")
    if not chi.is_primitive:
        raise NotPrimitive("recipe needs a primitive character")
    if not chi.is_even:
        raise OddCharacter("recipe is stated for even characters")
    if not 1 <= j < m.k:
        raise PreconditionViolated(f"level j = {j} outside [1, {m.k})")
    ell = postnikov_ell(chi)
    a = signed_lift(ell, m.p ** (m.k - j))
    b = signed_lift(a, m.p**j)
    return RecipeParams(
        q=m.q,
        q0=m.p**j,
        ell=ell,
        a_chi=a,
        b_chi=b,
        regime=classify_regime(m.k, j),
    )


def predict_D(m: PrimePowerModulus, j: int) -> float:
    """Diagonal main term of the even-coset second moment at level j."""
    if not 1 <= j < m.k:
        raise PreconditionViolated(f"level j = {j} outside [1, {m.k})")
    q, p = m.q, m.p
    bracket = (
        math.log(q)
        + 2 * euler_gamma()
        + digamma(0.25)
        - math.log(math.pi)
        + 2 * math.log(p) / (p - 1)
    )
    return phi_prime_power(p, j) / 2 * (m.phi / q) * bracket


def predict_A(
    chi: DirichletCharacter, j: int, retain_phase: bool = False
) -> float:
    """Secondary term in the window j < k <= 2j.

    (phi(q0)/q0) q^(1/2) d(|a|)/|a|^(1/2); the discarded unimodular phase
    e_q(-a) can be retained as cos(2 pi a / q) for experiments.
    """
    params = recipe_params(chi, j)
    if params.regime not in ("thm11", "both"):
        raise RegimeMismatch(f"window {params.regime} does not give this term")
    m = chi.modulus
    a = params.a_chi
    abs_a = abs(a)
    lead = phi_prime_power(m.p, j) * math.sqrt(m.q) / params.q0
    value = lead * (divisor_count(abs_a) / math.sqrt(abs_a))
    if retain_phase:
        value *= math.cos(2 * math.pi * a / m.q)
    return value


def predict_A_prime(
    chi: DirichletCharacter, j: int, retain_phase: bool = False
) -> float:
    """Secondary term in the window 2j <= k <= 3j, p >= 5.

    (2a|q) phi(q0) d(|b|)/|b|^(1/2) times cos (q = 1 mod 4) or sin
    (q = 3 mod 4) of 2 pi (2a)^(-1) (a-b)^2 / q.  At k = 2j this reduces,
    bit for bit, to the other window's term.
    """
    params = recipe_params(chi, j)
    if params.regime not in ("thm12", "both"):
        raise RegimeMismatch(f"window {params.regime} does not give this term")
    m = chi.modulus
    if m.p < 5:
        raise RegimeMismatch("this window needs p >= 5")
    a, b = params.a_chi, params.b_chi
    abs_b = abs(b)
    jac = jacobi_symbol(2 * a, m.q)
    angle_num = mod_inverse(2 * a, m.q) * (a - b) * (a - b) % m.q
    if retain_phase:
        angle_num = (angle_num - b) % m.q
    trig = math.cos if m.q % 4 == 1 else math.sin
    phase = trig(2 * math.pi * angle_num / m.q)
    return (jac * phi_prime_power(m.p, j)) * (
        divisor_count(abs_b) / math.sqrt(abs_b)
    ) * phase


@dataclass(frozen=True)
class MomentPrediction:
    """Main and secondary predicted terms for one coset."""

    D: float
    A: float | None
    A_prime: float | None
    params: RecipeParams
    digamma_quarter: float

    @property
    def secondary(self) -> float:
        if self.A is not None:
            return self.A
        if self.A_prime is not None:
            return self.A_prime
        raise RegimeMismatch("no secondary term outside both windows")


def predict_moment(
    chi: DirichletCharacter, j: int, retain_phase: bool = False
) -> MomentPrediction:
    params = recipe_params(chi, j)
    d_term = predict_D(chi.modulus, j)
    a_term = None
    a_prime_term = None
    if params.regime in ("thm11", "both"):
        a_term = predict_A(chi, j, retain_phase)
    if params.regime in ("thm12", "both") and chi.modulus.p >= 5:
        a_prime_term = predict_A_prime(chi, j, retain_phase)
    return MomentPrediction(
        D=d_term,
        A=a_term,
        A_prime=a_prime_term,
        params=params,
        digamma_quarter=digamma(0.25),
    )


@dataclass(frozen=True)
class EmpiricalMoment:
    value: float
    error_bound: float
    members: int


def empirical_coset_moment(spec: CosetSpec) -> EmpiricalMoment:
    """sum of |L(1/2, eta)|^2 over the even coset members."""
    if spec.parity != "even":
        raise PreconditionViolated("moment runs over the even coset")
    if not spec.base.is_even:
        raise OddCharacter("moment needs an even base character")
    total = 0.0
    bound = 0.0
    members = enumerate_coset(spec)
    for eta in members:
        lv = l_value(eta, 0.0)
        total += abs(lv.value) ** 2
        bound += 2 * abs(lv.value) * lv.abs_error_bound + lv.abs_error_bound**2
    return EmpiricalMoment(total, bound, len(members))


@dataclass(frozen=True)
class MomentReport:
    """One row of the moment verification table."""

    q: int
    q0: int
    chi_exponent: int
    ell: int
    a_chi: int
    b_chi: int
    regime: str
    empirical: float
    D: float
    A: float
    residual: float
    baseline_residual: float
    error_scale: float

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "q0": self.q0,
            "chi_exponent": self.chi_exponent,
            "ell": self.ell,
            "a_chi": self.a_chi,
            "b_chi": self.b_chi,
            "regime": self.regime,
            "empirical": self.empirical,
            "D": self.D,
            "A": self.A,
            "residual": self.residual,
            "baseline_residual": self.baseline_residual,
            "error_scale": self.error_scale,
        }


def error_scale(m: PrimePowerModulus, j: int, regime: str) -> float:
    """Size of the theorem's error term, for context next to residuals."""
    q0 = m.p**j
    if regime in ("thm11", "both"):
        return m.q ** (-0.125) * q0
    if regime == "thm12":
        return q0 ** (-0.25) * math.sqrt(m.q)
    raise RegimeMismatch(f"no error scale outside the windows, got {regime}")


def moment_report(
    chi: DirichletCharacter, j: int, retain_phase: bool = False
) -> MomentReport:
    """Empirical vs predicted second moment for the coset of chi at level j."""
    pred = predict_moment(chi, j, retain_phase)
    if pred.params.regime == "none":
        raise RegimeMismatch(f"(k, j) = ({chi.modulus.k}, {j}) fits no window")
    emp = empirical_coset_moment(CosetSpec(chi, j, "even"))
    secondary = pred.secondary
    return MomentReport(
        q=pred.params.q,
        q0=pred.params.q0,
        chi_exponent=chi.c,
        ell=pred.params.ell,
        a_chi=pred.params.a_chi,
        b_chi=pred.params.b_chi,
        regime=pred.params.regime,
        empirical=emp.value,
        D=pred.D,
        A=secondary,
        residual=emp.value - pred.D - secondary,
        baseline_residual=emp.value - pred.D,
        error_scale=error_scale(chi.modulus, j, pred.params.regime),
    )

"""Shifted character sums and desk-scale scans of the hybrid mean-value bounds.

The double sum S(chi, h*q0, n) is the object controlling the off-diagonal in
the conductor-dropping argument.  Its asymptotic bounds carry unspecified
constants, so nothing here asserts an inequality absolutely: the scans emit
(sum, envelope, ratio) tables and the only hard checks are a soft regression
guard on the ratio and quadrature self-consistency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .characters import CosetSpec, DirichletCharacter, enumerate_coset
from .errors import PreconditionViolated, QuadratureTooCoarse
from .lcentral import l_value
from .modular import PrimePowerModulus

# caps keeping a full scan under ~1e9 elementary operations
MAX_SCAN_MODULUS = 3**6
MAX_SCAN_CELLS = 256


def char_sum_S(chi: DirichletCharacter, h: int, j: int, n: int) -> complex:
    """sum over alpha mod q of chi(alpha + h*q0) conj(chi(alpha)) e_q(alpha n).

    Direct summation; terms where alpha or alpha + h*q0 shares a factor with
    q vanish through the character table.
    """
    m = chi.modulus
    if not 0 <= j <= m.k:
        raise PreconditionViolated(f"level j = {j} outside [0, {m.k}]")
    q = m.q
    q0 = m.p**j
    table = chi.value_table()
    alpha = np.arange(q)
    shifted = table[(alpha + h * q0) % q]
    phases = np.exp((2j * np.pi * (n % q) / q) * alpha)
    return complex(np.sum(shifted * np.conj(table) * phases))


@dataclass(frozen=True)
class ScanGrid:
    """Scan configuration: modulus, subgroup level, shift/frequency caps,
    and the time window for the hybrid quadrature."""

    modulus: PrimePowerModulus
    j: int
    A: int
    B: int
    T: float = 10.0
    T0: float = 2.0
    t_step: float = 0.25

    def __post_init__(self):
        if not 0 <= self.j <= self.modulus.k:
            raise PreconditionViolated(
                f"level j = {self.j} outside [0, {self.modulus.k}]"
            )
        if self.A < 1 or self.B < 1:
            raise PreconditionViolated("shift and frequency caps must be >= 1")
        if not self.T0 > 0:
            raise PreconditionViolated("window length T0 must be positive")
        if not self.t_step > 0:
            raise PreconditionViolated("quadrature step must be positive")
        if self.t_step > self.T0 / 8:
            raise QuadratureTooCoarse(
                f"step {self.t_step} exceeds T0/8 = {self.T0 / 8}"
            )

    @property
    def q0(self) -> int:
        return self.modulus.p**self.j


def _doubling(limit: int) -> list[int]:
    out = [1]
    while out[-1] * 2 <= limit:
        out.append(out[-1] * 2)
    return out


@dataclass
class Lemma9Scan:
    """Ratio tables from one scan: off-diagonal cells and the n = 0 line."""

    rows: list[dict] = field(default_factory=list)
    base_ratio: float = 0.0
    max_ratio: float = 0.0
    max_mass: float = 0.0
    noise_floor: float = 0.0

    def soft_guard_ok(self, factor: float = 3.0) -> bool:
        """Max off-diagonal ratio within `factor` of the smallest massive cell.

        The weight chi(alpha + h q0) conj(chi(alpha)) depends on alpha only
        mod q/q0, so S vanishes identically unless q0 | n; grid cells whose
        whole n-range misses multiples of q0 carry only rounding noise.  The
        base cell is therefore the first doubling cell with mass above the
        noise floor, and a scan with no massive cell passes vacuously.
        """
        if self.max_mass <= self.noise_floor:
            return True
        return self.max_ratio <= factor * self.base_ratio


def lemma9_scan(grid: ScanGrid) -> Lemma9Scan:
    """|S| mass over 1 <= |h| <= A', 1 <= |n| <= B' against the envelope
    sqrt(q) (A'B'/sqrt(q0) + (q q0 A')^(1/4)), for doubling (A', B'); plus
    the n = 0 line against q0 * A'."""
    m = grid.modulus
    if m.q > MAX_SCAN_MODULUS or grid.A * grid.B > MAX_SCAN_CELLS:
        raise PreconditionViolated(
            f"scan size (q = {m.q}, A*B = {grid.A * grid.B}) over the cap"
        )
    chi = DirichletCharacter(m, 1)
    q, q0 = m.q, grid.q0

    # |S| for every cell once; grid points sum sub-blocks
    abs_s = np.empty((grid.A, 2 * grid.B))
    zero_col = np.empty(grid.A)
    for ai in range(grid.A):
        row = 0.0
        cells = []
        for sign in (1, -1):
            h = sign * (ai + 1)
            for n in range(1, grid.B + 1):
                cells.append(abs(char_sum_S(chi, h, grid.j, n)))
                cells.append(abs(char_sum_S(chi, h, grid.j, -n)))
            row += abs(char_sum_S(chi, h, grid.j, 0))
        # first 2B cells are h = +(ai+1), rest h = -(ai+1), same |n| order
        abs_s[ai] = np.array(cells[: 2 * grid.B]) + np.array(cells[2 * grid.B :])
        zero_col[ai] = row

    report = Lemma9Scan(noise_floor=1e-9 * math.sqrt(q))
    for a_cap in _doubling(grid.A):
        for b_cap in _doubling(grid.B):
            sum_s = float(abs_s[:a_cap, : 2 * b_cap].sum())
            envelope = math.sqrt(q) * (
                a_cap * b_cap / math.sqrt(q0) + (q * q0 * a_cap) ** 0.25
            )
            ratio = sum_s / envelope
            report.rows.append(
                {
                    "kind": "offdiag",
                    "q": q,
                    "q0": q0,
                    "A": a_cap,
                    "B": b_cap,
                    "sum_S": sum_s,
                    "envelope": envelope,
                    "ratio": ratio,
                }
            )
            if report.base_ratio == 0.0 and sum_s > report.noise_floor:
                report.base_ratio = ratio
            if sum_s > report.max_mass:
                report.max_mass = sum_s
            report.max_ratio = max(report.max_ratio, ratio)
        zero_sum = float(zero_col[:a_cap].sum())
        zero_env = float(q0 * a_cap)
        report.rows.append(
            {
                "kind": "zero_line",
                "q": q,
                "q0": q0,
                "A": a_cap,
                "B": 0,
                "sum_S": zero_sum,
                "envelope": zero_env,
                "ratio": zero_sum / zero_env,
            }
        )
    return report


@dataclass(frozen=True)
class HybridQuadrature:
    lhs: float
    envelope: float
    ratio: float
    samples: int


def hybrid_moment_quadrature(
    grid: ScanGrid, chi: DirichletCharacter
) -> HybridQuadrature:
    """Trapezoid quadrature of the coset-summed |L(1/2+it)|^2 over one window.

    lhs integrates sum_{psi in the level-j subgroup} |L(1/2 + it, chi psi)|^2
    for t in [T, T + T0]; the envelope is
    (T0 + T0^(-1/2) T^(1/2)) (q0 + q0^(-1/2) q^(1/2)).
    """
    if not chi.is_primitive:
        raise PreconditionViolated("hybrid window needs a primitive base")
    if grid.T0 > grid.T:
        raise PreconditionViolated("window needs T0 <= T")
    if grid.t_step > grid.T0 / 8:
        raise QuadratureTooCoarse(
            f"step {grid.t_step} exceeds T0/8 = {grid.T0 / 8}"
        )
    members = enumerate_coset(CosetSpec(chi, grid.j, "all"))
    num = max(8, math.ceil(grid.T0 / grid.t_step - 1e-12))
    ts = np.linspace(grid.T, grid.T + grid.T0, num + 1)
    ys = np.empty(num + 1)
    for i, t in enumerate(ts):
        ys[i] = sum(abs(l_value(eta, float(t)).value) ** 2 for eta in members)
    lhs = float(np.trapezoid(ys, ts))

    m = chi.modulus
    q0 = grid.q0
    envelope = (grid.T0 + grid.T0**-0.5 * math.sqrt(grid.T)) * (
        q0 + q0**-0.5 * math.sqrt(m.q)
    )
    return HybridQuadrature(lhs, envelope, lhs / envelope, num + 1)

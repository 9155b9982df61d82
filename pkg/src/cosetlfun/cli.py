"""Verification command line: one subcommand per identity family.

Every run executes its checks over a (p, k, j) grid, emits one report row
per instance (CSV or JSON lines, deterministic byte-for-byte for a fixed
configuration), and exits 0 exactly when all hard assertions pass.  Checks
whose bounds carry unspecified constants are soft: they warn on stderr and
only fail the run under --strict.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .characters import CosetSpec, DirichletCharacter
from .errors import ConfigError, CosetLFunError
from .gauss import (
    coset_epsilon_average,
    coset_epsilon_average_closed,
    gauss_ratio_check,
    gauss_sum_brute,
    gauss_sum_odoni,
    near_one_root_number_check,
)
from .hybrid import (
    MAX_SCAN_CELLS,
    MAX_SCAN_MODULUS,
    ScanGrid,
    hybrid_moment_quadrature,
    lemma9_scan,
)
from .modular import modulus
from .moments import classify_regime, moment_report, recipe_params
from .report import render_rows
from .vdc import (
    FiniteSequence,
    amplified_l2_identity,
    coset_shift_identity,
    random_sequence,
    vdc_inequality_check,
)

SUBCOMMANDS = (
    "gauss-verify",
    "coset-eps",
    "ratio",
    "near-one",
    "moment",
    "recipe",
    "vdc",
    "shift-identity",
    "lemma9",
    "hybrid",
)


@dataclass
class RunConfig:
    """Parsed and validated invocation."""

    subcommand: str
    p_list: list
    k_list: list
    j_list: list
    m_samples: int
    seed: int
    tolerance: float
    out: str
    fmt: str
    workers: int
    strict: bool
    trials: int
    retain_phase: bool
    T: float
    T0: float
    t_step: float
    A: int
    B: int


@dataclass
class RunResult:
    rows: list = field(default_factory=list)
    hard_failures: list = field(default_factory=list)
    soft_warnings: list = field(default_factory=list)
    summary: str = ""


def _ordered_map(fn, items, workers: int) -> list:
    """Parallel map preserving input order, so output is worker-invariant."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _primitive_exponents(m) -> list:
    return [c for c in range(1, m.phi) if c % m.p != 0]


def _even_primitive_exponents(m) -> list:
    return [c for c in range(2, m.phi, 2) if c % m.p != 0]


def _sample_units(rng, q: int, p: int, count: int) -> list:
    out = []
    while len(out) < count:
        c = int(rng.integers(1, q))
        if c % p != 0:
            out.append(c)
    return out


def _grid(cfg: RunConfig):
    for p in cfg.p_list:
        for k in cfg.k_list:
            yield p, k


# ---------------------------------------------------------------- subcommands


def cmd_gauss_verify(cfg: RunConfig) -> RunResult:
    """Closed-form Gauss sums against brute summation, all primitive chi."""
    tol = cfg.tolerance if cfg.tolerance is not None else 1e-9
    res = RunResult()
    for p, k in _grid(cfg):
        if k < 2:
            raise ConfigError(f"gauss-verify needs k >= 2, got k = {k}")
        if k % 2 == 1 and p == 3:
            raise ConfigError(
                f"odd k with p = 3 (requested k = {k}) has no closed form; "
                "the library guard raises UnsupportedRegime for it"
            )
        m = modulus(p, k)

        def one(c, m=m, p=p, k=k):
            chi = DirichletCharacter(m, c)
            brute = gauss_sum_brute(chi)
            closed = gauss_sum_odoni(chi).value
            abs_err = abs(brute - closed)
            rel_err = abs_err / abs(closed)
            return {
                "p": p,
                "k": k,
                "q": m.q,
                "chi_exponent": c,
                "brute": [brute.real, brute.imag],
                "closed": [closed.real, closed.imag],
                "abs_err": abs_err,
                "rel_err": rel_err,
            }

        rows = _ordered_map(one, _primitive_exponents(m), cfg.workers)
        for r in rows:
            if r["rel_err"] > tol:
                res.hard_failures.append(
                    f"gauss-verify q={r['q']} c={r['chi_exponent']}: "
                    f"rel_err {r['rel_err']:.3e} > {tol:.1e}"
                )
        res.rows.extend(rows)
    res.summary = f"gauss-verify: {len(res.rows)} characters checked"
    return res


def _eps_regimes(p: int, k: int, j: int) -> list:
    out = []
    if (k + 1) // 2 <= j < k:
        out.append("linear")
    if p >= 5 and -(-k // 3) <= j <= k // 2:
        out.append("quadratic")
    return out


def cmd_coset_eps(cfg: RunConfig) -> RunResult:
    """Coset averages of normalized Gauss sums: brute vs closed forms."""
    tol = cfg.tolerance if cfg.tolerance is not None else 1e-9
    res = RunResult()
    rng = np.random.default_rng(cfg.seed)
    for p, k in _grid(cfg):
        if k < 2:
            raise ConfigError(f"coset-eps needs k >= 2, got k = {k}")
        m = modulus(p, k)
        levels = cfg.j_list or [j for j in range(1, k) if _eps_regimes(p, k, j)]
        for j in levels:
            regimes = _eps_regimes(p, k, j)
            if not regimes:
                raise ConfigError(
                    f"level j = {j} fits no average regime at (p, k) = ({p}, {k})"
                )
            c = int(rng.choice(_even_primitive_exponents(m)))
            chi = DirichletCharacter(m, c)
            spec = CosetSpec(chi, j, "even")
            for tw in _sample_units(rng, m.q, p, cfg.m_samples):
                brute = coset_epsilon_average(spec, tw)
                for regime in regimes:
                    closed = coset_epsilon_average_closed(spec, tw, regime)
                    abs_err = abs(brute - closed)
                    res.rows.append(
                        {
                            "p": p,
                            "k": k,
                            "j": j,
                            "regime": regime,
                            "chi_exponent": c,
                            "m": tw,
                            "brute": [brute.real, brute.imag],
                            "closed": [closed.real, closed.imag],
                            "abs_err": abs_err,
                        }
                    )
                    if abs_err > tol:
                        res.hard_failures.append(
                            f"coset-eps q={m.q} j={j} {regime} m={tw}: "
                            f"abs_err {abs_err:.3e} > {tol:.1e}"
                        )
    res.summary = f"coset-eps: {len(res.rows)} averages checked"
    return res


def cmd_ratio(cfg: RunConfig) -> RunResult:
    """Gauss-sum ratios along a coset against the character-value formula."""
    tol = cfg.tolerance if cfg.tolerance is not None else 1e-9
    res = RunResult()
    rng = np.random.default_rng(cfg.seed)
    for p, k in _grid(cfg):
        if k < 2:
            raise ConfigError(f"ratio needs k >= 2, got k = {k}")
        m = modulus(p, k)
        # enumerate pairs whose ratio conductor divides p^floor(k/2): on that
        # window the collapsed formula holds for every k; at the ceil boundary
        # an odd k picks up an extra p-th root of unity (see the ratio tests)
        step = p ** (k - k // 2)
        twists = _sample_units(rng, m.q, p, cfg.m_samples)
        for c1 in _primitive_exponents(m):
            chi1 = DirichletCharacter(m, c1)
            for d in range(0, m.phi, step):
                c2 = (c1 - d) % m.phi
                if c2 % p == 0 or c2 == 0:
                    continue
                chi2 = DirichletCharacter(m, c2)
                for tw in twists:
                    rep = gauss_ratio_check(chi1, chi2, tw)
                    row = rep.rows[0]
                    res.rows.append(
                        {
                            "q": m.q,
                            "chi1": c1,
                            "chi2": c2,
                            "m": tw,
                            "brute": [row.brute.real, row.brute.imag],
                            "closed": [row.closed.real, row.closed.imag],
                            "rel_err": row.rel_err,
                        }
                    )
                    if row.rel_err > tol:
                        res.hard_failures.append(
                            f"ratio q={m.q} c1={c1} c2={c2} m={tw}: "
                            f"rel_err {row.rel_err:.3e} > {tol:.1e}"
                        )
    res.summary = f"ratio: {len(res.rows)} pairs checked"
    return res


def cmd_near_one(cfg: RunConfig) -> RunResult:
    """Cosets pinned near the trivial logarithm parameter: fixed root number."""
    tol = cfg.tolerance if cfg.tolerance is not None else 1e-9
    res = RunResult()
    for p, k in _grid(cfg):
        if k % 2 != 0:
            raise ConfigError(f"near-one needs even k, got k = {k}")
        rep = near_one_root_number_check(modulus(p, k))
        for row in rep.rows:
            res.rows.append(
                {
                    "q": p**k,
                    "instance": row.instance,
                    "computed": [row.brute.real, row.brute.imag],
                    "pinned": [row.closed.real, row.closed.imag],
                    "rel_err": row.rel_err,
                }
            )
            if row.rel_err > tol:
                res.hard_failures.append(
                    f"near-one {row.instance}: rel_err {row.rel_err:.3e}"
                )
    res.summary = f"near-one: {len(res.rows)} coset members checked"
    return res


def cmd_moment(cfg: RunConfig) -> RunResult:
    """Empirical coset second moments against the predicted main terms."""
    res = RunResult()
    if not cfg.j_list:
        raise ConfigError("moment needs an explicit --j grid")
    for p, k in _grid(cfg):
        for j in cfg.j_list:
            regime = classify_regime(k, j)
            if regime == "none":
                raise ConfigError(
                    f"(k, j) = ({k}, {j}) fits no prediction window"
                )
            if regime == "thm12" and p < 5:
                raise ConfigError(
                    f"quadratic-regime prediction needs p >= 5, got p = {p}"
                )
            m = modulus(p, k)

            def one(c, m=m, j=j):
                rep = moment_report(
                    DirichletCharacter(m, c), j, cfg.retain_phase
                )
                return rep.to_dict()

            rows = _ordered_map(one, _even_primitive_exponents(m), cfg.workers)
            improved = sum(
                1 for r in rows if abs(r["residual"]) < abs(r["baseline_residual"])
            )
            if improved < len(rows):
                res.soft_warnings.append(
                    f"moment q={m.q} j={j}: secondary term improves the "
                    f"residual at {improved}/{len(rows)} characters (the "
                    "theorem's error term dominates at desk-scale moduli)"
                )
            for r in rows:
                if not all(
                    math.isfinite(r[key])
                    for key in ("empirical", "D", "A", "residual")
                ):
                    res.hard_failures.append(
                        f"moment q={m.q} c={r['chi_exponent']}: non-finite value"
                    )
            res.rows.extend(rows)
    res.summary = f"moment: {len(res.rows)} characters reported"
    return res


def cmd_recipe(cfg: RunConfig) -> RunResult:
    """Signed minimal lifts of the logarithm parameter, with window checks."""
    res = RunResult()
    if not cfg.j_list:
        raise ConfigError("recipe needs an explicit --j grid")
    for p, k in _grid(cfg):
        for j in cfg.j_list:
            if not 1 <= j < k:
                raise ConfigError(f"recipe needs 1 <= j < k, got (k, j) = ({k}, {j})")
            m = modulus(p, k)
            for c in _even_primitive_exponents(m):
                chi = DirichletCharacter(m, c)
                params = recipe_params(chi, j)
                qkj = p ** (k - j)
                q0 = p**j
                ok = (
                    (params.a_chi - params.ell) % qkj == 0
                    and 2 * abs(params.a_chi) <= qkj
                    and (params.b_chi - params.a_chi) % q0 == 0
                    and 2 * abs(params.b_chi) <= q0
                )
                if not ok:
                    res.hard_failures.append(
                        f"recipe q={m.q} c={c}: lift windows violated"
                    )
                res.rows.append(
                    {
                        "q": m.q,
                        "q0": q0,
                        "chi_exponent": c,
                        "ell": params.ell,
                        "a_chi": params.a_chi,
                        "b_chi": params.b_chi,
                        "regime": params.regime,
                    }
                )
    res.summary = f"recipe: {len(res.rows)} characters lifted"
    return res


def cmd_vdc(cfg: RunConfig) -> RunResult:
    """Shift inequality and amplifier identity on random + adversarial runs."""
    res = RunResult()
    rng = np.random.default_rng(cfg.seed)

    def check(kind: str, idx: int, seq: FiniteSequence, H: int):
        lhs, rhs = vdc_inequality_check(seq, H)
        pl, pr = amplified_l2_identity(seq, H)
        ok_ineq = lhs <= rhs + 1e-9 * (1 + abs(rhs))
        ok_pars = abs(pl - pr) <= 1e-9 * (1 + abs(pl))
        res.rows.append(
            {
                "kind": kind,
                "trial": idx,
                "N": len(seq),
                "H": H,
                "lhs": lhs,
                "rhs": rhs,
                "margin": rhs - lhs,
                "parseval_lhs": pl,
                "parseval_rhs": pr,
                "ok": bool(ok_ineq and ok_pars),
            }
        )
        if not ok_ineq:
            res.hard_failures.append(
                f"vdc {kind}#{idx}: inequality violated by {lhs - rhs:.3e}"
            )
        if not ok_pars:
            res.hard_failures.append(
                f"vdc {kind}#{idx}: amplifier identity off by {abs(pl - pr):.3e}"
            )

    for i in range(cfg.trials):
        n = int(rng.integers(1, 201))
        h = int(rng.integers(1, n + 1))
        check("random", i, random_sequence(n, rng), h)
    check("all-ones", 0, FiniteSequence(1, (1 + 0j,) * 120), 12)
    check("alternating", 0, FiniteSequence(1, tuple((-1.0) ** n + 0j for n in range(121))), 9)
    spike = [0j] * 64
    spike[17] = 1 + 0j
    check("spike", 0, FiniteSequence(1, tuple(spike)), 8)
    res.summary = f"vdc: {len(res.rows)} instances, all inequalities checked"
    return res


def cmd_shift_identity(cfg: RunConfig) -> RunResult:
    """Coset mean square vs shifted autocorrelations on random sequences."""
    tol = cfg.tolerance if cfg.tolerance is not None else 1e-8
    res = RunResult()
    rng = np.random.default_rng(cfg.seed)
    for p, k in _grid(cfg):
        m = modulus(p, k)
        levels = cfg.j_list if cfg.j_list else list(range(0, k + 1))
        for j in levels:
            if not 0 <= j <= k:
                raise ConfigError(f"shift-identity needs 0 <= j <= k, got j = {j}")
            for i in range(cfg.trials):
                c = int(rng.choice(_primitive_exponents(m)))
                seq = random_sequence(50, rng)
                lhs, rhs = coset_shift_identity(seq, DirichletCharacter(m, c), j)
                rel = abs(lhs - rhs) / max(1.0, abs(lhs))
                res.rows.append(
                    {
                        "q": m.q,
                        "j": j,
                        "trial": i,
                        "chi_exponent": c,
                        "lhs": lhs,
                        "rhs": rhs,
                        "rel_err": rel,
                    }
                )
                if rel > tol:
                    res.hard_failures.append(
                        f"shift-identity q={m.q} j={j}#{i}: rel_err {rel:.3e}"
                    )
    res.summary = f"shift-identity: {len(res.rows)} sequences checked"
    return res


def cmd_lemma9(cfg: RunConfig) -> RunResult:
    """|S| mass scans against the square-root envelope (soft guard only)."""
    res = RunResult()
    for p, k in _grid(cfg):
        m = modulus(p, k)
        if m.q > MAX_SCAN_MODULUS:
            raise ConfigError(
                f"scan modulus q = {m.q} over the cap {MAX_SCAN_MODULUS}"
            )
        if cfg.A * cfg.B > MAX_SCAN_CELLS:
            raise ConfigError(
                f"scan area A*B = {cfg.A * cfg.B} over the cap {MAX_SCAN_CELLS}"
            )
        for j in cfg.j_list or [1]:
            scan = lemma9_scan(ScanGrid(m, j, cfg.A, cfg.B))
            res.rows.extend(scan.rows)
            if not scan.soft_guard_ok():
                res.soft_warnings.append(
                    f"lemma9 q={m.q} j={j}: max ratio {scan.max_ratio:.3f} "
                    f"exceeds 3x base {scan.base_ratio:.3f}"
                )
    res.summary = f"lemma9: {len(res.rows)} grid points scanned"
    return res


def cmd_hybrid(cfg: RunConfig) -> RunResult:
    """Windowed coset moment quadrature against the hybrid envelope."""
    res = RunResult()
    if cfg.T0 > cfg.T:
        raise ConfigError(f"window needs T0 <= T, got T0 = {cfg.T0}, T = {cfg.T}")
    if cfg.t_step > cfg.T0 / 8:
        raise ConfigError(
            f"quadrature step {cfg.t_step} exceeds T0/8 = {cfg.T0 / 8}"
        )
    for p, k in _grid(cfg):
        m = modulus(p, k)
        chi = DirichletCharacter(m, 1)
        for j in cfg.j_list or [1]:
            grid = ScanGrid(m, j, cfg.A, cfg.B, cfg.T, cfg.T0, cfg.t_step)
            hq = hybrid_moment_quadrature(grid, chi)
            fine = hybrid_moment_quadrature(
                ScanGrid(m, j, cfg.A, cfg.B, cfg.T, cfg.T0, cfg.t_step / 2), chi
            )
            drift = abs(fine.lhs - hq.lhs) / max(1e-30, abs(hq.lhs))
            res.rows.append(
                {
                    "q": m.q,
                    "q0": p**j,
                    "T": cfg.T,
                    "T0": cfg.T0,
                    "t_step": cfg.t_step,
                    "lhs": hq.lhs,
                    "envelope": hq.envelope,
                    "ratio": hq.ratio,
                    "halved_step_lhs": fine.lhs,
                    "quadrature_drift": drift,
                }
            )
            if drift > 0.01:
                res.soft_warnings.append(
                    f"hybrid q={m.q} j={j}: step-halving moved the integral "
                    f"by {drift:.2%} (> 1%)"
                )
    res.summary = f"hybrid: {len(res.rows)} windows integrated"
    return res


HANDLERS = {
    "gauss-verify": cmd_gauss_verify,
    "coset-eps": cmd_coset_eps,
    "ratio": cmd_ratio,
    "near-one": cmd_near_one,
    "moment": cmd_moment,
    "recipe": cmd_recipe,
    "vdc": cmd_vdc,
    "shift-identity": cmd_shift_identity,
    "lemma9": cmd_lemma9,
    "hybrid": cmd_hybrid,
}

COLUMN_NOTES = {
    "gauss-verify": "p,k,q,chi_exponent,brute_re,brute_im,closed_re,closed_im,abs_err,rel_err",
    "coset-eps": "p,k,j,regime,chi_exponent,m,brute_re,brute_im,closed_re,closed_im,abs_err",
    "ratio": "q,chi1,chi2,m,brute_re,brute_im,closed_re,closed_im,rel_err",
    "near-one": "q,instance,computed_re,computed_im,pinned_re,pinned_im,rel_err",
    "moment": "q,q0,chi_exponent,ell,a_chi,b_chi,regime,empirical,D,A,"
    "residual,baseline_residual,error_scale",
    "recipe": "q,q0,chi_exponent,ell,a_chi,b_chi,regime",
    "vdc": "kind,trial,N,H,lhs,rhs,margin,parseval_lhs,parseval_rhs,ok",
    "shift-identity": "q,j,trial,chi_exponent,lhs,rhs,rel_err",
    "lemma9": "kind,q,q0,A,B,sum_S,envelope,ratio",
    "hybrid": "q,q0,T,T0,t_step,lhs,envelope,ratio,halved_step_lhs,quadrature_drift",
}


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="cosetlfun",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    subs = top.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        sp = subs.add_parser(
            name,
            help=HANDLERS[name].__doc__,
            description=(HANDLERS[name].__doc__ or "")
            + f"\n\nreport columns: {COLUMN_NOTES[name]}",
            formatter_class=argparse.RawDescriptionHelpFormatter,
        )
        sp.add_argument("--p", type=int, nargs="+", default=[], help="prime grid")
        sp.add_argument("--k", type=int, nargs="+", default=[], help="exponent grid")
        sp.add_argument("--j", type=int, nargs="+", default=[], help="level grid")
        sp.add_argument("--m-samples", type=int, default=10, help="sampled twists per instance")
        sp.add_argument("--seed", type=int, default=0, help="64-bit RNG seed")
        sp.add_argument("--tolerance", type=float, default=None, help="override the hard tolerance")
        sp.add_argument("--out", default=None, help="report file (default: stdout)")
        sp.add_argument("--format", choices=("csv", "jsonl"), default="csv")
        sp.add_argument("--workers", type=int, default=None, help="parallel workers (env COSETLFUN_WORKERS)")
        sp.add_argument("--strict", action="store_true", help="promote soft warnings to failures")
        sp.add_argument("--trials", type=int, default=1000 if name == "vdc" else 100)
        sp.add_argument("--retain-phase", action="store_true", help="keep the unimodular phase on the secondary term")
        sp.add_argument("--T", type=float, default=10.0, help="window start")
        sp.add_argument("--T0", type=float, default=2.0, help="window length")
        sp.add_argument("--t-step", type=float, default=0.25, help="quadrature step")
        sp.add_argument("--A", type=int, default=16 if name == "lemma9" else 1, help="shift cap")
        sp.add_argument("--B", type=int, default=16 if name == "lemma9" else 1, help="frequency cap")
    return top


def _resolve_workers(value) -> int:
    if value is not None:
        n = value
    else:
        env = os.environ.get("COSETLFUN_WORKERS", "")
        n = int(env) if env.strip() else (os.cpu_count() or 1)
    if n < 1:
        raise ConfigError(f"worker count must be >= 1, got {n}")
    return n


def make_config(args: argparse.Namespace) -> RunConfig:
    needs_pk = args.subcommand not in ("vdc",)
    if needs_pk and (not args.p or not args.k):
        raise ConfigError("empty grid: --p and --k are required here")
    for p in args.p:
        if p < 3 or p % 2 == 0:
            raise ConfigError(f"modulus base must be an odd prime, got {p}")
    for k in args.k:
        if k < 1:
            raise ConfigError(f"exponent must be >= 1, got {k}")
    if args.tolerance is not None and not args.tolerance > 0:
        raise ConfigError(f"tolerance must be positive, got {args.tolerance}")
    if args.m_samples < 1:
        raise ConfigError(f"m-samples must be >= 1, got {args.m_samples}")
    if args.trials < 1:
        raise ConfigError(f"trials must be >= 1, got {args.trials}")
    if args.out:
        parent = os.path.dirname(os.path.abspath(args.out))
        if not os.path.isdir(parent) or not os.access(parent, os.W_OK):
            raise ConfigError(f"output directory not writable: {parent}")
    return RunConfig(
        subcommand=args.subcommand,
        p_list=args.p,
        k_list=args.k,
        j_list=args.j,
        m_samples=args.m_samples,
        seed=args.seed,
        tolerance=args.tolerance,
        out=args.out,
        fmt=args.format,
        workers=_resolve_workers(args.workers),
        strict=args.strict,
        trials=args.trials,
        retain_phase=args.retain_phase,
        T=args.T,
        T0=args.T0,
        t_step=args.t_step,
        A=args.A,
        B=args.B,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = make_config(args)
        result = HANDLERS[cfg.subcommand](cfg)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except CosetLFunError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2

    text = render_rows(result.rows, cfg.fmt)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)

    for w in result.soft_warnings:
        print(f"warning: {w}", file=sys.stderr)
    for f in result.hard_failures:
        print(f"FAIL: {f}", file=sys.stderr)
    status = "FAIL" if result.hard_failures else "ok"
    if cfg.strict and result.soft_warnings:
        status = "FAIL"
    print(f"{result.summary} [{status}]", file=sys.stderr)
    if status == "FAIL":
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Named acceptance suites: one callable per criterion, each returning a
pass/fail record.  `rmnest verify --suite all` runs everything; the pytest
acceptance module asserts the same records.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from .bounds import (
    TransferParams,
    alpha_relation_margin,
    bec_odds,
    level_k_constant,
    mmse_odds,
    rate_phi_bound,
    tz_sasoglu_transfer,
)
from .channels import bec, bsc
from .codes import BinaryCode, RmParams, codes_equal, project, rm_generator
from .decoders import (
    bec_indicator_table,
    bec_profile_eval,
    bec_unrec_weight_profile,
    block_error_exact,
    build_syndrome_table,
    extrinsic_metrics,
    majority_union_table,
)
from .fourier import (
    BooleanFn,
    GroupSampler,
    biased_transform,
    gl_shifted_group,
    level_k_check,
    level_profile,
    noise_operator_check,
    orbit_restriction_prob,
    pattern_measure,
    pattern_weights,
    restrict_spectrum,
    restriction_identity_check,
    symmetric_group,
)
from .harness import (
    estimate_theta,
    exit_curve,
    mc_extrinsic_metrics,
    mc_list_ball,
    mc_majority_looks,
    parse_code_spec,
    worker_rng,
)
from .subspaces import all_gl, gaussian_binomial, multi_look_family, sample_gl, set_dim, spread_family


@dataclass
class VerifyResult:
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name} ({self.seconds:.1f}s): {self.detail}"


def _timed(name):
    def deco(fn):
        def wrapper(*args, **kwargs):
            t0 = time.perf_counter()
            passed, detail = fn(*args, **kwargs)
            return VerifyResult(name=name, passed=passed, detail=detail, seconds=time.perf_counter() - t0)

        wrapper.__name__ = fn.__name__
        wrapper.criterion = name
        return wrapper

    return deco


# ---------------------------------------------------------------------------


@_timed("01-rate-lemma")
def check_rate_lemma():
    worst = 0.0
    for m in range(1, 65):
        for r in range(m + 1):
            rec = rate_phi_bound(r, m)
            if not rec.holds:
                return False, f"rate lemma fails at r={r}, m={m}"
            worst = max(worst, rec.gap / rec.gap_bound)
    spot = rate_phi_bound(8, 16)
    ok = abs(spot.gap - 0.0981903) < 1e-6 and abs(spot.gap_bound - 0.0997356) < 1e-6
    return ok, f"all (r,m) up to 64 hold; spot gap={spot.gap:.5f} <= bound={spot.gap_bound:.5f}; max gap ratio {worst:.4f}"


@_timed("02-nesting-looks")
def check_nesting_looks():
    for m in range(1, 9):
        for s in range(1, m + 1):
            for t in range(1, m // s + 1):
                fam = multi_look_family(m, s, t)
                sizes = {len(lk) for lk in fam.looks}
                if sizes != {1 << (m - (s - 1) * t)}:
                    return False, f"bad look size at (m,s,t)=({m},{s},{t})"
                inter = set(fam.looks[0])
                for lk in fam.looks[1:]:
                    inter &= set(lk)
                if len(inter) != 1 << (m - s * t):
                    return False, f"bad common intersection at ({m},{s},{t})"
                for i in range(s):
                    for j in range(i + 1, s):
                        ov = len(set(fam.looks[i]) & set(fam.looks[j]))
                        if Fraction(ov, len(fam.looks[i])) != Fraction(1, 1 << t):
                            return False, f"pairwise overlap != 2^-t at ({m},{s},{t})"
    checked = 0
    for m in range(2, 7):
        for s in range(2, m + 1):
            for t in range(1, m // s + 1):
                fam = multi_look_family(m, s, t)
                m_sub = m - (s - 1) * t
                for r in range(m_sub + 1):
                    big = rm_generator(RmParams(r, m))
                    small = rm_generator(RmParams(r, m_sub))
                    for lk in fam.looks:
                        if not codes_equal(project(big, sorted(lk)), small):
                            return False, f"projection mismatch at (m,s,t,r)=({m},{s},{t},{r})"
                        checked += 1
    return True, f"overlaps exact for st<=m<=8; {checked} look projections equal RM(r, m-(s-1)t)"


@_timed("03-spread-codes")
def check_spread_codes():
    cases = 0
    for st in range(2, 13):
        for s in range(1, st + 1):
            if st % s:
                continue
            t = st // s
            fam = spread_family(s, t)
            expect = ((1 << st) - 1) // ((1 << s) - 1)
            if fam.count != expect or len(fam.subspaces) != expect:
                return False, f"wrong count at (s,t)=({s},{t})"
            seen = set()
            for sub in fam.subspaces:
                if len(sub) != 1 << s or sub[0] != 0:
                    return False, f"bad subspace at ({s},{t})"
                nz = set(sub) - {0}
                if seen & nz:
                    return False, f"nonzero overlap at ({s},{t})"
                seen |= nz
            if len(seen) != (1 << st) - 1:
                return False, f"nonzero vectors not covered at ({s},{t})"
            cases += 1
    return True, f"{cases} spread families partition the nonzero vectors (st <= 12)"


@_timed("04-bec-two-look")
def check_bec_two_look():
    grid = [Fraction(k, 20) for k in range(1, 20)]
    worst = None
    for m in range(1, 5):
        rho = Fraction((1 << (m - 1)) - 1, (1 << m) - 1)
        for r in range(m + 1):
            small = rm_generator(RmParams(r, m))
            big = rm_generator(RmParams(r, m + 1))
            prof_small = bec_unrec_weight_profile(small, 0)
            prof_big = bec_unrec_weight_profile(big, 0)
            for p in grid:
                pe_small = bec_profile_eval(prof_small, p)
                pe_big = bec_profile_eval(prof_big, p)
                bound = (1 - rho) * pe_small * pe_small + rho * pe_small
                if pe_big > bound:
                    return False, f"recursion violated at r={r}, m={m}, p={p}"
                slack = float(bound - pe_big)
                worst = slack if worst is None else min(worst, slack)
    return True, f"exact rational inequality holds for r<=m<=4 on 19 p-points; min slack {worst:.3e}"


_CHAIN_CODES = (
    ("rep 2", "rep"), ("rep 3", "rep"), ("rep 4", "rep"), ("rep 5", "rep"),
    ("spc 3", "spc"), ("spc 4", "spc"), ("spc 5", "spc"),
    ("rm 1 3", "rm"), ("rm 1 4", "rm"), ("rm 2 4", "rm"),
)


@_timed("05-metric-chain")
def check_metric_chain():
    ps = [0.05 * k for k in range(1, 10)]
    rows = 0
    for spec, _ in _CHAIN_CODES:
        code = parse_code_spec(spec)
        rate = float(code.rate)
        for p in ps:
            for ch in (bec(p), bsc(p)):
                met = extrinsic_metrics(code, ch, 0, "exact")
                if not (2.0 * met.ber <= met.mmse + 1e-12 and met.mmse <= met.cond_entropy + 1e-12):
                    return False, f"chain 2BER<=MMSE<=H fails for {spec} over {ch.kind}({p})"
                if met.cond_entropy > 1.0 - (ch.capacity - rate) + 1e-9:
                    return False, f"EXIT initialization H <= 1-(C-R) fails for {spec} over {ch.kind}({p})"
                if abs(met.e_g - met.e_g2) > 1e-12:
                    return False, f"E[g]=E[g^2] fails for {spec} over {ch.kind}({p})"
                rows += 1
    return True, f"{rows} exact runs satisfy 2BER<=MMSE<=H (1e-12) and H<=1-(C-R)+1e-9"


@_timed("06-exit-area")
def check_exit_area():
    worst = 0.0
    for spec in ("rep 3", "spc 4", "rm 1 3"):
        code = parse_code_spec(spec)
        for p in (0.1, 0.3):
            curve = exit_curve(code, bsc(p), 201)
            worst = max(worst, curve.area_gap)
            if curve.area_gap > 1e-3:
                return False, f"area identity off by {curve.area_gap:.2e} for {spec} over BSC({p})"
    closed = []
    for spec, expect in (("rep 3", Fraction(1, 3)), ("spc 4", Fraction(3, 4))):
        code = parse_code_spec(spec)
        curve = exit_curve(code, bsc(0.0), 201)
        closed.append(abs(curve.area - float(expect)))
        if closed[-1] > 1e-9:
            return False, f"pure-erasure closed form off by {closed[-1]:.2e} for {spec}"
    return True, f"max |area - I/n| = {worst:.2e} (<=1e-3); erasure closed forms within {max(closed):.1e}"


@_timed("07-fourier-suite")
def check_fourier_suite():
    rng = worker_rng(77, 0)
    worst_rel = 0.0
    for i in range(400):
        n = int(rng.integers(2, 15)) if i % 2 == 0 else int(rng.integers(2, 8))
        p = float(rng.choice([0.1, 0.25, 0.5, 0.75]))
        vals = rng.normal(size=1 << n)
        f = BooleanFn(n=n, values=vals, bias=p)
        spec = biased_transform(f)
        e_f2 = float((pattern_measure(n, p) * vals * vals).sum())
        rel = abs(spec.total_mass() - e_f2) / max(e_f2, 1e-30)
        worst_rel = max(worst_rel, rel)
        if rel > 1e-9:
            return False, f"Parseval off by {rel:.2e} (n={n}, p={p})"
    worst_restrict = 0.0
    for _ in range(50):
        n = 10
        p = float(rng.uniform(0.15, 0.85))
        vals = rng.normal(size=1 << n)
        f = BooleanFn(n=n, values=vals, bias=p)
        a_mask = int(rng.integers(0, 1 << n))
        spec_zeroed = restrict_spectrum(f, a_mask)
        masks = np.arange(1 << n)
        not_a = (~np.uint64(a_mask)) & np.uint64((1 << n) - 1)
        # direct conditional expectation over the coords outside A
        w_out = np.bitwise_count(masks.astype(np.uint64) & not_a).astype(np.int64)
        n_out = int(np.bitwise_count(not_a))
        mu_out = p**w_out * (1.0 - p) ** (n_out - w_out)
        acc = np.zeros(1 << n)
        np.add.at(acc, masks & a_mask, mu_out * vals)
        f_a = BooleanFn(n=n, values=acc[masks & a_mask], bias=p)
        direct = biased_transform(f_a)
        diff = float(np.abs(direct.coeffs - spec_zeroed.coeffs).max())
        worst_restrict = max(worst_restrict, diff)
        if diff > 1e-12:
            return False, f"restriction identity off by {diff:.2e}"
    fails = 0
    for i in range(1000):
        dens = float(rng.uniform(0.02, 0.98))
        vals = (rng.random(1 << 12) < dens).astype(np.float64)
        for p in (0.1, 0.3, 0.5):
            rep = level_k_check(BooleanFn(n=12, values=vals, bias=p))
            if not rep.passed:
                fails += 1
    noise_fails = 0
    for i in range(500):
        dens = float(rng.uniform(0.02, 0.98))
        n = 10
        vals = (rng.random(1 << n) < dens).astype(np.float64)
        p = float(rng.choice([0.1, 0.3, 0.5]))
        rep = noise_operator_check(BooleanFn(n=n, values=vals, bias=p))
        if not rep.passed:
            noise_fails += 1
    ok = fails == 0 and noise_fails == 0
    return ok, (
        f"Parseval rel err <= {worst_rel:.1e}; restriction max diff {worst_restrict:.1e}; "
        f"level-k fails {fails}/3000; noise-bound fails {noise_fails}/500"
    )


@_timed("08-symmetry-identity")
def check_symmetry_identity():
    rng = worker_rng(5, 0)
    maj = np.array([1 if bin(x).count("1") >= 2 else 0 for x in range(8)], dtype=np.float64)
    worst = 0.0
    for p in (0.3, 0.5):
        f = BooleanFn(n=3, values=maj, bias=p)
        g3 = symmetric_group(3)
        for a_mask in (0b001, 0b011, 0b101):
            rep = restriction_identity_check(f, g3, a_mask, tol=1e-9, rng=rng)
            worst = max(worst, rep.max_abs_diff)
            if not rep.passed:
                return False, f"majority-3 identity fails at p={p}, A={a_mask:03b}"
    code = rm_generator(RmParams(1, 3))
    table = bec_indicator_table(code, 0)
    group = gl_shifted_group(3)
    for p in (0.2, 0.5, 0.7):
        f = BooleanFn(n=7, values=table, bias=p)
        for a_mask in (0b0000111, 0b0101010, 0b1110001, 0b0011110):
            rep = restriction_identity_check(f, group, a_mask, tol=1e-9, rng=rng)
            worst = max(worst, rep.max_abs_diff)
            if not rep.passed:
                return False, f"GL(3,2) identity fails at p={p}, A={a_mask:07b}"
    return True, f"all level equalities within 1e-9 (max diff {worst:.1e}; 168-element group exhaustive)"


@_timed("09-gl-orbit-bound")
def check_gl_orbit_bound():
    rng = worker_rng(11, 0)
    for m in (2, 3, 4):
        group = gl_shifted_group(m)
        n = (1 << m) - 1
        for ell in range(1, m):
            a_mask = (1 << ((1 << (m - ell)) - 1)) - 1
            for d in range(1, m - ell + 1):
                s_mask = 0
                for j in range(d):
                    s_mask |= 1 << ((1 << j) - 1)
                prob = orbit_restriction_prob(group, s_mask, a_mask)
                expect = gaussian_binomial(m - ell, d) / gaussian_binomial(m, d)
                if abs(prob.value - expect) > 1e-12:
                    return False, f"exact orbit prob != ratio at m={m}, ell={ell}, d={d}"
                if prob.value > 2.0 ** (-ell * d) + 1e-12:
                    return False, f"orbit prob > 2^-ld at m={m}, ell={ell}, d={d}"
    m = 8
    draws = 20000
    for ell, d in ((1, 1), (1, 2), (2, 1), (2, 2)):
        hits = 0
        vecs = [1 << j for j in range(d)]
        bound_dim = 1 << (m - ell)
        for _ in range(draws):
            mp = sample_gl(m, rng)
            if all(mp.apply(v) < bound_dim for v in vecs):
                hits += 1
        est = hits / draws
        expect = gaussian_binomial(m - ell, d) / gaussian_binomial(m, d)
        sigma = math.sqrt(expect * (1.0 - expect) / draws)
        if abs(est - expect) > 3.0 * sigma + 1e-12:
            return False, f"sampled orbit prob off at m=8, ell={ell}, d={d}: {est} vs {expect}"
    return True, "exact ratios match Gaussian binomials (m<=4); m=8 sampled within 3 sigma"


@_timed("10-three-look-majority")
def check_three_look_majority():
    for a, b, c, maj, bound in majority_union_table():
        if maj > bound:
            return False, f"union bound violated at ({a},{b},{c})"
    code = rm_generator(RmParams(1, 6))
    fam = multi_look_family(6, 3, 2)
    res = mc_majority_looks(code, fam, bsc(0.05), 0, samples=1_000_000, seed=20240, workers=4)
    q = res.single_look_error
    rhs = 3.0 * res.rho * q + 3.0 * (1.0 - res.rho) * q * q
    sigma = res.majority_ci99 / 2.576
    ok = res.majority_error <= rhs + 3.0 * sigma
    return ok, (
        f"majority table exact; MC maj err {res.majority_error:.5f} <= "
        f"3*rho*q+3*(1-rho)*q^2 = {rhs:.5f} (+3sigma, q={q:.5f}, rho={res.rho})"
    )


@_timed("11-recursion-closed-forms")
def check_recursion_closed_forms():
    worst = 0.0
    for delta in (0.01, 0.1, 0.39):
        for rho in (0.25, 0.5, 0.75):
            for k in (1, 5, 20):
                pe = 1.0 - delta
                mm = 1.0 - delta
                for _ in range(k):
                    pe = bec_odds(pe, rho)
                    mm = mmse_odds(mm, rho)
                odds0 = (1.0 - delta) / delta
                want_pe = (1.0 / (2.0 - rho)) ** k * odds0
                want_mm = ((1.0 + rho) / 2.0) ** k * odds0
                rel1 = abs(pe / (1.0 - pe) - want_pe) / want_pe
                rel2 = abs(mm / (1.0 - mm) - want_mm) / want_mm
                worst = max(worst, rel1, rel2)
                if rel1 > 1e-12 or rel2 > 1e-12:
                    return False, f"closed form off at delta={delta}, rho={rho}, k={k}"
    alphas = np.linspace(1e-6, 1.0 - 1e-6, 10000)
    for p in [0.05 * k for k in range(1, 11)]:
        margins = np.array([alpha_relation_margin(float(a), p) for a in alphas])
        if margins.min() < 0.0:
            return False, f"alpha relation fails at p={p}"
    return True, f"odds chains match closed forms to {worst:.1e} rel; alpha relation holds on 10^4-point grid"


@_timed("12-transfer-formulas")
def check_transfer_formulas():
    base = TransferParams(n_block=1024, d=10000, p=0.05, theta=0.1)
    rec = tz_sasoglu_transfer(base, delta=1.0 / 1024**2)
    expected_alpha = math.sqrt(10000) * (math.sqrt(-math.log(0.9)) - math.sqrt(-math.log(0.95)))
    if abs(rec.alpha - expected_alpha) > 1e-9:
        return False, "alpha formula mismatch"
    expected_width = 4.0 * math.sqrt(2.0 * math.log(2.0)) * math.sqrt(math.log(1024.0**2) / 10000.0)
    if abs(rec.width - expected_width) > 1e-9:
        return False, "width formula mismatch"
    alphas = [tz_sasoglu_transfer(TransferParams(1024, 10000, p, 0.25), 1e-6).alpha for p in (0.05, 0.1, 0.2)]
    if not (alphas[0] > alphas[1] > alphas[2]):
        return False, "alpha not decreasing in p below theta"
    widths = [tz_sasoglu_transfer(TransferParams(1024, d, 0.05, 0.25), 1e-6).width for d in (100, 1000, 10000)]
    if not (widths[0] > widths[1] > widths[2]):
        return False, "width not decreasing in d"
    rep15 = parse_code_spec("rep 15")
    table = build_syndrome_table(rep15)
    for p in (0.2, 0.35, 0.5):
        closed = sum(math.comb(15, k) * p**k * (1 - p) ** (15 - k) for k in range(8, 16))
        if abs(block_error_exact(table, p) - closed) > 1e-12:
            return False, f"rep-15 block error != binomial tail at p={p}"
    est = estimate_theta(rep15, samples_per_probe=20000, seed=7, tol=2e-3)
    ok = abs(est.theta - 0.5) <= 0.02
    return ok, f"formulas verified; theta_hat={est.theta:.4f} vs closed-form midpoint 0.5 (Bin(15,p) tail)"


@_timed("13-determinism")
def check_determinism():
    from .cli import run_command

    opts = {
        "code": "rm 1 4", "channel": "bsc 0.05", "mode": "mc",
        "samples": "200000", "seed": "99", "workers": "4", "format": "csv",
    }
    first = run_command("metrics", dict(opts))
    second = run_command("metrics", dict(opts))
    met = mc_extrinsic_metrics(parse_code_spec("rm 1 4"), bsc(0.05), 0, 200000, 99, 4)
    exact = extrinsic_metrics(parse_code_spec("rm 1 4"), bsc(0.05), 0, "exact")
    agree = abs(met.ber - exact.ber) <= 3.0 * (met.ci99["ber"] / 2.576) + 1e-9
    ok = first == second and agree
    return ok, f"rerun bytes identical={first == second}; MC ber within 3 sigma of exact ({met.ber:.5f} vs {exact.ber:.5f})"


@_timed("14-list-ball")
def check_list_ball():
    res = mc_list_ball(5, 0.2, 1_000_000, seed=31, workers=2)
    sigma = res.prob_ci99 / 2.576
    ok = res.prob_exceed <= res.radius + 3.0 * sigma
    return ok, f"Pr(Delta >= {res.radius:.4f}) = {res.prob_exceed:.5f} <= sqrt(Q)+3sigma (Q_hat={res.q_hat:.5f})"


ALL_CHECKS = [
    check_rate_lemma,
    check_nesting_looks,
    check_spread_codes,
    check_bec_two_look,
    check_metric_chain,
    check_exit_area,
    check_fourier_suite,
    check_symmetry_identity,
    check_gl_orbit_bound,
    check_three_look_majority,
    check_recursion_closed_forms,
    check_transfer_formulas,
    check_determinism,
    check_list_ball,
]

SUITES = {fn.criterion: fn for fn in ALL_CHECKS}


def run_suite(names=("all",)) -> list:
    selected = ALL_CHECKS if "all" in names else [SUITES[n] for n in names]
    return [fn() for fn in selected]

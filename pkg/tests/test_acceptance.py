"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v`` or
``python tests/test_acceptance.py``.
"""

import math
import sys
import time

import numpy as np
import pytest
from scipy.integrate import quad

from genzgamma import (
    EULER_GAMMA,
    GFunction,
    ParamSet,
    ScalePair,
    TheoremSetup,
    derivative_identity,
    log_gamma_k,
    log_gamma_p,
    log_gamma_pq,
    log_gamma_q,
    log_gamma_qk,
    psi_classical,
    psi_k,
    psi_p,
    psi_pq_discrepancy,
)
from genzgamma.explorer import problem_value, scan
from genzgamma.suites import LIMIT_PATHS, run_lemma_suite, run_limits, run_theorem_suite

EPS = sys.float_info.epsilon
ROUNDOFF_ULPS = 64


def verdict_line(request, n, ok, detail):
    line = f"ACCEPTANCE {n}: {'PASS' if ok else 'FAIL'} | {detail}"
    with request.config.pluginmanager.getplugin("capturemanager").global_and_fixture_disabled():
        print("\n" + line)
    assert ok, line


def test_criterion_1_lemma_suite(request):
    start = time.perf_counter()
    report = run_lemma_suite()
    elapsed = time.perf_counter() - start
    s = report.summary
    points = sum(s.values())
    # every lemma call evaluates both forms and raises if they disagree beyond
    # the combined tail bounds; re-check the stored pair here as well
    agree = all(abs(c["value"] - c["alt_value"]) <= c["tail_bound"] + c["alt_tail_bound"]
                for c in report.certificates)
    ok = points >= 2000 and s["failed"] == 0 and agree and elapsed <= 120
    verdict_line(request, 1, ok, f"{points} points, passed={s['passed']} failed={s['failed']} "
                                 f"inconclusive={s['inconclusive']}, dual forms agree={agree}, {elapsed:.1f}s")


def test_criterion_2_theorem_suite(request):
    start = time.perf_counter()
    report = run_theorem_suite()
    elapsed = time.perf_counter() - start
    certs = report.certificates
    chains = sum(c["chains"] for c in certs)
    held = sum(c["chain_verdicts"]["holds"] for c in certs)
    agree = all(c["routes_agree"] for c in certs)
    families = {c["family"] for c in certs}
    unit = [c for c in certs if c["family"] == "unit_interval"]
    unit_slope = any(c["setup"]["g"]["family"] == "affine_unit_slope" and c["setup"]["lambda"] == 1.0
                     and c["setup"]["mu"] == 1.0 for c in unit)
    ok = (report.summary["failed"] == 0 and held == chains and agree and families == {"default", "unit_interval"}
          and unit_slope and elapsed <= 300)
    verdict_line(request, 2, ok, f"{len(certs)} setups, {held}/{chains} chains hold, routes agree={agree}, "
                                 f"{len(unit)} unit-interval setups, {elapsed:.1f}s")


def _random_setup(rng, theorem_id):
    lam = float(rng.uniform(0.2, 5.0))
    mu = lam * float(rng.uniform(0.05, 1.0)) if theorem_id in (1, 2) else float(rng.uniform(0.2, 5.0))
    p = int(rng.integers(1, 41))
    q = float(rng.uniform(0.05, 0.95))
    k = float(rng.uniform(1.0, 5.0)) if theorem_id == 2 else float(rng.uniform(0.25, 5.0))
    family = ("affine", "affine_unit_slope", "exponential_saturating")[int(rng.integers(3))]
    g = GFunction(family, float(rng.uniform(0.1, 3.0)), float(rng.uniform(0.1, 3.0)))
    params = {1: ParamSet(p_value=p, q_value=q), 2: ParamSet(q_value=q, k_value=k),
              3: ParamSet(p_value=p, q_value=q, k_value=k), 4: ParamSet(q_value=q, k_value=k)}[theorem_id]
    return TheoremSetup(theorem_id, ScalePair(lam, mu), params, g)


def test_criterion_3_derivative_identities(request):
    rng = np.random.default_rng(20240611)
    worst = {}
    for i in range(200):
        tid = 1 + i % 4
        s = _random_setup(rng, tid)
        t = float(rng.uniform(0.01, 10.0))
        fd, expected, _ = derivative_identity(s, t)
        worst[tid] = max(worst.get(tid, 0.0), abs(fd - expected))
    ok = max(worst.values()) <= 1e-6
    detail = ", ".join(f"{'GHST'[tid - 1]} max err {worst[tid]:.2e}" for tid in sorted(worst))
    verdict_line(request, 3, ok, f"200 inputs: {detail}")


def _k_gamma_quad(k, t):
    # integrand e^{-x^k/k} x^{t-1}; cut where the exponential is below 1e-40
    x_max = (k * 100.0) ** (1.0 / k) * 2.0
    val, _ = quad(lambda x: math.exp(-x**k / k) * x ** (t - 1), 0, x_max, epsabs=0, epsrel=1e-13, limit=400)
    return math.log(val)


def test_criterion_4_special_functions(request):
    quad_err = max(abs(log_gamma_k(k, t).log_value - _k_gamma_quad(k, t))
                   for k in (0.5, 1.0, 2.0, 3.0) for t in (0.5, 1.0, 1.7, 4.0))

    def bracket(n, q):
        return (1 - q**n) / (1 - q)

    checks = []
    for p in (1, 2, 5, 50, 1000):
        checks.append((log_gamma_p(p, 1).value, p / (p + 1)))
        checks.append((psi_p(p, 1).value, math.log(p) - math.fsum(1.0 / j for j in range(1, p + 2))))
    for q in (0.1, 0.5, 0.9, 0.99):
        checks.append((log_gamma_q(q, 1).value, 1.0))
        checks.append((log_gamma_q(q, 2).value, 1.0))
    for k in (0.5, 1.0, 2.0, 3.0):
        checks.append((log_gamma_k(k, k).value, 1.0))
        for q in (0.1, 0.5, 0.9):
            checks.append((log_gamma_qk(q, k, k).value, 1.0))
    for p in (1, 2, 5, 50):
        for q in (0.1, 0.5, 0.9):
            checks.append((log_gamma_pq(p, q, 1).value, bracket(p, q) / bracket(p + 1, q)))
    checks.append((psi_k(1.0, 1.0).value, -EULER_GAMMA))
    checks.append((psi_classical(1.0).value, -EULER_GAMMA))
    worst_ulps = max(abs(got - want) / (EPS * max(1.0, abs(want))) for got, want in checks)
    ok = quad_err <= 1e-8 and worst_ulps <= ROUNDOFF_ULPS
    verdict_line(request, 4, ok, f"Gamma_k vs quadrature max err {quad_err:.2e} on 16 points; "
                                 f"{len(checks)} trivial values within {worst_ulps:.1f} ulps")


def test_criterion_5_limit_decay(request):
    report = run_limits()
    parts = []
    for c in report.certificates:
        errs = [r["error"] for r in c["rows"]]
        parts.append(f"{c['check'][6:]} {errs[0]:.1e}->{errs[-1]:.1e}")
    k_path = [pt["k"] for pt in LIMIT_PATHS["gamma_k"][1]]
    p_path = [pt["p"] for pt in LIMIT_PATHS["gamma_p"][1]]
    ok = (report.summary == {"passed": 5, "failed": 0, "inconclusive": 0}
          and k_path[-1] == 1.0 and p_path[0] == 64 and p_path[-1] == 4096)
    verdict_line(request, 5, ok, "; ".join(parts))


def test_criterion_6_discrepancy(request):
    d = psi_pq_discrepancy(1, 0.5, 1.0)
    err = abs(abs(d) - abs(math.log(0.5)) / 3)
    sizes = [abs(psi_pq_discrepancy(2**i, 0.5, 1.0)) for i in range(8)]
    shown = [s for s in sizes if s > 1e-13]
    shrinking = all(b < a for a, b in zip(shown, shown[1:])) and sizes[-1] < 1e-13
    ok = err <= 1e-12 and shrinking
    verdict_line(request, 6, ok, f"discrepancy(1, .5, 1) = {d:.15f} (|err| {err:.1e}); "
                                 f"p = 1..128: {sizes[0]:.2e} -> {sizes[-1]:.2e}")


def test_criterion_7_explorer(request):
    a, b = scan("P1"), scan("P1")
    identical = a.to_csv().encode() == b.to_csv().encode()
    bad = 0
    for bd in a.boundaries:
        below = problem_value("P1", {**bd.fixed, bd.axis: bd.location - 1e-6}).verdict
        above = problem_value("P1", {**bd.fixed, bd.axis: bd.location + 1e-6}).verdict
        short = {"certified_positive": "positive", "certified_nonpositive": "nonpositive"}
        if short.get(below, "inconclusive") not in (bd.lower_verdict, "inconclusive"):
            bad += 1
        if short.get(above, "inconclusive") not in (bd.upper_verdict, "inconclusive"):
            bad += 1
    ok = identical and bad == 0 and len(a.boundaries) > 0
    verdict_line(request, 7, ok, f"{len(a.verdicts)} points, CSV byte-identical={identical}, "
                                 f"{len(a.boundaries)} boundaries, {bad} bad re-probes")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))

"""Acceptance gate. Each criterion prints one PASS/FAIL line."""

import random
import time
from fractions import Fraction
from math import comb

import pytest

from vcbound.extremal import ak_candidate, ak_family, audit_sweep, full_family, hamming_ball
from vcbound.kk import cascade_bound, gen_binomial, kk_lower_bound, solve_alpha
from vcbound.search import PROVED_OPTIMAL, max_family_search
from vcbound.setsystem import SetSystem, k_subsets, shadow, vc_le_uniform
from vcbound.suites import dumps, run_suite


@pytest.fixture
def report(capsys):
    def _report(num, title, ok, detail=""):
        with capsys.disabled():
            print(f"\n[criterion {num}] {'PASS' if ok else 'FAIL'} {title}"
                  + (f" ({detail})" if detail else ""))
        assert ok, f"criterion {num} failed: {detail}"
    return _report


@pytest.fixture(scope="module")
def shadow_suite():
    t = time.perf_counter()
    res = run_suite("shadow", seed=0, count=200, threads=1)
    return res, time.perf_counter() - t


@pytest.fixture(scope="module")
def singularity_suite():
    t = time.perf_counter()
    res = run_suite("singularity", seed=0, count=500, threads=1)
    return res, time.perf_counter() - t


@pytest.fixture(scope="module")
def search_six_two():
    t = time.perf_counter()
    res = max_family_search(6, 2, budget=10**8, seed=0, threads=1)
    return res, time.perf_counter() - t


def _shattered(F, S):
    return len({m & S for m in F}) == 1 << bin(S).count("1")


def _vc_brute(F, n):
    best = -1
    for S in range(1 << n):
        k = bin(S).count("1")
        if k > best and _shattered(F, S):
            best = k
    return best


def test_c1_sauer_shelah(report):
    t = time.perf_counter()
    bad = []
    for n in range(1, 9):
        for d in range(0, n + 1):
            F = hamming_ball(n, d)
            if len(F) != sum(comb(n, i) for i in range(d + 1)) or _vc_brute(F.members, n) != d:
                bad.append((n, d))
    dt = time.perf_counter() - t
    report(1, "Sauer-Shelah sharpness", not bad and dt < 10,
           f"{sum(n + 1 for n in range(1, 9))} pairs, bad={bad}, {dt:.2f}s")


def test_c2_shadow_inequality(report, shadow_suite):
    res, dt = shadow_suite
    inst = res["instances"]
    ok = (len(inst) == 200 and not res["failures"]
          and all(r["vc_le_d"] and r["triangular"] and r["rank"] == r["rows"]
                  and r["size"] <= r["shadow"] for r in inst)
          and all(r["n"] <= 9 and r["d"] in (1, 2, 3) for r in inst)
          and dt < 60)
    report(2, "shadow inequality", ok,
           f"200 families, failures={len(res['failures'])}, {dt:.1f}s")


def test_c3_frankl_pach(report, shadow_suite):
    res, _ = shadow_suite
    suite_ok = all(r["size"] <= comb(r["n"], r["d"]) for r in res["instances"])
    tight = []
    for n, d in [(5, 2), (7, 3)]:
        F = full_family(n, d)
        tight.append(vc_le_uniform(F, d) and len(F) == comb(n, d))
    report(3, "Frankl-Pach bound and tightness", suite_ok and all(tight),
           f"suite={suite_ok}, full(5,2)/full(7,3) equality={tight}")


def test_c4_strict_bound_six_two(report, search_six_two):
    res, dt = search_six_two
    v = res.size
    lower = ak_family(6, 2)
    note = ("ak_candidate(6,2) fails the VC check; lower bound 11 from the "
            f"orbit-search fallback (matches={lower.matches})"
            if not vc_le_uniform(ak_candidate(6, 2), 2) else "ak_candidate passes")
    ok = (res.status == PROVED_OPTIMAL and not res.budget_exhausted
          and 11 <= v <= 14 and v < comb(6, 2) and vc_le_uniform(res.family, 2))
    report(4, "strict bound at (6,2)", ok,
           f"v={v}, nodes={res.nodes}, {dt:.2f}s; {note}")


def test_c5_singularity_law(report, singularity_suite):
    res, dt = singularity_suite
    inst = res["instances"]
    law = all((r["det"] == "0") == (r["m0"] == 1) for r in inst)
    tr = all(r["TR"] == r["m0"] for r in inst)
    small = all(r["n"] <= 8 and r["d"] in (2, 3) for r in inst)
    m0 = {}
    for r in inst:
        m0[r["m0"]] = m0.get(r["m0"], 0) + 1
    report(5, "singularity law", len(inst) >= 500 and law and tr and small and not res["failures"],
           f"{len(inst)} instances, m0 histogram={dict(sorted(m0.items()))}, {dt:.1f}s")


def test_c6_kruskal_katona(report):
    exact = all(kk_lower_bound(comb(a, 3), 2) == comb(a, 2)
                and isinstance(kk_lower_bound(comb(a, 3), 2), Fraction)
                for a in range(3, 13))
    rng = random.Random("acceptance-kk")
    families_ok = True
    for _ in range(100):
        n = rng.randint(3, 8)
        triples = k_subsets(n, 3)
        F = SetSystem(n, tuple(rng.sample(triples, rng.randint(1, len(triples)))))
        sh = len(shadow(F, 2))
        if sh < float(kk_lower_bound(len(F), 2)) - 1e-9 or sh < cascade_bound(len(F), 3):
            families_ok = False
    worst = 0.0
    for m in list(range(1, 2001)) + [rng.randint(1, 10**6) for _ in range(500)]:
        for k in (1, 2, 3, 4):
            worst = max(worst, abs(gen_binomial(solve_alpha(m, k), k) - m))
    report(6, "Kruskal-Katona", exact and families_ok and worst <= 1e-9,
           f"binomial exactness={exact}, 100 families ok={families_ok}, "
           f"max round-trip error={worst:.1e}")


def test_c7_impossibility_audit(report):
    t = time.perf_counter()
    reports = audit_sweep(14, 30)
    dt = time.perf_counter() - t
    expected = sum(30 - (2 * d + 2) + 1 for d in range(2, 15))
    ok = (len(reports) == expected
          and all(r.confirmed and r.final_difference < 0 for r in reports)
          and all(isinstance(r.final_difference, int) for r in reports)
          and dt < 1)
    report(7, "impossibility audit", ok, f"{len(reports)} points, {dt * 1000:.0f}ms")


def test_c8_determinism(report, shadow_suite, singularity_suite, search_six_two):
    same = {}
    same["shadow"] = dumps(shadow_suite[0]) == dumps(
        run_suite("shadow", seed=0, count=200, threads=4))
    same["singularity"] = dumps(singularity_suite[0]) == dumps(
        run_suite("singularity", seed=0, count=500, threads=4))
    same["search"] = dumps(search_six_two[0].to_json("acceptance")) == dumps(
        max_family_search(6, 2, seed=0, threads=4).to_json("acceptance"))
    report(8, "determinism across threads {1, 4}", all(same.values()), f"{same}")

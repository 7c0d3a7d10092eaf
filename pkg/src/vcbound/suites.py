"""Seeded randomized suites over certificates, the extended matrix and
Kruskal-Katona bounds.

Instance ``i`` of a suite draws from ``random.Random(f"{name}:{seed}:{i}")``,
so an instance is reproducible on its own and the worker count only changes
which process computes it.
"""

from __future__ import annotations

import json
import random
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from math import comb

from . import __version__
from .extremal import random_vc_family
from .kk import cascade_bound, kk_lower_bound
from .polycert import (
    extended_matrix,
    find_witnesses,
    predicted_determinant,
    triangular_certificate,
)
from .setsystem import SetSystem, elements_of, k_subsets, shadow, submasks, vc_le_uniform

KK_SLACK = 1e-9


def _rng(name: str, seed: int, i: int) -> random.Random:
    return random.Random(f"{name}:{seed}:{i}")


def shadow_instance(seed: int, i: int) -> dict:
    rng = _rng("shadow", seed, i)
    d = rng.choice((1, 2, 3))
    n = rng.randint(d + 2, 9)
    F = random_vc_family(n, d, rng)
    cert = triangular_certificate(F, d)
    return {
        "index": i,
        "n": n,
        "d": d,
        "size": len(F),
        "vc_le_d": vc_le_uniform(F, d),
        "shadow": cert.shadow_size,
        "frankl_pach": comb(n, d),
        "rows": cert.rows,
        "rank": cert.matrix_rank,
        "triangular": cert.triangular,
        "cases": all(cert.case_verdicts.values()),
        "count_inequality": cert.count_lhs <= cert.count_rhs,
        "shadow_bound": len(F) <= cert.shadow_size,
        "frankl_pach_bound": len(F) <= comb(n, d),
        "passed": cert.passed,
    }


def singularity_instance(seed: int, i: int) -> dict:
    rng = _rng("singularity", seed, i)
    while True:
        d = rng.choice((2, 3))
        n = rng.randint(d + 2, 8)
        F = random_vc_family(n, d, rng)
        Ys = [Y for Y in k_subsets(n, d + 1) if Y not in F]
        if Ys:
            break
    wit = find_witnesses(F, d)
    Y = rng.choice(Ys)
    # Half the time aim Z at a trace that matches some witness, so m0 >= 1
    # shows up often enough to exercise both sides of the law.
    hits = sorted({Fi & Y for Fi, Bi in zip(F.members, wit.witnesses) if Fi & Y == Bi})
    if hits and rng.random() < 0.5:
        Z = rng.choice(hits)
    else:
        Z = rng.choice([z for z in submasks(Y) if z != Y])
    E = extended_matrix(wit, Y, Z)
    det = E.determinant()
    return {
        "index": i,
        "n": n,
        "d": d,
        "size": len(F),
        "Y": elements_of(Y),
        "Z": elements_of(Z),
        "order": E.order,
        "det": str(det),
        "predicted_det": str(predicted_determinant(E)),
        "m0": E.m0,
        "TR": E.TR,
        "layout_ok": not E.layout_violations(),
        "law_holds": (det == 0) == (E.m0 == 1),
        "TR_equals_m0": E.TR == E.m0,
    }


def kk_instance(seed: int, i: int) -> dict:
    rng = _rng("kk", seed, i)
    n = rng.randint(3, 8)
    triples = k_subsets(n, 3)
    size = rng.randint(1, len(triples))
    F = SetSystem(n, tuple(sorted(rng.sample(triples, size))))
    sh = len(shadow(F, 2))
    frac = kk_lower_bound(size, 2)
    exact = cascade_bound(size, 3)
    return {
        "index": i,
        "n": n,
        "size": size,
        "shadow": sh,
        "kk_bound": str(frac),
        "cascade_bound": exact,
        "kk_holds": sh >= float(frac) - KK_SLACK,
        "cascade_holds": sh >= exact,
    }


SUITES = {
    "shadow": (shadow_instance, 200),
    "singularity": (singularity_instance, 500),
    "kk": (kk_instance, 100),
}


def _instance_ok(name: str, rec: dict) -> bool:
    if name == "shadow":
        return (rec["passed"] and rec["vc_le_d"] and rec["cases"]
                and rec["rank"] == rec["rows"] and rec["shadow_bound"]
                and rec["frankl_pach_bound"])
    if name == "singularity":
        return (rec["law_holds"] and rec["TR_equals_m0"] and rec["layout_ok"]
                and rec["det"] == rec["predicted_det"])
    return rec["kk_holds"] and rec["cascade_holds"]


def run_suite(name: str, seed: int = 0, count: int | None = None, threads: int = 1) -> dict:
    fn, default_count = SUITES[name]
    if count is None:
        count = default_count
    work = partial(_call, fn, seed)
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(work, range(count), chunksize=max(1, count // (4 * threads))))
    else:
        records = [work(i) for i in range(count)]
    failures = [r["index"] for r in records if not _instance_ok(name, r)]
    return {
        "version": __version__,
        "suite": name,
        "seed": seed,
        "count": count,
        "failures": failures,
        "passed": not failures,
        "instances": records,
    }


def _call(fn, seed, i):
    return fn(seed, i)


def dumps(obj: dict) -> str:
    """Canonical JSON text used for every machine-readable output."""
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"

"""Search for large (d+1)-uniform families with VC-dimension at most d.

Exact mode is a branch and bound over C([n], d+1). The property "no member
is shattered" is hereditary, so a candidate that cannot join the current
family can be dropped from the whole subtree. Each member keeps a bitmask of
the trace patterns seen on it; a member is shattered once all 2^(d+1)
patterns are present.

The tree is split into one job per first member. Jobs share nothing but the
starting incumbent, so results and node counts do not depend on how many
workers run them.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb

from .setsystem import (
    SetSystem,
    SetSystemError,
    canonical_key,
    k_subsets,
    popcount,
    shadow,
    vc_le_uniform,
)

DEFAULT_BUDGET = 10**8
EXACT_MAX_N = 12
EXACT_MAX_D = 3

PROVED_OPTIMAL = "proved-optimal"
LOWER_BOUND_ONLY = "lower-bound-only"


class BudgetExhausted(Exception):
    pass


class _CapReached(Exception):
    pass


@dataclass
class SearchResult:
    n: int
    d: int
    mode: str
    family: SetSystem
    status: str
    nodes: int
    wall_time: float = 0.0
    jobs: int = 0
    budget_exhausted: bool = False

    @property
    def size(self) -> int:
        return len(self.family)

    @property
    def proved_optimal(self) -> bool:
        return self.status == PROVED_OPTIMAL

    def to_json(self, version: str, timing: bool = False) -> dict:
        out = {
            "version": version,
            "n": self.n,
            "d": self.d,
            "mode": self.mode,
            "best_size": self.size,
            "status": self.status,
            "nodes": self.nodes,
            "jobs": self.jobs,
            "budget_exhausted": self.budget_exhausted,
            "frankl_pach_bound": comb(self.n, self.d),
            "family": [" ".join(map(str, s)) for s in self.family.as_lists()],
        }
        if timing:
            out["wall_time"] = round(self.wall_time, 6)
        return out


class _Space:
    """Candidate sets with precomputed trace-pattern bits.

    ``bit[s][x]`` is the pattern bit that candidate x leaves on candidate s.
    """

    def __init__(self, n: int, d: int, order: list[int]):
        self.n, self.d = n, d
        self.cands = order
        k = d + 1
        self.full = (1 << (1 << k)) - 1
        idx = []
        for S in order:
            elems = [1 << j for j in range(n) if S >> j & 1]
            row = []
            for X in order:
                p = 0
                for pos, e in enumerate(elems):
                    if X & e:
                        p |= 1 << pos
                row.append(1 << p)
            idx.append(row)
        self.bit = idx


def _feasible(space: _Space, state: dict[int, int], chosen: list[int], x: int) -> bool:
    bit = space.bit
    full = space.full
    own = bit[x][x]
    bx = bit[x]
    for c in chosen:
        own |= bx[c]
        if state[c] | bit[c][x] == full:
            return False
    return own != full


def _add(space: _Space, state: dict[int, int], chosen: list[int], x: int) -> list[tuple[int, int]]:
    bit = space.bit
    undo = []
    own = bit[x][x]
    for c in chosen:
        own |= bit[x][c]
        undo.append((c, state[c]))
        state[c] |= bit[c][x]
    state[x] = own
    chosen.append(x)
    return undo


def _remove(state: dict[int, int], chosen: list[int], undo) -> None:
    x = chosen.pop()
    del state[x]
    for c, old in undo:
        state[c] = old


def _family_key(space: _Space, chosen) -> tuple:
    return tuple(sorted((space.cands[i] for i in chosen), key=canonical_key))


def _check_shadow(space: _Space, chosen) -> None:
    fam = SetSystem(space.n, tuple(space.cands[i] for i in chosen))
    assert len(fam) <= len(shadow(fam, space.d)), "incumbent violates |F| <= |shadow|"


def _greedy(space: _Space) -> list[int]:
    state: dict[int, int] = {}
    chosen: list[int] = []
    remaining = list(range(len(space.cands)))
    while remaining:
        best_x, best_score = None, -1
        for x in remaining:
            undo = _add(space, state, chosen, x)
            score = sum(1 for y in remaining if y != x and _feasible(space, state, chosen, y))
            _remove(state, chosen, undo)
            if score > best_score:
                best_x, best_score = x, score
        _add(space, state, chosen, best_x)
        remaining = [y for y in remaining if y != best_x and _feasible(space, state, chosen, y)]
    return chosen


def _rebuild(space: _Space, members) -> tuple[dict[int, int], list[int]]:
    state: dict[int, int] = {}
    chosen: list[int] = []
    for x in members:
        _add(space, state, chosen, x)
    return state, chosen


def _local(space: _Space, start: list[int], budget: int) -> tuple[list[int], int]:
    """1-out / 2-in swaps until no swap helps or the budget runs out."""
    current = list(start)
    evals = 0
    all_idx = range(len(space.cands))
    improved = True
    while improved and evals < budget:
        improved = False
        for out in list(current):
            rest = [c for c in current if c != out]
            state, chosen = _rebuild(space, rest)
            free = [y for y in all_idx if y not in chosen and y != out
                    and _feasible(space, state, chosen, y)]
            evals += len(free) + 1
            for a_pos, a in enumerate(free):
                undo = _add(space, state, chosen, a)
                b = next((y for y in free[a_pos + 1:] if _feasible(space, state, chosen, y)), None)
                evals += 1
                if b is not None:
                    _add(space, state, chosen, b)
                    current = list(chosen)
                    improved = True
                    break
                _remove(state, chosen, undo)
            if improved or evals >= budget:
                break
    return current, evals


@dataclass
class _Job:
    n: int
    d: int
    order: list[int]
    first: int
    incumbent: int
    budget: int
    cap: int


@dataclass
class _JobResult:
    best: tuple | None
    nodes: int
    exhausted: bool
    hit_cap: bool = False


def _run_job(job: _Job) -> _JobResult:
    space = _Space(job.n, job.d, job.order)
    state: dict[int, int] = {}
    chosen: list[int] = []
    best_size = job.incumbent
    best: tuple | None = None
    nodes = 0
    cap = job.cap

    def rec(cands: list[int]) -> None:
        nonlocal nodes, best_size, best
        nodes += 1
        if nodes > job.budget:
            raise BudgetExhausted
        size = len(chosen)
        if size > best_size:
            _check_shadow(space, chosen)
            best_size = size
            best = _family_key(space, chosen)
            if best_size >= cap:
                raise _CapReached
        for pos, x in enumerate(cands):
            if size + len(cands) - pos <= best_size:
                return
            undo = _add(space, state, chosen, x)
            rec([y for y in cands[pos + 1:] if _feasible(space, state, chosen, y)])
            _remove(state, chosen, undo)

    m = len(job.order)
    _add(space, state, chosen, job.first)
    start = [y for y in range(job.first + 1, m) if _feasible(space, state, chosen, y)]
    try:
        rec(start)
    except BudgetExhausted:
        return _JobResult(best, job.budget, True)
    except _CapReached:
        return _JobResult(best, nodes, False, hit_cap=True)
    return _JobResult(best, nodes, False)


def candidate_order(n: int, d: int, seed: int = 0) -> list[int]:
    """Colex order of C([n], d+1); a nonzero seed shuffles it."""
    order = k_subsets(n, d + 1)
    if seed:
        random.Random(seed).shuffle(order)
    return order


def max_family_search(n: int, d: int, mode: str = "exact", budget: int = DEFAULT_BUDGET,
                      seed: int = 0, threads: int = 1) -> SearchResult:
    if mode not in ("exact", "greedy", "local"):
        raise ValueError(f"unknown search mode {mode!r}")
    if d < 1 or n < d + 1:
        raise SetSystemError("search needs d >= 1 and n >= d + 1")
    if mode == "exact" and (n > EXACT_MAX_N or d > EXACT_MAX_D):
        raise SetSystemError(
            f"exact search limited to n <= {EXACT_MAX_N}, d <= {EXACT_MAX_D}")
    t0 = time.perf_counter()
    order = candidate_order(n, d, seed)
    space = _Space(n, d, order)
    greedy = _greedy(space)
    nodes = len(greedy)
    incumbent = greedy
    if mode in ("local", "exact"):
        incumbent, evals = _local(space, greedy, budget)
        nodes += evals
    inc_key = _family_key(space, incumbent)
    best_key, best_size = inc_key, len(inc_key)
    status = LOWER_BOUND_ONLY
    exhausted = False
    jobs = 0
    cap = comb(n, d)

    if mode == "exact":
        if best_size >= cap:
            status = PROVED_OPTIMAL
        else:
            job_list = [_Job(n, d, order, first, best_size, budget, cap)
                        for first in range(len(order))]
            jobs = len(job_list)
            if threads > 1:
                with ProcessPoolExecutor(max_workers=threads) as pool:
                    results = list(pool.map(_run_job, job_list))
            else:
                results = [_run_job(j) for j in job_list]
            nodes += sum(r.nodes for r in results)
            exhausted = any(r.exhausted for r in results) or nodes > budget
            found = [r.best for r in results if r.best is not None]
            if found:
                top = max(len(f) for f in found)
                if top > best_size:
                    best_size = top
                    best_key = min(f for f in found if len(f) == top)
            if not exhausted:
                status = PROVED_OPTIMAL

    family = SetSystem(n, best_key)
    if not vc_le_uniform(family, d):
        raise AssertionError("search returned a family with VC-dimension above d")
    if status == PROVED_OPTIMAL and len(family) > cap:
        raise AssertionError("proved optimum exceeds C(n, d)")
    return SearchResult(n=n, d=d, mode=mode, family=family, status=status,
                        nodes=nodes, wall_time=time.perf_counter() - t0,
                        jobs=jobs, budget_exhausted=exhausted)


def brute_force_max(n: int, d: int) -> int:
    """Largest VC-bounded subfamily of C([n], d+1) by full enumeration.

    Only feasible for at most ~20 candidate sets.
    """
    cands = k_subsets(n, d + 1)
    m = len(cands)
    if m > 22:
        raise SetSystemError("brute force limited to 22 candidate sets")
    best = 0
    for bits in range(1 << m):
        size = popcount(bits)
        if size <= best:
            continue
        fam = SetSystem(n, tuple(c for i, c in enumerate(cands) if bits >> i & 1))
        if vc_le_uniform(fam, d):
            best = size
    return best

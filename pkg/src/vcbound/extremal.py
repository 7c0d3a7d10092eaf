"""Constructions, structural checks and the impossibility arithmetic for
(d+1)-uniform families with VC-dimension at most d."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .kk import solve_alpha
from .polycert import WitnessAssignment
from .setsystem import (
    SetSystem,
    SetSystemError,
    canonical_key,
    elements_of,
    k_subsets,
    mask_of,
    popcount,
    shadow,
    submasks,
    vc_le_uniform,
)

VIOLATION_CAP = 100


# -- constructions -----------------------------------------------------------

def star(n: int, d: int) -> SetSystem:
    """All (d+1)-subsets of [n] containing element 1."""
    if d < 0 or n < d + 1:
        raise SetSystemError("star needs n >= d + 1 >= 1")
    return SetSystem(n, tuple(m for m in k_subsets(n, d + 1) if m & 1))


def ak_candidate(n: int, d: int) -> SetSystem:
    """Star at 1 plus every (d+1)-set containing {2, 3, 4} but not 1.

    Size C(n-1, d) + C(n-4, d-2).
    """
    if d < 2 or n < 2 * (d + 1):
        raise SetSystemError("ak_candidate needs d >= 2 and n >= 2(d + 1)")
    core = mask_of((2, 3, 4))
    extra = tuple(m for m in k_subsets(n, d + 1) if not m & 1 and m & core == core)
    return SetSystem(n, star(n, d).members + extra)


def full_family(n: int, d: int) -> SetSystem:
    """All (d+1)-subsets of [2d+1]."""
    if n != 2 * d + 1:
        raise SetSystemError("full_family is only VC-bounded at n = 2d + 1")
    return SetSystem(n, tuple(k_subsets(n, d + 1)))


def hamming_ball(n: int, d: int) -> SetSystem:
    """Every subset of [n] of size at most d (not uniform)."""
    if not 0 <= d <= n:
        raise SetSystemError("hamming_ball needs 0 <= d <= n")
    members = []
    for k in range(d + 1):
        members.extend(k_subsets(n, k))
    return SetSystem(n, tuple(members))


def orbit_search(n: int, d: int, core: int = 4) -> SetSystem:
    """Largest VC-bounded union of orbits of Sym({core+1..n}) on C([n], d+1).

    An orbit is the set of (d+1)-sets with a fixed intersection with [core].
    Unions are explored depth-first over orbit types; VC-boundedness is
    hereditary, so an infeasible partial union prunes its subtree. Ties go to
    the lexicographically first list of types.
    """
    core = min(core, n)
    cm = (1 << core) - 1
    cands = k_subsets(n, d + 1)
    types = sorted({c & cm for c in cands}, key=lambda t: (popcount(t), t))
    orbits = [tuple(c for c in cands if c & cm == t) for t in types]
    best: list = [0, ()]

    def rec(start: int, members: tuple) -> None:
        if len(members) > best[0]:
            best[0], best[1] = len(members), members
        remaining = sum(len(o) for o in orbits[start:])
        if len(members) + remaining <= best[0]:
            return
        for i in range(start, len(orbits)):
            grown = members + orbits[i]
            if vc_le_uniform(SetSystem(n, grown), d):
                rec(i + 1, grown)

    rec(0, ())
    return SetSystem(n, tuple(sorted(best[1], key=canonical_key)))


@dataclass
class AKResult:
    """Outcome of building a family of the Ahlswede-Khachatrian size C(n-1, d) + C(n-4, d-2)."""

    n: int
    d: int
    target: int
    candidate_passes: bool
    family: SetSystem
    source: str  # "candidate" or "orbit-search"

    @property
    def matches(self) -> bool:
        return len(self.family) == self.target and vc_le_uniform(self.family, self.d)


def ak_family(n: int, d: int) -> AKResult:
    """A VC-bounded family of size C(n-1, d) + C(n-4, d-2).

    Uses :func:`ak_candidate` when it passes the VC check. Otherwise falls
    back to :func:`orbit_search` and keeps the first ``target`` members in
    canonical order (subfamilies stay VC-bounded).
    """
    target = comb(n - 1, d) + comb(n - 4, d - 2)
    cand = ak_candidate(n, d)
    if vc_le_uniform(cand, d):
        return AKResult(n, d, target, True, cand, "candidate")
    found = orbit_search(n, d)
    fam = SetSystem(n, found.members[:target])
    return AKResult(n, d, target, False, fam, "orbit-search")


CONSTRUCTIONS = {
    "star": star,
    "ak": ak_candidate,
    "full": full_family,
    "ak-search": lambda n, d: ak_family(n, d).family,
    "hamming": hamming_ball,
}


def random_vc_family(n: int, d: int, rng: random.Random, density: float | None = None) -> SetSystem:
    """Random (d+1)-uniform family pruned until its VC-dimension is at most d.

    Starts from a random subfamily of C([n], d+1) and deletes a random
    shattered member until none is left.
    """
    if density is None:
        density = rng.uniform(0.2, 0.9)
    members = [m for m in k_subsets(n, d + 1) if rng.random() < density]
    target = 1 << (d + 1)
    while True:
        shattered = [S for S in members if len({m & S for m in members}) == target]
        if not shattered:
            break
        members.remove(rng.choice(shattered))
    rng.shuffle(members)
    return SetSystem(n, tuple(members))


# -- structure of near-extremal families -----------------------------------------

@dataclass
class StructureReport:
    n: int
    d: int
    property1: bool
    property1_violations: list[tuple[int, int, int]]
    property1_violation_count: int
    property1_size_d: bool
    property2: bool
    property2_violations: list[tuple[int, int]]
    complement_size: int
    complement_shadow_size: int
    size_d_witnesses: int
    distinct_size_d_witnesses: int
    shadow_equals_witnesses: bool
    double_count_lhs: int
    double_count_rhs: int

    @property
    def double_count_holds(self) -> bool:
        return self.double_count_lhs == self.double_count_rhs

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "property1": {
                "holds": self.property1,
                "violation_count": self.property1_violation_count,
                "violations": [
                    {"Y": elements_of(Y), "Z": elements_of(Z), "count": c}
                    for Y, Z, c in self.property1_violations
                ],
                "holds_for_size_d": self.property1_size_d,
            },
            "property2": {
                "holds": self.property2,
                "violations": [[i + 1, j + 1] for i, j in self.property2_violations],
            },
            "complement_size": self.complement_size,
            "complement_shadow_size": self.complement_shadow_size,
            "size_d_witnesses": self.size_d_witnesses,
            "distinct_size_d_witnesses": self.distinct_size_d_witnesses,
            "shadow_equals_witnesses": self.shadow_equals_witnesses,
            "double_count": {
                "lhs": self.double_count_lhs,
                "rhs": self.double_count_rhs,
                "holds": self.double_count_holds,
            },
        }


def verify_structure(wit: WitnessAssignment) -> StructureReport:
    """Check the exactly-one property and the non-trace property.

    property1 (exactly one): for every non-member (d+1)-set Y and every
    proper Z of Y there is exactly one i with F_i ∩ Y = Z = B_i.
    property2 (non-trace): F_i ∩ F_j != B_i for all i, j.
    """
    F = wit.family
    k = F.uniformity()
    if k is None:
        raise SetSystemError("verify_structure needs a nonempty uniform family")
    d = k - 1
    n = F.n
    members = F.members
    B = wit.witnesses
    Ys = [Y for Y in k_subsets(n, k) if Y not in F]

    v1: list[tuple[int, int, int]] = []
    nv1 = 0
    size_d_ok = True
    for Y in Ys:
        counts: dict[int, int] = {}
        for Fi, Bi in zip(members, B):
            t = Fi & Y
            if t == Bi:
                counts[t] = counts.get(t, 0) + 1
        for Z in submasks(Y):
            if Z == Y:
                continue
            c = counts.get(Z, 0)
            if c != 1:
                nv1 += 1
                if popcount(Z) == d:
                    size_d_ok = False
                if len(v1) < VIOLATION_CAP:
                    v1.append((Y, Z, c))

    v2 = []
    for i, (Fi, Bi) in enumerate(zip(members, B)):
        for j, Fj in enumerate(members):
            if Fi & Fj == Bi:
                v2.append((i, j))

    Yfam = SetSystem(n, tuple(Ys))
    dY = set(shadow(Yfam, d).members)
    Bd = [b for b in B if popcount(b) == d]
    return StructureReport(
        n=n, d=d,
        property1=nv1 == 0,
        property1_violations=v1,
        property1_violation_count=nv1,
        property1_size_d=size_d_ok,
        property2=not v2,
        property2_violations=v2[:VIOLATION_CAP],
        complement_size=len(Ys),
        complement_shadow_size=len(dY),
        size_d_witnesses=len(Bd),
        distinct_size_d_witnesses=len(set(Bd)),
        shadow_equals_witnesses=dY == set(Bd),
        double_count_lhs=len(dY) * (n - d - 1),
        double_count_rhs=(d + 1) * len(Ys),
    )


# -- impossibility chain ---------------------------------------------------------

@dataclass
class AuditReport:
    n: int
    d: int
    family_size: int  # hypothetical |F| = C(n, d)
    complement_size: int  # |Y| = C(n, d+1) - C(n, d)
    forced_shadow: Fraction  # |Y| (d+1) / (n-d-1)
    alpha: float
    required: int  # C(n-1, d+1), forced by alpha >= n - 1
    final_difference: int  # C(n-1, d) - C(n, d)
    identity_holds: bool

    @property
    def alpha_below_n_minus_1(self) -> bool:
        return self.complement_size < self.required

    @property
    def confirmed(self) -> bool:
        return (self.alpha_below_n_minus_1 and self.final_difference < 0
                and self.identity_holds)

    def to_json(self) -> dict:
        fs = self.forced_shadow
        return {
            "n": self.n,
            "d": self.d,
            "family_size": str(self.family_size),
            "complement_size": str(self.complement_size),
            "forced_shadow": str(fs.numerator) if fs.denominator == 1 else f"{fs.numerator}/{fs.denominator}",
            "alpha": repr(self.alpha),
            "required": str(self.required),
            "final_difference": str(self.final_difference),
            "identity_holds": self.identity_holds,
            "contradiction": "confirmed" if self.confirmed else "NOT confirmed",
        }

    def line(self) -> str:
        return (f"|Y|={self.complement_size} required>={self.required} "
                f"contradiction={'confirmed' if self.confirmed else 'NOT confirmed'}")


def impossibility_audit(n: int, d: int) -> AuditReport:
    """Run the counting chain under the hypothesis |F| = C(n, d).

    The complement Y of such an F would need a d-shadow of exactly
    |Y| (d+1) / (n-d-1); Kruskal-Katona then forces C(alpha, d+1) = |Y| with
    alpha >= n - 1, i.e. |Y| >= C(n-1, d+1). All decisions are integer
    comparisons; alpha is reported for reference only.
    """
    if d < 2 or n < 2 * d + 2:
        raise SetSystemError("impossibility_audit needs d >= 2 and n >= 2d + 2")
    fam = comb(n, d)
    Y = comb(n, d + 1) - fam
    required = comb(n - 1, d + 1)
    diff = comb(n - 1, d) - comb(n, d)
    return AuditReport(
        n=n, d=d, family_size=fam, complement_size=Y,
        forced_shadow=Fraction(Y * (d + 1), n - d - 1),
        alpha=solve_alpha(Y, d + 1),
        required=required,
        final_difference=diff,
        identity_holds=Y - required == diff,
    )


def audit_sweep(dmax: int, nmax: int) -> list[AuditReport]:
    return [impossibility_audit(n, d)
            for d in range(2, dmax + 1)
            for n in range(2 * d + 2, nmax + 1)]

"""Multilinear polynomials on 0/1 points and linear-independence certificates.

Every polynomial here is stored multilinearly (``x_j**2`` folded into
``x_j``), which is harmless because it is only ever evaluated at
characteristic vectors. Evaluation matrices are indexed ``[point][poly]``:
row ``r`` is the characteristic vector ``v_A`` of the r-th point set, column
``c`` the c-th polynomial. With points and polynomials listed in matching
order, the triangular criterion asks for a lower-triangular matrix with a
nonzero diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from . import linalg
from .setsystem import (
    SetSystem,
    SetSystemError,
    canonical_key,
    elements_of,
    format_set,
    k_subsets,
    popcount,
    shadow,
    submasks,
)


class ShatteredError(SetSystemError):
    """A member of the family is shattered, so VC-dimension exceeds d."""

    def __init__(self, index: int, member: int):
        self.index = index
        self.member = member
        super().__init__(
            f"member F_{index + 1} = {format_set(member)} is shattered; VC-dimension exceeds d")


@dataclass(frozen=True)
class MultilinearPoly:
    """Integer-coefficient multilinear polynomial; monomials are bitmasks."""

    n: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "terms", {m: c for m, c in self.terms.items() if c})

    @property
    def degree(self) -> int:
        return max((popcount(m) for m in self.terms), default=-1)

    def __call__(self, point: int) -> int:
        return evaluate(self, point)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms, key=canonical_key):
            c = self.terms[mono]
            name = "*".join(f"x{j}" for j in elements_of(mono))
            if not name:
                parts.append(f"{c:+d}")
            elif c == 1:
                parts.append(f"+{name}")
            elif c == -1:
                parts.append(f"-{name}")
            else:
                parts.append(f"{c:+d}*{name}")
        return " ".join(parts).lstrip("+")


def evaluate(p: MultilinearPoly, point: int) -> int:
    """p(v_A): sum of the coefficients of monomials contained in A."""
    return sum(c for m, c in p.terms.items() if m & point == m)


def _witness_product(n: int, ones: int, signed: int) -> dict[int, int]:
    """Expand prod_{ones} x_j * prod_{signed} (x_j - 1) - prod_{ones|signed} x_j."""
    w = popcount(signed)
    terms = {}
    for sub in submasks(signed):
        if sub == signed:
            continue  # cancels against the subtracted top monomial
        terms[ones | sub] = -1 if (w - popcount(sub)) & 1 else 1
    return terms


def f_poly(n: int, member: int, witness: int) -> MultilinearPoly:
    """f for member F_i with witness B_i, a proper subset of F_i."""
    if witness & ~member or witness == member:
        raise SetSystemError(
            f"witness {format_set(witness)} must be a proper subset of {format_set(member)}")
    return MultilinearPoly(n, _witness_product(n, witness, member & ~witness))


def y_poly(n: int, Y: int, Z: int) -> MultilinearPoly:
    """The extra polynomial for a non-member Y and a proper subset Z of Y."""
    if Z & ~Y or Z == Y:
        raise SetSystemError(f"Z = {format_set(Z)} must be a proper subset of Y = {format_set(Y)}")
    return MultilinearPoly(n, _witness_product(n, Z, Y & ~Z))


def h_poly(n: int, H: int, d: int) -> MultilinearPoly:
    """(x_1 + ... + x_n - d - 1) * prod_{j in H} x_j, multilinearized."""
    size = popcount(H)
    if size >= d:
        raise SetSystemError(f"|H| = {size} must be at most d - 1 = {d - 1}")
    terms = {H: size - d - 1}
    for j in range(n):
        bit = 1 << j
        if not H & bit:
            terms[H | bit] = 1
    return MultilinearPoly(n, terms)


def g_poly(n: int, G: int) -> MultilinearPoly:
    return MultilinearPoly(n, {G: 1})


# -- witnesses ---------------------------------------------------------------

@dataclass(frozen=True)
class WitnessAssignment:
    """Per-member non-trace sets: B_i is a proper subset of F_i and no member
    F satisfies F ∩ F_i = B_i."""

    family: SetSystem
    witnesses: tuple[int, ...]

    def __post_init__(self):
        if len(self.witnesses) != len(self.family):
            raise SetSystemError("need exactly one witness per member")
        members = self.family.members
        for i, (Fi, Bi) in enumerate(zip(members, self.witnesses)):
            if Bi & ~Fi or Bi == Fi:
                raise SetSystemError(
                    f"B_{i + 1} = {format_set(Bi)} is not a proper subset of F_{i + 1}")
            for j, F in enumerate(members):
                if F & Fi == Bi:
                    raise SetSystemError(
                        f"B_{i + 1} = {format_set(Bi)} is the trace of F_{j + 1} on F_{i + 1}")

    def __getitem__(self, i: int) -> int:
        return self.witnesses[i]

    def __len__(self) -> int:
        return len(self.witnesses)


def _submasks_canonical(mask: int) -> list[int]:
    return sorted(submasks(mask), key=canonical_key)


def find_witnesses(F: SetSystem, d: int) -> WitnessAssignment:
    """Smallest (size, mask) non-trace subset of each member.

    Raises ShatteredError naming the first shattered member, which means the
    family has VC-dimension above d.
    """
    k = d + 1
    for m in F.members:
        if popcount(m) != k:
            raise SetSystemError(f"family is not {k}-uniform")
    out = []
    for i, Fi in enumerate(F.members):
        traces = {m & Fi for m in F.members}
        for B in _submasks_canonical(Fi):
            if B not in traces:
                out.append(B)
                break
        else:
            raise ShatteredError(i, Fi)
    return WitnessAssignment(F, tuple(out))


# -- evaluation matrices -------------------------------------------------------

@dataclass(frozen=True)
class PolyLabel:
    kind: str  # "f", "h", "g" or "y"
    sets: tuple[int, ...]

    def __str__(self) -> str:
        if self.kind == "f":
            return f"f[F={format_set(self.sets[0])},B={format_set(self.sets[1])}]"
        if self.kind == "y":
            return f"y[Y={format_set(self.sets[0])},Z={format_set(self.sets[1])}]"
        return f"{self.kind}[{format_set(self.sets[0])}]"


@dataclass
class EvalMatrix:
    points: list[int]
    labels: list[PolyLabel]
    polys: list[MultilinearPoly]
    entries: list[list[int]]

    @classmethod
    def build(cls, points: Sequence[int], labels: Sequence[PolyLabel],
              polys: Sequence[MultilinearPoly]) -> "EvalMatrix":
        entries = [[evaluate(p, a) for p in polys] for a in points]
        return cls(list(points), list(labels), list(polys), entries)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.points), len(self.polys)

    def rank(self) -> int:
        return rank(self)


def rank(M: EvalMatrix | Sequence[Sequence[int]]) -> int:
    entries = M.entries if isinstance(M, EvalMatrix) else M
    if not entries:
        return 0
    return linalg.rank(entries)


def triangular_violation(entries: Sequence[Sequence[int]]) -> tuple[int, int] | None:
    """First (row, col) breaking 'lower-triangular with nonzero diagonal'.

    This is the triangular criterion for linear independence: polynomial c
    is nonzero at its own point c and vanishes at every earlier point r < c.
    """
    for r, row in enumerate(entries):
        if r < len(row) and row[r] == 0:
            return r, r
        for c in range(r + 1, len(row)):
            if row[c] != 0:
                return r, c
    return None


def triangular_check(polys: Sequence[MultilinearPoly], points: Sequence[int]) -> tuple[int, int] | None:
    """Triangular criterion for an arbitrary matched (polys, points) pair."""
    if len(polys) != len(points):
        raise ValueError("need as many points as polynomials")
    return triangular_violation([[evaluate(p, a) for p in polys] for a in points])


def lower_sets(n: int, max_size: int) -> list[int]:
    """All subsets of [n] with size at most max_size, by (size, mask)."""
    out = []
    for k in range(0, max_size + 1):
        out.extend(k_subsets(n, k))
    return out


def ambient_dimension(n: int, d: int) -> int:
    return sum(comb(n, i) for i in range(d + 1))


# Blocks of the certificate matrix: (point block, poly block) for each of the
# six evaluation cases, in the order the case analysis is usually presented.
CASES = (
    ("F", "f", "f at member points: -1 diagonal, zero above"),
    ("F", "h", "h vanishes at members (size d+1)"),
    ("F", "g", "g vanishes at members (G outside the shadow)"),
    ("H", "h", "h at H points: nonzero diagonal, zero above"),
    ("H", "g", "g vanishes at sets of size below d"),
    ("G", "g", "g at G points: identity"),
)


@dataclass
class ShadowCertificate:
    family: SetSystem
    d: int
    witnesses: WitnessAssignment
    matrix: EvalMatrix
    blocks: dict[str, tuple[int, int]]
    violation: tuple[int, int] | None
    case_verdicts: dict[str, bool]
    matrix_rank: int
    shadow_size: int

    @property
    def n(self) -> int:
        return self.family.n

    @property
    def size(self) -> int:
        return len(self.family)

    @property
    def rows(self) -> int:
        return len(self.matrix.points)

    @property
    def triangular(self) -> bool:
        return self.violation is None

    @property
    def fp_bound(self) -> int:
        return comb(self.n, self.d)

    @property
    def count_lhs(self) -> int:
        n, d = self.n, self.d
        return (self.size + sum(comb(n, i) for i in range(d))
                + comb(n, d) - self.shadow_size)

    @property
    def count_rhs(self) -> int:
        return ambient_dimension(self.n, self.d)

    @property
    def passed(self) -> bool:
        return (self.triangular and self.matrix_rank == self.rows
                and self.count_lhs <= self.count_rhs
                and self.size <= self.shadow_size <= self.fp_bound)

    def summary(self) -> str:
        return (f"|F|={self.size} ≤ |shadow|={self.shadow_size} "
                f"≤ C({self.n},{self.d})={self.fp_bound}")

    def to_json(self, version: str) -> dict:
        M = self.matrix
        return {
            "version": version,
            "n": self.n,
            "d": self.d,
            "family": self.family.as_lists(),
            "witnesses": [elements_of(b) for b in self.witnesses.witnesses],
            "points": [format_set(a) for a in M.points],
            "polynomials": [str(lab) for lab in M.labels],
            "entries": [[str(v) for v in row] for row in M.entries],
            "orientation": "entries[point][polynomial]",
            "verdicts": {
                "triangular": self.triangular,
                "first_violation": list(self.violation) if self.violation else None,
                "cases": self.case_verdicts,
                "rank": self.matrix_rank,
                "full_rank": self.matrix_rank == self.rows,
                "passed": self.passed,
            },
            "count_inequality": {
                "lhs": str(self.count_lhs),
                "rhs": str(self.count_rhs),
                "holds": self.count_lhs <= self.count_rhs,
            },
            "family_size": self.size,
            "shadow_size": self.shadow_size,
            "frankl_pach_bound": str(self.fp_bound),
            "shadow_bound_holds": self.size <= self.shadow_size,
            "frankl_pach_holds": self.size <= self.fp_bound,
        }


def _case_verdicts(entries, blocks) -> dict[str, bool]:
    verdicts = {}
    for pblock, qblock, name in CASES:
        r0, r1 = blocks[pblock]
        c0, c1 = blocks[qblock]
        ok = True
        for r in range(r0, r1):
            row = entries[r]
            for c in range(c0, c1):
                v = row[c]
                if (r == c and v == 0) or (c > r and v != 0):
                    ok = False
                    break
            if not ok:
                break
        if pblock == "F" and qblock == "f" and ok:
            ok = all(entries[r][r] == -1 for r in range(r0, r1))
        if pblock == "G" and qblock == "g" and ok:
            ok = all(entries[r][r] == 1 for r in range(r0, r1))
        verdicts[name] = ok
    return verdicts


def triangular_certificate(F: SetSystem, d: int) -> ShadowCertificate:
    """Independence certificate for the f, h and g families of F.

    Order: f_{F_i} in input order, h_H for |H| <= d-1 by (size, mask), g_G for
    d-sets outside the d-shadow by mask; points v_{F_i}, v_H, v_G likewise.
    """
    n = F.n
    wit = find_witnesses(F, d)
    Hs = lower_sets(n, d - 1)
    sh = shadow(F, d)
    Gs = [G for G in k_subsets(n, d) if G not in sh]

    labels, polys = [], []
    for Fi, Bi in zip(F.members, wit.witnesses):
        labels.append(PolyLabel("f", (Fi, Bi)))
        polys.append(f_poly(n, Fi, Bi))
    for H in Hs:
        labels.append(PolyLabel("h", (H,)))
        polys.append(h_poly(n, H, d))
    for G in Gs:
        labels.append(PolyLabel("g", (G,)))
        polys.append(g_poly(n, G))
    for p in polys:
        assert p.degree <= d, "constructed polynomial escapes V_{n,d}"

    points = list(F.members) + Hs + Gs
    M = EvalMatrix.build(points, labels, polys)
    m, w = len(F), len(Hs)
    blocks = {"F": (0, m), "f": (0, m), "H": (m, m + w), "h": (m, m + w),
              "G": (m + w, len(points)), "g": (m + w, len(points))}
    return ShadowCertificate(
        family=F, d=d, witnesses=wit, matrix=M, blocks=blocks,
        violation=triangular_violation(M.entries),
        case_verdicts=_case_verdicts(M.entries, blocks),
        matrix_rank=rank(M), shadow_size=len(sh),
    )


# -- the extended matrix D -----------------------------------------------------

@dataclass
class ExtendedMatrix:
    """Coefficient matrix for y_{Y,Z} together with all f and h polynomials.

    Points are v_Y, v_{F_1..F_m}, v_H; polynomials y, f_1..f_m, h_H.
    """

    Y: int
    Z: int
    d: int
    matrix: EvalMatrix
    T: list[int]
    R: list[int]
    m0: int

    @property
    def D(self) -> list[list[int]]:
        return self.matrix.entries

    @property
    def order(self) -> int:
        return len(self.D)

    @property
    def TR(self) -> int:
        return sum(t * r for t, r in zip(self.T, self.R))

    def determinant(self) -> int:
        return linalg.determinant(self.D)

    def layout_violations(self) -> list[str]:
        """Deviations from the expected block layout (empty when sound)."""
        D = self.D
        m = len(self.T)
        size = len(D)
        out = []
        if D[0][0] != -1:
            out.append(f"y(v_Y) = {D[0][0]}, expected -1")
        if D[0][1:m + 1] != self.T:
            out.append("top band differs from T")
        if any(D[0][c] for c in range(m + 1, size)):
            out.append("h nonzero at v_Y")
        for i in range(m):
            row = D[i + 1]
            if row[0] != self.R[i]:
                out.append(f"left band differs from R at {i}")
            for j in range(m):
                if row[j + 1] != (-1 if i == j else 0):
                    out.append(f"f block is not -E at ({i}, {j})")
            if any(row[c] for c in range(m + 1, size)):
                out.append(f"h nonzero at member point {i}")
        for r in range(m + 1, size):
            if D[r][r] == 0:
                out.append(f"A has zero diagonal at {r}")
            if any(D[r][c] for c in range(r + 1, size)):
                out.append(f"A not lower-triangular at row {r}")
        return out

    def summary(self, det: int | None = None) -> dict:
        if det is None:
            det = self.determinant()
        singular = det == 0
        return {
            "Y": elements_of(self.Y),
            "Z": elements_of(self.Z),
            "order": self.order,
            "det": str(det),
            "m0": self.m0,
            "TR": self.TR,
            "singular": singular,
            "consistent": singular == (self.m0 == 1) and self.TR == self.m0,
        }


def m0_count(wit: WitnessAssignment, Y: int, Z: int) -> int:
    """Number of i with F_i ∩ Y = Z = B_i."""
    return sum(1 for Fi, Bi in zip(wit.family.members, wit.witnesses)
               if Bi == Z and Fi & Y == Z)


def extended_matrix(wit: WitnessAssignment, Y: int, Z: int) -> ExtendedMatrix:
    F = wit.family
    n = F.n
    d = popcount(Y) - 1
    if Y & ~F.ground_mask:
        raise SetSystemError("Y is not within the ground set")
    if Y in F:
        raise SetSystemError(f"Y = {format_set(Y)} is a member of the family")
    if any(popcount(m) != d + 1 for m in F.members):
        raise SetSystemError(f"family is not {d + 1}-uniform for |Y| = {d + 1}")
    y = y_poly(n, Y, Z)
    Hs = lower_sets(n, d - 1)
    labels = [PolyLabel("y", (Y, Z))]
    polys = [y]
    for Fi, Bi in zip(F.members, wit.witnesses):
        labels.append(PolyLabel("f", (Fi, Bi)))
        polys.append(f_poly(n, Fi, Bi))
    for H in Hs:
        labels.append(PolyLabel("h", (H,)))
        polys.append(h_poly(n, H, d))
    points = [Y] + list(F.members) + Hs
    M = EvalMatrix.build(points, labels, polys)
    m = len(F)
    T = M.entries[0][1:m + 1]
    R = [M.entries[i + 1][0] for i in range(m)]
    return ExtendedMatrix(Y=Y, Z=Z, d=d, matrix=M, T=list(T), R=R,
                          m0=m0_count(wit, Y, Z))


def predicted_determinant(E: ExtendedMatrix) -> int:
    """Closed form from block elimination: (-1)^m (m0 - 1) prod_H (|H| - d - 1)."""
    m = len(E.T)
    det_a = 1
    for r in range(m + 1, E.order):
        det_a *= E.D[r][r]
    return (-1) ** m * (E.TR - 1) * det_a

"""Set systems on the ground set [n] = {1, ..., n}.

Subsets are plain Python ints used as bitmasks: element ``j`` lives at bit
``j - 1``. The mask of a set doubles as its characteristic vector, so most of
the combinatorics below reduces to ``&``, ``|`` and popcounts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence

MAX_N = 128
EMPTY_TOKEN = "{}"


class SetSystemError(ValueError):
    """Raised for malformed set systems or violated preconditions."""


class ParseError(SetSystemError):
    """Raised when a set-system file cannot be parsed."""


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def mask_of(elements: Iterable[int]) -> int:
    mask = 0
    for e in elements:
        mask |= 1 << (e - 1)
    return mask


def elements_of(mask: int) -> list[int]:
    out = []
    j = 1
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return out


def format_set(mask: int) -> str:
    return "{" + ",".join(map(str, elements_of(mask))) + "}"


def canonical_key(mask: int) -> tuple[int, int]:
    """Sort key: size first, then numeric mask value."""
    return popcount(mask), mask


def submasks(mask: int) -> Iterator[int]:
    """All subsets of ``mask``, including 0 and ``mask`` itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def k_subsets(n: int, k: int) -> list[int]:
    """All k-subsets of [n] in colex order (which is numeric mask order)."""
    if k < 0 or k > n:
        return []
    return sorted(mask_of(c) for c in combinations(range(1, n + 1), k))


def check_ground(n: int) -> None:
    if not isinstance(n, int) or n < 1 or n > MAX_N:
        raise SetSystemError(f"ground set size must be in 1..{MAX_N}, got {n!r}")


@dataclass(frozen=True)
class SetSystem:
    """An ordered family of distinct subsets of [n].

    ``members[i]`` is the i-th member (0-based here, F_{i+1} in 1-based
    notation). Order is whatever the caller supplied; :meth:`canonical`
    gives the sorted view.
    """

    n: int
    members: tuple[int, ...] = ()
    _index: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        check_ground(self.n)
        members = tuple(self.members)
        full = (1 << self.n) - 1
        seen = set()
        for m in members:
            if m < 0 or m & ~full:
                raise SetSystemError(
                    f"member {m:#x} has elements outside [1..{self.n}]")
            if m in seen:
                raise SetSystemError(f"duplicate member {format_set(m)}")
            seen.add(m)
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "_index", frozenset(seen))

    @classmethod
    def from_sets(cls, n: int, sets: Iterable[Iterable[int]]) -> "SetSystem":
        masks = []
        for s in sets:
            s = list(s)
            for e in s:
                if not 1 <= e <= n:
                    raise SetSystemError(f"element {e} out of range 1..{n}")
            if len(set(s)) != len(s):
                raise SetSystemError(f"duplicate element in set {s}")
            masks.append(mask_of(s))
        return cls(n, tuple(masks))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, mask: int) -> bool:
        return mask in self._index

    @property
    def ground_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def union(self) -> int:
        u = 0
        for m in self.members:
            u |= m
        return u

    def uniformity(self) -> int | None:
        """Common member size, or None if sizes differ or the family is empty."""
        sizes = {popcount(m) for m in self.members}
        return sizes.pop() if len(sizes) == 1 else None

    def is_uniform(self, k: int) -> bool:
        return all(popcount(m) == k for m in self.members)

    def canonical(self) -> "SetSystem":
        return SetSystem(self.n, tuple(sorted(self.members, key=canonical_key)))

    def as_lists(self) -> list[list[int]]:
        return [elements_of(m) for m in self.members]


def _check_within(F: SetSystem, S: int) -> None:
    if S < 0 or S & ~F.ground_mask:
        raise SetSystemError(f"set {S:#x} not within [1..{F.n}]")


def _require_uniform(F: SetSystem, k: int) -> None:
    for m in F.members:
        if popcount(m) != k:
            raise SetSystemError(
                f"family is not {k}-uniform: member {format_set(m)} has size {popcount(m)}")


def trace(F: SetSystem, S: int) -> set[int]:
    """The distinct intersections F ∩ S over members F."""
    _check_within(F, S)
    return {m & S for m in F.members}


def is_shattered(F: SetSystem, S: int) -> bool:
    _check_within(F, S)
    return len({m & S for m in F.members}) == 1 << popcount(S)


def vc_dimension(F: SetSystem) -> int:
    """Largest |S| shattered by F, or -1 for the empty family.

    Shattering is hereditary, so sizes are tried upward and the search stops
    at the first size with no shattered set. Only subsets of the union are
    candidates, and a shattered k-set needs at least 2^k members.
    """
    if not F.members:
        return -1
    elems = elements_of(F.union)
    members = F.members
    best = 0
    k = 1
    while k <= len(elems) and (1 << k) <= len(members):
        target = 1 << k
        found = False
        for combo in combinations(elems, k):
            S = mask_of(combo)
            if len({m & S for m in members}) == target:
                found = True
                break
        if not found:
            break
        best = k
        k += 1
    return best


def shattered_member(F: SetSystem, d: int) -> int | None:
    """For a (d+1)-uniform F, the first member (input order) that is shattered.

    A shattered (d+1)-set S needs a member with F ∩ S = S, i.e. S itself,
    so only members have to be tested.
    """
    _require_uniform(F, d + 1)
    target = 1 << (d + 1)
    members = F.members
    if len(members) < target:
        return None
    for S in members:
        if len({m & S for m in members}) == target:
            return S
    return None


def vc_le_uniform(F: SetSystem, d: int) -> bool:
    """True iff the (d+1)-uniform family F has VC-dimension at most d."""
    return shattered_member(F, d) is None


def shadow(F: SetSystem, k: int) -> SetSystem:
    """The k-shadow: every k-set contained in some member, canonically sorted."""
    if k < 0:
        raise SetSystemError("shadow size must be non-negative")
    out = set()
    for m in F.members:
        size = popcount(m)
        if size < k:
            continue
        if size == k:
            out.add(m)
            continue
        for combo in combinations(elements_of(m), k):
            out.add(mask_of(combo))
    return SetSystem(F.n, tuple(sorted(out, key=canonical_key)))


def complement_uniform(F: SetSystem, k: int) -> SetSystem:
    """All k-subsets of [n] that are not members of the k-uniform F."""
    _require_uniform(F, k)
    return SetSystem(F.n, tuple(m for m in k_subsets(F.n, k) if m not in F))


def complete_family(n: int, k: int) -> SetSystem:
    return SetSystem(n, tuple(k_subsets(n, k)))


# -- serialization ---------------------------------------------------------

def serialize_system(F: SetSystem) -> str:
    """Text format: ``n <int>`` then one member per line, LF endings.

    Members are written in the family's own order so indices survive a
    round trip. The empty member is written as ``{}``.
    """
    lines = [f"n {F.n}"]
    for m in F.members:
        lines.append(" ".join(map(str, elements_of(m))) if m else EMPTY_TOKEN)
    return "\n".join(lines) + "\n"


def parse_system(text: str) -> SetSystem:
    n = None
    masks: list[int] = []
    seen: set[int] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if n is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "n":
                raise ParseError(f"line {lineno}: expected header 'n <int>', got {raw!r}")
            try:
                n = int(parts[1])
            except ValueError:
                raise ParseError(f"line {lineno}: bad ground-set size {parts[1]!r}") from None
            if not 1 <= n <= MAX_N:
                raise ParseError(f"line {lineno}: ground-set size must be in 1..{MAX_N}")
            continue
        if line == EMPTY_TOKEN:
            line = ""
        try:
            elems = [int(tok) for tok in line.split()]
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer token in {raw!r}") from None
        prev = 0
        for e in elems:
            if not 1 <= e <= n:
                raise ParseError(f"line {lineno}: element {e} out of range 1..{n}")
            if e == prev:
                raise ParseError(f"line {lineno}: duplicate element {e}")
            if e < prev:
                raise ParseError(f"line {lineno}: elements must be strictly increasing")
            prev = e
        m = mask_of(elems)
        if m in seen:
            raise ParseError(f"line {lineno}: duplicate set {format_set(m)}")
        seen.add(m)
        masks.append(m)
    if n is None:
        raise ParseError("missing header 'n <int>'")
    return SetSystem(n, tuple(masks))


def system_to_json(F: SetSystem) -> dict:
    return {"n": F.n, "members": F.as_lists()}


def system_from_json(obj: dict | str) -> SetSystem:
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(obj, dict) or "n" not in obj or "members" not in obj:
        raise ParseError("JSON set system needs keys 'n' and 'members'")
    n = obj["n"]
    if not isinstance(n, int) or not 1 <= n <= MAX_N:
        raise ParseError(f"ground-set size must be an integer in 1..{MAX_N}")
    text = [f"n {n}"]
    for s in obj["members"]:
        if not isinstance(s, list) or not all(isinstance(e, int) for e in s):
            raise ParseError("each member must be a list of integers")
        text.append(" ".join(map(str, s)) if s else EMPTY_TOKEN)
    return parse_system("\n".join(text))


def load_system(text: str) -> SetSystem:
    """Parse either the line format or the JSON format."""
    if text.lstrip().startswith("{"):
        return system_from_json(text)
    return parse_system(text)


def sets_of(masks: Sequence[int]) -> list[list[int]]:
    return [elements_of(m) for m in masks]

"""
Symmetric-group combinatorics.

Permutations are stored by their 1-based image tuple. Composition is right to left,
(s * t)(i) = s(t(i)). Ordering is lexicographic on images, so the identity sorts first.
"""

from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from app.core.errors import InputParseError, NotAGroup, NotSemiMagic


@dataclass(frozen=True, order=True)
class Permutation:
    images: Tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError(f"not a permutation of 1..{len(self.images)}: {self.images}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], n: int) -> "Permutation":
        images = list(range(1, n + 1))
        for cycle in cycles:
            for k, point in enumerate(cycle):
                images[point - 1] = cycle[(k + 1) % len(cycle)]
        return cls(tuple(images))

    @classmethod
    def parse(cls, text: str, n: Optional[int] = None) -> "Permutation":
        """Read cycle notation such as "(1 2 3)(4 5)"; "()" is the identity."""
        stripped = text.strip()
        if not re.fullmatch(r"(\(\s*(\d+(\s*[ ,]\s*\d+)*)?\s*\))+", stripped):
            raise InputParseError(f"bad cycle notation {text!r}")
        cycles = [[int(p) for p in re.split(r"[\s,]+", body.strip())]
                  for body in re.findall(r"\(([^)]*)\)", stripped) if body.strip()]
        points = [p for c in cycles for p in c]
        if len(points) != len(set(points)):
            raise InputParseError(f"cycles overlap in {text!r}")
        degree = n if n is not None else max(points, default=1)
        if any(p < 1 or p > degree for p in points):
            raise InputParseError(f"point out of range 1..{degree} in {text!r}")
        return cls.from_cycles(cycles, degree)

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return Permutation(tuple(self(other(i)) for i in range(1, self.n + 1)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, image in enumerate(self.images, start=1):
            inv[image - 1] = i
        return Permutation(tuple(inv))

    def conjugate_by(self, tau: "Permutation") -> "Permutation":
        """tau * self * tau^-1"""
        return tau * self * tau.inverse()

    def sign(self) -> int:
        inversions = sum(1 for i, j in itertools.combinations(self.images, 2) if i > j)
        return -1 if inversions % 2 else 1

    def cycles(self) -> List[Tuple[int, ...]]:
        seen: Set[int] = set()
        out = []
        for start in range(1, self.n + 1):
            if start in seen or self(start) == start:
                continue
            cycle = [start]
            seen.add(start)
            nxt = self(start)
            while nxt != start:
                cycle.append(nxt)
                seen.add(nxt)
                nxt = self(nxt)
            out.append(tuple(cycle))
        return out

    def fixed_points(self) -> List[int]:
        return [i for i in range(1, self.n + 1) if self(i) == i]

    def is_identity(self) -> bool:
        return not self.cycles()

    def __str__(self):
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + " ".join(str(p) for p in c) + ")" for c in cycles)


def all_permutations(n: int) -> List[Permutation]:
    return [Permutation(tuple(p)) for p in itertools.permutations(range(1, n + 1))]


# =============================
# Semi-magic squares
# =============================
@dataclass(frozen=True)
class SemiMagicSquare:
    entries: Tuple[Tuple[int, ...], ...]
    line_sum: int

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "SemiMagicSquare":
        entries = tuple(tuple(int(x) for x in r) for r in rows)
        n = len(entries)
        if any(len(r) != n for r in entries):
            raise NotSemiMagic("matrix is not square")
        if any(x < 0 for r in entries for x in r):
            raise NotSemiMagic("entries must be non-negative")
        sums = {sum(r) for r in entries} | {sum(c) for c in zip(*entries)}
        if len(sums) > 1:
            raise NotSemiMagic(f"row/column sums disagree: {sorted(sums)}")
        return cls(entries, sums.pop() if sums else 0)

    @property
    def n(self) -> int:
        return len(self.entries)


def perm_matrix(sigma: Permutation) -> SemiMagicSquare:
    """(P^sigma)_{i, sigma(i)} = 1"""
    n = sigma.n
    rows = [[1 if j == sigma(i) else 0 for j in range(1, n + 1)] for i in range(1, n + 1)]
    return SemiMagicSquare(tuple(tuple(r) for r in rows), 1)


def _perfect_matching(support: List[List[int]]) -> Optional[List[int]]:
    """Augmenting paths, rows and columns scanned in increasing index; returns column per row."""
    n = len(support)
    match_col: List[int] = [-1] * n

    def augment(row: int, visited: List[bool]) -> bool:
        for col in support[row]:
            if visited[col]:
                continue
            visited[col] = True
            if match_col[col] < 0 or augment(match_col[col], visited):
                match_col[col] = row
                return True
        return False

    for row in range(n):
        if not augment(row, [False] * n):
            return None
    match_row = [0] * n
    for col, row in enumerate(match_col):
        match_row[row] = col
    return match_row


def birkhoff_decompose(square: SemiMagicSquare) -> List[Tuple[Permutation, int]]:
    n = square.n
    work = [list(r) for r in square.entries]
    remaining = square.line_sum
    parts: Dict[Permutation, int] = {}
    while remaining > 0:
        support = [[j for j in range(n) if work[i][j] > 0] for i in range(n)]
        matching = _perfect_matching(support)
        if matching is None:
            raise NotSemiMagic("support has no perfect matching")
        mult = min(work[i][matching[i]] for i in range(n))
        for i in range(n):
            work[i][matching[i]] -= mult
        sigma = Permutation(tuple(c + 1 for c in matching))
        parts[sigma] = parts.get(sigma, 0) + mult
        remaining -= mult
    return sorted(parts.items())


def resum(parts: Iterable[Tuple[Permutation, int]], n: int) -> List[List[int]]:
    total = [[0] * n for _ in range(n)]
    for sigma, mult in parts:
        for i in range(1, n + 1):
            total[i - 1][sigma(i) - 1] += mult
    return total


# =============================
# Root sets and groups
# =============================
RootSet = FrozenSet[Tuple[int, int]]


def root_set(sigma: Permutation) -> RootSet:
    return frozenset((sigma(i), i) for i in range(1, sigma.n + 1) if sigma(i) != i)


def has_complete_root_set(family: Iterable[Permutation], n: int) -> bool:
    covered: Set[Tuple[int, int]] = set()
    for sigma in family:
        covered |= root_set(sigma)
    return len(covered) == n * (n - 1)


def generate_subgroup(gens: Sequence[Permutation], n: Optional[int] = None) -> Set[Permutation]:
    if n is None:
        n = gens[0].n if gens else 1
    identity = Permutation.identity(n)
    group = {identity}
    queue = deque([identity])
    while queue:
        current = queue.popleft()
        for g in gens:
            for nxt in (current * g, current * g.inverse()):
                if nxt not in group:
                    group.add(nxt)
                    queue.append(nxt)
    return group


def is_group(elements: Set[Permutation]) -> bool:
    if not elements:
        return False
    return all(a * b in elements for a in elements for b in elements)


def conjugacy_class(sigma: Permutation, group: Iterable[Permutation]) -> Set[Permutation]:
    return {sigma.conjugate_by(tau) for tau in group}


def pair_orbit(group: Iterable[Permutation], pair: Tuple[int, int] = (1, 2)) -> Set[Tuple[int, int]]:
    return {(g(pair[0]), g(pair[1])) for g in group}


def is_2transitive(group: Set[Permutation], n: int) -> bool:
    if not is_group(group):
        raise NotAGroup("permutation set is not closed under composition")
    if n < 2:
        return False
    return len(pair_orbit(group)) == n * (n - 1)

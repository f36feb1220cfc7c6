"""Points, hyperplanes and recovery sets of the binary projective space PG(k-1, 2).

Point ``j`` (1 <= j <= 2**k - 1) is the nonzero vector whose k-bit binary
expansion is ``j``, read with coordinate 1 as the most significant bit.  So for
k = 3 point 4 is (1, 0, 0) and point 3 is (0, 1, 1), and the unit vector e_i has
index ``2**(k - i)``.  Everything outside this module talks about points by
index only.

A reduced recovery set for file i is a set of points whose span contains e_i
and no proper subset of which does.  Over GF(2) this is the same thing as a
linearly independent set whose vectors XOR to e_i: if a proper subset also
spanned e_i, XOR-ing the two representations gives a nontrivial dependence,
and conversely an independent set XOR-ing to e_i has e_i as its *only*
representation, which uses every element.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator

# keeps brute-force recovery-set enumeration instant (31 points, sets of size <= 5)
MAX_ENUM_K = 5


class GeometryError(ValueError):
    pass


def num_points(k: int) -> int:
    return (1 << k) - 1


def _check_k(k: int) -> None:
    if not isinstance(k, int) or k < 1:
        raise GeometryError(f"k must be a positive integer, got {k!r}")


def point_vector(j: int, k: int) -> tuple[int, ...]:
    """Coordinates of point ``j``; coordinate 1 is the most significant bit."""
    _check_k(k)
    if not 1 <= j <= num_points(k):
        raise GeometryError(f"point index {j} out of range [1, {num_points(k)}] for k={k}")
    return tuple((j >> (k - 1 - c)) & 1 for c in range(k))


def point_index(vector: Iterable[int]) -> int:
    vector = tuple(vector)
    if not vector or any(v not in (0, 1) for v in vector):
        raise GeometryError(f"not a nonzero binary vector: {vector!r}")
    j = 0
    for v in vector:
        j = (j << 1) | v
    if j == 0:
        raise GeometryError("the zero vector is not a point")
    return j


def unit_index(i: int, k: int) -> int:
    """Index of the point e_i."""
    _check_k(k)
    if not 1 <= i <= k:
        raise GeometryError(f"file index {i} out of range [1, {k}]")
    return 1 << (k - i)


def support(j: int, k: int) -> frozenset[int]:
    """The set J of files with v_j = sum of e_h over h in J."""
    return frozenset(h for h in range(1, k + 1) if j & (1 << (k - h)))


def subset_mask(files: Iterable[int], k: int) -> int:
    """Bitmask of a file subset, using the point-index bit convention."""
    mask = 0
    for i in files:
        mask |= unit_index(i, k)
    return mask


def gf2_rank(vectors: Iterable[int]) -> int:
    """Rank over GF(2) of integers read as bit vectors."""
    basis: list[int] = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    return len(basis)


@dataclass(frozen=True)
class Hyperplane:
    """Points x with c . x = 0 over GF(2), for a nonzero coefficient mask c."""

    k: int
    coeff: int
    members: frozenset[int]
    outside: frozenset[int]
    excluded_units: frozenset[int]

    def coeff_vector(self) -> tuple[int, ...]:
        return point_vector(self.coeff, self.k)

    def contains(self, j: int) -> bool:
        return j in self.members


def _hyperplane(coeff: int, k: int) -> Hyperplane:
    members, outside = [], []
    for j in range(1, num_points(k) + 1):
        (outside if bin(coeff & j).count("1") % 2 else members).append(j)
    return Hyperplane(
        k=k,
        coeff=coeff,
        members=frozenset(members),
        outside=frozenset(outside),
        excluded_units=support(coeff, k),
    )


@lru_cache(maxsize=None)
def enumerate_hyperplanes(k: int) -> tuple[Hyperplane, ...]:
    """All 2**k - 1 hyperplanes, in ascending coefficient-mask order."""
    _check_k(k)
    return tuple(_hyperplane(c, k) for c in range(1, num_points(k) + 1))


@dataclass(frozen=True, order=True)
class RecoverySet:
    file: int
    points: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, j: object) -> bool:
        return j in self.points

    def __iter__(self) -> Iterator[int]:
        return iter(self.points)


def is_reduced_recovery_set(points: Iterable[int], i: int, k: int) -> bool:
    pts = tuple(points)
    if not pts or len(set(pts)) != len(pts):
        return False
    acc = 0
    for j in pts:
        acc ^= j
    return acc == unit_index(i, k) and gf2_rank(pts) == len(pts)


@lru_cache(maxsize=None)
def enumerate_recovery_sets(k: int, i: int) -> tuple[RecoverySet, ...]:
    """All reduced recovery sets for file ``i``, ordered by size then lexicographically."""
    _check_k(k)
    if k > MAX_ENUM_K:
        raise GeometryError(f"recovery-set enumeration is limited to k <= {MAX_ENUM_K}, got k={k}")
    target = unit_index(i, k)
    out = []
    for size in range(1, k + 1):
        for pts in combinations(range(1, num_points(k) + 1), size):
            acc = 0
            for j in pts:
                acc ^= j
            if acc == target and gf2_rank(pts) == size:
                out.append(RecoverySet(i, pts))
    return tuple(out)


def recovery_catalog(k: int) -> tuple[RecoverySet, ...]:
    """Reduced recovery sets of every file, file 1 first."""
    return tuple(y for i in range(1, k + 1) for y in enumerate_recovery_sets(k, i))


@dataclass(frozen=True)
class PointMultiset:
    """Multiplicities n_j of the points of PG(k-1, 2); ``n[j - 1]`` belongs to point j."""

    k: int
    n: tuple[int, ...]

    def __post_init__(self):
        _check_k(self.k)
        object.__setattr__(self, "n", tuple(int(x) for x in self.n))
        if len(self.n) != num_points(self.k):
            raise GeometryError(
                f"multiset for k={self.k} needs {num_points(self.k)} multiplicities, got {len(self.n)}"
            )
        if any(x < 0 for x in self.n):
            raise GeometryError("multiplicities must be nonnegative")

    @classmethod
    def zeros(cls, k: int) -> PointMultiset:
        return cls(k, (0,) * num_points(k))

    @classmethod
    def from_counts(cls, k: int, counts: dict[int, int]) -> PointMultiset:
        n = [0] * num_points(k)
        for j, c in counts.items():
            point_vector(j, k)
            n[j - 1] += c
        return cls(k, tuple(n))

    def __getitem__(self, j: int) -> int:
        """Multiplicity of point ``j`` (1-based)."""
        point_vector(j, self.k)
        return self.n[j - 1]

    @property
    def size(self) -> int:
        return sum(self.n)

    def counts(self) -> dict[int, int]:
        return {j: c for j, c in enumerate(self.n, start=1) if c}

    def __add__(self, other: PointMultiset) -> PointMultiset:
        if other.k != self.k:
            raise GeometryError("cannot add multisets of different k")
        return PointMultiset(self.k, tuple(a + b for a, b in zip(self.n, other.n)))

    def scaled(self, t: int) -> PointMultiset:
        return PointMultiset(self.k, tuple(t * a for a in self.n))

    def generator_matrix(self) -> list[list[int]]:
        """k x n binary matrix with the points as columns, in index order."""
        cols = [point_vector(j, self.k) for j, c in enumerate(self.n, start=1) for _ in range(c)]
        return [[col[r] for col in cols] for r in range(self.k)]


def simplex_points(S: Iterable[int], k: int) -> PointMultiset:
    """Simpl(S): one copy of every nonzero point in the span of {e_i : i in S}."""
    S = frozenset(S)
    if not S:
        raise GeometryError("Simpl(S) needs a nonempty S")
    span = subset_mask(S, k)
    return PointMultiset(k, tuple(1 if j & ~span == 0 else 0 for j in range(1, num_points(k) + 1)))


def half_simplex_pair(i: int, j: int, k: int) -> PointMultiset:
    """The pair {e_i, e_j}, used as half a copy of Simpl({i, j})."""
    if i == j:
        raise GeometryError("half simplex pair needs two distinct files")
    return PointMultiset.from_counts(k, {unit_index(i, k): 1, unit_index(j, k): 1})

"""Superclasses of (Z/nZ)^d under the coordinate-permutation action of S_d.

A superclass is the orbit of a tuple under permutation of its entries, so
it is represented canonically by the weakly increasing tuple of residues.
Orbits are enumerated in lexicographic order of those canonical tuples,
which matches itertools.combinations_with_replacement(range(n), d); the
enumeration can be ranked/unranked so disjoint index ranges can be
streamed by parallel consumers.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial
from typing import Iterator, Sequence


@dataclass(frozen=True)
class OrbitRep:
    """Canonical representative of an S_d-orbit in (Z/nZ)^d.

    entries is weakly increasing with every residue in [0, n).
    """

    n: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.n <= 0:
            raise ValueError(f"modulus must be positive, got {self.n}")
        if not self.entries:
            raise ValueError("orbit representative must have at least one entry")
        if any(not 0 <= v < self.n for v in self.entries):
            raise ValueError(f"entries {self.entries} not reduced mod {self.n}")
        if any(a > b for a, b in zip(self.entries, self.entries[1:])):
            raise ValueError(f"entries {self.entries} not sorted")

    @property
    def d(self) -> int:
        return len(self.entries)


def canonicalize(vec: Sequence[int], n: int) -> OrbitRep:
    """Reduce a tuple mod n and sort it into the canonical representative."""
    if n <= 0:
        raise ValueError(f"modulus must be positive, got {n}")
    return OrbitRep(n, tuple(sorted(v % n for v in vec)))


def residue_multiplicities(rep: OrbitRep) -> tuple[int, ...]:
    """How many entries of the representative equal each residue 0..n-1."""
    counts = [0] * rep.n
    for v in rep.entries:
        counts[v] += 1
    return tuple(counts)


def stabilizer_order(rep: OrbitRep) -> int:
    """|stab(x)| = product of k! over entry multiplicities k."""
    order = 1
    for k in residue_multiplicities(rep):
        if k > 1:
            order *= factorial(k)
    return order


def orbit_size(rep: OrbitRep) -> int:
    """Number of distinct tuples in the orbit: d! / prod(k_m!)."""
    return factorial(rep.d) // stabilizer_order(rep)


def orbit_sum(rep: OrbitRep) -> int:
    """[x] = sum of the entries mod n; constant on the orbit."""
    return sum(rep.entries) % rep.n


def shift_orbit(rep: OrbitRep, j: int) -> OrbitRep:
    """Orbit of x + j*(1,...,1)."""
    return canonicalize([v + j for v in rep.entries], rep.n)


def negate_orbit(rep: OrbitRep) -> OrbitRep:
    """Orbit of -x."""
    return canonicalize([-v for v in rep.entries], rep.n)


def orbit_count(n: int, d: int) -> int:
    """Number of S_d-orbits of (Z/nZ)^d: C(n+d-1, d)."""
    return comb(n + d - 1, d)


def distinct_permutations(rep: OrbitRep) -> Iterator[tuple[int, ...]]:
    """All distinct permutations of the representative, lexicographically.

    Standard next-permutation stepping on the sorted tuple: each step finds
    the rightmost ascent, swaps in the next larger suffix entry and
    reverses the tail.  Yields each element of the orbit exactly once.
    """
    a = list(rep.entries)
    d = len(a)
    while True:
        yield tuple(a)
        i = d - 2
        while i >= 0 and a[i] >= a[i + 1]:
            i -= 1
        if i < 0:
            return
        j = d - 1
        while a[j] <= a[i]:
            j -= 1
        a[i], a[j] = a[j], a[i]
        a[i + 1 :] = reversed(a[i + 1 :])


def unrank_orbit(n: int, d: int, index: int) -> OrbitRep:
    """The index-th orbit (0-based) in lexicographic enumeration order.

    Weakly increasing d-tuples over [0, n) biject with d-subsets of
    [0, n+d-1) via b_i = a_i + i, and the bijection preserves
    lexicographic order, so this unranks a combination.
    """
    total = orbit_count(n, d)
    if not 0 <= index < total:
        raise IndexError(f"orbit index {index} out of range for {total} orbits")
    entries = []
    m = n + d - 1
    prev = 0
    remaining = index
    for slot in range(d):
        for c in range(prev, m):
            block = comb(m - c - 1, d - slot - 1)
            if remaining < block:
                entries.append(c - slot)
                prev = c + 1
                break
            remaining -= block
    return OrbitRep(n, tuple(entries))


def rank_orbit(rep: OrbitRep) -> int:
    """Inverse of unrank_orbit: position in lexicographic enumeration."""
    n, d = rep.n, rep.d
    m = n + d - 1
    rank = 0
    prev = 0
    for slot, v in enumerate(rep.entries):
        c = v + slot
        for lower in range(prev, c):
            rank += comb(m - lower - 1, d - slot - 1)
        prev = c + 1
    return rank


def enumerate_orbits(n: int, d: int, start: int = 0, stop: int | None = None) -> Iterator[OrbitRep]:
    """Stream canonical representatives for the index range [start, stop).

    The full stream (defaults) visits all C(n+d-1, d) orbits in
    lexicographic order.  A nonzero start is unranked once and the stream
    continues with constant-time stepping, so disjoint ranges from
    split_ranges glue back to the full enumeration.
    """
    if d <= 0:
        raise ValueError(f"d must be positive, got {d}")
    total = orbit_count(n, d)
    if stop is None:
        stop = total
    if not 0 <= start <= stop <= total:
        raise IndexError(f"bad range [{start}, {stop}) for {total} orbits")
    if start == stop:
        return
    a = list(unrank_orbit(n, d, start).entries)
    for _ in range(stop - start):
        yield OrbitRep(n, tuple(a))
        # next weakly increasing tuple: bump the rightmost entry below n-1
        # and reset everything after it to the bumped value
        i = d - 1
        while i >= 0 and a[i] == n - 1:
            i -= 1
        if i < 0:
            return
        v = a[i] + 1
        for t in range(i, d):
            a[t] = v


def split_ranges(n: int, d: int, parts: int) -> list[tuple[int, int]]:
    """Partition the orbit index range into `parts` contiguous slices."""
    if parts <= 0:
        raise ValueError(f"parts must be positive, got {parts}")
    total = orbit_count(n, d)
    base, extra = divmod(total, parts)
    ranges = []
    lo = 0
    for i in range(parts):
        hi = lo + base + (1 if i < extra else 0)
        ranges.append((lo, hi))
        lo = hi
    return ranges

"""Exact evaluation of symmetric supercharacters.

For an orbit X of (Z/nZ)^d and a point y, the supercharacter value is

    sigma_X(y) = sum over x in X of e(x.y / n),        e(t) = exp(2*pi*i*t)

Everything identity-shaped is done on the integer counts vector
c_t = #{x in X : x.y = t mod n} rather than on floats: sigma_X(y) is then
sum_t c_t e(t/n), and the conjugation / translation / reflection
identities become exact index shifts and reversals of c.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb, floor
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetExceeded, DimensionMismatch, DimensionTooLarge
from .orbits import (
    OrbitRep,
    distinct_permutations,
    enumerate_orbits,
    orbit_count,
    orbit_size,
    stabilizer_order,
)

DEFAULT_BUDGET = 5_000_000
DEDUPE_DECIMALS = 9
# evaluation blocks are capped at this many (orbit element, point) pairs
_BLOCK_CELLS = 4_000_000


@lru_cache(maxsize=256)
def roots_of_unity(n: int) -> np.ndarray:
    """Table of the n-th roots of unity e(t/n), t = 0..n-1."""
    table = np.exp(2j * np.pi * np.arange(n) / n)
    table.setflags(write=False)
    return table


@lru_cache(maxsize=4096)
def orbit_elements(rep: OrbitRep) -> tuple[tuple[int, ...], ...]:
    """The orbit as a tuple of tuples, in lexicographic order."""
    return tuple(distinct_permutations(rep))


@lru_cache(maxsize=1024)
def orbit_array(rep: OrbitRep) -> np.ndarray:
    """The orbit as an (orbit_size, d) integer array."""
    arr = np.array(orbit_elements(rep), dtype=np.int64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class CountsVector:
    """Integer counts c_t = #{x in X : x.y = t mod n} for one (X, y)."""

    n: int
    counts: tuple[int, ...]

    def __post_init__(self):
        if len(self.counts) != self.n:
            raise DimensionMismatch(f"expected {self.n} counts, got {len(self.counts)}")

    def total(self) -> int:
        return sum(self.counts)

    def value(self) -> complex:
        """sum_t c_t e(t/n) via the precomputed root table."""
        table = roots_of_unity(self.n)
        acc = 0j
        for t, c in enumerate(self.counts):
            if c:
                acc += c * table[t]
        return acc

    def shifted(self, t0: int) -> "CountsVector":
        """Counts of the value multiplied by e(t0/n): new[t] = old[t - t0]."""
        t0 %= self.n
        return CountsVector(self.n, tuple(self.counts[(t - t0) % self.n] for t in range(self.n)))

    def reversed_index(self) -> "CountsVector":
        """Counts of the conjugate value: new[t] = old[-t mod n]."""
        return CountsVector(self.n, tuple(self.counts[(-t) % self.n] for t in range(self.n)))

    def is_palindromic(self) -> bool:
        return self == self.reversed_index()


def dot_counts(rep: OrbitRep, y: Sequence[int]) -> CountsVector:
    """Exact counts of x.y mod n over the orbit of rep."""
    n = rep.n
    if len(y) != rep.d:
        raise DimensionMismatch(f"y has length {len(y)}, expected {rep.d}")
    yr = [v % n for v in y]
    counts = [0] * n
    for x in orbit_elements(rep):
        t = 0
        for xi, yi in zip(x, yr):
            t += xi * yi
        counts[t % n] += 1
    return CountsVector(n, tuple(counts))


def dot_counts_symmetrized(rep: OrbitRep, y: Sequence[int], max_d: int = 6) -> CountsVector:
    """Counts of pi(x).y over all d! permutations pi (stabilizer included).

    Independent route to the same value: summing over the full group hits
    each orbit element |stab(x)| times, so these counts equal
    stabilizer_order(rep) * dot_counts(rep, y).
    """
    from itertools import permutations

    if rep.d > max_d:
        raise DimensionTooLarge(f"full-group sum over {rep.d}! permutations refused")
    n = rep.n
    yr = [v % n for v in y]
    counts = [0] * n
    for x in permutations(rep.entries):
        t = 0
        for xi, yi in zip(x, yr):
            t += xi * yi
        counts[t % n] += 1
    return CountsVector(n, tuple(counts))


def counts_to_complex(cv: CountsVector) -> complex:
    return cv.value()


def supercharacter(rep: OrbitRep, y: Sequence[int]) -> complex:
    """sigma_X(y) for X the orbit of rep."""
    return dot_counts(rep, y).value()


def permanent_oracle(rep: OrbitRep, y: Sequence[int], max_d: int = 10) -> complex:
    """Independent evaluation of sigma_X(y) through a matrix permanent.

    With M[j][k] = e(x_j y_k / n) for any orbit member x, per(M) equals the
    full-group sum over S_d and hence stabilizer_order(X) * sigma_X(y).
    Uses Ryser's formula with Gray-code subset stepping, O(2^d d).
    """
    d = rep.d
    if d > max_d:
        raise DimensionTooLarge(f"permanent of a {d}x{d} matrix refused (cutoff {max_d})")
    if len(y) != d:
        raise DimensionMismatch(f"y has length {len(y)}, expected {d}")
    n = rep.n
    table = roots_of_unity(n)
    mat = np.empty((d, d), dtype=complex)
    for j, xj in enumerate(rep.entries):
        for k, yk in enumerate(y):
            mat[j, k] = table[(xj * yk) % n]
    total = 0j
    rowsum = np.zeros(d, dtype=complex)
    gray = 0
    parity = 1  # (-1)^|S| for the current subset S encoded by gray
    for step in range(1, 1 << d):
        new_gray = step ^ (step >> 1)
        changed = new_gray ^ gray
        col = changed.bit_length() - 1
        if new_gray & changed:
            rowsum += mat[:, col]
        else:
            rowsum -= mat[:, col]
        parity = -parity
        gray = new_gray
        total += parity * np.prod(rowsum)
    per = total * (-1) ** d
    return complex(per) / stabilizer_order(rep)


def constancy_check(x_rep: OrbitRep, y_rep: OrbitRep) -> bool:
    """dot_counts(X, y) is the same vector for every y in the orbit Y."""
    if x_rep.n != y_rep.n or x_rep.d != y_rep.d:
        raise DimensionMismatch("orbits live in different groups")
    base = None
    for y in distinct_permutations(y_rep):
        cv = dot_counts(x_rep, y)
        if base is None:
            base = cv
        elif cv != base:
            return False
    return True


# ---------------------------------------------------------------------------
# point clouds


def _round_coord(v: float) -> float:
    r = round(v, DEDUPE_DECIMALS)
    return 0.0 if r == 0 else r  # fold -0.0 into +0.0


def dedupe_values(values: Iterable[complex]) -> tuple[complex, ...]:
    """Deduplicate complex values, keyed on coordinates rounded to 1e-9.

    The first value seen in iteration order represents its bucket, so the
    result is deterministic for a deterministic input order.
    """
    seen: dict[tuple[float, float], None] = {}
    out = []
    for z in values:
        key = (_round_coord(z.real), _round_coord(z.imag))
        if key not in seen:
            seen[key] = None
            out.append(complex(z))
    return tuple(out)


@dataclass(frozen=True)
class PointCloud:
    """Deduplicated set of supercharacter values in the complex plane."""

    n: int
    d: int
    rep: OrbitRep | None
    values: tuple[complex, ...]
    counts: tuple[CountsVector, ...] | None = field(default=None, repr=False)

    @classmethod
    def from_values(cls, n, d, rep, values, counts=None):
        return cls(n, d, rep, dedupe_values(values), counts)


class _Matcher:
    """Tolerance-based membership for a set of complex points.

    Buckets points on a grid of width 2*tol; a query within tol of a
    stored point is always found by scanning the 3x3 neighborhood of its
    own bucket.
    """

    def __init__(self, values: Iterable[complex], tol: float = 1e-9):
        self.tol = tol
        self.width = 2.0 * tol
        self.buckets: dict[tuple[int, int], list[complex]] = {}
        for z in values:
            self.buckets.setdefault(self._key(z), []).append(z)

    def _key(self, z: complex) -> tuple[int, int]:
        return (floor(z.real / self.width + 0.5), floor(z.imag / self.width + 0.5))

    def contains(self, z: complex) -> bool:
        kr, ki = self._key(z)
        for dr in (-1, 0, 1):
            for di in (-1, 0, 1):
                for w in self.buckets.get((kr + dr, ki + di), ()):
                    if abs(z - w) <= self.tol:
                        return True
        return False


def values_match(a: Iterable[complex], b: Iterable[complex], tol: float = 1e-9) -> bool:
    """Symmetric set equality up to tol: every point of each side is
    within tol of some point of the other."""
    a = list(a)
    b = list(b)
    mb = _Matcher(b, tol)
    if any(not mb.contains(z) for z in a):
        return False
    ma = _Matcher(a, tol)
    return all(ma.contains(z) for z in b)


def cloud_difference(a: Iterable[complex], b: Iterable[complex], tol: float = 1e-9) -> tuple[list[complex], list[complex]]:
    """Points of a not matched in b, and points of b not matched in a."""
    a = list(a)
    b = list(b)
    mb = _Matcher(b, tol)
    ma = _Matcher(a, tol)
    return [z for z in a if not mb.contains(z)], [w for w in b if not ma.contains(w)]


def rotation_closed(values: Sequence[complex], fold: int, tol: float = 1e-9) -> bool:
    """Is the value set invariant under rotation by 2*pi/fold?"""
    if fold <= 1:
        return True
    rot = np.exp(2j * np.pi / fold)
    matcher = _Matcher(values, tol)
    return all(matcher.contains(z * rot) for z in values)


# ---------------------------------------------------------------------------
# image computation


def _superclass_blocks(n: int, d: int, start: int, stop: int, block_rows: int):
    """Yield (start, reps_array) blocks of canonical representatives."""
    lo = start
    while lo < stop:
        hi = min(lo + block_rows, stop)
        block = np.fromiter(
            (v for rep in enumerate_orbits(n, d, lo, hi) for v in rep.entries),
            dtype=np.int64,
            count=(hi - lo) * d,
        ).reshape(hi - lo, d)
        yield lo, block
        lo = hi


def _full_group_blocks(n: int, d: int, block_rows: int):
    """Yield blocks of all n^d points in odometer (lexicographic) order."""
    total = n**d
    lo = 0
    while lo < total:
        hi = min(lo + block_rows, total)
        idx = np.arange(lo, hi, dtype=np.int64)
        block = np.empty((hi - lo, d), dtype=np.int64)
        for col in range(d - 1, -1, -1):
            block[:, col] = idx % n
            idx //= n
        yield lo, block
        lo = hi


def values_on_block(rep: OrbitRep, block: np.ndarray) -> np.ndarray:
    """sigma_X at each row of `block`, via the root table."""
    n = rep.n
    table = roots_of_unity(n)
    elems = orbit_array(rep)
    dots = block @ elems.T
    np.mod(dots, n, out=dots)
    return table[dots].sum(axis=1)


def image(
    rep: OrbitRep,
    budget: int = DEFAULT_BUDGET,
    full_group: bool = False,
    keep_counts: bool = False,
    workers: int = 1,
) -> PointCloud:
    """All values of sigma_X, deduplicated.

    By default y runs over the canonical superclass representatives (the
    value is constant on superclasses); full_group=True instead sweeps all
    n^d points as an oracle for that constancy.  The evaluation is done in
    fixed-size blocks; `workers` only controls how many blocks are in
    flight at once, and blocks are merged in index order, so the result is
    identical for any worker count.
    """
    n, d = rep.n, rep.d
    total = n**d if full_group else orbit_count(n, d)
    if total > budget:
        raise BudgetExceeded(total, budget)
    r = orbit_size(rep)
    block_rows = max(1, _BLOCK_CELLS // max(r, 1))
    if full_group:
        blocks = _full_group_blocks(n, d, block_rows)
    else:
        blocks = _superclass_blocks(n, d, 0, total, block_rows)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [(lo, pool.submit(values_on_block, rep, blk)) for lo, blk in blocks]
            pieces = [f.result() for _, f in sorted(futures, key=lambda t: t[0])]
    else:
        pieces = [values_on_block(rep, blk) for _, blk in blocks]
    values = np.concatenate(pieces) if pieces else np.empty(0, dtype=complex)
    counts = None
    if keep_counts:
        if full_group:
            raise ValueError("keep_counts is only supported for the superclass sweep")
        counts = tuple(dot_counts(rep, y.entries) for y in enumerate_orbits(n, d))
    return PointCloud.from_values(n, d, rep, values.tolist(), counts)


def union_image(n: int, d: int, budget: int = DEFAULT_BUDGET, workers: int = 1) -> PointCloud:
    """Union of the images of every orbit at (n, d), deduplicated."""
    count = orbit_count(n, d)
    if count * count > budget:
        raise BudgetExceeded(count * count, budget)
    values: list[complex] = []
    for rep in enumerate_orbits(n, d):
        values.extend(image(rep, budget=budget, workers=workers).values)
    return PointCloud.from_values(n, d, None, values)

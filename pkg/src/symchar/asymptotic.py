"""Row reduction of orbit matrices over Z/nZ and the induced torus maps.

Writing the orbit of x as the columns of a d x r matrix A over Z/nZ, a
left multiplication B = R*A with det(R) a unit mod n rewrites sigma_X as
a sum of monomials in d - k torus variables, where k is the number of
zero rows of B: each nonzero column pattern contributes one monomial
whose exponents are that column of B.  For the orbit of
(1, ..., 1, 1-d) with gcd(n, d) = 1 the resulting map is

    g(z_1, ..., z_{d-1}) = z_1 + ... + z_{d-1} + 1/(z_1 ... z_{d-1})

whose image over the full torus is the region bounded by the d-cusp
hypocycloid x = (d-1) cos t + cos((d-1) t), y = (d-1) sin t - sin((d-1) t).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import gcd, pi
from typing import Sequence

import numpy as np

from .errors import BudgetExceeded, HypothesisFailed, NoUnitPivot, VerificationFailed
from .evaluate import DEFAULT_BUDGET, PointCloud, image, roots_of_unity
from .modring import mod_inverse
from .orbits import OrbitRep, canonicalize, orbit_count
from .report import IdentityReport

# ---------------------------------------------------------------------------
# orbit matrices and reduction certificates


@dataclass(frozen=True)
class OrbitMatrix:
    """d x r matrix over Z/nZ whose columns are the orbit elements of rep,
    in lexicographic (distinct-permutation) order."""

    rep: OrbitRep
    rows: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return self.rep.n

    @property
    def d(self) -> int:
        return self.rep.d

    @property
    def r(self) -> int:
        return len(self.rows[0])


def orbit_matrix(rep: OrbitRep) -> OrbitMatrix:
    from .evaluate import orbit_elements

    cols = orbit_elements(rep)
    rows = tuple(tuple(col[i] for col in cols) for i in range(rep.d))
    return OrbitMatrix(rep, rows)


def _mat_mul_mod(lhs: Sequence[Sequence[int]], rhs: Sequence[Sequence[int]], n: int) -> tuple[tuple[int, ...], ...]:
    out = []
    for row in lhs:
        out.append(
            tuple(sum(a * rhs[t][c] for t, a in enumerate(row)) % n for c in range(len(rhs[0])))
        )
    return tuple(out)


def _det_int(mat: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant (Bareiss fraction-free elimination)."""
    m = len(mat)
    work = [list(row) for row in mat]
    sign = 1
    prev = 1
    for i in range(m - 1):
        if work[i][i] == 0:
            for j in range(i + 1, m):
                if work[j][i] != 0:
                    work[i], work[j] = work[j], work[i]
                    sign = -sign
                    break
            else:
                return 0
        for j in range(i + 1, m):
            for c in range(i + 1, m):
                work[j][c] = (work[j][c] * work[i][i] - work[j][i] * work[i][c]) // prev
            work[j][i] = 0
        prev = work[i][i]
    return sign * work[m - 1][m - 1]


def _symmetric_lift(v: int, n: int) -> int:
    """Representative of v mod n in (-n/2, n/2]."""
    v %= n
    return v if 2 * v <= n else v - n


@dataclass(frozen=True)
class ReductionCertificate:
    """Witness that reduced = reducer * matrix over Z/nZ with unit det.

    zero_rows counts the trailing all-zero rows of the reduced matrix.
    complete records whether elimination pivoted every nonzero row; a
    stalled (partial) reduction is flagged complete=False.
    Validation happens at construction: the product identity and the unit
    determinant are rechecked from scratch.
    """

    matrix: OrbitMatrix
    reducer: tuple[tuple[int, ...], ...]
    reduced: tuple[tuple[int, ...], ...]
    det: int
    zero_rows: int
    complete: bool = True

    def __post_init__(self):
        n, d = self.matrix.n, self.matrix.d
        if len(self.reducer) != d or any(len(row) != d for row in self.reducer):
            raise VerificationFailed("reducer is not d x d")
        if _mat_mul_mod(self.reducer, self.matrix.rows, n) != self.reduced:
            raise VerificationFailed(
                "certificate product mismatch: reducer * matrix != reduced",
                witness={"rep": self.matrix.rep},
            )
        det = _det_int(self.reducer) % n
        if det != self.det % n:
            raise VerificationFailed("certificate determinant mismatch")
        if n > 1 and gcd(det, n) != 1:
            raise VerificationFailed(
                f"determinant {det} is not a unit mod {n}", witness={"rep": self.matrix.rep}
            )
        k = 0
        for row in reversed(self.reduced):
            if any(row):
                break
            k += 1
        if k != self.zero_rows:
            raise VerificationFailed("trailing zero row count mismatch")

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.matrix.n,
                "orbit": list(self.matrix.rep.entries),
                "matrix": [list(r) for r in self.matrix.rows],
                "reducer": [list(r) for r in self.reducer],
                "reduced": [list(r) for r in self.reduced],
                "det": self.det,
                "zero_rows": self.zero_rows,
                "complete": self.complete,
            },
            separators=(",", ":"),
        )


def certificate_from_rows(
    matrix: OrbitMatrix, reducer_rows: Sequence[Sequence[int]], complete: bool = True
) -> ReductionCertificate:
    """Build and validate a certificate from a caller-supplied reducer.

    Lets a known-good reduction be checked against this exact orbit
    matrix (column order included), e.g. when comparing against an
    expected reduced form.
    """
    n = matrix.n
    reducer = tuple(tuple(v % n for v in row) for row in reducer_rows)
    reduced = _mat_mul_mod(reducer, matrix.rows, n)
    k = 0
    for row in reversed(reduced):
        if any(row):
            break
        k += 1
    return ReductionCertificate(matrix, reducer, reduced, _det_int(reducer) % n, k, complete)


def row_reduce_mod_n(matrix: OrbitMatrix, allow_partial: bool = False) -> ReductionCertificate:
    """Gaussian elimination over Z/nZ restricted to unit pivots.

    Row operations only (columns are orbit elements and stay put): swap
    and subtract-multiple, both of determinant +-1, so det(R) is a unit
    for any n without row scaling.  Pivots are chosen among entries
    coprime to n, preferring the smallest symmetric-lift absolute value
    (ties: leftmost column, then topmost row), and the pivot column is
    cleared in every other row.  Rows that never pivot are moved to the
    bottom; if any of them is nonzero the reduction has stalled, which
    raises NoUnitPivot carrying the partial certificate unless
    allow_partial is set.
    """
    n, d, r = matrix.n, matrix.d, matrix.r
    work = [list(row) for row in matrix.rows]
    reducer = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
    remaining = set(range(d))
    pivots: list[tuple[int, int]] = []  # (column, row), in pivot order
    while remaining:
        best = None
        for i in sorted(remaining):
            for c in range(r):
                v = work[i][c]
                if v and gcd(v, n) == 1:
                    key = (abs(_symmetric_lift(v, n)), c, i)
                    if best is None or key < best:
                        best = key
        if best is None:
            break
        _, col, row = best
        inv = mod_inverse(work[row][col], n)
        for i in range(d):
            if i != row and work[i][col]:
                f = (work[i][col] * inv) % n
                work[i] = [(a - f * b) % n for a, b in zip(work[i], work[row])]
                reducer[i] = [(a - f * b) % n for a, b in zip(reducer[i], reducer[row])]
        pivots.append((col, row))
        remaining.discard(row)
    zero = sorted(i for i in remaining if not any(work[i]))
    stalled = sorted(i for i in remaining if any(work[i]))
    # final row order: pivot rows by pivot column, stalled rows, zero rows
    order = [row for _, row in sorted(pivots)] + stalled + zero
    reduced = tuple(tuple(work[i]) for i in order)
    reducer_rows = tuple(tuple(reducer[i]) for i in order)
    cert = ReductionCertificate(
        matrix,
        reducer_rows,
        reduced,
        _det_int(reducer_rows) % n,
        len(zero),
        complete=not stalled,
    )
    if stalled and not allow_partial:
        err = NoUnitPivot(
            f"no unit pivot for rows {stalled} of the orbit matrix of {matrix.rep.entries} mod {n}"
        )
        err.certificate = cert
        raise err
    return cert


# ---------------------------------------------------------------------------
# torus maps


@dataclass(frozen=True)
class ExponentMatrix:
    """Integer exponents of the monomial map g(z) = sum_l prod_j z_j^e[j][l],
    lifted to the symmetric range (-n/2, n/2] of the originating modulus."""

    n: int
    rows: tuple[tuple[int, ...], ...]

    @property
    def variables(self) -> int:
        return len(self.rows)

    @property
    def terms(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def column_multiset(self) -> tuple[tuple[int, ...], ...]:
        """Columns as a sorted multiset, for order-insensitive comparison."""
        cols = tuple(tuple(row[c] for row in self.rows) for c in range(self.terms))
        return tuple(sorted(cols))

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "rows": [list(r) for r in self.rows]}, separators=(",", ":"))


def torus_map(cert: ReductionCertificate) -> ExponentMatrix:
    """Exponent matrix of the reduced form: nonzero rows of B, lifted."""
    if not cert.complete:
        raise HypothesisFailed("torus map of a stalled (partial) reduction is not defined")
    n = cert.matrix.n
    rows = tuple(
        tuple(_symmetric_lift(v, n) for v in row) for row in cert.reduced if any(row)
    )
    return ExponentMatrix(n, rows)


def hypocycloid_exponents(d: int) -> ExponentMatrix:
    """Exponents of z_1 + ... + z_{d-1} + 1/(z_1 ... z_{d-1})."""
    if d < 2:
        raise ValueError("needs d >= 2")
    rows = tuple(
        tuple((1 if c == j else 0) for c in range(d - 1)) + (-1,) for j in range(d - 1)
    )
    return ExponentMatrix(2 * d, rows)


def sample_torus_map(
    exponents: ExponentMatrix | Sequence[Sequence[int]],
    grid: int,
    budget: int = DEFAULT_BUDGET,
) -> PointCloud:
    """Evaluate the monomial map at all grid-th roots of unity.

    z_j = e(m_j / grid) over every tuple m in [0, grid)^variables; each
    term contributes e((sum_j e[j][l] m_j) / grid), evaluated through the
    same root-of-unity table as the supercharacters.
    """
    rows = exponents.rows if isinstance(exponents, ExponentMatrix) else tuple(map(tuple, exponents))
    v = len(rows)
    total = grid**v
    if total > budget:
        raise BudgetExceeded(total, budget)
    emat = np.array(rows, dtype=np.int64)  # (vars x terms)
    table = roots_of_unity(grid)
    values = []
    block = max(1, 2_000_000 // max(len(rows[0]), 1))
    lo = 0
    while lo < total:
        hi = min(lo + block, total)
        idx = np.arange(lo, hi, dtype=np.int64)
        m = np.empty((hi - lo, v), dtype=np.int64)
        for col in range(v - 1, -1, -1):
            m[:, col] = idx % grid
            idx //= grid
        phases = m @ emat
        np.mod(phases, grid, out=phases)
        values.append(table[phases].sum(axis=1))
        lo = hi
    flat = np.concatenate(values) if values else np.empty(0, dtype=complex)
    return PointCloud.from_values(grid, v, None, flat.tolist())


# ---------------------------------------------------------------------------
# hypocycloid geometry


def hypocycloid_boundary(d: int, samples: int = 4096) -> np.ndarray:
    """Closed polyline through samples points of the d-cusp hypocycloid."""
    if d < 2:
        raise ValueError("needs d >= 2")
    if samples < 3 * d:
        raise ValueError(f"samples {samples} too coarse for {d} cusps")
    t = 2 * pi * np.arange(samples) / samples
    x = (d - 1) * np.cos(t) + np.cos((d - 1) * t)
    y = (d - 1) * np.sin(t) - np.sin((d - 1) * t)
    return np.column_stack([x, y])


def polygon_sagitta_bound(d: int, samples: int) -> float:
    """Max distance from the curve to the inscribed polygon's chords.

    Linear interpolation error: (h^2 / 8) * max |r''|, with
    |r''| <= (d-1) + (d-1)^2 = d(d-1) for this parametrization.
    """
    h = 2 * pi / samples
    return h * h * d * (d - 1) / 8.0


def _winding_numbers(poly: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Winding number of the closed polyline around each point (nonzero rule)."""
    x1 = poly[:, 0]
    y1 = poly[:, 1]
    x2 = np.roll(poly[:, 0], -1)
    y2 = np.roll(poly[:, 1], -1)
    out = np.zeros(len(pts), dtype=np.int64)
    chunk = max(1, 2_000_000 // max(len(poly), 1))
    for lo in range(0, len(pts), chunk):
        px = pts[lo : lo + chunk, 0][:, None]
        py = pts[lo : lo + chunk, 1][:, None]
        cross = (x2 - x1) * (py - y1) - (px - x1) * (y2 - y1)
        up = (y1 <= py) & (y2 > py) & (cross > 0)
        down = (y1 > py) & (y2 <= py) & (cross < 0)
        out[lo : lo + chunk] = up.sum(axis=1) - down.sum(axis=1)
    return out


def _dist_to_polyline(poly: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Distance from each point to the closed polyline."""
    a = poly
    b = np.roll(poly, -1, axis=0)
    ab = b - a
    ab2 = np.maximum((ab * ab).sum(axis=1), 1e-300)
    out = np.empty(len(pts))
    chunk = max(1, 1_000_000 // max(len(poly), 1))
    for lo in range(0, len(pts), chunk):
        p = pts[lo : lo + chunk]
        ap = p[:, None, :] - a[None, :, :]
        t = np.clip((ap * ab[None, :, :]).sum(axis=2) / ab2[None, :], 0.0, 1.0)
        closest = a[None, :, :] + t[:, :, None] * ab[None, :, :]
        diff = p[:, None, :] - closest
        out[lo : lo + chunk] = np.sqrt((diff * diff).sum(axis=2).min(axis=1))
    return out


def hypocycloid_contains_many(
    values: Sequence[complex], d: int, tol: float = 1e-9, samples: int = 4096
) -> np.ndarray:
    """Containment test against the filled d-cusp hypocycloid.

    A point passes if it is inside the inscribed sample polygon (nonzero
    winding) or within tol + sagitta of the polyline.  The sagitta term
    is forced by the discretization: the polygon's chords undercut the
    true curve by up to that much, so points exactly on the curve (which
    the image does attain) land outside the polygon by up to the chord
    deviation, far above any useful tol.
    """
    pts = np.array([[z.real, z.imag] for z in values], dtype=float)
    if len(pts) == 0:
        return np.zeros(0, dtype=bool)
    poly = hypocycloid_boundary(d, samples)
    margin = tol + polygon_sagitta_bound(d, samples)
    ok = _winding_numbers(poly, pts) != 0
    rest = ~ok
    if rest.any():
        ok[rest] = _dist_to_polyline(poly, pts[rest]) <= margin
    return ok


def hypocycloid_contains(z: complex, d: int, tol: float = 1e-9, samples: int = 4096) -> bool:
    return bool(hypocycloid_contains_many([z], d, tol, samples)[0])


def hypocycloid_orbit_check(
    n: int,
    d: int,
    tol: float = 1e-9,
    budget: int = DEFAULT_BUDGET,
    samples: int = 4096,
    workers: int = 1,
) -> IdentityReport:
    """Every value of sigma_X for X = orbit of (1,...,1,1-d) lies in the
    filled d-cusp hypocycloid."""
    rep = canonicalize((1,) * (d - 1) + (1 - d,), n)
    cloud = image(rep, budget=budget, workers=workers)
    ok = hypocycloid_contains_many(cloud.values, d, tol, samples)
    passed = bool(ok.all())
    witness = None
    if not passed:
        bad = [cloud.values[i] for i in np.flatnonzero(~ok)[:4]]
        witness = {"x": rep, "outside": bad}
    superclasses = orbit_count(n, d)
    return IdentityReport(
        "hypocycloid",
        {"x": rep, "n": n, "d": d},
        False,
        passed,
        witness,
        info={
            "points": len(cloud.values),
            "superclasses": superclasses,
            "fill_ratio": len(cloud.values) / superclasses,
        },
    )

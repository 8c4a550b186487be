"""Fano fibers as explicit equation systems and exhaustive k-plane censuses.

The census iterates reduced-row-echelon representatives chart by chart (one
chart per pivot-column pattern), so every k-plane over F_p is visited exactly
once without hashing.  Containment is tested by evaluating f at the plane's
F_p points with early abort; for p > d this is equivalent to the restriction
being the zero form, since a nonzero degree-d form cannot vanish on all of
P^k(F_p).

Census counts are dimension *evidence* only: counts of a D-dimensional family
grow like p^D, and the two-prime log-ratio estimate rounds that exponent.
"""

from __future__ import annotations

import math
import random
from itertools import combinations
from typing import Optional, Sequence

from .errors import (
    DimensionMismatch,
    NotAFanoPoint,
    PlaneNotInX,
    SearchSpaceTooLarge,
)
from .expansion import PlaneExpansion, expand_at_plane, linear_diagnostics
from .fields import FieldSpec
from .linalg import extend_to_basis
from .poly import HomogeneousForm, poly_eval, reduce_mod
from .varieties import (
    DEFAULT_POINT_BUDGET,
    Hypersurface,
    KPlane,
    contains,
    projective_point_count,
    projective_points,
)

DEFAULT_LIST_CAP = 10**6


def binom(a: int, b: int) -> int:
    return math.comb(a, b) if a >= 0 and b >= 0 else 0


def gaussian_binomial(m: int, r: int, q: int) -> int:
    """Number of r-dimensional subspaces of F_q^m."""
    num = den = 1
    for i in range(r):
        num *= q ** (m - i) - 1
        den *= q ** (r - i) - 1
    return num // den


def expected_dims(n: int, d: int, k: int) -> dict:
    """Expected dimensions: the full space of k-planes on X, the fiber of
    k-planes through a fixed (k-1)-plane, and the k=1 point fiber."""
    if not (n > k >= 0) or d < 1:
        raise DimensionMismatch(f"need n > k >= 0 and d >= 1, got n={n}, k={k}, d={d}")
    return {
        "fano": (k + 1) * (n - k) - binom(d + k, k),
        "fiber": n - k - binom(d + k - 1, k),
        "point_fiber": n - 1 - d,
    }


# -- Fano fibers -------------------------------------------------------------------


class FanoFiber:
    """Equations on the P^(n-k) of k-planes through a fixed (k-1)-plane."""

    __slots__ = ("expansion", "k", "expected_dim")

    def __init__(self, expansion: PlaneExpansion):
        self.expansion = expansion
        X = expansion.hypersurface
        self.k = expansion.center.dim + 1
        self.expected_dim = (
            X.ambient_dim - self.k - binom(X.degree + self.k - 1, self.k)
        )

    @property
    def hypersurface(self) -> Hypersurface:
        return self.expansion.hypersurface

    @property
    def center(self) -> KPlane:
        return self.expansion.center

    @property
    def fiber_dim(self) -> int:
        return self.hypersurface.ambient_dim - self.k

    @property
    def equations(self) -> dict:
        return self.expansion.coefficients

    def contains_fiber_point(self, at: Sequence) -> bool:
        return all(
            poly_eval(c, at) == 0 for c in self.equations.values() if not c.is_zero
        )

    def plane_at(self, at: Sequence) -> KPlane:
        return self.expansion.plane_at(at)

    def solutions(self, budget: int = DEFAULT_POINT_BUDGET):
        """All F_p fiber points satisfying every equation."""
        p = self.hypersurface._require_prime()
        total = projective_point_count(self.fiber_dim, p)
        if total > budget:
            raise SearchSpaceTooLarge(f"fiber scan of {total} points over budget")
        return [
            at
            for at in projective_points(self.fiber_dim, p)
            if self.contains_fiber_point(at)
        ]


def fano_fiber(X: Hypersurface, center: KPlane, rng: Optional[random.Random] = None) -> FanoFiber:
    if not contains(X, center):
        raise PlaneNotInX("fiber center must be contained in the hypersurface")
    return FanoFiber(expand_at_plane(X, center, rng))


def tangent_dim(fiber: FanoFiber, at: Sequence, rng: Optional[random.Random] = None) -> int:
    """dim of the tangent space at a fiber point: n - k - delta."""
    if not fiber.contains_fiber_point(at):
        raise NotAFanoPoint(f"{tuple(at)} does not satisfy the fiber equations")
    diag = linear_diagnostics(fiber.expansion, at, rng)
    return fiber.fiber_dim - diag.delta


# -- censuses --------------------------------------------------------------------


class PlaneCensus:
    """Exact count (and optionally the list) of F_p-rational k-planes on X."""

    __slots__ = ("n", "d", "k", "p", "count", "method", "planes", "through")

    def __init__(self, n, d, k, p, count, method, planes, through=None):
        self.n = n
        self.d = d
        self.k = k
        self.p = p
        self.count = count
        self.method = method
        self.planes = planes
        self.through = through

    def to_dict(self):
        doc = {
            "n": self.n,
            "d": self.d,
            "k": self.k,
            "prime": self.p,
            "count": self.count,
            "method": self.method,
            "dimension_note": "counts are F_p evidence, not a dimension proof",
        }
        if self.through is not None:
            doc["through"] = [[str(x) for x in row] for row in self.through.basis]
        if self.planes is not None:
            doc["planes"] = [
                [[str(x) for x in row] for row in P.basis] for P in self.planes
            ]
        return doc


def _power_table(p: int, d: int):
    return [[pow(x, e, p) for e in range(d + 1)] for x in range(p)]


def _make_plane_tester(form: HomogeneousForm, k: int, p: int):
    """Closure testing whether f vanishes at every F_p point of a (k+1)-row plane."""
    terms = [(int(c), exps) for exps, c in form.terms.items()]
    pw = _power_table(p, form.degree)
    params = list(projective_points(k, p))
    nv = form.num_vars

    def vanishes(rows) -> bool:
        for t in params:
            pt = [0] * nv
            for ti, row in zip(t, rows):
                if ti:
                    for j in range(nv):
                        pt[j] = (pt[j] + ti * row[j]) % p
            acc = 0
            for c, exps in terms:
                v = c
                for x, e in zip(pt, exps):
                    if e:
                        if x == 0:
                            v = 0
                            break
                        v = v * pw[x][e] % p
                acc = (acc + v) % p
            if acc:
                return False
        return True

    return vanishes


def _free_positions(pattern, n: int):
    """Row-major free entry positions of the RREF chart for a pivot pattern."""
    out = []
    for i, piv in enumerate(pattern):
        for j in range(piv + 1, n + 1):
            if j not in pattern:
                out.append((i, j))
    return out


def _chart_chunks(n: int, k: int, p: int, pieces: int):
    """Split all RREF charts into contiguous assignment ranges."""
    total = gaussian_binomial(n + 1, k + 1, p)
    per = max(1, total // max(1, pieces))
    chunks = []
    for pattern in combinations(range(n + 1), k + 1):
        size = p ** len(_free_positions(pattern, n))
        start = 0
        while start < size:
            stop = min(size, start + per)
            chunks.append((pattern, start, stop))
            start = stop
    return chunks


def _census_chunk(args):
    """Count (and optionally collect) contained planes in one chart range."""
    X, k, pattern, start, stop, materialize = args
    p = X.field.p
    n = X.ambient_dim
    vanishes = _make_plane_tester(X.form, k, p)
    free = _free_positions(pattern, n)
    base = [[0] * (n + 1) for _ in range(k + 1)]
    for i, piv in enumerate(pattern):
        base[i][piv] = 1
    count = 0
    found = [] if materialize else None
    for idx in range(start, stop):
        v = idx
        digits = []
        for _ in range(len(free)):
            v, r = divmod(v, p)
            digits.append(r)
        digits.reverse()
        rows = [row[:] for row in base]
        for (i, j), val in zip(free, digits):
            rows[i][j] = val
        if vanishes(rows):
            count += 1
            if found is not None:
                found.append(tuple(tuple(r) for r in rows))
    return count, found


def _through_chunk(args):
    """Count contained planes through a center over one fiber-point range."""
    X, center_rows, ext_rows, lead, start, stop, materialize = args
    p = X.field.p
    k = len(center_rows)  # searched plane dimension = center dim + 1
    vanishes = _make_plane_tester(X.form, k, p)
    fiber_dim = len(ext_rows) - 1
    from .varieties import iter_chunk

    count = 0
    found = [] if materialize else None
    n1 = len(ext_rows[0])
    for a in iter_chunk(fiber_dim, p, lead, start, stop):
        w = [0] * n1
        for aj, ext in zip(a, ext_rows):
            if aj:
                for j in range(n1):
                    w[j] = (w[j] + aj * ext[j]) % p
        rows = [list(r) for r in center_rows] + [w]
        if vanishes(rows):
            count += 1
            if found is not None:
                found.append(tuple(a))
    return count, found


def enumerate_kplanes(
    X: Hypersurface,
    k: int,
    through: Optional[KPlane] = None,
    budget: int = DEFAULT_POINT_BUDGET,
    list_cap: int = DEFAULT_LIST_CAP,
    jobs: int = 1,
) -> PlaneCensus:
    """Exhaustive census of k-planes on X over F_p.

    `through` restricts to planes containing the given (k-1)-plane by scanning
    the P^(n-k) fiber instead of the full Grassmannian.  Every plane is
    visited exactly once; chunked charts merge deterministically, so the
    result is identical for any job count.
    """
    p = X._require_prime()
    n = X.ambient_dim
    if not (0 < k < n):
        raise DimensionMismatch(f"need 0 < k < n, got k={k}, n={n}")
    pieces = max(jobs * 4, 1)
    if through is not None:
        if through.dim != k - 1:
            raise DimensionMismatch(
                f"through-center must have dimension {k - 1}, got {through.dim}"
            )
        if through.ambient_dim != n:
            raise DimensionMismatch("through-center has wrong ambient dimension")
        size = projective_point_count(n - k, p)
        if size > budget:
            raise SearchSpaceTooLarge(f"fiber scan of {size} points over budget {budget}")
        full = extend_to_basis([list(r) for r in through.basis], X.field)
        ext_rows = [tuple(r) for r in full[k:]]
        center_rows = tuple(tuple(r) for r in through.basis)
        work = [
            (X, center_rows, ext_rows, lead, start, stop, True)
            for (lead, start, stop) in _fiber_chunks(n - k, p, pieces)
        ]
        results = _run_chunks(_through_chunk, work, jobs)
        count = sum(c for c, _ in results)
        planes = None
        if count <= list_cap:
            planes = []
            for _, coords in results:
                for a in coords:
                    w = [0] * (n + 1)
                    for aj, ext in zip(a, ext_rows):
                        if aj:
                            for j in range(n + 1):
                                w[j] = (w[j] + aj * ext[j]) % p
                    planes.append(
                        KPlane.from_rows(X.field, [list(r) for r in center_rows] + [w])
                    )
        return PlaneCensus(n, X.degree, k, p, count, "through_center", planes, through)

    size = gaussian_binomial(n + 1, k + 1, p)
    if size > budget:
        raise SearchSpaceTooLarge(
            f"Grassmannian scan of {size} planes exceeds budget {budget}"
        )
    work = [
        (X, k, pattern, start, stop, True)
        for (pattern, start, stop) in _chart_chunks(n, k, p, pieces)
    ]
    results = _run_chunks(_census_chunk, work, jobs)
    count = sum(c for c, _ in results)
    planes = None
    if count <= list_cap:
        planes = [
            KPlane(X.field, k, n, rows) for _, found in results for rows in found
        ]
    return PlaneCensus(n, X.degree, k, p, count, "full_grassmannian", planes)


def _fiber_chunks(m: int, p: int, pieces: int):
    from .varieties import projective_chunks

    return projective_chunks(m, p, pieces)


def _run_chunks(fn, work, jobs: int):
    if jobs <= 1 or len(work) <= 1:
        return [fn(args) for args in work]
    import multiprocessing

    with multiprocessing.Pool(processes=jobs) as pool:
        return pool.map(fn, work)


# -- dimension estimation -----------------------------------------------------------


class DimensionEstimate:
    """Two-prime census comparison; estimate = rounded log-ratio, -1 = empty."""

    __slots__ = ("k", "primes", "counts", "estimate", "claimed")

    def __init__(self, k, primes, counts, estimate, claimed):
        self.k = k
        self.primes = primes
        self.counts = counts
        self.estimate = estimate
        self.claimed = claimed

    def to_dict(self):
        return {
            "k": self.k,
            "primes": list(self.primes),
            "counts": list(self.counts),
            "estimate": self.estimate,
            "claimed_expected_dim": self.claimed,
            "dimension_note": "two-prime log-ratio heuristic over F_p counts",
        }


def dimension_estimate(
    recipe: HomogeneousForm | Hypersurface,
    k: int,
    primes: tuple,
    budget: int = DEFAULT_POINT_BUDGET,
) -> DimensionEstimate:
    """Census the same integer-coefficient recipe over two primes and compare
    count growth against the expected dimension.

    The recipe is a form whose coefficients are lifted to integers and reduced
    modulo each prime (a rational form with invertible denominators works too).
    """
    form = recipe.form if isinstance(recipe, Hypersurface) else recipe
    p1, p2 = primes
    if p1 >= p2:
        raise DimensionMismatch("primes must be increasing")
    counts = []
    for p in (p1, p2):
        Xp = Hypersurface(reduce_mod(form, p))
        counts.append(enumerate_kplanes(Xp, k, budget=budget).count)
    c1, c2 = counts
    if c1 == 0 or c2 == 0:
        estimate = -1
    else:
        estimate = round((math.log(c2) - math.log(c1)) / (math.log(p2) - math.log(p1)))
    n = form.num_vars - 1
    claimed = expected_dims(n, form.degree, k)["fano"]
    return DimensionEstimate(k, (p1, p2), counts, estimate, claimed)

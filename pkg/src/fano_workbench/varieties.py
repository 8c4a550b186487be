"""Hypersurfaces, canonical linear subspaces, smoothness probing, example families.

Smoothness over F_p is a semi-decision: a witness certifies SINGULAR exactly,
while absence of a witness after an exhaustive scan (optionally repeated over
larger primes as a stand-in for field extensions) is reported as bounded
evidence only.  Every report carries that label.
"""

from __future__ import annotations

import json
import random
from typing import Iterable, Iterator, Optional, Sequence

from .errors import (
    CharacteristicTooSmall,
    DimensionMismatch,
    InputError,
    SearchSpaceTooLarge,
    SmoothnessNotAchieved,
    Unsupported,
)
from .fields import QQ, FieldSpec, next_prime_after
from .linalg import rank, rref
from .poly import (
    HomogeneousForm,
    partial_derivatives,
    poly_eval,
    poly_parse,
    poly_render,
    poly_substitute,
    reduce_mod,
)

DEFAULT_POINT_BUDGET = 10**8

# fixed salts keep derived streams distinct and process-independent
_SALT_SMOOTH = 0x736D6F
_SALT_CONICAL = 0x636F6E
_SALT_PLANED = 0x706C61


def derive_seed(seed: int, attempt: int, salt: int = 0) -> int:
    """Stable integer seed for attempt streams (no hash randomization)."""
    return (seed * 1_000_003 + attempt) ^ salt


# -- projective point scans ---------------------------------------------------


def projective_point_count(n: int, p: int) -> int:
    return (p ** (n + 1) - 1) // (p - 1)


def projective_points(n: int, p: int) -> Iterator[tuple]:
    """Canonical representatives of P^n(F_p): first nonzero coordinate is 1,
    ordered by leading position then lexicographically."""
    for lead in range(n + 1):
        prefix = (0,) * lead + (1,)
        free = n - lead
        for idx in range(p**free):
            digits = []
            v = idx
            for _ in range(free):
                v, r = divmod(v, p)
                digits.append(r)
            yield prefix + tuple(reversed(digits))


def projective_chunks(n: int, p: int, num_chunks: int):
    """Split the canonical point scan into contiguous (lead, start, stop) ranges."""
    sizes = [(lead, p ** (n - lead)) for lead in range(n + 1)]
    total = sum(s for _, s in sizes)
    per = max(1, total // max(1, num_chunks))
    chunks = []
    for lead, size in sizes:
        start = 0
        while start < size:
            stop = min(size, start + per)
            chunks.append((lead, start, stop))
            start = stop
    return chunks


def iter_chunk(n: int, p: int, lead: int, start: int, stop: int) -> Iterator[tuple]:
    prefix = (0,) * lead + (1,)
    free = n - lead
    for idx in range(start, stop):
        digits = []
        v = idx
        for _ in range(free):
            v, r = divmod(v, p)
            digits.append(r)
        yield prefix + tuple(reversed(digits))


def normalize_point(field: FieldSpec, pt: Sequence) -> tuple:
    """Scale so the first nonzero coordinate is 1."""
    pt = [field(x) for x in pt]
    for x in pt:
        if x != 0:
            inv = field.inv(x)
            return tuple(field.mul(inv, y) for y in pt)
    raise InputError("zero vector is not a projective point")


# -- linear subspaces ----------------------------------------------------------


class KPlane:
    """k-dimensional linear subspace of P^n, stored as a full-rank RREF basis.

    The RREF representation is unique, so equal subspaces compare equal
    structurally and planes can live in sets.
    """

    __slots__ = ("field", "dim", "ambient_dim", "basis")

    def __init__(self, field: FieldSpec, dim: int, ambient_dim: int, basis: tuple):
        self.field = field
        self.dim = dim
        self.ambient_dim = ambient_dim
        self.basis = basis

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence]) -> "KPlane":
        reduced, pivots = rref(rows, field)
        if len(pivots) != len(rows):
            raise DimensionMismatch(
                f"{len(rows)} spanning rows have rank {len(pivots)}"
            )
        basis = tuple(tuple(r) for r in reduced[: len(pivots)])
        return cls(field, len(rows) - 1, len(rows[0]) - 1, basis)

    @classmethod
    def point(cls, field: FieldSpec, coords: Sequence) -> "KPlane":
        return cls.from_rows(field, [list(coords)])

    def __eq__(self, other):
        return (
            isinstance(other, KPlane)
            and self.field == other.field
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.field, self.basis))

    def __repr__(self):
        return f"KPlane(dim={self.dim}, P^{self.ambient_dim}, basis={self.basis})"

    # -- geometry ---------------------------------------------------------

    def substitution_matrix(self):
        """(n+1) x (k+1) matrix sending plane coordinates t to ambient x = B^T t."""
        return [
            [self.basis[i][j] for i in range(self.dim + 1)]
            for j in range(self.ambient_dim + 1)
        ]

    def parametrization_forms(self):
        """Ambient coordinates as linear forms in k+1 plane parameters."""
        return [
            HomogeneousForm.linear(self.field, row) for row in self.substitution_matrix()
        ]

    def point_at(self, params: Sequence) -> tuple:
        f = self.field
        out = [f.zero] * (self.ambient_dim + 1)
        for t, row in zip(params, self.basis):
            if t != 0:
                out = [f.add(o, f.mul(t, x)) for o, x in zip(out, row)]
        return tuple(out)

    def points(self) -> Iterator[tuple]:
        """All F_p points of the plane (distinct canonical representatives)."""
        if self.field.p is None:
            raise Unsupported("cannot enumerate a plane over QQ")
        for params in projective_points(self.dim, self.field.p):
            yield normalize_point(self.field, self.point_at(params))

    def contains_point(self, pt: Sequence) -> bool:
        rows = [list(r) for r in self.basis] + [list(pt)]
        return rank(rows, self.field) == self.dim + 1

    def contains_subspace(self, other: "KPlane") -> bool:
        rows = [list(r) for r in self.basis] + [list(r) for r in other.basis]
        return rank(rows, self.field) == self.dim + 1

    def span_with(self, pt: Sequence) -> "KPlane":
        rows = [list(r) for r in self.basis] + [list(pt)]
        return KPlane.from_rows(self.field, rows)

    def random_subplane(self, r: int, rng: random.Random) -> "KPlane":
        """Random r-dimensional subspace of this plane."""
        f = self.field
        while True:
            coeffs = [
                [f.random_element(rng) for _ in range(self.dim + 1)] for _ in range(r + 1)
            ]
            if rank(coeffs, f) == r + 1:
                rows = [self.point_at(c) for c in coeffs]
                return KPlane.from_rows(f, rows)


def random_kplane(field: FieldSpec, ambient_dim: int, k: int, rng: random.Random) -> KPlane:
    while True:
        rows = [
            [field.random_element(rng) for _ in range(ambient_dim + 1)] for _ in range(k + 1)
        ]
        if rank(rows, field) == k + 1:
            return KPlane.from_rows(field, rows)


# -- hypersurfaces --------------------------------------------------------------


class Hypersurface:
    """X = V(f) in P^n for a nonzero homogeneous form f of degree d.

    Prime moduli must satisfy p > d so every integer factor up to d stays
    invertible; this is checked at construction.
    """

    __slots__ = ("field", "ambient_dim", "degree", "form", "marked_planes")

    def __init__(self, form: HomogeneousForm, marked_planes: Iterable[KPlane] = ()):
        if form.is_zero:
            raise InputError("hypersurface form must be nonzero")
        if form.num_vars < 2:
            raise InputError("ambient projective space needs at least 2 coordinates")
        if form.degree < 1:
            raise InputError("hypersurface degree must be >= 1")
        if form.field.p is not None and form.field.p <= form.degree:
            raise CharacteristicTooSmall(
                f"p={form.field.p} <= d={form.degree}; choose a larger prime"
            )
        self.form = form
        self.field = form.field
        self.ambient_dim = form.num_vars - 1
        self.degree = form.degree
        self.marked_planes = tuple(marked_planes)
        for P in self.marked_planes:
            if P.ambient_dim != self.ambient_dim:
                raise DimensionMismatch("marked plane has the wrong ambient dimension")

    def __repr__(self):
        return (
            f"Hypersurface(P^{self.ambient_dim}, d={self.degree}, {self.field}, "
            f"{poly_render(self.form)!r})"
        )

    def __eq__(self, other):
        return isinstance(other, Hypersurface) and self.form == other.form

    def gradient(self):
        return partial_derivatives(self.form)

    def points(self, budget: int = DEFAULT_POINT_BUDGET):
        """All F_p points of X (canonical representatives)."""
        p = self._require_prime()
        total = projective_point_count(self.ambient_dim, p)
        if total > budget:
            raise SearchSpaceTooLarge(f"|P^n(F_p)| = {total} exceeds budget {budget}")
        return [
            pt
            for pt in projective_points(self.ambient_dim, p)
            if poly_eval(self.form, pt) == 0
        ]

    def _require_prime(self) -> int:
        if self.field.p is None:
            raise Unsupported("operation requires a prime field")
        return self.field.p


def contains(X: Hypersurface, P: KPlane) -> bool:
    """Exact containment: the restriction of f to the plane is the zero form."""
    if X.ambient_dim != P.ambient_dim:
        raise DimensionMismatch(
            f"hypersurface in P^{X.ambient_dim}, plane in P^{P.ambient_dim}"
        )
    restricted = poly_substitute(X.form, P.parametrization_forms())
    return restricted.is_zero


# -- smoothness probing ----------------------------------------------------------


class SingularReport:
    """Outcome of a bounded singular-point search.

    `status` is "singular" (exact witness) or "no_singular_point_found"
    (evidence only).  `level` counts which searched prime produced the witness
    (1 = the base prime; higher levels rerun the lifted integer form over a
    larger prime as an extension-field stand-in).
    """

    __slots__ = ("status", "witness", "level", "searched_primes", "bound")

    def __init__(self, status, witness, level, searched_primes, bound):
        self.status = status
        self.witness = witness
        self.level = level
        self.searched_primes = list(searched_primes)
        self.bound = bound

    @property
    def is_certified_singular(self) -> bool:
        return self.status == "singular"

    def to_dict(self):
        return {
            "status": self.status,
            "witness": list(self.witness) if self.witness else None,
            "level": self.level,
            "searched_primes": self.searched_primes,
            "bound": self.bound,
            "smoothness": "certified_singular"
            if self.is_certified_singular
            else "evidence_only",
        }

    def __repr__(self):
        return f"SingularReport({self.to_dict()})"


def _scan_singular(form: HomogeneousForm, budget: int):
    p = form.field.p
    n = form.num_vars - 1
    total = projective_point_count(n, p)
    if total > budget:
        raise SearchSpaceTooLarge(f"singular scan needs {total} points > budget {budget}")
    grad = partial_derivatives(form)
    for pt in projective_points(n, p):
        if poly_eval(form, pt) != 0:
            continue
        if all(poly_eval(g, pt) == 0 for g in grad):
            return pt
    return None


def singular_search(
    X: Hypersurface, max_extension: int = 1, budget: int = DEFAULT_POINT_BUDGET
) -> SingularReport:
    """Exhaustive F_p singular-point scan; levels r = 2..R rerun the lifted
    integer form over successively larger primes as heuristic evidence."""
    p = X._require_prime()
    searched = []
    form = X.form
    prime = p
    for level in range(1, max_extension + 1):
        if level > 1:
            prime = next_prime_after(max(prime, X.degree))
            form = reduce_mod(X.form, prime)
        searched.append(prime)
        witness = _scan_singular(form, budget)
        if witness is not None:
            return SingularReport("singular", witness, level, searched, max_extension)
    return SingularReport(
        "no_singular_point_found", None, None, searched, max_extension
    )


# -- random and example families ---------------------------------------------------


def monomial_exponents(num_vars: int, degree: int, allowed=None):
    """All exponent tuples of the given total degree (optionally supported on
    a subset of variables)."""
    allowed = list(range(num_vars)) if allowed is None else list(allowed)

    def rec(pos, remaining):
        if pos == len(allowed) - 1:
            exps = [0] * num_vars
            exps[allowed[pos]] = remaining
            yield exps
            return
        for e in range(remaining + 1):
            for tail in rec(pos + 1, remaining - e):
                tail[allowed[pos]] = e
                yield tail

    if not allowed:
        if degree == 0:
            yield (0,) * num_vars
        return
    for exps in rec(0, degree):
        yield tuple(exps)


def random_form(
    field: FieldSpec,
    num_vars: int,
    degree: int,
    rng: random.Random,
    allowed=None,
) -> HomogeneousForm:
    """Random nonzero form supported on the allowed variables."""
    while True:
        items = [
            (exps, field.random_element(rng))
            for exps in monomial_exponents(num_vars, degree, allowed)
        ]
        form = HomogeneousForm.from_terms(field, num_vars, degree, items)
        if not form.is_zero:
            return form


def fermat(n: int, d: int, field: FieldSpec) -> Hypersurface:
    items = []
    for i in range(n + 1):
        exps = [0] * (n + 1)
        exps[i] = d
        items.append((tuple(exps), 1))
    return Hypersurface(HomogeneousForm.from_terms(field, n + 1, d, items))


def random_smooth(
    n: int,
    d: int,
    p: int,
    attempts: int = 100,
    seed: int = 0,
    budget: int = DEFAULT_POINT_BUDGET,
):
    """Random hypersurface passing the level-1 singular scan.  Returns
    (Hypersurface, report, seed_used)."""
    field = FieldSpec(p)
    for t in range(attempts):
        rng = random.Random(derive_seed(seed, t, _SALT_SMOOTH))
        X = Hypersurface(random_form(field, n + 1, d, rng))
        report = singular_search(X, 1, budget)
        if not report.is_certified_singular:
            return X, report, derive_seed(seed, t, _SALT_SMOOTH)
    raise SmoothnessNotAchieved(f"no smooth-evidence ({n},{d}) hypersurface in {attempts} tries")


def example_hypersurface(
    kind: str,
    *,
    n: int,
    d: int,
    field: FieldSpec | None = None,
    p: int | None = None,
    m: int | None = None,
    seed: int = 0,
    attempts: int = 100,
    budget: int = DEFAULT_POINT_BUDGET,
):
    """Named example families.  Returns (Hypersurface, marked KPlane or None).

    fermat:  sum of d-th powers (smooth whenever p does not divide d).
    conical: f = g + x0*h with g in x2..xn only; the hyperplane section
             X & V(x0) is a cone with vertex [0,1,0,...,0] (the marked point).
    planed:  f = sum_{i=m+1..n} x_i*g_i, so X contains the marked m-plane
             spanned by e_0..e_m; needs m <= (n-1)/2 for a chance of smoothness.
    """
    if field is None:
        if p is None:
            raise InputError("need a field or a prime")
        field = FieldSpec(p)
    if kind == "fermat":
        return fermat(n, d, field), None
    if field.p is None:
        raise Unsupported(f"{kind} examples need a prime field for the smoothness scan")

    if kind == "conical":
        vertex = [0] * (n + 1)
        vertex[1] = 1
        for t in range(attempts):
            rng = random.Random(derive_seed(seed, t, _SALT_CONICAL))
            g = random_form(field, n + 1, d, rng, allowed=range(2, n + 1))
            h = random_form(field, n + 1, d - 1, rng)
            x0 = HomogeneousForm.variable(field, n + 1, 0)
            X = Hypersurface(g + x0 * h)
            if not singular_search(X, 1, budget).is_certified_singular:
                marked = KPlane.point(field, vertex)
                assert poly_eval(X.form, vertex) == 0
                return Hypersurface(X.form, [marked]), marked
        raise SmoothnessNotAchieved(f"conical({n},{d}) not smooth in {attempts} tries")

    if kind == "planed":
        if m is None:
            raise InputError("planed needs the marked-plane dimension m")
        if 2 * m > n - 1:
            raise InputError(f"planed needs m <= (n-1)/2, got m={m}, n={n}")
        plane_rows = [[1 if j == i else 0 for j in range(n + 1)] for i in range(m + 1)]
        for t in range(attempts):
            rng = random.Random(derive_seed(seed, t, _SALT_PLANED))
            form = HomogeneousForm.zero(field, n + 1, d)
            for i in range(m + 1, n + 1):
                xi = HomogeneousForm.variable(field, n + 1, i)
                form = form + xi * random_form(field, n + 1, d - 1, rng)
            if form.is_zero:
                continue
            X = Hypersurface(form)
            if not singular_search(X, 1, budget).is_certified_singular:
                marked = KPlane.from_rows(field, plane_rows)
                if not contains(X, marked):
                    raise InputError("construction failed to contain its plane")
                return Hypersurface(X.form, [marked]), marked
        raise SmoothnessNotAchieved(f"planed({n},{d},{m}) not smooth in {attempts} tries")

    raise InputError(f"unknown example kind {kind!r}")


# -- JSON files -------------------------------------------------------------------


def hypersurface_to_json(X: Hypersurface) -> dict:
    doc = {
        "n": X.ambient_dim,
        "d": X.degree,
        "field": "QQ" if X.field.p is None else {"prime": X.field.p},
        "form": poly_render(X.form),
        "marked_planes": [
            [[str(x) for x in row] for row in P.basis] for P in X.marked_planes
        ],
    }
    return doc


def hypersurface_from_json(doc: dict) -> Hypersurface:
    field = QQ if doc["field"] == "QQ" else FieldSpec(int(doc["field"]["prime"]))
    n = int(doc["n"])
    form = poly_parse(doc["form"], n + 1, field)
    if form.degree != int(doc["d"]):
        raise InputError(f"form degree {form.degree} != declared d={doc['d']}")
    planes = [
        KPlane.from_rows(field, [[field.parse_scalar(str(x)) for x in row] for row in rows])
        for rows in doc.get("marked_planes", [])
    ]
    return Hypersurface(form, planes)


def save_hypersurface(X: Hypersurface, path: str):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(hypersurface_to_json(X), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_hypersurface(path: str) -> Hypersurface:
    with open(path, "r", encoding="utf-8") as fh:
        return hypersurface_from_json(json.load(fh))

"""Big-integer threshold arithmetic: the recursive unirationality cutoffs
k0(d), n0(d), the binomial-versus-power comparison behind their growth bound,
and the predicate battery for parameter tuples (n, d, k, s, e[, r]).

Everything is exact integer arithmetic; the doubling-tower sizes (k0(5) feeds
binomials with million-scale tops) are the reason floats are banned here.
"""

from __future__ import annotations

import math
from functools import lru_cache

from .errors import DimensionMismatch

DEFAULT_MAX_EXACT_DEGREE = 6


def binom(a: int, b: int) -> int:
    if b < 0 or a < 0 or b > a:
        return 0
    return math.comb(a, b)


@lru_cache(maxsize=None)
def k0(d: int) -> int:
    """Marked-plane dimension threshold; k0(2) = 0, then
    k0(d) = 1 + 2*C(k0(d-1)+d-2, d-2) + C(k0(d-1)+d-1, d-1)."""
    if d < 2:
        raise DimensionMismatch("k0 is defined for d >= 2")
    if d == 2:
        return 0
    prev = k0(d - 1)
    return 1 + 2 * binom(prev + d - 2, d - 2) + binom(prev + d - 1, d - 1)


@lru_cache(maxsize=None)
def n0(d: int) -> int:
    """Ambient dimension threshold: ceil(C(k0+d, d) / (k0+1)) + k0."""
    kd = k0(d)
    c = binom(kd + d, d)
    return -(-c // (kd + 1)) + kd


class BinomBoundCheck:
    """Exact comparison 4*C(x+d, d) < x^d with its hypothesis flag
    (the clean statement assumes d >= 5 and x >= 6)."""

    __slots__ = ("x", "d", "holds", "hypothesis_met", "lhs", "rhs")

    def __init__(self, x, d, holds, hypothesis_met, lhs, rhs):
        self.x = x
        self.d = d
        self.holds = holds
        self.hypothesis_met = hypothesis_met
        self.lhs = lhs
        self.rhs = rhs

    def __bool__(self):
        return self.holds

    def to_dict(self):
        return {
            "x": self.x,
            "d": self.d,
            "holds": self.holds,
            "hypothesis_met": self.hypothesis_met,
            "comparison": f"4*C({self.x + self.d},{self.d}) = {self.lhs} "
            f"{'<' if self.holds else '>='} {self.x}^{self.d} = {self.rhs}",
        }


def binom_bound_check(x: int, d: int) -> BinomBoundCheck:
    lhs = 4 * binom(x + d, d)
    rhs = x**d
    return BinomBoundCheck(x, d, lhs < rhs, d >= 5 and x >= 6, lhs, rhs)


def k0_within_doubling_bound(d: int) -> bool:
    """k0(d) <= 2^((d-1)!) exactly (meaningful for d >= 5)."""
    return k0(d) <= 2 ** math.factorial(d - 1)


def n0_within_doubling_bound(d: int) -> dict:
    """n0(d) <= 2^(d!) exactly; d = 4 does not follow from the binomial lemma
    and is flagged as separately checked."""
    holds = n0(d) <= 2 ** math.factorial(d)
    return {"d": d, "holds": holds, "d4_checked_separately": d == 4}


class BoundReport:
    """Exact predicate battery for one parameter tuple."""

    __slots__ = ("inputs", "values", "predicates", "expected_dims", "notes")

    def __init__(self, inputs, values, predicates, expected_dims, notes):
        self.inputs = inputs
        self.values = values
        self.predicates = predicates
        self.expected_dims = expected_dims
        self.notes = notes

    def to_dict(self):
        return {
            "inputs": self.inputs,
            "values": {k: str(v) for k, v in self.values.items()},
            "predicates": {
                name: {"holds": holds, "inequality": text}
                for name, (holds, text) in self.predicates.items()
            },
            "expected_dims": self.expected_dims,
            "notes": list(self.notes),
        }


def threshold_report(
    n: int,
    d: int,
    k: int,
    s: int = -1,
    e: int = 1,
    r: int | None = None,
    max_exact_degree: int = DEFAULT_MAX_EXACT_DEGREE,
) -> BoundReport:
    """Evaluate every closed-form threshold at (n, d, k, s, e[, r]).

    s is the singular-locus dimension (-1 = smooth evidence), e a curve
    degree, r the sub-plane dimension of the degree-reduction step.  k0/n0
    values appear when d <= max_exact_degree (they grow as iterated
    exponentials beyond desk scale).
    """
    if not (n > k >= 0) or d < 1 or s < -1 or e < 1:
        raise DimensionMismatch(
            f"need n > k >= 0, d >= 1, s >= -1, e >= 1; got n={n}, d={d}, k={k}, s={s}, e={e}"
        )
    from .curves import expected_dim_curves
    from .fano import expected_dims

    c_km1 = binom(d + k - 1, k)
    c_k = binom(d + k, k)
    preds = {}

    def put(name, holds, text):
        preds[name] = (bool(holds), text)

    put("lines_dim_conjectured_range", d <= n, f"d <= n: {d} <= {n}")
    put("lines_dim_proved", n >= 2 * d - 4, f"n >= 2d-4: {n} >= {2 * d - 4}")
    put(
        "lines_irreducible",
        n >= 2 * d - 1 and n >= 4,
        f"n >= 2d-1 and n >= 4: {n} >= {2 * d - 1} and {n} >= 4",
    )
    put(
        "kplanes_dim_irreducible",
        n >= 2 * c_km1 + k,
        f"n >= 2*C(d+k-1,k)+k: {n} >= {2 * c_km1 + k}",
    )
    put(
        "kplanes_dim",
        n >= 2 * c_km1 + max(s - 1, k - 2),
        f"n >= 2*C(d+k-1,k)+max(s-1,k-2): {n} >= {2 * c_km1 + max(s - 1, k - 2)}",
    )
    put(
        "kplanes_irreducible_singular",
        n >= 2 * c_km1 + max(s + 1, k),
        f"n >= 2*C(d+k-1,k)+max(s+1,k): {n} >= {2 * c_km1 + max(s + 1, k)}",
    )
    put(
        "dimension_depends_on_x_range",
        (n + 1) * (k + 1) < 2 * c_k,
        f"n < 2/(k+1)*C(d+k,k)-1: {(n + 1) * (k + 1)} < {2 * c_k}",
    )
    put(
        "plane_existence",
        (k + 1) * (n - k) >= c_k,
        f"(k+1)(n-k) >= C(k+d,d): {(k + 1) * (n - k)} >= {c_k}",
    )
    put(
        "curves_range",
        d * (e + 1) <= e + n,
        f"d <= (e+n)/(e+1): {d * (e + 1)} <= {e + n}",
    )
    put(
        "conical_stable_maps_excess",
        (d - 3) * e > n - 1,
        f"d > 3+(n-1)/e: {(d - 3) * e} > {n - 1}",
    )
    if r is not None:
        need = 1 + 2 * binom(d + r - 2, d - 2) + binom(d + r - 1, r)
        put(
            "reduction_step_hypothesis",
            k >= need,
            f"k >= 1+2*C(d+r-2,d-2)+C(d+r-1,r): {k} >= {need}",
        )
    values = {}
    notes = [
        "C(d+r-1, r) equals C(d+r-1, d-1); the symmetric form is printed once",
    ]
    if 2 <= d <= max_exact_degree:
        values["k0"] = k0(d)
        values["n0"] = n0(d)
        put("unirational_by_n0", n >= n0(d), f"n >= n0(d): {n} >= {n0(d)}")
        if d == 4:
            notes.append(
                "d=4: the n0 <= 2^(d!) growth bound is checked separately "
                "(outside the binomial lemma's hypothesis)"
            )
    elif d > max_exact_degree:
        notes.append(
            f"k0/n0 omitted for d={d} > {max_exact_degree}; pass a larger "
            "max_exact_degree to force the exact computation"
        )
    values["binom_d_plus_km1_k"] = c_km1
    values["binom_d_plus_k_k"] = c_k
    dims = expected_dims(n, d, k)
    dims["curves"] = expected_dim_curves(n, d, e)
    return BoundReport(
        {"n": n, "d": d, "k": k, "s": s, "e": e, "r": r},
        values,
        preds,
        dims,
        notes,
    )

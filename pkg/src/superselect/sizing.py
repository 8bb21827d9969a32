"""Row-count formulas: closed-form upper and lower bounds, per-level
selector sizes, and the exact union-bound threshold the constructors use.

All logarithms here are base 2. Bounds are returned as ceilings since row
counts are integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil, comb, e, exp, log1p, log2

from .core import InputError, SuperSelectorSpec

LOG2_E = log2(e)


@dataclass(frozen=True)
class SampleDistribution:
    """Entry distribution for width-p random submatrices.

    Entries are 0 with probability x (default (p-1)/p), so a designated
    unit row of I_p appears in a given row with probability
    alpha = x^(p-1) * (1-x).

    p is the width of the submatrix being modelled; x stays at the outer
    construction's value when p is an inner subset size.
    """

    p: int
    x: float = field(default=None)

    def __post_init__(self):
        if self.p < 1:
            raise InputError(f"level parameter must be >= 1, got {self.p}")
        if self.x is None:
            object.__setattr__(self, "x", (self.p - 1) / self.p)
        if not 0.0 <= self.x < 1.0:
            raise InputError(f"zero-probability x={self.x} outside [0, 1)")

    @property
    def alpha(self) -> float:
        return self.x ** (self.p - 1) * (1.0 - self.x)


@dataclass(frozen=True)
class SizeBound:
    """An evaluated bound: m rows, with the per-level coefficients that
    produced it and a tag naming the formula."""

    m: int
    per_level: tuple
    formula_id: str


def _constrained(spec: SuperSelectorSpec) -> list:
    return [(j, spec.v[j - 1]) for j in spec.levels()]


def superselector_upper_bound(spec: SuperSelectorSpec) -> SizeBound:
    """Rows sufficient for a (p, v, n)-superselector to exist:
    ceil(max over constrained j of k_j * log2(n/j)), with
    k_j = min(3*p*e*j / (j - v_j + 1), e * j^2 / log2(e)).
    """
    per_level = []
    best = 0.0
    for j, vj in _constrained(spec):
        r = j - vj + 1
        kj = min(3.0 * spec.p * e * j / r, e * j * j / LOG2_E)
        per_level.append((j, kj))
        best = max(best, kj * log2(spec.n / j))
    return SizeBound(max(1, ceil(best)), tuple(per_level), "superselector-upper")


def selector_upper_bound(p: int, k: int, n: int) -> SizeBound:
    """Rows sufficient for a (p, k, n)-selector:
    coeff * (p * log2(n/p) + A), where coeff = 1 / log2(e / (e - 1 + k/p))
    (replaced by its k = p limit e*p/log2(e) when the general form
    degenerates) and A = (2p-k+1) * log2(e) + (p-k+1) * log2(p/(p-k+1))
    is the additive threshold constant.
    """
    if not 1 <= k <= p:
        raise InputError(f"need 1 <= k <= p, got k={k}, p={p}")
    if n < p:
        raise InputError(f"need n >= p, got n={n}, p={p}")
    if k == p:
        coeff = e * p / LOG2_E
    else:
        coeff = 1.0 / log2(e / (e - 1.0 + k / p))
    a_const = (2 * p - k + 1) * LOG2_E + (p - k + 1) * log2(p / (p - k + 1))
    m = coeff * (p * log2(n / p) + a_const)
    return SizeBound(max(1, ceil(m)), ((p, coeff),), "selector-upper")


def superselector_lower_bound(spec: SuperSelectorSpec) -> SizeBound:
    """Advisory necessary size:
    max over constrained j of (j^2 / (j-v_j+1)) * log2(n/j) /
    (log2(j/(j-v_j+1)) + 1), with the additive constant fixed at 1.

    Never used for construction; may be 0 when log2(n/j) vanishes at
    every constrained level.
    """
    per_level = []
    best = 0.0
    for j, vj in _constrained(spec):
        r = j - vj + 1
        value = (j * j / r) * log2(spec.n / j) / (log2(j / r) + 1.0)
        per_level.append((j, value))
        best = max(best, value)
    return SizeBound(max(0, ceil(best)), tuple(per_level), "superselector-lower")


def _log_failure_terms(spec: SuperSelectorSpec) -> list:
    """Per constrained level j: (log of the count factor, log(1 - r*alpha_j)).

    The union-bound failure mass at m rows is
    sum_j C(n,j) * C(j, j-v_j+1) * (1 - (j-v_j+1) * alpha_j)^m
    with alpha_j = x^(j-1) * (1-x) and x = (p-1)/p fixed by the outer p.
    """
    x = (spec.p - 1) / spec.p
    terms = []
    for j, vj in _constrained(spec):
        r = j - vj + 1
        alpha = SampleDistribution(j, x).alpha
        base = 1.0 - r * alpha
        count = comb(spec.n, j) * comb(j, r)
        if base <= 0.0:
            # The per-row hit probability already covers the whole event;
            # any m >= 1 kills this term.
            terms.append((log2(count), None))
        else:
            terms.append((log2(count), log2(base)))
    return terms


def _failure_mass(terms: list, m: int) -> float:
    total = 0.0
    for log_count, log_base in terms:
        if log_base is None:
            continue
        total += exp((log_count + m * log_base) / LOG2_E)
    return total


def derand_threshold(spec: SuperSelectorSpec) -> int:
    """Smallest m for which the union-bound failure mass drops below 1.

    At this m a random matrix succeeds with positive probability, and the
    conditional-expectations construction is guaranteed to succeed.
    """
    terms = _log_failure_terms(spec)
    if not terms:
        return 1
    if _failure_mass(terms, 1) < 1.0:
        return 1
    hi = 2
    while _failure_mass(terms, hi) >= 1.0:
        hi *= 2
        if hi > 1 << 40:
            raise InputError("threshold search diverged; spec out of range")
    lo = hi // 2  # mass(lo) >= 1, mass(hi) < 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _failure_mass(terms, mid) < 1.0:
            hi = mid
        else:
            lo = mid
    return hi


def split_level(spec: SuperSelectorSpec) -> int:
    """Largest constrained j whose linear coefficient exceeds the quadratic
    one, i.e. 3*p*e*j/(j-v_j+1) > e*j^2/log2(e); 0 when there is none.

    Levels up to this point are cheaper to satisfy in full than at their
    requested strength, which is what the stacked construction exploits.
    """
    split = 0
    for j, vj in _constrained(spec):
        r = j - vj + 1
        if 3.0 * spec.p * e * j / r > e * j * j / LOG2_E:
            split = max(split, j)
    return split

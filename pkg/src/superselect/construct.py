"""Superselector constructions: random sampling with verification, the
fully deterministic conditional-expectations fill, and the two-part
stacked variant.

The deterministic fill fixes entries in row-major order. For every
tracked column subset S it maintains the exact probability that a random
completion of the matrix still realizes enough distinct unit rows inside
M(S), and it picks each bit to maximize the sum of those probabilities.
The sum never decreases, and at the threshold row count it starts above
(number of subsets) - 1, so it ends with every subset satisfied.
"""

from __future__ import annotations

import itertools
import random

from .core import (
    DEFAULT_SUBSET_BUDGET,
    BitMatrix,
    InputError,
    SuperSelectorSpec,
    _budget_guard,
    is_superselector,
)
from .sizing import SampleDistribution, derand_threshold, split_level


class ConstructionFailure(RuntimeError):
    """Randomized construction exhausted its attempts."""

    def __init__(self, attempts: int):
        super().__init__(f"no valid matrix after {attempts} attempts")
        self.attempts = attempts


class PrecisionFault(RuntimeError):
    """Float rounding overturned a conditional-expectation comparison;
    the caller may retry with extended precision."""


class FTable:
    """Tabulated f(a, b, c): the probability that a rows drawn from
    `distribution` realize at least b of c designated unit patterns.

    Boundary values: f(a, 0, c) = 1; f(a, b, c) = 0 when b > a or b > c.
    Interior: f(a, b, c) = (1 - alpha*c) f(a-1, b, c)
                           + alpha*c f(a-1, b-1, c-1).
    """

    __slots__ = ("m", "width", "k_max", "distribution", "_tab")

    def __init__(self, m: int, width: int, k_max: int, distribution: SampleDistribution):
        if m < 0 or width < 1 or not 0 <= k_max <= width:
            raise InputError(
                f"bad f-table shape m={m}, width={width}, k_max={k_max}"
            )
        self.m = m
        self.width = width
        self.k_max = k_max
        self.distribution = distribution
        alpha = distribution.alpha
        tab = [
            [[0.0] * (width + 1) for _ in range(k_max + 1)] for _ in range(m + 1)
        ]
        for a in range(m + 1):
            row0 = tab[a][0]
            for c in range(width + 1):
                row0[c] = 1.0
        for a in range(1, m + 1):
            prev = tab[a - 1]
            cur = tab[a]
            for b in range(1, k_max + 1):
                prev_b = prev[b]
                prev_b1 = prev[b - 1]
                cur_b = cur[b]
                for c in range(b, width + 1):
                    ac = alpha * c
                    cur_b[c] = (1.0 - ac) * prev_b[c] + ac * prev_b1[c - 1]
        self._tab = tab

    def f(self, a: int, b: int, c: int) -> float:
        if b <= 0:
            return 1.0
        if not 0 <= a <= self.m:
            raise InputError(f"a={a} outside [0, {self.m}]")
        if not 0 <= c <= self.width:
            raise InputError(f"c={c} outside [0, {self.width}]")
        if b > self.k_max:
            raise InputError(f"b={b} exceeds tabulated k_max={self.k_max}")
        if b > c or b > a:
            return 0.0
        return self._tab[a][b][c]


def build_f_table(m: int, p: int, k_max: int, x: float = None) -> FTable:
    """Fill the f-table for width-p submatrices by dynamic programming.

    x defaults to (p-1)/p; pass the outer construction's x explicitly when
    p is an inner subset size.
    """
    return FTable(m, p, k_max, SampleDistribution(p, x))


def _colex_combinations(n: int, j: int) -> list:
    return sorted(itertools.combinations(range(n), j), key=lambda s: s[::-1])


class DerandState:
    """Fill state of the deterministic construction.

    Entries are fixed row-major. Per tracked subset S it keeps: the set of
    unit patterns already realized in completed rows, and the current
    row's prefix shape over S (no ones yet, a lone one at some column, or
    dead with two or more ones). `expectation` is the running sum of
    per-subset success probabilities under the bits fixed so far.
    """

    def __init__(self, spec: SuperSelectorSpec, m: int = None,
                 budget: int = DEFAULT_SUBSET_BUDGET, keep_trace: bool = False):
        self.spec = spec
        self.m = derand_threshold(spec) if m is None else m
        if self.m < 1:
            raise InputError("row count must be positive")
        n, p = spec.n, spec.p
        self.n = n
        self.x = (p - 1) / p
        self.cols = []
        self.vj = []
        for j in spec.levels():
            for cols in _colex_combinations(n, j):
                self.cols.append(cols)
                self.vj.append(spec.v[j - 1])
        self.ns = len(self.cols)
        _budget_guard(self.m * n * max(1, self.ns), budget)
        self._index = {cols: i for i, cols in enumerate(self.cols)}
        self._tables = {
            j: build_f_table(self.m, j, spec.v[j - 1], self.x)
            for j in spec.levels()
        }
        self._tab = [self._tables[len(cols)]._tab for cols in self.cols]
        self._xpow = [self.x ** q for q in range(p + 1)]
        # Pattern bookkeeping across rows.
        self.realized = [0] * self.ns
        self.acount = [0] * self.ns
        # Row-scoped prefix state.
        self.ptr = [0] * self.ns
        self.nextcol = [cols[0] if cols else n for cols in self.cols]
        self.cnt1 = [0] * self.ns
        self.onecol = [-1] * self.ns
        self.onealive = [False] * self.ns
        self.ua = [len(cols) for cols in self.cols]
        self.xcur = [
            self._tables[len(cols)].f(self.m, self.vj[i], len(cols))
            for i, cols in enumerate(self.cols)
        ]
        self.expectation = sum(self.xcur)
        # Ties between the two hypotheses resolve to 0; the slack absorbs
        # summation-order noise so exact ties do so reproducibly.
        self._tie_tol = 1e-12 * max(1, self.ns)
        self.trace = [self.expectation] if keep_trace else None
        self.r = 0
        self.c = 0
        self.row_bits = 0
        self.rows = []
        self._start_row()

    @property
    def position(self) -> tuple:
        return (self.r, self.c)

    def _hypotheses(self, i: int, c: int) -> tuple:
        """Success probabilities for subset i if entry (r, c) is set to 0
        or to 1. Requires nextcol[i] == c."""
        cols = self.cols[i]
        j = len(cols)
        a = self.acount[i]
        need = self.vj[i] - a
        pool = j - a
        rem = self.m - self.r - 1
        tab = self._tab[i]
        # f(rem, need, pool) and f(rem, need-1, pool-1) with boundary rules.
        if need <= 0:
            return (1.0, 1.0)
        f0 = 0.0 if (need > pool or need > rem) else tab[rem][need][pool]
        if need - 1 <= 0:
            f1 = 1.0
        elif need - 1 > pool - 1 or need - 1 > rem:
            f1 = 0.0
        else:
            f1 = tab[rem][need - 1][pool - 1]
        cnt1 = self.cnt1[i]
        if cnt1 >= 2:
            return (f0, f0)
        q_after = j - self.ptr[i] - 1
        xq = self._xpow[q_after]
        c_alive = not (self.realized[i] >> c) & 1
        if cnt1 == 1:
            if self.onealive[i]:
                x0 = xq * f1 + (1.0 - xq) * f0
            else:
                x0 = f0
            return (x0, f0)
        # cnt1 == 0: the prefix over S is all zeros.
        x1 = xq * f1 + (1.0 - xq) * f0 if c_alive else f0
        if q_after == 0:
            x0 = f0
        else:
            b_cand = self.ua[i] - (1 if c_alive else 0)
            pr_new = b_cand * self._xpow[q_after - 1] * (1.0 - self.x)
            x0 = pr_new * f1 + (1.0 - pr_new) * f0
        return (x0, x1)

    def _apply(self, i: int, c: int, bit: int, value: float):
        """Advance subset i past entry (r, c) fixed to bit."""
        c_alive = not (self.realized[i] >> c) & 1
        if bit:
            cnt1 = self.cnt1[i]
            if cnt1 == 0:
                self.cnt1[i] = 1
                self.onecol[i] = c
                self.onealive[i] = c_alive
            elif cnt1 == 1:
                self.cnt1[i] = 2
        if c_alive:
            self.ua[i] -= 1
        self.ptr[i] += 1
        cols = self.cols[i]
        if self.ptr[i] < len(cols):
            self.nextcol[i] = cols[self.ptr[i]]
        else:
            self.nextcol[i] = self.n
            if self.cnt1[i] == 1 and self.onealive[i]:
                self.realized[i] |= 1 << self.onecol[i]
                self.acount[i] += 1
        self.xcur[i] = value

    def _start_row(self):
        for i, cols in enumerate(self.cols):
            self.ptr[i] = 0
            self.nextcol[i] = cols[0]
            self.cnt1[i] = 0
            self.onecol[i] = -1
            self.onealive[i] = False
            self.ua[i] = len(cols) - self.acount[i]
        self.row_bits = 0

    def counters(self, S: tuple) -> dict:
        """Bookkeeping snapshot for one tracked subset (testing hook)."""
        i = self._index[tuple(S)]
        return {
            "a": self.acount[i],
            "realized": self.realized[i],
            "cnt1": self.cnt1[i],
            "one_col": self.onecol[i],
            "one_alive": self.onealive[i],
            "unfixed_alive": self.ua[i],
            "ptr": self.ptr[i],
            "expectation": self.xcur[i],
        }

    def conditional(self, S: tuple, bit: int) -> float:
        """Probability that subset S still succeeds if the entry at the
        current position is fixed to `bit`."""
        i = self._index[tuple(S)]
        if self.nextcol[i] != self.c:
            return self.xcur[i]
        pair = self._hypotheses(i, self.c)
        return pair[1] if bit else pair[0]

    def step(self, bit: int = None) -> int:
        """Fix the next entry and return the bit used. With bit=None the
        choice is greedy (expectation must not drop); a forced bit is a
        replay/testing hook exempt from the monotonicity check."""
        if self.r >= self.m:
            raise InputError("matrix already complete")
        c = self.c
        nextcol = self.nextcol
        xcur = self.xcur
        base = 0.0
        touched = []
        t0 = 0.0
        t1 = 0.0
        for i in range(self.ns):
            if nextcol[i] != c:
                base += xcur[i]
            else:
                h0, h1 = self._hypotheses(i, c)
                t0 += h0
                t1 += h1
                touched.append((i, h0, h1))
        t0 += base
        t1 += base
        forced = bit is not None
        if not forced:
            bit = 0 if t0 >= t1 - self._tie_tol else 1
        chosen = t0 if bit == 0 else t1
        if not forced and chosen < self.expectation - 1e-9 * max(1, self.ns):
            raise PrecisionFault(
                f"expectation dropped at entry ({self.r},{c}): "
                f"{self.expectation} -> {chosen}"
            )
        self.expectation = chosen
        if self.trace is not None:
            self.trace.append(chosen)
        if bit:
            self.row_bits |= 1 << c
        for i, h0, h1 in touched:
            self._apply(i, c, bit, h1 if bit else h0)
        self.c += 1
        if self.c == self.n:
            self.rows.append(self.row_bits)
            self.c = 0
            self.r += 1
            # Reset row-scoped counters now so conditional() stays honest
            # at row boundaries.
            self._start_row()
        return bit

    def run(self) -> BitMatrix:
        while self.r < self.m:
            self.step()
        return BitMatrix(self.n, self.rows)


def conditional_probability(state: DerandState, S: tuple, ftable: FTable,
                            position: tuple, bit: int) -> float:
    """Success probability for subset S with the entry at `position`
    hypothetically fixed to `bit`, per the running state's counters."""
    S = tuple(S)
    if tuple(position) != state.position:
        raise InputError(
            f"state is at {state.position}, cannot evaluate {tuple(position)}"
        )
    expected = state._tables.get(len(S))
    if expected is None or ftable.distribution != expected.distribution \
            or ftable.m != expected.m:
        raise InputError("f-table does not match the state's level table")
    return state.conditional(S, bit)


def sample_random_matrix(m: int, n: int, p: int, seed: int) -> BitMatrix:
    """m x n matrix with i.i.d. entries, zero with probability (p-1)/p.

    Entries are drawn row-major (column-ascending), so a seed pins the
    whole matrix.
    """
    if m < 1 or n < 1 or p < 1:
        raise InputError("m, n, p must be positive")
    x = (p - 1) / p
    rng = random.Random(seed)
    rows = []
    for _ in range(m):
        bits = 0
        for c in range(n):
            if rng.random() >= x:
                bits |= 1 << c
        rows.append(bits)
    return BitMatrix(n, rows)


def construct_randomized(spec: SuperSelectorSpec, seed: int,
                         max_attempts: int = 100,
                         budget: int = DEFAULT_SUBSET_BUDGET) -> tuple:
    """Sample threshold-size matrices (attempt i uses seed + i) until one
    passes the exhaustive check; returns (matrix, attempts used)."""
    if max_attempts < 1:
        raise InputError("max_attempts must be >= 1")
    m = derand_threshold(spec)
    for attempt in range(max_attempts):
        M = sample_random_matrix(m, spec.n, spec.p, seed + attempt)
        if is_superselector(M, spec, budget):
            return M, attempt + 1
    raise ConstructionFailure(max_attempts)


def construct_derandomized(spec: SuperSelectorSpec,
                           budget: int = DEFAULT_SUBSET_BUDGET) -> BitMatrix:
    """Deterministic threshold-size construction by conditional
    expectations; verifies its own output by brute force."""
    state = DerandState(spec, budget=budget)
    # At the threshold the expected failure mass is below one, so the
    # greedy fill cannot strand any subset.
    if not state.expectation > state.ns - 1:
        raise PrecisionFault(
            f"initial expectation {state.expectation} does not clear "
            f"{state.ns - 1}"
        )
    M = state.run()
    if not is_superselector(M, spec, budget):
        raise PrecisionFault("verification failed on the finished matrix")
    return M


def construct_stacked(spec: SuperSelectorSpec,
                      budget: int = DEFAULT_SUBSET_BUDGET) -> BitMatrix:
    """Split at the level where the linear coefficient overtakes the
    quadratic one; build that prefix at full strength and the remainder
    separately, then stack."""
    split = split_level(spec)
    tail = (0,) * split + spec.v[split:]
    if split == 0:
        return construct_derandomized(spec, budget)
    m1 = construct_derandomized(
        SuperSelectorSpec(spec.n, split, tuple(range(1, split + 1))), budget
    )
    if all(t == 0 for t in tail):
        M = m1
    else:
        m2 = construct_derandomized(
            SuperSelectorSpec(spec.n, spec.p, tail), budget
        )
        M = m1.stack(m2)
    if not is_superselector(M, spec, budget):
        raise PrecisionFault("stacked matrix failed verification")
    return M

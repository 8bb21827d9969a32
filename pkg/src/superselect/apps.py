"""Application-level builders and codecs on top of superselectors:
group testing with bounded error, exact additive group testing, monotone
set encodings, sparse-vector compression, multi-user tracing, and
list-disjunct matrix parameters.

Each application reduces to choosing the right constraint vector; the
decoding side is always the private-1 identification from decode.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import floor, isqrt
from typing import Sequence

from .core import (
    BitMatrix,
    InputError,
    SuperSelectorSpec,
    boolean_sum,
    covered_columns,
)
from .construct import construct_derandomized
from .decode import DecodeResult, identify_from_union


def approx_gt_spec(p: int, e0: int, e1: int, n: int) -> SuperSelectorSpec:
    """Spec for recovering P up to e0 false positives and e1 false
    negatives: outer level p + e0 with v_i = i - min(e0, e1) + 1,
    clamped into [0, i]."""
    if p < 1 or e0 < 0 or e1 < 0:
        raise InputError("need p >= 1 and nonnegative error budgets")
    if p + e0 > n:
        raise InputError(f"outer level {p + e0} exceeds n={n}")
    shift = min(e0, e1) - 1
    v = tuple(min(i, max(0, i - shift)) for i in range(1, p + e0 + 1))
    return SuperSelectorSpec(n, p + e0, v)


def additive_gt_spec(p: int, n: int) -> SuperSelectorSpec:
    """Spec whose matrices recover any P with |P| <= p from the
    arithmetic sum of its columns: outer level 2p, v_i = i up to
    floor(sqrt(p)), then ceil(i/2) + 1."""
    if p < 1:
        raise InputError("need p >= 1")
    if 2 * p > n:
        raise InputError(f"outer level {2 * p} exceeds n={n}")
    root = isqrt(p)
    v = tuple(i if i <= root else (i + 1) // 2 + 1 for i in range(1, 2 * p + 1))
    return SuperSelectorSpec(n, 2 * p, v)


def mut_spec(r: int, k: int, n: int) -> SuperSelectorSpec:
    """Spec for multi-user tracing: from a union of l <= r member sets,
    identify at least k (all of them when l < k)."""
    if not 1 <= k <= r:
        raise InputError(f"need 1 <= k <= r, got k={k}, r={r}")
    if 2 * r > n:
        raise InputError(f"outer level {2 * r} exceeds n={n}")
    v = tuple(range(1, k + 1)) + (k,) * (2 * r - 1 - k) + (r + 1,)
    return SuperSelectorSpec(n, 2 * r, v)


def fut_spec(p: int, alpha: float, n: int) -> SuperSelectorSpec:
    """Spec for alpha-fraction user tracing: outer level 2p with
    v_i = floor(alpha * i) + 1, so any union of at most p sets exposes
    more than an alpha fraction of its members.

    The constraint shape extrapolates the tracing regime to general
    alpha within [1/2, 1 - 1/p].
    """
    if p < 2:
        raise InputError("need p >= 2")
    if not 0.5 <= alpha <= 1.0 - 1.0 / p:
        raise InputError(f"alpha={alpha} outside [1/2, 1 - 1/p]")
    if 2 * p > n:
        raise InputError(f"outer level {2 * p} exceeds n={n}")
    v = tuple(floor(alpha * i) + 1 for i in range(1, 2 * p + 1))
    return SuperSelectorSpec(n, 2 * p, v)


def list_disjunct_params(d: int, l: int, n: int) -> tuple:
    """Selector parameters (p, k, n) whose matrices are (d, l)-list
    disjunct: (d+l, d+1, n) when d >= l, else (2d, d+1, n)."""
    if d < 1 or l < 1:
        raise InputError("need d >= 1 and l >= 1")
    p = d + l if d >= l else 2 * d
    return (p, d + 1, n)


def mut_decode(M: BitMatrix, spec: SuperSelectorSpec,
               a: Sequence[int]) -> DecodeResult:
    """Identify traceable members from a union of user sets; at least k
    members on a mut_spec(r, k, n) matrix, everything when fewer than k
    sets are active."""
    return identify_from_union(M, spec, a)


def _me_level_sizes(k: int) -> tuple:
    """Outer levels of the encoding chain: 2k halving (rounded up) to 2."""
    sizes = [2 * k]
    while sizes[-1] > 2:
        sizes.append((sizes[-1] + 1) // 2)
    return tuple(sizes)


class MonotoneEncoding:
    """Monotone injective encoding of <= k-subsets of [n].

    The chain holds one matrix per level t = 2k, ceil(2k/2), ..., 2 with
    constraints v_i = floor(i/2) + 1. Encoding takes the Boolean sum of
    the still-unidentified members at each level; every level pins more
    than half of what remains, so the residual empties by the last one.
    The concatenated sums are componentwise monotone in S and invertible.
    """

    def __init__(self, n: int, k: int):
        if k < 1:
            raise InputError("need k >= 1")
        if 2 * k > n:
            raise InputError(f"chain level {2 * k} exceeds n={n}")
        self.n = n
        self.k = k
        levels = []
        for t in _me_level_sizes(k):
            spec = SuperSelectorSpec(
                n, t, tuple(i // 2 + 1 for i in range(1, t + 1))
            )
            levels.append((construct_derandomized(spec), spec))
        self.levels = tuple(levels)

    @property
    def total_length(self) -> int:
        return sum(M.m for M, _ in self.levels)

    def encode(self, S: Sequence[int]) -> tuple:
        residual = set(S)
        if len(residual) > self.k:
            raise InputError(f"|S| = {len(residual)} exceeds k = {self.k}")
        word = []
        for M, spec in self.levels:
            a = boolean_sum(M, sorted(residual))
            word.extend(a)
            residual -= set(identify_from_union(M, spec, a).identified)
        if residual:
            raise RuntimeError(f"chain failed to drain {sorted(residual)}")
        return tuple(word)

    def decode(self, word: Sequence[int]) -> tuple:
        if len(word) != self.total_length:
            raise InputError(
                f"codeword length {len(word)} != {self.total_length}"
            )
        members = set()
        offset = 0
        for M, spec in self.levels:
            block = tuple(word[offset:offset + M.m])
            offset += M.m
            members |= set(identify_from_union(M, spec, block).identified)
        return tuple(sorted(members))


@lru_cache(maxsize=None)
def monotone_chain(n: int, k: int) -> MonotoneEncoding:
    """Build (once) and cache the encoding chain for (n, k)."""
    return MonotoneEncoding(n, k)


def monotone_encode(n: int, k: int, S: Sequence[int]) -> tuple:
    return monotone_chain(n, k).encode(S)


def monotone_decode(n: int, k: int, word: Sequence[int]) -> tuple:
    return monotone_chain(n, k).decode(word)


@dataclass(frozen=True)
class CompressedWord:
    """Compressed form of a sparse binary vector: the Boolean sum y of
    the support columns, plus a 2p-bit mask z selecting the true support
    inside the sorted candidate list that y determines."""

    y: tuple
    z: tuple

    @property
    def bits(self) -> tuple:
        return self.y + self.z


def compress(M: BitMatrix, p: int, x: Sequence[int]) -> CompressedWord:
    """Compress an n-bit vector with at most p ones to m + 2p bits.

    M must be a certified (2p, p+1, n)-selector; that caps the candidate
    list at 2p - 1 entries, so the fixed-size mask always fits.
    """
    if len(x) != M.n:
        raise InputError(f"vector length {len(x)} != n={M.n}")
    support = [c for c, bit in enumerate(x) if bit]
    if len(support) > p:
        raise InputError(f"support size {len(support)} exceeds p={p}")
    y = boolean_sum(M, support)
    L = covered_columns(M, y)
    if len(L) > 2 * p:
        raise RuntimeError(
            f"candidate list has {len(L)} entries; matrix is not a "
            f"(2p, p+1) selector for p={p}"
        )
    in_support = set(support)
    z = tuple(
        1 if k < len(L) and L[k] in in_support else 0 for k in range(2 * p)
    )
    return CompressedWord(tuple(y), z)


def decompress(M: BitMatrix, p: int, w: CompressedWord) -> tuple:
    """Invert compress: recompute the candidate list from y and read the
    support off the mask."""
    if len(w.y) != M.m:
        raise InputError(f"union part has length {len(w.y)}, matrix m={M.m}")
    if len(w.z) != 2 * p:
        raise InputError(f"mask length {len(w.z)} != 2p = {2 * p}")
    L = covered_columns(M, w.y)
    support = set()
    for k, bit in enumerate(w.z):
        if not bit:
            continue
        if k >= len(L):
            raise InputError(
                f"mask bit {k} selects beyond the {len(L)} candidates"
            )
        support.add(L[k])
    return tuple(1 if c in support else 0 for c in range(M.n))

"""Decoders for superselector observations.

From a Boolean sum of an unknown column set S, the covered columns form
a superset of S, and any row with a 1 whose only covered support is a
single column pins that column inside S. Arithmetic sums allow more: the
pinned columns can be subtracted from the observation and the residual
decoded again, which recovers S exactly on matrices built for it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import (
    BitMatrix,
    InputError,
    SuperSelectorSpec,
    covered_columns,
)


class InconsistentObservationError(InputError):
    """The observation cannot be a valid sum under the stated promise."""


@dataclass(frozen=True)
class DecodeResult:
    """Outcome of one identification pass.

    identified: columns provably in S (each owns a private 1).
    candidates: all covered columns, a superset of S.
    spurious_bound: candidates not pinned down, |candidates| - |identified|.
    """

    identified: tuple
    candidates: tuple
    spurious_bound: int


def _check_observation(M: BitMatrix, spec: SuperSelectorSpec, a: Sequence[int]):
    if spec.n != M.n:
        raise InputError(f"spec is for n={spec.n}, matrix has n={M.n}")
    if len(a) != M.m:
        raise InputError(f"observation length {len(a)} != m={M.m}")


def identify_from_union(M: BitMatrix, spec: SuperSelectorSpec,
                        a: Sequence[int]) -> DecodeResult:
    """Identify members of S from its Boolean sum.

    Total on arbitrary observations. When a really is a Boolean sum of
    some S with |S| < v_p and M passes the spec, at least v_{|S|+y}
    members are identified, where y counts the spurious candidates.
    """
    _check_observation(M, spec, a)
    candidates = covered_columns(M, a)
    cand_mask = 0
    for c in candidates:
        cand_mask |= 1 << c
    ident_mask = 0
    for r, row in enumerate(M.rows):
        if not a[r]:
            continue
        z = row & cand_mask
        # A single surviving 1 in a hit row belongs to a member of S.
        if z and not z & (z - 1):
            ident_mask |= z
    identified = tuple(c for c in candidates if (ident_mask >> c) & 1)
    return DecodeResult(identified, candidates,
                        len(candidates) - len(identified))


def approx_decode(M: BitMatrix, spec: SuperSelectorSpec, a: Sequence[int],
                  e0: int, e1: int) -> tuple:
    """Two-sided approximation of P from its Boolean sum.

    Returns (P_low, P_high) with P_low subset of P subset of P_high. The
    budgets e0, e1 certify the matrix family (|P_high \\ P| <= e0,
    |P \\ P_low| <= e1); they do not enter the computation.
    """
    if e0 < 0 or e1 < 0:
        raise InputError("error budgets must be nonnegative")
    result = identify_from_union(M, spec, a)
    return result.identified, result.candidates


def additive_decode(M: BitMatrix, spec: SuperSelectorSpec,
                    s: Sequence[int]) -> tuple:
    """Recover P exactly from its arithmetic sum.

    Each round restricts to columns componentwise below the residual,
    pins the private-1 columns, and subtracts them. On a matrix built
    for additive group testing every round clears at least half of the
    remaining members, so the loop drains the residual.
    """
    _check_observation(M, spec, s)
    if any(e < 0 for e in s):
        raise InconsistentObservationError("negative count in observation")
    residual = list(s)
    found = set()
    # Consistent inputs identify >= 1 column per round, so n rounds
    # suffice even when the |P| <= p promise is broken.
    for _ in range(M.n + 1):
        if not any(residual):
            return tuple(sorted(found))
        shadow = tuple(1 if e else 0 for e in residual)
        newly = identify_from_union(M, spec, shadow).identified
        if not newly:
            raise InconsistentObservationError(
                "residual nonzero but no column identifiable"
            )
        for c in newly:
            if c in found:
                raise InconsistentObservationError(
                    f"column {c} identified twice"
                )
            found.add(c)
            for r, row in enumerate(M.rows):
                if (row >> c) & 1:
                    residual[r] -= 1
                    if residual[r] < 0:
                        raise InconsistentObservationError(
                            f"residual went negative at row {r}"
                        )
    raise InconsistentObservationError("decode did not converge")

"""Totalizer encoding of at-most-k cardinality constraints."""

from __future__ import annotations

from typing import Callable


def totalizer_at_most_k(inputs, k: int, new_var: Callable[[], int], *,
                        enforce: bool = True) -> tuple[list[list[int]], list[int]]:
    """Unary-count tree over ``inputs`` truncated at k+1.

    Returns ``(clauses, outputs)``: ``outputs[j]`` is forced true whenever at
    least j+1 inputs are true (only the upward direction is encoded, which is
    all an upper bound needs). With ``enforce`` the unit clause asserting
    ``not outputs[k]`` is included; otherwise the caller may assume it, e.g.
    to change k between incremental calls.
    """
    inputs = list(inputs)
    if not 0 <= k <= len(inputs):
        raise ValueError(f"k={k} outside 0..{len(inputs)}")
    clauses: list[list[int]] = []
    if not inputs:
        return clauses, []
    cap = min(k + 1, len(inputs))

    def build(lo: int, hi: int) -> list[int]:
        if hi - lo == 1:
            return [inputs[lo]]
        mid = (lo + hi) // 2
        left = build(lo, mid)
        right = build(mid, hi)
        size = min(len(left) + len(right), cap)
        out = [new_var() for _ in range(size)]
        for i in range(len(left) + 1):
            for j in range(len(right) + 1):
                total = i + j
                if total == 0:
                    continue
                clause = []
                if i:
                    clause.append(-left[i - 1])
                if j:
                    clause.append(-right[j - 1])
                clause.append(out[min(total, size) - 1])
                clauses.append(clause)
        return out

    outputs = build(0, len(inputs))
    if enforce and k < len(outputs):
        clauses.append([-outputs[k]])
    return clauses, outputs

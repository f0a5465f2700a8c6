"""Bit-parallel truth tables: bit j of a column is the value under assignment j."""

from __future__ import annotations


def columns(nvars: int) -> list[int]:
    size = 1 << nvars
    full = (1 << size) - 1
    cols = [0]
    for i in range(nvars):
        half = 1 << i
        pattern = ((1 << half) - 1) << half  # one period: half zeros, half ones
        period = half << 1
        while period < size:
            pattern |= pattern << period
            period <<= 1
        cols.append(pattern & full)
    return cols


def satisfying(clauses, nvars: int) -> int:
    """Bitmask of satisfying assignments over variables 1..nvars."""
    size = 1 << nvars
    full = (1 << size) - 1
    cols = columns(nvars)
    sat = full
    for c in clauses:
        cv = 0
        for lit in c:
            cv |= cols[lit] if lit > 0 else full ^ cols[-lit]
        sat &= cv
        if not sat:
            break
    return sat


def is_satisfiable(clauses, nvars: int) -> bool:
    return satisfying(clauses, nvars) != 0

"""Per-prime quadratic residue structure.

Residue tables, least non-residues, gaps between non-residues, first
non-residues past a shifted origin, longest residue runs, and a CRT
construction that glues prescribed windows across several primes.

Two conventions for multiples of p coexist in the literature and both
are supported here.  With zero_as_residue=True (the default everywhere)
a multiple of p counts as a residue, which makes the classification
periodic and run statistics cyclic.  With False only 1..p-1 are
classified and runs cannot wrap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .arith import jacobi
from .errors import ParameterError, ResourceError, ScanError

RESIDUE_TABLE_BUDGET = 2**31

_SQUARE_CHUNK = 1 << 22


@dataclass(frozen=True, eq=False)
class ResidueMap:
    """Bit-packed residue classification for one period 0..p-1.

    Bit n is set when n is classified a quadratic residue mod p under the
    stored convention.  Bits are packed most significant first within
    each byte, matching numpy's packbits layout.
    """

    p: int
    packed: np.ndarray
    zero_as_residue: bool

    def bools(self) -> np.ndarray:
        """The classification unpacked to one bool per class."""
        return np.unpackbits(self.packed, count=self.p).view(np.bool_)

    def is_residue(self, n: int) -> bool:
        n %= self.p
        return bool(self.packed[n >> 3] >> (7 - (n & 7)) & 1)

    def popcount(self) -> int:
        """Set bits over 1..p-1, excluding the class of 0."""
        total = int(np.unpackbits(self.packed, count=self.p).sum())
        return total - (1 if self.zero_as_residue else 0)


def residue_map(p: int, zero_as_residue: bool = True) -> ResidueMap:
    """Tabulate the residues mod p by squaring 1..(p-1)/2.

    p must be an odd prime (primality is the caller's responsibility;
    oddness is checked).  Squares are generated in chunks so the peak
    intermediate allocation stays bounded for p near the table budget.
    """
    if p < 3 or p % 2 == 0:
        raise ParameterError(f"need an odd p >= 3, got {p}")
    if p > RESIDUE_TABLE_BUDGET:
        raise ResourceError(f"residue table for p={p} exceeds the budget of {RESIDUE_TABLE_BUDGET}")
    bits = np.zeros(p, dtype=bool)
    half = (p - 1) // 2
    for start in range(1, half + 1, _SQUARE_CHUNK):
        k = np.arange(start, min(start + _SQUARE_CHUNK, half + 1), dtype=np.int64)
        bits[k * k % p] = True
    if zero_as_residue:
        bits[0] = True
    return ResidueMap(p, np.packbits(bits), zero_as_residue)


def least_nonresidue(p: int) -> int:
    """The smallest n >= 2 with (n|p) = -1, by direct symbol evaluation.

    No residue table is built; the scan is a handful of Jacobi symbols
    for almost every prime.
    """
    if p < 3 or p % 2 == 0:
        raise ParameterError(f"need an odd p >= 3, got {p}")
    for n in range(2, p + 1):
        if jacobi(n, p) == -1:
            return n
    raise ScanError(f"no non-residue found below {p}; is p={p} prime?")


@dataclass(frozen=True, eq=False)
class GapStats:
    """All non-residues of p in [1, p-1] and their consecutive gaps.

    n_seq has length (p-1)/2 for prime p; deltas[k] = n_seq[k+1] - n_seq[k].
    """

    p: int
    n_seq: np.ndarray
    deltas: np.ndarray


def gap_stats(p: int) -> GapStats:
    """Enumerate the non-residues of p and difference them."""
    bits = residue_map(p, zero_as_residue=False).bools()
    n_seq = np.flatnonzero(~bits[1:]).astype(np.int64) + 1
    return GapStats(p, n_seq, np.diff(n_seq))


def gap_tail(stats: GapStats, h: int) -> tuple[int, int]:
    """(N, S) for the gap sequence: N counts the gaps >= h and S sums
    them.  Both are exact integers."""
    if h < 1:
        raise ParameterError(f"need h >= 1, got {h}")
    sel = stats.deltas >= h
    return int(np.count_nonzero(sel)), int(stats.deltas[sel].sum())


def first_nonresidue_after(p: int, u: int) -> int:
    """The least h >= 1 such that u + h is a non-residue mod p.

    Works from u mod p, so u far beyond p costs nothing extra.  For an
    odd prime the scan is bounded by p; running past that bound means the
    modulus was not prime and is reported as a scan error.
    """
    if p < 3 or p % 2 == 0:
        raise ParameterError(f"need an odd p >= 3, got {p}")
    if u < 0:
        raise ParameterError(f"need u >= 0, got {u}")
    base = u % p
    for h in range(1, p + 1):
        if jacobi((base + h) % p, p) == -1:
            return h
    raise ScanError(f"no non-residue within {p} steps after u={u}; is p={p} prime?")


def _longest_true_run(b: np.ndarray) -> int:
    """Length of the longest run of True in a 1-d bool array."""
    if b.size == 0 or not b.any():
        return 0
    padded = np.concatenate((np.zeros(1, dtype=np.int8), b.astype(np.int8), np.zeros(1, dtype=np.int8)))
    edges = np.flatnonzero(np.diff(padded))
    return int((edges[1::2] - edges[0::2]).max())


def longest_qr_run(p: int, zero_as_residue: bool = True) -> int:
    """Longest run of consecutive integers all classified residues mod p.

    Under the default convention the classification has period p and the
    run is measured cyclically, so a run may straddle a multiple of p.
    Under zero_as_residue=False runs live strictly inside 1..p-1.
    """
    bits = residue_map(p, zero_as_residue).bools()
    if not zero_as_residue:
        return _longest_true_run(bits[1:])
    if bits.all():
        raise ScanError(f"every class mod {p} marked residue; is p={p} prime?")
    first_false = int(np.argmin(bits))
    return _longest_true_run(np.roll(bits, -first_false))


def crt_adversarial_u(pairs: Sequence[tuple[int, int]]) -> int:
    """The least u >= 0 with u = u_i mod l_i for each (l_i, u_i).

    The moduli must be pairwise distinct odd primes and their product
    must stay below 2**127.  Because u matches u_i mod l_i, the first
    non-residue past u agrees with the first non-residue past u_i for
    every modulus; that postcondition is re-checked on each return.
    """
    if not pairs:
        raise ParameterError("at least one congruence is required")
    moduli = [l for l, _ in pairs]
    if len(set(moduli)) != len(moduli):
        raise ParameterError(f"moduli must be pairwise distinct, got {moduli}")
    product = 1
    for l in moduli:
        if l < 3 or l % 2 == 0:
            raise ParameterError(f"modulus {l} is not an odd prime")
        product *= l
        if product >= 1 << 127:
            raise ResourceError("modulus product exceeds the 128-bit budget")
    u = 0
    for l, r in pairs:
        rest = product // l
        u = (u + (r % l) * rest * pow(rest, -1, l)) % product
    for l, r in pairs:
        if first_nonresidue_after(l, u) != first_nonresidue_after(l, r % l):
            raise ScanError(f"CRT postcondition failed at modulus {l}")
    return u

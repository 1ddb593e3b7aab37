"""Batch experiments over prime ranges.

Running means of the least non-residue, exceptional-set densities for
windowed first non-residues, gap-tail scaling, square-free pair density,
and a full numeric trace of the bound chain that controls the
exceptional count.

Concurrency model: a prime range is cut into fixed contiguous blocks of
2**16 integers.  The block partition depends only on the range, never on
the worker count; workers compute per-block partials and the parent
merges them in block order.  Output is therefore bit-identical for one
worker and for fifty.  All scalar merges are plain integer sums, and
witness lists concatenate in block order, so nothing here depends on
scheduling.

This module performs no file or network I/O; the cli module owns
serialization and checkpoint files.
"""

from __future__ import annotations

import math
import multiprocessing
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .arith import is_perfect_square, jacobi
from .errors import DegenerateSetError, ParameterError, ResourceError
from .residue_scan import gap_stats, gap_tail, least_nonresidue
from .sieve import (
    feller_tornier_A,
    primes_in,
    rough_set,
    rough_threshold,
    squarefree_in_interval,
)

BLOCK_SPAN = 1 << 16
WITNESS_CAP = 1000
ERDOS_X_BUDGET = 10**8

_GAP_CHUNK = 64


def _blocks(lo: int, hi: int, edges: Sequence[int] = ()) -> list[tuple[int, int]]:
    """Contiguous blocks covering [lo, hi]: spans of BLOCK_SPAN, with
    extra boundaries at the given edges so no block straddles one."""
    cuts = sorted({e for e in edges if lo <= e < hi})
    out = []
    start = lo
    for stop in cuts + [hi]:
        while start <= stop:
            end = min(start + BLOCK_SPAN - 1, stop)
            out.append((start, end))
            start = end + 1
    return out


def _map_blocks(fn, argss: list, workers: int, merge: Callable | None = None) -> list:
    """Apply fn to every args tuple, in order.

    With workers > 1 a fork pool evaluates blocks concurrently, but
    results are consumed in submission order (imap), so the merge
    callback sees exactly the sequence a serial run would produce.
    """
    if workers < 1:
        raise ParameterError(f"need workers >= 1, got {workers}")
    results = []
    if workers > 1 and len(argss) > 1:
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(processes=workers) as pool:
            for res in pool.imap(fn, argss):
                results.append(res)
                if merge is not None:
                    merge(res)
    else:
        for args in argss:
            res = fn(args)
            results.append(res)
            if merge is not None:
                merge(res)
    return results


# --- Erdos mean of the least non-residue ---------------------------------

@dataclass(frozen=True)
class ErdosMean:
    x: int
    primes: int
    mean: float
    constant_partial: float


def erdos_constant(tail_bound: float = 1e-12) -> float:
    """Sum of p_k / 2**k over the primes in order, truncated at the first
    k with p_k / 2**(k-1) < tail_bound.

    Terms decay geometrically (p_k grows polynomially against the 2**k),
    so the stated stopping rule leaves a tail comparable to tail_bound.
    """
    if tail_bound <= 0.0:
        raise ParameterError(f"need tail_bound > 0, got {tail_bound}")
    limit = 512
    while True:
        total = 0.0
        for k, p in enumerate(_prime_list(limit), start=1):
            total += p / 2.0**k
            if p / 2.0 ** (k - 1) < tail_bound:
                return total
        limit *= 2


def erdos_constant_partial(terms: int) -> float:
    """Sum of the first `terms` terms p_k / 2**k."""
    if terms < 1:
        raise ParameterError(f"need terms >= 1, got {terms}")
    limit = 512
    while True:
        ps = _prime_list(limit)
        if len(ps) >= terms:
            return math.fsum(p / 2.0**k for k, p in enumerate(ps[:terms], start=1))
        limit *= 2


@lru_cache(maxsize=4)
def _prime_list(limit: int) -> tuple[int, ...]:
    return tuple(primes_in(2, limit).tolist())


def _scan_erdos_block(args: tuple[int, int]) -> tuple[int, int]:
    lo, hi = args
    count = 0
    total = 0
    for p in primes_in(lo, hi).tolist():
        if p == 2:
            continue
        count += 1
        total += least_nonresidue(p)
    return count, total


def erdos_mean_curve(xs: Sequence[int], workers: int = 1) -> list[ErdosMean]:
    """Means of least_nonresidue over odd primes p <= x, for every x in
    xs, from a single scan up to max(xs).

    p = 2 is excluded throughout: there is no non-residue mod 2, and the
    prime counts reported are the primes actually scanned.  Results come
    back sorted by x with duplicates collapsed.
    """
    points = sorted({int(x) for x in xs})
    if not points:
        raise ParameterError("need at least one x")
    if points[0] < 3:
        raise ParameterError(f"need x >= 3, got {points[0]}")
    if points[-1] > ERDOS_X_BUDGET:
        raise ResourceError(f"x = {points[-1]} exceeds the budget of {ERDOS_X_BUDGET}")
    blocks = _blocks(3, points[-1], edges=points)
    results = _map_blocks(_scan_erdos_block, blocks, workers)
    constant = erdos_constant()
    out = []
    count = 0
    total = 0
    next_point = 0
    for (lo, hi), (c, t) in zip(blocks, results):
        count += c
        total += t
        while next_point < len(points) and hi == points[next_point]:
            out.append(ErdosMean(points[next_point], count, total / count, constant))
            next_point += 1
    return out


def erdos_mean(x: int, workers: int = 1) -> ErdosMean:
    """Mean of least_nonresidue over odd primes p <= x."""
    return erdos_mean_curve([x], workers)[0]


# --- Exceptional-set density ---------------------------------------------

@dataclass(frozen=True)
class ExceptionalDensity:
    """Primes p in [Q, 2Q] whose window [u+1, u+h] holds no non-residue.

    witness_list carries the first WITNESS_CAP exceptional primes in
    ascending order.  u_exceeds_2q flags runs outside the u <= 2Q range
    that the dyadic framing assumes; such runs are allowed but marked.
    """

    Q: int
    u: int
    h: int
    exceptional: int
    total_primes: int
    density: float
    witness_list: tuple[int, ...]
    u_exceeds_2q: bool


class ExceptionalState(NamedTuple):
    """Resumable scan progress: blocks [0, next_block) are merged.

    hits holds (p, d) for every prime seen so far with d > min(h grid),
    where d is first_nonresidue_after capped at max(h grid) + 1.
    """

    next_block: int
    total: int
    hits: tuple[tuple[int, int], ...]


def _check_q_range(Q: int) -> None:
    if Q < 10:
        raise ParameterError(f"need Q >= 10, got {Q}")


def exceptional_blocks(Q: int) -> list[tuple[int, int]]:
    """The fixed block partition of [Q, 2Q]; identical for every worker
    count, and the unit of checkpoint granularity."""
    _check_q_range(Q)
    return _blocks(Q, 2 * Q)


def _scan_exceptional_block(args: tuple[int, int, int, int, int]) -> tuple[int, list]:
    lo, hi, u, h_min, h_cap = args
    total = 0
    hits = []
    for p in primes_in(lo, hi).tolist():
        total += 1
        base = u % p
        d = h_cap + 1
        for step in range(1, h_cap + 1):
            if jacobi((base + step) % p, p) == -1:
                d = step
                break
        if d > h_min:
            hits.append((p, d))
    return total, hits


def exceptional_density_sweep(
    Q: int,
    u: int,
    h_list: Sequence[int],
    workers: int = 1,
    *,
    witness_cap: int = WITNESS_CAP,
    resume: ExceptionalState | None = None,
    block_done: Callable[[ExceptionalState], None] | None = None,
) -> list[ExceptionalDensity]:
    """One scan of [Q, 2Q], reported at every h in h_list (ascending).

    d = first_nonresidue_after(p, u) is evaluated once per prime, capped
    just past max(h_list), and each requested h counts the primes with
    d > h.  resume and block_done expose the scan's block progress so a
    caller can persist and restart long runs; both speak ExceptionalState
    and neither changes the result.
    """
    _check_q_range(Q)
    if u < 0:
        raise ParameterError(f"need u >= 0, got {u}")
    hs = sorted({int(h) for h in h_list})
    if not hs:
        raise ParameterError("need at least one h")
    if hs[0] < 1:
        raise ParameterError(f"need h >= 1, got {hs[0]}")
    blocks = exceptional_blocks(Q)
    state = resume if resume is not None else ExceptionalState(0, 0, ())
    if not 0 <= state.next_block <= len(blocks):
        raise ParameterError(f"resume block {state.next_block} outside 0..{len(blocks)}")
    total = state.total
    hits = list(state.hits)
    done = state.next_block

    def merge(res):
        nonlocal total, done
        block_total, block_hits = res
        total += block_total
        hits.extend(block_hits)
        done += 1
        if block_done is not None:
            block_done(ExceptionalState(done, total, tuple(hits)))

    argss = [(lo, hi, u, hs[0], hs[-1]) for lo, hi in blocks[state.next_block :]]
    _map_blocks(_scan_exceptional_block, argss, workers, merge=merge)
    out = []
    for h in hs:
        witnesses = [p for p, d in hits if d > h]
        out.append(
            ExceptionalDensity(
                Q,
                u,
                h,
                len(witnesses),
                total,
                len(witnesses) / total,
                tuple(witnesses[:witness_cap]),
                u > 2 * Q,
            )
        )
    return out


def exceptional_density(Q: int, u: int, h: int, workers: int = 1) -> ExceptionalDensity:
    """Count primes p in [Q, 2Q] with first_nonresidue_after(p, u) > h."""
    return exceptional_density_sweep(Q, u, [h], workers)[0]


# --- Gap-tail scaling ----------------------------------------------------

class GapTailRow(NamedTuple):
    p: int
    h: int
    N_h: int
    S_h: int
    c1: float
    c2: float


@dataclass(frozen=True)
class GapTailSummary:
    rows: tuple[GapTailRow, ...]
    max_c1: float
    max_c2: float


def h_quarter_power(p: int) -> int:
    """ceil(p**(1/4)), the default window rule for tail scans."""
    return math.ceil(p**0.25)


def _scan_gap_chunk(args: tuple[tuple[int, ...], object]) -> list[GapTailRow]:
    ps, h = args
    rows = []
    for p in ps:
        hp = h(p) if callable(h) else int(h)
        n_h, s_h = gap_tail(gap_stats(p), hp)
        root = math.sqrt(p)
        rows.append(GapTailRow(p, hp, n_h, s_h, n_h * hp * hp / root, s_h * hp / root))
    return rows


def gap_tail_scan(p_list: Sequence[int], h, workers: int = 1) -> GapTailSummary:
    """Tail statistics N(h,p), S(h,p) and the normalized shapes
    c1 = N h**2 / sqrt(p), c2 = S h / sqrt(p) for each listed prime.

    h is either a fixed integer or a callable p -> h; for parallel runs
    the callable must be a module-level function (workers receive it by
    pickling), h_quarter_power being the usual choice.
    """
    ps = [int(p) for p in p_list]
    if not ps:
        raise ParameterError("need at least one prime")
    for p in ps:
        if p < 3 or p % 2 == 0:
            raise ParameterError(f"need odd primes >= 3, got {p}")
    chunks = [tuple(ps[i : i + _GAP_CHUNK]) for i in range(0, len(ps), _GAP_CHUNK)]
    argss = [(chunk, h) for chunk in chunks]
    rows = [row for chunk_rows in _map_blocks(_scan_gap_chunk, argss, workers) for row in chunk_rows]
    return GapTailSummary(tuple(rows), max(r.c1 for r in rows), max(r.c2 for r in rows))


# --- Square-free pair density --------------------------------------------

A_PARTIAL_CUTOFF = 10**6


@lru_cache(maxsize=8)
def _feller_tornier_partial(cutoff: int) -> float:
    return feller_tornier_A(cutoff)


@dataclass(frozen=True)
class SquarefreePairDensity:
    u: int
    h: int
    count: int
    pair_count: int
    expected: float
    ratio: float


def squarefree_pair_density(u: int, h: int) -> SquarefreePairDensity:
    """pair_count over [u+1, u+h] against the prediction A * h, with A
    the partial product of (1 - 2/p**2) taken to 10**6."""
    window = squarefree_in_interval(u, h)
    expected = _feller_tornier_partial(A_PARTIAL_CUTOFF) * h
    return SquarefreePairDensity(u, h, window.count, window.pair_count, expected, window.pair_count / expected)


# --- Numeric trace of the bound chain ------------------------------------

@dataclass(frozen=True)
class TraceReport:
    """Every intermediate quantity of the exceptional-count bound chain,
    evaluated exactly at one (Q, u, h, eta).

    The chain: exceptional * (N_size - 1)**2 <= S_direct <= S_rough, and
    S_rough splits into the square-product part (bounded by
    T * rough_size) plus the remainder.  rhs_terms holds the three terms
    of the final displayed bound with all absolute constants dropped, so
    they indicate scale, not a provable ceiling.
    """

    Q: int
    u: int
    h: int
    eta: float
    M: int
    regime: str
    forced_regime: bool
    class_mod4: int
    N_size: int
    T: int
    rough_size: int
    exceptional: int
    S_direct: int
    S_rough: int
    square_pair_sum: int
    nonsquare_pair_sum: int
    square_pair_bound: int
    exceptional_bound: float
    rhs_terms: dict[str, float]
    h_exceeds_log_q: bool
    u_exceeds_2q: bool
    notes: tuple[str, ...]


def _square_product_pairs(ns: Sequence[int]) -> list[tuple[int, int]]:
    """Ordered index pairs (i, j) with ns[i] * ns[j] a perfect square.

    Write n1 = k1 d and n2 = k2 d with d = gcd(n1, n2); k1 and k2 are
    coprime, so the product k1 k2 d**2 is a square exactly when k1 and
    k2 both are.  Everything is integer-exact.
    """
    pairs = []
    for i, a in enumerate(ns):
        for j, b in enumerate(ns):
            d = math.gcd(a, b)
            if is_perfect_square(a // d) and is_perfect_square(b // d):
                pairs.append((i, j))
    return pairs


def proof_trace(Q: int, u: int, h: int, eta: float) -> TraceReport:
    """Evaluate the whole bound chain at desk scale.

    The set N follows the two-regime construction: for h at or above
    sqrt(u)/log u, the larger residue class mod 4 among the square-free
    integers in [u+1, u+h] (ties to the class of 1); below it, every
    n = 1 mod 4 in the window.  u < 3 forces the large-h regime since
    log u is no use there.  The extension set is the rough set with
    M = 2Q, which keeps every prime of [Q, 2Q] a member; that requires
    2 <= (2Q)**eta < Q (the lower end keeps the set odd, so the symbols
    exist), and h < Q so a window meets each prime's multiples at most
    once.  All sums are exact integers; only the rhs_terms are floating
    point.
    """
    _check_q_range(Q)
    if u < 0:
        raise ParameterError(f"need u >= 0, got {u}")
    if h < 1:
        raise ParameterError(f"need h >= 1, got {h}")
    if h >= Q:
        raise ParameterError(f"need h < Q for the one-multiple-per-window bound, got h={h}, Q={Q}")
    M = 2 * Q
    cutoff = rough_threshold(eta, M)
    if cutoff >= Q:
        raise ParameterError(f"(2Q)**eta must stay below Q for eta={eta}, Q={Q}")
    if cutoff < 2:
        raise ParameterError(
            f"(2Q)**eta must reach 2 so the extension set is odd, got eta={eta}, Q={Q}"
        )
    notes = [f"extension set P(eta, M) uses M = 2Q = {M}"]
    if u < 3:
        regime = "large-h"
        forced = True
        notes.append("u < 3 forces the large-h regime")
    else:
        threshold = math.sqrt(u) / math.log(u)
        regime = "large-h" if h >= threshold else "small-h"
        forced = False
    if regime == "large-h":
        window = squarefree_in_interval(u, h)
        n1 = window.members_mod4(1)
        n3 = window.members_mod4(3)
        if n3.size > n1.size:
            members, class_mod4 = n3, 3
        else:
            members, class_mod4 = n1, 1
            if n3.size == n1.size:
                notes.append("class sizes tied; resolved to the class of 1 mod 4")
        ns = members.tolist()
    else:
        class_mod4 = 1
        first = u + 1 + (1 - (u + 1)) % 4
        ns = list(range(first, u + h + 1, 4))
    if len(ns) < 2:
        raise DegenerateSetError(f"chosen set has {len(ns)} members; need at least 2")

    primes = primes_in(Q, 2 * Q).tolist()
    s_direct = 0
    exceptional = 0
    for p in primes:
        acc = 0
        for n in ns:
            acc += jacobi(n % p, p)
        s_direct += acc * acc
        base = u % p
        for step in range(1, h + 1):
            if jacobi((base + step) % p, p) == -1:
                break
        else:
            exceptional += 1

    rough = rough_set(eta, M)
    members_list = rough.members.tolist()
    s_rough = 0
    for m in members_list:
        acc = 0
        for n in ns:
            acc += jacobi(n % m, m)
        s_rough += acc * acc

    pairs = _square_product_pairs(ns)
    coprime_cache: dict[int, int] = {}
    square_pair_sum = 0
    for i, j in pairs:
        q_pair = ns[i] * ns[j]
        if q_pair not in coprime_cache:
            if q_pair < 2**63:
                hit = int(np.count_nonzero(np.gcd(rough.members, np.int64(q_pair)) == 1))
            else:
                hit = sum(1 for m in members_list if math.gcd(m, q_pair) == 1)
            coprime_cache[q_pair] = hit
        square_pair_sum += coprime_cache[q_pair]

    n_size = len(ns)
    t_count = len(pairs)
    denom = (n_size - 1) ** 2
    rhs_terms = {
        "square_product_term": Q * t_count / (eta * denom * math.log(Q)),
        "charsum_main_term": h * h * eta ** (eta**-0.5 / 4.0 - 1.0) * Q / (denom * math.log(M)),
        "charsum_remainder_term": h * h * Q ** (1.0 - eta) / denom,
    }
    if h > math.log(Q):
        notes.append("window length exceeds log Q; outside the normalized range")
    if u > M:
        notes.append("u exceeds 2Q; outside the dyadic framing")
    return TraceReport(
        Q=Q,
        u=u,
        h=h,
        eta=eta,
        M=M,
        regime=regime,
        forced_regime=forced,
        class_mod4=class_mod4,
        N_size=n_size,
        T=t_count,
        rough_size=rough.count,
        exceptional=exceptional,
        S_direct=s_direct,
        S_rough=s_rough,
        square_pair_sum=square_pair_sum,
        nonsquare_pair_sum=s_rough - square_pair_sum,
        square_pair_bound=t_count * rough.count,
        exceptional_bound=s_direct / denom,
        rhs_terms=rhs_terms,
        h_exceeds_log_q=h > math.log(Q),
        u_exceeds_2q=u > M,
        notes=tuple(notes),
    )

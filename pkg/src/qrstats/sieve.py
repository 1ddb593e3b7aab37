"""Prime generation, factor tables, rough numbers, square-free windows,
and the Euler products used as comparison terms.

All sieves are numpy boolean arrays.  Returned arrays are treated as
immutable after construction and can be shared freely across processes.
Memory budgets are enforced up front so a typo in an exponent raises a
ResourceError instead of thrashing the machine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .errors import (
    FactorizationError,
    ParameterError,
    RangeError,
    ResourceError,
)

EULER_GAMMA = float(np.euler_gamma)

MAX_ENDPOINT = 2**63 - 1
SEGMENT = 1 << 20
SPAN_BUDGET = 10**9
TABLE_BUDGET = 10**8

_TRIAL_LIMIT = 10**6

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def primes_upto(n: int) -> np.ndarray:
    """All primes <= n in ascending order, by a plain sieve of
    Eratosthenes over a numpy boolean array."""
    if n > TABLE_BUDGET:
        raise ResourceError(f"prime table up to {n} exceeds the budget of {TABLE_BUDGET}")
    if n < 2:
        return np.empty(0, dtype=np.int64)
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


def primes_in(lo: int, hi: int) -> np.ndarray:
    """Primes p with lo <= p <= hi, ascending, via a segmented sieve.

    Segments of 2**20 values stay cache resident; base primes run up to
    the square root of hi.  The span hi - lo is capped at 10**9.
    """
    if hi > MAX_ENDPOINT:
        raise RangeError(f"endpoint {hi} exceeds the supported range")
    if lo < 2 or hi < lo:
        raise ParameterError(f"need 2 <= lo <= hi, got lo={lo} hi={hi}")
    if hi - lo > SPAN_BUDGET:
        raise ResourceError(f"span {hi - lo} exceeds the budget of {SPAN_BUDGET}")
    base = primes_upto(math.isqrt(hi))
    chunks = []
    for seg_lo in range(lo, hi + 1, SEGMENT):
        seg_hi = min(seg_lo + SEGMENT - 1, hi)
        mask = np.ones(seg_hi - seg_lo + 1, dtype=bool)
        for p in base.tolist():
            start = max(p * p, ((seg_lo + p - 1) // p) * p)
            if start <= seg_hi:
                mask[start - seg_lo :: p] = False
        if seg_lo < 2:
            mask[: 2 - seg_lo] = False
        chunks.append(np.flatnonzero(mask).astype(np.int64) + seg_lo)
    return np.concatenate(chunks)


def spf_table(M: int) -> np.ndarray:
    """Smallest-prime-factor table: out[m] for 2 <= m <= M, out[0:2] = 0.

    Built by the usual masked-view trick: for each prime p the strided
    view out[p*p::p] gets p written wherever no smaller prime claimed the
    slot first.
    """
    if M < 1:
        raise ParameterError(f"need M >= 1, got {M}")
    if M > TABLE_BUDGET:
        raise ResourceError(f"factor table up to {M} exceeds the budget of {TABLE_BUDGET}")
    spf = np.zeros(M + 1, dtype=np.int32)
    for p in range(2, math.isqrt(M) + 1):
        if spf[p] == 0:
            view = spf[p * p :: p]
            view[view == 0] = p
    unset = np.flatnonzero(spf[2:] == 0).astype(np.int64) + 2
    spf[unset] = unset
    return spf


def is_prime_u64(n: int) -> bool:
    """Deterministic Miller-Rabin with the first twelve prime bases,
    correct for all n < 3.3 * 10**24 and therefore for 64-bit inputs."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _int_nth_root(x: int, n: int) -> int:
    """Largest integer r with r**n <= x, by Newton iteration on ints."""
    if x < 0 or n < 1:
        raise ParameterError("nth root needs x >= 0 and n >= 1")
    if x == 0 or n == 1:
        return x
    r = 1 << -(-x.bit_length() // n)
    while True:
        nr = ((n - 1) * r + x // r ** (n - 1)) // n
        if nr >= r:
            break
        r = nr
    while r ** n > x:
        r -= 1
    while (r + 1) ** n <= x:
        r += 1
    return r


_EXACT_DENOM_LIMIT = 1 << 12


def rough_threshold(eta: float, M: int) -> int:
    """Largest integer t with t <= M**eta, where eta is taken at its exact
    binary64 value.

    The float eta is a dyadic rational a / 2**s.  When 2**s is small the
    comparison t**(2**s) <= M**a is settled in exact integer arithmetic.
    Otherwise M**eta is evaluated with mpmath at escalating precision
    until the floor is unambiguous; an exact tie in that branch would
    force M to be a perfect 2**s-th power with s > 12, which no M below
    2**64 can be, so the escalation always terminates.
    """
    if not 0.0 < eta < 1.0:
        raise ParameterError(f"need 0 < eta < 1, got {eta}")
    if M < 1:
        raise ParameterError(f"need M >= 1, got {M}")
    num, den = float(eta).as_integer_ratio()
    if den <= _EXACT_DENOM_LIMIT:
        return _int_nth_root(M**num, den)
    import mpmath

    prec = 128
    while prec <= 1 << 20:
        with mpmath.workprec(prec):
            t = mpmath.power(M, mpmath.mpf(eta))
            margin = t * mpmath.mpf(2) ** (16 - prec)
            lo = mpmath.floor(t - margin)
            hi = mpmath.floor(t + margin)
            if lo == hi:
                return int(lo)
        prec *= 2
    raise ArithmeticError(f"threshold M**eta would not stabilize for eta={eta}, M={M}")


@dataclass(frozen=True, eq=False)
class RoughSet:
    """Integers in [1, M] with no prime factor p <= M**eta.

    members is ascending and always starts at 1.  cutoff is the exact
    integer threshold: primes <= cutoff are sieved out, and a prime equal
    to M**eta exactly is excluded from the set.  ratio_c0 is
    count * eta * log(M) / M, the count measured against M/(eta log M).
    """

    eta: float
    M: int
    cutoff: int
    members: np.ndarray
    ratio_c0: float

    @property
    def count(self) -> int:
        return int(self.members.size)


def rough_set(eta: float, M: int) -> RoughSet:
    """Sieve [1, M] down to the integers free of primes <= M**eta."""
    if M < 2:
        raise ParameterError(f"need M >= 2, got {M}")
    cutoff = rough_threshold(eta, M)
    mask = np.ones(M + 1, dtype=bool)
    mask[0] = False
    for p in primes_upto(min(cutoff, M)).tolist():
        mask[p::p] = False
    members = np.flatnonzero(mask).astype(np.int64)
    ratio_c0 = members.size * eta * math.log(M) / M
    return RoughSet(eta, M, cutoff, members, ratio_c0)


class MertensProduct(NamedTuple):
    product: float
    normalized: float


def mertens_product(y: float) -> MertensProduct:
    """The product of (1 - 1/p) over primes p <= y.

    Accumulated as compensated summation of log1p terms (math.fsum), then
    exponentiated, so the result does not drift with the number of
    factors.  normalized is product * e**gamma * log y, which tends to 1.
    """
    if y < 2:
        raise ParameterError(f"need y >= 2, got {y}")
    logs = [math.log1p(-1.0 / p) for p in primes_upto(int(math.floor(y))).tolist()]
    product = math.exp(math.fsum(logs))
    return MertensProduct(product, product * math.exp(EULER_GAMMA) * math.log(y))


def feller_tornier_A(p_max: int) -> float:
    """Partial Euler product of (1 - 2/p**2) over primes p <= p_max,
    the density constant for pairs of adjacent square-free integers."""
    if p_max < 2:
        raise ParameterError(f"need p_max >= 2, got {p_max}")
    logs = [math.log1p(-2.0 / (p * p)) for p in primes_upto(p_max).tolist()]
    return math.exp(math.fsum(logs))


@dataclass(frozen=True, eq=False)
class SquarefreeWindow:
    """Square-free integers in the window [u+1, u+h], plus the count of
    n in the window with n and n+1 both square-free."""

    u: int
    h: int
    members: np.ndarray
    pair_count: int

    @property
    def count(self) -> int:
        return int(self.members.size)

    def odd_members(self) -> np.ndarray:
        return self.members[self.members % 2 == 1]

    def members_mod4(self, r: int) -> np.ndarray:
        """Members congruent to r mod 4."""
        return self.members[self.members % 4 == r % 4]


def squarefree_in_interval(u: int, h: int) -> SquarefreeWindow:
    """Sieve the window [u+1, u+h] by squares of primes up to
    sqrt(u+h+1); one extra flag past the window settles the pair count."""
    if u < 0:
        raise ParameterError(f"need u >= 0, got {u}")
    if h < 1:
        raise ParameterError(f"need h >= 1, got {h}")
    top = u + h + 1
    if top > MAX_ENDPOINT:
        raise RangeError(f"window endpoint {top} exceeds the supported range")
    if h > SPAN_BUDGET:
        raise ResourceError(f"window length {h} exceeds the budget of {SPAN_BUDGET}")
    if math.isqrt(top) > TABLE_BUDGET:
        raise ResourceError(f"window endpoint {top} needs a prime table over budget")
    lo = u + 1
    flags = np.ones(h + 1, dtype=bool)
    for p in primes_upto(math.isqrt(top)).tolist():
        q = p * p
        start = ((lo + q - 1) // q) * q
        if start <= top:
            flags[start - lo :: q] = False
    members = np.flatnonzero(flags[:-1]).astype(np.int64) + lo
    pair_count = int(np.count_nonzero(flags[:-1] & flags[1:]))
    return SquarefreeWindow(u, h, members, pair_count)


def distinct_prime_factors(q: int) -> list[int]:
    """Distinct primes dividing q, ascending.

    Trial division runs up to 10**6; the remaining cofactor must be 1, a
    prime, or the square of a prime (certified by deterministic
    Miller-Rabin), otherwise a FactorizationError is raised.
    """
    if q < 1:
        raise ParameterError(f"need q >= 1, got {q}")
    out = []
    rem = q
    if rem % 2 == 0:
        out.append(2)
        while rem % 2 == 0:
            rem //= 2
    p = 3
    while p * p <= rem and p <= _TRIAL_LIMIT:
        if rem % p == 0:
            out.append(p)
            while rem % p == 0:
                rem //= p
        p += 2
    if rem == 1:
        return out
    if is_prime_u64(rem):
        out.append(rem)
        return out
    r = math.isqrt(rem)
    if r * r == rem and is_prime_u64(r):
        out.append(r)
        return out
    raise FactorizationError(f"cofactor {rem} of {q} is neither 1, prime, nor a prime square")


class CoprimeCount(NamedTuple):
    count: int
    main_term: float
    residual: float


def coprime_count(M: int, q: int) -> CoprimeCount:
    """Exact count of m <= M coprime to q, by inclusion-exclusion over
    the distinct prime factors of q.

    main_term is phi(q) * M / q, evaluated as an exact rational before
    conversion; residual = count - main_term is bounded in absolute value
    by 2**omega(q), with omega the number of distinct prime factors.
    """
    if M < 1:
        raise ParameterError(f"need M >= 1, got {M}")
    primes = distinct_prime_factors(q) if q > 1 else []
    count = 0
    for bits in range(1 << len(primes)):
        d = 1
        sign = 1
        for i, p in enumerate(primes):
            if bits >> i & 1:
                d *= p
                sign = -sign
        count += sign * (M // d)
    phi = q
    for p in primes:
        phi = phi // p * (p - 1)
    main = Fraction(phi * M, q)
    return CoprimeCount(count, float(main), float(count - main))

"""Incomplete character sums for the quadratic symbol and their
comparison against the classical cancellation benchmarks.

Sums are exact integers.  The benchmark M**(1 - 1/nu) * q**((nu+1)/(4 nu**2))
is evaluated in floating point with every o(1) and multiplicative
constant dropped, so observed/benchmark ratios are reported rather than
asserted against any particular constant.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from typing import NamedTuple

from .arith import is_perfect_square, jacobi
from .errors import (
    InvalidModulusError,
    ParameterError,
    PerfectSquareModulusError,
    ScanError,
)
from .rng import XorShift64Star
from .sieve import RoughSet, mertens_product, rough_set


def _check_modulus(q: int) -> None:
    if q < 3 or q % 2 == 0:
        raise InvalidModulusError(f"modulus must be odd and >= 3, got {q}")


def incomplete_char_sum(M: int, q: int) -> int:
    """Exact value of sum_{m=1..M} (m|q).

    The symbol has period q in m, so the sum over each full period is
    computed once and reused; only the final partial period is summed
    directly.  For M >= q this turns the cost from O(M) into O(q).
    """
    _check_modulus(q)
    if M < 0:
        raise ParameterError(f"need M >= 0, got {M}")
    full, rem = divmod(M, q)
    tail = sum(jacobi(m, q) for m in range(1, rem + 1))
    if full == 0:
        return tail
    period = tail + sum(jacobi(m, q) for m in range(rem + 1, q + 1))
    return full * period + tail


def burgess_exponent(nu: int) -> float:
    """(nu + 1) / (4 nu**2): one half, 3/16, 1/9 for nu = 1, 2, 3."""
    if nu < 1:
        raise ParameterError(f"need nu >= 1, got {nu}")
    return (nu + 1) / (4 * nu * nu)


@dataclass(frozen=True)
class CharSumReport:
    """One incomplete sum next to its cancellation benchmark.

    ratio = |sum| / benchmark.  nu_beyond_classical flags nu > 3, where
    the benchmark shape is only justified for restricted moduli; the
    value is still reported.
    """

    M: int
    q: int
    nu: int
    sum: int
    benchmark: float
    ratio: float
    nu_beyond_classical: bool


def burgess_report(M: int, q: int, nu: int = 2) -> CharSumReport:
    """Evaluate the sum to M and compare against
    M**(1 - 1/nu) * q**((nu+1)/(4 nu**2))."""
    _check_modulus(q)
    if is_perfect_square(q):
        raise PerfectSquareModulusError(f"q={q} is a perfect square; the symbol is principal")
    if M < 1:
        raise ParameterError(f"need M >= 1, got {M}")
    s = incomplete_char_sum(M, q)
    benchmark = M ** (1.0 - 1.0 / nu) * q ** burgess_exponent(nu)
    return CharSumReport(M, q, nu, s, benchmark, abs(s) / benchmark, nu > 3)


class SweepSummary(NamedTuple):
    reports: tuple[CharSumReport, ...]
    max_ratio: float
    median_ratio: float


def default_sweep_length(q: int) -> int:
    """ceil(q**(2/3)), the sum length used by seeded sweeps when no M is
    given: long enough to be non-trivial, short inside the cancellation
    range for nu = 2."""
    return math.ceil(q ** (2.0 / 3.0))


def burgess_sweep(
    count: int,
    q_lo: int,
    q_hi: int,
    nu: int = 2,
    seed: int = 1,
    M: int | None = None,
) -> SweepSummary:
    """Draw `count` odd non-square moduli from [q_lo, q_hi] with the
    package generator and report each ratio plus the max and median.

    The draw rule is fixed: uniform in the range, even values nudged up
    by one (down by two on overflow), perfect squares redrawn.  With M
    omitted each modulus uses default_sweep_length(q).
    """
    if count < 1:
        raise ParameterError(f"need count >= 1, got {count}")
    if q_lo < 3:
        raise ParameterError(f"need q_lo >= 3, got {q_lo}")
    if q_hi - q_lo < 3:
        raise ParameterError(f"range [{q_lo}, {q_hi}] too narrow to sample")
    rng = XorShift64Star(seed)
    reports = []
    for _ in range(count):
        q = rng.draw_odd_nonsquare(q_lo, q_hi)
        length = default_sweep_length(q) if M is None else M
        reports.append(burgess_report(length, q, nu))
    ratios = [r.ratio for r in reports]
    return SweepSummary(tuple(reports), max(ratios), statistics.median(ratios))


@dataclass(frozen=True)
class RoughPartition:
    """Symbol values over a rough set, split into +1, -1, and 0 counts.

    main_term is (1/2) * M * prod_{p <= M**eta} (1 - 1/p), the expected
    size of either nonzero class; deviation_plus and deviation_minus are
    the observed counts minus that.  error_scale is
    eta**(eta**(-1/2)/4 - 1) * M / log M, the shape each deviation is
    measured against (constants dropped), as ratio_plus and ratio_minus.
    """

    eta: float
    M: int
    q: int
    count_plus: int
    count_minus: int
    count_zero: int
    main_term: float
    deviation_plus: float
    deviation_minus: float
    error_scale: float

    @property
    def total(self) -> int:
        return self.count_plus + self.count_minus + self.count_zero

    @property
    def ratio_plus(self) -> float:
        return self.deviation_plus / self.error_scale

    @property
    def ratio_minus(self) -> float:
        return self.deviation_minus / self.error_scale


def rough_error_scale(eta: float, M: int) -> float:
    """eta**(eta**(-1/2)/4 - 1) * M / log M."""
    if not 0.0 < eta < 1.0:
        raise ParameterError(f"need 0 < eta < 1, got {eta}")
    if M < 2:
        raise ParameterError(f"need M >= 2, got {M}")
    return eta ** (eta**-0.5 / 4.0 - 1.0) * M / math.log(M)


def rough_partition(eta: float, M: int, q: int, *, rough: RoughSet | None = None) -> RoughPartition:
    """Classify every member of the rough set by its symbol mod q.

    Pass a precomputed rough_set(eta, M) to share the sieve across many
    moduli; it must match eta and M exactly.
    """
    _check_modulus(q)
    rs = rough if rough is not None else rough_set(eta, M)
    if rs.eta != eta or rs.M != M:
        raise ParameterError("precomputed rough set does not match eta and M")
    plus = minus = zero = 0
    for m in rs.members.tolist():
        s = jacobi(m % q, q)
        if s == 1:
            plus += 1
        elif s == -1:
            minus += 1
        else:
            zero += 1
    prod = mertens_product(rs.cutoff).product if rs.cutoff >= 2 else 1.0
    main = 0.5 * M * prod
    return RoughPartition(
        eta,
        M,
        q,
        plus,
        minus,
        zero,
        main,
        plus - main,
        minus - main,
        rough_error_scale(eta, M),
    )


def rough_char_sum(eta: float, M: int, q: int, *, rough: RoughSet | None = None) -> int:
    """Sum of (m|q) over the rough set, via the partition identity
    plus_count - minus_count; a direct second pass re-derives the value
    and any mismatch is a scan error."""
    _check_modulus(q)
    if is_perfect_square(q):
        raise PerfectSquareModulusError(f"q={q} is a perfect square; the sum counts coprimality")
    rs = rough if rough is not None else rough_set(eta, M)
    part = rough_partition(eta, M, q, rough=rs)
    value = part.count_plus - part.count_minus
    direct = sum(jacobi(m % q, q) for m in rs.members.tolist())
    if direct != value:
        raise ScanError("partition bookkeeping disagrees with direct summation")
    return value

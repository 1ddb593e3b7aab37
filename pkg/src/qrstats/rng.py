"""Deterministic 64-bit generator for seeded sweeps.

This is Marsaglia's xorshift64* with the classic 12/25/27 shift triple.
It is tiny, has no hidden state, and produces the same stream on every
platform and Python version, which is what makes seeded sweeps in the
command line tool byte-reproducible.  It is not a cryptographic
generator and is not meant to be one.
"""

from .arith import is_perfect_square

_MASK64 = (1 << 64) - 1
_ZERO_SEED_REPLACEMENT = 0x9E3779B97F4A7C15
_OUTPUT_MULTIPLIER = 0x2545F4914F6CDD1D


class XorShift64Star:
    """xorshift64* stream.

    state <- state ^ (state >> 12)
    state <- state ^ (state << 25), keeping 64 bits
    state <- state ^ (state >> 27)
    output = state * 0x2545F4914F6CDD1D mod 2**64

    A seed of 0 (mod 2**64) would pin the register at zero forever, so it
    is replaced by the fixed odd constant 0x9E3779B97F4A7C15.
    """

    def __init__(self, seed: int):
        self.state = seed & _MASK64 or _ZERO_SEED_REPLACEMENT

    def next_u64(self) -> int:
        s = self.state
        s ^= s >> 12
        s ^= (s << 25) & _MASK64
        s ^= s >> 27
        self.state = s
        return (s * _OUTPUT_MULTIPLIER) & _MASK64

    def below(self, n: int) -> int:
        """Next draw reduced modulo n, for n >= 1.

        Plain modular reduction: the bias for the n used here (well under
        2**40) is far below anything these sweeps can resolve, and the
        simple rule is trivial to restate in a report.
        """
        if n < 1:
            raise ValueError(f"need n >= 1, got {n}")
        return self.next_u64() % n

    def draw_in(self, lo: int, hi: int) -> int:
        """Next draw mapped to the inclusive range [lo, hi]."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        return lo + self.below(hi - lo + 1)

    def draw_odd_nonsquare(self, lo: int, hi: int) -> int:
        """Draw from [lo, hi], nudge even values up by one (and back down
        by two if that overshoots hi), and redraw perfect squares.

        The range must contain two odd numbers; no two odd squares differ
        by 2, so one of them is a non-square and the loop terminates.
        """
        if hi - lo < 3:
            raise ValueError(f"range [{lo}, {hi}] too narrow for an odd non-square")
        while True:
            q = self.draw_in(lo, hi)
            if q % 2 == 0:
                q += 1
                if q > hi:
                    q -= 2
            if not is_perfect_square(q):
                return q

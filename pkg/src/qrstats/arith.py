"""Exact integer arithmetic: Jacobi symbols, Euler's criterion, perfect
squares.

Every function here works on Python integers only.  No floating point is
used anywhere in this module, so results are bit-exact for arbitrarily
large operands.  Symbol values are plain ints restricted to {-1, 0, +1}.
"""

import math

from .errors import InvalidModulusError


def jacobi(m: int, q: int) -> int:
    """Jacobi symbol (m|q) for m >= 0 and odd q >= 1.

    Computed by the binary reduce-and-reciprocity loop: strip factors of
    two from the numerator (flipping sign when q is 3 or 5 mod 8), swap
    via quadratic reciprocity (flipping when both sides are 3 mod 4), and
    reduce.  Returns 0 exactly when gcd(m, q) > 1; jacobi(m, 1) == 1 for
    every m, the empty product.
    """
    if q < 1 or q % 2 == 0:
        raise InvalidModulusError(f"jacobi modulus must be odd and positive, got {q}")
    if m < 0:
        raise ValueError(f"jacobi numerator must be non-negative, got {m}")
    m %= q
    sign = 1
    while m:
        while m % 2 == 0:
            m //= 2
            if q % 8 in (3, 5):
                sign = -sign
        m, q = q, m
        if m % 4 == 3 and q % 4 == 3:
            sign = -sign
        m %= q
    return sign if q == 1 else 0


def legendre_euler(m: int, p: int) -> int:
    """Legendre symbol (m|p) by Euler's criterion: m**((p-1)/2) mod p.

    Deliberately shares no code with jacobi so the two can check each
    other.  p must be an odd prime; that precondition is not verified
    here, and for composite p the value is undefined.
    """
    if p < 1 or p % 2 == 0:
        raise InvalidModulusError(f"legendre modulus must be odd and positive, got {p}")
    if m < 0:
        raise ValueError(f"legendre numerator must be non-negative, got {m}")
    r = pow(m, (p - 1) // 2, p)
    if r == p - 1:
        return -1
    return r


def powmod(base: int, exp: int, modulus: int) -> int:
    """base**exp mod modulus for base, exp >= 0 and modulus >= 1.

    Thin wrapper over the built-in three-argument pow, which is exact for
    arbitrary magnitudes; exists so callers get the package's argument
    checking and error types.
    """
    if modulus < 1:
        raise InvalidModulusError(f"modulus must be positive, got {modulus}")
    if base < 0 or exp < 0:
        raise ValueError("base and exponent must be non-negative")
    return pow(base, exp, modulus)


def is_perfect_square(n: int) -> bool:
    """True iff n == k*k for some integer k, decided exactly.

    Uses the integer square root, never floating point, so values near
    2**53 and far beyond are classified correctly.
    """
    if n < 0:
        raise ValueError(f"expected a non-negative integer, got {n}")
    r = math.isqrt(n)
    return r * r == n

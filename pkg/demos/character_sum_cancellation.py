# Incomplete character sums cancel.  Summing the Jacobi symbol (m|q) for
# m up to M ~ q^(2/3) gives something far smaller than M; the classical
# benchmark is M^(1 - 1/nu) * q^((nu+1)/(4 nu^2)) and observed ratios sit
# well under 1.  Over a rough set (no small prime factors) the +1 and -1
# classes balance to the same main term.

from qrstats import (
    burgess_report,
    burgess_sweep,
    default_sweep_length,
    incomplete_char_sum,
    rough_partition,
)


def single_modulus_table():
    print("single moduli, nu = 2, M = ceil(q^(2/3)):")
    for q in (30021, 104729, 999983):
        M = default_sweep_length(q)
        rep = burgess_report(M, q)
        print(f"  q = {q:7d}  M = {M:6d}  sum = {rep.sum:6d}  benchmark = {rep.benchmark:10.1f}  ratio = {rep.ratio:.4f}")


def seeded_sweep():
    summary = burgess_sweep(count=40, q_lo=10**4, q_hi=10**6, nu=2, seed=1)
    print("\nseeded sweep, 40 odd non-square moduli in [10^4, 10^6]:")
    print(f"  max ratio:    {summary.max_ratio:.6f}")
    print(f"  median ratio: {summary.median_ratio:.6f}")
    worst = max(summary.reports, key=lambda r: r.ratio)
    print(f"  worst case: q = {worst.q}, sum = {worst.sum}, benchmark = {worst.benchmark:.1f}")


def rough_balance():
    print("\nsymbol balance over rough sets (eta = 0.25, q = 10007):")
    print("  M        +1      -1    zero   main term   dev(+)/scale")
    for M in (10**3, 10**4, 10**5):
        part = rough_partition(0.25, M, 10007)
        print(
            f"  {M:<7d} {part.count_plus:6d}  {part.count_minus:6d}  {part.count_zero:5d}"
            f"   {part.main_term:9.1f}   {part.ratio_plus:+.4f}"
        )


def main():
    print(f"warm-up: sum of (m|30021) for m <= 966 is {incomplete_char_sum(966, 30021)}")
    print()
    single_modulus_table()
    seeded_sweep()
    rough_balance()


if __name__ == "__main__":
    main()

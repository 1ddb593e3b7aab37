# Runs of consecutive residues and gaps between non-residues.  d(p) is
# the longest block of integers all classified residues mod p; the gap
# sequence Delta_k lists the spacings between successive non-residues.
# Long gaps are rare, and the tail statistic N(h,p) h^2 / sqrt(p) stays
# bounded over a whole band of primes.

from qrstats import gap_stats, gap_tail, gap_tail_scan, h_quarter_power, longest_qr_run, primes_in


def show_small_prime(p):
    stats = gap_stats(p)
    print(f"p = {p}")
    print(f"  non-residues: {stats.n_seq.tolist()}")
    print(f"  gaps:         {stats.deltas.tolist()}")
    print(f"  d(p) = {longest_qr_run(p)} cyclic, {longest_qr_run(p, zero_as_residue=False)} with 0 excluded")
    for h in (2, 3, 4):
        n_h, s_h = gap_tail(stats, h)
        print(f"  gaps >= {h}: count {n_h}, total length {s_h}")


def main():
    for p in (11, 23, 71):
        show_small_prime(p)
        print()

    lo, hi = 10**4, 2 * 10**4
    ps = [int(p) for p in primes_in(lo, hi).tolist()]
    summary = gap_tail_scan(ps, h_quarter_power, workers=4)
    print(f"tail scan over {len(ps)} primes in [{lo}, {hi}], h = ceil(p^(1/4)):")
    print(f"  max c1 = N h^2 / sqrt(p): {summary.max_c1:.4f}")
    print(f"  max c2 = S h / sqrt(p):   {summary.max_c2:.4f}")
    heavy = sorted(summary.rows, key=lambda r: r.c1, reverse=True)[:5]
    print("  five largest c1 values:")
    for r in heavy:
        print(f"    p = {r.p:6d}  h = {r.h}  N = {r.N_h:3d}  S = {r.S_h:4d}  c1 = {r.c1:.4f}")


if __name__ == "__main__":
    main()

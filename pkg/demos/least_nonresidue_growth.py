# How fast does the least quadratic non-residue n(p) grow?  Almost never
# fast: n(p) is prime, tiny for most p, and its average over p <= x
# settles toward sum(p_k / 2^k) = 3.674643966...

from collections import Counter

from qrstats import erdos_constant, erdos_mean_curve, least_nonresidue, primes_in


def value_histogram(limit):
    counts = Counter()
    for p in primes_in(3, limit).tolist():
        counts[least_nonresidue(p)] += 1
    return counts


def champions(limit):
    """Primes where n(p) sets a new record."""
    best = 0
    out = []
    for p in primes_in(3, limit).tolist():
        n = least_nonresidue(p)
        if n > best:
            best = n
            out.append((p, n))
    return out


def main():
    limit = 10**5
    counts = value_histogram(limit)
    total = sum(counts.values())
    print(f"n(p) over the {total} odd primes p <= {limit}:")
    for n in sorted(counts):
        share = counts[n] / total
        print(f"  n(p) = {n:3d}  for {counts[n]:5d} primes  ({share:7.2%})")

    print("\nrecord-setting primes:")
    for p, n in champions(limit):
        print(f"  n({p}) = {n}")

    print("\nrunning mean against the limiting constant:")
    const = erdos_constant()
    for row in erdos_mean_curve([10**3, 10**4, 10**5, 10**6]):
        print(f"  x = 10^{len(str(row.x)) - 1}:  mean {row.mean:.6f}   distance {abs(row.mean - const):.6f}")
    print(f"  constant: {const:.12f}")


if __name__ == "__main__":
    main()

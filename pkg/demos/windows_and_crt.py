# Windowed first non-residues d_u(p) and the adversarial side of the
# story.  For a random window almost every prime shows a non-residue
# within a few steps.  But d_u(p) only depends on u mod p, so the CRT
# can glue one bad window per prime into a single u that is bad for all
# of them at once; that is why density statements need the window length
# h to grow with Q.

from qrstats import (
    crt_adversarial_u,
    exceptional_density_sweep,
    first_nonresidue_after,
    primes_in,
)


def worst_window(p):
    """The u in [0, p-1] that delays the first non-residue the longest.
    d_u only depends on u mod p, so trying each class is exhaustive."""
    return max(range(p), key=lambda u: first_nonresidue_after(p, u))


def main():
    print("typical windows at p = 100003:")
    for u in (0, 17, 5000, 10**9):
        print(f"  d_u for u = {u:>10}: {first_nonresidue_after(100003, u)}")

    primes = [int(p) for p in primes_in(3, 30).tolist()]
    pairs = []
    print("\nworst window per small prime:")
    for p in primes:
        u_p = worst_window(p)
        pairs.append((p, u_p))
        print(f"  p = {p:2d}: u = {u_p:2d} delays the first non-residue to step {first_nonresidue_after(p, u_p)}")

    u = crt_adversarial_u(pairs)
    print(f"\nglued adversarial u = {u}")
    for p, u_p in pairs:
        assert first_nonresidue_after(p, u) == first_nonresidue_after(p, u_p)
        print(f"  d_u({p:2d}) = {first_nonresidue_after(p, u)}")

    Q = 10**5
    print(f"\nexceptional densities at Q = {Q} (primes in [Q, 2Q], u = 0):")
    for d in exceptional_density_sweep(Q, 0, [2, 5, 10, 15, 20], workers=4):
        print(f"  h = {d.h:2d}: {d.exceptional:5d} of {d.total_primes} primes  ({d.density:.2e})")


if __name__ == "__main__":
    main()

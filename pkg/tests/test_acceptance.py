"""Eleven acceptance checks, one per release criterion.

Each test prints a single ACCEPTANCE line (visible under pytest -s, or in
the failure report otherwise) and then asserts.  Criterion 04 is known to
fail: the mean of the least non-residue at x = 10**6 sits 0.0285 away
from its limit constant, outside the 0.02 window the criterion allows.
The check is kept honest rather than widened; see the test for the
numbers.
"""

import json

from qrstats.arith import jacobi, legendre_euler
from qrstats.charsums import burgess_sweep
from qrstats.cli import main
from qrstats.experiments import (
    erdos_mean_curve,
    exceptional_density_sweep,
    gap_tail_scan,
    h_quarter_power,
    proof_trace,
    squarefree_pair_density,
)
from qrstats.residue_scan import least_nonresidue, longest_qr_run
from qrstats.rng import XorShift64Star
from qrstats.sieve import is_prime_u64, mertens_product, primes_in

from oracles import longest_run_brute


def _report(num: int, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {num:02d} {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"criterion {num:02d}: {detail}"


def test_01_symbol_oracle_equivalence():
    primes = [int(p) for p in primes_in(3, 4999).tolist()]
    pairs = 0
    for p in primes:
        for m in range(p):
            if jacobi(m, p) != legendre_euler(m, p):
                _report(1, False, f"symbols disagree at (m, p) = ({m}, {p})")
            pairs += 1
    _report(1, True, f"jacobi matches the Euler criterion on {pairs} pairs over {len(primes)} primes below 5000")


def test_02_longest_run_brute_force():
    primes = [int(p) for p in primes_in(3, 1999).tolist()]
    for p in primes:
        for flag in (True, False):
            got = longest_qr_run(p, flag)
            want = longest_run_brute(p, flag)
            if got != want:
                _report(2, False, f"run length {got} != brute {want} at p = {p}, zero_as_residue = {flag}")
    _report(2, True, f"run lengths match exhaustive scans for {len(primes)} primes below 2000, both conventions")


def test_03_least_nonresidue_is_prime():
    primes = primes_in(3, 10**6 - 1).tolist()
    for p in primes:
        n = least_nonresidue(p)
        if not is_prime_u64(n):
            _report(3, False, f"n({p}) = {n} is composite")
    _report(3, True, f"least non-residue is prime for all {len(primes)} odd primes below 10**6")


def test_04_erdos_mean_convergence():
    curve = erdos_mean_curve([10**3, 10**4, 10**5, 10**6], workers=8)
    constant = curve[0].constant_partial
    gaps = [abs(r.mean - r.constant_partial) for r in curve]
    final_ok = gaps[-1] <= 0.02
    steps = sum(1 for a, b in zip(gaps, gaps[1:]) if a <= b)
    trend_ok = steps <= 1
    detail = (
        f"mean at 10**6 is {curve[-1].mean:.10f}, distance {gaps[-1]:.4f} to the constant "
        f"{constant:.10f} (0.02 allowed); distances {', '.join(f'{g:.4f}' for g in gaps)} "
        f"with {steps} non-decreasing steps (1 allowed)"
    )
    _report(4, final_ok and trend_ok, detail)


def test_05_exceptional_density_seeded_windows():
    Q = 10**6
    rng = XorShift64Star(1)
    us = [rng.draw_in(0, 2 * Q) for _ in range(10)]
    worst = 0.0
    for u in us:
        results = exceptional_density_sweep(Q, u, [5, 10, 20, 30], workers=8)
        counts = [r.exceptional for r in results]
        if any(a < b for a, b in zip(counts, counts[1:])):
            _report(5, False, f"counts {counts} not non-increasing in h at u = {u}")
        at_20 = results[2]
        assert at_20.h == 20
        worst = max(worst, at_20.density)
        if at_20.density >= 1e-3:
            _report(5, False, f"density {at_20.density} at h = 20, u = {u} breaches 1e-3")
    _report(5, True, f"10 seeded windows at Q = 10**6: max density at h = 20 is {worst:.3g}, every h-profile non-increasing")


def test_06_gap_tail_shape():
    cap = 26.88746367889989  # max c1 pinned by the oracle run on [10**3, 2*10**3]
    ps = [int(p) for p in primes_in(10**4, 2 * 10**4).tolist()]
    summary = gap_tail_scan(ps, h_quarter_power, workers=8)
    ok = summary.max_c1 < cap
    _report(6, ok, f"max c1 = {summary.max_c1:.6f} over {len(ps)} primes in [10**4, 2*10**4], cap {cap:.6f}")


def test_07_squarefree_pair_density():
    sf = squarefree_pair_density(10**9, 10**6)
    ok = abs(sf.ratio - 1.0) <= 0.05
    _report(7, ok, f"pair count {sf.pair_count} at u = 10**9, h = 10**6; ratio {sf.ratio:.8f} within 5% of 1")


def test_08_mertens_normalization():
    norm = mertens_product(10**6).normalized
    ok = 0.98 <= norm <= 1.02
    _report(8, ok, f"normalized Mertens product at 10**6 is {norm:.8f}, window [0.98, 1.02]")


def test_09_trace_inequalities():
    for u in (0, 10**5):
        t = proof_trace(10**5, u, 50, 0.1)
        chain = t.exceptional * (t.N_size - 1) ** 2 <= t.S_direct <= t.S_rough
        bound = t.exceptional_bound >= t.exceptional
        if not (chain and bound):
            _report(
                9,
                False,
                f"chain broken at u = {u}: exceptional {t.exceptional}, "
                f"S_direct {t.S_direct}, S_rough {t.S_rough}",
            )
    _report(9, True, "exceptional * (N-1)**2 <= S_direct <= S_rough holds exactly for both trace points")


def test_10_worker_determinism(tmp_path):
    outputs = {}
    for workers in (1, 4, 8):
        path = tmp_path / f"w{workers}.csv"
        code = main(
            [
                "exceptional",
                "--q", "1000000",
                "--u-samples", "10",
                "--seed", "1",
                "--h-list", "5,10,20,30",
                "--workers", str(workers),
                "--out", str(path),
            ]
        )
        assert code == 0
        outputs[workers] = path.read_bytes()
    ok = outputs[1] == outputs[4] == outputs[8]
    _report(10, ok, f"CSV bytes identical for workers 1, 4, 8 ({len(outputs[1])} bytes)")


def test_11_burgess_ratio_sweep():
    summary = burgess_sweep(100, 10**4, 10**6, nu=2, seed=1)
    over = [r for r in summary.reports if r.ratio >= 1.0]
    ok = not over
    _report(
        11,
        ok,
        f"100 seeded moduli in [10**4, 10**6], nu = 2: every ratio below 1; "
        f"max {summary.max_ratio:.6f}, median {summary.median_ratio:.6f}",
    )
